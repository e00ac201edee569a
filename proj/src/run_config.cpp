#include <litetrack/run_config.hpp>

#include <litetrack/errors.hpp>

#include <fstream>

namespace litetrack {
namespace {

std::string trimmed(const std::string& s) {
    const auto first = s.find_first_not_of(" \t\r\n");
    if (first == std::string::npos) {
        return "";
    }
    const auto last = s.find_last_not_of(" \t\r\n");
    return s.substr(first, last - first + 1);
}

double to_double(const std::string& key, const std::string& value) {
    try {
        std::size_t used = 0;
        const double v = std::stod(value, &used);
        if (used != value.size()) {
            throw std::invalid_argument(value);
        }
        return v;
    } catch (const std::exception&) {
        throw ConfigError("config key '" + key + "': bad numeric value '" + value + "'");
    }
}

int to_int(const std::string& key, const std::string& value) {
    return static_cast<int>(to_double(key, value));
}

} // namespace

std::vector<std::pair<std::string, std::string>> RunConfig::snapshot() const {
    std::vector<std::pair<std::string, std::string>> out;
    out.emplace_back("variant", variant);
    for (auto& kv : tracker.snapshot()) {
        out.push_back(std::move(kv));
    }
    out.emplace_back("seed", std::to_string(seed));
    out.emplace_back("det_kind", det_kind);
    if (!resolution_tag.empty()) {
        out.emplace_back("resolution", resolution_tag);
    }
    return out;
}

std::map<std::string, std::string> read_config_file(const std::filesystem::path& file) {
    std::ifstream in(file);
    if (!in) {
        throw InputError("cannot open config file " + file.string());
    }
    std::map<std::string, std::string> out;
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        const std::string t = trimmed(line);
        if (t.empty() || t[0] == '#') {
            continue;
        }
        const auto eq = t.find('=');
        if (eq == std::string::npos) {
            throw InputError(file.string() + ":" + std::to_string(line_no) +
                             ": expected key=value");
        }
        out[trimmed(t.substr(0, eq))] = trimmed(t.substr(eq + 1));
    }
    return out;
}

void apply_config_entry(RunConfig& cfg, const std::string& key, const std::string& value) {
    if (key == "variant") {
        cfg.variant = value;
    } else if (key == "n_init") {
        cfg.tracker.n_init = to_int(key, value);
    } else if (key == "max_age") {
        cfg.tracker.max_age = to_int(key, value);
    } else if (key == "min_confidence") {
        cfg.tracker.min_confidence = to_double(key, value);
    } else if (key == "max_iou_distance") {
        cfg.tracker.max_iou_distance = to_double(key, value);
    } else if (key == "max_cosine_distance") {
        cfg.tracker.max_cosine_distance = to_double(key, value);
    } else if (key == "gallery_budget") {
        cfg.tracker.gallery_budget = to_int(key, value);
    } else if (key == "gating_threshold") {
        cfg.tracker.gating_threshold = to_double(key, value);
    } else if (key == "output_raw_detections") {
        cfg.tracker.output_raw_detections = value == "1" || value == "true";
    } else if (key == "seed") {
        cfg.seed = static_cast<std::uint64_t>(to_double(key, value));
    } else if (key == "jobs") {
        cfg.jobs = to_int(key, value);
    } else if (key == "det_kind") {
        cfg.det_kind = value;
    } else if (key == "input") {
        cfg.input = value;
    } else if (key == "features") {
        cfg.features = value;
    } else if (key == "descriptors") {
        cfg.descriptors = value;
    } else if (key == "output") {
        cfg.output = value;
    } else if (key == "resolution") {
        cfg.resolution_tag = value;
    } else {
        throw ConfigError("unknown config key: " + key);
    }
}

void write_resolved_config(const std::filesystem::path& file, const RunConfig& cfg) {
    if (file.has_parent_path()) {
        std::filesystem::create_directories(file.parent_path());
    }
    std::ofstream out(file);
    if (!out) {
        throw InputError("cannot create " + file.string());
    }
    for (const auto& [key, value] : cfg.snapshot()) {
        out << key << '=' << value << '\n';
    }
    out << "jobs=" << cfg.jobs << '\n';
    if (!cfg.input.empty()) {
        out << "input=" << cfg.input << '\n';
    }
    if (!cfg.features.empty()) {
        out << "features=" << cfg.features << '\n';
    }
    if (!cfg.descriptors.empty()) {
        out << "descriptors=" << cfg.descriptors << '\n';
    }
    if (!cfg.output.empty()) {
        out << "output=" << cfg.output << '\n';
    }
}

} // namespace litetrack
