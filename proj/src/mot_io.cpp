#include <litetrack/mot_io.hpp>

#include <litetrack/errors.hpp>

#include <algorithm>
#include <bit>
#include <chrono>
#include <cstdint>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <sstream>
#include <thread>
#include <unordered_map>

static_assert(std::endian::native == std::endian::little,
              "file formats are little-endian; big-endian hosts are unsupported");

namespace litetrack::io {
namespace {

std::vector<std::string> split_csv(const std::string& line) {
    std::vector<std::string> out;
    std::string cur;
    for (char ch : line) {
        if (ch == ',') {
            out.push_back(cur);
            cur.clear();
        } else {
            cur += ch;
        }
    }
    out.push_back(cur);
    return out;
}

double parse_number(const std::string& field, const std::filesystem::path& file, int line_no) {
    const char* begin = field.c_str();
    char* end = nullptr;
    const double v = std::strtod(begin, &end);
    while (end && *end == ' ') {
        ++end;
    }
    if (end == begin || (end && *end != '\0')) {
        throw InputError(file.string() + ":" + std::to_string(line_no) +
                         ": non-numeric field '" + field + "'");
    }
    return v;
}

std::ifstream open_or_throw(const std::filesystem::path& file) {
    std::ifstream in(file);
    if (!in) {
        throw InputError("cannot open " + file.string());
    }
    return in;
}

std::ofstream create_or_throw(const std::filesystem::path& file, std::ios::openmode mode) {
    if (file.has_parent_path()) {
        std::filesystem::create_directories(file.parent_path());
    }
    std::ofstream out(file, mode);
    if (!out) {
        throw InputError("cannot create " + file.string());
    }
    return out;
}

std::string trimmed(const std::string& s) {
    const auto first = s.find_first_not_of(" \t\r\n");
    if (first == std::string::npos) {
        return "";
    }
    const auto last = s.find_last_not_of(" \t\r\n");
    return s.substr(first, last - first + 1);
}

void write_u32(std::ofstream& out, std::uint32_t v) {
    out.write(reinterpret_cast<const char*>(&v), sizeof(v));
}

std::uint32_t read_u32(std::ifstream& in, const std::filesystem::path& file) {
    std::uint32_t v = 0;
    if (!in.read(reinterpret_cast<char*>(&v), sizeof(v))) {
        throw InputError(file.string() + ": truncated header");
    }
    return v;
}

} // namespace

SequenceMeta parse_seqinfo(const std::filesystem::path& file) {
    std::ifstream in = open_or_throw(file);
    std::unordered_map<std::string, std::string> kv;
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        const std::string t = trimmed(line);
        if (t.empty() || t[0] == '[' || t[0] == ';' || t[0] == '#') {
            continue;
        }
        const auto eq = t.find('=');
        if (eq == std::string::npos) {
            throw InputError(file.string() + ":" + std::to_string(line_no) +
                             ": expected key=value");
        }
        kv[trimmed(t.substr(0, eq))] = trimmed(t.substr(eq + 1));
    }
    const auto require = [&](const std::string& key) -> const std::string& {
        const auto it = kv.find(key);
        if (it == kv.end()) {
            throw InputError(file.string() + ": missing key '" + key + "'");
        }
        return it->second;
    };
    SequenceMeta meta;
    meta.name = require("name");
    meta.image_width = static_cast<int>(parse_number(require("imWidth"), file, 0));
    meta.image_height = static_cast<int>(parse_number(require("imHeight"), file, 0));
    meta.frame_rate = parse_number(require("frameRate"), file, 0);
    meta.num_frames = static_cast<int>(parse_number(require("seqLength"), file, 0));
    if (meta.image_width <= 0 || meta.image_height <= 0 || meta.frame_rate <= 0 ||
        meta.num_frames <= 0) {
        throw InputError(file.string() + ": dimensions, frame rate and length must be positive");
    }
    return meta;
}

std::vector<GtEntry> load_gt(const std::filesystem::path& file) {
    std::ifstream in = open_or_throw(file);
    std::vector<GtEntry> out;
    std::unordered_map<int, int> last_frame_of_id;
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (trimmed(line).empty()) {
            continue;
        }
        const std::vector<std::string> f = split_csv(line);
        if (f.size() < 6) {
            throw InputError(file.string() + ":" + std::to_string(line_no) +
                             ": expected at least 6 fields");
        }
        GtEntry e;
        e.frame = static_cast<int>(parse_number(f[0], file, line_no));
        e.id = static_cast<int>(parse_number(f[1], file, line_no));
        e.box = BBox{parse_number(f[2], file, line_no), parse_number(f[3], file, line_no),
                     parse_number(f[4], file, line_no), parse_number(f[5], file, line_no)};
        e.considered = f.size() > 6 ? parse_number(f[6], file, line_no) != 0.0 : true;
        e.class_id = f.size() > 7 ? static_cast<int>(parse_number(f[7], file, line_no)) : 1;
        e.visibility = f.size() > 8 ? parse_number(f[8], file, line_no) : 1.0;
        if (e.frame <= 0) {
            throw InputError(file.string() + ":" + std::to_string(line_no) +
                             ": frame indices are 1-based");
        }
        if (!e.box.has_positive_extent()) {
            throw InputError(file.string() + ":" + std::to_string(line_no) +
                             ": box extents must be positive");
        }
        const auto it = last_frame_of_id.find(e.id);
        if (it != last_frame_of_id.end() && e.frame < it->second) {
            throw InputError(file.string() + ":" + std::to_string(line_no) +
                             ": frames must be non-decreasing within id " +
                             std::to_string(e.id));
        }
        last_frame_of_id[e.id] = e.frame;
        out.push_back(e);
    }
    return out;
}

std::vector<DetEntry> load_det(const std::filesystem::path& file) {
    std::ifstream in = open_or_throw(file);
    std::vector<DetEntry> out;
    std::string line;
    int line_no = 0;
    int prev_frame = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (trimmed(line).empty()) {
            continue;
        }
        const std::vector<std::string> f = split_csv(line);
        if (f.size() < 7) {
            throw InputError(file.string() + ":" + std::to_string(line_no) +
                             ": expected at least 7 fields");
        }
        DetEntry e;
        e.frame = static_cast<int>(parse_number(f[0], file, line_no));
        // f[1] is the id column, -1 by convention; ignored
        e.box = BBox{parse_number(f[2], file, line_no), parse_number(f[3], file, line_no),
                     parse_number(f[4], file, line_no), parse_number(f[5], file, line_no)};
        e.confidence = std::clamp(parse_number(f[6], file, line_no), 0.0, 1.0);
        if (e.frame <= 0) {
            throw InputError(file.string() + ":" + std::to_string(line_no) +
                             ": frame indices are 1-based");
        }
        if (e.frame < prev_frame) {
            throw InputError(file.string() + ":" + std::to_string(line_no) +
                             ": frames must be non-decreasing");
        }
        prev_frame = e.frame;
        if (!e.box.has_positive_extent()) {
            throw InputError(file.string() + ":" + std::to_string(line_no) +
                             ": box extents must be positive");
        }
        out.push_back(e);
    }
    return out;
}

std::vector<ResultRow> load_results(const std::filesystem::path& file) {
    std::ifstream in = open_or_throw(file);
    std::vector<ResultRow> out;
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (trimmed(line).empty()) {
            continue;
        }
        const std::vector<std::string> f = split_csv(line);
        if (f.size() < 6) {
            throw InputError(file.string() + ":" + std::to_string(line_no) +
                             ": expected at least 6 fields");
        }
        ResultRow r;
        r.frame = static_cast<int>(parse_number(f[0], file, line_no));
        r.id = static_cast<int>(parse_number(f[1], file, line_no));
        r.box = BBox{parse_number(f[2], file, line_no), parse_number(f[3], file, line_no),
                     parse_number(f[4], file, line_no), parse_number(f[5], file, line_no)};
        r.confidence = f.size() > 6 ? parse_number(f[6], file, line_no) : 1.0;
        out.push_back(r);
    }
    return out;
}

std::string format_result_line(const ResultRow& row) {
    char buf[160];
    std::snprintf(buf, sizeof(buf), "%d,%d,%.2f,%.2f,%.2f,%.2f,%.2f,-1,-1,-1\n", row.frame,
                  row.id, row.box.x, row.box.y, row.box.w, row.box.h, row.confidence);
    return buf;
}

void write_results(const std::filesystem::path& file, const std::vector<ResultRow>& rows) {
    std::ofstream out = create_or_throw(file, std::ios::out);
    for (const ResultRow& r : rows) {
        out << format_result_line(r);
    }
}

void write_gt(const std::filesystem::path& file, const std::vector<GtEntry>& rows) {
    std::ofstream out = create_or_throw(file, std::ios::out);
    char buf[200];
    for (const GtEntry& e : rows) {
        std::snprintf(buf, sizeof(buf), "%d,%d,%.2f,%.2f,%.2f,%.2f,%d,%d,%.2f\n", e.frame,
                      e.id, e.box.x, e.box.y, e.box.w, e.box.h, e.considered ? 1 : 0,
                      e.class_id, e.visibility);
        out << buf;
    }
}

void write_det(const std::filesystem::path& file, const std::vector<DetEntry>& rows) {
    std::ofstream out = create_or_throw(file, std::ios::out);
    char buf[200];
    for (const DetEntry& e : rows) {
        std::snprintf(buf, sizeof(buf), "%d,-1,%.2f,%.2f,%.2f,%.2f,%.4f,-1,-1,-1\n", e.frame,
                      e.box.x, e.box.y, e.box.w, e.box.h, e.confidence);
        out << buf;
    }
}

namespace {
constexpr char kFeatureMagic[8] = {'L', 'I', 'T', 'E', 'F', 'M', '0', '1'};
constexpr char kDescriptorMagic[8] = {'L', 'I', 'T', 'E', 'D', 'S', '0', '1'};
} // namespace

FeatureMap read_feature_map(const std::filesystem::path& file) {
    std::ifstream in(file, std::ios::binary);
    if (!in) {
        throw InputError("cannot open " + file.string());
    }
    char magic[8];
    if (!in.read(magic, sizeof(magic)) || std::memcmp(magic, kFeatureMagic, 8) != 0) {
        throw InputError(file.string() + ": bad feature-map magic");
    }
    const std::uint32_t frame = read_u32(in, file);
    const std::uint32_t channels = read_u32(in, file);
    const std::uint32_t height = read_u32(in, file);
    const std::uint32_t width = read_u32(in, file);
    const std::uint32_t stride = read_u32(in, file);
    const std::size_t count =
        static_cast<std::size_t>(channels) * height * width;
    if (count == 0 || count > (1u << 30)) {
        throw InputError(file.string() + ": implausible feature-map dimensions");
    }
    std::vector<float> data(count);
    if (!in.read(reinterpret_cast<char*>(data.data()),
                 static_cast<std::streamsize>(count * sizeof(float)))) {
        throw InputError(file.string() + ": payload shorter than header dimensions");
    }
    char extra;
    if (in.read(&extra, 1)) {
        throw InputError(file.string() + ": payload longer than header dimensions");
    }
    return FeatureMap(static_cast<int>(frame), static_cast<int>(channels),
                      static_cast<int>(height), static_cast<int>(width),
                      static_cast<int>(stride), std::move(data));
}

void write_feature_map(const std::filesystem::path& file, const FeatureMap& fm) {
    std::ofstream out = create_or_throw(file, std::ios::binary);
    out.write(kFeatureMagic, sizeof(kFeatureMagic));
    write_u32(out, static_cast<std::uint32_t>(fm.frame_index()));
    write_u32(out, static_cast<std::uint32_t>(fm.channels()));
    write_u32(out, static_cast<std::uint32_t>(fm.height()));
    write_u32(out, static_cast<std::uint32_t>(fm.width()));
    write_u32(out, static_cast<std::uint32_t>(fm.stride()));
    out.write(reinterpret_cast<const char*>(fm.data().data()),
              static_cast<std::streamsize>(fm.data().size() * sizeof(float)));
    if (!out) {
        throw InputError("short write to " + file.string());
    }
}

std::string feature_map_filename(int frame) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%06d.litefm", frame);
    return buf;
}

std::vector<Descriptor> read_descriptors(const std::filesystem::path& file,
                                         int expected_frame) {
    std::ifstream in(file, std::ios::binary);
    if (!in) {
        throw InputError("cannot open " + file.string());
    }
    char magic[8];
    if (!in.read(magic, sizeof(magic)) || std::memcmp(magic, kDescriptorMagic, 8) != 0) {
        throw InputError(file.string() + ": bad descriptor magic");
    }
    const std::uint32_t frame = read_u32(in, file);
    const std::uint32_t count = read_u32(in, file);
    const std::uint32_t dim = read_u32(in, file);
    if (expected_frame >= 0 && frame != static_cast<std::uint32_t>(expected_frame)) {
        throw InputError(file.string() + ": frame index mismatch (file says " +
                         std::to_string(frame) + ", expected " +
                         std::to_string(expected_frame) + ")");
    }
    if (dim == 0 || dim > (1u << 16) || count > (1u << 20)) {
        throw InputError(file.string() + ": implausible descriptor dimensions");
    }
    std::vector<Descriptor> out;
    out.reserve(count);
    std::vector<float> row(dim);
    for (std::uint32_t i = 0; i < count; ++i) {
        if (!in.read(reinterpret_cast<char*>(row.data()),
                     static_cast<std::streamsize>(dim * sizeof(float)))) {
            throw InputError(file.string() + ": truncated descriptor payload");
        }
        Eigen::VectorXf v(dim);
        std::memcpy(v.data(), row.data(), dim * sizeof(float));
        out.push_back(Descriptor::normalized_from(std::move(v)));
    }
    return out;
}

void write_descriptors(const std::filesystem::path& file, int frame,
                       const std::vector<Descriptor>& descriptors) {
    std::ofstream out = create_or_throw(file, std::ios::binary);
    out.write(kDescriptorMagic, sizeof(kDescriptorMagic));
    write_u32(out, static_cast<std::uint32_t>(frame));
    write_u32(out, static_cast<std::uint32_t>(descriptors.size()));
    const std::uint32_t dim =
        descriptors.empty() ? 1u : static_cast<std::uint32_t>(descriptors[0].dim());
    write_u32(out, dim);
    for (const Descriptor& d : descriptors) {
        if (static_cast<std::uint32_t>(d.dim()) != dim) {
            throw InputError("descriptor dimension mismatch while writing " + file.string());
        }
        out.write(reinterpret_cast<const char*>(d.values.data()),
                  static_cast<std::streamsize>(dim * sizeof(float)));
    }
    if (!out) {
        throw InputError("short write to " + file.string());
    }
}

std::string descriptor_filename(int frame) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%06d.desc", frame);
    return buf;
}

ReplaySource::ReplaySource(const std::filesystem::path& sequence_dir, DetKind kind,
                           std::filesystem::path features_dir,
                           std::filesystem::path descriptors_dir)
    : features_dir_(std::move(features_dir)), descriptors_dir_(std::move(descriptors_dir)) {
    meta_ = parse_seqinfo(sequence_dir / "seqinfo.ini");
    if (kind == DetKind::kDet) {
        for (const DetEntry& e : load_det(sequence_dir / "det" / "det.txt")) {
            Detection d;
            d.frame = e.frame;
            d.bbox = e.box;
            d.confidence = e.confidence;
            frames_[e.frame].push_back(std::move(d));
        }
    } else {
        for (const GtEntry& e : load_gt(sequence_dir / "gt" / "gt.txt")) {
            if (!e.considered) {
                continue;
            }
            Detection d;
            d.frame = e.frame;
            d.bbox = e.box;
            d.confidence = 1.0;
            d.class_id = e.class_id;
            frames_[e.frame].push_back(std::move(d));
        }
    }
    for (const auto& [frame, dets] : frames_) {
        if (frame > meta_.num_frames) {
            throw InputError(sequence_dir.string() + ": detections at frame " +
                             std::to_string(frame) + " beyond seqLength " +
                             std::to_string(meta_.num_frames));
        }
        (void)dets;
    }
}

std::optional<FrameBatch> ReplaySource::next() {
    if (cursor_ > meta_.num_frames) {
        return std::nullopt;
    }
    FrameBatch batch;
    batch.frame_index = cursor_;
    const auto it = frames_.find(cursor_);
    if (it != frames_.end()) {
        batch.detections = it->second;
    }
    if (!features_dir_.empty()) {
        const std::filesystem::path fm_file = features_dir_ / feature_map_filename(cursor_);
        try {
            batch.feature_map = read_feature_map(fm_file);
        } catch (const InputError& e) {
            throw InputError("frame " + std::to_string(cursor_) + ": " + e.what());
        }
        if (batch.feature_map->frame_index() != cursor_) {
            throw InputError(fm_file.string() + ": frame index mismatch");
        }
    }
    ++cursor_;
    return batch;
}

void ReplaySource::attach_descriptors(FrameBatch& batch) {
    if (descriptors_dir_.empty()) {
        return;
    }
    const std::filesystem::path file =
        descriptors_dir_ / descriptor_filename(batch.frame_index);
    std::vector<Descriptor> descs;
    try {
        descs = read_descriptors(file, batch.frame_index);
    } catch (const InputError& e) {
        throw InputError("frame " + std::to_string(batch.frame_index) + ": " + e.what());
    }
    if (descs.size() != batch.detections.size()) {
        throw InputError(file.string() + ": descriptor count " +
                         std::to_string(descs.size()) + " != detection count " +
                         std::to_string(batch.detections.size()));
    }
    for (std::size_t i = 0; i < descs.size(); ++i) {
        batch.detections[i].descriptor = descs[i];
    }
}

void SimulatedReidDelaySource::attach_descriptors(FrameBatch& batch) {
    std::this_thread::sleep_for(std::chrono::duration<double>(delay_seconds_));
    inner_.attach_descriptors(batch);
}

} // namespace litetrack::io
