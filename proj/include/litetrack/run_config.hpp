#pragma once

#include <litetrack/tracker.hpp>

#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <vector>

namespace litetrack {

/// Resolved settings for one tracking run. Precedence when assembling:
/// command-line flag > config-file value > built-in default. The resolved
/// config is written next to every output so any number can be traced back to
/// its settings.
struct RunConfig {
    std::string variant = "sort";
    TrackerConfig tracker;
    std::uint64_t seed = 1;
    int jobs = 1;
    std::string det_kind = "det"; // det | gt
    std::string input;
    std::string features;
    std::string descriptors;
    std::string output;
    std::string resolution_tag;

    std::vector<std::pair<std::string, std::string>> snapshot() const;
};

/// Flat key=value file, one pair per line, '#' comments.
std::map<std::string, std::string> read_config_file(const std::filesystem::path& file);

/// Applies known keys onto the config; unknown keys raise ConfigError.
void apply_config_entry(RunConfig& cfg, const std::string& key, const std::string& value);

void write_resolved_config(const std::filesystem::path& file, const RunConfig& cfg);

} // namespace litetrack
