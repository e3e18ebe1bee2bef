#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "dtnsim/engine.hpp"
#include "dtnsim/trace.hpp"

namespace dtnsim {

/// Everything needed to reproduce a sweep. Paths are absolute.
struct RunConfig {
    std::optional<std::filesystem::path> trace_file;
    TraceFormat trace_format = TraceFormat::Tabular;
    std::optional<std::filesystem::path> profile_file;
    /// Arity of the rows in profile_file.
    std::optional<std::size_t> profile_categories;
    std::optional<std::filesystem::path> category_names_file;
    std::filesystem::path output_dir;

    RouterConfig router;
    ScheduleConfig schedule;

    std::vector<std::size_t> categories;
    std::vector<std::uint64_t> seeds{1};
    std::size_t workers = 1;

    /// Set instead of trace_file to drive runs from generated traces.
    std::optional<SyntheticParams> synthetic;
};

/// `key = value` pairs applied after the file, in order.
using ConfigOverrides = std::vector<std::pair<std::string, std::string>>;

/// Parses `key = value` lines (`#` comments). Relative paths in the text are
/// resolved against `base_dir`; override values against the working
/// directory. Throws ConfigError.
RunConfig parse_config_text(std::string_view text, const std::filesystem::path& base_dir,
                            const ConfigOverrides& overrides = {});

RunConfig parse_config(const std::filesystem::path& file, const ConfigOverrides& overrides = {});

/// Every key with its effective value; parses back to an equal config.
std::string format_config(const RunConfig& config);

/// Config keys in echo order.
const std::vector<std::string>& config_keys();

} // namespace dtnsim
