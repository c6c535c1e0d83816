#pragma once

#include <istream>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "lfsim/fading.hpp"
#include "lfsim/harness.hpp"

namespace lfsim {

/// Sectioned `key = value` text, one level deep:
///
///   # comment
///   [scenario]
///   n_tx = 4
///
/// A run manifest (JSON with a "config" object of sections) is accepted in
/// place of the text form. Relative paths resolve against the file's directory.
class ConfigFile {
public:
    using Section = std::map<std::string, std::string>;

    static ConfigFile parse(std::istream& in, const std::string& origin = "<config>");
    static ConfigFile parse_json(const std::string& text, const std::string& origin = "<manifest>");
    /// Reads text or manifest form, detected from the first non-blank character.
    static ConfigFile load(const std::string& path);

    void set(const std::string& section, const std::string& key, const std::string& value);
    /// `section.key=value`.
    void apply_override(std::string_view assignment);

    bool has(const std::string& section, const std::string& key) const;
    const std::string& get(const std::string& section, const std::string& key) const;
    std::string get_or(const std::string& section, const std::string& key, const std::string& fallback) const;

    const std::map<std::string, Section>& sections() const noexcept { return sections_; }
    const std::string& origin() const noexcept { return origin_; }
    const std::string& base_dir() const noexcept { return base_dir_; }
    void set_base_dir(std::string dir) { base_dir_ = std::move(dir); }

    /// Path value resolved against base_dir.
    std::string path(const std::string& section, const std::string& key) const;

    /// Sections as a JSON object, paths left as written.
    std::string to_json() const;

private:
    std::map<std::string, Section> sections_;
    std::string origin_;
    std::string base_dir_ = ".";
};

/// `0..30`, `0..30:2`, `0, 2, 4` or a mix separated by commas.
std::vector<unsigned> parse_delays(std::string_view text);

ScenarioConfig scenario_from_config(const ConfigFile& cfg);
LteConfig lte_from_config(const ConfigFile& cfg);
/// [scenario] n_rx, n_tx, fd_ts with [run] n_samples as length and seed.
FadingSpec fading_from_config(const ConfigFile& cfg);

/// Chain estimation sizes from [chain] segments / segment_length.
struct ChainSettings {
    std::size_t segments = 4;
    std::size_t segment_length = 1u << 18;
};
ChainSettings chain_from_config(const ConfigFile& cfg);

/// A copy with every known path key made absolute, so the echo can be
/// re-run from any directory.
ConfigFile resolved_copy(const ConfigFile& cfg);

}  // namespace lfsim
