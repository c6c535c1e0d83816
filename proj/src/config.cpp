#include "lfsim/config.hpp"

#include <json.hpp>

#include <algorithm>
#include <charconv>
#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>

#include "lfsim/error.hpp"

namespace lfsim {

namespace {

namespace fs = std::filesystem;

const std::map<std::string, std::set<std::string>>& known_keys() {
    static const std::map<std::string, std::set<std::string>> keys{
        {"scenario",
         {"name", "n_tx", "n_rx", "n_streams", "alpha1", "alpha2", "n0", "noise_mode", "tx_rate_scaled", "receiver",
          "interference", "mode", "fd_ts", "codebook"}},
        {"run", {"delays", "n_samples", "seed", "pi_mode", "coefficients", "batches", "threads"}},
        {"chain", {"segments", "segment_length"}},
        {"lte", {"subframe_ms", "delays_ms", "subcarriers_per_subband"}},
    };
    return keys;
}

std::string trim(std::string_view s) {
    const auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string_view::npos) return {};
    const auto e = s.find_last_not_of(" \t\r\n");
    return std::string(s.substr(b, e - b + 1));
}

void check_key(const std::string& section, const std::string& key, const std::string& where) {
    const auto& keys = known_keys();
    const auto it = keys.find(section);
    if (it == keys.end()) fail(ErrorKind::Config, where + ": unknown section [" + section + "]");
    if (!it->second.count(key)) fail(ErrorKind::Config, where + ": unknown key `" + key + "` in [" + section + "]");
}

double to_double(const ConfigFile& c, const std::string& s, const std::string& k) {
    const std::string& v = c.get(s, k);
    try {
        std::size_t used = 0;
        const double d = std::stod(v, &used);
        if (used != v.size()) throw std::invalid_argument(v);
        return d;
    } catch (const std::exception&) {
        fail(ErrorKind::Config, s + "." + k + ": expected a number, got `" + v + "`");
    }
}

std::uint64_t to_uint(const ConfigFile& c, const std::string& s, const std::string& k) {
    const std::string& v = c.get(s, k);
    std::uint64_t out = 0;
    const auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
    if (ec != std::errc() || ptr != v.data() + v.size())
        fail(ErrorKind::Config, s + "." + k + ": expected a nonnegative integer, got `" + v + "`");
    return out;
}

bool to_bool(const ConfigFile& c, const std::string& s, const std::string& k) {
    std::string v = c.get(s, k);
    std::transform(v.begin(), v.end(), v.begin(), [](unsigned char ch) { return std::tolower(ch); });
    if (v == "on" || v == "true" || v == "yes" || v == "1") return true;
    if (v == "off" || v == "false" || v == "no" || v == "0") return false;
    fail(ErrorKind::Config, s + "." + k + ": expected on/off, got `" + v + "`");
}

template <class E>
E to_enum(const ConfigFile& c, const std::string& s, const std::string& k,
          std::initializer_list<std::pair<const char*, E>> choices) {
    const std::string& v = c.get(s, k);
    std::string names;
    for (const auto& [name, value] : choices) {
        if (v == name) return value;
        names += names.empty() ? name : std::string(" | ") + name;
    }
    fail(ErrorKind::Config, s + "." + k + ": expected " + names + ", got `" + v + "`");
}

unsigned parse_uint(std::string_view s, std::string_view whole) {
    const std::string t = trim(s);
    unsigned out = 0;
    const auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), out);
    if (t.empty() || ec != std::errc() || ptr != t.data() + t.size())
        fail(ErrorKind::Config, "malformed delay list `" + std::string(whole) + "`");
    return out;
}

}  // namespace

ConfigFile ConfigFile::parse(std::istream& in, const std::string& origin) {
    ConfigFile cfg;
    cfg.origin_ = origin;
    std::string line, section;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        const std::string where = origin + ":" + std::to_string(line_no);
        std::string t = trim(line);
        if (t.empty() || t[0] == '#' || t[0] == ';') continue;
        if (t.front() == '[') {
            if (t.back() != ']') fail(ErrorKind::Config, where + ": unterminated section header");
            section = trim(std::string_view(t).substr(1, t.size() - 2));
            if (!known_keys().count(section)) fail(ErrorKind::Config, where + ": unknown section [" + section + "]");
            cfg.sections_[section];
            continue;
        }
        const auto eq = t.find('=');
        if (eq == std::string::npos) fail(ErrorKind::Config, where + ": expected `key = value`");
        if (section.empty()) fail(ErrorKind::Config, where + ": key outside of a section");
        std::string key = trim(std::string_view(t).substr(0, eq));
        std::string value = trim(std::string_view(t).substr(eq + 1));
        const auto hash = value.find(" #");
        if (hash != std::string::npos) value = trim(std::string_view(value).substr(0, hash));
        check_key(section, key, where);
        if (cfg.sections_[section].count(key)) fail(ErrorKind::Config, where + ": duplicate key `" + key + "`");
        cfg.sections_[section][key] = value;
    }
    return cfg;
}

ConfigFile ConfigFile::parse_json(const std::string& text, const std::string& origin) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::exception& e) {
        fail(ErrorKind::Config, origin + ": invalid JSON: " + e.what());
    }
    const nlohmann::json* body = &j;
    if (j.is_object() && j.contains("config")) body = &j["config"];
    if (!body->is_object()) fail(ErrorKind::Config, origin + ": expected an object of sections");
    ConfigFile cfg;
    cfg.origin_ = origin;
    for (const auto& [section, keys] : body->items()) {
        if (!keys.is_object()) fail(ErrorKind::Config, origin + ": section `" + section + "` is not an object");
        for (const auto& [key, value] : keys.items()) {
            check_key(section, key, origin);
            cfg.sections_[section][key] = value.is_string() ? value.get<std::string>() : value.dump();
        }
    }
    return cfg;
}

ConfigFile ConfigFile::load(const std::string& path) {
    std::ifstream in(path);
    if (!in) fail(ErrorKind::Data, "cannot open config file: " + path);
    std::stringstream buf;
    buf << in.rdbuf();
    const std::string text = buf.str();
    const auto first = text.find_first_not_of(" \t\r\n");
    ConfigFile cfg;
    if (first != std::string::npos && text[first] == '{') {
        cfg = parse_json(text, path);
    } else {
        std::istringstream is(text);
        cfg = parse(is, path);
    }
    const fs::path parent = fs::path(path).parent_path();
    cfg.base_dir_ = parent.empty() ? "." : parent.string();
    return cfg;
}

void ConfigFile::set(const std::string& section, const std::string& key, const std::string& value) {
    check_key(section, key, "override");
    sections_[section][key] = value;
}

void ConfigFile::apply_override(std::string_view assignment) {
    const auto eq = assignment.find('=');
    const auto dot = assignment.find('.');
    if (eq == std::string_view::npos || dot == std::string_view::npos || dot > eq)
        fail(ErrorKind::Config, "override must look like section.key=value, got `" + std::string(assignment) + "`");
    set(trim(assignment.substr(0, dot)), trim(assignment.substr(dot + 1, eq - dot - 1)),
        trim(assignment.substr(eq + 1)));
}

bool ConfigFile::has(const std::string& section, const std::string& key) const {
    const auto it = sections_.find(section);
    return it != sections_.end() && it->second.count(key);
}

const std::string& ConfigFile::get(const std::string& section, const std::string& key) const {
    const auto it = sections_.find(section);
    if (it == sections_.end() || !it->second.count(key))
        fail(ErrorKind::Config, origin_ + ": missing " + section + "." + key);
    return it->second.at(key);
}

std::string ConfigFile::get_or(const std::string& section, const std::string& key, const std::string& fallback) const {
    return has(section, key) ? get(section, key) : fallback;
}

std::string ConfigFile::path(const std::string& section, const std::string& key) const {
    const fs::path p = get(section, key);
    if (p.is_absolute()) return p.string();
    return (fs::path(base_dir_) / p).lexically_normal().string();
}

std::string ConfigFile::to_json() const {
    nlohmann::ordered_json j = nlohmann::ordered_json::object();
    for (const auto& [section, keys] : sections_)
        for (const auto& [key, value] : keys) j[section][key] = value;
    return j.dump(2);
}

ConfigFile resolved_copy(const ConfigFile& cfg) {
    ConfigFile out = cfg;
    if (cfg.has("scenario", "codebook"))
        out.set("scenario", "codebook", fs::absolute(cfg.path("scenario", "codebook")).lexically_normal().string());
    return out;
}

std::vector<unsigned> parse_delays(std::string_view text) {
    std::vector<unsigned> out;
    std::size_t start = 0;
    while (start <= text.size()) {
        const auto comma = text.find(',', start);
        const std::string item = trim(text.substr(start, comma == std::string_view::npos ? text.npos : comma - start));
        if (!item.empty()) {
            const auto dots = item.find("..");
            if (dots == std::string::npos) {
                out.push_back(parse_uint(item, text));
            } else {
                std::string_view rest = std::string_view(item).substr(dots + 2);
                unsigned step = 1;
                const auto colon = rest.find(':');
                if (colon != std::string_view::npos) {
                    step = parse_uint(rest.substr(colon + 1), text);
                    rest = rest.substr(0, colon);
                }
                const unsigned lo = parse_uint(std::string_view(item).substr(0, dots), text);
                const unsigned hi = parse_uint(rest, text);
                if (step == 0 || hi < lo) fail(ErrorKind::Config, "malformed delay range `" + item + "`");
                for (unsigned d = lo; d <= hi; d += step) out.push_back(d);
            }
        } else if (comma != std::string_view::npos || out.empty()) {
            fail(ErrorKind::Config, "malformed delay list `" + std::string(text) + "`");
        }
        if (comma == std::string_view::npos) break;
        start = comma + 1;
    }
    if (out.empty()) fail(ErrorKind::Config, "the delay grid is empty");
    return out;
}

ScenarioConfig scenario_from_config(const ConfigFile& c) {
    ScenarioConfig s;
    const std::string sc = "scenario", run = "run";
    s.name = c.get_or(sc, "name", "scenario");
    if (c.has(sc, "n_tx")) s.params.n_tx = to_uint(c, sc, "n_tx");
    if (c.has(sc, "n_rx")) s.params.n_rx = to_uint(c, sc, "n_rx");
    if (c.has(sc, "n_streams")) s.params.n_streams = to_uint(c, sc, "n_streams");
    if (c.has(sc, "alpha1")) s.params.alpha1 = to_double(c, sc, "alpha1");
    if (c.has(sc, "alpha2")) s.params.alpha2 = to_double(c, sc, "alpha2");
    if (c.has(sc, "n0")) s.params.n0 = to_double(c, sc, "n0");
    if (c.has(sc, "noise_mode"))
        s.params.noise_mode =
            to_enum<NoiseMode>(c, sc, "noise_mode", {{"expected", NoiseMode::Expected}, {"sampled", NoiseMode::Sampled}});
    if (c.has(sc, "tx_rate_scaled")) s.params.tx_rate_scaled = to_bool(c, sc, "tx_rate_scaled");
    if (c.has(sc, "receiver"))
        s.receiver = to_enum<Receiver>(c, sc, "receiver", {{"mrc", Receiver::Mrc}, {"zf", Receiver::Zf}});
    if (c.has(sc, "interference")) s.interference = to_bool(c, sc, "interference");
    if (c.has(sc, "mode"))
        s.mode = to_enum<LinkMode>(c, sc, "mode", {{"beam", LinkMode::Beam}, {"precoded", LinkMode::Precoded}});
    if (c.has(sc, "fd_ts")) s.fd_ts = to_double(c, sc, "fd_ts");
    s.codebook_path = c.path(sc, "codebook");

    s.delays = parse_delays(c.get_or(run, "delays", "0..30"));
    if (c.has(run, "n_samples")) s.n_samples = to_uint(c, run, "n_samples");
    if (c.has(run, "seed")) s.seed = to_uint(c, run, "seed");
    if (c.has(run, "pi_mode"))
        s.pi_mode = to_enum<PiMode>(c, run, "pi_mode", {{"empirical", PiMode::Empirical}, {"uniform", PiMode::Uniform}});
    if (c.has(run, "coefficients"))
        s.coefficient_mode = to_enum<CoefficientMode>(
            c, run, "coefficients", {{"conservative", CoefficientMode::Conservative}, {"exact", CoefficientMode::Exact}});
    if (c.has(run, "batches")) s.batches = to_uint(c, run, "batches");
    if (c.has(run, "threads")) s.threads = unsigned(to_uint(c, run, "threads"));
    return s;
}

ChainSettings chain_from_config(const ConfigFile& c) {
    ChainSettings s;
    if (c.has("chain", "segments")) s.segments = to_uint(c, "chain", "segments");
    if (c.has("chain", "segment_length")) s.segment_length = to_uint(c, "chain", "segment_length");
    if (s.segments == 0) fail(ErrorKind::Config, "chain.segments must be >= 1");
    return s;
}

LteConfig lte_from_config(const ConfigFile& c) {
    LteConfig l;
    l.scenario = scenario_from_config(c);
    const ChainSettings ch = chain_from_config(c);
    l.chain_segments = ch.segments;
    l.chain_segment_length = ch.segment_length;
    if (c.has("lte", "subframe_ms")) l.subframe_ms = to_double(c, "lte", "subframe_ms");
    if (c.has("lte", "subcarriers_per_subband")) l.subcarriers_per_subband = to_uint(c, "lte", "subcarriers_per_subband");
    if (c.has("lte", "delays_ms")) {
        l.delays_ms.clear();
        std::stringstream ss(c.get("lte", "delays_ms"));
        std::string item;
        while (std::getline(ss, item, ',')) {
            try {
                l.delays_ms.push_back(std::stod(trim(item)));
            } catch (const std::exception&) {
                fail(ErrorKind::Config, "lte.delays_ms: malformed entry `" + item + "`");
            }
        }
        if (l.delays_ms.empty()) fail(ErrorKind::Config, "lte.delays_ms is empty");
    }
    if (!(l.subframe_ms > 0.0)) fail(ErrorKind::Config, "lte.subframe_ms must be positive");
    return l;
}

FadingSpec fading_from_config(const ConfigFile& c) {
    FadingSpec f;
    f.n_rx = c.has("scenario", "n_rx") ? to_uint(c, "scenario", "n_rx") : 1;
    f.n_tx = c.has("scenario", "n_tx") ? to_uint(c, "scenario", "n_tx") : 1;
    f.fd_ts = to_double(c, "scenario", "fd_ts");
    f.length = c.has("run", "n_samples") ? to_uint(c, "run", "n_samples") : 200000;
    f.seed = c.has("run", "seed") ? to_uint(c, "run", "seed") : 1;
    return f;
}

}  // namespace lfsim
