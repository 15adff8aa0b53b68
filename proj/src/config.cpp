#include "subml/config.hpp"

#include "subml/error.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

namespace subml {

namespace {

std::string trim(std::string_view s) {
    const auto issp = [](unsigned char c) { return std::isspace(c) != 0; };
    while (!s.empty() && issp(s.front())) s.remove_prefix(1);
    while (!s.empty() && issp(s.back())) s.remove_suffix(1);
    return std::string(s);
}

std::string lower(std::string s) {
    std::transform(s.begin(), s.end(), s.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    return s;
}

template <class T>
bool parse_whole(std::string_view s, T& v) {
    const auto* end = s.data() + s.size();
    const auto [ptr, ec] = std::from_chars(s.data(), end, v);
    return ec == std::errc() && ptr == end;
}

std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> parts;
    std::string cur;
    std::istringstream in(s);
    while (std::getline(in, cur, sep)) parts.push_back(trim(cur));
    if (!s.empty() && s.back() == sep) parts.emplace_back();
    return parts;
}

} // namespace

Modulation parse_modulation(const std::string& text, const std::string& field) {
    const std::string t = lower(trim(text));
    const auto order_of = [&](std::string_view digits) {
        unsigned m = 0;
        if (!parse_whole(digits, m)) throw ConfigError(field, "bad modulation '" + text + "'");
        return m;
    };
    Modulation m;
    if (t == "bpsk") {
        m = {Scheme::BPSK, 2};
    } else if (t.starts_with("pam")) {
        m = {Scheme::PAM, order_of(std::string_view(t).substr(3))};
    } else if (t.starts_with("qam")) {
        m = {Scheme::QAM, order_of(std::string_view(t).substr(3))};
    } else {
        throw ConfigError(field, "unknown modulation '" + text + "' (bpsk, pam<M>, qam<M>)");
    }
    try {
        (void)build_constellation(m.scheme, m.order);
    } catch (const UnsupportedOrder& e) {
        throw ConfigError(field, e.what());
    }
    return m;
}

std::string modulation_name(Scheme scheme, unsigned order) {
    switch (scheme) {
    case Scheme::BPSK: return "bpsk";
    case Scheme::PAM: return "pam" + std::to_string(order);
    case Scheme::QAM: return "qam" + std::to_string(order);
    }
    return "?";
}

std::pair<unsigned, unsigned> parse_mimo(const std::string& text, const std::string& field) {
    const std::string t = lower(trim(text));
    const auto x = t.find('x');
    unsigned nt = 0, nr = 0;
    if (x == std::string::npos || !parse_whole(std::string_view(t).substr(0, x), nt) ||
        !parse_whole(std::string_view(t).substr(x + 1), nr) || nt == 0 || nr == 0)
        throw ConfigError(field, "expected <Nt>x<Nr>, got '" + text + "'");
    return {nt, nr};
}

ChannelMode parse_channel(const std::string& text, const std::string& field) {
    const std::string t = lower(trim(text));
    if (t == "identity") return ChannelMode::Identity;
    if (t == "rayleigh") return ChannelMode::Rayleigh;
    throw ConfigError(field, "expected identity or rayleigh, got '" + text + "'");
}

Branch parse_branch(const std::string& text, const std::string& field) {
    const std::string t = lower(trim(text));
    if (t == "lower") return Branch::Lower;
    if (t == "upper") return Branch::Upper;
    throw ConfigError(field, "expected lower or upper, got '" + text + "'");
}

double parse_real(const std::string& text, const std::string& field) {
    double v = 0.0;
    if (!parse_whole(trim(text), v) || !std::isfinite(v))
        throw ConfigError(field, "expected a number, got '" + text + "'");
    return v;
}

std::uint64_t parse_count(const std::string& text, const std::string& field) {
    std::uint64_t v = 0;
    if (!parse_whole(trim(text), v))
        throw ConfigError(field, "expected a non-negative integer, got '" + text + "'");
    return v;
}

std::vector<double> parse_snr_range(const std::string& text, const std::string& field) {
    const auto parts = split(trim(text), ':');
    if (parts.size() != 3) throw ConfigError(field, "expected a:b:step, got '" + text + "'");
    const double a = parse_real(parts[0], field);
    const double b = parse_real(parts[1], field);
    const double step = parse_real(parts[2], field);
    if (b < a) throw ConfigError(field, "range end is below its start");
    if (!(step > 0.0)) throw ConfigError(field, "step must be positive");
    const double span = (b - a) / step;
    if (span > 1e6) throw ConfigError(field, "range has too many points");
    const auto n = static_cast<std::size_t>(std::floor(span + 1e-9)) + 1;
    std::vector<double> out;
    out.reserve(n);
    for (std::size_t i = 0; i < n; ++i) {
        const double v = a + double(i) * step;
        out.push_back(std::round(v * 1e9) / 1e9);
    }
    return out;
}

std::vector<double> parse_snr_list(const std::string& text, const std::string& field) {
    std::vector<double> out;
    for (const auto& p : split(trim(text), ',')) out.push_back(parse_real(p, field));
    if (out.empty()) throw ConfigError(field, "SNR list is empty");
    return out;
}

IniDocument parse_ini(std::istream& in, const std::string& source) {
    IniDocument doc;
    std::string section;
    std::string raw;
    int line = 0;
    while (std::getline(in, raw)) {
        ++line;
        const auto where = source + ":" + std::to_string(line);
        const auto cut = raw.find_first_of("#;");
        const std::string s = trim(std::string_view(raw).substr(0, cut));
        if (s.empty()) continue;
        if (s.front() == '[') {
            if (s.back() != ']' || s.size() < 3)
                throw ConfigError(where, "malformed section header '" + s + "'");
            section = lower(trim(std::string_view(s).substr(1, s.size() - 2)));
            doc[section];
            continue;
        }
        const auto eq = s.find('=');
        if (eq == std::string::npos)
            throw ConfigError(where, "expected 'key = value', got '" + s + "'");
        const std::string key = lower(trim(std::string_view(s).substr(0, eq)));
        if (key.empty()) throw ConfigError(where, "missing key before '='");
        auto& keys = doc[section];
        if (keys.contains(key))
            throw ConfigError(where, "field '" + key + "' repeats line " +
                                         std::to_string(keys[key].line));
        keys[key] = {trim(std::string_view(s).substr(eq + 1)), line};
    }
    return doc;
}

SweepFileSettings interpret_sweep_config(const IniDocument& doc, const std::string& source) {
    SweepFileSettings out;
    for (const auto& [section, keys] : doc) {
        for (const auto& [key, entry] : keys) {
            const auto where = source + ":" + std::to_string(entry.line);
            const auto& v = entry.value;
            try {
                if (section == "link" && key == "modulation") {
                    out.modulation = parse_modulation(v, key);
                } else if (section == "link" && key == "mimo") {
                    out.mimo = parse_mimo(v, key);
                } else if (section == "link" && key == "channel") {
                    out.channel = parse_channel(v, key);
                } else if (section == "sweep" && key == "snr_db_range") {
                    if (out.snr_db) throw ConfigError(key, "give snr_db or snr_db_range, not both");
                    out.snr_db = parse_snr_range(v, key);
                } else if (section == "sweep" && key == "snr_db") {
                    if (out.snr_db) throw ConfigError(key, "give snr_db or snr_db_range, not both");
                    out.snr_db = parse_snr_list(v, key);
                } else if (section == "sweep" && key == "target") {
                    out.target = TargetRule::parse(v);
                } else if (section == "sweep" && key == "trials") {
                    out.trials = parse_count(v, key);
                    if (*out.trials == 0) throw ConfigError(key, "trials must be >= 1");
                } else if (section == "sweep" && key == "seed") {
                    out.seed = parse_count(v, key);
                } else if (section == "sweep" && key == "branch") {
                    out.branch = parse_branch(v, key);
                } else if (section == "sweep" && key == "threads") {
                    const auto t = parse_count(v, key);
                    if (t > 4096) throw ConfigError(key, "thread count is unreasonably large");
                    out.threads = static_cast<unsigned>(t);
                } else if (section == "output" && key == "csv") {
                    out.csv = v;
                } else if (section == "output" && key == "plot") {
                    out.plot = v;
                } else if (section == "output" && key == "ml_csv") {
                    out.ml_csv = v;
                } else {
                    const auto name = section.empty() ? key : "[" + section + "] " + key;
                    throw ConfigError(where, "unknown field '" + name + "'");
                }
            } catch (const ConfigError& e) {
                if (e.where() == where) throw;
                throw ConfigError(where, std::string("field ") + e.what());
            }
        }
    }
    return out;
}

SweepFileSettings load_sweep_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError(path, "cannot open config file");
    return interpret_sweep_config(parse_ini(in, path), path);
}

} // namespace subml
