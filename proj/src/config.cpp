#include "rftpi/config.hpp"

#include <charconv>
#include <cstdio>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>

#include "rftpi/errors.hpp"

namespace rftpi {

namespace {

std::string trim(const std::string& s) {
    const auto a = s.find_first_not_of(" \t\r");
    if (a == std::string::npos) return "";
    const auto b = s.find_last_not_of(" \t\r");
    return s.substr(a, b - a + 1);
}

double parse_double(const std::string& v, int line) {
    try {
        std::size_t used = 0;
        const double d = std::stod(v, &used);
        if (used != v.size()) throw std::invalid_argument(v);
        return d;
    } catch (const std::exception&) {
        throw ConfigError("invalid number '" + v + "'", line);
    }
}

std::string fmt_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::vector<std::pair<double, double>> parse_points(const std::string& v, int line) {
    std::vector<std::pair<double, double>> pts;
    if (trim(v).empty()) return pts;
    std::stringstream ss(v);
    std::string item;
    while (std::getline(ss, item, ',')) {
        const auto colon = item.find(':');
        if (colon == std::string::npos)
            throw ConfigError("expected 'detuning:value' pair in '" + item + "'", line);
        pts.emplace_back(parse_double(trim(item.substr(0, colon)), line),
                         parse_double(trim(item.substr(colon + 1)), line));
    }
    return pts;
}

std::string fmt_points(const std::vector<std::pair<double, double>>& pts) {
    std::string out;
    for (std::size_t i = 0; i < pts.size(); ++i) {
        if (i) out += ",";
        out += fmt_double(pts[i].first) + ":" + fmt_double(pts[i].second);
    }
    return out;
}

struct Key {
    std::function<void(RunConfig&, const std::string&, int)> set;
    std::function<std::string(const RunConfig&)> get;
};

Key dkey(double RunConfig::*field) {
    return {[field](RunConfig& c, const std::string& v, int line) {
                c.*field = parse_double(v, line);
            },
            [field](const RunConfig& c) { return fmt_double(c.*field); }};
}

const std::map<std::string, Key>& registry() {
    static const std::map<std::string, Key> keys = [] {
        std::map<std::string, Key> k;
        k["emitter.t1_ps"] = dkey(&RunConfig::t1_ps);
        k["emitter.gamma_star"] = dkey(&RunConfig::gamma_star);
        k["emitter.fss_ghz"] = dkey(&RunConfig::fss_ghz);
        k["emitter.cavity_g_ghz"] = dkey(&RunConfig::cavity_g_ghz);
        k["emitter.cavity_kappa_ghz"] = dkey(&RunConfig::cavity_kappa_ghz);
        k["emitter.gamma_bulk_ghz"] = dkey(&RunConfig::gamma_bulk_ghz);

        k["drive.omega"] = dkey(&RunConfig::omega);
        k["drive.delta_ghz"] = dkey(&RunConfig::delta_ghz);
        k["drive.nbar"] = dkey(&RunConfig::nbar);
        k["drive.eta_ab"] = dkey(&RunConfig::eta_ab);
        k["drive.nu_ghz"] = dkey(&RunConfig::nu_ghz);
        k["drive.t_laser_coh_ns"] = dkey(&RunConfig::t_laser_coh_ns);

        k["hom.m"] = dkey(&RunConfig::m);
        k["hom.x"] = dkey(&RunConfig::x);
        k["hom.detector_fwhm_ps"] = dkey(&RunConfig::detector_fwhm_ps);
        k["hom.t_amzi_ns"] = dkey(&RunConfig::t_amzi_ns);
        k["hom.g2_zero"] = dkey(&RunConfig::g2_zero);
        k["hom.tau_dip_ns"] = dkey(&RunConfig::tau_dip_ns);
        k["hom.g2_zero_points"] = {
            [](RunConfig& c, const std::string& v, int line) {
                c.g2_zero_points = parse_points(v, line);
            },
            [](const RunConfig& c) { return fmt_points(c.g2_zero_points); }};
        k["hom.x_points"] = {
            [](RunConfig& c, const std::string& v, int line) {
                c.x_points = parse_points(v, line);
            },
            [](const RunConfig& c) { return fmt_points(c.x_points); }};

        k["synthesis.tau_min_ns"] = dkey(&RunConfig::tau_min_ns);
        k["synthesis.tau_max_ns"] = dkey(&RunConfig::tau_max_ns);
        k["synthesis.bin_width_ps"] = dkey(&RunConfig::bin_width_ps);
        k["synthesis.total_coincidences"] = dkey(&RunConfig::total_coincidences);
        k["synthesis.window_min_ns"] = dkey(&RunConfig::window_min_ns);
        k["synthesis.window_max_ns"] = dkey(&RunConfig::window_max_ns);
        k["synthesis.seed"] = {
            [](RunConfig& c, const std::string& v, int line) {
                if (trim(v).empty()) {
                    c.seed.reset();
                    return;
                }
                std::uint64_t s = 0;
                const auto t = trim(v);
                const auto res = std::from_chars(t.data(), t.data() + t.size(), s);
                if (res.ec != std::errc() || res.ptr != t.data() + t.size())
                    throw ConfigError("invalid seed '" + v + "'", line);
                c.seed = s;
            },
            [](const RunConfig& c) {
                return c.seed ? std::to_string(*c.seed) : std::string();
            }};
        k["synthesis.label"] = {
            [](RunConfig& c, const std::string& v, int) { c.label = trim(v); },
            [](const RunConfig& c) { return c.label; }};

        k["fit.kind"] = {
            [](RunConfig& c, const std::string& v, int line) {
                const auto t = trim(v);
                if (t != "oscillation" && t != "x" && t != "lifetime" && t != "fss")
                    throw ConfigError("unknown fit kind '" + t + "'", line);
                c.fit_kind = t;
            },
            [](const RunConfig& c) { return c.fit_kind; }};
        k["fit.exclusion_ns"] = dkey(&RunConfig::exclusion_ns);
        k["fit.start_delay_ps"] = dkey(&RunConfig::start_delay_ps);
        k["fit.delta_ghz"] = dkey(&RunConfig::fit_delta_ghz);
        k["fit.max_iterations"] = {
            [](RunConfig& c, const std::string& v, int line) {
                c.max_iterations = static_cast<int>(parse_double(v, line));
            },
            [](const RunConfig& c) { return std::to_string(c.max_iterations); }};
        return k;
    }();
    return keys;
}

}  // namespace

RunConfig RunConfig::parse_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file '" + path + "'");
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_text(ss.str());
}

RunConfig RunConfig::parse_text(const std::string& text) {
    RunConfig cfg;
    std::stringstream ss(text);
    std::string line, section;
    int lineno = 0;
    while (std::getline(ss, line)) {
        ++lineno;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line = line.substr(0, hash);
        line = trim(line);
        if (line.empty()) continue;
        if (line.front() == '[') {
            if (line.back() != ']') throw ConfigError("malformed section header", lineno);
            section = trim(line.substr(1, line.size() - 2));
            if (section != "emitter" && section != "drive" && section != "hom" &&
                section != "synthesis" && section != "fit")
                throw ConfigError("unknown section [" + section + "]", lineno);
            continue;
        }
        const auto eq = line.find('=');
        if (eq == std::string::npos) throw ConfigError("expected 'key = value'", lineno);
        if (section.empty()) throw ConfigError("key outside any section", lineno);
        const std::string key = section + "." + trim(line.substr(0, eq));
        const auto it = registry().find(key);
        if (it == registry().end()) throw ConfigError("unknown key '" + key + "'", lineno);
        it->second.set(cfg, trim(line.substr(eq + 1)), lineno);
    }
    return cfg;
}

std::string RunConfig::emit() const {
    std::string out;
    std::string current;
    for (const auto& [key, handlers] : registry()) {
        const auto dot = key.find('.');
        const std::string section = key.substr(0, dot);
        if (section != current) {
            if (!out.empty()) out += "\n";
            out += "[" + section + "]\n";
            current = section;
        }
        out += key.substr(dot + 1) + " = " + handlers.get(*this) + "\n";
    }
    return out;
}

}  // namespace rftpi
