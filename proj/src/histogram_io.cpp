#include "rftpi/histogram_io.hpp"

#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>

#include "rftpi/errors.hpp"

namespace rftpi {

namespace {

struct Header {
    std::map<std::string, std::string> kv;
    long line = 0;

    double number(const std::string& key, long at) const {
        const auto it = kv.find(key);
        if (it == kv.end()) throw FormatError("missing header key '" + key + "'", at);
        return std::stod(it->second);
    }
};

Header read_header(std::istream& in, long& lineno) {
    Header h;
    std::string line;
    while (in.peek() == '#') {
        std::getline(in, line);
        ++lineno;
        const auto eq = line.find('=');
        if (eq == std::string::npos) continue;
        auto key = line.substr(1, eq - 1);
        key.erase(0, key.find_first_not_of(" \t"));
        key.erase(key.find_last_not_of(" \t") + 1);
        h.kv[key] = line.substr(eq + 1);
    }
    return h;
}

void read_columns(std::istream& in, long& lineno, std::vector<double>& taus,
                  std::vector<double>& vals) {
    std::string line;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty()) continue;
        std::stringstream ss(line);
        double tau = 0.0, val = 0.0;
        if (!(ss >> tau >> val))
            throw FormatError("expected 'tau_ps<TAB>value' columns", lineno);
        taus.push_back(tau);
        vals.push_back(val);
    }
    if (taus.size() < 2) throw FormatError("file holds fewer than two bins", lineno);
}

}  // namespace

void write_histogram(const std::string& path, const HistogramRecord& rec) {
    std::ofstream out(path);
    if (!out) throw FormatError("cannot open '" + path + "' for writing", 0);
    char buf[96];
    out << "# column=count\n";
    std::snprintf(buf, sizeof buf, "# bin_width_ps=%.17g\n", rec.trace.bin_width);
    out << buf;
    std::snprintf(buf, sizeof buf, "# window_ps=%.17g,%.17g\n",
                  rec.trace.normalization_window.first,
                  rec.trace.normalization_window.second);
    out << buf;
    out << "# label=" << rec.label << "\n";
    std::snprintf(buf, sizeof buf, "# detuning_ghz=%.17g\n", rec.detuning);
    out << buf;
    std::snprintf(buf, sizeof buf, "# flux=%.17g\n", rec.flux);
    out << buf;
    for (std::size_t i = 0; i < rec.raw.size(); ++i) {
        std::snprintf(buf, sizeof buf, "%.17g\t%lld\n", rec.trace.taus[i],
                      static_cast<long long>(rec.raw[i]));
        out << buf;
    }
}

HistogramRecord read_histogram(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw FormatError("cannot open '" + path + "'", 0);
    long lineno = 0;
    const Header h = read_header(in, lineno);

    std::vector<double> taus, vals;
    read_columns(in, lineno, taus, vals);

    HistogramRecord rec;
    rec.trace.bin_width = h.number("bin_width_ps", lineno);
    rec.trace.taus = taus;
    const auto wit = h.kv.find("window_ps");
    if (wit != h.kv.end()) {
        std::stringstream ws(wit->second);
        char comma = 0;
        ws >> rec.trace.normalization_window.first >> comma >>
            rec.trace.normalization_window.second;
    }
    if (auto it = h.kv.find("label"); it != h.kv.end()) rec.label = it->second;
    if (auto it = h.kv.find("detuning_ghz"); it != h.kv.end())
        rec.detuning = std::stod(it->second);
    if (auto it = h.kv.find("flux"); it != h.kv.end()) rec.flux = std::stod(it->second);

    rec.raw.resize(vals.size());
    for (std::size_t i = 0; i < vals.size(); ++i) {
        rec.raw[i] = static_cast<std::int64_t>(vals[i]);
        if (rec.raw[i] < 0 || static_cast<double>(rec.raw[i]) != vals[i])
            throw FormatError("counts must be non-negative integers",
                              static_cast<long>(i + 1));
    }
    rec.trace.values.assign(vals.size(), 0.0);
    rec.trace = normalize_histogram(rec, rec.trace.normalization_window);
    return rec;
}

void write_trace(const std::string& path, const CorrelationTrace& trace,
                 const std::string& label) {
    std::ofstream out(path);
    if (!out) throw FormatError("cannot open '" + path + "' for writing", 0);
    char buf[96];
    out << "# column=value\n";
    std::snprintf(buf, sizeof buf, "# bin_width_ps=%.17g\n", trace.bin_width);
    out << buf;
    std::snprintf(buf, sizeof buf, "# window_ps=%.17g,%.17g\n",
                  trace.normalization_window.first, trace.normalization_window.second);
    out << buf;
    out << "# label=" << label << "\n";
    for (std::size_t i = 0; i < trace.taus.size(); ++i) {
        std::snprintf(buf, sizeof buf, "%.17g\t%.17g\n", trace.taus[i], trace.values[i]);
        out << buf;
    }
}

CorrelationTrace read_trace(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw FormatError("cannot open '" + path + "'", 0);
    long lineno = 0;
    const Header h = read_header(in, lineno);

    CorrelationTrace trace;
    std::vector<double> taus, vals;
    read_columns(in, lineno, taus, vals);
    trace.taus = std::move(taus);
    trace.values = std::move(vals);
    trace.bin_width = h.number("bin_width_ps", lineno);
    if (auto it = h.kv.find("window_ps"); it != h.kv.end()) {
        std::stringstream ws(it->second);
        char comma = 0;
        ws >> trace.normalization_window.first >> comma >> trace.normalization_window.second;
    }
    trace.validate();
    return trace;
}

}  // namespace rftpi
