#include "ridgekit/report.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <fstream>

#include "json.hpp"

#include "ridgekit/errors.hpp"

namespace ridgekit {

namespace {

constexpr std::array<const char*, 6> kWarnings = {
    "b_range_truncated",   "spectrum_truncated", "inadmissible_pair",
    "nonzero_zero_mode",   "constant_mismatch",  "under_resolved",
};

using ojson = nlohmann::ordered_json;

ojson complex_json(cplx c) { return ojson::array({c.real(), c.imag()}); }

// JSON numbers must be finite; anything else is carried as a string.
ojson number_json(double v) {
    if (std::isfinite(v)) return v;
    return format_number(v);
}

}  // namespace

bool is_known_warning(const std::string& w) {
    return std::find(kWarnings.begin(), kWarnings.end(), w) != kWarnings.end();
}

void ExperimentReport::add_warning(const std::string& w) {
    if (!is_known_warning(w)) throw InvalidArgument("unknown warning: " + w);
    if (!has_warning(w)) warnings.push_back(w);
}

double ExperimentReport::metric(const std::string& key) const {
    for (const auto& [k, v] : metrics)
        if (k == key) return v;
    throw InvalidArgument("report " + domain + "/" + name + " has no metric " + key);
}

std::string ExperimentReport::note(const std::string& key) const {
    for (const auto& [k, v] : notes)
        if (k == key) return v;
    throw InvalidArgument("report " + domain + "/" + name + " has no note " + key);
}

bool ExperimentReport::has_warning(const std::string& w) const {
    return std::find(warnings.begin(), warnings.end(), w) != warnings.end();
}

void sort_reports(std::vector<ExperimentReport>& reports) {
    std::stable_sort(reports.begin(), reports.end(), [](const ExperimentReport& a, const ExperimentReport& b) {
        if (a.domain != b.domain) return a.domain < b.domain;
        return a.name < b.name;
    });
}

std::string format_number(double v) {
    // -0 and 0 print the same so sign-of-zero noise cannot leak into tables
    if (v == 0.0) v = 0.0;
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.6e", v);
    return buf;
}

std::string format_complex(cplx c) {
    const double scale = std::max(std::abs(c.real()), std::abs(c.imag()));
    if (std::abs(c.imag()) <= 1e-12 * scale || c.imag() == 0.0) return format_number(c.real());
    std::string s = format_number(c.real());
    const std::string im = format_number(c.imag());
    if (im[0] != '-') s += '+';
    return s + im + "i";
}

std::string to_csv(const std::vector<ExperimentReport>& reports, bool with_timing) {
    std::string out = "domain,case,residual,c_empirical,c_printed,match,grid,seed,seconds\n";
    for (const auto& r : reports) {
        for (const std::string* field : {&r.domain, &r.name, &r.grid})
            if (field->find_first_of(",\n\"") != std::string::npos)
                throw InvalidArgument("CSV field contains a separator: " + *field);
        out += r.domain + ',' + r.name + ',' + format_number(r.residual) + ',';
        out += (r.c_empirical ? format_complex(*r.c_empirical) : "-") + ',';
        out += (r.c_printed ? format_complex(*r.c_printed) : "-") + ',';
        out += std::string(r.match ? (*r.match ? "true" : "false") : "-") + ',';
        out += (r.grid.empty() ? "-" : r.grid) + ',' + std::to_string(r.seed) + ',';
        out += (with_timing ? format_number(r.seconds) : "-") + '\n';
    }
    return out;
}

std::string to_json(const std::vector<ExperimentReport>& reports, bool with_timing) {
    ojson list = ojson::array();
    for (const auto& r : reports) {
        ojson j;
        j["domain"] = r.domain;
        j["case"] = r.name;
        if (!r.criterion.empty()) j["criterion"] = r.criterion;
        j["config"] = r.config.empty() ? ojson::object() : ojson::parse(r.config);
        j["residual"] = number_json(r.residual);
        j["c_empirical"] = r.c_empirical ? complex_json(*r.c_empirical) : ojson();
        j["c_printed"] = r.c_printed ? complex_json(*r.c_printed) : ojson();
        j["match"] = r.match ? ojson(*r.match) : ojson();
        ojson cands = ojson::array();
        for (const auto& c : r.candidates)
            cands.push_back({{"label", c.label}, {"value", complex_json(c.value)}, {"match", c.match}});
        j["candidates"] = cands;
        ojson metrics = ojson::object();
        for (const auto& [k, v] : r.metrics) metrics[k] = number_json(v);
        j["metrics"] = metrics;
        ojson notes = ojson::object();
        for (const auto& [k, v] : r.notes) notes[k] = v;
        j["notes"] = notes;
        j["warnings"] = r.warnings;
        j["grid"] = r.grid;
        j["seed"] = r.seed;
        j["seconds"] = with_timing ? ojson(r.seconds) : ojson();
        if (!r.curve.empty()) {
            ojson curve = ojson::array();
            for (auto [x, y] : r.curve) curve.push_back({number_json(x), number_json(y)});
            j["curve"] = curve;
        }
        list.push_back(std::move(j));
    }
    return list.dump(2) + "\n";
}

std::string to_plot_data(const std::vector<ExperimentReport>& reports) {
    std::string out;
    for (const auto& r : reports) {
        if (r.curve.empty()) continue;
        out += "# " + r.domain + " " + r.name + "\n";
        for (auto [x, y] : r.curve) out += format_number(x) + " " + format_number(y) + "\n";
        out += "\n";
    }
    return out;
}

void write_text(const std::string& path, const std::string& text) {
    std::ofstream os(path, std::ios::binary);
    if (!os) throw Error("cannot open " + path + " for writing");
    os << text;
    if (!os) throw Error("failed writing " + path);
}

}  // namespace ridgekit
