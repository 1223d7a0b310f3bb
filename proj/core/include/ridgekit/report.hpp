#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "ridgekit/types.hpp"

namespace ridgekit {

struct ConstantCandidate {
    std::string label;
    cplx value;
    bool match = false;
};

// One row of output. Optional fields are written as "-" in the CSV.
struct ExperimentReport {
    std::string domain;
    std::string name;       // the "case" column
    std::string criterion;  // acceptance tag such as "AC-2", may be empty
    std::string config;     // compact JSON echo of the run configuration
    double residual = 0.0;
    std::optional<cplx> c_empirical;
    std::optional<cplx> c_printed;
    std::optional<bool> match;
    std::string grid;
    std::uint64_t seed = 0;
    double seconds = 0.0;
    std::vector<ConstantCandidate> candidates;
    std::vector<std::pair<std::string, double>> metrics;
    std::vector<std::pair<std::string, std::string>> notes;
    std::vector<std::string> warnings;
    std::vector<std::pair<double, double>> curve;  // residual against refinement

    void add_metric(const std::string& key, double v) { metrics.emplace_back(key, v); }
    void add_note(const std::string& key, const std::string& v) { notes.emplace_back(key, v); }
    void add_warning(const std::string& w);
    // Throws InvalidArgument when absent.
    double metric(const std::string& key) const;
    std::string note(const std::string& key) const;
    bool has_warning(const std::string& w) const;
};

// Closed warning set.
bool is_known_warning(const std::string& w);

// Stable sort by (domain, case).
void sort_reports(std::vector<ExperimentReport>& reports);

// Header `domain,case,residual,c_empirical,c_printed,match,grid,seed,seconds`
// and one row per report; numbers use %.6e. The seconds column holds "-"
// unless with_timing is set, so untimed output is reproducible byte for byte.
std::string to_csv(const std::vector<ExperimentReport>& reports, bool with_timing = false);
std::string to_json(const std::vector<ExperimentReport>& reports, bool with_timing = false);
// "# domain case" blocks of "x y" lines for every report with a curve.
std::string to_plot_data(const std::vector<ExperimentReport>& reports);

// Throws Error when the file cannot be written.
void write_text(const std::string& path, const std::string& text);

std::string format_number(double v);
std::string format_complex(cplx c);

}  // namespace ridgekit
