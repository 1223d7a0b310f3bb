#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "ridgekit/report.hpp"

namespace ridgekit {

// One experiment. `params` is the JSON object text of the domain parameters;
// see the README for the keys each domain accepts.
struct RunConfig {
    std::string domain;     // fp, euclid, gconv, disk, dplane
    std::string name;       // case label, generated from the parameters when empty
    std::string criterion;  // set from the enclosing suite file
    std::uint64_t seed = 0;
    std::string params = "{}";
    bool refinement = false;  // euclid: add a halved-spacing row per level
    std::string output;       // JSON report path, optional
};

// Parses one run object {"domain", "case", "seed", "params", "refinement", "output"}.
RunConfig parse_run(const std::string& json_text);
// A file holds either a run object, a list of them, or a suite
// {"suite", "criterion", "runs": [...]}.
std::vector<RunConfig> parse_config_file(const std::string& path);
// Every `<dir>/ac-*.json` whose suite field equals `suite`, in file-name order.
std::vector<RunConfig> load_suite(const std::string& dir, const std::string& suite);

// Rejects malformed configurations (unknown domain or key, p not prime, bad
// dimensions) with ValidationError before any numerics run.
void validate(const RunConfig& cfg);

// Runs one configuration; batteries and refinement sweeps give several rows.
// Module errors are rethrown with the case label prefixed.
std::vector<ExperimentReport> run(const RunConfig& cfg);
// Runs all configurations in order and returns the rows sorted by (domain, case).
std::vector<ExperimentReport> run_all(const std::vector<RunConfig>& configs);

}  // namespace ridgekit
