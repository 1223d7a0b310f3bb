// Acceptance run: executes the "acceptance" suite in-process on one thread,
// prints one PASS/FAIL line per criterion, then reruns the suite through the
// CLI with eight threads and compares the CSV bytes.
//
// usage: ridgekit_acceptance <configs dir> <ridgekit executable>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "ridgekit/parallel.hpp"
#include "ridgekit/report.hpp"
#include "ridgekit/runner.hpp"
#include "ridgekit/types.hpp"

using namespace ridgekit;

namespace {

using Rows = std::vector<ExperimentReport>;

struct Verdict {
    bool ok = true;
    std::vector<std::string> lines;

    void require(bool cond, const std::string& what) {
        if (!cond) ok = false;
        lines.push_back(std::string(cond ? "    ok    " : "    FAIL  ") + what);
    }
};

std::string fmt(const char* f, double a, double b = 0.0, double c = 0.0) {
    char buf[256];
    std::snprintf(buf, sizeof buf, f, a, b, c);
    return buf;
}

bool starts_with(const std::string& s, const std::string& p) { return s.rfind(p, 0) == 0; }

const ExperimentReport* find(const Rows& rows, const std::string& domain, const std::string& name) {
    for (const auto& r : rows)
        if (r.domain == domain && r.name == name) return &r;
    return nullptr;
}

// every row whose case starts with `prefix`
std::vector<const ExperimentReport*> with_prefix(const Rows& rows, const std::string& domain,
                                                 const std::string& prefix) {
    std::vector<const ExperimentReport*> out;
    for (const auto& r : rows)
        if (r.domain == domain && starts_with(r.name, prefix)) out.push_back(&r);
    return out;
}

void residual_at_most(Verdict& v, const Rows& rows, const std::string& domain, const std::string& name, double tol) {
    const ExperimentReport* r = find(rows, domain, name);
    if (!r) {
        v.require(false, domain + "/" + name + " missing");
        return;
    }
    v.require(r->residual <= tol, domain + "/" + name + fmt(" residual %.3e <= %g", r->residual, tol));
}

Verdict ac1(const Rows& rows) {
    Verdict v;
    std::map<std::string, int> admissible_per_field;
    double worst = 0.0, worst_spread = 0.0;
    std::set<std::string> constants;
    for (const auto& r : rows) {
        if (r.domain != "fp") continue;
        if (r.has_warning("nonzero_zero_mode") || r.metric("admissible") < 0.5) continue;
        admissible_per_field[r.grid]++;
        worst = std::max(worst, r.residual);
        worst_spread = std::max(worst_spread, r.metric("ratio_spread"));
        constants.insert(r.grid + ":" + r.note("matching_constant"));
        if (r.metric("trials") < 20) v.require(false, r.name + " ran fewer than 20 targets");
    }
    for (unsigned p : {3u, 5u, 7u})
        for (unsigned m : {1u, 2u}) {
            const std::string g = "F" + std::to_string(p) + "^" + std::to_string(m);
            v.require(admissible_per_field[g] >= 4, g + fmt(": %.0f admissible pairs (>= 4)", admissible_per_field[g]));
        }
    v.require(worst <= 1e-9, fmt("max residual %.3e <= 1e-9", worst));
    v.require(worst_spread <= 1e-9, fmt("max ratio spread %.3e <= 1e-9", worst_spread));
    std::string c;
    for (const auto& s : constants) c += (c.empty() ? "" : ", ") + s;
    v.require(!constants.empty(), "matching printed constant per field: " + c);
    return v;
}

Verdict ac2(const Rows& rows) {
    Verdict v;
    residual_at_most(v, rows, "euclid", "reconstruct-m1", 0.05);
    residual_at_most(v, rows, "euclid", "reconstruct-m2", 0.10);
    const ExperimentReport* h1 = find(rows, "euclid", "halving-m1-h1");
    v.require(h1 != nullptr, "halving rows present");
    if (h1) {
        const double gain = h1->metric("halving_gain");
        v.require(gain >= 2.0, fmt("halving gain %.2f >= 2", gain));
    }
    return v;
}

Verdict ac3(const Rows& rows) {
    Verdict v;
    residual_at_most(v, rows, "euclid", "slice-m1", 1e-5);
    for (const char* c : {"slice-m2k1", "slice-m3k1", "slice-m3k2"}) residual_at_most(v, rows, "dplane", c, 1e-5);
    return v;
}

Verdict ac4(const Rows& rows) {
    Verdict v;
    auto eq = with_prefix(rows, "gconv", "equivariance-");
    double worst = 0.0;
    std::set<std::string> ns;
    for (const auto* r : eq) {
        worst = std::max(worst, r->residual);
        ns.insert(r->name.substr(13, r->name.find('-', 13) - 13));
    }
    v.require(ns.size() == 8, fmt("equivariance runs for %.0f group orders (n = 1..8)", double(ns.size())));
    v.require(!eq.empty() && worst <= 1e-12, fmt("max equivariance defect %.3e <= 1e-12", worst));
    residual_at_most(v, rows, "gconv", "reconstruct-n4-m1", 0.05);
    residual_at_most(v, rows, "gconv", "reconstruct-n6-m2", 0.12);
    return v;
}

Verdict ac5(const Rows& rows) {
    Verdict v;
    const ExperimentReport* r = find(rows, "dplane", "radon-step-m2");
    if (!r) {
        v.require(false, "dplane/radon-step-m2 missing");
        return v;
    }
    v.require(r->residual <= 0.08, fmt("step reconstruction residual %.3e <= 0.08", r->residual));
    // the inversion formula reads f = K S[R f]; with S[R f] = c f the prefactor is 1/c
    const double K = 1.0 / (2.0 * kTwoPi);
    const double c = r->c_empirical ? r->c_empirical->real() : 0.0;
    const double rel = c != 0.0 ? std::abs(1.0 / c - K) / K : 1e300;
    v.require(rel <= 0.10, fmt("prefactor 1/c = %.5f vs 1/(2(2pi)^{m-1}) = %.5f, off by %.2f%% (<= 10%%)", 1.0 / c, K,
                               100.0 * rel));
    return v;
}

Verdict ac6(const Rows& rows) {
    Verdict v;
    residual_at_most(v, rows, "dplane", "invert-m2k1", 0.05);
    residual_at_most(v, rows, "dplane", "invert-m3k2", 0.10);
    return v;
}

Verdict ac7(const Rows& rows) {
    Verdict v;
    std::map<std::uint64_t, int> per_seed;
    std::set<std::string> lemmas;
    double worst = 0.0;
    for (const auto* r : with_prefix(rows, "dplane", "measures-")) {
        per_seed[r->seed]++;
        const double z = r->metric("z");
        worst = std::max(worst, std::abs(z));
        if (!(std::abs(z) <= 3.0)) v.require(false, r->name + fmt(" z = %.2f", z));
        if (r->metric("trials") < 1e5) v.require(false, r->name + " below 1e5 trials");
        const std::string rest = r->name.substr(r->name.find('-', 9) + 1);
        lemmas.insert(rest.substr(0, rest.rfind('-')));
    }
    v.require(lemmas.size() == 3, fmt("%.0f lemmas covered", double(lemmas.size())));
    v.require(per_seed.size() >= 2, fmt("%.0f seeds", double(per_seed.size())));
    v.require(!per_seed.empty() && worst <= 3.0, fmt("max |z| = %.2f <= 3", worst));
    return v;
}

Verdict ac8(const Rows& rows) {
    Verdict v;
    residual_at_most(v, rows, "disk", "calibrate", 0.10);
    residual_at_most(v, rows, "disk", "reconstruct", 0.15);
    residual_at_most(v, rows, "disk", "horocycle", 1e-8);
    if (const ExperimentReport* r = find(rows, "disk", "calibrate")) {
        std::string winner;
        try {
            winner = r->note("calibration_winner");
        } catch (const std::exception&) {
        }
        v.require(!winner.empty(), "calibration winner: " + winner);
    }
    return v;
}

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

}  // namespace

int main(int argc, char** argv) {
    if (argc < 3) {
        std::fprintf(stderr, "usage: %s <configs dir> <ridgekit executable>\n", argv[0]);
        return 2;
    }
    const std::string dir = argv[1], exe = argv[2];

    struct Criterion {
        std::string id;
        double budget_seconds;
        std::function<Verdict(const Rows&)> check;
    };
    const std::vector<Criterion> criteria = {
        {"AC-1", 60, ac1}, {"AC-2", 300, ac2}, {"AC-3", 120, ac3}, {"AC-4", 300, ac4},
        {"AC-5", 180, ac5}, {"AC-6", 300, ac6}, {"AC-7", 180, ac7}, {"AC-8", 600, ac8},
    };

    set_thread_count(1);
    std::vector<RunConfig> suite;
    try {
        suite = load_suite(dir, "acceptance");
        for (const auto& c : suite) validate(c);
    } catch (const std::exception& e) {
        std::printf("suite failed to load: %s\n", e.what());
        return 1;
    }

    Rows all;
    int failures = 0;
    for (const auto& crit : criteria) {
        Rows rows;
        const auto t0 = std::chrono::steady_clock::now();
        std::string error;
        try {
            for (const auto& c : suite)
                if (c.criterion == crit.id)
                    for (auto& r : run(c)) rows.push_back(std::move(r));
        } catch (const std::exception& e) {
            error = e.what();
        }
        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        Verdict v = error.empty() ? crit.check(rows) : Verdict{};
        if (!error.empty()) v.require(false, "run error: " + error);
        v.require(secs <= crit.budget_seconds, fmt("runtime %.1f s <= %.0f s", secs, crit.budget_seconds));
        std::printf("%s %s\n", crit.id.c_str(), v.ok ? "PASS" : "FAIL");
        for (const auto& l : v.lines) std::printf("%s\n", l.c_str());
        std::fflush(stdout);
        if (!v.ok) ++failures;
        for (auto& r : rows) all.push_back(std::move(r));
    }
    set_thread_count(0);

    // AC-9: same suite through the CLI on eight threads, CSV compared byte for byte
    {
        Verdict v;
        sort_reports(all);
        const std::string mine = to_csv(all);
        const std::string tmp = "ridgekit_acceptance_threads8.csv";
        const std::string cmd =
            "RIDGEKIT_THREADS=8 \"" + exe + "\" all --suite acceptance --configs \"" + dir + "\" --csv " + tmp;
        const auto t0 = std::chrono::steady_clock::now();
        const int rc = std::system(cmd.c_str());
        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        v.require(rc == 0, fmt("cli exit status %.0f (8 threads, %.1f s)", double(rc), secs));
        const std::string theirs = read_file(tmp);
        v.require(!mine.empty() && mine == theirs,
                  fmt("CSV bytes identical across 1 and 8 threads (%.0f vs %.0f bytes)", double(mine.size()),
                      double(theirs.size())));
        std::remove(tmp.c_str());
        std::printf("AC-9 %s\n", v.ok ? "PASS" : "FAIL");
        for (const auto& l : v.lines) std::printf("%s\n", l.c_str());
        if (!v.ok) ++failures;
    }

    std::printf("%d of 9 criteria failed\n", failures);
    return failures == 0 ? 0 : 1;
}
