// ridgekit command line: one subcommand per domain plus suite runners.

#include <cstdio>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "ridgekit/errors.hpp"
#include "ridgekit/report.hpp"
#include "ridgekit/runner.hpp"

#ifndef RIDGEKIT_DEFAULT_CONFIG_DIR
#define RIDGEKIT_DEFAULT_CONFIG_DIR "configs"
#endif

namespace {

using json = nlohmann::ordered_json;
using namespace ridgekit;

struct Output {
    std::string json_path;
    std::string csv_path;
    std::string plot_path;
    bool timing = false;
};

void add_output_flags(CLI::App* app, Output& o) {
    app->add_option("--out", o.json_path, "write the JSON report list here");
    app->add_option("--csv", o.csv_path, "write the CSV table here (stdout when no output is given)");
    app->add_option("--plot", o.plot_path, "write refinement curves as x y columns");
    app->add_flag("--timing", o.timing, "fill the seconds column");
}

void emit(const std::vector<ExperimentReport>& reports, const Output& o) {
    if (!o.json_path.empty()) write_text(o.json_path, to_json(reports, o.timing));
    if (!o.csv_path.empty()) write_text(o.csv_path, to_csv(reports, o.timing));
    if (!o.plot_path.empty()) write_text(o.plot_path, to_plot_data(reports));
    if (o.json_path.empty() && o.csv_path.empty()) std::cout << to_csv(reports, o.timing);
}

// "6,128,6,96,10,128" -> [6,128,6,96,10,128]
json number_list(const std::string& spec) {
    json out = json::array();
    std::stringstream ss(spec);
    std::string item;
    while (std::getline(ss, item, ',')) {
        try {
            std::size_t used = 0;
            double v = std::stod(item, &used);
            if (used != item.size()) throw std::invalid_argument(item);
            out.push_back(v);
        } catch (const std::exception&) {
            throw ValidationError("grid entry is not a number: '" + item + "'");
        }
    }
    return out;
}

struct Single {
    RunConfig cfg;
    json params = json::object();
    Output out;
};

template <class T>
void set_if(json& p, const std::string& key, const T& v, bool present) {
    if (present) p[key] = v;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Ridgelet transform and reconstruction experiments"};
    app.require_subcommand(1);

    Single single;
    auto& P = single.params;
    std::uint64_t seed = 0;
    std::string name;

    auto common = [&](CLI::App* sub) {
        sub->add_option("--seed", seed, "random seed");
        sub->add_option("--case", name, "case label");
        add_output_flags(sub, single.out);
    };

    // fp
    auto* fp = app.add_subcommand("fp", "finite-field network and ridgelet transform");
    unsigned p_ = 0, m_fp = 1;
    std::size_t trials_fp = 20;
    std::string sigma_fp, rho_fp;
    bool battery = false;
    fp->add_option("--p", p_, "prime field size")->required();
    fp->add_option("--m", m_fp, "dimension");
    fp->add_option("--sigma", sigma_fp, "activation name or file");
    fp->add_option("--rho", rho_fp, "ridgelet function name or file");
    fp->add_option("--trials", trials_fp, "random targets per pair");
    fp->add_flag("--battery", battery, "run the built-in pair battery");
    common(fp);

    // euclid
    auto* eu = app.add_subcommand("euclid", "Euclidean network and ridgelet transform");
    unsigned m_eu = 1, order_eu = 2;
    std::string sigma_eu = "gauss", grid_eu;
    std::size_t refine = 0;
    bool slice_eu = false;
    eu->add_option("--m", m_eu, "dimension (1 or 2)");
    eu->add_option("--sigma", sigma_eu, "relu, step, gauss or tanh");
    eu->add_option("--rho-order", order_eu, "Gaussian-derivative order of rho");
    eu->add_option("--grid", grid_eu, "X,Nx,A,Na,B,Nb");
    eu->add_option("--refine", refine, "extra rows with every spacing halved");
    eu->add_flag("--slice", slice_eu, "compare the direct transform with the Fourier-slice path");
    common(eu);

    // gconv
    auto* gc = app.add_subcommand("gconv", "cyclic group-convolution network");
    std::size_t n_gc = 4;
    unsigned m_gc = 1, order_gc = 2;
    std::string sigma_gc = "gauss", grid_gc, target_gc = "equivariant";
    bool equiv = false;
    gc->add_option("--n", n_gc, "group order");
    gc->add_option("--m", m_gc, "filter subspace dimension");
    gc->add_option("--sigma", sigma_gc, "activation");
    gc->add_option("--rho-order", order_gc, "Gaussian-derivative order of rho");
    gc->add_option("--grid", grid_gc, "X,Nx,A,Na,B,Nb");
    gc->add_option("--target", target_gc, "equivariant or control");
    gc->add_flag("--equivariance", equiv, "check network equivariance for a random gamma");
    common(gc);

    // disk
    auto* dk = app.add_subcommand("disk", "Poincare disk network and Helgason transform");
    std::string grid_dk, sigma_dk = "gauss", constants_dk, method_dk;
    unsigned order_dk = 2;
    bool calibrate = false, horocycle = false;
    dk->add_option("--grid", grid_dk, "r_max,nr,ntheta");
    dk->add_option("--sigma", sigma_dk, "activation");
    dk->add_option("--rho-order", order_dk, "Gaussian-derivative order of rho");
    dk->add_option("--constants", constants_dk, "calibrate, a (|W|=1, rho=1) or b (|W|=1, rho=1/2)");
    dk->add_option("--method", method_dk, "slice or spatial");
    dk->add_flag("--calibrate", calibrate, "round-trip calibration only");
    dk->add_flag("--horocycle", horocycle, "single-neuron horocycle constancy");
    common(dk);

    // dplane
    auto* dp = app.add_subcommand("dplane", "d-plane transform and pooling networks");
    unsigned m_dp = 2, k_dp = 1;
    std::string variant = "stiefel", activation;
    double s_dp = 0.0, t_dp = -1.0;
    std::size_t frames = 0;
    bool invert = false, slice_dp = false;
    dp->add_option("--m", m_dp, "ambient dimension");
    dp->add_option("--k", k_dp, "plane codimension");
    dp->add_option("--variant", variant, "affine, similitude or stiefel");
    auto* s_opt = dp->add_option("--s", s_dp, "similitude Laplacian exponent");
    auto* t_opt = dp->add_option("--t", t_dp, "stiefel activation exponent: -1 step, -2 relu, 0 delta");
    dp->add_option("--activation", activation, "stiefel activation: step, relu or delta");
    dp->add_option("--frames", frames, "number of frames");
    dp->add_flag("--invert", invert, "Gaussian-probe inversion");
    dp->add_flag("--slice", slice_dp, "Fourier-slice check");
    common(dp);
    auto* vm = dp->add_subcommand("validate-measures", "Monte-Carlo checks of the measure identities");
    unsigned m_vm = 0, k_vm = 0;
    std::size_t trials_vm = 100000;
    std::string lemma = "all";
    vm->add_option("--m", m_vm, "ambient dimension");
    vm->add_option("--k", k_vm, "frame size");
    vm->add_option("--trials", trials_vm, "samples per check");
    vm->add_option("--lemma", lemma, "all, polar, polar-integration or svd");
    common(vm);

    // suites
    auto* all = app.add_subcommand("all", "run a named suite of configs");
    std::string suite = "acceptance", config_dir = RIDGEKIT_DEFAULT_CONFIG_DIR;
    all->add_option("--suite", suite, "suite name");
    all->add_option("--configs", config_dir, "directory holding ac-*.json");
    common(all);

    auto* run = app.add_subcommand("run", "run config files");
    std::vector<std::string> files;
    run->add_option("configs", files, "JSON config files")->required();
    common(run);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        std::vector<RunConfig> configs;
        RunConfig& cfg = single.cfg;
        cfg.seed = seed;
        cfg.name = name;
        if (fp->parsed()) {
            cfg.domain = "fp";
            P["p"] = p_;
            P["m"] = m_fp;
            P["trials"] = trials_fp;
            if (battery || sigma_fp.empty()) {
                P["mode"] = "battery";
            } else {
                if (rho_fp.empty()) throw ValidationError("--rho is required with --sigma");
                P["sigma"] = sigma_fp;
                P["rho"] = rho_fp;
            }
        } else if (eu->parsed()) {
            cfg.domain = "euclid";
            P["m"] = m_eu;
            P["sigma"] = sigma_eu;
            P["rho_order"] = order_eu;
            if (!grid_eu.empty()) P["grid"] = number_list(grid_eu);
            if (slice_eu) P["mode"] = "slice";
            if (refine) P["levels"] = refine;
        } else if (gc->parsed()) {
            cfg.domain = "gconv";
            P["n"] = n_gc;
            P["m"] = m_gc;
            P["sigma"] = sigma_gc;
            P["rho_order"] = order_gc;
            if (equiv) {
                P["mode"] = "equivariance";
            } else {
                P["target"] = target_gc;
                if (!grid_gc.empty()) P["grid"] = number_list(grid_gc);
            }
        } else if (dk->parsed()) {
            cfg.domain = "disk";
            P["mode"] = calibrate ? "calibrate" : horocycle ? "horocycle" : "reconstruct";
            P["sigma"] = sigma_dk;
            if (!horocycle) P["rho_order"] = order_dk;
            if (!grid_dk.empty() && !horocycle) {
                json g = number_list(grid_dk);
                if (g.size() != 3) throw ValidationError("disk --grid takes r_max,nr,ntheta");
                P["r_max"] = g[0];
                P["nr"] = static_cast<std::size_t>(g[1].get<double>());
                P["ntheta"] = static_cast<std::size_t>(g[2].get<double>());
            }
            if (!constants_dk.empty()) P["constants"] = constants_dk;
            if (!method_dk.empty()) P["method"] = method_dk;
        } else if (dp->parsed() && vm->parsed()) {
            cfg.domain = "dplane";
            P["mode"] = "measures";
            P["trials"] = trials_vm;
            if (m_vm || k_vm) {
                P["lemma"] = lemma == "all" ? "polar-integration" : lemma;
                P["m"] = m_vm;
                P["k"] = k_vm;
            } else {
                P["lemma"] = lemma;
            }
        } else if (dp->parsed()) {
            cfg.domain = "dplane";
            P["m"] = m_dp;
            P["k"] = k_dp;
            if (frames) P["frames"] = frames;
            if (invert) {
                P["mode"] = "invert";
            } else if (slice_dp) {
                P["mode"] = "slice";
            } else {
                P["variant"] = variant;
                if (variant == "stiefel") {
                    if (!activation.empty()) P["activation"] = activation;
                    if (t_opt->count()) {
                        if (t_dp == -1.0) P["activation"] = "step";
                        else if (t_dp == -2.0) P["activation"] = "relu";
                        else if (t_dp == 0.0) P["activation"] = "delta";
                        else throw ValidationError("--t must be -1, -2 or 0");
                    }
                }
                set_if(P, "s", s_dp, s_opt->count() > 0);
            }
        }

        if (all->parsed()) {
            configs = load_suite(config_dir, suite);
        } else if (run->parsed()) {
            for (const auto& f : files)
                for (auto& c : parse_config_file(f)) configs.push_back(std::move(c));
        } else {
            cfg.params = P.dump();
            configs.push_back(cfg);
        }

        for (const auto& c : configs) validate(c);
        std::vector<ExperimentReport> reports;
        for (const auto& c : configs) {
            std::vector<ExperimentReport> rows = ridgekit::run(c);
            if (!c.output.empty()) write_text(c.output, to_json(rows, single.out.timing));
            for (auto& r : rows) reports.push_back(std::move(r));
        }
        sort_reports(reports);
        emit(reports, single.out);
    } catch (const ValidationError& e) {
        std::fprintf(stderr, "ridgekit: %s\n", e.what());
        return 2;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "ridgekit: %s\n", e.what());
        return 1;
    }
    return 0;
}
