#include "ridgekit/runner.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <set>
#include <sstream>

#include "json.hpp"

#include "ridgekit/disk.hpp"
#include "ridgekit/dplane.hpp"
#include "ridgekit/errors.hpp"
#include "ridgekit/euclid.hpp"
#include "ridgekit/finite_field.hpp"
#include "ridgekit/gconv.hpp"
#include "ridgekit/measures.hpp"

namespace ridgekit {

namespace {

using json = nlohmann::ordered_json;

std::string fmt(const char* f, double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, f, v);
    return buf;
}

// Typed access to a params object. Every key must be consumed, so a typo in a
// config is reported instead of silently falling back to a default.
class Params {
public:
    Params(const json& j, std::string ctx) : j_(j), ctx_(std::move(ctx)) {
        if (!j_.is_object()) fail("params must be an object");
    }

    bool has(const std::string& key) const { return j_.contains(key); }

    double num(const std::string& key, double def) {
        if (!take(key)) return def;
        const json& v = j_.at(key);
        if (!v.is_number()) fail("'" + key + "' must be a number");
        return v.get<double>();
    }
    double num(const std::string& key) {
        require(key);
        return num(key, 0.0);
    }

    std::size_t count(const std::string& key, std::size_t def, std::size_t min = 1) {
        if (!take(key)) return def;
        const json& v = j_.at(key);
        if (!v.is_number_integer() || v.get<long long>() < static_cast<long long>(min))
            fail("'" + key + "' must be an integer >= " + std::to_string(min));
        return v.get<std::size_t>();
    }
    std::size_t count(const std::string& key) {
        require(key);
        return count(key, 0);
    }

    std::string str(const std::string& key, const std::string& def) {
        if (!take(key)) return def;
        const json& v = j_.at(key);
        if (!v.is_string()) fail("'" + key + "' must be a string");
        return v.get<std::string>();
    }
    std::string str(const std::string& key) {
        require(key);
        return str(key, "");
    }

    bool flag(const std::string& key, bool def) {
        if (!take(key)) return def;
        const json& v = j_.at(key);
        if (!v.is_boolean()) fail("'" + key + "' must be true or false");
        return v.get<bool>();
    }

    RVec numbers(const std::string& key, std::size_t len) {
        require(key);
        take(key);
        const json& v = j_.at(key);
        if (!v.is_array() || v.size() != len) fail("'" + key + "' must be a list of " + std::to_string(len) + " numbers");
        RVec out;
        for (const auto& e : v) {
            if (!e.is_number()) fail("'" + key + "' must hold numbers");
            out.push_back(e.get<double>());
        }
        return out;
    }

    void finish() const {
        for (auto it = j_.begin(); it != j_.end(); ++it)
            if (!used_.count(it.key())) fail("unknown parameter '" + it.key() + "'");
    }

    [[noreturn]] void fail(const std::string& msg) const { throw ValidationError(ctx_ + ": " + msg); }

private:
    bool take(const std::string& key) {
        if (!j_.contains(key)) return false;
        used_.insert(key);
        return true;
    }
    void require(const std::string& key) const {
        if (!j_.contains(key)) fail("missing parameter '" + key + "'");
    }

    const json& j_;
    std::string ctx_;
    std::set<std::string> used_;
};

template <class F>
auto checked(Params& p, F make) -> decltype(make()) {
    try {
        return make();
    } catch (const ValidationError&) {
        throw;
    } catch (const Error& e) {
        p.fail(e.what());
    }
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

bool within(cplx a, cplx b, double tol) { return std::abs(a - b) <= tol * std::abs(b); }

ExperimentReport base_report(const RunConfig& cfg, const std::string& name) {
    ExperimentReport r;
    r.domain = cfg.domain;
    r.name = name;
    r.criterion = cfg.criterion;
    r.seed = cfg.seed;
    json echo;
    echo["domain"] = cfg.domain;
    echo["case"] = cfg.name;
    echo["seed"] = cfg.seed;
    echo["params"] = json::parse(cfg.params);
    if (cfg.refinement) echo["refinement"] = true;
    r.config = echo.dump();
    return r;
}

// A parsed run: validation happens while building it, execution is deferred.
using Job = std::function<std::vector<ExperimentReport>()>;

// ---- finite field ----

Job plan_fp(const RunConfig& cfg, Params& p) {
    const std::size_t pp = p.count("p");
    if (!is_prime(pp)) p.fail("p not prime: " + std::to_string(pp));
    const unsigned prime = static_cast<unsigned>(pp);
    const unsigned m = static_cast<unsigned>(p.count("m", 1));
    if (m > 4 || std::pow(double(prime), double(m)) > 4096.0) p.fail("p^m must stay below 4096");
    const std::string mode = p.str("mode", p.has("sigma") ? "pair" : "battery");
    const std::size_t trials = p.count("trials", 20);
    std::vector<std::pair<std::string, std::string>> pairs;
    if (mode == "pair") {
        pairs.emplace_back(p.str("sigma"), p.str("rho"));
    } else if (mode == "battery") {
        pairs = {{"char1", "char1"},          {"char1", "delta0"},          {"delta0", "char1"},
                 {"ramp", "char1"},           {"char2", "ramp"},            {"centered-delta0", "delta0"},
                 {"delta0", "centered-delta0"}, {"delta0", "delta0"},         {"ramp", "ramp"}};
    } else {
        p.fail("mode must be pair or battery");
    }
    p.finish();
    struct Pair {
        FpActivation sigma, rho;
    };
    std::vector<Pair> acts;
    for (const auto& [s, r] : pairs)
        acts.push_back(checked(p, [&] { return Pair{fp_activation(s, prime), fp_activation(r, prime)}; }));

    char prefix[48];
    std::snprintf(prefix, sizeof prefix, "p%u-m%u", prime, m);
    const std::string stem = cfg.name.empty() ? prefix : cfg.name;
    char grid[32];
    std::snprintf(grid, sizeof grid, "F%u^%u", prime, m);

    return [=] {
        std::vector<ExperimentReport> out;
        for (const auto& a : acts) {
            const auto t0 = std::chrono::steady_clock::now();
            ExperimentReport r = base_report(cfg, stem + "-" + a.sigma.name + "-" + a.rho.name);
            r.grid = grid;
            FpConstants k = fp_constant(a.sigma, a.rho, m, cfg.seed);
            Rng rng(cfg.seed);
            double res = 0.0, spread = 0.0;
            cplx c = k.empirical;
            for (std::size_t t = 0; t < trials; ++t) {
                FpReconstruction rec = fp_reconstruct(fp_random(prime, m, rng), a.sigma, a.rho);
                if (t == 0) c = rec.c;
                res = std::max(res, rec.residual);
                spread = std::max(spread, rec.ratio_spread);
            }
            r.residual = res;
            r.c_empirical = c;
            r.c_printed = k.theorem_form;
            r.match = k.matches_theorem;
            r.candidates.push_back({"theorem p^-(m-1)", k.theorem_form, k.matches_theorem});
            r.candidates.push_back({"proof p^(m-1)", k.proof_form, k.matches_proof});
            r.add_metric("ratio_spread", spread);
            r.add_metric("zero_mode", std::abs(k.zero_mode));
            r.add_metric("trials", double(trials));
            const bool admissible = std::abs(k.zero_mode) <= 1e-12 * std::max(1.0, std::abs(k.proof_form));
            r.add_metric("admissible", admissible ? 1.0 : 0.0);
            if (!admissible) r.add_warning("nonzero_zero_mode");
            r.add_note("matching_constant", k.matches_theorem && k.matches_proof ? "both"
                                            : k.matches_theorem                  ? "theorem"
                                            : k.matches_proof                    ? "proof"
                                                                                 : "neither");
            r.seconds = seconds_since(t0);
            out.push_back(std::move(r));
        }
        return out;
    };
}

// ---- euclidean ----

EuclidGrid euclid_grid(Params& p, unsigned m) {
    EuclidGrid g;
    g.m = m;
    if (m == 2) {
        g.x_half = 5.0;
        g.nx = 40;
        g.a_half = 10.0;
        g.na = 50;
        g.b_half = 30.0;
        g.nb = 60;
    }
    if (p.has("grid")) {
        RVec v = p.numbers("grid", 6);
        if (v[0] <= 0 || v[2] <= 0 || v[4] <= 0 || v[1] < 2 || v[3] < 2 || v[5] < 2)
            p.fail("grid needs positive half-widths and at least 2 points per axis");
        g.x_half = v[0];
        g.nx = static_cast<std::size_t>(v[1]);
        g.a_half = v[2];
        g.na = static_cast<std::size_t>(v[3]);
        g.b_half = v[4];
        g.nb = static_cast<std::size_t>(v[5]);
    }
    return g;
}

Job plan_euclid(const RunConfig& cfg, Params& p) {
    const unsigned m = static_cast<unsigned>(p.count("m"));
    if (m > 2) p.fail("euclid supports m = 1 or 2");
    const std::string mode = p.str("mode", "reconstruct");
    const std::string sigma_name = p.str("sigma", "gauss");
    const unsigned order = static_cast<unsigned>(p.count("rho_order", 2, 0));
    const EuclidGrid grid = euclid_grid(p, m);
    const std::size_t levels = p.count("levels", cfg.refinement ? 1 : 0, 0);
    const std::size_t n_omega = p.count("n_omega", 512);
    const double omega_max = p.num("omega_max", 14.0);
    const std::size_t nodes = p.count("nodes", 32);
    if (mode != "reconstruct" && mode != "slice") p.fail("mode must be reconstruct or slice");
    p.finish();
    const Activation sigma = checked(p, [&] { return make_activation(sigma_name); });
    const Mollifier rho = gaussian_mollifier(order);
    const std::string stem = cfg.name.empty() ? "m" + std::to_string(m) + "-" + sigma_name : cfg.name;

    if (mode == "slice") {
        return [=] {
            const auto t0 = std::chrono::steady_clock::now();
            ExperimentReport r = base_report(cfg, stem);
            r.grid = grid.describe();
            GridFunction f = gaussian_target(m, grid.nx, grid.x_half);
            ParamGrid pg = ridgelet(f, rho, ParamGrid(m, grid.na, grid.a_half, grid.nb, grid.b_half));
            double vmax = 0.0;
            for (cplx v : pg.values) vmax = std::max(vmax, std::abs(v));
            std::vector<std::size_t> sig;
            for (std::size_t i = 0; i < pg.values.size(); ++i)
                if (std::abs(pg.values[i]) >= 1e-3 * vmax) sig.push_back(i);
            const std::size_t n = std::min(nodes, sig.size());
            double diff = 0.0;
            for (std::size_t j = 0; j < n; ++j) {
                const std::size_t i = sig[j * sig.size() / n];
                cplx s = ridgelet_slice(f, rho, pg.a_point(i / pg.nb), pg.b_node(i % pg.nb), n_omega, omega_max);
                diff = std::max(diff, std::abs(s - pg.values[i]));
            }
            r.residual = diff / vmax;
            r.add_metric("nodes", double(n));
            r.add_metric("max_abs", vmax);
            r.seconds = seconds_since(t0);
            return std::vector<ExperimentReport>{r};
        };
    }

    return [=] {
        std::vector<ExperimentReport> out;
        std::vector<std::pair<double, double>> curve;
        EuclidGrid g = grid;
        for (std::size_t level = 0; level <= levels; ++level, g = g.halved()) {
            const auto t0 = std::chrono::steady_clock::now();
            ExperimentReport r = base_report(cfg, levels ? stem + "-h" + std::to_string(level) : stem);
            r.grid = g.describe();
            EuclidResult res = reconstruct(g, sigma, rho);
            r.residual = res.residual;
            r.c_empirical = res.c_empirical;
            if (res.admissible) {
                r.c_printed = res.c_frequency;
                r.match = within(res.c_empirical, res.c_frequency, 0.02);
                r.candidates.push_back({"(2pi)^{m-1} pairing |w|^-m", res.c_frequency, *r.match});
            }
            for (const auto& w : res.warnings) r.add_warning(w);
            curve.emplace_back(std::ldexp(1.0, -static_cast<int>(level)), res.residual);
            if (level > 0) r.add_metric("halving_gain", out.back().residual / res.residual);
            r.seconds = seconds_since(t0);
            out.push_back(std::move(r));
        }
        if (levels) out.back().curve = curve;
        return out;
    };
}

// ---- group convolution ----

Job plan_gconv(const RunConfig& cfg, Params& p) {
    const std::size_t n = p.count("n");
    const unsigned m = static_cast<unsigned>(p.count("m", 1));
    if (n > 64) p.fail("n must be at most 64");
    if (m > n || m > 2) p.fail("m must satisfy m <= n and m <= 2");
    const std::string mode = p.str("mode", "reconstruct");
    const std::string sigma_name = p.str("sigma", "gauss");
    const unsigned order = static_cast<unsigned>(p.count("rho_order", 2, 0));
    const std::string target_name = p.str("target", "equivariant");
    const std::size_t n_signals = p.count("signals", 8);
    const double scale = p.num("signal_scale", 1.0);
    if (mode != "reconstruct" && mode != "equivariance") p.fail("mode must be reconstruct or equivariance");
    if (target_name != "equivariant" && target_name != "control") p.fail("target must be equivariant or control");
    EuclidGrid grid;
    if (mode == "reconstruct") {
        grid = euclid_grid(p, m);
    } else {
        grid.m = m;
        grid.na = p.count("na", 8);
        grid.a_half = p.num("a_half", 3.0);
        grid.nb = p.count("nb", 12);
        grid.b_half = p.num("b_half", 4.0);
    }
    p.finish();
    const Activation sigma = checked(p, [&] { return make_activation(sigma_name); });
    const Mollifier rho = gaussian_mollifier(order);
    const std::string stem =
        cfg.name.empty() ? "n" + std::to_string(n) + "-m" + std::to_string(m) + "-" + mode : cfg.name;

    return [=] {
        const auto t0 = std::chrono::steady_clock::now();
        ExperimentReport r = base_report(cfg, stem);
        FilterSubspace H = FilterSubspace::standard(n, m);
        Rng rng(cfg.seed);
        if (mode == "reconstruct") {
            r.grid = grid.describe();
            EquivariantTarget f =
                target_name == "control" ? invariant_control_target(H) : gaussian_equivariant_target(H);
            std::vector<RVec> signals = random_signals_in(H, n_signals, scale, rng);
            GconvResult res = gconv_reconstruct(f, sigma, rho, H, grid, signals);
            r.residual = res.residual;
            r.c_empirical = res.c_empirical;
            r.c_printed = res.c_frequency;
            r.match = within(res.c_empirical, res.c_frequency, 0.1);
            r.candidates.push_back({"(2pi)^{m-1} pairing |w|^-m", res.c_frequency, *r.match});
            r.add_metric("residual_off_identity", res.residual_off_identity);
            r.add_metric("target_defect", equivariance_defect(f, n, signals));
        } else {
            char buf[96];
            std::snprintf(buf, sizeof buf, "n=%zu m=%u a=%g/%zu b=%g/%zu", n, m, grid.a_half, grid.na, grid.b_half,
                          grid.nb);
            r.grid = buf;
            ParamGrid gamma(m, grid.na, grid.a_half, grid.nb, grid.b_half);
            std::normal_distribution<double> N(0.0, 1.0);
            for (cplx& v : gamma.values) v = cplx(N(rng), N(rng));
            std::vector<RVec> signals;
            for (std::size_t s = 0; s < n_signals; ++s) {
                RVec x(n);
                for (double& v : x) v = scale * N(rng);
                signals.push_back(std::move(x));
            }
            double defect = 0.0, peak = 0.0;
            for (const RVec& x : signals) {
                CVec base = gconv_network(gamma, sigma, H, x);
                for (cplx v : base) peak = std::max(peak, std::abs(v));
                for (std::size_t g = 0; g < n; ++g) {
                    CVec moved = gconv_network(gamma, sigma, H, cyclic_shift(x, static_cast<long>(g)));
                    for (std::size_t h = 0; h < n; ++h)
                        defect = std::max(defect, std::abs(moved[h] - base[(h + n - g) % n]));
                }
            }
            r.residual = peak > 0 ? defect / peak : defect;
            r.add_metric("abs_defect", defect);
            r.add_metric("equivariant_target_defect",
                         equivariance_defect(gaussian_equivariant_target(H), n, signals));
            r.add_metric("control_target_defect", equivariance_defect(invariant_control_target(H), n, signals));
        }
        r.seconds = seconds_since(t0);
        return std::vector<ExperimentReport>{r};
    };
}

// ---- disk ----

DiskConstants disk_pair(const std::string& name) {
    if (name == "a") return disk_constants_a();
    if (name == "b") return disk_constants_b();
    throw ValidationError("disk constants must be calibrate, a or b: " + name);
}

Job plan_disk(const RunConfig& cfg, Params& p) {
    const std::string mode = p.str("mode", "reconstruct");
    if (mode != "calibrate" && mode != "reconstruct" && mode != "horocycle")
        p.fail("mode must be calibrate, reconstruct or horocycle");
    const bool coarse = mode == "reconstruct";
    const double r_max = p.num("r_max", 0.9);
    if (!(r_max > 0.0 && r_max <= 0.995)) p.fail("r_max must lie in (0, 0.995]");
    const std::size_t nr = p.count("nr", coarse ? 40 : 64, 2);
    const std::size_t ntheta = p.count("ntheta", coarse ? 48 : 64, 2);
    const double width = p.num("width", 0.243);
    SpectrumSpec spec;
    spec.nlambda = p.count("nlambda", spec.nlambda, 2);
    spec.lambda_max = p.num("lambda_max", spec.lambda_max);
    spec.nu = p.count("nu", spec.nu, 2);
    const std::string constants = p.str("constants", mode == "horocycle" ? "a" : "calibrate");
    if (constants != "calibrate") disk_pair(constants);
    const std::string sigma_name = p.str("sigma", "gauss");
    const unsigned order = static_cast<unsigned>(p.count("rho_order", 2, 0));
    HoroOptions opt;
    double a_half = 20.0, b_half = 34.0;
    std::size_t na = 100, nu_h = 48, nb = 110, neurons = 8;
    if (mode == "reconstruct") {
        a_half = p.num("a_half", a_half);
        na = p.count("na", na);
        nu_h = p.count("horo_nu", nu_h);
        b_half = p.num("b_half", b_half);
        nb = p.count("nb", nb);
        const std::string method = p.str("method", "slice");
        if (method != "slice" && method != "spatial") p.fail("method must be slice or spatial");
        opt.method = method == "slice" ? HoroMethod::Slice : HoroMethod::Spatial;
        opt.n_omega = p.count("n_omega", opt.n_omega);
        opt.omega_max = p.num("omega_max", opt.omega_max);
        opt.spectrum = spec;
    }
    if (mode == "horocycle") neurons = p.count("neurons", neurons);
    p.finish();
    const Activation sigma = checked(p, [&] { return make_activation(sigma_name); });
    const Mollifier rho = gaussian_mollifier(order);
    const std::string stem = cfg.name.empty() ? mode : cfg.name;
    char grid[128];
    std::snprintf(grid, sizeof grid, "r=%g/%zux%zu lambda=%g/%zu u=%zu", r_max, nr, ntheta, spec.lambda_max,
                  spec.nlambda, spec.nu);

    return [=] {
        const auto t0 = std::chrono::steady_clock::now();
        ExperimentReport r = base_report(cfg, stem);
        r.grid = grid;
        if (mode == "horocycle") {
            const DiskConstants k = disk_pair(constants);
            Rng rng(cfg.seed);
            std::uniform_real_distribution<double> U(0.0, 1.0);
            double worst = 0.0;
            for (std::size_t i = 0; i < neurons; ++i) {
                const double a0 = 0.5 + 1.5 * U(rng), phi = kTwoPi * U(rng), b0 = 2.0 * U(rng) - 1.0;
                const double t = 3.0 * U(rng) - 1.5;
                worst = std::max(worst, horocycle_spread(sigma, a0, std::polar(1.0, phi), b0, t, k));
            }
            r.residual = worst;
            r.grid = "neurons=" + std::to_string(neurons);
            r.add_note("constants", k.label);
            r.seconds = seconds_since(t0);
            return std::vector<ExperimentReport>{r};
        }
        DiskGrid f = radial_bump(r_max, nr, ntheta, width);
        DiskConstants k;
        if (constants == "calibrate" || mode == "calibrate") {
            Calibration cal = calibrate_disk(f, spec.nlambda, spec.lambda_max, spec.nu);
            k = cal.winner;
            for (const auto& e : cal.entries) {
                r.add_metric("error[" + e.constants.label + "]", e.error);
                r.add_metric("error_printed[" + e.constants.label + "]", e.error_printed);
            }
            r.add_note("calibration_winner", cal.winner.label);
            if (mode == "calibrate") r.residual = cal.winner_error;
        } else {
            k = disk_pair(constants);
        }
        r.add_note("constants", k.label);
        if (mode == "calibrate") {
            if (helgason_forward(f, spec.nlambda, spec.lambda_max, spec.nu, k).truncated)
                r.add_warning("spectrum_truncated");
        } else {
            HoroParamGrid pg(a_half, na, nu_h, b_half, nb);
            HoroResult h = horo_reconstruct(f, sigma, rho, pg, k, opt);
            r.residual = h.residual;
            r.c_empirical = h.c_empirical;
            r.c_printed = h.c_printed;
            r.match = h.matches_printed;
            r.candidates.push_back({"(|W|/2pi) pairing |w|^-1", h.c_printed, h.matches_printed});
            r.candidates.push_back({"normalised inverse", h.c_predicted, h.matches_predicted});
            char buf[96];
            std::snprintf(buf, sizeof buf, " a=%g/%zu u=%zu b=%g/%zu", a_half, na, nu_h, b_half, nb);
            r.grid = std::string("r=") + fmt("%g", r_max) + "/" + std::to_string(nr) + "x" + std::to_string(ntheta) + buf;
        }
        r.seconds = seconds_since(t0);
        return std::vector<ExperimentReport>{r};
    };
}

// ---- d-plane ----

void read_transform(Params& p, DPlaneOptions& o) {
    o.lagrange = static_cast<unsigned>(p.count("lagrange", o.lagrange, 2));
    o.y_step = p.num("y_step", o.y_step);
    o.y_half = p.num("y_half", o.y_half);
    if (o.y_step <= 0 || o.y_half <= 0) p.fail("y_step and y_half must be positive");
}

FrameDesign read_design(Params& p) {
    const std::string name = p.str("frame_design", "auto");
    return checked(p, [&] { return parse_frame_design(name); });
}

std::string pair_label(unsigned m, unsigned k) { return "m" + std::to_string(m) + "k" + std::to_string(k); }

Job plan_dplane(const RunConfig& cfg, Params& p) {
    const std::string mode = p.str("mode", "reconstruct");
    if (mode == "measures") {
        const std::size_t trials = p.count("trials", 100000, 2);
        const std::string lemma = p.str("lemma", "all");
        unsigned m = 0, k = 0;
        if (lemma != "all") {
            m = static_cast<unsigned>(p.count("m"));
            k = static_cast<unsigned>(p.count("k"));
            if (k == 0 || k > m || m > 8) p.fail("measures need 1 <= k <= m <= 8");
            if (lemma != "polar" && lemma != "polar-integration" && lemma != "svd")
                p.fail("lemma must be all, polar, polar-integration or svd");
            if (lemma == "polar" && k > 2) p.fail("polar lemma supports k <= 2");
        }
        p.finish();
        const std::string stem = cfg.name.empty() ? "measures" : cfg.name;
        return [=] {
            const auto t0 = std::chrono::steady_clock::now();
            std::vector<MeasureReport> reps;
            if (lemma == "all") reps = validate_all_measures(trials, cfg.seed);
            else if (lemma == "polar") reps.push_back(mc_validate_polar(m, k, trials, cfg.seed));
            else if (lemma == "svd") reps.push_back(mc_validate_svd_measure(m, k, trials, cfg.seed));
            else reps.push_back(mc_validate_polar_integration(m, k, trials, cfg.seed));
            const double each = seconds_since(t0) / reps.size();
            std::vector<ExperimentReport> out;
            for (const auto& mr : reps) {
                ExperimentReport r = base_report(cfg, stem + "-" + mr.lemma + "-" + pair_label(mr.m, mr.k));
                r.grid = "trials=" + std::to_string(mr.trials);
                r.residual = std::abs(mr.estimate - mr.reference) / std::abs(mr.reference);
                r.c_empirical = mr.estimate;
                r.c_printed = mr.reference;
                r.match = mr.pass;
                r.add_metric("z", mr.z);
                r.add_metric("se", mr.se);
                r.add_metric("trials", double(mr.trials));
                if (!mr.alt_label.empty()) {
                    r.candidates.push_back({mr.alt_label, mr.alt_reference, std::abs(mr.z_alt) <= 3.0});
                    r.add_metric("z_alt", mr.z_alt);
                }
                r.seconds = each;
                out.push_back(std::move(r));
            }
            return out;
        };
    }

    const unsigned m = static_cast<unsigned>(p.count("m", 2));
    const unsigned k = static_cast<unsigned>(p.count("k", 1));
    if (m > 4 || k >= m) p.fail("dplane needs 1 <= k < m <= 4");
    const FrameDesign design = read_design(p);

    if (mode == "slice") {
        const std::size_t frames = p.count("frames", 3);
        const std::size_t nx = p.count("nx", m == 2 ? 128 : 64, 8);
        const double x_half = p.num("x_half", 8.0);
        const std::size_t nb = p.count("nb", k == 1 ? 64 : 32, 4);
        const double b_half = p.num("b_half", 8.0);
        DPlaneOptions opt;
        read_transform(p, opt);
        p.finish();
        const std::string stem = cfg.name.empty() ? "slice-" + pair_label(m, k) : cfg.name;
        return [=] {
            const auto t0 = std::chrono::steady_clock::now();
            ExperimentReport r = base_report(cfg, stem);
            char buf[96];
            std::snprintf(buf, sizeof buf, "%s x=%g/%zu b=%g/%zu frames=%zu L=%u", pair_label(m, k).c_str(),
                          x_half, nx, b_half, nb, frames, opt.lagrange);
            r.grid = buf;
            GridFunction f = gaussian_probe(m, nx, x_half);
            DPlaneField P = dplane_transform(f, make_frames(m, k, frames, cfg.seed, design), nb, b_half, opt);
            // exact marginal of the unit Gaussian: (2 pi)^{d/2} e^{-|b|^2/2}
            double marginal = 0.0;
            for (const auto& s : P.slices)
                for (std::size_t i = 0; i < s.size(); ++i) {
                    double r2 = 0.0;
                    for (double v : s.point(i)) r2 += v * v;
                    marginal = std::max(marginal, std::abs(s.values[i] - std::pow(kTwoPi, 0.5 * (m - k)) *
                                                                             std::exp(-0.5 * r2)));
                }
            SliceCheck sc = fourier_slice(P, f);
            r.residual = sc.discrepancy;
            r.add_metric("zero_frequency", sc.zero_frequency);
            r.add_metric("nodes", double(sc.nodes));
            r.add_metric("marginal_error", marginal);
            r.seconds = seconds_since(t0);
            return std::vector<ExperimentReport>{r};
        };
    }

    if (mode == "invert") {
        ProbeSetup s;
        s.m = m;
        s.k = k;
        s.frame_design = design;
        s.seed = cfg.seed;
        s.frames = p.count("frames", m == 2 ? 64 : 200);
        s.nx = p.count("nx", m == 2 ? 128 : 64, 8);
        s.x_half = p.num("x_half", s.x_half);
        s.nb = p.count("nb", m == 2 ? 128 : (k == 1 ? 64 : 32), 4);
        s.b_half = p.num("b_half", s.b_half);
        s.n_eval = p.count("n_eval", m == 2 ? 40 : 16, 2);
        s.eval_half = p.num("eval_half", s.eval_half);
        s.max_error = p.num("max_error", 1.0);
        read_transform(p, s.transform);
        p.finish();
        const std::string stem = cfg.name.empty() ? "invert-" + pair_label(m, k) : cfg.name;
        return [=] {
            const auto t0 = std::chrono::steady_clock::now();
            ExperimentReport r = base_report(cfg, stem);
            char buf[128];
            std::snprintf(buf, sizeof buf, "%s frames=%zu x=%g/%zu b=%g/%zu eval=%g/%zu L=%u", pair_label(m, k).c_str(),
                          s.frames, s.x_half, s.nx, s.b_half, s.nb, s.eval_half, s.n_eval, s.transform.lagrange);
            r.grid = buf;
            InversionProbe probe = dplane_inversion_probe(s);
            r.residual = probe.error;
            r.add_metric("kappa", probe.calibration.kappa);
            r.add_metric("frame_mass", probe.calibration.frame_mass);
            r.add_metric("stiefel_volume", probe.calibration.stiefel_volume);
            r.add_note("frame_design", frame_design_name(make_frames(m, k, 1, 0, design).design));
            r.seconds = seconds_since(t0);
            return std::vector<ExperimentReport>{r};
        };
    }

    if (mode != "reconstruct") p.fail("mode must be reconstruct, invert, slice or measures");
    PoolingSetup s;
    s.m = m;
    s.k = k;
    s.frame_design = design;
    s.seed = cfg.seed;
    s.variant = checked(p, [&] { return parse_variant(p.str("variant", "stiefel")); });
    s.frames = p.count("frames", s.frames);
    s.nx = p.count("nx", s.nx, 8);
    s.x_half = p.num("x_half", s.x_half);
    s.n_eval = p.count("n_eval", s.n_eval, 2);
    s.eval_half = p.num("eval_half", s.eval_half);
    if (s.variant == PoolingVariant::Stiefel) {
        s.stiefel_activation = p.str("activation", s.stiefel_activation);
        if (s.stiefel_activation != "step" && s.stiefel_activation != "relu" && s.stiefel_activation != "delta")
            p.fail("stiefel activation must be step, relu or delta");
        if (s.stiefel_activation != "delta" && k != 1) p.fail("step and relu need k = 1");
        s.nb = p.count("nb", s.nb, 4);
        s.b_half = p.num("b_half", s.b_half);
    } else {
        if (k != 1) p.fail("affine and similitude variants need k = 1");
        s.sigma = p.str("sigma", s.sigma);
        s.rho_order = static_cast<unsigned>(p.count("rho_order", s.rho_order, 0));
        if (s.variant == PoolingVariant::Similitude) s.s = p.num("s", s.s);
        s.n_scale = p.count("n_scale", s.n_scale);
        s.scale_min = p.num("scale_min", s.scale_min);
        s.scale_max = p.num("scale_max", s.scale_max);
        s.nb_param = p.count("nb_param", s.nb_param, 2);
        s.b_half_param = p.num("b_half_param", s.b_half_param);
        checked(p, [&] { return make_activation(s.sigma); });
    }
    read_transform(p, s.transform);
    p.finish();
    const std::string stem =
        cfg.name.empty() ? variant_name(s.variant) + "-" + pair_label(m, k) +
                               (s.variant == PoolingVariant::Stiefel ? "-" + s.stiefel_activation : "")
                         : cfg.name;
    return [=] {
        const auto t0 = std::chrono::steady_clock::now();
        ExperimentReport r = base_report(cfg, stem);
        char buf[160];
        if (s.variant == PoolingVariant::Stiefel)
            std::snprintf(buf, sizeof buf, "%s frames=%zu x=%g/%zu b=%g/%zu eval=%g/%zu", pair_label(m, k).c_str(),
                          s.frames, s.x_half, s.nx, s.b_half, s.nb, s.eval_half, s.n_eval);
        else
            std::snprintf(buf, sizeof buf, "%s frames=%zu x=%g/%zu scale=%g:%g/%zu b=%g/%zu eval=%g/%zu",
                          pair_label(m, k).c_str(), s.frames, s.x_half, s.nx, s.scale_min, s.scale_max, s.n_scale,
                          s.b_half_param, s.nb_param, s.eval_half, s.n_eval);
        r.grid = buf;
        DPlaneResult res = dplane_reconstruct(s);
        r.residual = res.residual;
        r.c_empirical = res.c_empirical;
        r.c_printed = res.candidates.front().value;
        r.match = res.candidates.front().match;
        for (const auto& c : res.candidates) r.candidates.push_back({c.label, c.value, c.match});
        for (const auto& w : res.warnings) r.add_warning(w);
        r.add_metric("kappa", res.calibration.kappa);
        r.add_metric("frame_mass", res.calibration.frame_mass);
        r.add_metric("stiefel_volume", res.calibration.stiefel_volume);
        r.seconds = seconds_since(t0);
        return std::vector<ExperimentReport>{r};
    };
}

Job plan(const RunConfig& cfg) {
    const std::string ctx = cfg.domain + (cfg.name.empty() ? "" : "/" + cfg.name);
    json params;
    try {
        params = json::parse(cfg.params);
    } catch (const json::exception& e) {
        throw ValidationError(ctx + ": params are not valid JSON: " + e.what());
    }
    Params p(params, ctx);
    if (cfg.domain == "fp") return plan_fp(cfg, p);
    if (cfg.domain == "euclid") return plan_euclid(cfg, p);
    if (cfg.domain == "gconv") return plan_gconv(cfg, p);
    if (cfg.domain == "disk") return plan_disk(cfg, p);
    if (cfg.domain == "dplane") return plan_dplane(cfg, p);
    throw ValidationError("unknown domain '" + cfg.domain + "'");
}

RunConfig run_from_json(const json& j, const std::string& ctx) {
    if (!j.is_object()) throw ValidationError(ctx + ": a run must be a JSON object");
    static const std::set<std::string> keys = {"domain", "case", "seed", "params", "refinement", "output"};
    for (auto it = j.begin(); it != j.end(); ++it)
        if (!keys.count(it.key())) throw ValidationError(ctx + ": unknown run field '" + it.key() + "'");
    RunConfig c;
    try {
        c.domain = j.at("domain").get<std::string>();
        c.name = j.value("case", std::string());
        if (j.contains("seed")) {
            if (!j.at("seed").is_number_unsigned()) throw ValidationError(ctx + ": seed must be a non-negative integer");
            c.seed = j.at("seed").get<std::uint64_t>();
        }
        c.params = j.contains("params") ? j.at("params").dump() : "{}";
        c.refinement = j.value("refinement", false);
        c.output = j.value("output", std::string());
    } catch (const json::exception& e) {
        throw ValidationError(ctx + ": malformed run: " + e.what());
    }
    if (c.name.find_first_of(",\n\"") != std::string::npos) throw ValidationError(ctx + ": case label contains a separator");
    return c;
}

}  // namespace

RunConfig parse_run(const std::string& json_text) {
    json j;
    try {
        j = json::parse(json_text);
    } catch (const json::exception& e) {
        throw ValidationError(std::string("run config is not valid JSON: ") + e.what());
    }
    return run_from_json(j, "run");
}

std::vector<RunConfig> parse_config_file(const std::string& path) {
    std::ifstream is(path);
    if (!is) throw ValidationError("cannot read config " + path);
    json j;
    try {
        j = json::parse(is);
    } catch (const json::exception& e) {
        throw ValidationError(path + ": not valid JSON: " + e.what());
    }
    std::vector<RunConfig> out;
    std::string criterion;
    const json* runs = &j;
    if (j.is_object() && j.contains("runs")) {
        criterion = j.value("criterion", std::string());
        runs = &j.at("runs");
    }
    if (runs->is_array()) {
        for (std::size_t i = 0; i < runs->size(); ++i)
            out.push_back(run_from_json(runs->at(i), path + " run " + std::to_string(i)));
    } else {
        out.push_back(run_from_json(*runs, path));
    }
    for (auto& c : out) c.criterion = criterion;
    return out;
}

std::vector<RunConfig> load_suite(const std::string& dir, const std::string& suite) {
    namespace fs = std::filesystem;
    std::vector<fs::path> files;
    std::error_code ec;
    for (const auto& e : fs::directory_iterator(dir, ec)) {
        const std::string n = e.path().filename().string();
        if (n.rfind("ac-", 0) == 0 && e.path().extension() == ".json") files.push_back(e.path());
    }
    if (ec) throw ValidationError("cannot list config directory " + dir);
    std::sort(files.begin(), files.end());
    std::vector<RunConfig> out;
    for (const auto& f : files) {
        std::ifstream is(f);
        json j;
        try {
            j = json::parse(is);
        } catch (const json::exception& e) {
            throw ValidationError(f.string() + ": not valid JSON: " + e.what());
        }
        if (!j.is_object() || j.value("suite", std::string()) != suite) continue;
        for (auto& c : parse_config_file(f.string())) out.push_back(std::move(c));
    }
    if (out.empty()) throw ValidationError("no configs for suite '" + suite + "' in " + dir);
    return out;
}

void validate(const RunConfig& cfg) { plan(cfg); }

std::vector<ExperimentReport> run(const RunConfig& cfg) {
    Job job = plan(cfg);
    const std::string ctx = cfg.domain + "/" + (cfg.name.empty() ? "-" : cfg.name) + ": ";
    try {
        return job();
    } catch (const ValidationError& e) {
        throw ValidationError(ctx + e.what());
    } catch (const UnderResolvedError& e) {
        throw UnderResolvedError(ctx + e.what());
    } catch (const InadmissibleError& e) {
        throw InadmissibleError(ctx + e.what());
    } catch (const Error& e) {
        throw Error(ctx + e.what());
    }
}

std::vector<ExperimentReport> run_all(const std::vector<RunConfig>& configs) {
    for (const auto& c : configs) validate(c);
    std::vector<ExperimentReport> out;
    for (const auto& c : configs)
        for (auto& r : run(c)) out.push_back(std::move(r));
    sort_reports(out);
    return out;
}

}  // namespace ridgekit
