#include "ridgekit/fft.hpp"

#include <fftw3.h>

#include <cmath>
#include <cstdio>
#include <istream>
#include <mutex>
#include <ostream>
#include <sstream>

#include "ridgekit/errors.hpp"
#include "ridgekit/parallel.hpp"

namespace ridgekit {

namespace {

std::mutex g_plan_mu;  // fftw planner is not thread safe

void fftw_run(CVec& data, const std::vector<std::size_t>& dims, int sign) {
    std::vector<int> n(dims.begin(), dims.end());
    auto* p = reinterpret_cast<fftw_complex*>(data.data());
    fftw_plan plan;
    {
        std::lock_guard<std::mutex> lk(g_plan_mu);
        plan = fftw_plan_dft(static_cast<int>(n.size()), n.data(), p, p,
                             sign < 0 ? FFTW_FORWARD : FFTW_BACKWARD, FFTW_ESTIMATE);
    }
    if (plan == nullptr) throw Error("fftw planning failed");
    fftw_execute_dft(plan, p, p);
    std::lock_guard<std::mutex> lk(g_plan_mu);
    fftw_destroy_plan(plan);
}

// per-axis index of a flat row-major offset
void unflatten(std::size_t flat, const std::vector<std::size_t>& dims, std::vector<std::size_t>& idx) {
    idx.resize(dims.size());
    for (std::size_t a = dims.size(); a-- > 0;) {
        idx[a] = flat % dims[a];
        flat /= dims[a];
    }
}

std::size_t product(const std::vector<std::size_t>& d) {
    std::size_t n = 1;
    for (auto v : d) n *= v;
    return n;
}

}  // namespace

GridFunction::GridFunction(std::vector<std::size_t> d, RVec h, RVec o)
    : dims(std::move(d)), spacing(std::move(h)), origin(std::move(o)) {
    validate();
    values.assign(size(), cplx(0.0, 0.0));
}

GridFunction GridFunction::box(std::size_t m, std::size_t n, double half_width) {
    if (m == 0 || n == 0 || !(half_width > 0)) throw InvalidArgument("box grid needs m, n > 0 and positive width");
    return GridFunction(std::vector<std::size_t>(m, n), RVec(m, 2.0 * half_width / n), RVec(m, -half_width));
}

std::size_t GridFunction::size() const { return product(dims); }

double GridFunction::cell_volume() const {
    double v = 1.0;
    for (double h : spacing) v *= h;
    return v;
}

RVec GridFunction::point(std::size_t flat) const {
    RVec x(dims.size());
    for (std::size_t a = dims.size(); a-- > 0;) {
        x[a] = origin[a] + static_cast<double>(flat % dims[a]) * spacing[a];
        flat /= dims[a];
    }
    return x;
}

void GridFunction::validate() const {
    if (dims.empty()) throw InvalidArgument("grid has no axes");
    if (spacing.size() != dims.size() || origin.size() != dims.size())
        throw InvalidArgument("grid spacing/origin rank mismatch");
    for (std::size_t a = 0; a < dims.size(); ++a) {
        if (dims[a] == 0) throw InvalidArgument("empty grid axis");
        if (!(spacing[a] > 0)) throw InvalidArgument("grid spacing must be positive");
    }
    if (!values.empty() && values.size() != size()) throw InvalidArgument("grid value count mismatch");
}

std::size_t FreqGrid::size() const { return product(dims); }

double FreqGrid::cell_volume() const {
    double v = 1.0;
    for (double h : spacing) v *= h;
    return v;
}

RVec FreqGrid::point(std::size_t flat) const {
    RVec x(dims.size());
    for (std::size_t a = dims.size(); a-- > 0;) {
        x[a] = origin[a] + static_cast<double>(flat % dims[a]) * spacing[a];
        flat /= dims[a];
    }
    return x;
}

FreqGrid dft(const GridFunction& g) {
    g.validate();
    if (g.values.size() != g.size()) throw InvalidArgument("empty grid");
    const std::size_t m = g.ndim();
    FreqGrid F;
    F.dims = g.dims;
    F.x_spacing = g.spacing;
    F.x_origin = g.origin;
    F.spacing.resize(m);
    F.origin.resize(m);
    for (std::size_t a = 0; a < m; ++a) {
        F.spacing[a] = kTwoPi / (static_cast<double>(g.dims[a]) * g.spacing[a]);
        F.origin[a] = -static_cast<double>(g.dims[a] / 2) * F.spacing[a];
    }
    F.values = g.values;
    std::vector<std::size_t> idx;
    for (std::size_t i = 0; i < F.values.size(); ++i) {
        unflatten(i, g.dims, idx);
        double ph = 0.0;
        for (std::size_t a = 0; a < m; ++a) ph -= idx[a] * g.spacing[a] * F.origin[a];
        F.values[i] *= std::polar(1.0, ph);
    }
    fftw_run(F.values, g.dims, -1);
    const double vol = g.cell_volume();
    for (std::size_t i = 0; i < F.values.size(); ++i) {
        unflatten(i, g.dims, idx);
        double ph = 0.0;
        for (std::size_t a = 0; a < m; ++a) ph -= g.origin[a] * (F.origin[a] + idx[a] * F.spacing[a]);
        F.values[i] *= std::polar(vol, ph);
    }
    return F;
}

GridFunction idft(const FreqGrid& F) {
    if (F.values.empty() || F.values.size() != F.size()) throw InvalidArgument("empty spectrum");
    const std::size_t m = F.dims.size();
    GridFunction g(F.dims, F.x_spacing, F.x_origin);
    g.values = F.values;
    std::vector<std::size_t> idx;
    for (std::size_t i = 0; i < g.values.size(); ++i) {
        unflatten(i, F.dims, idx);
        double ph = 0.0;
        for (std::size_t a = 0; a < m; ++a) ph += F.x_origin[a] * (F.origin[a] + idx[a] * F.spacing[a]);
        g.values[i] *= std::polar(1.0, ph);
    }
    fftw_run(g.values, F.dims, +1);
    const double scale = F.cell_volume() / std::pow(kTwoPi, static_cast<double>(m));
    for (std::size_t i = 0; i < g.values.size(); ++i) {
        unflatten(i, F.dims, idx);
        double ph = 0.0;
        for (std::size_t a = 0; a < m; ++a) ph += idx[a] * F.x_spacing[a] * F.origin[a];
        g.values[i] *= std::polar(scale, ph);
    }
    return g;
}

cplx fourier_at(const GridFunction& g, const RVec& xi) {
    const std::size_t m = g.ndim();
    if (xi.size() != m) throw InvalidArgument("fourier_at: frequency rank mismatch");
    CVec cur = g.values, next;
    std::size_t rest = cur.size();
    for (std::size_t a = m; a-- > 0;) {
        const std::size_t n = g.dims[a];
        CVec e(n);
        for (std::size_t i = 0; i < n; ++i) e[i] = std::polar(1.0, -xi[a] * g.coord(a, i));
        rest /= n;
        next.assign(rest, cplx(0.0, 0.0));
        for (std::size_t r = 0; r < rest; ++r) {
            cplx s(0.0, 0.0);
            const cplx* row = &cur[r * n];
            for (std::size_t i = 0; i < n; ++i) s += row[i] * e[i];
            next[r] = s;
        }
        cur.swap(next);
    }
    return cur[0] * g.cell_volume();
}

GridFunction apply_multiplier(const GridFunction& g, const std::function<cplx(const RVec&)>& mult) {
    FreqGrid F = dft(g);
    for (std::size_t i = 0; i < F.values.size(); ++i) F.values[i] *= mult(F.point(i));
    return idft(F);
}

GridFunction fractional_laplacian(const GridFunction& g, double s) {
    if (s == 0.0) return g;
    return apply_multiplier(g, [s](const RVec& xi) {
        double r2 = 0.0;
        for (double v : xi) r2 += v * v;
        if (r2 == 0.0) return cplx(0.0, 0.0);
        return cplx(std::pow(r2, 0.5 * s), 0.0);
    });
}

void write_grid(std::ostream& os, const GridFunction& g) {
    auto join = [](const auto& v) {
        std::ostringstream ss;
        ss.precision(17);
        for (std::size_t i = 0; i < v.size(); ++i) ss << (i ? "," : "") << v[i];
        return ss.str();
    };
    os << "ridgekit-grid v1 m=" << g.ndim() << " dims=" << join(g.dims) << " spacing=" << join(g.spacing)
       << " origin=" << join(g.origin) << "\n";
    char buf[64];
    for (const auto& v : g.values) {
        std::snprintf(buf, sizeof buf, "%.17g %.17g\n", v.real(), v.imag());
        os << buf;
    }
}

GridFunction read_grid(std::istream& is) {
    std::string line;
    if (!std::getline(is, line)) throw InvalidArgument("grid dump: missing header");
    std::istringstream hs(line);
    std::string tag, ver;
    hs >> tag >> ver;
    if (tag != "ridgekit-grid" || ver != "v1") throw InvalidArgument("grid dump: bad header");
    std::size_t m = 0;
    std::vector<std::size_t> dims;
    RVec spacing, origin;
    auto split = [](const std::string& s) {
        RVec out;
        std::istringstream ss(s);
        std::string tok;
        while (std::getline(ss, tok, ',')) out.push_back(std::stod(tok));
        return out;
    };
    std::string kv;
    while (hs >> kv) {
        auto eq = kv.find('=');
        if (eq == std::string::npos) throw InvalidArgument("grid dump: bad header field " + kv);
        std::string k = kv.substr(0, eq), v = kv.substr(eq + 1);
        if (k == "m") m = std::stoul(v);
        else if (k == "dims") for (double d : split(v)) dims.push_back(static_cast<std::size_t>(d));
        else if (k == "spacing") spacing = split(v);
        else if (k == "origin") origin = split(v);
    }
    if (dims.size() != m) throw InvalidArgument("grid dump: rank mismatch");
    GridFunction g(dims, spacing, origin);
    for (auto& v : g.values) {
        double re = 0, im = 0;
        if (!(is >> re >> im)) throw InvalidArgument("grid dump: truncated values");
        v = cplx(re, im);
    }
    return g;
}

double l2_norm(const CVec& v, double weight) {
    RVec sq(v.size());
    for (std::size_t i = 0; i < v.size(); ++i) sq[i] = std::norm(v[i]);
    return std::sqrt(weight * pairwise_sum(sq));
}

}  // namespace ridgekit
