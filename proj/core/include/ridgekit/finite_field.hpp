#pragma once

#include <string>
#include <vector>

#include "ridgekit/numeric.hpp"
#include "ridgekit/types.hpp"

namespace ridgekit {

bool is_prime(unsigned long p);

// f : F_p^m -> C, index = base-p digits of x (x_0 most significant).
struct FpFunction {
    unsigned p = 0;
    unsigned m = 0;
    CVec values;

    FpFunction() = default;
    FpFunction(unsigned p_, unsigned m_);
    std::size_t size() const { return values.size(); }
    std::vector<unsigned> digits(std::size_t flat) const;
};

// gamma : F_p^m x F_p -> C, index = a_flat * p + b.
struct FpParamDistribution {
    unsigned p = 0;
    unsigned m = 0;
    CVec values;

    FpParamDistribution() = default;
    FpParamDistribution(unsigned p_, unsigned m_);
    cplx& at(std::size_t a, unsigned b) { return values[a * p + b]; }
    cplx at(std::size_t a, unsigned b) const { return values[a * p + b]; }
};

struct FpActivation {
    unsigned p = 0;
    CVec values;
    std::string name;
};

// delta0, char<j>, ramp, centered-delta0 (delta0 - 1/p), or a file with p
// lines of "re im".
FpActivation fp_activation(const std::string& name, unsigned p);

// Forward f^(xi) = sum_x f(x) e^{-2 pi i xi.x / p}; the inverse divides by p^m.
FpFunction fp_dft(const FpFunction& f);
FpFunction fp_idft(const FpFunction& F);
CVec fp_dft(const FpActivation& s);

FpFunction fp_network(const FpParamDistribution& gamma, const FpActivation& sigma);
FpParamDistribution fp_ridgelet(const FpFunction& f, const FpActivation& rho);

struct FpConstants {
    cplx theorem_form;   // p^{-(m-1)} sum_w sigma#(w) conj(rho#(w))
    cplx proof_form;     // p^{m-1} sum_w sigma#(w) conj(rho#(w))
    cplx empirical;      // least-squares c of S[R[f]] against a probe f
    double probe_residual;
    cplx zero_mode;      // sigma#(0) conj(rho#(0)); must vanish for exactness
    bool matches_theorem;
    bool matches_proof;
};
FpConstants fp_constant(const FpActivation& sigma, const FpActivation& rho, unsigned m, std::uint64_t seed = 0);

struct FpReconstruction {
    FpFunction g;
    cplx c;
    double residual;      // ||g - c f|| / ||c f||
    double ratio_spread;  // max |g/f - c| / |c| over x (f must have no zeros)
};
FpReconstruction fp_reconstruct(const FpFunction& f, const FpActivation& sigma, const FpActivation& rho);

// Uniform complex entries in the unit square shifted away from zero.
FpFunction fp_random(unsigned p, unsigned m, Rng& rng);

}  // namespace ridgekit
