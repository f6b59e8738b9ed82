#pragma once

#include <cstdint>

#include "dioph/eq.hpp"

namespace dioph {

// v(beta, B) = integral_{-B}^{B} e(beta xi^k) d xi, which is real. Absolute
// error at most 1e-10 * B.
double v_eval(double beta, double B, int k);

enum class JMethod { quadrature, volume_oracle };

struct RealDensityResult {
    CertifiedValue j_value;
    JMethod method = JMethod::quadrature;
    double truncation = 0.0;  // beta cutoff T of the quadrature
    std::int64_t panels = 0;  // quadrature panels at the final refinement
};

// The singular integral J_a = J_a(1). Quadrature integrates prod_j v(a_j
// beta, 1) over |beta| <= T with the analytic tail added to the radius;
// the volume oracle Monte-Carlo estimates the slab volume (2 eps)^-1 *
// vol{x in [-1,1]^s : |sum a_j x_j^k| < eps} extrapolated over an eps
// ladder (radius = 3 standard errors, heuristic). Requires s >= k+1.
RealDensityResult singular_integral(const DiagonalEquation& eq,
                                    JMethod method = JMethod::quadrature,
                                    std::uint64_t seed = 1,
                                    const Budget& budget = {});

// Direct quadrature of J_a(B) at box radius B (the (3.7) scaling check
// computes J_a(B) / B^(s-k) across several B).
RealDensityResult singular_integral_at_radius(const DiagonalEquation& eq, double B,
                                              const Budget& budget = {});

// True iff k is odd, or k is even and the coefficients take both signs.
bool real_soluble(const DiagonalEquation& eq);

// J_a * height(a), the quantity bounded below by the (1.8) lower bound.
double lower_bound_ratio(const DiagonalEquation& eq, const Budget& budget = {});

// Monte-Carlo evaluation of the E(0) representation (even k, s <= 6 only);
// an independent third estimate used as a cross-check.
CertifiedValue e0_cross_check(const DiagonalEquation& eq, std::uint64_t seed = 1,
                              std::int64_t samples = 400'000);

}  // namespace dioph
