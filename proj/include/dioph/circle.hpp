#pragma once

#include <complex>

#include "dioph/eq.hpp"

namespace dioph {

// f(alpha) = sum_{|x| <= B} e(alpha x^k).
std::complex<double> weyl_sum(double alpha, std::int64_t B, int k);

struct ArcLabel {
    bool major = false;
    std::int64_t q = 0;
    std::int64_t r = 0;
    double delta = 0.0;  // |alpha - r/q| when major
};

// Classifies alpha (any real; reduced into the unit period) against the
// major arcs |alpha - r/q| <= Q/(A B^k), 1 <= r <= q < Q, (r,q) = 1. The
// qualifying fraction, when it exists, is found among the continued-fraction
// convergents and is unique. Requires Q <= B^(1/3) (disjoint arcs).
ArcLabel dissect(double alpha, double A, double B, double Q, int k);

struct ResidualReport {
    double residual = 0.0;    // |f(a alpha) - q^-1 S(q, ar) v(a(alpha - r/q), B)|
    double normalizer = 0.0;  // q^(1/2) (1 + |a| B^k |alpha - r/q|)^(1/2)
};

ResidualReport major_arc_residual(std::int64_t a, double alpha, std::int64_t q, std::int64_t r,
                                  std::int64_t B, int k);

struct PowerSumReport {
    double value = 0.0;     // sum_{0<|a|<=A} |f(a alpha)|^(2^(k-1))
    double envelope = 0.0;  // A B^(2^(k-1)) (1/q + 1/B + q/(A B^k)), 0 if q not given
};

PowerSumReport weyl_power_sum(std::int64_t A, double alpha, std::int64_t B, int k,
                              std::int64_t q = 0);

struct ArcDecomposition {
    double major_part = 0.0;
    double minor_part = 0.0;
    BigInt exact_count;
    double reconstruction_error = 0.0;  // |major + minor - exact|
};

// Splits rho_a(B) = int_M f_a + int_m f_a by exact trapezoidal quadrature
// over a uniform grid (exact for the underlying trigonometric polynomial when
// grid > 2 s B^k max|a_j|, which is enforced).
ArcDecomposition rho_via_arcs(const DiagonalEquation& eq, std::int64_t A, std::int64_t B, double Q,
                              std::int64_t grid, const Budget& budget = {});

}  // namespace dioph
