#pragma once

#include <complex>
#include <optional>
#include <vector>

#include "dioph/eq.hpp"

namespace dioph {

// Gaussian sum S(q, r) = sum_{x=1}^q e(r x^k / q).
std::complex<double> gauss_sum(std::int64_t q, const BigInt& r, int k);

// The multiplicative majorant kappa: on q = p^(uk+v) with 1 <= v <= k it is
// k p^(-u-1/2) for v = 1 and p^(-u-1) otherwise.
double kappa_prime_power(std::int64_t p, int l, int k);
double kappa(std::int64_t q, int k);

// T_a(q) = q^(-s) sum_{(r,q)=1} prod_j S(q, a_j r). Evaluated through the
// prime-power factorization (T is multiplicative); the literal definition
// sum lives in t_coeff_definition for cross-checking.
double t_coeff(const DiagonalEquation& eq, std::int64_t q, const Budget& budget = {});
double t_coeff_definition(const DiagonalEquation& eq, std::int64_t q);

// M_a(p^l): number of solutions of the congruence mod p^l, exact, by
// per-variable residue histograms combined with cyclic convolution.
BigInt local_count(const DiagonalEquation& eq, std::int64_t p, int l, const Budget& budget = {});

// Number of solutions mod p^h with at least one coordinate coprime to p.
BigInt primitive_count(const DiagonalEquation& eq, std::int64_t p, int h, const Budget& budget = {});

enum class LocalMethod { closed_form, iterative };

struct LocalFactor {
    std::int64_t p = 0;
    CertifiedValue chi;
    int depth = 0;  // largest l with M_a(p^l) computed
    LocalMethod method = LocalMethod::iterative;
    bool positive = false;  // chi certified > 0
};

// Local density chi_p. Good primes (p not dividing k a_1...a_s) get the
// closed form p^(1-s) M*(p) / (1 - p^(k-s)); all other primes get the scaled
// congruence counts p^(l(1-s)) M_a(p^l) with an explicit Gauss-sum tail bound
// as radius. Requires s >= k+1 (contraction of the lifting recursion).
LocalFactor chi_p(const DiagonalEquation& eq, std::int64_t p, const Budget& budget = {});

struct Witness {
    std::vector<std::int64_t> y;
    std::int64_t modulus = 0;
};

struct QpVerdict {
    bool soluble = false;
    std::optional<Witness> witness;
    bool certified = true;  // false when only a randomized search was feasible
    int h = 0;              // exponent of the decisive modulus p^h
};

// Q_p solubility via the primitive-solution criterion at h = l(p)+nu(p)+2.
QpVerdict qp_soluble(const DiagonalEquation& eq, std::int64_t p, const Budget& budget = {});

// Smallest prime p with p^(s-1) - (k-1)^s p^(s/2) - 1 > 0; beyond it the
// Weil bound certifies a nonsingular point mod p for any good prime.
std::int64_t good_prime_threshold(int k, int s);

enum class SeriesMode { euler_product, q_series };

struct SingularSeriesResult {
    CertifiedValue value;
    std::vector<LocalFactor> factors;
    double tail_bound = 0.0;
    SeriesMode mode = SeriesMode::euler_product;
};

// The singular series, either as a certified Euler product over an explicit
// prime list times an interval for the good-prime tail, or as the series
// sum_{q<Q} T_a(q) with a heuristic tail. Requires s >= k+2.
SingularSeriesResult singular_series(const DiagonalEquation& eq, SeriesMode mode,
                                     const Budget& budget = {}, std::int64_t Q = 10'000);

// Partial sum of sum_{Q <= q < q_max} T_a(q) plus the kappa-shaped bound for
// everything beyond q_max.
double series_tail(const DiagonalEquation& eq, double Q, const Budget& budget = {},
                   std::int64_t q_max = 20'000);

struct PrimeVerdict {
    std::int64_t p = 0;
    bool soluble = false;
    std::optional<Witness> witness;
    bool flagged = false;  // verdict not certified (budget fallback)
};

struct SolubilityReport {
    bool real_soluble = false;
    std::vector<PrimeVerdict> primes;
    bool locally_soluble = false;
    std::optional<std::int64_t> culprit_prime;  // first failing place (0 = real)
    bool heuristic = false;                     // checklist could not be certified complete
};

// Combines the real sign condition with Q_p checks over the finite prime
// checklist that certifies all remaining primes.
SolubilityReport locally_soluble(const DiagonalEquation& eq, const Budget& budget = {});

}  // namespace dioph
