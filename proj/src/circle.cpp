#include "dioph/circle.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <numeric>
#include <vector>

#include "dioph/counting.hpp"
#include "dioph/padic.hpp"
#include "dioph/realdensity.hpp"

namespace dioph {

namespace {

constexpr double kTwoPi = 6.283185307179586476925286766559;

struct Kahan {
    double sum = 0.0, c = 0.0;
    void add(double x) {
        double y = x - c;
        double t = sum + y;
        c = (t - sum) - y;
        sum = t;
    }
};

}  // namespace

std::complex<double> weyl_sum(double alpha, std::int64_t B, int k) {
    if (B < 0) throw PreconditionFailed("weyl_sum requires B >= 0");
    // Pair x with -x: for odd k the imaginary parts cancel exactly, for even
    // k the terms coincide. Compensated sums keep grid quadrature stable.
    Kahan re, im;
    re.add(1.0);
    for (std::int64_t x = 1; x <= B; ++x) {
        double xk = 1.0;
        for (int t = 0; t < k; ++t) xk *= static_cast<double>(x);
        const double ang = kTwoPi * alpha * xk;
        re.add(2.0 * std::cos(ang));
        if (k % 2 == 0) im.add(2.0 * std::sin(ang));
    }
    return {re.sum, im.sum};
}

ArcLabel dissect(double alpha, double A, double B, double Q, int k) {
    if (A < 1 || B < 1 || Q < 1) throw PreconditionFailed("dissect requires A, B, Q >= 1");
    if (Q > std::pow(B, 1.0 / 3.0) * (1.0 + 1e-9))
        throw PreconditionFailed("dissect requires Q <= B^(1/3) for disjoint arcs");
    const double width = Q / (A * std::pow(B, k));
    if (2.0 * Q * Q * Q > A * std::pow(B, k) * (1.0 + 1e-9))
        throw PreconditionFailed("dissect requires 2 Q^3 <= A B^k");
    // reduce into the period window [width, 1 + width)
    alpha -= std::floor(alpha);
    if (alpha < width) alpha += 1.0;

    // walk the continued-fraction convergents with q < Q; any fraction within
    // the arc width is necessarily a convergent since width <= 1/(2q^2)
    double x = alpha;
    std::int64_t p_prev = 1, q_prev = 0;  // p_{-1}/q_{-1}
    std::int64_t p_cur = static_cast<std::int64_t>(std::floor(x)), q_cur = 1;
    x -= std::floor(x);
    for (int iter = 0; iter < 64; ++iter) {
        if (static_cast<double>(q_cur) >= Q) break;  // arcs require q < Q
        if (p_cur >= 1 && std::fabs(alpha - static_cast<double>(p_cur) / static_cast<double>(q_cur)) <= width) {
            const double delta = std::fabs(alpha - static_cast<double>(p_cur) / static_cast<double>(q_cur));
            return ArcLabel{true, q_cur, p_cur, delta};
        }
        if (x < 1e-15) break;
        const double inv = 1.0 / x;
        const std::int64_t digit = static_cast<std::int64_t>(std::floor(inv));
        x = inv - std::floor(inv);
        const std::int64_t p_next = digit * p_cur + p_prev;
        const std::int64_t q_next = digit * q_cur + q_prev;
        p_prev = p_cur;
        q_prev = q_cur;
        p_cur = p_next;
        q_cur = q_next;
        if (q_cur > (std::int64_t(1) << 40)) break;
    }
    return ArcLabel{false, 0, 0, 0.0};
}

ResidualReport major_arc_residual(std::int64_t a, double alpha, std::int64_t q, std::int64_t r,
                                  std::int64_t B, int k) {
    if (a == 0) throw PreconditionFailed("major_arc_residual requires a != 0");
    if (q < 1) throw PreconditionFailed("major_arc_residual requires q >= 1");
    if (std::gcd(std::llabs(r), q) != 1 && r != 0)
        throw PreconditionFailed("major_arc_residual requires gcd(r, q) = 1");
    const double beta = alpha - static_cast<double>(r) / static_cast<double>(q);
    std::complex<double> f = weyl_sum(static_cast<double>(a) * alpha, B, k);
    std::complex<double> S = gauss_sum(q, BigInt(a) * r, k);
    const double v = v_eval(static_cast<double>(a) * beta, static_cast<double>(B), k);
    std::complex<double> approx = S * (v / static_cast<double>(q));
    const double residual = std::abs(f - approx);
    const double normalizer =
        std::sqrt(static_cast<double>(q)) *
        std::sqrt(1.0 + std::fabs(static_cast<double>(a)) * std::pow(static_cast<double>(B), k) * std::fabs(beta));
    return ResidualReport{residual, normalizer};
}

PowerSumReport weyl_power_sum(std::int64_t A, double alpha, std::int64_t B, int k, std::int64_t q) {
    if (A < 1) throw PreconditionFailed("weyl_power_sum requires A >= 1");
    const double K = std::pow(2.0, k - 1);
    Kahan acc;
    for (std::int64_t a = 1; a <= A; ++a) {
        const double m = std::abs(weyl_sum(static_cast<double>(a) * alpha, B, k));
        acc.add(2.0 * std::pow(m, K));  // |f(-a alpha)| = |f(a alpha)|
    }
    double envelope = 0.0;
    if (q > 0) {
        envelope = static_cast<double>(A) * std::pow(static_cast<double>(B), K) *
                   (1.0 / static_cast<double>(q) + 1.0 / static_cast<double>(B) +
                    static_cast<double>(q) / (static_cast<double>(A) * std::pow(static_cast<double>(B), k)));
    }
    return PowerSumReport{acc.sum, envelope};
}

ArcDecomposition rho_via_arcs(const DiagonalEquation& eq, std::int64_t A, std::int64_t B, double Q,
                              std::int64_t grid, const Budget& budget) {
    BigInt degree_bound = 2 * eq.s * bpow(BigInt(B), static_cast<unsigned>(eq.k)) * eq.height();
    if (BigInt(grid) <= degree_bound)
        throw PreconditionFailed("rho_via_arcs: grid " + std::to_string(grid) +
                                 " too coarse; needs > " + degree_bound.get_str());
    budget.charge(grid * eq.s * (2 * B + 1) / 4, "rho_via_arcs grid");

    Kahan major, minor;
    for (std::int64_t i = 0; i < grid; ++i) {
        const double alpha = static_cast<double>(i) / static_cast<double>(grid);
        std::complex<double> prod(1.0, 0.0);
        for (int j = 0; j < eq.s; ++j)
            prod *= weyl_sum(eq.a[static_cast<std::size_t>(j)].get_d() * alpha, B, eq.k);
        ArcLabel label = dissect(alpha, static_cast<double>(A), static_cast<double>(B), Q, eq.k);
        (label.major ? major : minor).add(prod.real());
    }
    const double h = 1.0 / static_cast<double>(grid);
    ArcDecomposition out;
    out.major_part = major.sum * h;
    out.minor_part = minor.sum * h;
    out.exact_count = rho(eq, B, RhoMethod::mitm, budget);
    out.reconstruction_error =
        std::fabs(out.major_part + out.minor_part - out.exact_count.get_d());
    return out;
}

}  // namespace dioph
