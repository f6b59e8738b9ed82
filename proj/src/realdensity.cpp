#include "dioph/realdensity.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <limits>
#include <vector>

namespace dioph {

namespace {

constexpr double kPi = 3.141592653589793238462643383279502884;
constexpr double kTwoPi = 2.0 * kPi;

// 16-point Gauss-Legendre nodes/weights on [-1, 1] (positive half).
constexpr double kGlNode[8] = {0.0950125098376374, 0.2816035507792589, 0.4580167776572274,
                               0.6178762444026438, 0.7554044083550030, 0.8656312023878318,
                               0.9445750230732326, 0.9894009349916499};
constexpr double kGlWeight[8] = {0.1894506104550685, 0.1826034150449236, 0.1691565193950025,
                                 0.1495959888165767, 0.1246289712555339, 0.0951585116824928,
                                 0.0622535239386479, 0.0271524594117541};

// v1(x) = v(x, 1) = 2 * int_0^1 cos(2 pi x t^k) dt, evaluated for x >= 0.
// Below the switch point: composite Gauss-Legendre in t. Above: the endpoint
// expansion  (2/k) Re[ Gamma(a) (2 pi x)^(-a) e^(i pi a / 2)
//                      + e(x) sum_m prod_{t<=m}(t-a) / (2 pi i x)^(m+1) ],
// a = 1/k, whose remainder after M terms is below 1e-13 for x >= 40.
double v_one(double x, int k) {
    x = std::fabs(x);
    if (x == 0.0) return 2.0;
    const double a = 1.0 / static_cast<double>(k);
    if (x <= 10.0) {
        const int panels = 8 + static_cast<int>(x * k / 2.0);
        const double h = 1.0 / panels;
        double acc = 0.0;
        for (int i = 0; i < panels; ++i) {
            const double mid = (i + 0.5) * h;
            double panel = 0.0;
            for (int g = 0; g < 8; ++g) {
                for (double sgn : {-1.0, 1.0}) {
                    const double t = mid + sgn * kGlNode[g] * h / 2.0;
                    panel += kGlWeight[g] * std::cos(kTwoPi * x * std::pow(t, k));
                }
            }
            acc += panel * h / 2.0;
        }
        return 2.0 * acc;
    }
    const double w = kTwoPi * x;
    double result = std::tgamma(a) * std::pow(w, -a) * std::cos(kPi * a / 2.0);
    // oscillatory endpoint series at u = 1
    const std::complex<double> inv_iw(0.0, -1.0 / w);  // 1 / (2 pi i x)
    const std::complex<double> phase(std::cos(kTwoPi * std::fmod(x, 1.0)),
                                     std::sin(kTwoPi * std::fmod(x, 1.0)));
    std::complex<double> term = inv_iw;
    std::complex<double> series = term;
    double prev_mag = std::abs(term);
    for (int m = 1; m <= 48; ++m) {
        term *= (static_cast<double>(m) - a) * inv_iw;
        const double mag = std::abs(term);
        if (mag > prev_mag) break;  // asymptotic series: stop at the smallest term
        series += term;
        prev_mag = mag;
        if (mag < 1e-16) break;
    }
    result += (phase * series).real();
    return (2.0 / static_cast<double>(k)) * result;
}

}  // namespace

double v_eval(double beta, double B, int k) {
    if (B <= 0.0) throw PreconditionFailed("v_eval requires B > 0");
    if (beta == 0.0) return 2.0 * B;
    return B * v_one(std::fabs(beta) * std::pow(B, k), k);
}

bool real_soluble(const DiagonalEquation& eq) {
    if (eq.k % 2 == 1) return true;
    return !eq.all_same_sign();
}

namespace {

struct QuadResult {
    double value = 0.0;        // integral over |beta| <= T
    double refine_err = 0.0;   // last refinement disagreement
    std::int64_t panels = 0;
};

// integral_{-T}^{T} prod_j v1(c_j beta) dbeta with panels resolving the
// maximal oscillation frequency sum_j c_j; panel count doubles until two
// refinements agree to 1e-8 relative.
QuadResult product_quadrature_k(const std::vector<double>& c, int k, double T,
                                std::int64_t start_panels, std::int64_t panel_cap) {
    auto integral = [&](std::int64_t panels) {
        const double h = T / static_cast<double>(panels);
        double acc = 0.0;
        for (std::int64_t i = 0; i < panels; ++i) {
            const double mid = (static_cast<double>(i) + 0.5) * h;
            double panel = 0.0;
            for (int g = 0; g < 8; ++g) {
                for (double sgn : {-1.0, 1.0}) {
                    const double beta = mid + sgn * kGlNode[g] * h / 2.0;
                    double prod = 1.0;
                    for (double cj : c) prod *= v_one(cj * beta, k);
                    panel += kGlWeight[g] * prod;
                }
            }
            acc += panel * h / 2.0;
        }
        return acc * 2.0;
    };

    std::int64_t panels = std::min(std::max<std::int64_t>(64, start_panels), panel_cap);
    double prev = integral(panels);
    double curr = prev;
    double err = std::numeric_limits<double>::infinity();
    while (panels * 2 <= panel_cap) {
        panels *= 2;
        curr = integral(panels);
        err = std::fabs(curr - prev);
        prev = curr;
        if (err <= 1e-8 * std::max(1.0, std::fabs(curr))) break;
    }
    if (!std::isfinite(err)) err = 0.0;
    return QuadResult{curr, err, panels};
}

// Analytic bound for the |beta| > T remainder: |v1(x)| <= 2 |x|^(-1/k) gives
// 2 * 2^s prod |a_j|^(-1/k) T^(1-s/k) / (s/k - 1) over both tails.
double quadrature_tail(const std::vector<double>& c, int k, int s, double T) {
    double prod = 1.0;
    for (double cj : c) prod *= std::pow(cj, -1.0 / k);
    const double expo = static_cast<double>(s) / k - 1.0;
    return 2.0 * std::pow(2.0, s) * prod * std::pow(T, -expo) / expo;
}

struct SplitMix {
    std::uint64_t state;
    std::uint64_t next() {
        std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }
    double unit() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }
    double symmetric() { return 2.0 * unit() - 1.0; }
};

RealDensityResult quadrature_j(const std::vector<double>& c, int k, int s, double scale,
                               const Budget& budget) {
    // scale multiplies the final value (used by the radius-B variant).
    const std::int64_t panel_cap =
        std::max<std::int64_t>(1 << 16, std::min<std::int64_t>(budget.ops / (16 * s), 1'500'000));
    double freq = 0.0;
    for (double v : c) freq += v;
    freq = std::max(freq, 1.0);

    // Coarse pass for the magnitude, then the truncation T that brings the
    // analytic tail below 1e-6 of it, clamped by the panel budget.
    const double est0 = product_quadrature_k(c, k, 8.0, static_cast<std::int64_t>(8.0 * freq),
                                             std::max<std::int64_t>(256, static_cast<std::int64_t>(16.0 * freq)))
                            .value;
    const double target = 1e-6 * std::max(std::fabs(est0), 1e-3);
    const double C = quadrature_tail(c, k, s, 1.0);  // tail(T) = C T^(1-s/k)
    const double T_budget = static_cast<double>(panel_cap) / (3.0 * freq);
    double T = std::pow(C / target, static_cast<double>(k) / (s - k));
    T = std::min(std::max(8.0, T), std::max(8.0, T_budget));

    QuadResult q = product_quadrature_k(c, k, T, static_cast<std::int64_t>(freq * T), panel_cap);
    const double tail = quadrature_tail(c, k, s, T);

    double value = q.value * scale;
    double radius = (tail + q.refine_err + 1e-12 * std::max(1.0, std::fabs(q.value))) * scale;
    // J_a >= 0: intersect the certificate with the half-line.
    double lo = std::max(value - radius, 0.0), hi = std::max(value + radius, 0.0);
    RealDensityResult out;
    out.j_value = CertifiedValue{(lo + hi) / 2.0, (hi - lo) / 2.0, true};
    out.method = JMethod::quadrature;
    out.truncation = T;
    out.panels = q.panels;
    return out;
}

RealDensityResult volume_j(const DiagonalEquation& eq, std::uint64_t seed, const Budget& budget) {
    const int s = eq.s;
    std::vector<double> a(static_cast<std::size_t>(s));
    double abs_sum = 0.0;
    for (int j = 0; j < s; ++j) {
        a[static_cast<std::size_t>(j)] = eq.a[static_cast<std::size_t>(j)].get_d();
        abs_sum += std::fabs(a[static_cast<std::size_t>(j)]);
    }
    const std::int64_t n = std::max<std::int64_t>(10'000, std::min<std::int64_t>(1'000'000, budget.ops / (3 * s)));
    const double eps[3] = {0.1 * abs_sum, 0.05 * abs_sum, 0.025 * abs_sum};
    std::int64_t hits[3] = {0, 0, 0};

    SplitMix rng{seed * 0x9e3779b97f4a7c15ULL + 0x853c49e6748fea9bULL};
    for (std::int64_t i = 0; i < n; ++i) {
        double y = 0.0;
        for (int j = 0; j < s; ++j) {
            double x = rng.symmetric();
            double xk = x;
            for (int t = 1; t < eq.k; ++t) xk *= x;
            y += a[static_cast<std::size_t>(j)] * xk;
        }
        const double ay = std::fabs(y);
        for (int e = 0; e < 3; ++e)
            if (ay < eps[e]) ++hits[e];
    }

    // Weighted linear fit J(eps) = J0 + c eps, extrapolated to eps = 0.
    const double two_s = std::pow(2.0, s);
    double A00 = 0, A01 = 0, A11 = 0, b0 = 0, b1 = 0;
    for (int e = 0; e < 3; ++e) {
        const double p = std::max(static_cast<double>(hits[e]), 0.5) / static_cast<double>(n);
        const double J = two_s * p / (2.0 * eps[e]);
        const double sigma = two_s / (2.0 * eps[e]) * std::sqrt(p * (1.0 - p) / static_cast<double>(n));
        const double w = 1.0 / (sigma * sigma);
        A00 += w;
        A01 += w * eps[e];
        A11 += w * eps[e] * eps[e];
        b0 += w * J;
        b1 += w * eps[e] * J;
    }
    const double det = A00 * A11 - A01 * A01;
    double j0 = (b0 * A11 - b1 * A01) / det;
    double var = A11 / det;
    double radius = 3.0 * std::sqrt(var);
    double lo = std::max(j0 - radius, 0.0), hi = std::max(j0 + radius, 0.0);
    RealDensityResult out;
    out.j_value = CertifiedValue{(lo + hi) / 2.0, (hi - lo) / 2.0, false};
    out.method = JMethod::volume_oracle;
    out.truncation = 0.0;
    out.panels = n;
    return out;
}

}  // namespace

RealDensityResult singular_integral(const DiagonalEquation& eq, JMethod method,
                                    std::uint64_t seed, const Budget& budget) {
    if (eq.s < eq.k + 1) throw TooFewVariables(eq.s);
    if (method == JMethod::volume_oracle) return volume_j(eq, seed, budget);
    std::vector<double> c;
    c.reserve(static_cast<std::size_t>(eq.s));
    for (const auto& aj : eq.a) c.push_back(std::fabs(aj.get_d()));
    return quadrature_j(c, eq.k, eq.s, 1.0, budget);
}

RealDensityResult singular_integral_at_radius(const DiagonalEquation& eq, double B,
                                              const Budget& budget) {
    if (eq.s < eq.k + 1) throw TooFewVariables(eq.s);
    if (B <= 0.0) throw PreconditionFailed("radius B must be positive");
    // v(a beta, B) = B v1(a B^k beta): quadrature on scaled coefficients.
    const double Bk = std::pow(B, eq.k);
    std::vector<double> c;
    c.reserve(static_cast<std::size_t>(eq.s));
    for (const auto& aj : eq.a) c.push_back(std::fabs(aj.get_d()) * Bk);
    return quadrature_j(c, eq.k, eq.s, std::pow(B, eq.s), budget);
}

double lower_bound_ratio(const DiagonalEquation& eq, const Budget& budget) {
    if (!real_soluble(eq)) throw PreconditionFailed("lower_bound_ratio requires a real-soluble equation");
    if (eq.s < eq.k + 1) throw TooFewVariables(eq.s);
    RealDensityResult r = singular_integral(eq, JMethod::quadrature, 1, budget);
    return r.j_value.value * eq.height().get_d();
}

CertifiedValue e0_cross_check(const DiagonalEquation& eq, std::uint64_t seed, std::int64_t samples) {
    if (eq.k % 2 != 0) throw PreconditionFailed("e0_cross_check applies to even k only");
    if (eq.s > 6) throw PreconditionFailed("e0_cross_check is restricted to s <= 6");

    // Order so the last coefficient has maximal modulus; track signs.
    std::vector<double> amag(static_cast<std::size_t>(eq.s));
    std::vector<double> sig(static_cast<std::size_t>(eq.s));
    for (int j = 0; j < eq.s; ++j) {
        double v = eq.a[static_cast<std::size_t>(j)].get_d();
        amag[static_cast<std::size_t>(j)] = std::fabs(v);
        sig[static_cast<std::size_t>(j)] = v > 0 ? 1.0 : -1.0;
    }
    int last = 0;
    for (int j = 1; j < eq.s; ++j)
        if (amag[static_cast<std::size_t>(j)] > amag[static_cast<std::size_t>(last)]) last = j;
    std::swap(amag[static_cast<std::size_t>(last)], amag[static_cast<std::size_t>(eq.s - 1)]);
    std::swap(sig[static_cast<std::size_t>(last)], sig[static_cast<std::size_t>(eq.s - 1)]);

    // E(0) integral over eta_j in [0,|a_j|], j < s, with the singular factors
    // softened by eta_j = u_j^k; the last factor keeps its integrable
    // endpoint singularity (heavy-tailed estimator, flagged heuristic).
    const int m = eq.s - 1;
    const double expo = (1.0 - eq.k) / static_cast<double>(eq.k);
    double boxvol = 1.0;
    std::vector<double> side(static_cast<std::size_t>(m));
    for (int j = 0; j < m; ++j) {
        side[static_cast<std::size_t>(j)] = std::pow(amag[static_cast<std::size_t>(j)], 1.0 / eq.k);
        boxvol *= side[static_cast<std::size_t>(j)];
    }
    SplitMix rng{seed ^ 0xe0c5a5c5ull};
    double sum = 0.0, sumsq = 0.0;
    for (std::int64_t i = 0; i < samples; ++i) {
        double eta_s = 0.0;
        for (int j = 0; j < m; ++j) {
            double u = rng.unit() * side[static_cast<std::size_t>(j)];
            double etaj = std::pow(u, eq.k);
            eta_s -= sig[static_cast<std::size_t>(eq.s - 1)] * sig[static_cast<std::size_t>(j)] * etaj;
        }
        double f = 0.0;
        if (eta_s > 1e-300 && eta_s <= amag[static_cast<std::size_t>(eq.s - 1)]) f = std::pow(eta_s, expo);
        sum += f;
        sumsq += f * f;
    }
    const double mean = sum / static_cast<double>(samples);
    const double var = std::max(0.0, sumsq / static_cast<double>(samples) - mean * mean);
    const double se = std::sqrt(var / static_cast<double>(samples));
    double e0 = std::pow(static_cast<double>(eq.k), eq.s - 1) * boxvol * mean;
    double e0_se = std::pow(static_cast<double>(eq.k), eq.s - 1) * boxvol * se;

    double coeff = std::pow(2.0 / eq.k, eq.s);
    for (int j = 0; j < eq.s; ++j) coeff *= std::pow(amag[static_cast<std::size_t>(j)], -1.0 / eq.k);
    return CertifiedValue{coeff * e0, 3.0 * coeff * e0_se, false};
}

}  // namespace dioph
