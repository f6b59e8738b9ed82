#include "dioph/padic.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <map>
#include <memory>
#include <mutex>
#include <numeric>
#include <set>
#include <unordered_map>

#include "dioph/factor.hpp"
#include "dioph/realdensity.hpp"

namespace dioph {

namespace {

using cd = std::complex<double>;
constexpr double kPi = 3.141592653589793238462643383279502884;

std::int64_t ipow_i64(std::int64_t p, int e) {
    std::int64_t r = 1;
    while (e-- > 0) r *= p;
    return r;
}

std::int64_t mod_i64(const BigInt& v, std::int64_t n) {
    BigInt r = v % n;
    if (r < 0) r += n;
    return to_i64(r);
}

// Histogram of x^k mod n over x in [0, n).
std::vector<std::int64_t> power_histogram(std::int64_t n, int k) {
    std::vector<std::int64_t> h(static_cast<std::size_t>(n), 0);
    for (std::int64_t x = 0; x < n; ++x)
        ++h[static_cast<std::size_t>(pow_mod(x, static_cast<std::uint64_t>(k), n))];
    return h;
}

// ---------------------------------------------------------------------------
// Mixed-radix DFT for lengths p^l: X[c] = sum_m a[m] e(+ c m / n).
// ---------------------------------------------------------------------------

std::vector<cd> dft_pow_rec(const std::vector<cd>& a, std::int64_t p, const std::vector<cd>& roots) {
    const std::int64_t n = static_cast<std::int64_t>(a.size());
    if (n <= p) {
        std::vector<cd> X(static_cast<std::size_t>(n));
        for (std::int64_t c = 0; c < n; ++c) {
            cd acc = 0;
            for (std::int64_t m = 0; m < n; ++m)
                acc += a[static_cast<std::size_t>(m)] * roots[static_cast<std::size_t>(c * m % n)];
            X[static_cast<std::size_t>(c)] = acc;
        }
        return X;
    }
    const std::int64_t m = n / p;
    std::vector<cd> sub_roots(static_cast<std::size_t>(m));
    for (std::int64_t t = 0; t < m; ++t)
        sub_roots[static_cast<std::size_t>(t)] = roots[static_cast<std::size_t>(t * p)];
    std::vector<std::vector<cd>> H(static_cast<std::size_t>(p));
    std::vector<cd> sub(static_cast<std::size_t>(m));
    for (std::int64_t j = 0; j < p; ++j) {
        for (std::int64_t t = 0; t < m; ++t) sub[static_cast<std::size_t>(t)] = a[static_cast<std::size_t>(t * p + j)];
        H[static_cast<std::size_t>(j)] = dft_pow_rec(sub, p, sub_roots);
    }
    std::vector<cd> X(static_cast<std::size_t>(n));
    for (std::int64_t c = 0; c < n; ++c) {
        cd acc = 0;
        for (std::int64_t j = 0; j < p; ++j)
            acc += roots[static_cast<std::size_t>(c * j % n)] * H[static_cast<std::size_t>(j)][static_cast<std::size_t>(c % m)];
        X[static_cast<std::size_t>(c)] = acc;
    }
    return X;
}

std::vector<cd> dft_prime_power(const std::vector<cd>& a, std::int64_t p) {
    const std::int64_t n = static_cast<std::int64_t>(a.size());
    std::vector<cd> roots(static_cast<std::size_t>(n));
    for (std::int64_t t = 0; t < n; ++t) {
        long double ang = 2.0L * static_cast<long double>(kPi) * static_cast<long double>(t) /
                          static_cast<long double>(n);
        roots[static_cast<std::size_t>(t)] = cd(static_cast<double>(cosl(ang)), static_cast<double>(sinl(ang)));
    }
    return dft_pow_rec(a, p, roots);
}

// W[c] = S(p^l, c) for all residues c, cached by (k, p, l). Shared pointers
// keep handed-out tables alive across cache eviction.
std::shared_ptr<const std::vector<cd>> gauss_table(int k, std::int64_t p, int l) {
    static std::map<std::tuple<int, std::int64_t, int>, std::shared_ptr<const std::vector<cd>>> cache;
    static std::size_t cached_elems = 0;
    static std::mutex mu;
    {
        std::lock_guard<std::mutex> lock(mu);
        auto it = cache.find(std::make_tuple(k, p, l));
        if (it != cache.end()) return it->second;
    }
    const std::int64_t n = ipow_i64(p, l);
    auto hist = power_histogram(n, k);
    std::vector<cd> a(static_cast<std::size_t>(n));
    for (std::int64_t m = 0; m < n; ++m)
        a[static_cast<std::size_t>(m)] = cd(static_cast<double>(hist[static_cast<std::size_t>(m)]), 0.0);
    auto W = std::make_shared<const std::vector<cd>>(dft_prime_power(a, p));
    std::lock_guard<std::mutex> lock(mu);
    if (cached_elems > 6'000'000) {
        cache.clear();
        cached_elems = 0;
    }
    cached_elems += W->size();
    cache[std::make_tuple(k, p, l)] = W;
    return W;
}

// ---------------------------------------------------------------------------
// Class data for S(p, c) at prime modulus: S depends on c only through the
// coset of c modulo k-th powers of units, of which there are gcd(k, p-1).
// ---------------------------------------------------------------------------

struct PrimeClassData {
    int g = 1;
    std::int64_t unit_exp = 1;  // (p-1)/g
    std::vector<cd> S_class;
    std::unordered_map<std::int64_t, int> class_of_power;  // c^unit_exp -> index
};

const PrimeClassData& prime_class_data(int k, std::int64_t p) {
    static std::map<std::pair<int, std::int64_t>, std::unique_ptr<PrimeClassData>> cache;
    static std::mutex mu;
    std::lock_guard<std::mutex> lock(mu);
    auto key = std::make_pair(k, p);
    auto it = cache.find(key);
    if (it != cache.end()) return *it->second;

    auto d = std::make_unique<PrimeClassData>();
    d->g = static_cast<int>(std::gcd<std::int64_t>(k, p - 1));
    d->unit_exp = (p - 1) / d->g;

    std::int64_t x0 = 1, mu_elem = 1;
    if (d->g > 1) {
        std::vector<int> gprimes;
        int gg = d->g;
        for (int q = 2; q * q <= gg; ++q)
            while (gg % q == 0) {
                if (gprimes.empty() || gprimes.back() != q) gprimes.push_back(q);
                gg /= q;
            }
        if (gg > 1) gprimes.push_back(gg);
        for (std::int64_t cand = 2; cand < p; ++cand) {
            std::int64_t m = pow_mod(cand, static_cast<std::uint64_t>(d->unit_exp), p);
            bool full = m != 1;
            for (int q : gprimes)
                if (full && pow_mod(m, static_cast<std::uint64_t>(d->g / q), p) == 1) full = false;
            if (full) {
                x0 = cand;
                mu_elem = m;
                break;
            }
        }
    }
    std::int64_t mp = 1;
    for (int i = 0; i < d->g; ++i) {
        d->class_of_power[mp] = i;
        mp = mul_mod(mp, mu_elem, p);
    }
    auto hist = power_histogram(p, k);
    std::int64_t rep = 1;
    d->S_class.resize(static_cast<std::size_t>(d->g));
    for (int i = 0; i < d->g; ++i) {
        long double re = 0, im = 0;
        for (std::int64_t m = 0; m < p; ++m) {
            if (hist[static_cast<std::size_t>(m)] == 0) continue;
            long double ang = 2.0L * static_cast<long double>(kPi) *
                              static_cast<long double>(mul_mod(rep, m, p)) / static_cast<long double>(p);
            re += static_cast<long double>(hist[static_cast<std::size_t>(m)]) * cosl(ang);
            im += static_cast<long double>(hist[static_cast<std::size_t>(m)]) * sinl(ang);
        }
        d->S_class[static_cast<std::size_t>(i)] = cd(static_cast<double>(re), static_cast<double>(im));
        rep = mul_mod(rep, x0, p);
    }
    return *cache.emplace(key, std::move(d)).first->second;
}

int class_index(const PrimeClassData& d, std::int64_t p, std::int64_t unit) {
    if (d.g == 1) return 0;
    auto it = d.class_of_power.find(pow_mod(unit, static_cast<std::uint64_t>(d.unit_exp), p));
    if (it == d.class_of_power.end()) throw Error("internal: class lookup failed");
    return it->second;
}

double discard_imag(cd z, const char* what) {
    double scale = std::max(1.0, std::abs(z.real()));
    if (std::abs(z.imag()) > 1e-8 * scale)
        throw Error(std::string(what) + ": imaginary part " + std::to_string(z.imag()) +
                    " fails to vanish");
    return z.real();
}

double t_prime(const DiagonalEquation& eq, std::int64_t p) {
    const auto& d = prime_class_data(eq.k, p);
    std::vector<int> cls(static_cast<std::size_t>(eq.s), -1);  // -1: p | a_j
    for (int j = 0; j < eq.s; ++j) {
        std::int64_t aj = mod_i64(eq.a[static_cast<std::size_t>(j)], p);
        if (aj != 0) cls[static_cast<std::size_t>(j)] = class_index(d, p, aj);
    }
    cd acc = 0;
    for (int t = 0; t < d.g; ++t) {
        cd prod = 1;
        for (int j = 0; j < eq.s; ++j) {
            if (cls[static_cast<std::size_t>(j)] < 0)
                prod *= static_cast<double>(p);
            else
                prod *= d.S_class[static_cast<std::size_t>((cls[static_cast<std::size_t>(j)] + t) % d.g)];
        }
        acc += prod;
    }
    acc *= static_cast<double>(p - 1) / d.g;
    acc *= std::pow(static_cast<double>(p), -eq.s);
    return discard_imag(acc, "T_a(p)");
}

double t_prime_power(const DiagonalEquation& eq, std::int64_t p, int l) {
    const std::int64_t n = ipow_i64(p, l);
    auto Wp = gauss_table(eq.k, p, l);
    const auto& W = *Wp;
    std::vector<std::int64_t> am(static_cast<std::size_t>(eq.s));
    for (int j = 0; j < eq.s; ++j) am[static_cast<std::size_t>(j)] = mod_i64(eq.a[static_cast<std::size_t>(j)], n);
    cd acc = 0;
    for (std::int64_t r = 1; r < n; ++r) {
        if (r % p == 0) continue;
        cd prod = 1;
        for (int j = 0; j < eq.s; ++j) prod *= W[static_cast<std::size_t>(mul_mod(am[static_cast<std::size_t>(j)], r, n))];
        acc += prod;
    }
    acc *= std::pow(static_cast<double>(n), -eq.s);
    return discard_imag(acc, "T_a(p^l)");
}

double t_at_prime_power(const DiagonalEquation& eq, std::int64_t p, int l) {
    if (l == 1) return t_prime(eq, p);
    return t_prime_power(eq, p, l);
}

}  // namespace

std::complex<double> gauss_sum(std::int64_t q, const BigInt& r, int k) {
    if (q < 1) throw PreconditionFailed("gauss_sum requires q >= 1");
    const std::int64_t rm = mod_i64(r, q);
    std::vector<std::int64_t> hist = power_histogram(q, k);
    long double re = 0, im = 0;
    for (std::int64_t m = 0; m < q; ++m) {
        if (hist[static_cast<std::size_t>(m)] == 0) continue;
        long double ang = 2.0L * static_cast<long double>(kPi) *
                          static_cast<long double>(mul_mod(rm, m, q)) / static_cast<long double>(q);
        re += static_cast<long double>(hist[static_cast<std::size_t>(m)]) * cosl(ang);
        im += static_cast<long double>(hist[static_cast<std::size_t>(m)]) * sinl(ang);
    }
    return cd(static_cast<double>(re), static_cast<double>(im));
}

double kappa_prime_power(std::int64_t p, int l, int k) {
    if (l == 0) return 1.0;
    const int u = (l - 1) / k;
    const int v = l - u * k;  // 1 <= v <= k
    if (v == 1) return static_cast<double>(k) * std::pow(static_cast<double>(p), -u - 0.5);
    return std::pow(static_cast<double>(p), -u - 1.0);
}

double kappa(std::int64_t q, int k) {
    if (q < 1) throw PreconditionFailed("kappa requires q >= 1");
    double out = 1.0;
    for (const auto& [p, e] : factorize(BigInt(q))) out *= kappa_prime_power(to_i64(p), e, k);
    return out;
}

double t_coeff(const DiagonalEquation& eq, std::int64_t q, const Budget& budget) {
    if (q < 1) throw PreconditionFailed("t_coeff requires q >= 1");
    const std::int64_t q_cap = std::min<std::int64_t>(100'000, budget.modulus_cap);
    if (q > q_cap)
        throw BudgetExceeded("t_coeff: q=" + std::to_string(q) + " exceeds cap " + std::to_string(q_cap));
    if (q == 1) return 1.0;
    double out = 1.0;
    for (const auto& [p, e] : factorize(BigInt(q))) out *= t_at_prime_power(eq, to_i64(p), e);
    return out;
}

double t_coeff_definition(const DiagonalEquation& eq, std::int64_t q) {
    std::vector<std::int64_t> hist = power_histogram(q, eq.k);
    std::vector<cd> S(static_cast<std::size_t>(q));
    for (std::int64_t c = 0; c < q; ++c) {
        long double re = 0, im = 0;
        for (std::int64_t m = 0; m < q; ++m) {
            if (hist[static_cast<std::size_t>(m)] == 0) continue;
            long double ang = 2.0L * static_cast<long double>(kPi) *
                              static_cast<long double>(mul_mod(c, m, q)) / static_cast<long double>(q);
            re += static_cast<long double>(hist[static_cast<std::size_t>(m)]) * cosl(ang);
            im += static_cast<long double>(hist[static_cast<std::size_t>(m)]) * sinl(ang);
        }
        S[static_cast<std::size_t>(c)] = cd(static_cast<double>(re), static_cast<double>(im));
    }
    cd acc = 0;
    for (std::int64_t r = 1; r <= q; ++r) {
        if (std::gcd(r, q) != 1) continue;
        cd prod = 1;
        for (int j = 0; j < eq.s; ++j)
            prod *= S[static_cast<std::size_t>(mod_i64(eq.a[static_cast<std::size_t>(j)] * r, q))];
        acc += prod;
    }
    acc *= std::pow(static_cast<double>(q), -eq.s);
    return discard_imag(acc, "T_a(q) definition");
}

// ---------------------------------------------------------------------------
// Exact congruence counting.
// ---------------------------------------------------------------------------

namespace {

// Distinct values of a x^k mod n with multiplicities.
std::vector<std::pair<std::int64_t, std::int64_t>> value_kernel(const BigInt& a, std::int64_t n,
                                                                const std::vector<std::int64_t>& hist) {
    const std::int64_t am = mod_i64(a, n);
    std::unordered_map<std::int64_t, std::int64_t> merged;
    merged.reserve(hist.size() / 2 + 1);
    for (std::int64_t m = 0; m < n; ++m) {
        if (hist[static_cast<std::size_t>(m)] == 0) continue;
        merged[mul_mod(am, m, n)] += hist[static_cast<std::size_t>(m)];
    }
    return {merged.begin(), merged.end()};
}

template <typename Count>
BigInt convolve_count(const DiagonalEquation& eq, std::int64_t n,
                      const std::vector<std::int64_t>& hist, const Budget& budget) {
    std::vector<std::vector<std::pair<std::int64_t, std::int64_t>>> kernels;
    std::int64_t cost = 0;
    for (int j = 0; j < eq.s; ++j) {
        kernels.push_back(value_kernel(eq.a[static_cast<std::size_t>(j)], n, hist));
        cost += n + (j == 0 ? 1 : n) * static_cast<std::int64_t>(kernels.back().size()) / 4;
    }
    budget.charge(cost, "local_count convolution");

    std::vector<Count> cur(static_cast<std::size_t>(n), Count(0)), next;
    for (const auto& [v, m] : kernels[0]) cur[static_cast<std::size_t>(v)] = Count(m);
    for (int j = 1; j < eq.s; ++j) {
        next.assign(static_cast<std::size_t>(n), Count(0));
        for (const auto& [v, m] : kernels[static_cast<std::size_t>(j)]) {
            const Count mult(m);
            for (std::int64_t r = 0; r < n; ++r) {
                if (cur[static_cast<std::size_t>(r)] == Count(0)) continue;
                std::int64_t t = r + v;
                if (t >= n) t -= n;
                next[static_cast<std::size_t>(t)] += cur[static_cast<std::size_t>(r)] * mult;
            }
        }
        cur.swap(next);
    }
    return BigInt(cur[0]);
}

}  // namespace

BigInt local_count(const DiagonalEquation& eq, std::int64_t p, int l, const Budget& budget) {
    if (l < 1) throw PreconditionFailed("local_count requires l >= 1");
    if (std::pow(static_cast<double>(p), l) > static_cast<double>(budget.modulus_cap))
        throw BudgetExceeded("local_count: p^l exceeds modulus cap " +
                             std::to_string(budget.modulus_cap));
    const std::int64_t n = ipow_i64(p, l);
    auto hist = power_histogram(n, eq.k);
    if (eq.s * std::log2(static_cast<double>(n)) < 62.0)
        return convolve_count<std::int64_t>(eq, n, hist, budget);
    return convolve_count<BigInt>(eq, n, hist, budget);
}

BigInt primitive_count(const DiagonalEquation& eq, std::int64_t p, int h, const Budget& budget) {
    if (h < 1) throw PreconditionFailed("primitive_count requires h >= 1");
    BigInt all = local_count(eq, p, h, budget);
    // Tuples with every coordinate divisible by p: substitute x = p z.
    BigInt imprimitive;
    if (h <= eq.k)
        imprimitive = bpow(BigInt(p), static_cast<unsigned>(eq.s * (h - 1)));
    else
        imprimitive = bpow(BigInt(p), static_cast<unsigned>(eq.s * (eq.k - 1))) *
                      local_count(eq, p, h - eq.k, budget);
    return all - imprimitive;
}

// ---------------------------------------------------------------------------
// Explicit Gauss-sum magnitude bounds and tail estimates.
// ---------------------------------------------------------------------------

namespace {

// Upper bound for |S(p^m, u)| over units u. Exact classical structure when
// p does not divide k; a numerically tabulated maximum plus the p^(k-1)
// step recursion when p | k.
double gauss_unit_bound(std::int64_t p, int m, int k) {
    if (m == 0) return 1.0;
    if (k % p != 0) {
        const std::int64_t g = std::gcd<std::int64_t>(k, p - 1);
        if (m == 1) return static_cast<double>(g - 1) * std::sqrt(static_cast<double>(p));
        if (m <= k) return std::pow(static_cast<double>(p), m - 1);
        return std::pow(static_cast<double>(p), k - 1) * gauss_unit_bound(p, m - k, k);
    }
    static std::map<std::tuple<std::int64_t, int, int>, double> cache;
    static std::mutex mu;
    {
        std::lock_guard<std::mutex> lock(mu);
        auto it = cache.find(std::make_tuple(p, m, k));
        if (it != cache.end()) return it->second;
    }
    double out;
    if (std::pow(static_cast<double>(p), m) <= 1e6) {
        const std::int64_t n = ipow_i64(p, m);
        auto Wp = gauss_table(k, p, m);
        double mx = 0;
        for (std::int64_t c = 1; c < n; ++c)
            if (c % p != 0) mx = std::max(mx, std::abs((*Wp)[static_cast<std::size_t>(c)]));
        out = mx * (1.0 + 1e-9) + 1e-9;  // guard digits over the numeric max
    } else {
        out = std::pow(static_cast<double>(p), k - 1) * gauss_unit_bound(p, m - k, k);
    }
    std::lock_guard<std::mutex> lock(mu);
    cache[std::make_tuple(p, m, k)] = out;
    return out;
}

// Rigorous bound for |T_a(p^h)|.
double t_term_bound(const std::vector<int>& vals, int s, int k, std::int64_t p, int h) {
    double lg = -static_cast<double>(h) * s * std::log(static_cast<double>(p));
    lg += (h - 1) * std::log(static_cast<double>(p)) + std::log(static_cast<double>(p - 1));
    for (int j = 0; j < s; ++j) {
        const int v = std::min(vals[static_cast<std::size_t>(j)], h);
        const double eb = gauss_unit_bound(p, h - v, k);
        if (eb == 0.0) return 0.0;
        lg += v * std::log(static_cast<double>(p)) + std::log(eb);
    }
    return std::exp(lg);
}

// Bound for |sum_{h > depth} T_a(p^h)| (requires s > k).
double chi_tail_bound(const std::vector<int>& vals, int s, int k, std::int64_t p, int depth) {
    const int max_v = *std::max_element(vals.begin(), vals.end());
    const double ratio = std::pow(static_cast<double>(p), k - s);
    double total = 0.0;
    int h = depth + 1;
    while (h <= max_v + k + 1) total += t_term_bound(vals, s, k, p, h), ++h;
    double block = 0.0;
    for (int i = 0; i < k; ++i, ++h) {
        double t = t_term_bound(vals, s, k, p, h);
        total += t;
        block += t;
    }
    total += block * ratio / (1.0 - ratio);
    return total;
}

std::vector<int> coeff_valuations(const DiagonalEquation& eq, std::int64_t p) {
    std::vector<int> vals(static_cast<std::size_t>(eq.s));
    for (int j = 0; j < eq.s; ++j) vals[static_cast<std::size_t>(j)] = valuation(eq.a[static_cast<std::size_t>(j)], p);
    return vals;
}

}  // namespace

std::int64_t good_prime_threshold(int k, int s) {
    if (s < 3) throw PreconditionFailed("good_prime_threshold requires s >= 3");
    // Smallest prime with p^(s-1) - (k-1)^s p^(s/2) - 1 > 0, tested exactly as
    // (p^(s-1) - 1)^2 > (k-1)^(2s) p^s.
    for (std::int64_t p : primes_up_to(100'000)) {
        BigInt lhs = bpow(BigInt(p), static_cast<unsigned>(s - 1)) - 1;
        if (lhs <= 0) continue;
        if (lhs * lhs > bpow(BigInt(k - 1), static_cast<unsigned>(2 * s)) * bpow(BigInt(p), static_cast<unsigned>(s)))
            return p;
    }
    throw Error("good_prime_threshold: no certifying prime below 10^5 (s too small)");
}

LocalFactor chi_p(const DiagonalEquation& eq, std::int64_t p, const Budget& budget) {
    // s >= k+1 makes the imprimitive recursion contract (ratio p^(k-s)).
    if (eq.s < eq.k + 1) throw PreconditionFailed("chi_p requires s >= k+1");
    if (!is_prime_i64(p)) throw PreconditionFailed("chi_p: p must be prime");

    const auto vals = coeff_valuations(eq, p);
    const bool good = eq.k % p != 0 && std::all_of(vals.begin(), vals.end(), [](int v) { return v == 0; });

    if (good) {
        // Nonzero solutions mod p are nonsingular and lift with multiplicity
        // p^(s-1); imprimitive solutions recurse with step k. Exact rational.
        BigInt m_star = local_count(eq, p, 1, budget) - 1;
        mpq_class chi_exact(m_star * p,
                            bpow(BigInt(p), static_cast<unsigned>(eq.s)) - bpow(BigInt(p), static_cast<unsigned>(eq.k)));
        chi_exact.canonicalize();
        double val = chi_exact.get_d();
        LocalFactor f;
        f.p = p;
        f.chi = CertifiedValue{val, 8.0 * std::numeric_limits<double>::epsilon() * std::abs(val), true};
        f.depth = 1;
        f.method = LocalMethod::closed_form;
        f.positive = m_star > 0;
        return f;
    }

    const int l_max = *std::max_element(vals.begin(), vals.end());
    const int nu = valuation(BigInt(eq.k), p);
    const int h0 = l_max + nu + 2;
    if (std::pow(static_cast<double>(p), h0) > static_cast<double>(budget.modulus_cap))
        throw BudgetExceeded("chi_p: required depth p^" + std::to_string(h0) + " exceeds modulus cap");

    BigInt prim = primitive_count(eq, p, h0, budget);
    LocalFactor f;
    f.p = p;
    f.method = LocalMethod::iterative;
    if (prim == 0) {
        // No primitive solution at the decisive depth: every deeper solution
        // is imprimitive and the scaled counts collapse to 0.
        f.chi = CertifiedValue{0.0, 0.0, true};
        f.depth = h0;
        f.positive = false;
        return f;
    }

    std::vector<double> c;
    int depth = h0;
    auto scaled = [&](int l) {
        BigInt m = local_count(eq, p, l, budget);
        mpq_class q(m, bpow(BigInt(p), static_cast<unsigned>(l * (eq.s - 1))));
        return q.get_d();
    };
    c.push_back(scaled(depth));
    double tail = chi_tail_bound(vals, eq.s, eq.k, p, depth);
    while (tail > 1e-6 * std::max(1.0, std::abs(c.back())) &&
           std::pow(static_cast<double>(p), depth + 1) <= static_cast<double>(budget.modulus_cap)) {
        try {
            double next = scaled(depth + 1);
            c.push_back(next);
            ++depth;
        } catch (const BudgetExceeded&) {
            break;  // keep the certified value at the deepest affordable level
        }
        tail = chi_tail_bound(vals, eq.s, eq.k, p, depth);
    }

    // Geometric extrapolation across one full period of k depths; exact for
    // the structural recursion, heuristic correction otherwise (the tail
    // bound still covers the distance to the limit from c.back()).
    double value = c.back();
    double corr = 0.0;
    if (static_cast<int>(c.size()) > eq.k) {
        const double r = std::pow(static_cast<double>(p), eq.k - eq.s);
        corr = (c.back() - c[c.size() - 1 - static_cast<std::size_t>(eq.k)]) * r / (1.0 - r);
        value += corr;
    }
    double radius = tail + std::abs(corr) + 1e-12 * std::max(1.0, std::abs(value));
    // Solubility guarantees chi_p >= p^((1-s) h0); clip the interval.
    const double floor_chi = std::pow(static_cast<double>(p), static_cast<double>(1 - eq.s) * h0);
    double lo = std::max(value - radius, floor_chi), hi = value + radius;
    f.chi = CertifiedValue{(lo + hi) / 2.0, (hi - lo) / 2.0, true};
    f.depth = depth;
    f.positive = true;
    return f;
}

// ---------------------------------------------------------------------------
// Q_p solubility.
// ---------------------------------------------------------------------------

namespace {

// Witness extraction: for a forced index carrying a unit coordinate, run a
// forward reachability DP over residues storing one representative digit per
// state, then walk backwards from 0.
std::optional<std::vector<std::int64_t>> forced_unit_witness(const DiagonalEquation& eq,
                                                             std::int64_t p, std::int64_t n,
                                                             const Budget& budget) {
    auto hist = power_histogram(n, eq.k);
    std::int64_t nnz = 0;
    for (auto h : hist) nnz += (h != 0);
    budget.charge(eq.s * (eq.s * n * nnz / 4 + n), "qp witness search");

    for (int forced = 0; forced < eq.s; ++forced) {
        std::vector<std::vector<std::int32_t>> choice(static_cast<std::size_t>(eq.s));
        std::vector<char> cur(static_cast<std::size_t>(n), 0), nx;
        cur[0] = 1;
        bool dead = false;
        for (int j = 0; j < eq.s && !dead; ++j) {
            choice[static_cast<std::size_t>(j)].assign(static_cast<std::size_t>(n), -1);
            nx.assign(static_cast<std::size_t>(n), 0);
            const std::int64_t am = mod_i64(eq.a[static_cast<std::size_t>(j)], n);
            std::unordered_map<std::int64_t, std::int64_t> vals;
            for (std::int64_t xv = 0; xv < n; ++xv) {
                if (j == forced && xv % p == 0) continue;
                vals.emplace(mul_mod(am, pow_mod(xv, static_cast<std::uint64_t>(eq.k), n), n), xv);
            }
            for (std::int64_t q = 0; q < n; ++q) {
                if (!cur[static_cast<std::size_t>(q)]) continue;
                for (const auto& [val, xv] : vals) {
                    std::int64_t t = q + val;
                    if (t >= n) t -= n;
                    if (!nx[static_cast<std::size_t>(t)]) {
                        nx[static_cast<std::size_t>(t)] = 1;
                        choice[static_cast<std::size_t>(j)][static_cast<std::size_t>(t)] = static_cast<std::int32_t>(xv);
                    }
                }
            }
            cur.swap(nx);
            dead = std::none_of(cur.begin(), cur.end(), [](char v) { return v != 0; });
        }
        if (dead || !cur[0]) continue;

        // The stored digit at (j, t) always has a reachable predecessor at
        // (t - value) mod n, so the backwards walk is well defined.
        std::vector<std::int64_t> x(static_cast<std::size_t>(eq.s));
        std::int64_t r = 0;
        bool ok = true;
        for (int j = eq.s - 1; j >= 0 && ok; --j) {
            std::int32_t xv = choice[static_cast<std::size_t>(j)][static_cast<std::size_t>(r)];
            if (xv < 0) {
                ok = false;
                break;
            }
            x[static_cast<std::size_t>(j)] = xv;
            const std::int64_t am = mod_i64(eq.a[static_cast<std::size_t>(j)], n);
            r = (r - mul_mod(am, pow_mod(xv, static_cast<std::uint64_t>(eq.k), n), n)) % n;
            if (r < 0) r += n;
        }
        if (!ok) continue;
        BigInt acc = 0;
        for (int j = 0; j < eq.s; ++j)
            acc += eq.a[static_cast<std::size_t>(j)] * bpow(BigInt(x[static_cast<std::size_t>(j)]), static_cast<unsigned>(eq.k));
        if (acc % n == 0 && x[static_cast<std::size_t>(forced)] % p != 0) return x;
    }
    return std::nullopt;
}

// Hensel-lift a mod-p solution with unit pivot j0 (p coprime to k a_{j0}
// x_{j0}) up to modulus p^h.
std::optional<std::vector<std::int64_t>> lift_witness(const DiagonalEquation& eq, std::int64_t p,
                                                      int h, std::vector<std::int64_t> x, int j0) {
    std::int64_t n = p;
    for (int step = 1; step < h; ++step) {
        const std::int64_t n_next = n * p;
        BigInt fval = 0;
        for (int j = 0; j < eq.s; ++j)
            fval += eq.a[static_cast<std::size_t>(j)] * bpow(BigInt(x[static_cast<std::size_t>(j)]), static_cast<unsigned>(eq.k));
        BigInt fmod = fval % n_next;
        if (fmod < 0) fmod += n_next;
        if (fmod % n != 0) return std::nullopt;
        std::int64_t rhs = to_i64((fmod / n) % p);
        std::int64_t der = mul_mod(mod_i64(BigInt(eq.k) * eq.a[static_cast<std::size_t>(j0)], p),
                                   pow_mod(x[static_cast<std::size_t>(j0)] % p, static_cast<std::uint64_t>(eq.k - 1), p), p);
        if (der == 0) return std::nullopt;
        std::int64_t inv = pow_mod(der, static_cast<std::uint64_t>(p - 2), p);
        std::int64_t d = mul_mod((p - rhs) % p, inv, p);
        x[static_cast<std::size_t>(j0)] += d * n;
        n = n_next;
    }
    return x;
}

struct SplitMix {
    std::uint64_t state;
    std::uint64_t next() {
        std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }
    std::int64_t below(std::int64_t n) {
        return static_cast<std::int64_t>(next() % static_cast<std::uint64_t>(n));
    }
};

// Large-modulus fallback: nonsingular mod-p point with a unit pivot, lifted.
std::optional<std::vector<std::int64_t>> large_prime_witness(const DiagonalEquation& eq,
                                                             std::int64_t p, int h, int tries) {
    if (eq.k % p == 0) return std::nullopt;
    if (h * std::log2(static_cast<double>(p)) > 62.0) return std::nullopt;
    std::vector<int> unit_idx;
    for (int j = 0; j < eq.s; ++j)
        if (mod_i64(eq.a[static_cast<std::size_t>(j)], p) != 0) unit_idx.push_back(j);
    if (unit_idx.empty()) return std::nullopt;
    SplitMix rng{0xd10f4a11ULL ^ static_cast<std::uint64_t>(p)};
    const int j0 = unit_idx[0];
    const std::int64_t a0 = mod_i64(eq.a[static_cast<std::size_t>(j0)], p);
    for (int t = 0; t < tries; ++t) {
        std::vector<std::int64_t> x(static_cast<std::size_t>(eq.s), 0);
        std::int64_t tail = 0;
        for (int j : unit_idx) {
            if (j == j0) continue;
            x[static_cast<std::size_t>(j)] = rng.below(p);
            tail = (tail + mul_mod(mod_i64(eq.a[static_cast<std::size_t>(j)], p),
                                   pow_mod(x[static_cast<std::size_t>(j)], static_cast<std::uint64_t>(eq.k), p), p)) %
                   p;
        }
        for (std::int64_t xv = 1; xv < p; ++xv) {
            if ((tail + mul_mod(a0, pow_mod(xv, static_cast<std::uint64_t>(eq.k), p), p)) % p == 0) {
                x[static_cast<std::size_t>(j0)] = xv;
                auto lifted = lift_witness(eq, p, h, x, j0);
                if (lifted) return lifted;
            }
        }
    }
    return std::nullopt;
}

}  // namespace

QpVerdict qp_soluble(const DiagonalEquation& eq, std::int64_t p, const Budget& budget) {
    if (!is_prime_i64(p)) throw PreconditionFailed("qp_soluble: p must be prime");
    const auto vals = coeff_valuations(eq, p);
    const int l_max = *std::max_element(vals.begin(), vals.end());
    const int nu = valuation(BigInt(eq.k), p);
    const int h = l_max + nu + 2;

    QpVerdict out;
    out.h = h;
    if (std::pow(static_cast<double>(p), h) <= static_cast<double>(budget.modulus_cap)) {
        const std::int64_t n = ipow_i64(p, h);
        BigInt prim = primitive_count(eq, p, h, budget);
        out.soluble = prim > 0;
        out.certified = true;
        if (out.soluble) {
            auto w = forced_unit_witness(eq, p, n, budget);
            if (!w) throw Error("internal: positive primitive count but no witness found");
            out.witness = Witness{std::move(*w), n};
        }
        return out;
    }

    // Modulus beyond the histogram budget: constructive lifting only. Not
    // finding a witness cannot certify a negative verdict.
    auto w = large_prime_witness(eq, p, h, 32);
    if (w) {
        out.soluble = true;
        out.certified = true;
        out.witness = Witness{std::move(*w), ipow_i64(p, h)};
    } else {
        out.soluble = false;
        out.certified = false;
    }
    return out;
}

// ---------------------------------------------------------------------------
// Singular series.
// ---------------------------------------------------------------------------

namespace {

// |chi_p - 1| bound for good primes from the Weil count.
double good_prime_deviation(int k, int s, std::int64_t p) {
    const double pd = static_cast<double>(p);
    const double weil = std::pow(static_cast<double>(k - 1), s) * std::pow(pd, 1.0 - 0.5 * s);
    const double geo = std::pow(pd, static_cast<double>(k - s));
    return (weil + geo) / (1.0 - geo);
}

// f(q) = q kappa(q/(q;a_1)) ... kappa(q/(q;a_s)) at a prime power.
double kappa_shape_pp(const std::vector<int>& vals, int s, int k, std::int64_t p, int l) {
    double f = std::pow(static_cast<double>(p), l);
    for (int j = 0; j < s; ++j)
        f *= kappa_prime_power(p, std::max(0, l - vals[static_cast<std::size_t>(j)]), k);
    return f;
}

double kappa_shape_euler_factor(const std::vector<int>& vals, int s, int k, std::int64_t p) {
    const int max_v = *std::max_element(vals.begin(), vals.end());
    double total = 1.0;
    double block = 0.0;
    int l = 1;
    for (; l <= max_v + k; ++l) total += kappa_shape_pp(vals, s, k, p, l);
    for (int i = 0; i < k; ++i, ++l) {
        double t = kappa_shape_pp(vals, s, k, p, l);
        total += t;
        block += t;
    }
    const double ratio = std::pow(static_cast<double>(p), k - s);
    return total + block * ratio / (1.0 - ratio);
}

// Upper estimate for sum over all q of the kappa shape.
double kappa_shape_total(const DiagonalEquation& eq, std::int64_t p_explicit_max) {
    std::vector<int> zero_vals(static_cast<std::size_t>(eq.s), 0);
    std::set<std::int64_t> divisor_primes;
    for (const auto& c : eq.a)
        for (const auto& [p, e] : factorize(c)) divisor_primes.insert(to_i64(p));
    double log_total = 0.0;
    for (std::int64_t p : primes_up_to(p_explicit_max)) {
        if (p > p_explicit_max) break;
        if (divisor_primes.count(p)) {
            log_total += std::log(kappa_shape_euler_factor(coeff_valuations(eq, p), eq.s, eq.k, p));
        } else {
            log_total += std::log(kappa_shape_euler_factor(zero_vals, eq.s, eq.k, p));
        }
    }
    for (std::int64_t p : divisor_primes) {
        if (p <= p_explicit_max) continue;
        log_total += std::log(kappa_shape_euler_factor(coeff_valuations(eq, p), eq.s, eq.k, p));
    }
    const double P = static_cast<double>(p_explicit_max);
    const double s_d = eq.s, k_d = eq.k;
    double tail = 2.0 * std::pow(static_cast<double>(eq.k), s_d) * std::pow(P, 2.0 - 0.5 * s_d) /
                      (0.5 * s_d - 2.0) +
                  4.0 * std::pow(P, k_d - s_d + 1.0) / (s_d - k_d - 1.0);
    return std::exp(log_total + tail);
}

// Values of a multiplicative function on 1..limit-1 from its prime powers.
template <typename PP>
std::vector<double> multiplicative_table(std::int64_t limit, PP&& prime_power_value) {
    std::vector<double> f(static_cast<std::size_t>(std::max<std::int64_t>(limit, 2)), 0.0);
    f[1] = 1.0;
    std::vector<std::int32_t> spf(static_cast<std::size_t>(std::max<std::int64_t>(limit, 2)), 0);
    for (std::int64_t i = 2; i < limit; ++i)
        if (spf[static_cast<std::size_t>(i)] == 0)
            for (std::int64_t j = i; j < limit; j += i)
                if (spf[static_cast<std::size_t>(j)] == 0) spf[static_cast<std::size_t>(j)] = static_cast<std::int32_t>(i);
    for (std::int64_t q = 2; q < limit; ++q) {
        std::int64_t p = spf[static_cast<std::size_t>(q)];
        std::int64_t m = q, pe = 1;
        int e = 0;
        while (m % p == 0) m /= p, pe *= p, ++e;
        f[static_cast<std::size_t>(q)] =
            (m == 1) ? prime_power_value(p, e) : f[static_cast<std::size_t>(pe)] * f[static_cast<std::size_t>(m)];
    }
    return f;
}

}  // namespace

double series_tail(const DiagonalEquation& eq, double Q, const Budget& budget, std::int64_t q_max) {
    if (eq.s < eq.k + 2) throw PreconditionFailed("series_tail requires s >= k+2");
    if (Q < 1) throw PreconditionFailed("series_tail requires Q >= 1");
    q_max = std::max<std::int64_t>(2, std::min<std::int64_t>(q_max, std::min<std::int64_t>(100'000, budget.modulus_cap)));
    budget.charge(4 * q_max, "series_tail");

    double partial = 0.0;
    if (Q < static_cast<double>(q_max)) {
        auto tvals = multiplicative_table(q_max, [&](std::int64_t p, int e) { return t_at_prime_power(eq, p, e); });
        for (std::int64_t q = static_cast<std::int64_t>(std::ceil(Q)); q < q_max; ++q)
            partial += tvals[static_cast<std::size_t>(q)];
    }

    auto fvals = multiplicative_table(q_max, [&](std::int64_t p, int e) {
        return kappa_shape_pp(coeff_valuations(eq, p), eq.s, eq.k, p, e);
    });
    double below = 0.0;
    for (std::int64_t q = 1; q < q_max; ++q) below += fvals[static_cast<std::size_t>(q)];
    double bound = kappa_shape_total(eq, 10'000) - below;
    if (bound < 0) bound = 0;
    return partial + bound;
}

SingularSeriesResult singular_series(const DiagonalEquation& eq, SeriesMode mode,
                                     const Budget& budget, std::int64_t Q) {
    if (eq.s < eq.k + 2) throw PreconditionFailed("singular_series requires s >= k+2");
    SingularSeriesResult out;
    out.mode = mode;

    if (mode == SeriesMode::q_series) {
        Q = std::max<std::int64_t>(2, std::min<std::int64_t>(Q, std::min<std::int64_t>(50'000, budget.modulus_cap)));
        budget.charge(8 * Q, "singular_series q_series");
        auto tvals = multiplicative_table(2 * Q, [&](std::int64_t p, int e) { return t_at_prime_power(eq, p, e); });
        double sQ = 0.0, s2Q = 0.0;
        for (std::int64_t q = 1; q < 2 * Q; ++q) {
            if (q < Q) sQ += tvals[static_cast<std::size_t>(q)];
            s2Q += tvals[static_cast<std::size_t>(q)];
        }
        const double diag = std::abs(s2Q - sQ);  // Q-vs-2Q agreement diagnostic
        double shape = series_tail(eq, static_cast<double>(2 * Q), budget, 2 * Q);
        out.value = CertifiedValue{sQ, diag + shape, false};
        out.tail_bound = diag + shape;
        return out;
    }

    // Euler product over an explicit prime list: everything at or below the
    // Weil threshold, the divisors of k and of the coefficients, extended
    // until the per-prime deviation bound is summable.
    const std::int64_t p0 = good_prime_threshold(eq.k, eq.s);
    std::set<std::int64_t> explicit_primes;
    for (std::int64_t p : primes_up_to(p0)) {
        if (p > p0) break;
        explicit_primes.insert(p);
    }
    for (const auto& [p, e] : factorize(BigInt(eq.k))) explicit_primes.insert(to_i64(p));
    for (const auto& c : eq.a)
        for (const auto& [p, e] : factorize(c)) explicit_primes.insert(to_i64(p));
    std::int64_t first_tail_prime = p0 + 1;
    for (std::int64_t p : primes_up_to(10'000)) {
        if (p <= p0) continue;
        if (good_prime_deviation(eq.k, eq.s, p) < 0.5) {
            first_tail_prime = p;
            break;
        }
        explicit_primes.insert(p);
    }

    double lo = 1.0, hi = 1.0;
    bool certified = true;
    bool exactly_zero = false;
    for (std::int64_t p : explicit_primes) {
        LocalFactor f = chi_p(eq, p, budget);
        out.factors.push_back(f);
        if (!f.positive && f.chi.value == 0.0) exactly_zero = true;
        certified = certified && f.chi.certified;
        lo *= std::max(0.0, f.chi.lo());
        hi *= f.chi.hi();
    }
    if (exactly_zero) {
        out.value = CertifiedValue{0.0, 0.0, true};
        out.tail_bound = 0.0;
        return out;
    }

    double log_lo = 0.0, log_hi = 0.0;
    for (std::int64_t p : primes_up_to(100'000)) {
        if (p > 100'000) break;
        if (p < first_tail_prime || explicit_primes.count(p)) continue;
        const double b = good_prime_deviation(eq.k, eq.s, p);
        log_lo += std::log1p(-b);
        log_hi += std::log1p(b);
    }
    {
        const double P = 100'000.0;
        const double s_d = eq.s, k_d = eq.k;
        double rem = std::pow(static_cast<double>(eq.k - 1), s_d) * std::pow(P, 2.0 - 0.5 * s_d) /
                         (0.5 * s_d - 2.0) +
                     2.0 * std::pow(P, k_d - s_d + 1.0) / (s_d - k_d - 1.0);
        rem *= 2.0;
        log_lo -= rem;
        log_hi += rem;
    }
    const double t_lo = std::exp(log_lo), t_hi = std::exp(log_hi);
    out.tail_bound = std::max(1.0 - t_lo, t_hi - 1.0);
    const double final_lo = lo * t_lo, final_hi = hi * t_hi;
    out.value = CertifiedValue{(final_lo + final_hi) / 2.0, (final_hi - final_lo) / 2.0, certified};
    return out;
}

SolubilityReport locally_soluble(const DiagonalEquation& eq, const Budget& budget) {
    SolubilityReport rep;
    rep.real_soluble = real_soluble(eq);

    // Prime checklist: everything at or below the Weil threshold, the primes
    // dividing k, and every coefficient divisor whose subset Weil test fails.
    std::set<std::int64_t> checklist;
    bool heuristic = false;
    std::int64_t p0 = 0;
    if (eq.s >= eq.k + 2) {
        p0 = good_prime_threshold(eq.k, eq.s);
    } else {
        p0 = 100;  // no certifying threshold in this range of s
        heuristic = true;
    }
    for (std::int64_t p : primes_up_to(p0)) {
        if (p > p0) break;
        checklist.insert(p);
    }
    for (const auto& [p, e] : factorize(BigInt(eq.k))) checklist.insert(to_i64(p));
    std::set<std::int64_t> divisor_primes;
    for (const auto& c : eq.a)
        for (const auto& [p, e] : factorize(c)) divisor_primes.insert(to_i64(p));
    for (std::int64_t p : divisor_primes) {
        if (checklist.count(p)) continue;
        int coprime = 0;
        for (const auto& c : eq.a)
            if (!mpz_divisible_ui_p(c.get_mpz_t(), static_cast<unsigned long>(p))) ++coprime;
        bool certified_good = false;
        if (coprime >= eq.k + 2 && eq.k % p != 0) {
            // subset Weil test, exact: (p^(s-1) - 1)^2 > (k-1)^(2c) p^(2s-c)
            BigInt lhs = bpow(BigInt(p), static_cast<unsigned>(eq.s - 1)) - 1;
            if (lhs > 0) {
                certified_good = lhs * lhs > bpow(BigInt(eq.k - 1), static_cast<unsigned>(2 * coprime)) *
                                                 bpow(BigInt(p), static_cast<unsigned>(2 * eq.s - coprime));
            }
        }
        if (!certified_good) checklist.insert(p);
    }

    rep.locally_soluble = rep.real_soluble;
    if (!rep.real_soluble) rep.culprit_prime = 0;
    for (std::int64_t p : checklist) {
        QpVerdict v = qp_soluble(eq, p, budget);
        rep.primes.push_back(PrimeVerdict{p, v.soluble, v.witness, !v.certified});
        if (!v.certified) heuristic = true;
        if (!v.soluble && rep.locally_soluble) {
            rep.locally_soluble = false;
            if (!rep.culprit_prime) rep.culprit_prime = p;
        }
    }
    rep.heuristic = heuristic;
    return rep;
}

}  // namespace dioph
