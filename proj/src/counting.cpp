#include "dioph/counting.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <limits>
#include <map>
#include <unordered_map>

#include "dioph/factor.hpp"

namespace dioph {

namespace {

// Coordinate enumeration order 0, 1, -1, 2, -2, ...; index() is its rank.
inline std::int64_t enum_value(std::int64_t idx) {
    return (idx % 2 == 1) ? (idx + 1) / 2 : -idx / 2;
}

// (2B+1)^e as BigInt, for budget and overflow checks.
BigInt box_size(std::int64_t B, int e) { return bpow(BigInt(2 * B + 1), static_cast<unsigned>(e)); }

void charge_big(const Budget& budget, const BigInt& cost, const char* what) {
    if (!cost.fits_slong_p())
        throw BudgetExceeded(std::string(what) + ": cost " + cost.get_str() + " exceeds budget");
    budget.charge(to_i64(cost), what);
}

// Odometer over [-B, B]^s in enumeration order; f is called with each tuple.
template <typename F>
void for_each_tuple(int s, std::int64_t B, F&& f) {
    const std::int64_t cnt = 2 * B + 1;
    std::vector<std::int64_t> idx(static_cast<std::size_t>(s), 0);
    std::vector<std::int64_t> x(static_cast<std::size_t>(s), 0);
    while (true) {
        if (!f(x)) return;
        int j = s - 1;
        while (j >= 0 && idx[static_cast<std::size_t>(j)] == cnt - 1) {
            idx[static_cast<std::size_t>(j)] = 0;
            x[static_cast<std::size_t>(j)] = 0;
            --j;
        }
        if (j < 0) return;
        ++idx[static_cast<std::size_t>(j)];
        x[static_cast<std::size_t>(j)] = enum_value(idx[static_cast<std::size_t>(j)]);
    }
}

BigInt rho_brute(const DiagonalEquation& eq, std::int64_t B, const Budget& budget) {
    charge_big(budget, box_size(B, eq.s), "rho brute");
    BigInt count = 0;
    std::vector<BigInt> powers(static_cast<std::size_t>(2 * B + 1));
    for (std::int64_t i = 0; i < 2 * B + 1; ++i)
        powers[static_cast<std::size_t>(i)] = bpow(enum_value(i), static_cast<unsigned>(eq.k));

    // Depth-first with partial sums; cheap enough at brute scale.
    std::vector<std::int64_t> x(static_cast<std::size_t>(eq.s));
    auto rec = [&](auto&& self, int j, const BigInt& acc) -> void {
        if (j == eq.s) {
            if (acc == 0) ++count;
            return;
        }
        for (std::int64_t i = 0; i < 2 * B + 1; ++i)
            self(self, j + 1, acc + eq.a[static_cast<std::size_t>(j)] * powers[static_cast<std::size_t>(i)]);
    };
    rec(rec, 0, BigInt(0));
    return count;
}

// Partial sums of a variable block, as (value, multiplicity)-free streams.
template <typename F>
void for_each_block_sum(const DiagonalEquation& eq, int from, int to, std::int64_t B, F&& f) {
    const std::int64_t cnt = 2 * B + 1;
    std::vector<BigInt> powers(static_cast<std::size_t>(cnt));
    for (std::int64_t i = 0; i < cnt; ++i)
        powers[static_cast<std::size_t>(i)] = bpow(enum_value(i), static_cast<unsigned>(eq.k));
    auto rec = [&](auto&& self, int j, const BigInt& acc) -> void {
        if (j == to) {
            f(acc);
            return;
        }
        for (std::int64_t i = 0; i < cnt; ++i)
            self(self, j + 1, acc + eq.a[static_cast<std::size_t>(j)] * powers[static_cast<std::size_t>(i)]);
    };
    rec(rec, from, BigInt(0));
}

BigInt rho_mitm(const DiagonalEquation& eq, std::int64_t B, const Budget& budget) {
    const int h = (eq.s + 1) / 2;  // table side
    charge_big(budget, box_size(B, h) * 4, "rho mitm");

    // Bound on |partial sum| decides the table representation.
    BigInt max_abs = 0;
    for (const auto& c : eq.a) max_abs += abs(c);
    max_abs *= bpow(BigInt(B), static_cast<unsigned>(eq.k));

    BigInt count = 0;
    if (fits_i64(max_abs) && to_i64(max_abs) < (std::int64_t(1) << 62) / 2) {
        const std::int64_t shift = to_i64(max_abs);
        std::unordered_map<std::int64_t, std::int64_t> table;
        table.reserve(1 << 12);
        bool dense = 2 * shift + 1 <= 20'000'000;
        std::vector<std::int64_t> dense_table;
        if (dense) dense_table.assign(static_cast<std::size_t>(2 * shift + 1), 0);
        for_each_block_sum(eq, 0, h, B, [&](const BigInt& v) {
            std::int64_t key = to_i64(v);
            if (dense)
                ++dense_table[static_cast<std::size_t>(key + shift)];
            else
                ++table[key];
        });
        for_each_block_sum(eq, h, eq.s, B, [&](const BigInt& v) {
            std::int64_t key = -to_i64(v);
            if (dense) {
                if (key >= -shift && key <= shift) count += dense_table[static_cast<std::size_t>(key + shift)];
            } else {
                auto it = table.find(key);
                if (it != table.end()) count += it->second;
            }
        });
    } else {
        std::map<BigInt, BigInt> table;
        for_each_block_sum(eq, 0, h, B, [&](const BigInt& v) { ++table[v]; });
        for_each_block_sum(eq, h, eq.s, B, [&](const BigInt& v) {
            auto it = table.find(-v);
            if (it != table.end()) count += it->second;
        });
    }
    return count;
}

BigInt rho_convolution(const DiagonalEquation& eq, std::int64_t B, const Budget& budget) {
    // Modulus large enough that residue 0 counts exact zeros only.
    BigInt N_big = 2 * bpow(BigInt(B), static_cast<unsigned>(eq.k)) * eq.abs_coeff_sum() + 1;
    if (!fits_i64(N_big) || to_i64(N_big) > budget.modulus_cap * 100)
        throw BudgetExceeded("rho convolution: modulus " + N_big.get_str() + " too large");
    const std::int64_t N = to_i64(N_big);
    charge_big(budget, BigInt(N) * eq.s * (2 * B + 1), "rho convolution");

    // Per-variable offset kernel: residues of a_j x^k mod N with multiplicity.
    auto kernel_of = [&](int j) {
        std::map<std::int64_t, std::int64_t> kern;
        for (std::int64_t i = 0; i < 2 * B + 1; ++i) {
            BigInt v = eq.a[static_cast<std::size_t>(j)] * bpow(enum_value(i), static_cast<unsigned>(eq.k));
            BigInt r = v % N;
            if (r < 0) r += N;
            ++kern[to_i64(r)];
        }
        return kern;
    };

    const bool small_counts = box_size(B, eq.s) < BigInt(1) << 62;
    if (small_counts) {
        std::vector<std::int64_t> cur(static_cast<std::size_t>(N), 0), next;
        for (const auto& [off, mult] : kernel_of(0)) cur[static_cast<std::size_t>(off)] += mult;
        for (int j = 1; j < eq.s; ++j) {
            next.assign(static_cast<std::size_t>(N), 0);
            for (const auto& [off, mult] : kernel_of(j)) {
                for (std::int64_t r = 0; r < N; ++r) {
                    if (cur[static_cast<std::size_t>(r)] == 0) continue;
                    std::int64_t t = r + off;
                    if (t >= N) t -= N;
                    next[static_cast<std::size_t>(t)] += cur[static_cast<std::size_t>(r)] * mult;
                }
            }
            cur.swap(next);
        }
        return BigInt(cur[0]);
    }
    std::vector<BigInt> cur(static_cast<std::size_t>(N), BigInt(0)), next;
    for (const auto& [off, mult] : kernel_of(0)) cur[static_cast<std::size_t>(off)] += mult;
    for (int j = 1; j < eq.s; ++j) {
        next.assign(static_cast<std::size_t>(N), BigInt(0));
        for (const auto& [off, mult] : kernel_of(j)) {
            for (std::int64_t r = 0; r < N; ++r) {
                if (cur[static_cast<std::size_t>(r)] == 0) continue;
                std::int64_t t = r + off;
                if (t >= N) t -= N;
                next[static_cast<std::size_t>(t)] += cur[static_cast<std::size_t>(r)] * mult;
            }
        }
        cur.swap(next);
    }
    return cur[0];
}

}  // namespace

BigInt rho(const DiagonalEquation& eq, std::int64_t B, RhoMethod method, const Budget& budget) {
    if (B < 1) throw PreconditionFailed("rho requires B >= 1");
    switch (method) {
        case RhoMethod::brute: return rho_brute(eq, B, budget);
        case RhoMethod::mitm: return rho_mitm(eq, B, budget);
        case RhoMethod::convolution: return rho_convolution(eq, B, budget);
    }
    std::abort();
}

namespace {

// Witness search over the shell |x| <= B in enumeration-lexicographic order.
// Returns the first nontrivial solution, or nothing.
std::optional<std::vector<std::int64_t>> shell_witness(const DiagonalEquation& eq, std::int64_t B,
                                                       const Budget& budget) {
    const std::int64_t cnt = 2 * B + 1;
    const int m = eq.s / 2;       // table side (trailing variables)
    const int h = eq.s - m;       // search side
    charge_big(budget, box_size(B, h) * 4, "smallest_solution shell");

    if (m == 0) {
        std::optional<std::vector<std::int64_t>> found;
        for_each_tuple(eq.s, B, [&](const std::vector<std::int64_t>& x) {
            bool zero = std::all_of(x.begin(), x.end(), [](std::int64_t v) { return v == 0; });
            if (!zero && eq.evaluate(x) == 0) {
                found = x;
                return false;
            }
            return true;
        });
        return found;
    }

    // Encode a trailing tuple as base-cnt digits of enumeration indices; the
    // numeric order of encodings equals enumeration-lexicographic order.
    auto encode = [&](const std::vector<std::int64_t>& idx) {
        std::uint64_t code = 0;
        for (int j = 0; j < m; ++j) code = code * static_cast<std::uint64_t>(cnt) + static_cast<std::uint64_t>(idx[static_cast<std::size_t>(j)]);
        return code;
    };
    double enc_bits = m * std::log2(static_cast<double>(cnt));
    if (enc_bits >= 63) throw BudgetExceeded("smallest_solution: shell too large to encode");

    BigInt max_abs = 0;
    for (int j = h; j < eq.s; ++j) max_abs += abs(eq.a[static_cast<std::size_t>(j)]);
    max_abs *= bpow(BigInt(B), static_cast<unsigned>(eq.k));
    constexpr std::uint64_t kNone = ~0ULL;

    // minimal trailing tuple per reachable sum; for sum 0 also the minimal
    // nonzero trailing tuple (the zero tuple always occupies slot 0 first).
    const bool dense = fits_i64(max_abs) && 2 * to_i64(max_abs) + 1 <= 50'000'000;
    std::vector<std::uint64_t> dense_tab;
    std::map<BigInt, std::uint64_t> map_tab;
    std::uint64_t zero_key_nonzero = kNone;
    std::int64_t shift = dense ? to_i64(max_abs) : 0;
    if (dense) dense_tab.assign(static_cast<std::size_t>(2 * shift + 1), kNone);

    {
        std::vector<std::int64_t> idx(static_cast<std::size_t>(m), 0);
        std::vector<BigInt> powers(static_cast<std::size_t>(cnt));
        for (std::int64_t i = 0; i < cnt; ++i)
            powers[static_cast<std::size_t>(i)] = bpow(enum_value(i), static_cast<unsigned>(eq.k));
        auto rec = [&](auto&& self, int j, const BigInt& acc) -> void {
            if (j == m) {
                bool zero = std::all_of(idx.begin(), idx.end(), [](std::int64_t i) { return i == 0; });
                std::uint64_t code = encode(idx);
                if (dense) {
                    auto& slot = dense_tab[static_cast<std::size_t>(to_i64(acc) + shift)];
                    if (slot == kNone) slot = code;
                } else {
                    map_tab.emplace(acc, code);  // keeps first (minimal) insert
                }
                if (acc == 0 && !zero && zero_key_nonzero == kNone) zero_key_nonzero = code;
                return;
            }
            for (std::int64_t i = 0; i < cnt; ++i) {
                idx[static_cast<std::size_t>(j)] = i;
                self(self, j + 1, acc + eq.a[static_cast<std::size_t>(h + j)] * powers[static_cast<std::size_t>(i)]);
            }
            idx[static_cast<std::size_t>(j)] = 0;
        };
        rec(rec, 0, BigInt(0));
    }

    auto lookup = [&](const BigInt& key) -> std::uint64_t {
        if (dense) {
            if (key < -shift || key > shift) return kNone;
            return dense_tab[static_cast<std::size_t>(to_i64(key) + shift)];
        }
        auto it = map_tab.find(key);
        return it == map_tab.end() ? kNone : it->second;
    };

    std::optional<std::vector<std::int64_t>> found;
    std::vector<std::int64_t> front(static_cast<std::size_t>(h), 0);
    std::vector<BigInt> powers(static_cast<std::size_t>(cnt));
    for (std::int64_t i = 0; i < cnt; ++i)
        powers[static_cast<std::size_t>(i)] = bpow(enum_value(i), static_cast<unsigned>(eq.k));
    auto rec = [&](auto&& self, int j, const BigInt& acc) -> bool {
        if (j == h) {
            std::uint64_t code = lookup(-acc);
            if (code == kNone) return false;
            bool front_zero = std::all_of(front.begin(), front.end(), [](std::int64_t v) { return v == 0; });
            if (front_zero && code == 0) {
                if (zero_key_nonzero == kNone || acc != 0) return false;
                code = zero_key_nonzero;
            }
            std::vector<std::int64_t> x(front.begin(), front.end());
            std::vector<std::int64_t> back(static_cast<std::size_t>(m));
            for (int t = m - 1; t >= 0; --t) {
                back[static_cast<std::size_t>(t)] = enum_value(static_cast<std::int64_t>(code % static_cast<std::uint64_t>(cnt)));
                code /= static_cast<std::uint64_t>(cnt);
            }
            x.insert(x.end(), back.begin(), back.end());
            found = std::move(x);
            return true;
        }
        for (std::int64_t i = 0; i < cnt; ++i) {
            front[static_cast<std::size_t>(j)] = enum_value(i);
            if (self(self, j + 1, acc + eq.a[static_cast<std::size_t>(j)] * powers[static_cast<std::size_t>(i)])) return true;
        }
        front[static_cast<std::size_t>(j)] = 0;
        return false;
    };
    rec(rec, 0, BigInt(0));
    return found;
}

}  // namespace

std::optional<SolutionRecord> smallest_solution(const DiagonalEquation& eq, std::int64_t B_max,
                                                const Budget& budget) {
    if (B_max < 1) throw PreconditionFailed("smallest_solution requires B_max >= 1");
    // Output-sensitive shell search: the first nonempty ball |x| <= B with
    // the previous ball empty consists of norm-B solutions only.
    for (std::int64_t B = 1; B <= B_max; ++B) {
        auto w = shell_witness(eq, B, budget);
        if (w) {
            std::int64_t norm = 0;
            for (auto v : *w) norm = std::max<std::int64_t>(norm, std::llabs(v));
            return SolutionRecord{std::move(*w), norm};
        }
    }
    return std::nullopt;
}

namespace {

// Enumerate coefficient vectors a in ([-A,A] \ {0})^s; f returns false to stop.
template <typename F>
void for_each_coeff(int s, std::int64_t A, F&& f) {
    std::vector<std::int64_t> a(static_cast<std::size_t>(s), 1);
    auto rec = [&](auto&& self, int j) -> bool {
        if (j == s) return f(a);
        for (std::int64_t v = -A; v <= A; ++v) {
            if (v == 0) continue;
            a[static_cast<std::size_t>(j)] = v;
            if (!self(self, j + 1)) return false;
        }
        return true;
    };
    rec(rec, 0);
}

bool has_nontrivial_solution(const DiagonalEquation& eq, std::int64_t B, const Budget& budget) {
    return shell_witness(eq, B, budget).has_value();
}

}  // namespace

BigInt xi(std::int64_t A, std::int64_t B, int k, int s, const Budget& budget) {
    if (A < 1 || B < 1) throw PreconditionFailed("xi requires A >= 1 and B >= 1");
    BigInt vectors = bpow(BigInt(2 * A), static_cast<unsigned>(s));
    charge_big(budget, vectors * bpow(BigInt(2 * B + 1), static_cast<unsigned>((s + 1) / 2)), "xi");
    Budget inner = budget;
    inner.ops = std::numeric_limits<std::int64_t>::max();  // charged in aggregate above
    BigInt count = 0;
    for_each_coeff(s, A, [&](const std::vector<std::int64_t>& a) {
        DiagonalEquation eq = validate(k, s, a);
        if (has_nontrivial_solution(eq, B, inner)) ++count;
        return true;
    });
    return count;
}

bool exchange_identity_check(std::int64_t A, std::int64_t B, int k, int s, const Budget& budget) {
    if (A < 1 || B < 1) throw PreconditionFailed("exchange identity requires A, B >= 1");
    BigInt cost = bpow(BigInt(2 * A), static_cast<unsigned>(s)) * bpow(BigInt(2 * B + 1), static_cast<unsigned>(s));
    charge_big(budget, 2 * cost, "exchange_identity_check");
    Budget inner = budget;
    inner.ops = std::numeric_limits<std::int64_t>::max();

    // Left side: sum over coefficient vectors of (rho_a(B) - 1).
    BigInt lhs = 0;
    for_each_coeff(s, A, [&](const std::vector<std::int64_t>& a) {
        DiagonalEquation eq = validate(k, s, a);
        lhs += rho(eq, B, RhoMethod::brute, inner) - 1;
        return true;
    });

    // Right side: sum over nonzero |x| <= B of the number of coefficient
    // vectors annihilating x, computed by direct enumeration.
    BigInt rhs = 0;
    for_each_tuple(s, B, [&](const std::vector<std::int64_t>& x) {
        bool zero = std::all_of(x.begin(), x.end(), [](std::int64_t v) { return v == 0; });
        if (zero) return true;
        std::vector<BigInt> pk(static_cast<std::size_t>(s));
        for (int j = 0; j < s; ++j) pk[static_cast<std::size_t>(j)] = bpow(x[static_cast<std::size_t>(j)], static_cast<unsigned>(k));
        for_each_coeff(s, A, [&](const std::vector<std::int64_t>& a) {
            BigInt acc = 0;
            for (int j = 0; j < s; ++j) acc += a[static_cast<std::size_t>(j)] * pk[static_cast<std::size_t>(j)];
            if (acc == 0) ++rhs;
            return true;
        });
        return true;
    });
    return lhs == rhs;
}

HyperplaneCount hyperplane_count(const std::vector<std::int64_t>& c, std::int64_t X,
                                 const Budget& budget) {
    const int s = static_cast<int>(c.size());
    if (s < 2) throw PreconditionFailed("hyperplane_count requires s >= 2");
    if (X < 1) throw PreconditionFailed("hyperplane_count requires X >= 1");
    BigInt g = 0;
    for (auto v : c) mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), BigInt(v).get_mpz_t());
    if (g != 1) throw PreconditionFailed("hyperplane vector is not primitive (gcd = " + g.get_str() + ")");
    charge_big(budget, box_size(X, s - 1), "hyperplane_count");

    // Pivot on the first coordinate: iterate the rest, solve c_0 x_0 = -T.
    BigInt count = 0;
    std::vector<std::int64_t> tail(c.begin() + 1, c.end());
    for_each_tuple(s - 1, X, [&](const std::vector<std::int64_t>& y) {
        std::int64_t T = 0;
        for (int j = 0; j < s - 1; ++j) T += tail[static_cast<std::size_t>(j)] * y[static_cast<std::size_t>(j)];
        if (T % c[0] == 0) {
            std::int64_t x0 = -T / c[0];
            if (std::llabs(x0) <= X) ++count;
        }
        return true;
    });

    std::int64_t height = 0;
    for (auto v : c) height = std::max<std::int64_t>(height, std::llabs(v));
    double denom = std::pow(2.0 * static_cast<double>(X) + 1.0, s - 1);
    double ratio = count.get_d() * static_cast<double>(height) / denom;
    return HyperplaneCount{count, ratio};
}

BigInt congruent_power_pairs(std::int64_t B, std::int64_t d, int k, const Budget& budget) {
    if (B < 0 || d < 1) throw PreconditionFailed("congruent_power_pairs requires B >= 0, d >= 1");
    if (d == 1) return bpow(BigInt(2 * B + 1), 2);
    budget.charge(std::min(d, 2 * B + 1), "congruent_power_pairs");

    // Histogram of x^k mod d over x in [-B, B]; answer is sum of squares.
    std::map<std::int64_t, BigInt> hist;
    if (2 * B + 1 <= d) {
        for (std::int64_t x = -B; x <= B; ++x) {
            std::int64_t r = pow_mod(((x % d) + d) % d, static_cast<std::uint64_t>(k), d);
            ++hist[r];
        }
    } else {
        // Count the members of each residue class inside [-B, B] exactly.
        for (std::int64_t c0 = 0; c0 < d; ++c0) {
            BigInt members = (B - c0) / d + (B + c0) / d + 1;
            std::int64_t r = pow_mod(c0, static_cast<std::uint64_t>(k), d);
            hist[r] += members;
        }
    }
    BigInt total = 0;
    for (const auto& [r, n] : hist) total += n * n;
    return total;
}

BigInt count_Vt_Ut(std::int64_t A, std::int64_t B, int t, int k, VtUtVariant variant,
                   const Budget& budget) {
    if (A < 1 || B < 0 || t < 1) throw PreconditionFailed("count_Vt_Ut requires A >= 1, B >= 0, t >= 1");

    // Histogram of a (x^k - y^k) over one index; identical for every j.
    BigInt span_big = BigInt(A) * 2 * bpow(BigInt(B), static_cast<unsigned>(k));
    if (!fits_i64(span_big)) throw BudgetExceeded("count_Vt_Ut: value range too large");
    const std::int64_t span = to_i64(span_big);
    charge_big(budget, (BigInt(2) * span * t + 1) * (2 * span + 1) + BigInt(2 * A) * (2 * B + 1) * (2 * B + 1),
               "count_Vt_Ut");

    std::map<std::int64_t, BigInt> kern;
    for (std::int64_t x = -B; x <= B; ++x) {
        for (std::int64_t y = -B; y <= B; ++y) {
            BigInt diff = bpow(x, static_cast<unsigned>(k)) - bpow(y, static_cast<unsigned>(k));
            if (variant == VtUtVariant::V && diff == 0) continue;
            for (std::int64_t a = -A; a <= A; ++a) {
                if (a == 0) continue;
                ++kern[to_i64(BigInt(a * 1) * diff)];
            }
        }
    }

    // t-fold convolution evaluated at 0, dense over the reachable range.
    const std::int64_t R = span * t;
    std::vector<BigInt> cur(static_cast<std::size_t>(2 * R + 1), BigInt(0)), next;
    for (const auto& [v, m] : kern) cur[static_cast<std::size_t>(v + R)] = m;
    for (int j = 1; j < t; ++j) {
        next.assign(static_cast<std::size_t>(2 * R + 1), BigInt(0));
        for (const auto& [v, m] : kern) {
            for (std::int64_t r = -R; r <= R; ++r) {
                const auto& c0 = cur[static_cast<std::size_t>(r + R)];
                if (c0 == 0) continue;
                std::int64_t u = r + v;
                if (u < -R || u > R) continue;
                next[static_cast<std::size_t>(u + R)] += c0 * m;
            }
        }
        cur.swap(next);
    }
    return cur[static_cast<std::size_t>(R)];
}

BigInt kernel_census(std::int64_t X, int nu, const Budget& budget) {
    if (X < 1 || nu < 1) throw PreconditionFailed("kernel_census requires X >= 1, nu >= 1");
    BigInt N_big = bpow(BigInt(X), static_cast<unsigned>(nu));
    if (!fits_i64(N_big)) throw BudgetExceeded("kernel_census: X^nu too large");
    const std::int64_t N = to_i64(N_big);

    // Enumerate exactly the integers n <= N with squarefree kernel <= X by
    // extending squarefree prime supports; cost is proportional to the count.
    const auto& primes = primes_up_to(X);
    std::int64_t steps = 0;
    BigInt count = 0;
    auto rec = [&](auto&& self, std::size_t i, std::int64_t kernel, std::int64_t n) -> void {
        ++count;
        if (++steps > budget.ops) throw BudgetExceeded("kernel_census: enumeration exceeds op budget");
        for (std::size_t j = i; j < primes.size(); ++j) {
            std::int64_t p = primes[j];
            if (kernel > X / p) break;
            if (n > N / p) break;
            std::int64_t m = n * p;
            while (true) {
                self(self, j + 1, kernel * p, m);
                if (m > N / p) break;
                m *= p;
            }
        }
    };
    rec(rec, 0, 1, 1);
    return count;
}

}  // namespace dioph
