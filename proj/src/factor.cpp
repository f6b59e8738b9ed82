#include "dioph/factor.hpp"

#include <algorithm>
#include <mutex>

namespace dioph {

namespace {

constexpr std::int64_t kTrialLimit = 1'000'000;

// Deterministic Miller-Rabin for 64-bit inputs; mpz_probab_prime_p beyond.
const std::int64_t kMrBases[] = {2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37};

}  // namespace

bool is_prime_i64(std::int64_t n) {
    if (n < 2) return false;
    for (std::int64_t p : {2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37})
        if (n % p == 0) return n == p;
    std::int64_t d = n - 1;
    int r = 0;
    while (d % 2 == 0) d /= 2, ++r;
    for (std::int64_t b : kMrBases) {
        std::int64_t x = pow_mod(b, static_cast<std::uint64_t>(d), n);
        if (x == 1 || x == n - 1) continue;
        bool composite = true;
        for (int i = 1; i < r; ++i) {
            x = mul_mod(x, x, n);
            if (x == n - 1) {
                composite = false;
                break;
            }
        }
        if (composite) return false;
    }
    return true;
}

bool is_prime(const BigInt& n) {
    if (n.fits_slong_p()) return is_prime_i64(mpz_get_si(n.get_mpz_t()));
    return mpz_probab_prime_p(n.get_mpz_t(), 40) > 0;
}

const std::vector<std::int64_t>& primes_up_to(std::int64_t n) {
    static std::vector<std::int64_t> primes;
    static std::int64_t sieved_to = 0;
    static std::mutex mu;
    std::lock_guard<std::mutex> lock(mu);
    if (n > sieved_to) {
        std::int64_t limit = std::max<std::int64_t>(n, 1000);
        std::vector<bool> comp(static_cast<std::size_t>(limit) + 1, false);
        primes.clear();
        for (std::int64_t i = 2; i <= limit; ++i) {
            if (!comp[static_cast<std::size_t>(i)]) {
                primes.push_back(i);
                for (std::int64_t j = i * i; j <= limit; j += i) comp[static_cast<std::size_t>(j)] = true;
            }
        }
        sieved_to = limit;
    }
    return primes;
}

namespace {

// Brent's cycle variant of Pollard rho; n odd composite, no small factors.
BigInt pollard_rho(const BigInt& n) {
    if (n % 2 == 0) return 2;
    gmp_randclass rng(gmp_randinit_default);
    rng.seed(0x9e3779b97f4a7c15UL);
    while (true) {
        BigInt y = rng.get_z_range(n - 3) + 2;
        BigInt c = rng.get_z_range(n - 2) + 1;
        BigInt x = y, ys = y, d = 1, q = 1;
        const unsigned m = 128;
        unsigned r = 1;
        while (d == 1) {
            x = y;
            for (unsigned i = 0; i < r; ++i) y = (y * y + c) % n;
            for (unsigned j = 0; j < r && d == 1; j += m) {
                ys = y;
                for (unsigned i = 0; i < std::min(m, r - j); ++i) {
                    y = (y * y + c) % n;
                    q = q * abs(x - y) % n;
                }
                mpz_gcd(d.get_mpz_t(), q.get_mpz_t(), n.get_mpz_t());
            }
            r *= 2;
        }
        if (d == n) {
            // backtrack
            do {
                ys = (ys * ys + c) % n;
                BigInt diff = abs(x - ys);
                mpz_gcd(d.get_mpz_t(), diff.get_mpz_t(), n.get_mpz_t());
            } while (d == 1);
        }
        if (d != n) return d;
    }
}

void factor_into(BigInt n, std::map<BigInt, int>& out) {
    if (n <= 1) return;
    if (is_prime(n)) {
        ++out[n];
        return;
    }
    BigInt d = pollard_rho(n);
    factor_into(d, out);
    factor_into(n / d, out);
}

}  // namespace

std::map<BigInt, int> factorize(const BigInt& n, int max_digits) {
    BigInt m = abs(n);
    if (m == 0) throw PreconditionFailed("factorize(0) is undefined");
    if (mpz_sizeinbase(m.get_mpz_t(), 10) > static_cast<std::size_t>(max_digits))
        throw BudgetExceeded("factorization input exceeds " + std::to_string(max_digits) +
                             " digit budget");
    std::map<BigInt, int> out;
    for (std::int64_t p : primes_up_to(kTrialLimit)) {
        if (m == 1) return out;
        if (BigInt(p) * p > m) break;
        while (mpz_divisible_ui_p(m.get_mpz_t(), static_cast<unsigned long>(p))) {
            m /= static_cast<unsigned long>(p);
            ++out[BigInt(p)];
        }
    }
    if (m > 1) factor_into(m, out);
    return out;
}

int valuation(const BigInt& n, const BigInt& p) {
    if (n == 0) throw PreconditionFailed("valuation of 0 is infinite");
    BigInt m = abs(n);
    int v = 0;
    while (mpz_divisible_p(m.get_mpz_t(), p.get_mpz_t())) {
        m /= p;
        ++v;
    }
    return v;
}

BigInt squarefree_kernel(const BigInt& n) {
    BigInt k = 1;
    for (const auto& [p, e] : factorize(n)) k *= p;
    return k;
}

}  // namespace dioph
