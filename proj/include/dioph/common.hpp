#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <stdexcept>
#include <string>

namespace dioph {

// Exact integer type for coefficients and counts. Counting identities are
// exact, so everything that can grow past 2^53 lives in a BigInt.
using BigInt = mpz_class;

// ---------------------------------------------------------------------------
// Error taxonomy. Every named rejection in an operation contract maps to one
// of these so callers (and the CLI) can report the precise failure.
// ---------------------------------------------------------------------------
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct DegreeTooSmall : Error {
    explicit DegreeTooSmall(int k)
        : Error("degree k=" + std::to_string(k) + " too small (k >= 3 required)") {}
};

struct TooFewVariables : Error {
    explicit TooFewVariables(int s)
        : Error("variable count s=" + std::to_string(s) + " too small") {}
};

struct ZeroCoefficient : Error {
    explicit ZeroCoefficient(int j)
        : Error("coefficient a[" + std::to_string(j) + "] is zero") {}
};

struct BudgetExceeded : Error {
    using Error::Error;
};

struct PreconditionFailed : Error {
    using Error::Error;
};

// Resource budgets. `ops` caps elementary operations per call, `modulus_cap`
// caps the modulus p^l (resp. convolution length) of histogram methods.
struct Budget {
    std::int64_t ops = 100'000'000;
    std::int64_t modulus_cap = 1'000'000;

    void charge(std::int64_t cost, const char* what) const {
        if (cost > ops)
            throw BudgetExceeded(std::string(what) + ": estimated cost " +
                                 std::to_string(cost) + " exceeds op budget " +
                                 std::to_string(ops));
    }
};

// ---------------------------------------------------------------------------
// Small machine-word arithmetic helpers.
// ---------------------------------------------------------------------------

inline std::int64_t mul_mod(std::int64_t a, std::int64_t b, std::int64_t m) {
    return static_cast<std::int64_t>(static_cast<__int128>(a) * b % m);
}

inline std::int64_t pow_mod(std::int64_t base, std::uint64_t exp, std::int64_t m) {
    base %= m;
    if (base < 0) base += m;
    std::int64_t r = 1 % m;
    while (exp) {
        if (exp & 1) r = mul_mod(r, base, m);
        base = mul_mod(base, base, m);
        exp >>= 1;
    }
    return r;
}

// x^k for small exponents, exact.
inline BigInt bpow(const BigInt& x, unsigned k) {
    BigInt r;
    mpz_pow_ui(r.get_mpz_t(), x.get_mpz_t(), k);
    return r;
}

inline BigInt bpow(std::int64_t x, unsigned k) { return bpow(BigInt(x), k); }

inline bool fits_i64(const BigInt& x) { return x.fits_slong_p(); }

inline std::int64_t to_i64(const BigInt& x) {
    if (!x.fits_slong_p()) throw Error("value does not fit in 64 bits: " + x.get_str());
    return mpz_get_si(x.get_mpz_t());
}

}  // namespace dioph
