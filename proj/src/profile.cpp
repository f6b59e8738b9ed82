#include "dioph/profile.hpp"

#include "dioph/factor.hpp"

namespace dioph {

PrimeProfile prime_profile(const DiagonalEquation& eq, const BigInt& threshold) {
    PrimeProfile prof;
    prof.good_prime_threshold = threshold;

    // l(p) and divisor multiplicity over all primes dividing some a_j.
    std::map<BigInt, int> divides_count;
    for (const auto& c : eq.a) {
        for (const auto& [p, e] : factorize(c)) {
            auto& l = prof.valuations[p];
            l = std::max(l, e);
            ++divides_count[p];
        }
    }
    for (const auto& [p, cnt] : divides_count)
        if (cnt >= 2) prof.bad_primes.insert(p);

    for (const auto& [p, e] : factorize(BigInt(eq.k))) prof.nu[p] = e;

    // Profiled set: S(a), plus all primes up to the threshold when given.
    std::set<BigInt> profiled = prof.bad_primes;
    if (threshold > 0) {
        for (std::int64_t p : primes_up_to(to_i64(threshold))) {
            if (p > threshold) break;
            profiled.insert(BigInt(p));
        }
    }
    for (const auto& p : profiled) {
        prof.p_product *= p;
        prof.p_dagger *= bpow(p, static_cast<unsigned>(prof.l(p)));
    }
    return prof;
}

}  // namespace dioph
