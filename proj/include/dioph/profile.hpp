#pragma once

#include <map>
#include <set>

#include "dioph/eq.hpp"

namespace dioph {

// Per-equation prime bookkeeping: the set of primes dividing at least two
// coefficients, the maximal coefficient valuations l(p), the valuations
// nu(p) of the degree (p^nu || k), and the products P, P-dagger over the
// profiled primes. The profiled set is the bad-prime set, augmented by every
// prime up to `good_prime_threshold` when a positive threshold is supplied
// (the threshold itself is chosen by the local-density code, not here).
struct PrimeProfile {
    std::set<BigInt> bad_primes;       // primes dividing at least two a_j
    std::map<BigInt, int> valuations;  // l(p) for every prime dividing some a_j
    std::map<BigInt, int> nu;          // nu(p) for primes dividing k
    BigInt p_product = 1;              // P = prod of profiled primes
    BigInt p_dagger = 1;               // P-dagger = prod of p^l(p), profiled p
    BigInt good_prime_threshold = 0;   // 0 = profile over bad primes only

    int l(const BigInt& p) const {
        auto it = valuations.find(p);
        return it == valuations.end() ? 0 : it->second;
    }
    int nu_of(const BigInt& p) const {
        auto it = nu.find(p);
        return it == nu.end() ? 0 : it->second;
    }
};

// Deterministic, factorization-based. `threshold` > 0 additionally profiles
// all primes up to it, as in the P(a), P-dagger(a) classifiers.
PrimeProfile prime_profile(const DiagonalEquation& eq, const BigInt& threshold = 0);

}  // namespace dioph
