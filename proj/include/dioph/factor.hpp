#pragma once

#include <cstdint>
#include <map>
#include <vector>

#include "dioph/common.hpp"

namespace dioph {

// Exact factorization: trial division by primes up to 10^6, then Pollard's
// rho (Brent variant) on what remains. Inputs above `max_digits` decimal
// digits are rejected rather than silently truncated.
std::map<BigInt, int> factorize(const BigInt& n, int max_digits = 64);

bool is_prime(const BigInt& n);
bool is_prime_i64(std::int64_t n);

// All primes <= n, by sieve.
const std::vector<std::int64_t>& primes_up_to(std::int64_t n);

// Largest e with p^e | n (n != 0).
int valuation(const BigInt& n, const BigInt& p);

// Product of the distinct primes dividing n (n >= 1).
BigInt squarefree_kernel(const BigInt& n);

}  // namespace dioph
