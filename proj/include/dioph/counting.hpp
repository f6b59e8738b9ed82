#pragma once

#include <optional>
#include <vector>

#include "dioph/eq.hpp"

namespace dioph {

enum class RhoMethod { brute, mitm, convolution };

// Number of integer tuples with |x_j| <= B solving the equation, the origin
// included. All three methods return identical exact values.
BigInt rho(const DiagonalEquation& eq, std::int64_t B, RhoMethod method = RhoMethod::mitm,
           const Budget& budget = {});

// A nontrivial solution together with its sup-norm.
struct SolutionRecord {
    std::vector<std::int64_t> x;
    std::int64_t norm = 0;
};

// Minimal-norm nontrivial solution with norm <= B_max, if any. Ties are
// broken by the coordinate enumeration order 0, 1, -1, 2, -2, ... taken
// lexicographically, so e.g. (1,1) wins against (-1,-1).
std::optional<SolutionRecord> smallest_solution(const DiagonalEquation& eq, std::int64_t B_max,
                                                const Budget& budget = {});

// Number of coefficient vectors |a| <= A (all entries nonzero) such that the
// equation has a solution with 0 < |x| <= B.
BigInt xi(std::int64_t A, std::int64_t B, int k, int s, const Budget& budget = {});

// Verifies sum_{|a|<=A} (rho_a(B) - 1) = sum_{0<|x|<=B} #{a : sum a_j x_j^k = 0}
// by computing both sides independently.
bool exchange_identity_check(std::int64_t A, std::int64_t B, int k, int s,
                             const Budget& budget = {});

struct HyperplaneCount {
    BigInt count;
    double lemma_ratio;  // count * |c| / (2X+1)^(s-1)
};

// Lattice points |x| <= X on the hyperplane c.x = 0; c must be primitive.
HyperplaneCount hyperplane_count(const std::vector<std::int64_t>& c, std::int64_t X,
                                 const Budget& budget = {});

// Pairs |x|,|y| <= B with x^k = y^k (mod d).
BigInt congruent_power_pairs(std::int64_t B, std::int64_t d, int k, const Budget& budget = {});

enum class VtUtVariant { V, U };

// Solutions of sum_{j<=t} a_j (x_j^k - y_j^k) = 0 with 0 < |a_j| <= A and
// |x_j|, |y_j| <= B; the V variant additionally requires x_j^k != y_j^k.
BigInt count_Vt_Ut(std::int64_t A, std::int64_t B, int t, int k, VtUtVariant variant,
                   const Budget& budget = {});

// Integers n <= X^nu whose squarefree kernel is at most X.
BigInt kernel_census(std::int64_t X, int nu, const Budget& budget = {});

}  // namespace dioph
