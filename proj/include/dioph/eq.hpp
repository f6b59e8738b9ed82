#pragma once

#include <vector>

#include "dioph/common.hpp"

namespace dioph {

// The diagonal equation a_1 x_1^k + ... + a_s x_s^k = 0 with k >= 3 and all
// coefficients nonzero. Instances are immutable after validation.
struct DiagonalEquation {
    int k = 0;
    int s = 0;
    std::vector<BigInt> a;

    BigInt height() const {
        BigInt h = 0;
        for (const auto& c : a) {
            BigInt v = abs(c);
            if (v > h) h = v;
        }
        return h;
    }

    BigInt coeff_product() const {
        BigInt p = 1;
        for (const auto& c : a) p *= c;
        return p;
    }

    BigInt abs_coeff_sum() const {
        BigInt t = 0;
        for (const auto& c : a) t += abs(c);
        return t;
    }

    bool all_same_sign() const {
        bool pos = false, neg = false;
        for (const auto& c : a) (c > 0 ? pos : neg) = true;
        return !(pos && neg);
    }

    // a_1 x_1^k + ... + a_s x_s^k, exact.
    BigInt evaluate(const std::vector<std::int64_t>& x) const {
        BigInt acc = 0;
        for (int j = 0; j < s; ++j) acc += a[j] * bpow(x[j], static_cast<unsigned>(k));
        return acc;
    }
};

// Rejects with DegreeTooSmall, TooFewVariables or ZeroCoefficient.
DiagonalEquation validate(int k, int s, std::vector<BigInt> a);

DiagonalEquation validate(int k, int s, const std::vector<std::int64_t>& a);

// Largest even integer strictly smaller than s. Requires s >= 3.
int hat_s(int s);

// A real value together with an error radius. The contract is that the true
// quantity lies in [value - radius, value + radius]; `certified` records
// whether the radius rests on a proven bound or on a heuristic estimate.
struct CertifiedValue {
    double value = 0.0;
    double radius = 0.0;
    bool certified = false;

    double lo() const { return value - radius; }
    double hi() const { return value + radius; }
    bool overlaps(const CertifiedValue& o) const { return lo() <= o.hi() && o.lo() <= hi(); }
};

}  // namespace dioph
