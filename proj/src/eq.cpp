#include "dioph/eq.hpp"

namespace dioph {

DiagonalEquation validate(int k, int s, std::vector<BigInt> a) {
    if (k < 3) throw DegreeTooSmall(k);
    if (s < 2) throw TooFewVariables(s);
    if (static_cast<int>(a.size()) != s)
        throw PreconditionFailed("coefficient vector has " + std::to_string(a.size()) +
                                 " entries, expected s=" + std::to_string(s));
    for (int j = 0; j < s; ++j)
        if (a[j] == 0) throw ZeroCoefficient(j);
    return DiagonalEquation{k, s, std::move(a)};
}

DiagonalEquation validate(int k, int s, const std::vector<std::int64_t>& a) {
    std::vector<BigInt> big;
    big.reserve(a.size());
    for (auto v : a) big.emplace_back(v);
    return validate(k, s, std::move(big));
}

int hat_s(int s) {
    if (s < 3) throw PreconditionFailed("hat_s requires s >= 3, got " + std::to_string(s));
    return (s % 2 == 0) ? s - 2 : s - 1;
}

}  // namespace dioph
