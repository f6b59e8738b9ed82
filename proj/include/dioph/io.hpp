#pragma once

#include <string>

#include "dioph/eq.hpp"
#include "dioph/harness.hpp"
#include "json.hpp"

namespace dioph {

// Shared wire schema: {"k":..., "s":..., "a":[...]}.
inline DiagonalEquation eq_from_json(const nlohmann::json& j) {
    if (!j.contains("k") || !j.contains("s") || !j.contains("a"))
        throw PreconditionFailed("equation JSON needs fields k, s, a");
    std::vector<BigInt> a;
    for (const auto& v : j.at("a")) {
        if (v.is_string())
            a.emplace_back(v.get<std::string>());
        else
            a.emplace_back(v.get<std::int64_t>());
    }
    return validate(j.at("k").get<int>(), j.at("s").get<int>(), std::move(a));
}

inline nlohmann::json eq_to_json(const DiagonalEquation& eq) {
    nlohmann::json a = nlohmann::json::array();
    for (const auto& c : eq.a) {
        if (c.fits_slong_p())
            a.push_back(static_cast<std::int64_t>(mpz_get_si(c.get_mpz_t())));
        else
            a.push_back(c.get_str());
    }
    return nlohmann::json{{"k", eq.k}, {"s", eq.s}, {"a", a}};
}

inline nlohmann::json certified_to_json(const CertifiedValue& v) {
    return nlohmann::json{{"value", v.value}, {"radius", v.radius}, {"certified", v.certified}};
}

inline ExperimentConfig config_from_json(const nlohmann::json& j) {
    ExperimentConfig c;
    c.k = j.value("k", c.k);
    c.s = j.value("s", c.s);
    c.A_min = j.value("A_min", c.A_min);
    c.A_max = j.value("A_max", c.A_max);
    c.samples = j.value("samples", c.samples);
    c.seed = j.value("seed", c.seed);
    c.eta = j.value("eta", c.eta);
    c.delta = j.value("delta", c.delta);
    c.output = j.value("output", c.output);
    if (j.contains("B_rule")) {
        const std::string rule = j.at("B_rule").get<std::string>();
        if (rule == "explicit")
            c.b_rule = BRule::explicit_B;
        else if (rule == "theorem13")
            c.b_rule = BRule::theorem13;
        else if (rule == "theorem14")
            c.b_rule = BRule::theorem14;
        else
            throw PreconditionFailed("unknown B_rule: " + rule);
    }
    c.B_explicit = j.value("B", c.B_explicit);
    c.c14 = j.value("c", c.c14);
    if (j.contains("budget_ops")) c.budget.ops = j.at("budget_ops").get<std::int64_t>();
    if (j.contains("modulus_cap")) c.budget.modulus_cap = j.at("modulus_cap").get<std::int64_t>();
    return c;
}

}  // namespace dioph
