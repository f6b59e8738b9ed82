#include "dioph/harness.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numeric>
#include <sstream>

#include "dioph/counting.hpp"
#include "dioph/factor.hpp"
#include "dioph/padic.hpp"
#include "dioph/profile.hpp"
#include "dioph/realdensity.hpp"

namespace dioph {

namespace {

struct SplitMix {
    std::uint64_t state;
    std::uint64_t next() {
        std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }
    std::int64_t below(std::int64_t n) {
        return static_cast<std::int64_t>(next() % static_cast<std::uint64_t>(n));
    }
};

std::string fmt12(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.12g", v);
    return buf;
}

std::string coeff_str(const std::vector<std::int64_t>& a) {
    std::string out;
    for (std::size_t j = 0; j < a.size(); ++j) {
        if (j) out += ';';
        out += std::to_string(a[j]);
    }
    return out;
}

const char* kCsvHeader =
    "a,height,real_soluble,locally_soluble,culprit_prime,sseries,sseries_radius,"
    "sintegral,sintegral_radius,B,found,min_norm,rho,predicted,deviation,P,P_dagger,"
    "flagged,note";

std::string record_row(const SampleRecord& r) {
    std::ostringstream os;
    os << coeff_str(r.a) << ',' << r.height << ',' << (r.real_soluble ? 1 : 0) << ','
       << (r.locally_soluble ? 1 : 0) << ','
       << (r.culprit_prime ? std::to_string(*r.culprit_prime) : std::string()) << ','
       << fmt12(r.sseries) << ',' << fmt12(r.sseries_radius) << ',' << fmt12(r.sintegral) << ','
       << fmt12(r.sintegral_radius) << ',' << r.B << ',' << (r.found ? 1 : 0) << ','
       << (r.min_norm ? std::to_string(*r.min_norm) : std::string()) << ',' << r.rho_count.get_str()
       << ',' << fmt12(r.predicted) << ',' << fmt12(r.deviation) << ',' << r.P_a.get_str() << ','
       << r.P_dagger.get_str() << ',' << (r.flagged ? 1 : 0) << ',' << r.note;
    return os.str();
}

std::string csv_of(const std::vector<SampleRecord>& records, const std::string& config_line) {
    std::ostringstream os;
    os << "# dioph experiment csv v1\n";
    os << "# timestamp: (unset)\n";  // replaced by the CLI; excluded from determinism
    os << "# config: " << config_line << "\n";
    os << kCsvHeader << "\n";
    for (const auto& r : records) os << record_row(r) << "\n";
    return os.str();
}

std::string config_line(const ExperimentConfig& c, const std::string& experiment) {
    std::ostringstream os;
    os << "experiment=" << experiment << " k=" << c.k << " s=" << c.s << " A=[" << c.A_min << ','
       << c.A_max << "] samples=" << c.samples << " seed=" << c.seed;
    switch (c.b_rule) {
        case BRule::explicit_B: os << " B=" << c.B_explicit; break;
        case BRule::theorem13: os << " B=theorem13"; break;
        case BRule::theorem14: os << " B=theorem14(c=" << fmt12(c.c14) << ")"; break;
    }
    return os.str();
}

// floor(h^(2/m)) for the theorem13 rule, exact: largest B with B^m <= h^2.
std::int64_t floor_root_pow(const BigInt& h, unsigned num_pow, unsigned m) {
    BigInt target = bpow(h, num_pow);
    BigInt root;
    mpz_root(root.get_mpz_t(), target.get_mpz_t(), m);
    return to_i64(root);
}

std::int64_t b_of_rule(const ExperimentConfig& config, const BigInt& height) {
    switch (config.b_rule) {
        case BRule::explicit_B:
            return config.B_explicit;
        case BRule::theorem13: {
            const int m = hat_s(config.s) - 2 * config.k;
            if (m <= 0) throw PreconditionFailed("theorem13 B-rule requires hat_s > 2k");
            return floor_root_pow(height, 2, static_cast<unsigned>(m));
        }
        case BRule::theorem14: {
            if (config.s <= config.k) throw PreconditionFailed("theorem14 B-rule requires s > k");
            const double bound =
                config.c14 * std::pow(height.get_d(), 1.0 / static_cast<double>(config.s - config.k));
            return static_cast<std::int64_t>(std::floor(bound + 1e-12));
        }
    }
    std::abort();
}

void evaluate_local_global(const ExperimentConfig& config, const DiagonalEquation& eq,
                           SampleRecord& rec) {
    rec.real_soluble = real_soluble(eq);
    SolubilityReport rep = locally_soluble(eq, config.budget);
    rec.locally_soluble = rep.locally_soluble;
    rec.culprit_prime = rep.culprit_prime;

    SingularSeriesResult ss = singular_series(eq, SeriesMode::euler_product, config.budget);
    rec.sseries = ss.value.value;
    rec.sseries_radius = ss.value.radius;
    RealDensityResult j = singular_integral(eq, JMethod::quadrature, config.seed, config.budget);
    rec.sintegral = j.j_value.value;
    rec.sintegral_radius = j.j_value.radius;
}

void evaluate_counts(const ExperimentConfig& config, const DiagonalEquation& eq,
                     SampleRecord& rec) {
    rec.rho_count = rho(eq, rec.B, RhoMethod::mitm, config.budget);
    auto sol = smallest_solution(eq, rec.B, config.budget);
    rec.found = sol.has_value();
    if (sol) rec.min_norm = sol->norm;
    const double bsk = std::pow(static_cast<double>(rec.B), config.s - config.k);
    rec.predicted = rec.locally_soluble ? rec.sintegral * rec.sseries * bsk : 0.0;
    rec.deviation = std::fabs(rec.rho_count.get_d() - rec.predicted);
}

SampleRecord base_record(const ExperimentConfig& config, std::int64_t index,
                         const std::int64_t p0_for_profile) {
    SampleRecord rec;
    rec.a = sample_coefficients(config, index);
    rec.height = 0;
    for (auto v : rec.a) rec.height = std::max<std::int64_t>(rec.height, std::llabs(v));
    DiagonalEquation eq = validate(config.k, config.s, rec.a);
    PrimeProfile prof = prime_profile(eq, BigInt(p0_for_profile));
    rec.P_a = prof.p_product;
    rec.P_dagger = prof.p_dagger;
    return rec;
}

}  // namespace

std::vector<std::int64_t> sample_coefficients(const ExperimentConfig& config, std::int64_t index) {
    if (config.A_min < 1 || config.A_max < config.A_min)
        throw PreconditionFailed("sample_coefficients requires 1 <= A_min <= A_max");
    // substream keyed by (seed, index): order independent of scheduling
    SplitMix rng{config.seed ^ (0xbf58476d1ce4e5b9ULL * static_cast<std::uint64_t>(index + 1))};
    std::vector<std::int64_t> a(static_cast<std::size_t>(config.s));
    while (true) {
        std::int64_t height = 0;
        for (int j = 0; j < config.s; ++j) {
            std::int64_t v = rng.below(2 * config.A_max) - config.A_max;  // [-A_max, A_max-1]
            if (v >= 0) ++v;                                              // skip zero
            a[static_cast<std::size_t>(j)] = v;
            height = std::max<std::int64_t>(height, std::llabs(v));
        }
        if (height >= config.A_min) return a;
    }
}

DiagonalEquation family_1_10(std::int64_t a, std::int64_t b, int t, int k,
                             double* norm_lower_bound) {
    if (a < 1 || b < 1 || a > b) throw PreconditionFailed("family_1_10 requires 1 <= a <= b");
    if (std::gcd(a, b) != 1) throw PreconditionFailed("family_1_10 requires gcd(a, b) = 1");
    if (k % 2 != 0) throw PreconditionFailed("family_1_10 requires even k");
    if (t < 1) throw PreconditionFailed("family_1_10 requires t >= 1");
    const int s = 2 * t;
    std::vector<std::int64_t> coeffs(static_cast<std::size_t>(s));
    for (int j = 0; j < t; ++j) coeffs[static_cast<std::size_t>(j)] = a;
    for (int j = t; j < s; ++j) coeffs[static_cast<std::size_t>(j)] = -b;
    if (norm_lower_bound)
        *norm_lower_bound = std::pow(static_cast<double>(b) / static_cast<double>(s),
                                     1.0 / static_cast<double>(k));
    return validate(k, s, coeffs);
}

ExperimentResult run_hasse_experiment(const ExperimentConfig& config) {
    if (config.b_rule == BRule::theorem13 && hat_s(config.s) <= 2 * config.k)
        throw PreconditionFailed("hasse experiment: theorem13 rule requires hat_s > 2k");
    const std::int64_t p0 = good_prime_threshold(config.k, config.s);

    ExperimentResult out;
    std::int64_t n_local = 0, n_local_found = 0, n_found = 0;
    for (std::int64_t i = 0; i < config.samples; ++i) {
        SampleRecord rec = base_record(config, i, p0);
        try {
            DiagonalEquation eq = validate(config.k, config.s, rec.a);
            rec.B = b_of_rule(config, eq.height());
            evaluate_local_global(config, eq, rec);
            if (rec.B >= 1) evaluate_counts(config, eq, rec);
        } catch (const BudgetExceeded& e) {
            rec.flagged = true;
            rec.note = e.what();
        }
        if (!rec.flagged) {
            if (rec.locally_soluble) {
                ++n_local;
                if (rec.found) ++n_local_found;
            }
            if (rec.found) ++n_found;
        } else {
            ++out.budget_failures;
        }
        out.records.push_back(std::move(rec));
    }
    const std::int64_t n_ok = config.samples - out.budget_failures;
    out.key_fraction = n_local ? static_cast<double>(n_local_found) / static_cast<double>(n_local) : 0.0;
    std::ostringstream js;
    js << "{\"experiment\":\"hasse\",\"samples\":" << config.samples
       << ",\"budget_failures\":" << out.budget_failures << ",\"locally_soluble\":" << n_local
       << ",\"with_solution\":" << n_found << ",\"success_fraction_locally_soluble\":"
       << fmt12(out.key_fraction) << ",\"success_fraction_all\":"
       << fmt12(n_ok ? static_cast<double>(n_found) / static_cast<double>(n_ok) : 0.0) << "}";
    out.summary_json = js.str();
    out.csv = csv_of(out.records, config_line(config, "hasse"));
    return out;
}

ExperimentResult run_smallest_solution_census(const ExperimentConfig& config,
                                              const std::vector<double>& c_grid) {
    if (config.s <= config.k) throw PreconditionFailed("census requires s > k");
    const std::int64_t p0 =
        config.s >= config.k + 2 ? good_prime_threshold(config.k, config.s) : 0;

    ExperimentResult out;
    std::vector<std::int64_t> hits(c_grid.size(), 0);
    std::int64_t n_ok = 0;
    for (std::int64_t i = 0; i < config.samples; ++i) {
        SampleRecord rec = base_record(config, i, p0);
        try {
            DiagonalEquation eq = validate(config.k, config.s, rec.a);
            const double root = std::pow(static_cast<double>(rec.height),
                                         1.0 / static_cast<double>(config.s - config.k));
            std::int64_t b_max = 0;
            for (double c : c_grid)
                b_max = std::max(b_max, static_cast<std::int64_t>(std::floor(c * root + 1e-12)));
            rec.B = b_max;
            if (b_max >= 1) {
                auto sol = smallest_solution(eq, b_max, config.budget);
                rec.found = sol.has_value();
                if (sol) rec.min_norm = sol->norm;
            }
            ++n_ok;
            for (std::size_t ci = 0; ci < c_grid.size(); ++ci) {
                const std::int64_t bound =
                    static_cast<std::int64_t>(std::floor(c_grid[ci] * root + 1e-12));
                if (rec.min_norm && *rec.min_norm <= bound) ++hits[ci];
            }
        } catch (const BudgetExceeded& e) {
            rec.flagged = true;
            rec.note = e.what();
            ++out.budget_failures;
        }
        out.records.push_back(std::move(rec));
    }
    std::ostringstream js;
    js << "{\"experiment\":\"smallest\",\"samples\":" << config.samples
       << ",\"budget_failures\":" << out.budget_failures << ",\"fractions\":[";
    for (std::size_t ci = 0; ci < c_grid.size(); ++ci) {
        if (ci) js << ',';
        js << "{\"c\":" << fmt12(c_grid[ci]) << ",\"fraction\":"
           << fmt12(n_ok ? static_cast<double>(hits[ci]) / static_cast<double>(n_ok) : 0.0) << "}";
    }
    js << "]}";
    out.summary_json = js.str();
    out.key_fraction = c_grid.empty() || !n_ok
                           ? 0.0
                           : static_cast<double>(hits.back()) / static_cast<double>(n_ok);
    out.csv = csv_of(out.records, config_line(config, "smallest"));
    return out;
}

ExperimentResult run_singular_series_census(const ExperimentConfig& config) {
    if (config.s < config.k + 2) throw PreconditionFailed("sseries census requires s >= k+2");
    const std::int64_t p0 = good_prime_threshold(config.k, config.s);
    const double threshold = std::pow(static_cast<double>(config.A_max), -config.eta);
    const double a_delta = std::pow(static_cast<double>(config.A_max), config.delta);
    const double a_2delta = a_delta * a_delta;

    ExperimentResult out;
    std::int64_t zero = 0, small = 0, big = 0, indeterminate = 0;
    std::int64_t strat_a1 = 0, strat_a2 = 0;
    for (std::int64_t i = 0; i < config.samples; ++i) {
        SampleRecord rec = base_record(config, i, p0);
        try {
            DiagonalEquation eq = validate(config.k, config.s, rec.a);
            rec.real_soluble = real_soluble(eq);
            SolubilityReport rep = locally_soluble(eq, config.budget);
            rec.locally_soluble = rep.locally_soluble;
            rec.culprit_prime = rep.culprit_prime;
            SingularSeriesResult ss = singular_series(eq, SeriesMode::euler_product, config.budget);
            rec.sseries = ss.value.value;
            rec.sseries_radius = ss.value.radius;
            const double lo = ss.value.lo(), hi = ss.value.hi();
            if (hi <= 0.0)
                ++zero;
            else if (lo >= threshold)
                ++big;
            else if (lo > 0.0 && hi < threshold)
                ++small;
            else if (ss.value.certified && ss.value.value == 0.0)
                ++zero;
            else
                ++indeterminate;
            if (rec.P_a.get_d() > a_delta) ++strat_a1;
            else if (rec.P_dagger.get_d() > a_2delta) ++strat_a2;
        } catch (const BudgetExceeded& e) {
            rec.flagged = true;
            rec.note = e.what();
            ++out.budget_failures;
        }
        out.records.push_back(std::move(rec));
    }
    std::ostringstream js;
    js << "{\"experiment\":\"sseries\",\"samples\":" << config.samples
       << ",\"budget_failures\":" << out.budget_failures << ",\"eta\":" << fmt12(config.eta)
       << ",\"threshold\":" << fmt12(threshold) << ",\"zero\":" << zero << ",\"small\":" << small
       << ",\"large\":" << big << ",\"indeterminate\":" << indeterminate
       << ",\"stratum_P\":" << strat_a1 << ",\"stratum_Pdagger\":" << strat_a2 << "}";
    out.summary_json = js.str();
    const std::int64_t n_ok = config.samples - out.budget_failures;
    out.key_fraction = n_ok ? static_cast<double>(big) / static_cast<double>(n_ok) : 0.0;
    out.csv = csv_of(out.records, config_line(config, "sseries"));
    return out;
}

ExperimentResult run_meanvalue_experiment(const ExperimentConfig& config) {
    if (config.b_rule != BRule::explicit_B)
        throw PreconditionFailed("meanvalue experiment requires an explicit B");
    const std::int64_t B = config.B_explicit;
    // condition (1.6): 1 <= 2 B^k <= A and A <= B^((hat_s - 2k)/2), exactly:
    // A_max^2 <= B^(hat_s - 2k).
    const int m2 = hat_s(config.s) - 2 * config.k;
    if (B < 1 || m2 <= 0 || 2 * bpow(BigInt(B), static_cast<unsigned>(config.k)) > BigInt(config.A_min) ||
        BigInt(config.A_max) * config.A_max > bpow(BigInt(B), static_cast<unsigned>(m2)))
        throw PreconditionFailed("meanvalue experiment: (A, B) violates condition (1.6)");
    const std::int64_t p0 = good_prime_threshold(config.k, config.s);

    ExperimentResult out;
    std::vector<double> normalized;
    for (std::int64_t i = 0; i < config.samples; ++i) {
        SampleRecord rec = base_record(config, i, p0);
        rec.B = B;
        try {
            DiagonalEquation eq = validate(config.k, config.s, rec.a);
            evaluate_local_global(config, eq, rec);
            evaluate_counts(config, eq, rec);
            normalized.push_back(rec.deviation * static_cast<double>(rec.height) /
                                 std::pow(static_cast<double>(B), config.s - config.k));
        } catch (const BudgetExceeded& e) {
            rec.flagged = true;
            rec.note = e.what();
            ++out.budget_failures;
        }
        out.records.push_back(std::move(rec));
    }
    std::sort(normalized.begin(), normalized.end());
    auto quantile = [&](double q) {
        if (normalized.empty()) return 0.0;
        const double pos = q * static_cast<double>(normalized.size() - 1);
        const std::size_t i0 = static_cast<std::size_t>(pos);
        const std::size_t i1 = std::min(i0 + 1, normalized.size() - 1);
        const double frac = pos - static_cast<double>(i0);
        return normalized[i0] * (1.0 - frac) + normalized[i1] * frac;
    };
    std::ostringstream js;
    js << "{\"experiment\":\"meanvalue\",\"samples\":" << config.samples
       << ",\"budget_failures\":" << out.budget_failures << ",\"B\":" << B
       << ",\"normalized_deviation_quantiles\":{\"q50\":" << fmt12(quantile(0.5))
       << ",\"q90\":" << fmt12(quantile(0.9)) << ",\"q99\":" << fmt12(quantile(0.99))
       << ",\"max\":" << fmt12(normalized.empty() ? 0.0 : normalized.back()) << "}}";
    out.summary_json = js.str();
    out.key_fraction = quantile(0.5);
    out.csv = csv_of(out.records, config_line(config, "meanvalue"));
    return out;
}

}  // namespace dioph
