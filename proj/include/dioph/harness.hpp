#pragma once

#include <optional>
#include <string>
#include <vector>

#include "dioph/eq.hpp"

namespace dioph {

enum class BRule { explicit_B, theorem13, theorem14 };

struct ExperimentConfig {
    int k = 3;
    int s = 5;
    std::int64_t A_min = 1;
    std::int64_t A_max = 10;
    BRule b_rule = BRule::explicit_B;
    std::int64_t B_explicit = 1;
    double c14 = 1.0;  // constant c of the theorem14 rule
    std::int64_t samples = 10;
    std::uint64_t seed = 1;
    double eta = 0.5;    // series threshold exponent (sseries census)
    double delta = 0.1;  // P(a) stratifier exponent
    std::string output;  // CSV path; empty = in-memory only
    Budget budget;
};

struct SampleRecord {
    std::vector<std::int64_t> a;
    std::int64_t height = 0;
    bool real_soluble = false;
    bool locally_soluble = false;
    std::optional<std::int64_t> culprit_prime;
    double sseries = 0.0, sseries_radius = 0.0;
    double sintegral = 0.0, sintegral_radius = 0.0;
    std::int64_t B = 0;  // search bound
    bool found = false;
    std::optional<std::int64_t> min_norm;
    BigInt rho_count;
    double predicted = 0.0;  // J * S * B^(s-k)
    double deviation = 0.0;  // |rho - predicted|
    BigInt P_a, P_dagger;
    bool flagged = false;  // budget failure; excluded from statistics
    std::string note;
};

struct ExperimentResult {
    std::vector<SampleRecord> records;
    std::string csv;
    std::string summary_json;
    double key_fraction = 0.0;  // headline statistic of the experiment
    std::int64_t budget_failures = 0;
};

// Deterministic coefficient sampler: uniform over the height shell
// {a : A_min <= max|a_j| <= A_max, a_j != 0} by rejection; the stream is a
// pure function of (seed, index).
std::vector<std::int64_t> sample_coefficients(const ExperimentConfig& config, std::int64_t index);

// Theorem 1.3 analogue: search bound B = floor(|a|^(2/(hat_s - 2k))).
ExperimentResult run_hasse_experiment(const ExperimentConfig& config);

// Theorem 1.4 analogue: fraction with a solution below c |a|^(1/(s-k)) per c.
ExperimentResult run_smallest_solution_census(const ExperimentConfig& config,
                                              const std::vector<double>& c_grid);

// Theorem 1.2 analogue: census of singular-series values against A^(-eta),
// stratified by the P(a), P-dagger(a) classifiers.
ExperimentResult run_singular_series_census(const ExperimentConfig& config);

// Theorem 1.1 analogue: deviation |rho - J S B^(s-k)| under condition (1.6).
ExperimentResult run_meanvalue_experiment(const ExperimentConfig& config);

// The adversarial family a(x_1^k+...+x_t^k) - b(x_{t+1}^k+...+x_{2t}^k); the
// optional out-parameter receives the norm lower bound (b/s)^(1/k).
DiagonalEquation family_1_10(std::int64_t a, std::int64_t b, int t, int k,
                             double* norm_lower_bound = nullptr);

}  // namespace dioph
