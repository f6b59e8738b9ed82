// Command-line front end: exact counting, local densities, singular series
// and integral, arc decompositions, and the seeded experiment harness.
// Inputs and outputs are single-line JSON records unless noted.

#include <chrono>
#include <fstream>
#include <iostream>

#include "CLI11.hpp"
#include "dioph/circle.hpp"
#include "dioph/counting.hpp"
#include "dioph/harness.hpp"
#include "dioph/io.hpp"
#include "dioph/padic.hpp"
#include "dioph/profile.hpp"
#include "dioph/realdensity.hpp"
#include "json.hpp"

using nlohmann::json;

namespace {

dioph::DiagonalEquation parse_eq(const std::string& text) {
    return dioph::eq_from_json(json::parse(text));
}

std::string now_string() {
    const auto t = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    char buf[64];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", std::gmtime(&t));
    return buf;
}

void write_experiment_output(const dioph::ExperimentResult& result, const std::string& path) {
    std::string csv = result.csv;
    const std::string placeholder = "# timestamp: (unset)";
    auto pos = csv.find(placeholder);
    if (pos != std::string::npos) csv.replace(pos, placeholder.size(), "# timestamp: " + now_string());
    if (path.empty()) {
        std::cout << csv;
        std::cerr << result.summary_json << "\n";
        return;
    }
    std::ofstream out(path);
    if (!out) throw dioph::Error("cannot open output file " + path);
    out << csv;
    std::ofstream summary(path + ".summary.json");
    summary << result.summary_json << "\n";
    std::cout << result.summary_json << "\n";
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"diagonal diophantine equation toolkit"};
    app.require_subcommand(1);

    std::string eq_text, method = "mitm", config_path, mode = "euler", output;
    std::int64_t B = 1, Bmax = 10, A = 1, Q = 10'000, grid = 0, pflag = 0;
    std::int64_t budget_ops = dioph::Budget{}.ops;
    std::int64_t modulus_cap = dioph::Budget{}.modulus_cap;
    std::uint64_t seed = 1;
    int k = 3, s = 3, t = 1;
    double eta = 1.0 / 6.0;
    std::int64_t fam_a = 1, fam_b = 1;

    app.add_option("--budget", budget_ops, "elementary-operation budget per call");
    app.add_option("--modulus-cap", modulus_cap, "largest histogram modulus");

    auto* count_cmd = app.add_subcommand("count", "exact rho_a(B)");
    count_cmd->add_option("--eq", eq_text, "equation JSON")->required();
    count_cmd->add_option("--B", B, "box radius")->required();
    count_cmd->add_option("--method", method, "brute|mitm|convolution");

    auto* smallest_cmd = app.add_subcommand("smallest", "minimal nontrivial solution");
    smallest_cmd->add_option("--eq", eq_text)->required();
    smallest_cmd->add_option("--Bmax", Bmax)->required();

    auto* xi_cmd = app.add_subcommand("xi", "coefficient vectors with small solutions");
    xi_cmd->add_option("--k", k)->required();
    xi_cmd->add_option("--s", s)->required();
    xi_cmd->add_option("--A", A)->required();
    xi_cmd->add_option("--B", B)->required();

    auto* sint_cmd = app.add_subcommand("sintegral", "singular integral J_a");
    sint_cmd->add_option("--eq", eq_text)->required();
    sint_cmd->add_option("--method", method, "quadrature|volume");
    sint_cmd->add_option("--seed", seed);

    auto* local_cmd = app.add_subcommand("local", "local solubility / chi_p");
    local_cmd->add_option("--eq", eq_text)->required();
    local_cmd->add_option("--p", pflag, "single prime (0 = full report)");

    auto* sser_cmd = app.add_subcommand("sseries", "singular series");
    sser_cmd->add_option("--eq", eq_text)->required();
    sser_cmd->add_option("--mode", mode, "euler|qseries");
    sser_cmd->add_option("--Q", Q, "series cutoff for qseries");

    auto* arcs_cmd = app.add_subcommand("arcs", "major/minor arc decomposition");
    arcs_cmd->add_option("--eq", eq_text)->required();
    arcs_cmd->add_option("--A", A)->required();
    arcs_cmd->add_option("--B", B)->required();
    arcs_cmd->add_option("--eta", eta, "arc exponent (Q = B^eta)");
    arcs_cmd->add_option("--grid", grid, "grid size (0 = smallest exact grid)");

    auto* exp_cmd = app.add_subcommand("experiment", "seeded experiment harness");
    std::string exp_kind;
    exp_cmd->add_option("kind", exp_kind, "hasse|smallest|sseries|meanvalue")->required();
    exp_cmd->add_option("--config", config_path, "config JSON path")->required();
    exp_cmd->add_option("--output", output, "override output CSV path");

    auto* fam_cmd = app.add_subcommand("family", "the a,b adversarial family");
    fam_cmd->add_option("--a", fam_a)->required();
    fam_cmd->add_option("--b", fam_b)->required();
    fam_cmd->add_option("--t", t)->required();
    fam_cmd->add_option("--k", k)->required();

    CLI11_PARSE(app, argc, argv);
    dioph::Budget budget{budget_ops, modulus_cap};

    try {
        if (count_cmd->parsed()) {
            auto eq = parse_eq(eq_text);
            dioph::RhoMethod m = method == "brute"         ? dioph::RhoMethod::brute
                                 : method == "convolution" ? dioph::RhoMethod::convolution
                                                           : dioph::RhoMethod::mitm;
            auto n = dioph::rho(eq, B, m, budget);
            std::cout << json{{"rho", n.get_str()}, {"B", B}, {"method", method}} << "\n";
        } else if (smallest_cmd->parsed()) {
            auto eq = parse_eq(eq_text);
            auto sol = dioph::smallest_solution(eq, Bmax, budget);
            json out{{"found", sol.has_value()}};
            if (sol) {
                out["norm"] = sol->norm;
                out["x"] = sol->x;
            }
            std::cout << out << "\n";
        } else if (xi_cmd->parsed()) {
            std::cout << json{{"xi", dioph::xi(A, B, k, s, budget).get_str()}} << "\n";
        } else if (sint_cmd->parsed()) {
            auto eq = parse_eq(eq_text);
            auto r = dioph::singular_integral(
                eq, method == "volume" ? dioph::JMethod::volume_oracle : dioph::JMethod::quadrature,
                seed, budget);
            json out = dioph::certified_to_json(r.j_value);
            out["method"] = method == "volume" ? "volume" : "quadrature";
            out["truncation"] = r.truncation;
            out["panels"] = r.panels;
            std::cout << out << "\n";
        } else if (local_cmd->parsed()) {
            auto eq = parse_eq(eq_text);
            if (pflag > 0) {
                auto v = dioph::qp_soluble(eq, pflag, budget);
                json out{{"p", pflag}, {"soluble", v.soluble}, {"certified", v.certified}, {"h", v.h}};
                if (v.witness) {
                    out["witness"] = v.witness->y;
                    out["modulus"] = v.witness->modulus;
                }
                if (eq.s >= eq.k + 2) {
                    auto f = dioph::chi_p(eq, pflag, budget);
                    out["chi"] = dioph::certified_to_json(f.chi);
                    out["chi_method"] = f.method == dioph::LocalMethod::closed_form ? "closed_form" : "iterative";
                    out["depth"] = f.depth;
                    out["positive"] = f.positive;
                }
                std::cout << out << "\n";
            } else {
                auto rep = dioph::locally_soluble(eq, budget);
                json primes = json::array();
                for (const auto& pv : rep.primes) {
                    json e{{"p", pv.p}, {"soluble", pv.soluble}, {"flagged", pv.flagged}};
                    if (pv.witness) {
                        e["witness"] = pv.witness->y;
                        e["modulus"] = pv.witness->modulus;
                    }
                    primes.push_back(e);
                }
                json out{{"real_soluble", rep.real_soluble},
                         {"locally_soluble", rep.locally_soluble},
                         {"heuristic", rep.heuristic},
                         {"primes", primes}};
                if (rep.culprit_prime) out["culprit"] = *rep.culprit_prime;
                std::cout << out << "\n";
            }
        } else if (sser_cmd->parsed()) {
            auto eq = parse_eq(eq_text);
            auto r = dioph::singular_series(
                eq, mode == "qseries" ? dioph::SeriesMode::q_series : dioph::SeriesMode::euler_product,
                budget, Q);
            json factors = json::array();
            for (const auto& f : r.factors) {
                factors.push_back(json{{"p", f.p},
                                       {"chi", dioph::certified_to_json(f.chi)},
                                       {"depth", f.depth},
                                       {"method", f.method == dioph::LocalMethod::closed_form
                                                      ? "closed_form"
                                                      : "iterative"},
                                       {"positive", f.positive}});
            }
            json out = dioph::certified_to_json(r.value);
            out["mode"] = mode == "qseries" ? "qseries" : "euler";
            out["tail_bound"] = r.tail_bound;
            out["factors"] = factors;
            std::cout << out << "\n";
        } else if (arcs_cmd->parsed()) {
            auto eq = parse_eq(eq_text);
            const double Qv = std::pow(static_cast<double>(B), eta);
            dioph::BigInt min_grid = 2 * eq.s * dioph::bpow(dioph::BigInt(B), static_cast<unsigned>(eq.k)) * eq.height() + 1;
            std::int64_t g = grid > 0 ? grid : dioph::to_i64(min_grid);
            auto r = dioph::rho_via_arcs(eq, A, B, Qv, g, budget);
            std::cout << json{{"major", r.major_part},
                              {"minor", r.minor_part},
                              {"rho", r.exact_count.get_str()},
                              {"reconstruction_error", r.reconstruction_error},
                              {"grid", g},
                              {"Q", Qv}}
                      << "\n";
        } else if (exp_cmd->parsed()) {
            std::ifstream in(config_path);
            if (!in) throw dioph::Error("cannot open config " + config_path);
            json cfg_json = json::parse(in);
            dioph::ExperimentConfig cfg = dioph::config_from_json(cfg_json);
            if (!output.empty()) cfg.output = output;
            dioph::ExperimentResult result;
            if (exp_kind == "hasse")
                result = dioph::run_hasse_experiment(cfg);
            else if (exp_kind == "smallest") {
                std::vector<double> c_grid = {0.25, 0.5, 1.0, 2.0};
                if (cfg_json.contains("c_grid")) c_grid = cfg_json.at("c_grid").get<std::vector<double>>();
                result = dioph::run_smallest_solution_census(cfg, c_grid);
            } else if (exp_kind == "sseries")
                result = dioph::run_singular_series_census(cfg);
            else if (exp_kind == "meanvalue")
                result = dioph::run_meanvalue_experiment(cfg);
            else
                throw dioph::PreconditionFailed("unknown experiment kind " + exp_kind);
            write_experiment_output(result, cfg.output);
            if (result.budget_failures * 10 > cfg.samples) return 3;
        } else if (fam_cmd->parsed()) {
            double bound = 0.0;
            auto eq = dioph::family_1_10(fam_a, fam_b, t, k, &bound);
            json out = dioph::eq_to_json(eq);
            out["norm_lower_bound"] = bound;
            std::cout << out << "\n";
        }
    } catch (const dioph::PreconditionFailed& e) {
        std::cerr << "rejected: " << e.what() << "\n";
        return 2;
    } catch (const dioph::BudgetExceeded& e) {
        std::cerr << "budget: " << e.what() << "\n";
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
