// exrenew: exchangeable renewal processes from the command line.
//
// Subcommands: simulate, fit, renewal, solve, mc-study, dp.  All outputs are
// deterministic given (config, seed): identical bytes across runs and thread
// counts.  Exit codes: 0 success, 2 usage error, 3 data error, 4 numerical
// failure.

#include <CLI11.hpp>
#include <json.hpp>

#include <cmath>
#include <cstdint>
#include <fstream>
#include <iostream>
#include <string>
#include <variant>
#include <vector>

#include "exrenew/dirichlet.hpp"
#include "exrenew/errors.hpp"
#include "exrenew/inference.hpp"
#include "exrenew/io.hpp"
#include "exrenew/mc.hpp"
#include "exrenew/model.hpp"
#include "exrenew/renewal.hpp"
#include "exrenew/volterra.hpp"

namespace {

using exrenew::ModelSpec;

struct ModelFlags {
    std::string model;
    int m = 0;
    double alpha = 0.0;
    double lambda = 0.0;
    double k = 0.0;
    std::string base = "exp";
    double base_shape = 0.0;
    int base_erlang_shape = 1;
    double base_scale = 0.0;
};

void add_model_flags(CLI::App* sub, ModelFlags& mf) {
    sub->add_option("--model", mf.model, "Model: erlang-gamma | exp-uniform | gamma2-pareto | dp")
        ->required()
        ->check(CLI::IsMember({"erlang-gamma", "exp-uniform", "gamma2-pareto", "dp"}));
    sub->add_option("--m", mf.m, "Erlang shape m (erlang-gamma)");
    sub->add_option("--alpha", mf.alpha, "Mixing shape/concentration alpha");
    sub->add_option("--lambda", mf.lambda, "Rate parameter (exp-uniform mean rate, dp base rate)");
    sub->add_option("--k", mf.k, "Pareto scale k (gamma2-pareto)");
    sub->add_option("--base", mf.base, "dp base measure: exp | erlang | lomax")
        ->check(CLI::IsMember({"exp", "erlang", "lomax"}));
    sub->add_option("--base-shape", mf.base_shape, "dp base shape (lomax)");
    sub->add_option("--base-erlang-shape", mf.base_erlang_shape, "dp base shape (erlang)");
    sub->add_option("--base-scale", mf.base_scale, "dp base scale (lomax)");
}

ModelSpec build_model(const ModelFlags& mf) {
    if (mf.model == "erlang-gamma") {
        if (mf.m < 1 || !(mf.alpha > 0.0))
            throw std::invalid_argument("erlang-gamma requires --m >= 1 and --alpha > 0");
        return exrenew::ErlangGammaModel{mf.m, mf.alpha};
    }
    if (mf.model == "exp-uniform") {
        if (!(mf.lambda > 0.0)) throw std::invalid_argument("exp-uniform requires --lambda > 0");
        return exrenew::ExpUniformModel{mf.lambda};
    }
    if (mf.model == "gamma2-pareto") {
        if (!(mf.k > 0.0) || !(mf.alpha > 0.0))
            throw std::invalid_argument("gamma2-pareto requires --k > 0 and --alpha > 0");
        return exrenew::Gamma2ParetoModel{mf.k, mf.alpha};
    }
    // dp
    if (!(mf.alpha > 0.0)) throw std::invalid_argument("dp requires --alpha > 0");
    exrenew::BaseDistribution base;
    if (mf.base == "exp") {
        if (!(mf.lambda > 0.0)) throw std::invalid_argument("dp exp base requires --lambda > 0");
        base = exrenew::ErlangParams{1, mf.lambda};
    } else if (mf.base == "erlang") {
        if (mf.base_erlang_shape < 1 || !(mf.lambda > 0.0))
            throw std::invalid_argument("dp erlang base requires --base-erlang-shape >= 1 and --lambda > 0");
        base = exrenew::ErlangParams{mf.base_erlang_shape, mf.lambda};
    } else {
        if (!(mf.base_scale > 0.0) || !(mf.base_shape > 0.0))
            throw std::invalid_argument("dp lomax base requires --base-scale > 0 and --base-shape > 0");
        base = exrenew::LomaxParams{mf.base_scale, mf.base_shape};
    }
    ModelSpec spec = exrenew::DirichletProcessModel{mf.alpha, base};
    exrenew::validate(spec);
    return spec;
}

struct GridFlags {
    double start = 0.0;
    double stop = 0.0;
    double step = 0.0;
};

void add_grid_flags(CLI::App* sub, GridFlags& gf, bool required) {
    auto* stop = sub->add_option("--grid-stop", gf.stop, "Grid end (inclusive)");
    auto* step = sub->add_option("--grid-step", gf.step, "Grid spacing (> 0)");
    sub->add_option("--grid-start", gf.start, "Grid origin (default 0)");
    if (required) {
        stop->required();
        step->required();
    }
}

std::vector<double> build_grid(const GridFlags& gf) {
    if (!(gf.step > 0.0)) throw std::invalid_argument("--grid-step must be > 0");
    if (gf.stop < gf.start) throw std::invalid_argument("--grid-stop must be >= --grid-start");
    std::vector<double> grid;
    const long count = static_cast<long>(std::floor((gf.stop - gf.start) / gf.step + 1e-9)) + 1;
    grid.reserve(static_cast<std::size_t>(count));
    for (long i = 0; i < count; ++i) grid.push_back(gf.start + static_cast<double>(i) * gf.step);
    exrenew::validate_grid(grid);
    return grid;
}

void add_seed_flag(CLI::App* sub, std::uint64_t& seed) {
    sub->add_option("--seed", seed, "RNG seed (env EXRENEW_SEED supplies the default)")
        ->envname("EXRENEW_SEED");
}

std::string partition_label(const exrenew::PartitionVector& part) {
    // Parts in descending order joined by '+': "3+1+1".
    std::string out;
    for (std::size_t j = part.v.size(); j-- > 0;)
        for (int c = 0; c < part.v[j]; ++c) {
            if (!out.empty()) out += '+';
            out += std::to_string(j + 1);
        }
    return out;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Exchangeable renewal processes: simulation, renewal curves, "
                 "renewal-equation solutions, and multi-sequence inference"};
    app.require_subcommand(1);
    app.set_config("--config", "", "Key-value config file; command-line flags win");

    // --- simulate ---------------------------------------------------------
    auto* sim = app.add_subcommand("simulate", "Draw exchangeable inter-arrival sequences to CSV");
    ModelFlags sim_model;
    std::vector<int> sim_lengths;
    std::uint64_t sim_seed = 1;
    std::uint64_t sim_replicate = 0;
    std::string sim_out;
    add_model_flags(sim, sim_model);
    sim->add_option("--lengths", sim_lengths, "Sequence lengths, comma separated")
        ->required()
        ->delimiter(',');
    add_seed_flag(sim, sim_seed);
    sim->add_option("--replicate", sim_replicate, "Replicate index folded into the stream key");
    sim->add_option("--out", sim_out, "Output CSV path")->required();

    // --- fit --------------------------------------------------------------
    auto* fit = app.add_subcommand("fit", "Profile MLE for ErlangGamma on a sequence CSV");
    std::string fit_input, fit_json, fit_curves;
    GridFlags fit_grid;
    exrenew::FitOptions fit_opts;
    fit->add_option("--input", fit_input, "Input sequence CSV (seq_id,time)")->required();
    fit->add_option("--out-json", fit_json, "Fit summary JSON path (stdout if omitted)");
    fit->add_option("--curves", fit_curves, "Fitted-curve CSV path (t,U_exch,U_iid,U_empirical)");
    add_grid_flags(fit, fit_grid, false);
    fit->add_option("--m-min", fit_opts.m_min, "Smallest Erlang shape in the profile");
    fit->add_option("--m-max", fit_opts.m_max, "Largest Erlang shape in the profile");
    fit->add_option("--tol", fit_opts.log_alpha_tol, "Brent tolerance on log(alpha)")
        ->check(CLI::PositiveNumber);

    // --- renewal ----------------------------------------------------------
    auto* ren = app.add_subcommand("renewal", "Evaluate the mixed renewal function on a grid");
    ModelFlags ren_model;
    GridFlags ren_grid;
    std::string ren_method, ren_out;
    long ren_replicates = 100000;
    std::uint64_t ren_seed = 1;
    double ren_tol = 1e-8;
    int ren_cap = exrenew::kDefaultPartitionCap;
    add_model_flags(ren, ren_model);
    add_grid_flags(ren, ren_grid, true);
    ren->add_option("--method", ren_method, "closed | series | mc")
        ->required()
        ->check(CLI::IsMember({"closed", "series", "mc"}));
    ren->add_option("--replicates", ren_replicates, "Monte Carlo replicates")
        ->check(CLI::PositiveNumber);
    add_seed_flag(ren, ren_seed);
    ren->add_option("--tol", ren_tol, "Series truncation tolerance")->check(CLI::PositiveNumber);
    ren->add_option("--cap", ren_cap, "Partition cap for the dp series")->check(CLI::PositiveNumber);
    ren->add_option("--out", ren_out, "Output CSV path")->required();

    // --- solve ------------------------------------------------------------
    auto* sol = app.add_subcommand("solve", "Solve the mixed renewal-type equation A = a + E[F*A]");
    GridFlags sol_grid;
    std::string sol_mixture, sol_out;
    double sol_beta = 0.0, sol_alpha = 0.0, sol_lambda = 0.0;
    std::vector<double> sol_weights, sol_rates;
    bool sol_comparator = true;
    sol->add_option("--beta", sol_beta, "Drift a(t) = 1 - exp(-beta t)")->required();
    sol->add_option("--mixture", sol_mixture, "Mixing law of the conditional rate: discrete | gamma")
        ->required()
        ->check(CLI::IsMember({"discrete", "gamma"}));
    sol->add_option("--weights", sol_weights, "Discrete mixture weights")->delimiter(',');
    sol->add_option("--rates", sol_rates, "Discrete mixture rates")->delimiter(',');
    sol->add_option("--alpha", sol_alpha, "Gamma mixing shape");
    sol->add_option("--lambda", sol_lambda, "Gamma mixing rate");
    add_grid_flags(sol, sol_grid, true);
    sol->add_flag("--comparator,!--no-comparator", sol_comparator,
                  "Also solve the classical i.i.d. equation with the marginal density");
    sol->add_option("--out", sol_out, "Output CSV path")->required();

    // --- mc-study ---------------------------------------------------------
    auto* study = app.add_subcommand("mc-study", "Simulate-fit-evaluate bands under an ErlangGamma truth");
    int study_m = 0;
    double study_alpha = 0.0;
    std::vector<int> study_lengths;
    GridFlags study_grid;
    exrenew::StudyOptions study_opts;
    std::string study_out;
    study->add_option("--m", study_m, "True Erlang shape")->required();
    study->add_option("--alpha", study_alpha, "True mixing shape")->required();
    study->add_option("--lengths", study_lengths, "Sequence lengths per replicate")
        ->required()
        ->delimiter(',');
    add_grid_flags(study, study_grid, true);
    study->add_option("--replicates", study_opts.replicates, "Study replicates")
        ->check(CLI::PositiveNumber);
    add_seed_flag(study, study_opts.seed);
    study->add_option("--m-min", study_opts.fit.m_min, "Profile lower bound");
    study->add_option("--m-max", study_opts.fit.m_max, "Profile upper bound");
    study->add_flag("--iid-profile-m", study_opts.iid_profile_m,
                    "Profile the comparator's shape independently of the exchangeable fit");
    study->add_option("--max-fail-fraction", study_opts.max_fail_fraction,
                      "Abort when more fits than this fraction fail");
    study->add_option("--out", study_out, "Output CSV path")->required();

    // --- dp ---------------------------------------------------------------
    auto* dp = app.add_subcommand("dp", "Dirichlet-process tables: Ewens weights, S_n CDF, U(t)");
    double dp_alpha = 0.0, dp_lambda = 1.0, dp_tol = 1e-6;
    int dp_n = 0, dp_cap = exrenew::kDefaultPartitionCap;
    std::string dp_mode, dp_out;
    GridFlags dp_grid;
    dp->add_option("--alpha", dp_alpha, "Concentration")->required()->check(CLI::PositiveNumber);
    dp->add_option("--lambda", dp_lambda, "Exponential base rate")->check(CLI::PositiveNumber);
    dp->add_option("--mode", dp_mode, "weights | cdf | u")
        ->required()
        ->check(CLI::IsMember({"weights", "cdf", "u"}));
    dp->add_option("--n", dp_n, "Number of inter-arrivals (weights, cdf)");
    dp->add_option("--tol", dp_tol, "Series truncation tolerance (u)")->check(CLI::PositiveNumber);
    dp->add_option("--cap", dp_cap, "Partition cap")->check(CLI::PositiveNumber);
    add_grid_flags(dp, dp_grid, false);
    dp->add_option("--out", dp_out, "Output CSV path")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        if (sim->parsed()) {
            const ModelSpec model = build_model(sim_model);
            const exrenew::SequenceSet data =
                exrenew::simulate_sequence_set(model, sim_lengths, sim_seed, sim_replicate);
            exrenew::write_sequence_csv(sim_out, data);
        } else if (fit->parsed()) {
            const exrenew::SequenceSet data = exrenew::read_sequence_csv(fit_input);
            const exrenew::FitResult result = exrenew::fit_mle(data, fit_opts);
            nlohmann::ordered_json j;
            j["m_hat"] = result.m_hat;
            j["alpha_hat"] = result.alpha_hat;
            j["corr_hat"] = result.corr_hat;
            j["loglik"] = result.loglik;
            j["profile"] = nlohmann::ordered_json::array();
            for (const auto& p : result.profile)
                j["profile"].push_back({{"m", p.m}, {"alpha", p.alpha}, {"loglik", p.loglik}});
            if (fit_json.empty()) {
                std::cout << j.dump(2) << "\n";
            } else {
                std::ofstream out(fit_json, std::ios::binary);
                if (!out) throw exrenew::DataError("cannot open '" + fit_json + "' for writing");
                out << j.dump(2) << "\n";
            }
            if (!fit_curves.empty()) {
                if (!(fit_grid.step > 0.0))
                    throw std::invalid_argument("--curves requires --grid-stop and --grid-step");
                const std::vector<double> grid = build_grid(fit_grid);
                std::vector<double> u_exch(grid.size()), u_iid(grid.size());
                for (std::size_t i = 0; i < grid.size(); ++i) {
                    u_exch[i] = exrenew::fitted_renewal_exchangeable(grid[i], result);
                    u_iid[i] = exrenew::fitted_renewal_iid(grid[i], data, result.m_hat);
                }
                const exrenew::RenewalCurve emp =
                    exrenew::empirical_renewal_curve(data.sequences, grid);
                exrenew::write_csv(fit_curves, {"t", "U_exch", "U_iid", "U_empirical"},
                                   {grid, u_exch, u_iid, emp.values});
            }
        } else if (ren->parsed()) {
            const ModelSpec model = build_model(ren_model);
            const std::vector<double> grid = build_grid(ren_grid);
            if (ren_method == "mc") {
                const exrenew::RenewalCurve curve =
                    exrenew::mc_renewal_function(model, grid, {ren_replicates, ren_seed});
                exrenew::write_csv(ren_out, {"t", "value", "stderr"},
                                   {curve.grid, curve.values, curve.stderrs});
            } else {
                std::vector<double> values(grid.size());
                for (std::size_t i = 0; i < grid.size(); ++i) {
                    const double t = grid[i];
                    if (ren_method == "closed") {
                        if (const auto* eg = std::get_if<exrenew::ErlangGammaModel>(&model))
                            values[i] = exrenew::erlang_gamma_mixed_renewal(t, eg->m, eg->alpha);
                        else if (const auto* eu = std::get_if<exrenew::ExpUniformModel>(&model))
                            values[i] = eu->lambda * t;
                        else
                            throw std::invalid_argument(
                                "method 'closed' supports erlang-gamma and exp-uniform only");
                    } else { // series
                        if (const auto* eg = std::get_if<exrenew::ErlangGammaModel>(&model)) {
                            values[i] = exrenew::series_mixed_renewal(t, eg->m, eg->alpha, ren_tol).value;
                        } else if (const auto* dpm = std::get_if<exrenew::DirichletProcessModel>(&model)) {
                            const auto* base = std::get_if<exrenew::ErlangParams>(&dpm->base);
                            if (!base || base->shape != 1)
                                throw std::invalid_argument(
                                    "method 'series' needs the dp exponential base");
                            values[i] = t == 0.0 ? 0.0
                                                 : exrenew::dp_renewal_function(t, dpm->alpha, base->rate,
                                                                                ren_tol, ren_cap)
                                                       .value;
                        } else {
                            throw std::invalid_argument(
                                "method 'series' supports erlang-gamma and dp only");
                        }
                    }
                }
                exrenew::write_csv(ren_out, {"t", "value"}, {grid, values});
            }
        } else if (sol->parsed()) {
            exrenew::MixtureOfExponentialsModel mix;
            if (sol_mixture == "discrete") {
                if (sol_weights.empty() || sol_rates.empty())
                    throw std::invalid_argument("discrete mixture requires --weights and --rates");
                mix = exrenew::DiscreteExpMixture{sol_weights, sol_rates};
            } else {
                if (!(sol_alpha > 0.0) || !(sol_lambda > 0.0))
                    throw std::invalid_argument("gamma mixture requires --alpha > 0 and --lambda > 0");
                mix = exrenew::GammaExpMixture{sol_alpha, sol_lambda};
            }
            exrenew::validate(mix);
            if (!(sol_beta > 0.0)) throw std::invalid_argument("--beta must be > 0");
            const std::vector<double> grid = build_grid(sol_grid);
            std::vector<double> a_col(grid.size());
            for (std::size_t i = 0; i < grid.size(); ++i)
                a_col[i] = sol_mixture == "discrete"
                               ? exrenew::solve_closed_discrete(
                                     grid[i], sol_beta, std::get<exrenew::DiscreteExpMixture>(mix))
                               : exrenew::solve_closed_continuous(grid[i], sol_alpha, sol_beta,
                                                                  sol_lambda);
            if (sol_comparator) {
                const exrenew::RenewalCurve iid = exrenew::solve_iid_comparator(
                    exrenew::ExpSaturatingDrift{sol_beta},
                    [&mix](double t) { return exrenew::mixture_marginal_pdf(mix, t); }, grid);
                exrenew::write_csv(sol_out, {"t", "A", "A_iid"}, {grid, a_col, iid.values});
            } else {
                exrenew::write_csv(sol_out, {"t", "A"}, {grid, a_col});
            }
        } else if (study->parsed()) {
            const exrenew::ErlangGammaModel truth{study_m, study_alpha};
            const std::vector<double> grid = build_grid(study_grid);
            const exrenew::StudyBands bands =
                exrenew::monte_carlo_study(truth, study_lengths, grid, study_opts);
            exrenew::write_csv(study_out,
                               {"t", "true_U", "exch_median", "exch_lo", "exch_hi", "iid_median",
                                "iid_lo", "iid_hi"},
                               {bands.grid, bands.true_values, bands.exch_median, bands.exch_lo,
                                bands.exch_hi, bands.iid_median, bands.iid_lo, bands.iid_hi});
        } else if (dp->parsed()) {
            if (dp_mode == "weights") {
                if (dp_n < 1) throw std::invalid_argument("--mode weights requires --n >= 1");
                const std::vector<exrenew::PartitionVector> parts =
                    exrenew::enumerate_partitions(dp_n, dp_cap);
                std::ofstream out(dp_out, std::ios::binary);
                if (!out) throw exrenew::DataError("cannot open '" + dp_out + "' for writing");
                out << "partition,weight\n";
                for (const auto& part : parts)
                    out << partition_label(part) << ','
                        << exrenew::format_double(exrenew::ewens_probability(part, dp_alpha)) << '\n';
                if (!out) throw exrenew::DataError("write to '" + dp_out + "' failed");
            } else if (dp_mode == "cdf") {
                if (dp_n < 1) throw std::invalid_argument("--mode cdf requires --n >= 1");
                if (!(dp_grid.step > 0.0))
                    throw std::invalid_argument("--mode cdf requires grid flags");
                const std::vector<double> grid = build_grid(dp_grid);
                std::vector<double> cdf(grid.size());
                for (std::size_t i = 0; i < grid.size(); ++i)
                    cdf[i] = exrenew::sn_cdf(grid[i], dp_n, dp_alpha, dp_lambda, dp_cap);
                exrenew::write_csv(dp_out, {"t", "cdf"}, {grid, cdf});
            } else { // u
                if (!(dp_grid.step > 0.0)) throw std::invalid_argument("--mode u requires grid flags");
                const std::vector<double> grid = build_grid(dp_grid);
                std::vector<double> value(grid.size()), error(grid.size()), terms(grid.size());
                for (std::size_t i = 0; i < grid.size(); ++i) {
                    const exrenew::DpSeriesResult r = grid[i] == 0.0
                        ? exrenew::DpSeriesResult{0.0, 0.0, 0}
                        : exrenew::dp_renewal_function(grid[i], dp_alpha, dp_lambda, dp_tol, dp_cap);
                    value[i] = r.value;
                    error[i] = r.error_estimate;
                    terms[i] = static_cast<double>(r.terms_used);
                }
                exrenew::write_csv(dp_out, {"t", "value", "error", "terms"},
                                   {grid, value, error, terms});
            }
        }
    } catch (const exrenew::DataError& e) {
        std::cerr << "data error: " << e.what() << "\n";
        return 3;
    } catch (const exrenew::NumericalError& e) {
        std::cerr << "numerical error: " << e.what() << "\n";
        return 4;
    } catch (const std::invalid_argument& e) {
        std::cerr << "usage error: " << e.what() << "\n";
        return 2;
    } catch (const std::domain_error& e) {
        std::cerr << "usage error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 4;
    }
    return 0;
}
