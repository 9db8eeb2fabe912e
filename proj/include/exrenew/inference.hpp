#ifndef EXRENEW_INFERENCE_HPP
#define EXRENEW_INFERENCE_HPP

#include <cstdint>
#include <string>
#include <vector>

#include "exrenew/model.hpp"

namespace exrenew {

// k sequences of inter-arrival times; partially exchangeable (each sequence
// has its own latent rate, sequences are independent).
struct SequenceSet {
    std::vector<std::string> ids;
    std::vector<std::vector<double>> sequences;
};

void validate(const SequenceSet& data);

// Joint log density of all sequences under ErlangGamma(m, alpha), the
// Gamma(alpha,1) mixture integrated out per sequence:
//   sum_i lgamma(alpha + n_i m) - k lgamma(alpha) - (sum_i n_i) lgamma(m)
//   + (m-1) sum_{i,j} log t_ij - sum_i (alpha + n_i m) log(1 + sum_j t_ij).
double joint_log_density(const SequenceSet& data, int m, double alpha);

struct ProfilePoint {
    int m;
    double alpha;
    double loglik;
};

struct FitResult {
    int m_hat;
    double alpha_hat;
    double loglik;
    double corr_hat; // m_hat / (alpha_hat + m_hat - 1)
    std::vector<ProfilePoint> profile;
};

struct FitOptions {
    int m_min = 1;
    int m_max = 200;
    double log_alpha_tol = 1e-8; // Brent tolerance on log(alpha)
};

// Profile MLE: exhaustive integer search over m, 1-D Brent maximization over
// log(alpha) for each m.  Ties on the profile break toward smaller m.
FitResult fit_mle(const SequenceSet& data, const FitOptions& opts = {});

// Inner 1-D step, exposed for tests: maximizing alpha for fixed m.
double max_alpha_given_m(const SequenceSet& data, int m, double tol, double* loglik_out);

// Fitted mixed renewal function (roots-of-unity closed form at the MLE).
double fitted_renewal_exchangeable(double t, const FitResult& fit);

// i.i.d. comparator: Erlang(m, lambda_hat) renewal function with the pooled
// MLE lambda_hat = m * N_total / sum of all times (same m as the
// exchangeable fit by default).
double fitted_renewal_iid(double t, const SequenceSet& data, int m);

// Alternative i.i.d. shape choice: profile m for the pooled i.i.d. Erlang
// likelihood instead of reusing the exchangeable m.
int pooled_iid_profile_m(const SequenceSet& data, int m_min = 1, int m_max = 200);

SequenceSet simulate_sequence_set(const ModelSpec& model, const std::vector<int>& lengths,
                                  std::uint64_t seed, std::uint64_t replicate = 0);

struct StudyOptions {
    long replicates = 200;
    std::uint64_t seed = 1;
    FitOptions fit;
    bool iid_profile_m = false;    // profile the comparator's m independently
    double max_fail_fraction = 0.01;
};

struct StudyBands {
    std::vector<double> grid;
    std::vector<double> true_values;
    std::vector<double> exch_median, exch_lo, exch_hi; // 2.5% / 97.5%
    std::vector<double> iid_median, iid_lo, iid_hi;
    long replicates = 0;
    long n_failed = 0;
    long iid_below_exch_at_end = 0; // replicates with U_iid < U_exch at the last grid point
};

// Simulate-fit-evaluate study under an ErlangGamma truth: per replicate,
// draw a sequence set with the given lengths, fit, and evaluate both fitted
// curves on the grid; returns pointwise medians and 95% bands.  OpenMP over
// replicates keyed by (seed, replicate); deterministic for any thread count.
// Fails (NumericalError) if more than max_fail_fraction of fits fail.
StudyBands monte_carlo_study(const ErlangGammaModel& truth, const std::vector<int>& lengths,
                             const std::vector<double>& grid, const StudyOptions& opts);

// Linear-interpolation percentile (R type 7); p in [0,1].
double percentile(std::vector<double> values, double p);

} // namespace exrenew

#endif
