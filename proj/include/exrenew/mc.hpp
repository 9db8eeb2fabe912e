#ifndef EXRENEW_MC_HPP
#define EXRENEW_MC_HPP

#include <cstdint>
#include <vector>

#include "exrenew/renewal.hpp"

namespace exrenew {

// Monte Carlo kernels.  Replicates are independent work units keyed by
// (seed, replicate index); the accumulated statistics are integer counts, so
// results are identical for any thread count and for the serial reference.

struct McOptions {
    long replicates;
    std::uint64_t seed;
    long max_events = 10'000'000; // per-replicate cap; horizon not reached => error
};

// One replicate: simulate a sequence until the running sum passes the last
// grid point, returning the event count at each grid point.
std::vector<long> simulate_counts(const ModelSpec& model, const std::vector<double>& grid,
                                  RngStream& rng, long max_events);

// Mean event count (with standard errors) on the grid; OpenMP over replicates.
RenewalCurve mc_renewal_function(const ModelSpec& model, const std::vector<double>& grid,
                                 const McOptions& opts);
// Serial reference implementation (same per-replicate streams, plain loop).
RenewalCurve mc_renewal_function_serial(const ModelSpec& model, const std::vector<double>& grid,
                                        const McOptions& opts);

struct CovarianceEstimate {
    double value;
    double stderr_; // batch-means standard error (100 batches)
};

// Monte Carlo estimate of Cov(N(t), N(t+s)).
CovarianceEstimate mc_counting_covariance(const ModelSpec& model, double t, double s,
                                          const McOptions& opts);

} // namespace exrenew

#endif
