#ifndef EXRENEW_DIRICHLET_HPP
#define EXRENEW_DIRICHLET_HPP

#include <cstdint>
#include <functional>
#include <vector>

#include "exrenew/distributions.hpp"
#include "exrenew/model.hpp"

namespace exrenew {

// Partition of n in occupancy encoding: v[j-1] = number of blocks of size j,
// sum_j j*v[j-1] = n.
struct PartitionVector {
    std::vector<int> v;
    int n() const;
};

void validate(const PartitionVector& p);

inline constexpr int kDefaultPartitionCap = 40;

// All partitions of n, lexicographically sorted on v.  The cap guards the
// combinatorial explosion (p(40) = 37338; larger n must opt in).
std::vector<PartitionVector> enumerate_partitions(int n, int cap = kDefaultPartitionCap);

// Streaming enumeration in a fixed (recursive, largest-part-first) order;
// used internally where materializing every partition would be wasteful.
void for_each_partition(int n, const std::function<void(const PartitionVector&)>& fn);

// Number of partitions of n (exact for n <= 120).
long partition_count(int n);

double pochhammer(double alpha, long n);

// Ewens sampling formula: probability of occupancy v among exchangeable
// sequences driven by a Dirichlet process with concentration alpha,
//   P(V = v) = n!/(alpha)_n * prod_j alpha^{v_j} / (j^{v_j} v_j!).
double ewens_log_probability(const PartitionVector& part, double alpha);
double ewens_probability(const PartitionVector& part, double alpha);

// Distribution of S_n = T_1 + ... + T_n given the tie pattern v, for the
// exponential base H = Exp(lambda): a block of size j contributes j*X with
// X ~ Exp(lambda), i.e. Exp(lambda/j); the convolution over blocks has the
// signed Erlang mixture CDF
//   F(t|v) = (prod_m m^{-v_m}) sum_i sum_{j<=v_i} K_{i,j} i^j ErlangCDF(t; j, lambda/i),
// with K_{i,j} the partial-fraction residues of prod_i (1/i - w)^{-v_i}.
// Residues are computed by exact rational arithmetic for n <= 20 and in long
// double beyond; a NumericalError flags coefficients past 1e12 (the
// expansion is ill-conditioned for near-coincident pole clusters).
SignedErlangMixture partial_fraction_mixture(const PartitionVector& part, double lambda);

// Unconditional P(S_n <= t) = sum_v Ewens(v) F(t|v), exponential base.
// Parallel over partitions with a fixed-order reduction; the serial
// reference sums identically.
double sn_cdf(double t, int n, double alpha, double lambda, int cap = kDefaultPartitionCap);
double sn_cdf_serial(double t, int n, double alpha, double lambda, int cap = kDefaultPartitionCap);

// Monte Carlo fallback for non-exponential bases: urn-sampled tie patterns
// and base draws.  Callers must surface the sampling error to users.
struct McCdfEstimate {
    double value;
    double stderr_;
};
McCdfEstimate sn_cdf_mc(double t, int n, double alpha, const BaseDistribution& base,
                        long replicates, std::uint64_t seed);

struct DpSeriesResult {
    double value;          // partial sum of P(S_n <= t)
    double error_estimate; // ratio-based tail estimate (heuristic, reported not proven)
    int terms_used;
};

// Renewal function of the Dirichlet-process model with exponential base:
// U(t) = sum_{n>=1} P(S_n <= t), truncated at the first term < tol.
// Signals NumericalError if the cap is reached with term >= tol.
DpSeriesResult dp_renewal_function(double t, double alpha, double lambda, double tol,
                                   int cap = kDefaultPartitionCap);

} // namespace exrenew

#endif
