#ifndef EXRENEW_MODEL_HPP
#define EXRENEW_MODEL_HPP

#include <variant>
#include <vector>

#include "exrenew/distributions.hpp"
#include "exrenew/rng.hpp"

namespace exrenew {

// Exchangeable inter-arrival models: a latent parameter is drawn once per
// sequence, then inter-arrivals are i.i.d. given the latent value.

// T | lambda ~ Erlang(m, lambda), lambda ~ Gamma(alpha, 1).
struct ErlangGammaModel {
    int m;
    double alpha;
};

// T | theta ~ Exp(theta), theta ~ Uniform(0, 2*lambda).  The mixed renewal
// function is exactly lambda*t even though the marginal mean is infinite.
struct ExpUniformModel {
    double lambda;
};

// T | delta ~ Gamma(2, delta), delta ~ Pareto(scale k, shape alpha) on [k, inf).
// Simulation-only: its renewal function is finite iff alpha > 1.
struct Gamma2ParetoModel {
    double k;
    double alpha;
};

using BaseDistribution = std::variant<ErlangParams, LomaxParams>;

// Dirichlet-process mixing with concentration alpha and base measure H:
// sequences follow the Polya urn  T_i | T_1..T_{i-1} ~
//   alpha/(alpha+i-1) H + 1/(alpha+i-1) sum_j delta_{T_j}.
struct DirichletProcessModel {
    double alpha;
    BaseDistribution base;
};

using ModelSpec = std::variant<ErlangGammaModel, ExpUniformModel, Gamma2ParetoModel, DirichletProcessModel>;

void validate(const ModelSpec& model);

struct SampledSequence {
    std::vector<double> times; // inter-arrival times, strictly positive
    // Latent draw behind the sequence (lambda, theta or delta), kept for
    // diagnostics only -- inference never sees it.  NaN for the
    // Dirichlet-process model, whose latent object is the whole urn state.
    double latent;
};

SampledSequence sample_sequence(const ModelSpec& model, int n, RngStream& rng);

// Incremental urn sampler for the Dirichlet-process model, used where
// sequences must grow until a stopping time is hit (Monte Carlo horizons).
// Distinct values are stored with their multiplicities; a re-draw picks one
// of the i-1 previous slots uniformly, i.e. a distinct value with
// probability proportional to its multiplicity.
class PolyaUrn {
  public:
    PolyaUrn(DirichletProcessModel model, RngStream& rng);
    double next();

  private:
    DirichletProcessModel model_;
    RngStream& rng_;
    std::vector<double> values_;
    std::vector<long> counts_;
    long total_ = 0;
};

// Pairwise correlation Corr(T_i, T_j), i != j:
//   ErlangGamma:      m/(alpha+m-1), requires alpha > 2;
//   DirichletProcess: 1/(alpha+1), requires a base with finite variance.
// Other variants have no closed form here and are rejected.
double theoretical_correlation(const ModelSpec& model);

// Shared ratio m/(alpha+m-1) without the alpha > 2 moment check; point
// estimates report it even when the fitted alpha is small.
double erlang_gamma_correlation(int m, double alpha);

struct Moments {
    double mean;
    double variance;
};

// Marginal mean/variance of one inter-arrival.  Signals std::domain_error
// ("moment undefined") where the moment does not exist (ErlangGamma needs
// alpha > 1 for the mean and alpha > 2 for the variance; ExpUniform has an
// infinite mean for every lambda).
Moments marginal_moments(const ModelSpec& model);

// Whether the mixed renewal function U(t) is finite for all t: false only
// for Gamma2Pareto with alpha <= 1 (the mixing mean of the conditional rate
// diverges), true for every other supported variant.
bool renewal_finiteness(const ModelSpec& model);

// E[#distinct values among the first n draws] = sum_{i=1..n} alpha/(alpha+i-1).
double dp_expected_distinct(double alpha, int n);

double base_mean(const BaseDistribution& base);
double base_variance(const BaseDistribution& base);
double draw_base(const BaseDistribution& base, RngStream& rng);

} // namespace exrenew

#endif
