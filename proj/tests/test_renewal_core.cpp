#include <doctest.h>

#include <cmath>
#include <complex>
#include <stdexcept>
#include <vector>

#include "exrenew/errors.hpp"
#include "exrenew/mc.hpp"
#include "exrenew/renewal.hpp"
#include "exrenew/special.hpp"
#include "oracles.hpp"

using namespace exrenew;

TEST_CASE("count_events") {
    CHECK(count_events({0.5, 0.5}, 0.0) == 0);
    CHECK(count_events({1.0, 2.0, 3.0}, 3.5) == 2);
    CHECK(count_events({1.0, 2.0, 3.0}, 6.0) == 3);
    CHECK(count_events({1.0, 2.0, 3.0}, 100.0) == 3);
    CHECK_THROWS_AS(count_events({1.0, -2.0}, 1.0), std::invalid_argument);
    CHECK_THROWS_AS(count_events({1.0}, -1.0), std::invalid_argument);
}

TEST_CASE("grid validation") {
    CHECK_NOTHROW(validate_grid({0.0, 1.0, 2.0}));
    CHECK_THROWS_AS(validate_grid({}), std::invalid_argument);
    CHECK_THROWS_AS(validate_grid({1.0, 1.0}), std::invalid_argument);
    CHECK_THROWS_AS(validate_grid({-1.0, 1.0}), std::invalid_argument);
}

TEST_CASE("erlang_conditional_renewal") {
    SUBCASE("m=1 is the Poisson process") {
        for (double t : {0.0, 0.5, 3.0, 50.0})
            CHECK(erlang_conditional_renewal(t, 1, 2.5) == doctest::Approx(2.5 * t).epsilon(1e-14));
    }
    SUBCASE("matches the Poisson-tail series oracle") {
        for (int m : {2, 3, 5, 8})
            for (double lambda : {0.7, 1.0, 3.0})
                for (double t : {0.5, 1.0, 2.0, 10.0}) {
                    const double oracle = oracles::erlang_renewal(t, m, lambda);
                    CHECK(erlang_conditional_renewal(t, m, lambda) ==
                          doctest::Approx(oracle).epsilon(1e-10));
                }
    }
    SUBCASE("t=0 gives 0") {
        CHECK(erlang_conditional_renewal(0.0, 7, 1.0) == 0.0);
    }
    SUBCASE("folded evaluation equals the naive complex sum, imaginary residue tiny") {
        for (int m : {2, 3, 4, 7, 16, 33, 64})
            for (double t : {0.3, 1.0, 10.0, 100.0}) {
                const std::complex<double> z = erlang_conditional_renewal_complex(t, m, 1.1);
                CHECK(std::fabs(z.imag()) < 1e-10);
                CHECK(erlang_conditional_renewal(t, m, 1.1) ==
                      doctest::Approx(z.real()).epsilon(1e-11));
            }
    }
}

TEST_CASE("erlang_gamma_mixed_renewal") {
    SUBCASE("m=1 collapses to alpha*t") {
        for (double t : {0.0, 0.25, 2.0, 9.0})
            CHECK(erlang_gamma_mixed_renewal(t, 1, 2.0) == doctest::Approx(2.0 * t).epsilon(1e-14));
    }
    SUBCASE("equals the latent quadrature of the conditional renewal") {
        for (const auto& [m, alpha] : std::vector<std::pair<int, double>>{{2, 3.0}, {5, 2.5}, {3, 1.2}})
            for (double t : {0.5, 1.0, 2.0, 5.0}) {
                const double byquad = oracles::integrate_halfline(
                    [t, m = m, alpha = alpha](double lam) {
                        if (!(lam > 0.0)) return 0.0;
                        const double dens =
                            std::exp((alpha - 1.0) * std::log(lam) - lam - std::lgamma(alpha));
                        return erlang_conditional_renewal(t, m, lam) * dens;
                    },
                    1e-12);
                CHECK(erlang_gamma_mixed_renewal(t, m, alpha) ==
                      doctest::Approx(byquad).epsilon(1e-5));
            }
    }
    SUBCASE("imaginary residue below 1e-10 up to m=64, t=100") {
        for (int m : {2, 5, 17, 40, 64})
            for (double t : {0.5, 10.0, 100.0}) {
                const std::complex<double> z = erlang_gamma_mixed_renewal_complex(t, m, 2.1);
                CHECK(std::fabs(z.imag()) < 1e-10);
                CHECK(erlang_gamma_mixed_renewal(t, m, 2.1) ==
                      doctest::Approx(z.real()).epsilon(1e-11));
            }
    }
    SUBCASE("nondecreasing in t") {
        double prev = 0.0;
        for (double t = 0.0; t <= 20.0; t += 0.1) {
            const double u = erlang_gamma_mixed_renewal(t, 5, 2.5);
            CHECK(u >= prev - 1e-13);
            prev = u;
        }
    }
}

TEST_CASE("series_mixed_renewal") {
    SUBCASE("the beta identity is validated against the mixing quadrature before use") {
        // P(S_n <= t) = I_{t/(1+t)}(n m, alpha) must equal
        // int ErlangCDF(t; n m, lambda) Ga(alpha,1)(dlambda).
        for (const auto& [n, m, alpha, t] :
             std::vector<std::tuple<int, int, double, double>>{
                 {1, 1, 2.0, 0.7}, {2, 3, 2.5, 1.5}, {4, 2, 1.2, 3.0}, {3, 5, 4.0, 2.0}}) {
            const int shape = n * m;
            const double identity = regularized_beta(shape, alpha, t / (1.0 + t));
            const double byquad = oracles::integrate_halfline(
                [t, shape, alpha = alpha](double lam) {
                    if (!(lam > 0.0)) return 0.0;
                    const double dens =
                        std::exp((alpha - 1.0) * std::log(lam) - lam - std::lgamma(alpha));
                    return erlang_cdf(t, {shape, lam}) * dens;
                },
                1e-13);
            CHECK(identity == doctest::Approx(byquad).epsilon(1e-8));
        }
    }
    SUBCASE("m=1, alpha=2 sums to 2t within the reported tail") {
        for (double t : {0.5, 1.0, 2.0, 5.0}) {
            const SeriesResult r = series_mixed_renewal(t, 1, 2.0, 1e-9);
            CHECK(std::fabs(r.value - 2.0 * t) <= r.tail_estimate + 1e-9);
            CHECK(r.terms >= 1);
        }
    }
    SUBCASE("t=0 is 0 with no terms needed") {
        const SeriesResult r = series_mixed_renewal(0.0, 3, 2.0, 1e-8);
        CHECK(r.value == 0.0);
        CHECK(r.tail_estimate == 0.0);
    }
    SUBCASE("agrees with the closed form within 1e-6") {
        for (const auto& [m, alpha] : std::vector<std::pair<int, double>>{{2, 3.0}, {5, 2.5}, {40, 2.1}})
            for (double t : {0.5, 1.0, 2.0, 4.0}) {
                const SeriesResult r = series_mixed_renewal(t, m, alpha, 1e-10);
                CHECK(r.value ==
                      doctest::Approx(erlang_gamma_mixed_renewal(t, m, alpha)).epsilon(1e-6));
            }
    }
    SUBCASE("non-convergence is signalled") {
        CHECK_THROWS_AS(series_mixed_renewal(50.0, 1, 2.0, 1e-12, 20), NumericalError);
    }
}

TEST_CASE("mc_renewal_function") {
    SUBCASE("ErlangGamma(1,2): curve is 2t within 3 stderr; t=0 exact") {
        const std::vector<double> grid = {0.0, 0.5, 1.0, 2.0, 4.0};
        const RenewalCurve c =
            mc_renewal_function(ModelSpec{ErlangGammaModel{1, 2.0}}, grid, {20000, 17});
        CHECK(c.values[0] == 0.0);
        CHECK(c.stderrs[0] == 0.0);
        for (std::size_t i = 1; i < grid.size(); ++i)
            CHECK(std::fabs(c.values[i] - 2.0 * grid[i]) < 3.0 * c.stderrs[i]);
    }
    SUBCASE("ExpUniform(1.5): curve is 1.5 t within 3 stderr") {
        const std::vector<double> grid = {0.5, 1.0, 3.0};
        const RenewalCurve c =
            mc_renewal_function(ModelSpec{ExpUniformModel{1.5}}, grid, {20000, 18});
        for (std::size_t i = 0; i < grid.size(); ++i)
            CHECK(std::fabs(c.values[i] - 1.5 * grid[i]) < 3.0 * c.stderrs[i]);
    }
    SUBCASE("parallel and serial reference are bit-identical") {
        const std::vector<double> grid = {0.5, 1.0, 2.0};
        for (const ModelSpec& model :
             {ModelSpec{ErlangGammaModel{2, 3.0}}, ModelSpec{ExpUniformModel{1.0}},
              ModelSpec{Gamma2ParetoModel{1.0, 2.0}},
              ModelSpec{DirichletProcessModel{2.0, ErlangParams{1, 1.0}}}}) {
            const RenewalCurve a = mc_renewal_function(model, grid, {5000, 3});
            const RenewalCurve b = mc_renewal_function_serial(model, grid, {5000, 3});
            CHECK(a.values == b.values);
            CHECK(a.stderrs == b.stderrs);
        }
    }
    SUBCASE("infinite renewal function is rejected") {
        CHECK_THROWS_AS(
            mc_renewal_function(ModelSpec{Gamma2ParetoModel{1.0, 0.8}}, {1.0}, {100, 1}),
            std::domain_error);
    }
    SUBCASE("horizon cap signals instead of stalling") {
        CHECK_THROWS_AS(
            mc_renewal_function(ModelSpec{ErlangGammaModel{1, 2.0}}, {1000.0}, {10, 1, 100}),
            NumericalError);
    }
}

TEST_CASE("renewal_lower_bound") {
    SUBCASE("ErlangGamma slack is exactly 1 at m=1") {
        for (double t : {0.0, 1.0, 4.0}) {
            const double bound = renewal_lower_bound(t, ModelSpec{ErlangGammaModel{1, 2.0}});
            CHECK(bound == doctest::Approx(2.0 * t - 1.0));
            CHECK(bound <= erlang_gamma_mixed_renewal(t, 1, 2.0));
        }
    }
    SUBCASE("ErlangGamma(2,3) at t=5: 6.5 below the closed form") {
        const double bound = renewal_lower_bound(5.0, ModelSpec{ErlangGammaModel{2, 3.0}});
        CHECK(bound == doctest::Approx(6.5));
        CHECK(bound <= erlang_gamma_mixed_renewal(5.0, 2, 3.0));
    }
    SUBCASE("holds along a whole grid") {
        for (const auto& [m, alpha] : std::vector<std::pair<int, double>>{{2, 3.0}, {5, 2.5}, {40, 2.1}})
            for (double t = 0.0; t <= 10.0; t += 0.5)
                CHECK(renewal_lower_bound(t, ModelSpec{ErlangGammaModel{m, alpha}}) <=
                      erlang_gamma_mixed_renewal(t, m, alpha) + 1e-12);
    }
    SUBCASE("ExpUniform and unsupported variants") {
        CHECK(renewal_lower_bound(2.0, ModelSpec{ExpUniformModel{1.5}}) == doctest::Approx(2.0));
        CHECK_THROWS_AS(renewal_lower_bound(1.0, ModelSpec{Gamma2ParetoModel{1.0, 2.0}}),
                        std::domain_error);
    }
}

TEST_CASE("mixed_renewal_laplace") {
    SUBCASE("ErlangGamma(1, alpha) gives alpha/s^2") {
        for (double alpha : {2.0, 5.982})
            for (double s : {0.5, 1.0, 2.0})
                CHECK(mixed_renewal_laplace(s, ModelSpec{ErlangGammaModel{1, alpha}}) ==
                      doctest::Approx(alpha / (s * s)).epsilon(1e-6));
    }
    SUBCASE("ExpUniform(lambda) gives lambda/s^2 (transform of lambda t)") {
        for (double s : {0.5, 1.0, 3.0})
            CHECK(mixed_renewal_laplace(s, ModelSpec{ExpUniformModel{0.8}}) ==
                  doctest::Approx(0.8 / (s * s)).epsilon(1e-8));
    }
    SUBCASE("s large drives the transform to 0") {
        CHECK(mixed_renewal_laplace(50.0, ModelSpec{ErlangGammaModel{1, 2.0}}) ==
              doctest::Approx(2.0 / 2500.0).epsilon(1e-6));
    }
    SUBCASE("agrees with Stieltjes integration of the closed-form curve") {
        // int_0^inf e^{-st} dU(t) = s * L_U(s), U from the roots-of-unity form.
        const int m = 3;
        const double alpha = 2.5;
        for (double s : {0.8, 1.5}) {
            const double h = 5e-4;
            const double horizon = 45.0 / s;
            double stieltjes = 0.0;
            double prev_u = 0.0;
            for (double t = h; t <= horizon; t += h) {
                const double u = erlang_gamma_mixed_renewal(t, m, alpha);
                stieltjes += std::exp(-s * (t - 0.5 * h)) * (u - prev_u);
                prev_u = u;
            }
            const double transform = mixed_renewal_laplace(s, ModelSpec{ErlangGammaModel{m, alpha}});
            CHECK(s * transform == doctest::Approx(stieltjes).epsilon(1e-4));
        }
    }
    SUBCASE("preconditions") {
        CHECK_THROWS_AS(mixed_renewal_laplace(0.0, ModelSpec{ErlangGammaModel{1, 2.0}}),
                        std::invalid_argument);
        CHECK_THROWS_AS(mixed_renewal_laplace(1.0, ModelSpec{Gamma2ParetoModel{1.0, 2.0}}),
                        std::domain_error);
    }
}

TEST_CASE("covariance and correlation structure") {
    SUBCASE("variance at s=0 shows the over-dispersion formula") {
        for (double alpha : {2.0, 4.0})
            for (double t : {0.5, 1.0, 3.0})
                CHECK(mixed_covariance(t, 0.0, ModelSpec{ErlangGammaModel{1, alpha}}) ==
                      doctest::Approx(alpha * t * (1.0 + t)).epsilon(1e-12));
    }
    SUBCASE("correlation is 1 at s=0") {
        CHECK(mixed_correlation(1.3, 0.0, ModelSpec{ErlangGammaModel{1, 2.0}}) ==
              doctest::Approx(1.0).epsilon(1e-14));
        CHECK(mixed_correlation(0.7, 0.0, ModelSpec{ExpUniformModel{1.1}}) ==
              doctest::Approx(1.0).epsilon(1e-14));
    }
    SUBCASE("monotone decay in the lag") {
        double prev = 1.0;
        for (double s = 0.0; s <= 5.0; s += 0.5) {
            const double c = mixed_correlation(1.0, s, ModelSpec{ErlangGammaModel{1, 2.0}});
            CHECK(c <= prev + 1e-14);
            CHECK(c > 0.0);
            prev = c;
        }
    }
    SUBCASE("m > 1 has no closed covariance and is rejected") {
        CHECK_THROWS_AS(mixed_covariance(1.0, 1.0, ModelSpec{ErlangGammaModel{2, 3.0}}),
                        std::domain_error);
    }
    SUBCASE("Monte Carlo covariance agrees at (t,s)=(1,1), alpha=2") {
        const CovarianceEstimate est =
            mc_counting_covariance(ModelSpec{ErlangGammaModel{1, 2.0}}, 1.0, 1.0, {20000, 101});
        CHECK(std::fabs(est.value - 6.0) < 3.0 * est.stderr_);
    }
    SUBCASE("ExpUniform mixing moments: phi = lambda, sigma^2 = lambda^2/3") {
        double phi = 0.0, sig2 = 0.0;
        conditional_poisson_mixing(ModelSpec{ExpUniformModel{1.5}}, phi, sig2);
        CHECK(phi == doctest::Approx(1.5));
        CHECK(sig2 == doctest::Approx(1.5 * 1.5 / 3.0));
        const double t = 0.8, s = 0.4;
        CHECK(mixed_covariance(t, s, ModelSpec{ExpUniformModel{1.5}}) ==
              doctest::Approx(t * phi + t * (t + s) * sig2).epsilon(1e-14));
    }
}

TEST_CASE("NHPP equivalent") {
    SUBCASE("sigma^2 = 0 is the homogeneous Poisson process") {
        const NhppEquivalent n = nhpp_equivalent(2.0, 4.0, 0.0);
        CHECK(n.cumulative == doctest::Approx(0.5));
        CHECK(n.rate == doctest::Approx(0.25));
    }
    SUBCASE("(phi, sigma^2, t) = (2, 1, 2) gives Lambda = 0.5") {
        CHECK(nhpp_equivalent(2.0, 2.0, 1.0).cumulative == doctest::Approx(0.5));
    }
    SUBCASE("rate integrates to Lambda (finite differences of the closed antiderivative)") {
        const double phi = 1.7, sig2 = 0.6;
        for (double t : {0.5, 2.0, 7.0}) {
            const double h = 1e-6;
            const double dLam = (nhpp_equivalent(t + h, phi, sig2).cumulative -
                                 nhpp_equivalent(t - h, phi, sig2).cumulative) /
                                (2.0 * h);
            CHECK(dLam == doctest::Approx(nhpp_equivalent(t, phi, sig2).rate).epsilon(1e-7));
        }
    }
    SUBCASE("sqrt(Lambda(t)/Lambda(t+s)) equals the mixed correlation pointwise") {
        for (const ModelSpec& model : {ModelSpec{ErlangGammaModel{1, 2.0}}, ModelSpec{ExpUniformModel{0.7}}}) {
            double phi = 0.0, sig2 = 0.0;
            conditional_poisson_mixing(model, phi, sig2);
            for (double t : {0.3, 1.0, 2.5})
                for (double s : {0.0, 0.5, 2.0}) {
                    const double via_nhpp = nhpp_correlation(t, s, phi, sig2);
                    CHECK(std::fabs(via_nhpp - mixed_correlation(t, s, model)) < 1e-12);
                }
        }
    }
}

TEST_CASE("empirical_renewal_curve") {
    SUBCASE("single sequence [1,1,1]") {
        const RenewalCurve c = empirical_renewal_curve({{1.0, 1.0, 1.0}}, {0.5, 1.5, 2.5});
        CHECK(c.values == std::vector<double>{0.0, 1.0, 2.0});
    }
    SUBCASE("k identical sequences give the same curve as one") {
        const std::vector<double> seq = {0.4, 1.2, 0.9};
        const std::vector<double> grid = {0.5, 1.0, 2.0, 3.0};
        const RenewalCurve one = empirical_renewal_curve({seq}, grid);
        const RenewalCurve four = empirical_renewal_curve({seq, seq, seq, seq}, grid);
        CHECK(one.values == four.values);
    }
    SUBCASE("simulated ErlangGamma data tracks the mixed renewal function") {
        const int m = 2;
        const double alpha = 4.0;
        const long k = 1000;
        std::vector<std::vector<double>> seqs;
        seqs.reserve(k);
        for (long i = 0; i < k; ++i) {
            RngStream rng = RngStream::from(71, static_cast<std::uint64_t>(i), 0);
            seqs.push_back(sample_sequence(ModelSpec{ErlangGammaModel{m, alpha}}, 60, rng).times);
        }
        const std::vector<double> grid = {1.0, 2.0, 4.0};
        const RenewalCurve emp = empirical_renewal_curve(seqs, grid);
        for (std::size_t g = 0; g < grid.size(); ++g) {
            const double truth = erlang_gamma_mixed_renewal(grid[g], m, alpha);
            // Var(N(t)) is dominated by the latent spread; 3 sigma with the
            // crude bound Var <= E[N] + E[N]^2.
            const double sd = std::sqrt((truth + truth * truth) / static_cast<double>(k));
            CHECK(std::fabs(emp.values[g] - truth) < 3.0 * sd);
        }
    }
}
