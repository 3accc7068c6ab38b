#include "mixexact/errors.hpp"
#include "mixexact/family_models.hpp"

#include <boost/math/quadrature/exp_sinh.hpp>
#include <boost/math/quadrature/sinh_sinh.hpp>
#include <boost/math/quadrature/tanh_sinh.hpp>
#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>

using namespace mixexact;

namespace {

double trapezoid(double lo, double hi, std::size_t points, auto&& f) {
    const double h = (hi - lo) / static_cast<double>(points - 1);
    double acc = 0.5 * (f(lo) + f(hi));
    for (std::size_t i = 1; i + 1 < points; ++i) acc += f(lo + h * static_cast<double>(i));
    return acc * h;
}

} // namespace

TEST(ConjugateUpdate, GammaAddsSumAndCount) {
    const auto post = conjugate_update(PoissonPrior{1, 1}, PoissonStatistic{3, 5});
    EXPECT_EQ(post, (PoissonPrior{6, 4}));
}

TEST(ConjugateUpdate, EmptyGroupLeavesPriorUnchanged) {
    EXPECT_EQ(conjugate_update(PoissonPrior{1, 10}, PoissonStatistic{0, 0}), (PoissonPrior{1, 10}));
    const NormalPrior nig{0.5, 0.2, 3, 2};
    EXPECT_EQ(conjugate_update(nig, NormalStatistic{0, 0.0, 0.0}), nig);
}

TEST(ConjugateUpdate, DirichletIsComponentwise) {
    const auto post = conjugate_update(MultinomialPrior{{0.5, 0.5, 0.5}}, MultinomialStatistic{2, {3, 1, 1}});
    EXPECT_EQ(post.concentration, (std::vector<double>{3.5, 1.5, 1.5}));
}

TEST(ConjugateUpdate, VariantEntryPointMatchesTypedOverloads) {
    const std::vector<std::int64_t> sums{4};
    const auto post = std::get<PoissonPrior>(conjugate_update(ComponentPrior{PoissonPrior{2, 3}}, 2, sums));
    EXPECT_EQ(post, (PoissonPrior{6, 5}));
    EXPECT_THROW(conjugate_update(ComponentPrior{NormalPrior{}}, 1, sums), UnsupportedFamily);
}

TEST(ConjugateUpdate, AdditiveInTheStatistic) {
    std::mt19937_64 rng(11);
    std::uniform_int_distribution<std::int64_t> small(0, 9);
    std::normal_distribution<double> gauss(0.0, 3.0);
    for (int trial = 0; trial < 200; ++trial) {
        const PoissonPrior p{0.5 + static_cast<double>(small(rng)), 0.25 + static_cast<double>(small(rng))};
        const PoissonStatistic s1{1 + small(rng), small(rng)}, s2{1 + small(rng), small(rng)};
        EXPECT_EQ(conjugate_update(conjugate_update(p, s1), s2),
                  conjugate_update(p, PoissonStatistic{s1.count + s2.count, s1.sum + s2.sum}));

        const MultinomialPrior d{{0.5, 1.5, 2.0}};
        const MultinomialStatistic m1{1, {small(rng), small(rng), small(rng)}};
        const MultinomialStatistic m2{2, {small(rng), small(rng), small(rng)}};
        MultinomialStatistic m12{3, {m1.sums[0] + m2.sums[0], m1.sums[1] + m2.sums[1], m1.sums[2] + m2.sums[2]}};
        EXPECT_EQ(conjugate_update(conjugate_update(d, m1), m2), conjugate_update(d, m12));

        const NormalPrior nig{gauss(rng), 0.1 + 0.1 * static_cast<double>(small(rng)), 3.0, 2.0};
        std::vector<double> xs(5);
        for (double& x : xs) x = gauss(rng);
        auto stat = [&](std::size_t lo, std::size_t hi) {
            NormalStatistic s;
            for (std::size_t i = lo; i < hi; ++i) {
                ++s.count;
                s.sum += xs[i];
                s.sum_squares += xs[i] * xs[i];
            }
            return s;
        };
        const NormalPrior twice = conjugate_update(conjugate_update(nig, stat(0, 2)), stat(2, 5));
        const NormalPrior once = conjugate_update(nig, stat(0, 5));
        EXPECT_NEAR(twice.location, once.location, 1e-12 * (1 + std::abs(once.location)));
        EXPECT_NEAR(twice.precision_scale, once.precision_scale, 1e-12 * once.precision_scale);
        EXPECT_NEAR(twice.shape, once.shape, 1e-12 * once.shape);
        EXPECT_NEAR(twice.scale, once.scale, 1e-10 * once.scale);
    }
}

TEST(ConjugateUpdate, NormalSingleObservationMatchesTextbookForm) {
    const NormalPrior p{1.0, 0.5, 3.0, 2.0};
    const double x = 2.5;
    const NormalPrior post = conjugate_update(p, NormalStatistic{1, x, x * x});
    EXPECT_DOUBLE_EQ(post.precision_scale, 1.5);
    EXPECT_NEAR(post.location, (0.5 * 1.0 + x) / 1.5, 1e-15);
    EXPECT_DOUBLE_EQ(post.shape, 4.0);
    // b + c (x - xi)^2 / (c + 1)
    EXPECT_NEAR(post.scale, 2.0 + 0.5 * 1.5 * 1.5 / 1.5, 1e-14);
}

TEST(ConjugateUpdate, NormalMeanTendsToLocationForLargePrecisionScale) {
    const NormalStatistic s{4, 10.0, 30.0};
    double previous = std::abs(posterior_mean(conjugate_update(NormalPrior{-1.0, 1.0, 2, 2}, s)) + 1.0);
    for (double c : {1e2, 1e4, 1e6, 1e8}) {
        const double gap = std::abs(posterior_mean(conjugate_update(NormalPrior{-1.0, c, 2, 2}, s)) + 1.0);
        EXPECT_LT(gap, previous);
        previous = gap;
    }
    EXPECT_LT(previous, 1e-6);
}

TEST(ConjugateUpdate, RejectsOutOfDomainPriors) {
    EXPECT_THROW(validate(PoissonPrior{0.0, 1.0}), InvalidPrior);
    EXPECT_THROW(validate(PoissonPrior{1.0, -1.0}), InvalidPrior);
    EXPECT_THROW(validate(MultinomialPrior{{1.0}}), InvalidPrior);
    EXPECT_THROW(validate(MultinomialPrior{{1.0, 0.0}}), InvalidPrior);
    EXPECT_THROW(validate(NormalPrior{0, 0, 1, 1}), InvalidPrior);
    EXPECT_THROW(conjugate_update(PoissonPrior{1, 1}, PoissonStatistic{-2, 0}), InvalidArgument);
}

TEST(LogPartition, ClosedFormValues) {
    const std::vector<double> one{1.0}, three{3.0}, flat{1.0, 1.0};
    EXPECT_DOUBLE_EQ(log_partition_constant(Family::poisson, one, 1.0), 0.0);
    EXPECT_NEAR(log_partition_constant(Family::poisson, three, 2.0), std::log(0.25), 1e-15);
    EXPECT_NEAR(log_partition_constant(Family::multinomial, flat, 0.0), 0.0, 1e-15);
    EXPECT_THROW(log_partition_constant(Family::poisson, one, 0.0), InvalidArgument);
    EXPECT_THROW(log_partition_constant(Family::multinomial, std::vector<double>{1.0, -1.0}, 0.0), InvalidArgument);
}

TEST(LogPartition, GammaConstantMatchesQuadrature) {
    boost::math::quadrature::exp_sinh<double> integrator;
    for (auto [xi, delta] : {std::pair{1.0, 1.0}, {6.0, 4.0}, {0.5, 3.0}, {12.5, 7.0}, {2.0, 0.1}}) {
        const double q = integrator.integrate(
            [&](double t) { return std::exp((xi - 1.0) * std::log(t) - delta * t); });
        EXPECT_NEAR(std::exp(log_partition(PoissonPrior{xi, delta})), q, 1e-6 * q) << xi << " " << delta;
    }
}

TEST(LogPartition, BetaConstantMatchesQuadrature) {
    boost::math::quadrature::tanh_sinh<double> integrator;
    for (auto [a, b] : {std::pair{1.0, 1.0}, {3.5, 1.5}, {0.5, 0.5}, {8.0, 2.0}}) {
        const double q =
            integrator.integrate([&](double t) { return std::pow(t, a - 1.0) * std::pow(1.0 - t, b - 1.0); }, 0.0, 1.0);
        EXPECT_NEAR(std::exp(log_partition(MultinomialPrior{{a, b}})), q, 1e-6 * q);
    }
}

TEST(LogPartition, NormalInverseGammaConstantMatchesQuadrature) {
    boost::math::quadrature::exp_sinh<double> outer;
    boost::math::quadrature::sinh_sinh<double> inner;
    for (const NormalPrior p : {NormalPrior{0, 0.1, 4, 4}, NormalPrior{1.5, 2.0, 3, 0.5}, NormalPrior{-2, 1.0, 7, 9}}) {
        // kernel in (mu, tau = 1/sigma^2)
        const double q = outer.integrate([&](double tau) {
            if (!std::isfinite(tau) || tau <= 0.0) return 0.0;
            const double mu_part = inner.integrate([&](double mu) {
                return std::exp(-0.5 * p.precision_scale * tau * (mu - p.location) * (mu - p.location));
            });
            return std::exp((0.5 * p.shape - 0.5) * std::log(tau) - 0.5 * p.scale * tau) * mu_part;
        });
        EXPECT_NEAR(std::exp(log_partition(p)), q, 1e-6 * q);
    }
}

TEST(PosteriorMean, Examples) {
    EXPECT_DOUBLE_EQ(posterior_mean(PoissonPrior{6, 4}), 1.5);
    EXPECT_DOUBLE_EQ(posterior_mean(PoissonPrior{1, 10}), 0.1);
    EXPECT_EQ(posterior_mean(MultinomialPrior{{2, 2}}), (std::vector<double>{0.5, 0.5}));
    EXPECT_DOUBLE_EQ(posterior_mean(NormalPrior{1.25, 3, 4, 4}), 1.25);
    EXPECT_EQ(component_posterior_mean(ComponentPosterior{PoissonPrior{7, 3}}), (std::vector<double>{7.0 / 3.0}));
}

TEST(Density, Examples) {
    EXPECT_DOUBLE_EQ(component_posterior_density(PoissonPrior{1, 1}, 0.0), 1.0);
    EXPECT_NEAR(component_posterior_density(PoissonPrior{2, 1}, 1.0), std::exp(-1.0), 1e-15);
    EXPECT_NEAR(component_posterior_density(MultinomialPrior{{1, 1}}, 0.3, 0), 1.0, 1e-14);
}

TEST(Density, ZeroOutsideSupport) {
    EXPECT_EQ(component_posterior_density(PoissonPrior{2, 1}, -0.5), 0.0);
    EXPECT_EQ(component_posterior_density(MultinomialPrior{{2, 3}}, 1.5, 0), 0.0);
    EXPECT_EQ(component_posterior_density(MultinomialPrior{{2, 3}}, -0.1, 1), 0.0);
    EXPECT_EQ(component_posterior_density(NormalPrior{0, 1, 3, 3}, -1.0, 1), 0.0);
    EXPECT_EQ(gamma_density(3.0, 1.0, 0.0), 0.0);
    EXPECT_TRUE(std::isinf(gamma_density(0.5, 1.0, 0.0)));
    EXPECT_NEAR(beta_density(1.0, 3.0, 0.0), 3.0, 1e-14);
}

TEST(Density, IntegratesToOneOverItsMass) {
    const std::size_t points = 20001;
    EXPECT_NEAR(trapezoid(0.0, 8.0, points, [](double t) { return density(PoissonPrior{6, 4}, t); }), 1.0, 1e-4);
    EXPECT_NEAR(trapezoid(0.0, 1.0, points, [](double q) { return density(MultinomialPrior{{3.5, 1.5, 1.5}}, 0, q); }),
                1.0, 1e-4);
    const NormalPrior nig{0.5, 2.0, 6.0, 3.0};
    EXPECT_NEAR(trapezoid(-12.0, 13.0, points, [&](double mu) { return mean_density(nig, mu); }), 1.0, 1e-4);
    EXPECT_NEAR(trapezoid(0.0, 60.0, 200001, [&](double s2) { return variance_density(nig, s2); }), 1.0, 1e-4);
}

TEST(Dataset, FactoriesValidate) {
    EXPECT_THROW(Dataset::poisson({1, -1}), InvalidArgument);
    EXPECT_THROW(Dataset::multinomial({{1, 2}, {1, 2, 3}}), InvalidArgument);
    EXPECT_THROW(Dataset::multinomial({{0, 0}}), InvalidArgument);
    EXPECT_THROW(Dataset::normal({std::nan("")}), InvalidArgument);
    const Dataset d = Dataset::multinomial({{3, 1}, {0, 4}});
    EXPECT_EQ(d.size(), 2u);
    EXPECT_EQ(d.statistic_dim(), 2u);
    EXPECT_EQ(d.counts(1)[1], 4);
}

TEST(Dataset, BaseMeasure) {
    EXPECT_NEAR(Dataset::poisson({0, 3, 4}).log_base_measure(), -std::log(6.0) - std::log(24.0), 1e-13);
    EXPECT_NEAR(Dataset::multinomial({{2, 1, 1}}).log_base_measure(), std::log(12.0), 1e-13);
    EXPECT_NEAR(Dataset::normal({0.3, -2.0}).log_base_measure(), -std::log(2 * std::numbers::pi), 1e-14);
}

TEST(Dataset, SelectReorders) {
    const Dataset d = Dataset::poisson({5, 6, 7});
    const std::vector<std::size_t> order{2, 0};
    const Dataset s = d.select(order);
    ASSERT_EQ(s.size(), 2u);
    EXPECT_EQ(s.counts(0)[0], 7);
    EXPECT_EQ(s.counts(1)[0], 5);
}

TEST(Family, NamesRoundTrip) {
    for (Family f : {Family::poisson, Family::multinomial, Family::normal}) EXPECT_EQ(parse_family(to_string(f)), f);
    EXPECT_THROW(parse_family("binomial"), InvalidArgument);
}
