#include "mixexact/errors.hpp"
#include "mixexact/oracle.hpp"
#include "mixexact/stat_lattice.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <set>
#include <sstream>

using namespace mixexact;

namespace {

MixturePrior poisson_prior(std::vector<std::pair<double, double>> ab) {
    MixturePrior p;
    for (auto [a, b] : ab) p.components.emplace_back(PoissonPrior{a, b});
    p.alpha.assign(ab.size(), 1.0);
    return p;
}

MixturePrior nig_prior(std::size_t k) { return MixturePrior::symmetric(k, 1.0, NormalPrior{0.0, 0.1, 4.0, 4.0}); }

} // namespace

TEST(Enumerate, CountsAndOrder) {
    EXPECT_EQ(enumerate_allocations(2, 2).size(), 4u);
    EXPECT_EQ(enumerate_allocations(1, 3).size(), 3u);
    const auto all = enumerate_allocations(3, 2);
    ASSERT_EQ(all.size(), 8u);
    EXPECT_EQ(all.front(), (AllocationVector{0, 0, 0}));
    EXPECT_EQ(all[1], (AllocationVector{0, 0, 1}));
    EXPECT_EQ(all.back(), (AllocationVector{1, 1, 1}));
    EXPECT_TRUE(std::ranges::is_sorted(all));
    EXPECT_EQ(std::set<AllocationVector>(all.begin(), all.end()).size(), 8u);
    for (std::size_t i = 0; i < all.size(); ++i) EXPECT_EQ(allocation_at(i, 3, 2), all[i]);
}

TEST(Enumerate, GroupingReproducesLattice) {
    const auto data = Dataset::poisson({2, 0, 2});
    const auto lattice = build(data, 2);
    const auto table = oracle_statistic_table(data, 2);
    ASSERT_EQ(table.size(), lattice.size());
    for (std::size_t i = 0; i < table.size(); ++i) {
        EXPECT_TRUE(std::ranges::equal(table[i].first, lattice.key(i)));
        EXPECT_EQ(table[i].second, lattice.multiplicity(i));
    }
}

TEST(Enumerate, CapIsEnforced) {
    EXPECT_EQ(allocation_count(10, 2, 1024), 1024u);
    EXPECT_THROW(allocation_count(11, 2, 1024), OracleCapExceeded);
    EXPECT_THROW(allocation_count(64, 3, std::uint64_t{1} << 24), OracleCapExceeded);
    EXPECT_THROW(oracle_posterior(Dataset::poisson(std::vector<std::int64_t>(25, 1)), poisson_prior({{1, 1}, {1, 1}})),
                 OracleCapExceeded);
}

TEST(DistinctStatistics, Examples) {
    EXPECT_EQ(oracle_distinct_statistics(Dataset::poisson({0, 0}), 2), 3u);
    EXPECT_EQ(oracle_distinct_statistics(Dataset::poisson({0, 1}), 2), 4u);
    // ground truth for the seven-observation worked example; not the 41 quoted alongside 2^8
    EXPECT_EQ(oracle_distinct_statistics(Dataset::poisson({0, 0, 0, 1, 2, 2, 4}), 2), 42u);
}

TEST(Posterior, SingleObservationSymmetric) {
    const auto r = oracle_posterior(Dataset::poisson({0}), poisson_prior({{1, 1}, {1, 1}}));
    ASSERT_EQ(r.groups.size(), 2u);
    EXPECT_DOUBLE_EQ(r.groups[0].weight, 0.5);
    EXPECT_DOUBLE_EQ(r.groups[1].weight, 0.5);
    EXPECT_DOUBLE_EQ(r.summary.expected_weights[0], 0.5);
}

TEST(Posterior, WorkedExampleMatchesExactRationalValues) {
    const auto r = oracle_posterior(Dataset::poisson({0, 0, 0, 1, 2, 2, 4}), poisson_prior({{1, 1}, {1, 10}}));
    EXPECT_NEAR(r.summary.log_evidence, -12.490069462412716369, 1e-12);
    EXPECT_NEAR(r.summary.expected_weights[0], 0.64857538503906945311, 1e-13);
    EXPECT_NEAR(r.summary.expected_means[1][0], 0.10289790365635343768, 1e-14);
    EXPECT_EQ(r.summary.distinct_statistics, 42u);
    Multiplicity total = 0;
    for (const auto& g : r.groups) total += g.multiplicity;
    EXPECT_EQ(total, 128);
}

TEST(Posterior, ThreadCountDoesNotChangeResults) {
    const auto data = Dataset::poisson({3, 1, 4, 1, 5, 9, 2, 6, 5});
    const auto prior = poisson_prior({{1, 1}, {2, 1}, {1, 10}});
    const auto one = oracle_posterior(data, prior, {OracleOptions{}.cap, 1});
    const auto many = oracle_posterior(data, prior, {OracleOptions{}.cap, 7});
    EXPECT_EQ(one.summary.log_evidence, many.summary.log_evidence);
    EXPECT_EQ(one.summary.expected_weights, many.summary.expected_weights);
    ASSERT_EQ(one.groups.size(), many.groups.size());
    for (std::size_t i = 0; i < one.groups.size(); ++i) EXPECT_EQ(one.groups[i].weight, many.groups[i].weight);
}

TEST(Normal, SymmetricPairSplitsWeights) {
    const auto r = oracle_posterior(Dataset::normal({-1.0, 1.0}), nig_prior(2));
    EXPECT_NEAR(r.summary.expected_weights[0], 0.5, 1e-15);
    EXPECT_NEAR(r.summary.expected_weights[1], 0.5, 1e-15);
}

TEST(Normal, SingleComponentReproducesConjugateHyperparameters) {
    const std::vector<double> xs{-1.2, 0.3, 2.5, 0.9};
    const NormalPrior p{0.5, 0.25, 3.0, 2.0};
    MixturePrior prior{{1.0}, {p}};
    const auto data = Dataset::normal(xs);
    const auto post = std::get<NormalPrior>(allocation_posterior(data, prior, AllocationVector(4, 0), 0));
    // textbook form: b' = b + sum x^2 + c xi^2 - (c + n) xi'^2
    double sum = 0.0, sq = 0.0;
    for (double x : xs) {
        sum += x;
        sq += x * x;
    }
    const double c = p.precision_scale + 4.0;
    const double xi = (p.precision_scale * p.location + sum) / c;
    EXPECT_NEAR(post.precision_scale, c, 1e-12);
    EXPECT_NEAR(post.location, xi, 1e-12);
    EXPECT_NEAR(post.shape, p.shape + 4.0, 1e-12);
    EXPECT_NEAR(post.scale, p.scale + sq + p.precision_scale * p.location * p.location - c * xi * xi, 1e-12);
}

TEST(Normal, EvidenceMatchesIndependentQuadrature) {
    // 2-D quadrature over (mu, tau) per allocation at 20 digits
    const auto data = Dataset::normal({-1.2, 0.3, 2.5});
    EXPECT_NEAR(oracle_posterior(data, nig_prior(2)).summary.log_evidence, -7.44528032884167, 1e-12);
    EXPECT_NEAR(oracle_posterior(data, nig_prior(1)).summary.log_evidence, -7.83855435033934, 1e-12);
    EXPECT_LE(std::abs(std::expm1(quadrature_log_evidence(data, nig_prior(2)) - -7.44528032884167)), 1e-6);
}

TEST(Normal, GroupsAreReachedBySetPartitions) {
    const auto data = Dataset::normal({0.1, 0.1, 2.0});
    const auto r = oracle_posterior(data, nig_prior(2));
    // component counts of value classes {0.1 x2, 2.0}: (a, b) with a in 0..2, b in 0..1
    EXPECT_EQ(r.groups.size(), 6u);
    Multiplicity total = 0;
    for (const auto& g : r.groups) total += g.multiplicity;
    EXPECT_EQ(total, 8);
}

TEST(Quadrature, PoissonAgreesWithClosedForms) {
    for (const auto& data : {Dataset::poisson({0}), Dataset::poisson({3}), Dataset::poisson({0, 1, 3}),
                             Dataset::poisson({2, 2, 0, 5})}) {
        for (const auto& prior : {poisson_prior({{1, 1}}), poisson_prior({{1, 1}, {1, 10}})}) {
            const double exact = oracle_posterior(data, prior).summary.log_evidence;
            EXPECT_LE(std::abs(std::expm1(quadrature_log_evidence(data, prior) - exact)), 1e-6);
        }
    }
    EXPECT_THROW(quadrature_log_evidence(Dataset::multinomial({{1, 1}}), MixturePrior::symmetric(1, 1.0, MultinomialPrior{{1, 1}})),
                 UnsupportedFamily);
}

TEST(Table, CsvLayout) {
    std::ostringstream out;
    write_allocation_table(out, Dataset::poisson({0, 2}), poisson_prior({{1, 1}, {1, 1}}));
    std::istringstream in(out.str());
    std::string line;
    std::getline(in, line);
    EXPECT_EQ(line, "allocation,statistic,log_weight");
    std::getline(in, line);
    EXPECT_EQ(line.rfind("1-1,2;2;0;0,", 0), 0u) << line;
    std::size_t rows = 1;
    while (std::getline(in, line)) ++rows;
    EXPECT_EQ(rows, 4u);
}

TEST(Density, ComponentAndWeightMixtures) {
    const auto data = Dataset::poisson({1});
    const auto prior = poisson_prior({{1, 1}, {1, 1}});
    const std::vector<double> grid{0.25, 0.5, 0.75};
    const auto d = oracle_component_density(data, prior, 0, grid);
    for (std::size_t i = 0; i < grid.size(); ++i) {
        const double t = grid[i];
        EXPECT_NEAR(d.values[i], 0.5 * density(PoissonPrior{2, 2}, t) + 0.5 * density(PoissonPrior{1, 1}, t), 1e-15);
    }
    const auto w = oracle_weight_density(data, prior, 0, grid);
    for (std::size_t i = 0; i < grid.size(); ++i) {
        const double q = grid[i];
        EXPECT_NEAR(w.values[i], 0.5 * 2 * q + 0.5 * 2 * (1 - q), 1e-14);
    }
}
