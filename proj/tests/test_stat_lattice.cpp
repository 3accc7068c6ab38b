#include "mixexact/errors.hpp"
#include "mixexact/oracle.hpp"
#include "mixexact/stat_lattice.hpp"
#include "mixexact/synthetic.hpp"

#include <gtest/gtest.h>

#include <algorithm>
#include <map>
#include <numeric>
#include <random>
#include <sstream>

using namespace mixexact;

namespace {

using Key = std::vector<std::int64_t>;

std::map<Key, Multiplicity> as_map(const StatisticLattice& lattice) {
    std::map<Key, Multiplicity> out;
    for (std::size_t i = 0; i < lattice.size(); ++i) {
        const auto key = lattice.key(i);
        out.emplace(Key(key.begin(), key.end()), lattice.multiplicity(i));
    }
    return out;
}

Dataset random_poisson(std::mt19937_64& rng, std::size_t n, double lambda) {
    std::poisson_distribution<std::int64_t> draw(lambda);
    std::vector<std::int64_t> xs(n);
    for (auto& x : xs) x = draw(rng);
    return Dataset::poisson(std::move(xs));
}

std::uint64_t binomial(std::uint64_t n, std::uint64_t r) {
    std::uint64_t out = 1;
    for (std::uint64_t i = 1; i <= r; ++i) out = out * (n - r + i) / i;
    return out;
}

} // namespace

TEST(Init, PoissonEntries) {
    const std::vector<std::int64_t> two{2};
    const auto lattice = StatisticLattice::init(Family::poisson, two, 2);
    EXPECT_EQ(as_map(lattice), (std::map<Key, Multiplicity>{{{1, 2, 0, 0}, 1}, {{0, 0, 1, 2}, 1}}));
    const std::vector<std::int64_t> zero{0};
    EXPECT_EQ(as_map(StatisticLattice::init(Family::poisson, zero, 1)), (std::map<Key, Multiplicity>{{{1, 0}, 1}}));
}

TEST(Init, MultinomialEntries) {
    const std::vector<std::int64_t> obs{3, 1};
    const auto lattice = StatisticLattice::init(Family::multinomial, obs, 2);
    EXPECT_EQ(as_map(lattice),
              (std::map<Key, Multiplicity>{{{1, 3, 1, 0, 0, 0}, 1}, {{0, 0, 0, 1, 3, 1}, 1}}));
}

TEST(Init, RejectsZeroComponents) {
    const std::vector<std::int64_t> zero{0};
    EXPECT_THROW(StatisticLattice::init(Family::poisson, zero, 0), InvalidArgument);
}

TEST(Extend, IdenticalObservationsGiveBinomialMultiplicities) {
    const std::vector<std::int64_t> zero{0};
    const auto lattice = extend(StatisticLattice::init(Family::poisson, zero, 2), zero, {});
    EXPECT_EQ(as_map(lattice),
              (std::map<Key, Multiplicity>{{{2, 0, 0, 0}, 1}, {{1, 0, 1, 0}, 2}, {{0, 0, 2, 0}, 1}}));
}

TEST(Extend, SingleComponentKeepsOneEntry) {
    const auto lattice = build(Dataset::poisson({4, 1, 7, 0}), 1);
    ASSERT_EQ(lattice.size(), 1u);
    EXPECT_EQ(Key(lattice.key(0).begin(), lattice.key(0).end()), (Key{4, 12}));
    EXPECT_EQ(lattice.multiplicity(0), 1);
}

TEST(Extend, BudgetExceededReportsEntryCount) {
    const auto data = Dataset::poisson({0, 1, 2, 3, 4, 5, 6, 7});
    try {
        build(data, 2, LatticeOptions{10, 1, LatticeBackend::hash_merge});
        FAIL() << "expected ResourceLimit";
    } catch (const ResourceLimit& e) {
        EXPECT_GT(e.reached(), 10u);
    }
    EXPECT_THROW(build(data, 2, LatticeOptions{10, 1, LatticeBackend::sort_merge}), ResourceLimit);
}

TEST(Build, Examples) {
    const auto triple = build(Dataset::poisson({0}), 3);
    EXPECT_EQ(triple.size(), 3u);
    for (std::size_t i = 0; i < triple.size(); ++i) EXPECT_EQ(triple.multiplicity(i), 1);

    const auto pair = build(Dataset::poisson({0, 0}), 2);
    EXPECT_EQ(pair.distinct_count(), 3u);
    EXPECT_EQ(pair.total_count(), 4);

    const auto worked = build(Dataset::poisson({0, 0, 0, 1, 2, 2, 4}), 2);
    EXPECT_EQ(worked.total_count(), 128);
}

TEST(Build, EqualDrawsGiveCompositionCount) {
    for (std::size_t k = 1; k <= 4; ++k) {
        const auto lattice = build(Dataset::poisson(std::vector<std::int64_t>(10, 3)), k);
        EXPECT_EQ(lattice.size(), binomial(10 + k - 1, k - 1)) << "k=" << k;
    }
}

TEST(Build, NormalFamilyIsRefused) {
    EXPECT_THROW(build(Dataset::normal({0.1, 0.2}), 2), UnsupportedFamily);
}

TEST(Build, MultiplicitiesBeyondSixtyFourBits) {
    const auto lattice = build(Dataset::poisson(std::vector<std::int64_t>(40, 1)), 4);
    EXPECT_EQ(lattice.size(), binomial(43, 3));
    EXPECT_EQ(lattice.total_count(), power(4, 40));
    EXPECT_GT(lattice.total_count(), Multiplicity(std::numeric_limits<std::uint64_t>::max()));
}

TEST(Build, SeededPoissonTenMatchesOracleCount) {
    const auto data = Dataset::poisson(poisson_sample(10, 1.0, 2024));
    EXPECT_EQ(build(data, 2).distinct_count(), oracle_distinct_statistics(data, 2));
}

TEST(Invariant, ConservationAfterEveryExtend) {
    std::mt19937_64 rng(5);
    for (int trial = 0; trial < 20; ++trial) {
        const std::size_t k = 1 + trial % 4;
        const auto data = random_poisson(rng, 12, 2.0);
        auto lattice = StatisticLattice::init(Family::poisson, data.counts(0), k);
        for (std::size_t i = 1; i < data.size(); ++i) {
            lattice = extend(lattice, data.counts(i), {});
            ASSERT_EQ(lattice.total_count(), power(k, i + 1));
            ASSERT_EQ(lattice.observations(), i + 1);
        }
    }
}

TEST(Invariant, PermutationInvariance) {
    std::mt19937_64 rng(17);
    for (int trial = 0; trial < 10; ++trial) {
        const auto data = random_poisson(rng, 9, 3.0);
        std::vector<std::size_t> order(data.size());
        std::iota(order.begin(), order.end(), 0);
        std::shuffle(order.begin(), order.end(), rng);
        EXPECT_EQ(build(data, 3), build(data.select(order), 3));
    }
}

TEST(Invariant, RelabelingIsABijection) {
    const auto lattice = build(Dataset::multinomial({{1, 2, 0}, {0, 1, 3}, {2, 2, 1}, {1, 0, 1}, {3, 0, 0}}), 3);
    const std::size_t block = 1 + lattice.statistic_dim();
    const std::vector<std::size_t> perm{2, 0, 1};
    const auto original = as_map(lattice);
    std::map<Key, Multiplicity> relabelled;
    for (const auto& [key, m] : original) {
        Key moved(key.size());
        for (std::size_t j = 0; j < perm.size(); ++j) {
            std::copy_n(key.begin() + j * block, block, moved.begin() + perm[j] * block);
        }
        relabelled.emplace(moved, m);
    }
    EXPECT_EQ(relabelled, original);
}

TEST(Invariant, MatchesOracleGrouping) {
    std::mt19937_64 rng(23);
    for (std::size_t k = 1; k <= 3; ++k) {
        for (std::size_t n = 1; n <= 8; ++n) {
            const auto data = random_poisson(rng, n, 2.5);
            const auto lattice = build(data, k);
            const auto table = oracle_statistic_table(data, k);
            ASSERT_EQ(lattice.size(), table.size());
            for (std::size_t i = 0; i < table.size(); ++i) {
                EXPECT_TRUE(std::ranges::equal(lattice.key(i), table[i].first));
                EXPECT_EQ(lattice.multiplicity(i), table[i].second);
            }
        }
    }
    const auto rows = Dataset::multinomial({{1, 2, 0}, {0, 1, 3}, {2, 2, 1}, {1, 0, 1}, {3, 0, 0}, {0, 2, 0}});
    const auto lattice = build(rows, 3);
    const auto table = oracle_statistic_table(rows, 3);
    ASSERT_EQ(lattice.size(), table.size());
    for (std::size_t i = 0; i < table.size(); ++i) {
        EXPECT_TRUE(std::ranges::equal(lattice.key(i), table[i].first));
        EXPECT_EQ(lattice.multiplicity(i), table[i].second);
    }
}

TEST(Invariant, MonotoneGrowthForNestedData) {
    const auto full = poisson_sample(14, 2.0, 99);
    std::size_t previous = 0;
    for (std::size_t n = 1; n <= full.size(); ++n) {
        const auto lattice = build(Dataset::poisson({full.begin(), full.begin() + static_cast<std::ptrdiff_t>(n)}), 2);
        EXPECT_GE(lattice.distinct_count(), previous);
        previous = lattice.distinct_count();
    }
}

TEST(Backends, AgreeAndIgnoreThreadCount) {
    const auto data = Dataset::poisson(poisson_sample(14, 3.0, 7));
    const auto reference = build(data, 3, {5'000'000, 1, LatticeBackend::hash_merge});
    for (std::size_t threads : {1u, 2u, 3u, 8u}) {
        EXPECT_EQ(build(data, 3, {5'000'000, threads, LatticeBackend::hash_merge}), reference);
        EXPECT_EQ(build(data, 3, {5'000'000, threads, LatticeBackend::sort_merge}), reference);
    }
}

TEST(Lookup, FindLocatesEveryKey) {
    const auto lattice = build(Dataset::poisson({0, 1, 2, 2}), 2);
    for (std::size_t i = 0; i < lattice.size(); ++i) EXPECT_EQ(lattice.find(lattice.key(i)), i);
    const Key missing{9, 9, 9, 9};
    EXPECT_EQ(lattice.find(missing), lattice.size());
}

TEST(Dump, Format) {
    const auto lattice = build(Dataset::poisson({0, 0}), 2);
    EXPECT_EQ(lattice.dump(), "family=poisson\tk=2\tn=2\tdim=1\n"
                              "0\t0\t2\t0\t1\n"
                              "1\t0\t1\t0\t2\n"
                              "2\t0\t0\t0\t1\n");
}

TEST(Dump, RoundTripIsByteIdentical) {
    for (const auto& data : {Dataset::poisson(poisson_sample(12, 4.0, 3)),
                             Dataset::multinomial({{1, 2, 0}, {0, 1, 3}, {2, 2, 1}, {1, 0, 1}})}) {
        const auto lattice = build(data, 3);
        const std::string text = lattice.dump();
        std::istringstream in(text);
        const auto loaded = StatisticLattice::load(in);
        EXPECT_EQ(loaded, lattice);
        EXPECT_EQ(loaded.dump(), text);
    }
}

TEST(Dump, LoadRejectsCorruptInput) {
    const std::string good = build(Dataset::poisson({0, 1}), 2).dump();
    auto load = [](const std::string& text) {
        std::istringstream in(text);
        return StatisticLattice::load(in);
    };
    EXPECT_NO_THROW(load(good));
    EXPECT_THROW(load("family=poisson\tk=2\tn=2\tdim=1\n0\t0\t2\t1\t1\n"), InvalidArgument);
    EXPECT_THROW(load("garbage\n"), InvalidArgument);
    std::string tampered = good;
    tampered.back() = '\n';
    tampered[tampered.size() - 2] = '7';
    EXPECT_THROW(load(tampered), InvalidArgument);
}
