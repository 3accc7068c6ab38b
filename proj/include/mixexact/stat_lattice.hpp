#pragma once

// Distinct allocation statistics with exact multiplicities.
//
// A key is the flat vector (n_1, S_1, ..., n_k, S_k) where each S_j is the
// statistic_dim-wide sum of R(x) over the observations allocated to component
// j. Entries are held in lexicographic key order, so iteration order, dumps and
// every downstream reduction are deterministic.
//
// Extending by one observation y maps each entry to k successors
// (n_j + 1, S_j + y in slot j) and sums the multiplicities of colliding keys.

#include "mixexact/family_models.hpp"

#include <boost/multiprecision/cpp_int.hpp>

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

namespace mixexact {

using Multiplicity = boost::multiprecision::cpp_int;

/// Natural log of a nonnegative big integer (-inf for zero), accurate to double
/// precision even beyond the double range.
double log_multiplicity(const Multiplicity& m);

/// k^n as an exact integer.
Multiplicity power(std::size_t k, std::size_t n);

enum class LatticeBackend {
    hash_merge, ///< per-worker hash maps merged by multiplicity addition
    sort_merge  ///< sort all successors and collapse equal runs
};

struct LatticeOptions {
    std::size_t entry_budget = 5'000'000;
    std::size_t threads = 1; ///< 0 = machine parallelism
    LatticeBackend backend = LatticeBackend::hash_merge;
};

class StatisticLattice {
public:
    /// The single all-zero key with multiplicity 1 (no observations absorbed).
    static StatisticLattice empty(Family family, std::size_t statistic_dim, std::size_t k);

    /// One entry per component: the first observation allocated to slot j.
    static StatisticLattice init(Family family, std::span<const std::int64_t> first_obs, std::size_t k);

    Family family() const noexcept { return family_; }
    std::size_t components() const noexcept { return k_; }
    std::size_t observations() const noexcept { return n_; }
    std::size_t statistic_dim() const noexcept { return dim_; }
    std::size_t key_width() const noexcept { return k_ * (1 + dim_); }

    std::size_t size() const noexcept { return multiplicities_.size(); }
    std::size_t distinct_count() const noexcept { return size(); }
    Multiplicity total_count() const;

    std::span<const std::int64_t> key(std::size_t i) const {
        return std::span<const std::int64_t>(keys_).subspan(i * key_width(), key_width());
    }
    const Multiplicity& multiplicity(std::size_t i) const { return multiplicities_[i]; }

    /// Group count n_j of entry i.
    std::int64_t count(std::size_t i, std::size_t j) const { return keys_[i * key_width() + j * (1 + dim_)]; }
    /// Summed statistic S_j of entry i.
    std::span<const std::int64_t> sums(std::size_t i, std::size_t j) const {
        return key(i).subspan(j * (1 + dim_) + 1, dim_);
    }

    /// Index of `key`, or size() when absent.
    std::size_t find(std::span<const std::int64_t> key) const;

    /// Text form: a header line, then one tab-separated line per entry holding
    /// the key followed by the decimal multiplicity.
    void dump(std::ostream& out) const;
    std::string dump() const;
    static StatisticLattice load(std::istream& in);

    friend bool operator==(const StatisticLattice&, const StatisticLattice&) = default;

private:
    StatisticLattice(Family family, std::size_t k, std::size_t n, std::size_t dim)
        : family_(family), k_(k), n_(n), dim_(dim) {}

    friend StatisticLattice extend(const StatisticLattice&, std::span<const std::int64_t>, const LatticeOptions&);

    Family family_;
    std::size_t k_;
    std::size_t n_;
    std::size_t dim_;
    std::vector<std::int64_t> keys_;
    std::vector<Multiplicity> multiplicities_;
};

/// Absorbs one observation. Throws ResourceLimit when the successor set would
/// exceed options.entry_budget.
StatisticLattice extend(const StatisticLattice& lattice, std::span<const std::int64_t> obs,
                        const LatticeOptions& options = {});

/// init on the first observation, then extend over the rest. Normal data is
/// refused with UnsupportedFamily.
StatisticLattice build(const Dataset& data, std::size_t k, const LatticeOptions& options = {});

} // namespace mixexact
