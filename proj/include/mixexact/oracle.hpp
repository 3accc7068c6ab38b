#pragma once

// Brute-force reference: every one of the k^n allocation vectors is visited and
// each posterior quantity is computed from its defining sum. Group statistics
// are recomputed from the raw observations for every allocation, so nothing
// here shares code with the lattice recursion; only the family_models layer is
// common to both paths.
//
// quadrature_log_evidence() is a second, fully independent route for small n:
// it integrates the completed likelihood against the prior numerically instead
// of using any conjugate normalising constant.

#include "mixexact/family_models.hpp"
#include "mixexact/posterior_engine.hpp"
#include "mixexact/stat_lattice.hpp"

#include <cstddef>
#include <cstdint>
#include <functional>
#include <iosfwd>
#include <span>
#include <vector>

namespace mixexact {

/// z_i in {0, ..., k-1}; printed 1-based.
using AllocationVector = std::vector<std::size_t>;

struct OracleOptions {
    std::uint64_t cap = std::uint64_t{1} << 24; ///< maximum k^n
    std::size_t threads = 1;                     ///< 0 = machine parallelism
};

/// k^n, throwing OracleCapExceeded when it is above `cap`.
std::uint64_t allocation_count(std::size_t n, std::size_t k, std::uint64_t cap);

/// All k^n allocation vectors in lexicographic order.
std::vector<AllocationVector> enumerate_allocations(std::size_t n, std::size_t k,
                                                    std::uint64_t cap = OracleOptions{}.cap);

/// The allocation with lexicographic rank `index`.
AllocationVector allocation_at(std::uint64_t index, std::size_t n, std::size_t k);

/// One class of allocations sharing a statistic. For discrete families `key`
/// uses the lattice layout (n_1, S_1, ..., n_k, S_k). For the normal family it
/// holds, per component, how many observations of each distinct input value
/// the component received, so no real-valued sums are ever compared.
struct OracleGroup {
    std::vector<std::int64_t> key;
    Multiplicity multiplicity;
    double log_weight = 0.0; ///< log of the summed unnormalised weights
    double weight = 0.0;     ///< normalised
};

struct OracleResult {
    PosteriorSummary summary;
    std::vector<OracleGroup> groups; ///< ascending key order
    double log_weight_sum = 0.0;     ///< without the data base measure
};

/// Unnormalised log weight of one allocation (multiplicity 1), from the group
/// statistics of `z`.
double allocation_log_weight(const Dataset& data, const MixturePrior& prior, std::span<const std::size_t> z);

/// Conjugate posterior of component j under allocation z.
ComponentPosterior allocation_posterior(const Dataset& data, const MixturePrior& prior,
                                        std::span<const std::size_t> z, std::size_t j);

OracleResult oracle_posterior(const Dataset& data, const MixturePrior& prior, const OracleOptions& options = {},
                              double threshold = 0.99);

/// Number of distinct statistics over all allocations into k components.
std::size_t oracle_distinct_statistics(const Dataset& data, std::size_t k, const OracleOptions& options = {});

/// Groups the discrete allocation statistics by key into a lattice-shaped
/// table: (key, multiplicity) in ascending key order.
std::vector<std::pair<std::vector<std::int64_t>, Multiplicity>>
oracle_statistic_table(const Dataset& data, std::size_t k, const OracleOptions& options = {});

/// sum_z omega(z) * density of component j's posterior under z. `coordinate`
/// as in component_posterior_density().
DensityGrid oracle_component_density(const Dataset& data, const MixturePrior& prior, std::size_t j,
                                     std::span<const double> grid, std::size_t coordinate = 0,
                                     const OracleOptions& options = {});

/// sum_z omega(z) * Beta(n_j + alpha_j, n - n_j + sum_{i != j} alpha_i).
DensityGrid oracle_weight_density(const Dataset& data, const MixturePrior& prior, std::size_t j,
                                  std::span<const double> grid, const OracleOptions& options = {});

/// CSV "allocation,statistic,log_weight", one row per allocation in
/// lexicographic order. Allocations are written as 1-based labels joined by
/// '-', statistics as key values joined by ';'.
void write_allocation_table(std::ostream& out, const Dataset& data, const MixturePrior& prior,
                            const OracleOptions& options = {});

/// log m(x) by numerical integration (Poisson and normal families). Each
/// allocation's group likelihoods are integrated against the component prior
/// densities, and for k = 2 the weight integral over p is also numerical.
double quadrature_log_evidence(const Dataset& data, const MixturePrior& prior, const OracleOptions& options = {});

} // namespace mixexact
