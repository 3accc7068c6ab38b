#pragma once

// Seeded synthetic datasets. Same seed, same sample, on a given standard
// library implementation.

#include <cstddef>
#include <cstdint>
#include <vector>

namespace mixexact {

std::vector<std::int64_t> poisson_sample(std::size_t n, double lambda, std::uint64_t seed);

/// `n1` draws from Poisson(lambda1) followed by `n2` draws from Poisson(lambda2).
std::vector<std::int64_t> poisson_mixture_sample(std::size_t n1, double lambda1, std::size_t n2, double lambda2,
                                                 std::uint64_t seed);

/// n multinomial rows over `probs[c].size()` categories. Each row picks a
/// component uniformly among `probs` and a total uniformly in [min_total, max_total].
std::vector<std::vector<std::int64_t>> multinomial_mixture_sample(std::size_t n,
                                                                  const std::vector<std::vector<double>>& probs,
                                                                  std::int64_t min_total, std::int64_t max_total,
                                                                  std::uint64_t seed);

} // namespace mixexact
