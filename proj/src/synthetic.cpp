#include "mixexact/synthetic.hpp"

#include "mixexact/errors.hpp"

#include <random>

namespace mixexact {

std::vector<std::int64_t> poisson_sample(std::size_t n, double lambda, std::uint64_t seed) {
    return poisson_mixture_sample(n, lambda, 0, lambda, seed);
}

std::vector<std::int64_t> poisson_mixture_sample(std::size_t n1, double lambda1, std::size_t n2, double lambda2,
                                                 std::uint64_t seed) {
    if (!(lambda1 > 0.0) || !(lambda2 > 0.0)) throw InvalidArgument("Poisson means must be > 0");
    std::mt19937_64 rng(seed);
    std::vector<std::int64_t> out;
    out.reserve(n1 + n2);
    std::poisson_distribution<std::int64_t> first(lambda1);
    for (std::size_t i = 0; i < n1; ++i) out.push_back(first(rng));
    std::poisson_distribution<std::int64_t> second(lambda2);
    for (std::size_t i = 0; i < n2; ++i) out.push_back(second(rng));
    return out;
}

std::vector<std::vector<std::int64_t>> multinomial_mixture_sample(std::size_t n,
                                                                  const std::vector<std::vector<double>>& probs,
                                                                  std::int64_t min_total, std::int64_t max_total,
                                                                  std::uint64_t seed) {
    if (probs.empty() || probs.front().size() < 2) throw InvalidArgument("need at least one 2-category component");
    if (min_total < 1 || max_total < min_total) throw InvalidArgument("need 1 <= min_total <= max_total");
    std::mt19937_64 rng(seed);
    std::uniform_int_distribution<std::size_t> pick(0, probs.size() - 1);
    std::uniform_int_distribution<std::int64_t> total(min_total, max_total);
    std::vector<std::vector<std::int64_t>> out;
    out.reserve(n);
    for (std::size_t i = 0; i < n; ++i) {
        const auto& p = probs[pick(rng)];
        std::discrete_distribution<std::size_t> category(p.begin(), p.end());
        std::vector<std::int64_t> row(p.size(), 0);
        const std::int64_t d = total(rng);
        for (std::int64_t t = 0; t < d; ++t) ++row[category(rng)];
        out.push_back(std::move(row));
    }
    return out;
}

} // namespace mixexact
