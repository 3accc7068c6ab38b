#include "mixexact/oracle.hpp"

#include "mixexact/errors.hpp"
#include "mixexact/parallel.hpp"

#include <boost/math/quadrature/exp_sinh.hpp>
#include <boost/math/quadrature/sinh_sinh.hpp>
#include <boost/math/quadrature/tanh_sinh.hpp>
#include <fmt/format.h>

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <numeric>
#include <ostream>

namespace mixexact {

namespace {

constexpr double kLogTwoPi = 1.8378770664093454835606594728112;

/// Statistic of group j under z, summed directly from the observations.
ComponentPosterior group_posterior(const Dataset& data, const ComponentPrior& prior,
                                   std::span<const std::size_t> z, std::size_t j) {
    switch (data.family()) {
    case Family::poisson: {
        PoissonStatistic stat;
        for (std::size_t i = 0; i < z.size(); ++i) {
            if (z[i] != j) continue;
            ++stat.count;
            stat.sum += data.counts(i)[0];
        }
        return conjugate_update(std::get<PoissonPrior>(prior), stat);
    }
    case Family::multinomial: {
        MultinomialStatistic stat{0, std::vector<std::int64_t>(data.statistic_dim(), 0)};
        for (std::size_t i = 0; i < z.size(); ++i) {
            if (z[i] != j) continue;
            ++stat.count;
            const auto row = data.counts(i);
            for (std::size_t u = 0; u < row.size(); ++u) stat.sums[u] += row[u];
        }
        return conjugate_update(std::get<MultinomialPrior>(prior), stat);
    }
    case Family::normal: {
        NormalStatistic stat;
        for (std::size_t i = 0; i < z.size(); ++i) {
            if (z[i] != j) continue;
            const double x = data.value(i);
            ++stat.count;
            stat.sum += x;
            stat.sum_squares += x * x;
        }
        return conjugate_update(std::get<NormalPrior>(prior), stat);
    }
    }
    throw InvalidArgument("unknown family");
}

void check_compatible(const Dataset& data, const MixturePrior& prior) {
    prior.validate();
    if (data.empty()) throw InvalidArgument("oracle needs at least one observation");
    if (data.family() != prior.family()) throw InvalidArgument("dataset and prior families differ");
    if (data.family() == Family::multinomial &&
        std::get<MultinomialPrior>(prior.components.front()).concentration.size() != data.statistic_dim()) {
        throw InvalidArgument("multinomial prior and data disagree on the number of categories");
    }
}

/// Per-observation class ids for the normal grouping key: equal input values
/// share a class; classes are numbered in ascending value order.
std::vector<std::size_t> value_classes(const Dataset& data, std::size_t& class_count) {
    std::vector<double> distinct = data.values();
    std::sort(distinct.begin(), distinct.end());
    distinct.erase(std::unique(distinct.begin(), distinct.end()), distinct.end());
    class_count = distinct.size();
    std::vector<std::size_t> ids(data.size());
    for (std::size_t i = 0; i < data.size(); ++i) {
        ids[i] = static_cast<std::size_t>(std::lower_bound(distinct.begin(), distinct.end(), data.value(i)) -
                                          distinct.begin());
    }
    return ids;
}

class KeyMaker {
public:
    KeyMaker(const Dataset& data, std::size_t k) : data_(data), k_(k) {
        if (data.family() == Family::normal) classes_ = value_classes(data, class_count_);
    }

    std::vector<std::int64_t> operator()(std::span<const std::size_t> z) const {
        if (data_.family() == Family::normal) {
            std::vector<std::int64_t> key(k_ * class_count_, 0);
            for (std::size_t i = 0; i < z.size(); ++i) ++key[z[i] * class_count_ + classes_[i]];
            return key;
        }
        const std::size_t dim = data_.statistic_dim();
        std::vector<std::int64_t> key(k_ * (1 + dim), 0);
        for (std::size_t i = 0; i < z.size(); ++i) {
            std::int64_t* block = key.data() + z[i] * (1 + dim);
            block[0] += 1;
            const auto row = data_.counts(i);
            for (std::size_t u = 0; u < dim; ++u) block[1 + u] += row[u];
        }
        return key;
    }

private:
    const Dataset& data_;
    std::size_t k_;
    std::vector<std::size_t> classes_;
    std::size_t class_count_ = 0;
};

/// Unnormalised log weights of every allocation, indexed by lexicographic rank.
std::vector<double> all_log_weights(const Dataset& data, const MixturePrior& prior, const OracleOptions& options) {
    const std::uint64_t total = allocation_count(data.size(), prior.size(), options.cap);
    std::vector<double> lw(total);
    parallel_chunks(total, resolve_threads(options.threads), [&](std::size_t, std::size_t begin, std::size_t end) {
        for (std::size_t idx = begin; idx < end; ++idx) {
            const auto z = allocation_at(idx, data.size(), prior.size());
            lw[idx] = allocation_log_weight(data, prior, z);
        }
    });
    return lw;
}

struct Normalised {
    std::vector<double> weights;
    double log_sum = 0.0;
};

Normalised normalise(const std::vector<double>& lw) {
    Normalised out;
    const double top = *std::max_element(lw.begin(), lw.end());
    double total = 0.0;
    out.weights.resize(lw.size());
    for (std::size_t i = 0; i < lw.size(); ++i) {
        out.weights[i] = std::exp(lw[i] - top);
        total += out.weights[i];
    }
    for (double& w : out.weights) w /= total;
    out.log_sum = top + std::log(total);
    return out;
}

template <class Pdf>
DensityGrid weighted_density(const Dataset& data, const MixturePrior& prior, std::span<const double> grid,
                             const OracleOptions& options, Pdf pdf) {
    if (grid.empty()) throw InvalidArgument("density grid is empty");
    const auto norm = normalise(all_log_weights(data, prior, options));
    DensityGrid out{{grid.begin(), grid.end()}, std::vector<double>(grid.size(), 0.0)};
    for (std::size_t idx = 0; idx < norm.weights.size(); ++idx) {
        const auto z = allocation_at(idx, data.size(), prior.size());
        for (std::size_t g = 0; g < grid.size(); ++g) out.values[g] += norm.weights[idx] * pdf(z, grid[g]);
    }
    return out;
}

double log_dirichlet_part(std::span<const double> alpha, std::span<const std::size_t> counts) {
    double total = 0.0;
    double n = 0.0;
    double acc = 0.0;
    for (std::size_t j = 0; j < alpha.size(); ++j) {
        total += alpha[j];
        n += static_cast<double>(counts[j]);
        acc += log_gamma(static_cast<double>(counts[j]) + alpha[j]) - log_gamma(alpha[j]);
    }
    return acc + log_gamma(total) - log_gamma(n + total);
}

/// log of the integral over p in (0, 1) of p^{n1} (1-p)^{n2} Beta(p | a1, a2).
double log_two_weight_integral(double a1, double a2, std::size_t n1, std::size_t n2) {
    const double log_norm = log_gamma(a1 + a2) - log_gamma(a1) - log_gamma(a2);
    auto f = [&](double p) {
        if (!(p > 0.0 && p < 1.0)) return 0.0;
        return std::exp(log_norm + (static_cast<double>(n1) + a1 - 1.0) * std::log(p) +
                        (static_cast<double>(n2) + a2 - 1.0) * std::log1p(-p));
    };
    boost::math::quadrature::tanh_sinh<double> integrator;
    return std::log(integrator.integrate(f, 0.0, 1.0));
}

double log_poisson_group_marginal(const Dataset& data, const PoissonPrior& prior, std::span<const std::size_t> z,
                                  std::size_t j) {
    std::vector<std::int64_t> xs;
    for (std::size_t i = 0; i < z.size(); ++i) {
        if (z[i] == j) xs.push_back(data.counts(i)[0]);
    }
    if (xs.empty()) return 0.0;
    auto log_integrand = [&](double lambda) {
        double acc = prior.shape * std::log(prior.rate) - log_gamma(prior.shape) +
                     (prior.shape - 1.0) * std::log(lambda) - prior.rate * lambda;
        for (std::int64_t x : xs) {
            acc += -lambda - log_gamma(static_cast<double>(x) + 1.0);
            if (x > 0) acc += static_cast<double>(x) * std::log(lambda);
        }
        return acc;
    };
    auto f = [&](double lambda) { return lambda > 0.0 ? std::exp(log_integrand(lambda)) : 0.0; };
    boost::math::quadrature::exp_sinh<double> integrator;
    return std::log(integrator.integrate(f, 0.0, std::numeric_limits<double>::infinity()));
}

double log_normal_group_marginal(const Dataset& data, const NormalPrior& prior, std::span<const std::size_t> z,
                                 std::size_t j) {
    std::vector<double> xs;
    for (std::size_t i = 0; i < z.size(); ++i) {
        if (z[i] == j) xs.push_back(data.value(i));
    }
    if (xs.empty()) return 0.0;
    const double n = static_cast<double>(xs.size());
    const double c = prior.precision_scale;
    const double half_a = 0.5 * prior.shape;
    const double half_b = 0.5 * prior.scale;
    // Inner integrals are taken in a variable centred on the conditional mode
    // of mu so the quadrature nodes sit where the integrand lives.
    const double centre = (c * prior.location + std::accumulate(xs.begin(), xs.end(), 0.0)) / (c + n);

    auto log_joint = [&](double mu, double tau) {
        double acc = half_a * std::log(half_b) - log_gamma(half_a) + (half_a - 1.0) * std::log(tau) - half_b * tau;
        acc += 0.5 * (std::log(c * tau) - kLogTwoPi) - 0.5 * c * tau * (mu - prior.location) * (mu - prior.location);
        for (double x : xs) acc += 0.5 * (std::log(tau) - kLogTwoPi) - 0.5 * tau * (x - mu) * (x - mu);
        return acc;
    };
    auto inner = [&](double tau) {
        if (!(tau > 0.0) || !std::isfinite(tau)) return 0.0;
        const double spread = 1.0 / std::sqrt(tau * (c + n));
        auto g = [&](double y) { return std::exp(log_joint(centre + spread * y, tau)) * spread; };
        boost::math::quadrature::sinh_sinh<double> integrator;
        return integrator.integrate(g);
    };
    boost::math::quadrature::exp_sinh<double> outer;
    return std::log(outer.integrate(inner, 0.0, std::numeric_limits<double>::infinity()));
}

std::string join_key(std::span<const std::int64_t> key) {
    std::string out;
    for (std::size_t c = 0; c < key.size(); ++c) {
        if (c) out += ';';
        out += std::to_string(key[c]);
    }
    return out;
}

} // namespace

std::uint64_t allocation_count(std::size_t n, std::size_t k, std::uint64_t cap) {
    if (k < 1) throw InvalidArgument("number of components must be >= 1");
    std::uint64_t total = 1;
    for (std::size_t i = 0; i < n; ++i) {
        if (total > cap / k) {
            throw OracleCapExceeded("k^n for k=" + std::to_string(k) + ", n=" + std::to_string(n) +
                                    " exceeds the oracle cap of " + std::to_string(cap));
        }
        total *= k;
    }
    if (total > cap) throw OracleCapExceeded("k^n exceeds the oracle cap of " + std::to_string(cap));
    return total;
}

AllocationVector allocation_at(std::uint64_t index, std::size_t n, std::size_t k) {
    AllocationVector z(n, 0);
    for (std::size_t i = n; i-- > 0;) {
        z[i] = static_cast<std::size_t>(index % k);
        index /= k;
    }
    return z;
}

std::vector<AllocationVector> enumerate_allocations(std::size_t n, std::size_t k, std::uint64_t cap) {
    const std::uint64_t total = allocation_count(n, k, cap);
    std::vector<AllocationVector> out;
    out.reserve(total);
    AllocationVector z(n, 0);
    for (std::uint64_t idx = 0; idx < total; ++idx) {
        out.push_back(z);
        for (std::size_t i = n; i-- > 0;) {
            if (++z[i] < k) break;
            z[i] = 0;
        }
    }
    return out;
}

ComponentPosterior allocation_posterior(const Dataset& data, const MixturePrior& prior,
                                        std::span<const std::size_t> z, std::size_t j) {
    if (z.size() != data.size()) throw InvalidArgument("allocation length does not match the data");
    return group_posterior(data, prior.components.at(j), z, j);
}

double allocation_log_weight(const Dataset& data, const MixturePrior& prior, std::span<const std::size_t> z) {
    if (z.size() != data.size()) throw InvalidArgument("allocation length does not match the data");
    const std::size_t k = prior.size();
    std::vector<std::size_t> counts(k, 0);
    for (std::size_t label : z) {
        if (label >= k) throw InvalidArgument("allocation label out of range");
        ++counts[label];
    }
    double acc = log_dirichlet_part(prior.alpha, counts);
    for (std::size_t j = 0; j < k; ++j) {
        acc += log_partition(group_posterior(data, prior.components[j], z, j)) - log_partition(prior.components[j]);
    }
    return acc;
}

OracleResult oracle_posterior(const Dataset& data, const MixturePrior& prior, const OracleOptions& options,
                              double threshold) {
    check_compatible(data, prior);
    const std::size_t k = prior.size();
    const std::size_t n = data.size();
    const auto lw = all_log_weights(data, prior, options);
    const auto norm = normalise(lw);
    const double alpha_total = std::accumulate(prior.alpha.begin(), prior.alpha.end(), 0.0);

    OracleResult result;
    result.log_weight_sum = norm.log_sum;
    auto& s = result.summary;
    s.family = data.family();
    s.components = k;
    s.observations = n;
    s.expected_weights.assign(k, 0.0);
    s.expected_means.assign(k, {});
    s.log_evidence = norm.log_sum + data.log_base_measure();
    s.mass_threshold = threshold;

    struct Accumulator {
        Multiplicity count = 0;
        double scaled = 0.0;
    };
    std::map<std::vector<std::int64_t>, Accumulator> groups;
    const KeyMaker make_key(data, k);
    for (std::size_t idx = 0; idx < lw.size(); ++idx) {
        const auto z = allocation_at(idx, n, k);
        const double w = norm.weights[idx];
        std::vector<std::size_t> counts(k, 0);
        for (std::size_t label : z) ++counts[label];
        for (std::size_t j = 0; j < k; ++j) {
            s.expected_weights[j] += w * (static_cast<double>(counts[j]) + prior.alpha[j]) / (static_cast<double>(n) + alpha_total);
            const auto mean = component_posterior_mean(group_posterior(data, prior.components[j], z, j));
            auto& acc = s.expected_means[j];
            if (acc.empty()) acc.assign(mean.size(), 0.0);
            for (std::size_t u = 0; u < mean.size(); ++u) acc[u] += w * mean[u];
        }
        auto& g = groups[make_key(z)];
        g.count += 1;
        g.scaled += w;
    }

    result.groups.reserve(groups.size());
    std::vector<double> group_weights;
    for (auto& [key, g] : groups) {
        result.groups.push_back({key, g.count, norm.log_sum + std::log(g.scaled), g.scaled});
        group_weights.push_back(g.scaled);
    }
    s.distinct_statistics = result.groups.size();
    s.mass_statistics = mass_concentration(group_weights, threshold);
    return result;
}

std::size_t oracle_distinct_statistics(const Dataset& data, std::size_t k, const OracleOptions& options) {
    if (data.empty()) throw InvalidArgument("oracle needs at least one observation");
    const std::uint64_t total = allocation_count(data.size(), k, options.cap);
    const KeyMaker make_key(data, k);
    std::map<std::vector<std::int64_t>, bool> seen;
    for (std::uint64_t idx = 0; idx < total; ++idx) seen[make_key(allocation_at(idx, data.size(), k))] = true;
    return seen.size();
}

std::vector<std::pair<std::vector<std::int64_t>, Multiplicity>>
oracle_statistic_table(const Dataset& data, std::size_t k, const OracleOptions& options) {
    if (data.family() == Family::normal) throw UnsupportedFamily("normal statistics are real-valued");
    if (data.empty()) throw InvalidArgument("oracle needs at least one observation");
    const std::uint64_t total = allocation_count(data.size(), k, options.cap);
    const KeyMaker make_key(data, k);
    std::map<std::vector<std::int64_t>, Multiplicity> table;
    for (std::uint64_t idx = 0; idx < total; ++idx) table[make_key(allocation_at(idx, data.size(), k))] += 1;
    return {table.begin(), table.end()};
}

DensityGrid oracle_component_density(const Dataset& data, const MixturePrior& prior, std::size_t j,
                                     std::span<const double> grid, std::size_t coordinate,
                                     const OracleOptions& options) {
    check_compatible(data, prior);
    if (j >= prior.size()) throw InvalidArgument("component index out of range");
    return weighted_density(data, prior, grid, options, [&](const AllocationVector& z, double t) {
        return component_posterior_density(group_posterior(data, prior.components[j], z, j), t, coordinate);
    });
}

DensityGrid oracle_weight_density(const Dataset& data, const MixturePrior& prior, std::size_t j,
                                  std::span<const double> grid, const OracleOptions& options) {
    check_compatible(data, prior);
    if (j >= prior.size()) throw InvalidArgument("component index out of range");
    if (prior.size() < 2) throw InvalidArgument("with a single component the weight is 1 and has no density");
    const double alpha_total = std::accumulate(prior.alpha.begin(), prior.alpha.end(), 0.0);
    const double n = static_cast<double>(data.size());
    return weighted_density(data, prior, grid, options, [&](const AllocationVector& z, double t) {
        const double nj = static_cast<double>(std::count(z.begin(), z.end(), j));
        return beta_density(nj + prior.alpha[j], n - nj + alpha_total - prior.alpha[j], t);
    });
}

void write_allocation_table(std::ostream& out, const Dataset& data, const MixturePrior& prior,
                            const OracleOptions& options) {
    check_compatible(data, prior);
    const auto lw = all_log_weights(data, prior, options);
    const KeyMaker make_key(data, prior.size());
    out << "allocation,statistic,log_weight\n";
    for (std::size_t idx = 0; idx < lw.size(); ++idx) {
        const auto z = allocation_at(idx, data.size(), prior.size());
        std::string label;
        for (std::size_t i = 0; i < z.size(); ++i) {
            if (i) label += '-';
            label += std::to_string(z[i] + 1);
        }
        out << label << ',' << join_key(make_key(z)) << ',' << fmt::format("{:.17g}", lw[idx]) << '\n';
    }
}

double quadrature_log_evidence(const Dataset& data, const MixturePrior& prior, const OracleOptions& options) {
    check_compatible(data, prior);
    if (data.family() == Family::multinomial) {
        throw UnsupportedFamily("quadrature evidence is implemented for Poisson and normal data");
    }
    const std::size_t k = prior.size();
    const std::uint64_t total = allocation_count(data.size(), k, options.cap);
    std::vector<double> terms(total);
    for (std::uint64_t idx = 0; idx < total; ++idx) {
        const auto z = allocation_at(idx, data.size(), k);
        std::vector<std::size_t> counts(k, 0);
        for (std::size_t label : z) ++counts[label];
        double acc = k == 2 ? log_two_weight_integral(prior.alpha[0], prior.alpha[1], counts[0], counts[1])
                            : log_dirichlet_part(prior.alpha, counts);
        for (std::size_t j = 0; j < k; ++j) {
            if (data.family() == Family::poisson) {
                acc += log_poisson_group_marginal(data, std::get<PoissonPrior>(prior.components[j]), z, j);
            } else {
                acc += log_normal_group_marginal(data, std::get<NormalPrior>(prior.components[j]), z, j);
            }
        }
        terms[idx] = acc;
    }
    const double top = *std::max_element(terms.begin(), terms.end());
    double sum = 0.0;
    for (double t : terms) sum += std::exp(t - top);
    return top + std::log(sum);
}

} // namespace mixexact
