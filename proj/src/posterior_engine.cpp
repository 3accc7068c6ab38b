#include "mixexact/posterior_engine.hpp"

#include "mixexact/errors.hpp"
#include "mixexact/parallel.hpp"

#include <boost/math/distributions/beta.hpp>
#include <boost/math/distributions/gamma.hpp>
#include <fmt/format.h>

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <numeric>
#include <ostream>
#include <queue>
#include <sstream>

namespace mixexact {

namespace {

constexpr double kTailMass = 1e-8;
constexpr double kNegligibleWeight = 1e-15;

struct DirichletTerms {
    double alpha_total = 0.0;
    double log_prior_constant = 0.0; // log Gamma(sum alpha) - sum log Gamma(alpha_j)
    std::vector<double> log_component_prior; // log K(prior_j)
};

DirichletTerms dirichlet_terms(const MixturePrior& prior) {
    DirichletTerms t;
    for (double a : prior.alpha) {
        t.alpha_total += a;
        t.log_prior_constant -= log_gamma(a);
    }
    t.log_prior_constant += log_gamma(t.alpha_total);
    for (const auto& c : prior.components) t.log_component_prior.push_back(log_partition(c));
    return t;
}

std::size_t check_key(std::span<const std::int64_t> key, const MixturePrior& prior) {
    const std::size_t k = prior.size();
    if (k == 0 || key.size() % k != 0 || key.size() / k < 2) {
        throw InvalidArgument("statistic does not match the number of components");
    }
    const std::size_t dim = key.size() / k - 1;
    const Family family = prior.family();
    if (family == Family::normal) throw UnsupportedFamily("normal posteriors are computed by the oracle");
    if (family == Family::poisson && dim != 1) throw InvalidArgument("Poisson statistic must have width 1");
    if (family == Family::multinomial &&
        dim != std::get<MultinomialPrior>(prior.components.front()).concentration.size()) {
        throw InvalidArgument("multinomial statistic width does not match the prior's categories");
    }
    return dim;
}

double weight_from_terms(std::span<const std::int64_t> key, double log_mu, const MixturePrior& prior,
                         const DirichletTerms& terms, std::size_t dim) {
    const std::size_t k = prior.size();
    double acc = log_mu + terms.log_prior_constant;
    double n = 0.0;
    for (std::size_t j = 0; j < k; ++j) {
        const std::int64_t count = key[j * (1 + dim)];
        const auto sums = key.subspan(j * (1 + dim) + 1, dim);
        n += static_cast<double>(count);
        acc += log_gamma(static_cast<double>(count) + prior.alpha[j]);
        acc += log_partition(conjugate_update(prior.components[j], count, sums)) - terms.log_component_prior[j];
    }
    return acc - log_gamma(n + terms.alpha_total);
}

/// Distribution shapes (first, second) of one mixture member's marginal.
struct Member {
    double first = 0.0;
    double second = 0.0;
    double weight = 0.0;
    double log_norm = 0.0; ///< log of the density's normalising factor
};

enum class Shape { gamma, beta };

/// Sums the weights of members with identical shapes and fills log_norm.
std::vector<Member> merge_members(const std::vector<Member>& raw, Shape shape) {
    std::map<std::pair<double, double>, double> merged;
    for (const auto& m : raw) merged[{m.first, m.second}] += m.weight;
    std::vector<Member> out;
    out.reserve(merged.size());
    for (const auto& [shapes, w] : merged) {
        const auto [a, b] = shapes;
        const double log_norm = shape == Shape::gamma ? a * std::log(b) - log_gamma(a)
                                                      : log_gamma(a + b) - log_gamma(a) - log_gamma(b);
        out.push_back({a, b, w, log_norm});
    }
    return out;
}

/// Aggregates weights over entries sharing component j's block, keyed by the
/// fixed-order block, then turns each block into the shapes of its marginal.
std::vector<Member> component_members(const WeightedPosterior& wp, std::size_t j, std::size_t coordinate) {
    const auto& lattice = wp.lattice();
    if (j >= wp.components()) throw InvalidArgument("component index out of range");
    if (coordinate >= lattice.statistic_dim()) throw InvalidArgument("coordinate out of range");
    std::map<std::vector<std::int64_t>, double> blocks;
    for (std::size_t i = 0; i < wp.size(); ++i) {
        const auto sums = lattice.sums(i, j);
        std::vector<std::int64_t> block{lattice.count(i, j)};
        block.insert(block.end(), sums.begin(), sums.end());
        blocks[block] += wp.weight(i);
    }
    std::vector<Member> members;
    members.reserve(blocks.size());
    for (const auto& [block, w] : blocks) {
        const auto post = conjugate_update(wp.prior().components[j], block[0],
                                           std::span<const std::int64_t>(block).subspan(1));
        if (const auto* g = std::get_if<PoissonPrior>(&post)) {
            members.push_back({g->shape, g->rate, w});
        } else {
            const auto& beta = std::get<MultinomialPrior>(post).concentration;
            const double total = std::accumulate(beta.begin(), beta.end(), 0.0);
            members.push_back({beta[coordinate], total - beta[coordinate], w});
        }
    }
    return merge_members(members, wp.prior().family() == Family::poisson ? Shape::gamma : Shape::beta);
}

std::vector<Member> weight_members(const WeightedPosterior& wp, std::size_t j) {
    if (j >= wp.components()) throw InvalidArgument("component index out of range");
    if (wp.components() < 2) throw InvalidArgument("with a single component the weight is 1 and has no density");
    const auto& lattice = wp.lattice();
    const double n = static_cast<double>(lattice.observations());
    const double alpha_total = std::accumulate(wp.prior().alpha.begin(), wp.prior().alpha.end(), 0.0);
    std::map<std::int64_t, double> by_count;
    for (std::size_t i = 0; i < wp.size(); ++i) by_count[lattice.count(i, j)] += wp.weight(i);
    std::vector<Member> members;
    for (const auto& [count, w] : by_count) {
        const double nj = static_cast<double>(count);
        const double aj = wp.prior().alpha[j];
        members.push_back({nj + aj, n - nj + alpha_total - aj, w});
    }
    return merge_members(members, Shape::beta);
}

double edge_power(double min_shape) {
    if (!(min_shape < 1.0)) return 1.0;
    return std::min(16.0, std::ceil(3.0 / min_shape));
}

std::string format_double(double x) { return fmt::format("{:.17g}", x); }

} // namespace

MixturePrior MixturePrior::symmetric(std::size_t k, double alpha, const ComponentPrior& component) {
    return MixturePrior{std::vector<double>(k, alpha), std::vector<ComponentPrior>(k, component)};
}

Family MixturePrior::family() const {
    if (components.empty()) throw InvalidArgument("mixture prior has no components");
    return family_of(components.front());
}

void MixturePrior::validate() const {
    if (alpha.empty()) throw InvalidArgument("number of components must be >= 1");
    if (components.size() != alpha.size()) {
        throw InvalidArgument("mixture prior has " + std::to_string(alpha.size()) + " weights but " +
                              std::to_string(components.size()) + " component priors");
    }
    for (double a : alpha) {
        if (!std::isfinite(a) || !(a > 0.0)) throw InvalidPrior("Dirichlet weight concentration must be > 0");
    }
    const Family f = family();
    for (const auto& c : components) {
        if (family_of(c) != f) throw InvalidArgument("component priors mix families");
        mixexact::validate(c);
    }
    if (f == Family::multinomial) {
        const std::size_t v = std::get<MultinomialPrior>(components.front()).concentration.size();
        for (const auto& c : components) {
            if (std::get<MultinomialPrior>(c).concentration.size() != v) {
                throw InvalidArgument("multinomial component priors disagree on the number of categories");
            }
        }
    }
}

double log_unnormalized_weight(std::span<const std::int64_t> key, const Multiplicity& multiplicity,
                               const MixturePrior& prior) {
    prior.validate();
    const std::size_t dim = check_key(key, prior);
    return weight_from_terms(key, log_multiplicity(multiplicity), prior, dirichlet_terms(prior), dim);
}

ComponentPosterior WeightedPosterior::component_posterior(std::size_t i, std::size_t j) const {
    return conjugate_update(prior_.components.at(j), lattice_.count(i, j), lattice_.sums(i, j));
}

std::vector<double> WeightedPosterior::dirichlet_posterior(std::size_t i) const {
    std::vector<double> out(components());
    for (std::size_t j = 0; j < out.size(); ++j) out[j] = static_cast<double>(lattice_.count(i, j)) + prior_.alpha[j];
    return out;
}

WeightedPosterior normalize(StatisticLattice lattice, MixturePrior prior, const EngineOptions& options) {
    prior.validate();
    if (lattice.family() != prior.family()) throw InvalidArgument("lattice and prior families differ");
    if (lattice.components() != prior.size()) throw InvalidArgument("lattice and prior disagree on k");
    if (lattice.size() > 0) check_key(lattice.key(0), prior);

    WeightedPosterior wp(std::move(lattice), std::move(prior));
    const auto& lat = wp.lattice_;
    const std::size_t m = lat.size();
    const std::size_t dim = lat.statistic_dim();
    const DirichletTerms terms = dirichlet_terms(wp.prior_);

    wp.log_weights_.resize(m);
    parallel_chunks(m, resolve_threads(options.threads), [&](std::size_t, std::size_t begin, std::size_t end) {
        for (std::size_t i = begin; i < end; ++i) {
            wp.log_weights_[i] =
                weight_from_terms(lat.key(i), log_multiplicity(lat.multiplicity(i)), wp.prior_, terms, dim);
        }
    });

    const double top = *std::max_element(wp.log_weights_.begin(), wp.log_weights_.end());
    double total = 0.0;
    wp.weights_.resize(m);
    for (std::size_t i = 0; i < m; ++i) {
        wp.weights_[i] = std::exp(wp.log_weights_[i] - top);
        total += wp.weights_[i];
    }
    for (double& w : wp.weights_) w /= total;
    wp.log_weight_sum_ = top + std::log(total);
    return wp;
}

std::vector<double> expected_weights(const WeightedPosterior& wp) {
    const std::size_t k = wp.components();
    const double n = static_cast<double>(wp.lattice().observations());
    const double alpha_total = std::accumulate(wp.prior().alpha.begin(), wp.prior().alpha.end(), 0.0);
    std::vector<double> out(k, 0.0);
    for (std::size_t i = 0; i < wp.size(); ++i) {
        for (std::size_t j = 0; j < k; ++j) {
            out[j] += wp.weight(i) * (static_cast<double>(wp.lattice().count(i, j)) + wp.prior().alpha[j]) /
                      (n + alpha_total);
        }
    }
    return out;
}

std::vector<std::vector<double>> expected_component_means(const WeightedPosterior& wp) {
    const std::size_t k = wp.components();
    std::vector<std::vector<double>> out(k);
    for (std::size_t i = 0; i < wp.size(); ++i) {
        for (std::size_t j = 0; j < k; ++j) {
            const auto mean = component_posterior_mean(wp.component_posterior(i, j));
            if (out[j].empty()) out[j].assign(mean.size(), 0.0);
            for (std::size_t u = 0; u < mean.size(); ++u) out[j][u] += wp.weight(i) * mean[u];
        }
    }
    return out;
}

double DensityGrid::integral() const {
    double acc = 0.0;
    for (std::size_t i = 1; i < points.size(); ++i) {
        acc += 0.5 * (points[i] - points[i - 1]) * (values[i] + values[i - 1]);
    }
    return acc;
}

void DensityGrid::write_csv(std::ostream& out) const {
    out << "param,density\n";
    for (std::size_t i = 0; i < points.size(); ++i) {
        out << format_double(points[i]) << ',' << format_double(values[i]) << '\n';
    }
}

std::string DensityGrid::csv() const {
    std::ostringstream out;
    write_csv(out);
    return out.str();
}

namespace {

void check_grid(std::span<const double> grid) {
    if (grid.empty()) throw InvalidArgument("density grid is empty");
    for (std::size_t i = 0; i < grid.size(); ++i) {
        if (!std::isfinite(grid[i])) throw InvalidArgument("density grid point is not finite");
        if (i > 0 && !(grid[i] > grid[i - 1])) throw InvalidArgument("density grid must be strictly increasing");
    }
}

DensityGrid mixture_density(const std::vector<Member>& members, std::span<const double> grid, std::size_t threads,
                            Shape shape) {
    DensityGrid out{{grid.begin(), grid.end()}, std::vector<double>(grid.size(), 0.0)};
    parallel_chunks(grid.size(), resolve_threads(threads), [&](std::size_t, std::size_t begin, std::size_t end) {
        for (std::size_t g = begin; g < end; ++g) {
            const double t = grid[g];
            const bool interior = shape == Shape::gamma ? t > 0.0 && std::isfinite(t) : t > 0.0 && t < 1.0;
            const double log_t = interior ? std::log(t) : 0.0;
            const double log_rest = interior && shape == Shape::beta ? std::log1p(-t) : 0.0;
            double acc = 0.0;
            for (const auto& m : members) {
                if (!(m.weight > 0.0)) continue;
                double value;
                if (!interior) {
                    value = shape == Shape::gamma ? gamma_density(m.first, m.second, t)
                                                  : beta_density(m.first, m.second, t);
                } else if (shape == Shape::gamma) {
                    value = std::exp(m.log_norm + (m.first - 1.0) * log_t - m.second * t);
                } else {
                    value = std::exp(m.log_norm + (m.first - 1.0) * log_t + (m.second - 1.0) * log_rest);
                }
                acc += m.weight * value;
            }
            out.values[g] = acc;
        }
    });
    return out;
}

} // namespace

DensityGrid marginal_component_density(const WeightedPosterior& wp, std::size_t j, std::span<const double> grid,
                                       std::size_t coordinate, const EngineOptions& options) {
    check_grid(grid);
    const auto members = component_members(wp, j, coordinate);
    return mixture_density(members, grid, options.threads,
                           wp.prior().family() == Family::poisson ? Shape::gamma : Shape::beta);
}

DensityGrid marginal_weight_density(const WeightedPosterior& wp, std::size_t j, std::span<const double> grid,
                                    const EngineOptions& options) {
    check_grid(grid);
    for (double p : grid) {
        if (!(p > 0.0 && p < 1.0)) throw InvalidArgument("weight grid points must lie in (0, 1)");
    }
    return mixture_density(weight_members(wp, j), grid, options.threads, Shape::beta);
}

namespace {

// Power-law edge zones of width z in u, joined C1 to a linear middle. Edge nodes
// are measured from their own endpoint so grading survives next to 1.
std::vector<double> warp_positions(double lower, double upper, std::size_t points, double left_power,
                                   double right_power) {
    if (points < 2) throw InvalidArgument("a grid needs at least 2 points");
    if (!(upper > lower) || !std::isfinite(lower) || !std::isfinite(upper)) {
        throw InvalidArgument("grid bounds must satisfy lower < upper");
    }
    if (left_power < 1.0 || right_power < 1.0) throw InvalidArgument("grid warp exponents must be >= 1");
    constexpr double z = 1.0 / 3.0;
    const double range = upper - lower;
    const double slope = 1.0 / (z / left_power + (1.0 - 2.0 * z) + z / right_power);
    std::vector<double> grid(points);
    for (std::size_t i = 0; i < points; ++i) {
        const double u = static_cast<double>(i) / static_cast<double>(points - 1);
        if (u < z) {
            grid[i] = lower + range * slope * z / left_power * std::pow(u / z, left_power);
        } else if (u > 1.0 - z) {
            grid[i] = upper - range * slope * z / right_power * std::pow((1.0 - u) / z, right_power);
        } else {
            grid[i] = lower + range * (slope * z / left_power + slope * (u - z));
        }
    }
    grid.front() = lower;
    grid.back() = upper;
    return grid;
}

} // namespace

std::vector<double> warped_grid(double lower, double upper, std::size_t points, double left_power,
                                double right_power) {
    auto grid = warp_positions(lower, upper, points, left_power, right_power);
    for (std::size_t i = 1; i < points; ++i) {
        if (!(grid[i] > grid[i - 1])) grid[i] = std::nextafter(grid[i - 1], std::numeric_limits<double>::infinity());
    }
    if (!(grid.back() <= upper)) throw InvalidArgument("grid range too narrow for the requested resolution");
    grid.back() = upper;
    return grid;
}

namespace {

constexpr std::size_t kPilotPoints = 1 << 14;

// nodes that collapse onto the same double are dropped
std::vector<double> pilot_grid(double lower, double upper, double left_power, double right_power) {
    auto grid = warp_positions(lower, upper, kPilotPoints, left_power, right_power);
    std::ranges::sort(grid);
    const auto last = std::ranges::unique(grid);
    grid.erase(last.begin(), last.end());
    return grid;
}

// Nodes are a subset of the pilot. Nearly all sit where the running integral of
// |f''|^(1/3) x' crosses equal levels; the last few go one at a time into the
// interval whose trapezoid value strays furthest from the fine pilot sum.
std::vector<double> equidistributed_grid(const std::vector<double>& pilot, const std::vector<double>& f,
                                         std::size_t points) {
    const std::size_t m = pilot.size();
    if (points >= m) return pilot;
    std::vector<double> monitor(m, 0.0);
    for (std::size_t i = 1; i + 1 < m; ++i) {
        const double h0 = pilot[i] - pilot[i - 1];
        const double h1 = pilot[i + 1] - pilot[i];
        const double second = 2.0 * ((f[i + 1] - f[i]) / h1 - (f[i] - f[i - 1]) / h0) / (h0 + h1);
        const double value = std::cbrt(std::abs(second)) * 0.5 * (h0 + h1);
        monitor[i] = std::isfinite(value) ? value : 0.0;
    }
    monitor.front() = monitor[1];
    monitor.back() = monitor[m - 2];
    double mean = 0.0;
    for (double v : monitor) mean += v / static_cast<double>(m);
    // floor keeps flat stretches from being starved of nodes
    const double floor = mean > 0.0 ? 0.05 * mean : 1.0;
    std::vector<double> cumulative(m, 0.0);
    for (std::size_t i = 1; i < m; ++i) {
        cumulative[i] = cumulative[i - 1] + 0.5 * (std::max(monitor[i], floor) + std::max(monitor[i - 1], floor));
    }
    const std::size_t placed = std::max<std::size_t>(2, points - std::max<std::size_t>(1, points / 128));
    std::vector<std::size_t> chosen{0};
    std::size_t cursor = 1;
    for (std::size_t t = 1; t + 1 < placed; ++t) {
        const double level = cumulative.back() * static_cast<double>(t) / static_cast<double>(placed - 1);
        while (cursor + 1 < m && cumulative[cursor] < level) ++cursor;
        const std::size_t nearest = level - cumulative[cursor - 1] < cumulative[cursor] - level ? cursor - 1 : cursor;
        if (nearest > chosen.back() && nearest < m - 1) chosen.push_back(nearest);
    }
    chosen.push_back(m - 1);

    std::vector<double> fine(m, 0.0);
    for (std::size_t i = 1; i < m; ++i) fine[i] = fine[i - 1] + 0.5 * (pilot[i] - pilot[i - 1]) * (f[i] + f[i - 1]);
    auto trapezoid = [&](std::size_t lo, std::size_t hi) { return 0.5 * (pilot[hi] - pilot[lo]) * (f[lo] + f[hi]); };
    struct Span {
        double error;
        std::size_t lo, hi;
        bool operator<(const Span& o) const {
            if (error != o.error) return error < o.error;
            if (hi - lo != o.hi - o.lo) return hi - lo < o.hi - o.lo;
            return lo > o.lo;
        }
    };
    auto make = [&](std::size_t lo, std::size_t hi) {
        double error = 0.0;
        if (hi - lo > 1) {
            error = std::abs(trapezoid(lo, hi) - (fine[hi] - fine[lo]));
            if (!std::isfinite(error)) error = std::numeric_limits<double>::max();
        }
        return Span{error, lo, hi};
    };
    std::priority_queue<Span> queue;
    for (std::size_t i = 1; i < chosen.size(); ++i) queue.push(make(chosen[i - 1], chosen[i]));
    while (chosen.size() < points) {
        const Span top = queue.top();
        queue.pop();
        const std::size_t mid = top.lo + (top.hi - top.lo) / 2;
        chosen.push_back(mid);
        queue.push(make(top.lo, mid));
        queue.push(make(mid, top.hi));
    }
    std::ranges::sort(chosen);
    std::vector<double> grid(points);
    for (std::size_t i = 0; i < points; ++i) grid[i] = pilot[chosen[i]];
    return grid;
}

} // namespace

std::vector<double> default_component_grid(const WeightedPosterior& wp, std::size_t j, std::size_t coordinate,
                                           std::size_t points) {
    const auto members = component_members(wp, j, coordinate);
    const bool poisson = wp.prior().family() == Family::poisson;
    double lower = std::numeric_limits<double>::infinity();
    double upper = -std::numeric_limits<double>::infinity();
    double min_first = std::numeric_limits<double>::infinity();
    double min_second = std::numeric_limits<double>::infinity();
    for (const auto& m : members) {
        if (m.weight < kNegligibleWeight) continue;
        if (poisson) {
            const boost::math::gamma_distribution<> dist(m.first, 1.0 / m.second);
            lower = std::min(lower, boost::math::quantile(dist, kTailMass));
            upper = std::max(upper, boost::math::quantile(boost::math::complement(dist, kTailMass)));
        } else {
            const boost::math::beta_distribution<> dist(m.first, m.second);
            lower = std::min(lower, boost::math::quantile(dist, kTailMass));
            upper = std::max(upper, boost::math::quantile(boost::math::complement(dist, kTailMass)));
            min_second = std::min(min_second, m.second);
        }
        min_first = std::min(min_first, m.first);
    }
    if (points < 2) throw InvalidArgument("a grid needs at least 2 points");
    if (!poisson) upper = std::min(upper, std::nextafter(1.0, 0.0));
    const auto pilot = pilot_grid(lower, upper, edge_power(min_first), poisson ? 1.0 : edge_power(min_second));
    return equidistributed_grid(pilot, marginal_component_density(wp, j, pilot, coordinate).values, points);
}

std::vector<double> default_weight_grid(const WeightedPosterior& wp, std::size_t j, std::size_t points) {
    double lower = std::numeric_limits<double>::infinity();
    double upper = -std::numeric_limits<double>::infinity();
    double min_first = std::numeric_limits<double>::infinity();
    double min_second = std::numeric_limits<double>::infinity();
    for (const auto& m : weight_members(wp, j)) {
        if (m.weight < kNegligibleWeight) continue;
        const boost::math::beta_distribution<> dist(m.first, m.second);
        lower = std::min(lower, boost::math::quantile(dist, kTailMass));
        upper = std::max(upper, boost::math::quantile(boost::math::complement(dist, kTailMass)));
        min_first = std::min(min_first, m.first);
        min_second = std::min(min_second, m.second);
    }
    if (points < 2) throw InvalidArgument("a grid needs at least 2 points");
    lower = std::max(lower, std::numeric_limits<double>::min());
    upper = std::min(upper, std::nextafter(1.0, 0.0));
    const auto pilot = pilot_grid(lower, upper, edge_power(min_first), edge_power(min_second));
    return equidistributed_grid(pilot, marginal_weight_density(wp, j, pilot).values, points);
}

double log_evidence(const WeightedPosterior& wp, const Dataset& data) {
    const auto& lattice = wp.lattice();
    if (data.family() != lattice.family() || data.size() != lattice.observations() ||
        (!data.empty() && data.statistic_dim() != lattice.statistic_dim())) {
        throw InvalidArgument("dataset does not match the lattice it was built from");
    }
    return wp.log_weight_sum() + data.log_base_measure();
}

double log_evidence(const StatisticLattice& lattice, const MixturePrior& prior, const Dataset& data,
                    const EngineOptions& options) {
    return log_evidence(normalize(lattice, prior, options), data);
}

double bayes_factor(double log_m_a, double log_m_b) { return std::exp(log_m_a - log_m_b); }

std::size_t mass_concentration(std::span<const double> weights, double threshold) {
    if (!(threshold > 0.0 && threshold <= 1.0)) throw InvalidArgument("mass threshold must lie in (0, 1]");
    std::vector<std::size_t> order(weights.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return weights[a] > weights[b]; });
    double cumulative = 0.0;
    for (std::size_t r = 0; r < order.size(); ++r) {
        cumulative += weights[order[r]];
        if (cumulative >= threshold) return r + 1;
    }
    return order.size();
}

std::size_t mass_concentration(const WeightedPosterior& wp, double threshold) {
    return mass_concentration(wp.weights(), threshold);
}

PosteriorSummary summarize(const WeightedPosterior& wp, const Dataset& data, double threshold) {
    PosteriorSummary s;
    s.family = wp.lattice().family();
    s.components = wp.components();
    s.observations = wp.lattice().observations();
    s.expected_weights = expected_weights(wp);
    s.expected_means = expected_component_means(wp);
    s.log_evidence = log_evidence(wp, data);
    s.distinct_statistics = wp.size();
    s.mass_threshold = threshold;
    s.mass_statistics = mass_concentration(wp, threshold);
    return s;
}

std::string to_text(const PosteriorSummary& s) {
    std::string out;
    auto line = [&](const std::string& key, const std::string& value) { out += key + "=" + value + "\n"; };
    line("family", std::string(to_string(s.family)));
    line("components", std::to_string(s.components));
    line("observations", std::to_string(s.observations));
    line("log_evidence", format_double(s.log_evidence));
    line("distinct_statistics", std::to_string(s.distinct_statistics));
    line("mass_threshold", fmt::format("{}", s.mass_threshold));
    line("mass_statistics", std::to_string(s.mass_statistics));
    for (std::size_t j = 0; j < s.expected_weights.size(); ++j) {
        line(fmt::format("expected_weight.{}", j + 1), format_double(s.expected_weights[j]));
    }
    for (std::size_t j = 0; j < s.expected_means.size(); ++j) {
        const auto& mean = s.expected_means[j];
        if (s.family == Family::multinomial) {
            for (std::size_t u = 0; u < mean.size(); ++u) {
                line(fmt::format("expected_mean.{}.{}", j + 1, u + 1), format_double(mean[u]));
            }
        } else {
            for (double m : mean) line(fmt::format("expected_mean.{}", j + 1), format_double(m));
        }
    }
    return out;
}

} // namespace mixexact
