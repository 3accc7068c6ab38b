#include "mixexact/family_models.hpp"

#include "mixexact/errors.hpp"

#include <boost/math/special_functions/gamma.hpp>

#include <cmath>
#include <limits>
#include <numbers>
#include <numeric>

namespace mixexact {

namespace {

constexpr double kLogTwoPi = 1.8378770664093454835606594728112;

template <class... Ts>
struct Overloaded : Ts... {
    using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

bool positive_finite(double x) { return std::isfinite(x) && x > 0.0; }

} // namespace

std::string_view to_string(Family family) {
    switch (family) {
    case Family::poisson:
        return "poisson";
    case Family::multinomial:
        return "multinomial";
    case Family::normal:
        return "normal";
    }
    return "unknown";
}

Family parse_family(std::string_view name) {
    if (name == "poisson") return Family::poisson;
    if (name == "multinomial") return Family::multinomial;
    if (name == "normal") return Family::normal;
    throw InvalidArgument("unknown family '" + std::string(name) + "'");
}

double log_gamma(double x) { return boost::math::lgamma(x); }

Family family_of(const ComponentPrior& prior) {
    return std::visit(Overloaded{[](const PoissonPrior&) { return Family::poisson; },
                                  [](const MultinomialPrior&) { return Family::multinomial; },
                                  [](const NormalPrior&) { return Family::normal; }},
                      prior);
}

void validate(const PoissonPrior& prior) {
    if (!positive_finite(prior.shape) || !positive_finite(prior.rate)) {
        throw InvalidPrior("Gamma prior needs shape > 0 and rate > 0");
    }
}

void validate(const MultinomialPrior& prior) {
    if (prior.concentration.size() < 2) {
        throw InvalidPrior("Dirichlet prior needs at least 2 categories");
    }
    for (double beta : prior.concentration) {
        if (!positive_finite(beta)) throw InvalidPrior("Dirichlet concentration must be > 0");
    }
}

void validate(const NormalPrior& prior) {
    if (!std::isfinite(prior.location) || !positive_finite(prior.precision_scale) ||
        !positive_finite(prior.shape) || !positive_finite(prior.scale)) {
        throw InvalidPrior("normal-inverse-Gamma prior needs finite location and c, a, b > 0");
    }
}

void validate(const ComponentPrior& prior) {
    std::visit([](const auto& p) { validate(p); }, prior);
}

PoissonPrior conjugate_update(const PoissonPrior& prior, const PoissonStatistic& stat) {
    if (stat.count < 0 || stat.sum < 0 || (stat.count == 0 && stat.sum != 0)) {
        throw InvalidArgument("inconsistent Poisson statistic");
    }
    PoissonPrior post{prior.shape + static_cast<double>(stat.sum),
                      prior.rate + static_cast<double>(stat.count)};
    validate(post);
    return post;
}

MultinomialPrior conjugate_update(const MultinomialPrior& prior, const MultinomialStatistic& stat) {
    if (stat.sums.size() != prior.concentration.size()) {
        throw InvalidArgument("multinomial statistic has the wrong number of categories");
    }
    if (stat.count < 0) throw InvalidArgument("negative group count");
    MultinomialPrior post = prior;
    for (std::size_t u = 0; u < stat.sums.size(); ++u) {
        if (stat.sums[u] < 0 || (stat.count == 0 && stat.sums[u] != 0)) {
            throw InvalidArgument("inconsistent multinomial statistic");
        }
        post.concentration[u] += static_cast<double>(stat.sums[u]);
    }
    validate(post);
    return post;
}

NormalPrior conjugate_update(const NormalPrior& prior, const NormalStatistic& stat) {
    if (stat.count < 0) throw InvalidArgument("negative group count");
    if (stat.count == 0) return prior;
    const double n = static_cast<double>(stat.count);
    const double c = prior.precision_scale;
    const double mean = stat.sum / n;
    const double within = std::max(0.0, stat.sum_squares - stat.sum * mean);
    const double shift = mean - prior.location;
    NormalPrior post{(c * prior.location + stat.sum) / (c + n), c + n, prior.shape + n,
                     prior.scale + within + shift * shift * c * n / (c + n)};
    validate(post);
    return post;
}

ComponentPosterior conjugate_update(const ComponentPrior& prior, std::int64_t count,
                                    std::span<const std::int64_t> sums) {
    return std::visit(
        Overloaded{
            [&](const PoissonPrior& p) -> ComponentPosterior {
                if (sums.size() != 1) throw InvalidArgument("Poisson block must hold one sum");
                return conjugate_update(p, PoissonStatistic{count, sums[0]});
            },
            [&](const MultinomialPrior& p) -> ComponentPosterior {
                return conjugate_update(p, MultinomialStatistic{count, {sums.begin(), sums.end()}});
            },
            [](const NormalPrior&) -> ComponentPosterior {
                throw UnsupportedFamily("normal statistics are real-valued");
            }},
        prior);
}

double log_partition(const PoissonPrior& p) {
    validate(p);
    return log_gamma(p.shape) - p.shape * std::log(p.rate);
}

double log_partition(const MultinomialPrior& p) {
    validate(p);
    double total = 0.0;
    double acc = 0.0;
    for (double beta : p.concentration) {
        acc += log_gamma(beta);
        total += beta;
    }
    return acc - log_gamma(total);
}

double log_partition(const NormalPrior& p) {
    validate(p);
    const double half_shape = 0.5 * p.shape;
    return 0.5 * kLogTwoPi - 0.5 * std::log(p.precision_scale) + log_gamma(half_shape) -
           half_shape * std::log(0.5 * p.scale);
}

double log_partition(const ComponentPrior& p) {
    return std::visit([](const auto& q) { return log_partition(q); }, p);
}

double log_partition_constant(Family family, std::span<const double> aggregate, double count_hyper) {
    switch (family) {
    case Family::poisson:
        if (aggregate.size() != 1) throw InvalidArgument("Poisson constant takes one aggregate value");
        return log_partition(PoissonPrior{aggregate[0], count_hyper});
    case Family::multinomial:
        return log_partition(MultinomialPrior{{aggregate.begin(), aggregate.end()}});
    case Family::normal:
        if (aggregate.size() != 4) throw InvalidArgument("normal constant takes (xi, c, a, b)");
        return log_partition(NormalPrior{aggregate[0], aggregate[1], aggregate[2], aggregate[3]});
    }
    throw InvalidArgument("unknown family");
}

double posterior_mean(const PoissonPrior& p) { return p.shape / p.rate; }

std::vector<double> posterior_mean(const MultinomialPrior& p) {
    const double total = std::accumulate(p.concentration.begin(), p.concentration.end(), 0.0);
    std::vector<double> mean(p.concentration.size());
    for (std::size_t u = 0; u < mean.size(); ++u) mean[u] = p.concentration[u] / total;
    return mean;
}

double posterior_mean(const NormalPrior& p) { return p.location; }

std::vector<double> component_posterior_mean(const ComponentPosterior& p) {
    return std::visit(Overloaded{[](const PoissonPrior& q) { return std::vector<double>{posterior_mean(q)}; },
                                  [](const MultinomialPrior& q) { return posterior_mean(q); },
                                  [](const NormalPrior& q) { return std::vector<double>{posterior_mean(q)}; }},
                      p);
}

double log_gamma_density(double shape, double rate, double t) {
    return shape * std::log(rate) - log_gamma(shape) + (shape - 1.0) * std::log(t) - rate * t;
}

double log_beta_density(double a, double b, double q) {
    return log_gamma(a + b) - log_gamma(a) - log_gamma(b) + (a - 1.0) * std::log(q) +
           (b - 1.0) * std::log1p(-q);
}

double gamma_density(double shape, double rate, double t) {
    if (!(t >= 0.0) || !std::isfinite(t)) return 0.0;
    if (t == 0.0) {
        if (shape < 1.0) return std::numeric_limits<double>::infinity();
        return shape == 1.0 ? rate : 0.0;
    }
    return std::exp(log_gamma_density(shape, rate, t));
}

double beta_density(double a, double b, double q) {
    if (!(q >= 0.0 && q <= 1.0)) return 0.0;
    if (q == 0.0 || q == 1.0) {
        const double edge = q == 0.0 ? a : b;
        if (edge < 1.0) return std::numeric_limits<double>::infinity();
        if (edge > 1.0) return 0.0;
        return std::exp(log_gamma(a + b) - log_gamma(a) - log_gamma(b));
    }
    return std::exp(log_beta_density(a, b, q));
}

double density(const PoissonPrior& p, double lambda) { return gamma_density(p.shape, p.rate, lambda); }

double density(const MultinomialPrior& p, std::size_t category, double q) {
    if (category >= p.concentration.size()) throw InvalidArgument("category index out of range");
    const double total = std::accumulate(p.concentration.begin(), p.concentration.end(), 0.0);
    const double a = p.concentration[category];
    return beta_density(a, total - a, q);
}

double mean_density(const NormalPrior& p, double mu) {
    if (!std::isfinite(mu)) return 0.0;
    const double dof = p.shape;
    const double scale2 = p.scale / (p.shape * p.precision_scale);
    const double z2 = (mu - p.location) * (mu - p.location) / scale2;
    const double log_pdf = log_gamma(0.5 * (dof + 1.0)) - log_gamma(0.5 * dof) -
                           0.5 * std::log(dof * std::numbers::pi * scale2) -
                           0.5 * (dof + 1.0) * std::log1p(z2 / dof);
    return std::exp(log_pdf);
}

double variance_density(const NormalPrior& p, double s2) {
    if (!(s2 > 0.0) || !std::isfinite(s2)) return 0.0;
    const double alpha = 0.5 * p.shape;
    const double beta = 0.5 * p.scale;
    return std::exp(alpha * std::log(beta) - log_gamma(alpha) - (alpha + 1.0) * std::log(s2) - beta / s2);
}

double component_posterior_density(const ComponentPosterior& p, double point, std::size_t coordinate) {
    return std::visit(Overloaded{[&](const PoissonPrior& q) {
                                      if (coordinate != 0) throw InvalidArgument("Poisson has one parameter");
                                      return density(q, point);
                                  },
                                  [&](const MultinomialPrior& q) { return density(q, coordinate, point); },
                                  [&](const NormalPrior& q) {
                                      if (coordinate == 0) return mean_density(q, point);
                                      if (coordinate == 1) return variance_density(q, point);
                                      throw InvalidArgument("normal coordinate must be 0 (mu) or 1 (sigma^2)");
                                  }},
                      p);
}

Dataset Dataset::poisson(std::vector<std::int64_t> counts) {
    for (std::size_t i = 0; i < counts.size(); ++i) {
        if (counts[i] < 0) {
            throw InvalidArgument("Poisson count at index " + std::to_string(i) + " is negative");
        }
    }
    Dataset d(Family::poisson, counts.size(), 1);
    d.flat_ = std::move(counts);
    return d;
}

Dataset Dataset::multinomial(const std::vector<std::vector<std::int64_t>>& rows) {
    const std::size_t v = rows.empty() ? 0 : rows.front().size();
    if (!rows.empty() && v < 2) throw InvalidArgument("multinomial observations need at least 2 categories");
    Dataset d(Family::multinomial, rows.size(), v);
    d.flat_.reserve(rows.size() * v);
    for (std::size_t i = 0; i < rows.size(); ++i) {
        if (rows[i].size() != v) {
            throw InvalidArgument("multinomial observation " + std::to_string(i) + " has " +
                                  std::to_string(rows[i].size()) + " categories, expected " + std::to_string(v));
        }
        std::int64_t total = 0;
        for (std::int64_t x : rows[i]) {
            if (x < 0) throw InvalidArgument("negative multinomial count in observation " + std::to_string(i));
            total += x;
        }
        if (total < 1) throw InvalidArgument("multinomial observation " + std::to_string(i) + " has total 0");
        d.flat_.insert(d.flat_.end(), rows[i].begin(), rows[i].end());
    }
    return d;
}

Dataset Dataset::normal(std::vector<double> values) {
    for (std::size_t i = 0; i < values.size(); ++i) {
        if (!std::isfinite(values[i])) {
            throw InvalidArgument("normal observation at index " + std::to_string(i) + " is not finite");
        }
    }
    Dataset d(Family::normal, values.size(), 2);
    d.reals_ = std::move(values);
    return d;
}

std::span<const std::int64_t> Dataset::counts(std::size_t i) const {
    if (family_ == Family::normal) throw UnsupportedFamily("normal observations have no integer statistic");
    if (i >= size_) throw InvalidArgument("observation index out of range");
    return std::span<const std::int64_t>(flat_).subspan(i * dim_, dim_);
}

double Dataset::log_base_measure() const {
    double acc = 0.0;
    switch (family_) {
    case Family::poisson:
        for (std::int64_t x : flat_) acc -= log_gamma(static_cast<double>(x) + 1.0);
        break;
    case Family::multinomial:
        for (std::size_t i = 0; i < size_; ++i) {
            std::int64_t total = 0;
            for (std::int64_t x : counts(i)) {
                acc -= log_gamma(static_cast<double>(x) + 1.0);
                total += x;
            }
            acc += log_gamma(static_cast<double>(total) + 1.0);
        }
        break;
    case Family::normal:
        acc = -0.5 * kLogTwoPi * static_cast<double>(size_);
        break;
    }
    return acc;
}

Dataset Dataset::select(std::span<const std::size_t> order) const {
    Dataset d(family_, order.size(), dim_);
    for (std::size_t idx : order) {
        if (idx >= size_) throw InvalidArgument("selection index out of range");
        if (family_ == Family::normal) {
            d.reals_.push_back(reals_[idx]);
        } else {
            auto row = counts(idx);
            d.flat_.insert(d.flat_.end(), row.begin(), row.end());
        }
    }
    return d;
}

} // namespace mixexact
