#pragma once

// Exponential-family components (Poisson, multinomial, normal) with their
// conjugate priors. Every Gamma-function quantity is handled in log space.
//
// Conjugate posteriors have the same shape as the priors, so a
// ComponentPosterior is just a ComponentPrior with updated hyperparameters.

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace mixexact {

enum class Family { poisson, multinomial, normal };

std::string_view to_string(Family family);

/// Accepts "poisson", "multinomial", "normal".
Family parse_family(std::string_view name);

double log_gamma(double x);

/// Gamma(shape, rate) on a Poisson mean.
struct PoissonPrior {
    double shape = 1.0;
    double rate = 1.0;

    friend bool operator==(const PoissonPrior&, const PoissonPrior&) = default;
};

/// Dirichlet on the category probabilities of a multinomial component.
struct MultinomialPrior {
    std::vector<double> concentration;

    friend bool operator==(const MultinomialPrior&, const MultinomialPrior&) = default;
};

/// Normal-inverse-Gamma: mu | sigma ~ N(location, sigma^2 / precision_scale),
/// sigma^-2 ~ Gamma(shape / 2, rate = scale / 2).
struct NormalPrior {
    double location = 0.0;
    double precision_scale = 1.0;
    double shape = 1.0;
    double scale = 1.0;

    friend bool operator==(const NormalPrior&, const NormalPrior&) = default;
};

using ComponentPrior = std::variant<PoissonPrior, MultinomialPrior, NormalPrior>;
using ComponentPosterior = ComponentPrior;

Family family_of(const ComponentPrior& prior);

void validate(const PoissonPrior& prior);
void validate(const MultinomialPrior& prior);
void validate(const NormalPrior& prior);
void validate(const ComponentPrior& prior);

struct PoissonStatistic {
    std::int64_t count = 0;
    std::int64_t sum = 0;
};

struct MultinomialStatistic {
    std::int64_t count = 0;
    std::vector<std::int64_t> sums;
};

struct NormalStatistic {
    std::int64_t count = 0;
    double sum = 0.0;
    double sum_squares = 0.0;
};

PoissonPrior conjugate_update(const PoissonPrior& prior, const PoissonStatistic& stat);
MultinomialPrior conjugate_update(const MultinomialPrior& prior, const MultinomialStatistic& stat);

/// With n = 0 the prior comes back untouched (the within-group sum of squares is
/// taken as zero for an empty group).
NormalPrior conjugate_update(const NormalPrior& prior, const NormalStatistic& stat);

/// Update from an integer block of a lattice key: `count` observations whose
/// summed statistics are `sums` (one value for Poisson, v for multinomial).
ComponentPosterior conjugate_update(const ComponentPrior& prior, std::int64_t count,
                                    std::span<const std::int64_t> sums);

/// log K for Gamma(xi, delta): log Gamma(xi) - xi log delta.
double log_partition(const PoissonPrior& p);
/// log K for Dirichlet(beta): sum log Gamma(beta_u) - log Gamma(sum beta_u).
double log_partition(const MultinomialPrior& p);
/// Full normal-inverse-Gamma constant:
/// 0.5 log(2 pi) - 0.5 log c + log Gamma(a/2) - (a/2) log(b/2).
double log_partition(const NormalPrior& p);
double log_partition(const ComponentPrior& p);

/// Generic entry point keyed by family. For Poisson `aggregate` holds the single
/// shape value xi and `count_hyper` is the rate delta. For multinomial
/// `aggregate` is the concentration vector and `count_hyper` is ignored. For
/// normal `aggregate` is (location, precision_scale, shape, scale).
double log_partition_constant(Family family, std::span<const double> aggregate, double count_hyper);

double posterior_mean(const PoissonPrior& p);
std::vector<double> posterior_mean(const MultinomialPrior& p);
/// Mean of mu.
double posterior_mean(const NormalPrior& p);
std::vector<double> component_posterior_mean(const ComponentPosterior& p);

/// Gamma density of the Poisson mean; 0 for lambda < 0.
double density(const PoissonPrior& p, double lambda);
/// Beta marginal of category `category`; 0 outside [0, 1].
double density(const MultinomialPrior& p, std::size_t category, double q);
/// Student-t marginal of mu.
double mean_density(const NormalPrior& p, double mu);
/// Inverse-Gamma marginal of sigma^2; 0 for s2 <= 0.
double variance_density(const NormalPrior& p, double s2);

/// Density of a mean-value parameter. `coordinate` selects the category for
/// multinomial, and mu (0) or sigma^2 (1) for normal.
double component_posterior_density(const ComponentPosterior& p, double point,
                                   std::size_t coordinate = 0);

/// Log density of Gamma(shape, rate) at t > 0.
double log_gamma_density(double shape, double rate, double t);
/// Log density of Beta(a, b) at q in (0, 1).
double log_beta_density(double a, double b, double q);
/// Density of Gamma / Beta including boundary points (0 and 1 for Beta).
double gamma_density(double shape, double rate, double t);
double beta_density(double a, double b, double q);

/// A homogeneous sample from one family. Discrete observations are kept as
/// rows of integer sufficient statistics; normal observations as reals.
class Dataset {
public:
    static Dataset poisson(std::vector<std::int64_t> counts);
    static Dataset multinomial(const std::vector<std::vector<std::int64_t>>& rows);
    static Dataset normal(std::vector<double> values);

    Family family() const noexcept { return family_; }
    std::size_t size() const noexcept { return size_; }
    bool empty() const noexcept { return size_ == 0; }

    /// Width of R(x): 1 (Poisson), v (multinomial), 2 (normal).
    std::size_t statistic_dim() const noexcept { return dim_; }

    std::span<const std::int64_t> counts(std::size_t i) const;
    double value(std::size_t i) const { return reals_.at(i); }
    const std::vector<double>& values() const noexcept { return reals_; }

    /// sum_i log h(x_i): -log x! (Poisson), log of the multinomial coefficient,
    /// -0.5 log(2 pi) (normal).
    double log_base_measure() const;

    /// Observations `order[0], order[1], ...`; `order` must be a permutation of
    /// a subset of indices.
    Dataset select(std::span<const std::size_t> order) const;

private:
    Dataset(Family family, std::size_t size, std::size_t dim) : family_(family), size_(size), dim_(dim) {}

    Family family_;
    std::size_t size_;
    std::size_t dim_;
    std::vector<std::int64_t> flat_;
    std::vector<double> reals_;
};

} // namespace mixexact
