#pragma once

// Exact mixture posterior from a statistic lattice.
//
// Each lattice entry contributes one conjugate posterior term. Its log weight is
//
//   log mu + sum_j log Gamma(n_j + alpha_j) - log Gamma(n + sum alpha)
//          + log Gamma(sum alpha) - sum_j log Gamma(alpha_j)
//          + sum_j [log K(updated_j) - log K(prior_j)],
//
// i.e. mu times the complete-data marginal likelihood of that allocation class
// without the data base measure prod h(x_i). The weights are normalised by
// max-subtraction; all reductions run in key order so results are
// reproducible to the last bit regardless of the thread count.
//
// Posterior means are computed unconditionally. Under exchangeable priors the
// posterior is label-symmetric and the per-component means coincide, so they
// are only informative when the priors separate the components.

#include "mixexact/family_models.hpp"
#include "mixexact/stat_lattice.hpp"

#include <cstddef>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

namespace mixexact {

struct MixturePrior {
    std::vector<double> alpha;                ///< Dirichlet weights, one per component
    std::vector<ComponentPrior> components;   ///< same family for all j

    static MixturePrior symmetric(std::size_t k, double alpha, const ComponentPrior& component);

    std::size_t size() const noexcept { return alpha.size(); }
    Family family() const;

    /// Throws InvalidPrior / InvalidArgument on any domain or shape violation.
    void validate() const;
};

struct EngineOptions {
    std::size_t threads = 1; ///< 0 = machine parallelism
};

/// Unnormalised log weight of one lattice entry (see the header comment).
double log_unnormalized_weight(std::span<const std::int64_t> key, const Multiplicity& multiplicity,
                               const MixturePrior& prior);

class WeightedPosterior {
public:
    const StatisticLattice& lattice() const noexcept { return lattice_; }
    const MixturePrior& prior() const noexcept { return prior_; }

    std::size_t size() const noexcept { return weights_.size(); }
    std::size_t components() const noexcept { return prior_.size(); }

    double weight(std::size_t i) const { return weights_[i]; }
    double log_weight(std::size_t i) const { return log_weights_[i]; }
    const std::vector<double>& weights() const noexcept { return weights_; }

    /// log sum_i exp(log_weight(i)), taken before normalisation.
    double log_weight_sum() const noexcept { return log_weight_sum_; }

    ComponentPosterior component_posterior(std::size_t i, std::size_t j) const;
    /// (n_1 + alpha_1, ..., n_k + alpha_k) for entry i.
    std::vector<double> dirichlet_posterior(std::size_t i) const;

private:
    friend WeightedPosterior normalize(StatisticLattice, MixturePrior, const EngineOptions&);

    WeightedPosterior(StatisticLattice lattice, MixturePrior prior)
        : lattice_(std::move(lattice)), prior_(std::move(prior)) {}

    StatisticLattice lattice_;
    MixturePrior prior_;
    std::vector<double> log_weights_;
    std::vector<double> weights_;
    double log_weight_sum_ = 0.0;
};

WeightedPosterior normalize(StatisticLattice lattice, MixturePrior prior, const EngineOptions& options = {});

/// E[p_j | x] for every j.
std::vector<double> expected_weights(const WeightedPosterior& wp);

/// E[lambda_j | x] (one value per j) or E[q_ju | x] (v values per j).
std::vector<std::vector<double>> expected_component_means(const WeightedPosterior& wp);

struct DensityGrid {
    std::vector<double> points;
    std::vector<double> values;

    /// Trapezoidal integral over the grid.
    double integral() const;

    /// Two-column CSV with header "param,density".
    void write_csv(std::ostream& out) const;
    std::string csv() const;
};

/// Posterior marginal of component j's mean parameter at each grid point.
/// `coordinate` picks the category for multinomial components.
DensityGrid marginal_component_density(const WeightedPosterior& wp, std::size_t j, std::span<const double> grid,
                                       std::size_t coordinate = 0, const EngineOptions& options = {});

/// Posterior marginal of p_j: a mixture of Beta(n_j + alpha_j, n - n_j + sum_{i != j} alpha_i).
/// Grid points must lie in (0, 1).
DensityGrid marginal_weight_density(const WeightedPosterior& wp, std::size_t j, std::span<const double> grid,
                                    const EngineOptions& options = {});

/// Mass-covering grid for a component marginal: spans the 1e-8 and 1 - 1e-8
/// quantiles of the widest-reaching mixture members, with points compressed
/// towards any edge where a member density is unbounded.
std::vector<double> default_component_grid(const WeightedPosterior& wp, std::size_t j, std::size_t coordinate = 0,
                                           std::size_t points = 512);
std::vector<double> default_weight_grid(const WeightedPosterior& wp, std::size_t j, std::size_t points = 512);

/// Grid of `points` values over [lower, upper]. Exponents > 1 cluster points
/// polynomially towards the corresponding edge; 1 gives a uniform grid.
std::vector<double> warped_grid(double lower, double upper, std::size_t points, double left_power = 1.0,
                                double right_power = 1.0);

/// Marginal likelihood log m(x), including the base measure of the data.
double log_evidence(const StatisticLattice& lattice, const MixturePrior& prior, const Dataset& data,
                    const EngineOptions& options = {});
double log_evidence(const WeightedPosterior& wp, const Dataset& data);

double bayes_factor(double log_m_a, double log_m_b);

/// Smallest number of entries, largest weights first (ties by key order),
/// whose weights reach `threshold` in (0, 1].
std::size_t mass_concentration(const WeightedPosterior& wp, double threshold);
std::size_t mass_concentration(std::span<const double> weights, double threshold);

struct PosteriorSummary {
    Family family = Family::poisson;
    std::size_t components = 0;
    std::size_t observations = 0;
    std::vector<double> expected_weights;
    std::vector<std::vector<double>> expected_means;
    double log_evidence = 0.0;
    std::size_t distinct_statistics = 0;
    double mass_threshold = 0.99;
    std::size_t mass_statistics = 0;
};

PosteriorSummary summarize(const WeightedPosterior& wp, const Dataset& data, double threshold = 0.99);

/// UTF-8 "key=value" lines in a fixed order; doubles printed round-trip exact.
std::string to_text(const PosteriorSummary& summary);

} // namespace mixexact
