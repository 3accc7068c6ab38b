#pragma once

// Command-line front end. `run` is the whole program minus main(), so tests can
// drive every subcommand in-process.

#include "mixexact/family_models.hpp"
#include "mixexact/posterior_engine.hpp"

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace mixexact::cli {

enum ExitCode : int {
    kOk = 0,
    kFailure = 1, ///< e.g. an oracle comparison mismatch
    kInvalidConfig = 2,
    kIngestFailure = 3,
    kResourceLimit = 4,
    kOracleCap = 5,
};

struct IngestReport {
    std::size_t n = 0;
    double min = 0.0;
    double max = 0.0;
    double sum = 0.0; ///< for multinomial: over row totals
};

/// Poisson: one nonnegative integer per line. Multinomial: comma-separated
/// rows of nonnegative integers. Normal: one real per line. Blank lines are
/// skipped; errors carry the 1-based line number.
Dataset ingest(const std::string& path, Family family, IngestReport* report = nullptr);
Dataset parse_dataset(std::istream& in, Family family, IngestReport* report = nullptr);

enum class GridMode { automatic, display };

struct GridSpec {
    std::string param;           ///< lambda<j>, q<j>,<u>, or p<j> (1-based)
    std::optional<double> lower; ///< both bounds set: uniform grid over them
    std::optional<double> upper;
    std::size_t points = 512;
    GridMode mode = GridMode::automatic;
};

struct RunConfig {
    Family family = Family::poisson;
    std::size_t k = 2;
    std::vector<double> alpha;                 ///< empty: all ones
    std::vector<ComponentPrior> priors;        ///< empty: family defaults
    GridSpec grid;
    std::size_t entry_budget = 5'000'000;
    std::uint64_t oracle_cap = std::uint64_t{1} << 24;
    std::size_t threads = 0;
    double threshold = 0.99;
    std::string data_path;
    std::string output_path;                   ///< empty: standard output
    std::string dump_path;                     ///< enumerate: lattice dump target
    std::string table_path;                    ///< oracle: per-allocation CSV target
};

/// Fills defaults for alpha and priors given the data (Dirichlet weights 1,
/// Gamma(1, 1), Dirichlet(1/2, ..., 1/2), N-IG(0, 0.1, 4, 4)) and validates.
MixturePrior resolve_prior(const RunConfig& config, const Dataset& data);

/// Applies a JSON configuration document on top of `config`.
void apply_json(RunConfig& config, const std::string& json_text);

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

} // namespace mixexact::cli
