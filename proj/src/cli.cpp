#include "mixexact/cli.hpp"

#include "mixexact/errors.hpp"
#include "mixexact/oracle.hpp"
#include "mixexact/stat_lattice.hpp"
#include "mixexact/synthetic.hpp"

#include <CLI11.hpp>
#include <fmt/format.h>
#include <json.hpp>

#include <algorithm>
#include <charconv>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <limits>
#include <sstream>

namespace mixexact::cli {

namespace {

using nlohmann::json;

std::string trim(std::string_view s) {
    const auto first = s.find_first_not_of(" \t\r\n");
    if (first == std::string_view::npos) return {};
    const auto last = s.find_last_not_of(" \t\r\n");
    return std::string(s.substr(first, last - first + 1));
}

std::vector<std::string> split(std::string_view s, char sep) {
    std::vector<std::string> parts;
    std::size_t start = 0;
    while (true) {
        const auto pos = s.find(sep, start);
        parts.push_back(trim(s.substr(start, pos == std::string_view::npos ? std::string_view::npos : pos - start)));
        if (pos == std::string_view::npos) break;
        start = pos + 1;
    }
    return parts;
}

template <class T>
bool parse_number(const std::string& text, T& value) {
    const char* begin = text.data();
    const char* end = begin + text.size();
    const auto [ptr, ec] = std::from_chars(begin, end, value);
    return ec == std::errc() && ptr == end && !text.empty();
}

double parse_real(const std::string& text, const std::string& what) {
    double value = 0.0;
    if (!parse_number(text, value) || !std::isfinite(value)) {
        throw InvalidArgument("cannot parse " + what + " value '" + text + "'");
    }
    return value;
}

std::vector<double> parse_reals(const std::string& text, char sep, const std::string& what) {
    std::vector<double> out;
    for (const auto& part : split(text, sep)) out.push_back(parse_real(part, what));
    return out;
}

/// One spec per component, or a single spec applied to all k.
template <class T>
std::vector<T> replicate(std::vector<T> specs, std::size_t k, const std::string& what) {
    if (specs.size() == 1 && k > 1) specs.assign(k, specs.front());
    if (specs.size() != k) {
        throw InvalidArgument(what + " lists " + std::to_string(specs.size()) + " components, expected " +
                              std::to_string(k));
    }
    return specs;
}

std::vector<ComponentPrior> parse_gamma_flag(const std::string& text) {
    std::vector<ComponentPrior> out;
    for (const auto& item : split(text, ',')) {
        const auto ab = parse_reals(item, ':', "--gamma");
        if (ab.size() != 2) throw InvalidArgument("--gamma entries are shape:rate");
        out.emplace_back(PoissonPrior{ab[0], ab[1]});
    }
    return out;
}

std::vector<ComponentPrior> parse_beta_flag(const std::string& text) {
    std::vector<ComponentPrior> out;
    for (const auto& item : split(text, ';')) out.emplace_back(MultinomialPrior{parse_reals(item, ',', "--beta")});
    return out;
}

std::vector<ComponentPrior> parse_nig_flag(const std::string& text) {
    std::vector<ComponentPrior> out;
    for (const auto& item : split(text, ',')) {
        const auto v = parse_reals(item, ':', "--nig");
        if (v.size() != 4) throw InvalidArgument("--nig entries are location:precision_scale:shape:scale");
        out.emplace_back(NormalPrior{v[0], v[1], v[2], v[3]});
    }
    return out;
}

ComponentPrior prior_from_json(const json& j, Family family) {
    switch (family) {
    case Family::poisson:
        return PoissonPrior{j.at("shape").get<double>(), j.at("rate").get<double>()};
    case Family::multinomial:
        return MultinomialPrior{j.at("beta").get<std::vector<double>>()};
    case Family::normal:
        return NormalPrior{j.at("location").get<double>(), j.at("precision_scale").get<double>(),
                           j.at("shape").get<double>(), j.at("scale").get<double>()};
    }
    throw InvalidArgument("unknown family");
}

std::ostream& open_output(const std::string& path, std::ofstream& file, std::ostream& fallback) {
    if (path.empty()) return fallback;
    file.open(path, std::ios::binary);
    if (!file) throw InvalidArgument("cannot open output file '" + path + "'");
    return file;
}

struct Param {
    enum Kind { lambda, q, p } kind;
    std::size_t component = 0; ///< 0-based
    std::size_t category = 0;  ///< 0-based, q only
};

Param parse_param(const std::string& text, Family family) {
    auto index = [&](const std::string& digits) {
        std::size_t v = 0;
        if (!parse_number(digits, v) || v < 1) throw InvalidArgument("bad parameter index in '" + text + "'");
        return v - 1;
    };
    if (text.rfind("lambda", 0) == 0) {
        if (family != Family::poisson) throw InvalidArgument("lambda<j> needs the Poisson family");
        return {Param::lambda, index(text.substr(6)), 0};
    }
    if (text.rfind("q", 0) == 0) {
        if (family != Family::multinomial) throw InvalidArgument("q<j>,<u> needs the multinomial family");
        const auto parts = split(text.substr(1), ',');
        if (parts.size() != 2) throw InvalidArgument("multinomial parameters are written q<j>,<u>");
        return {Param::q, index(parts[0]), index(parts[1])};
    }
    if (text.rfind("p", 0) == 0) return {Param::p, index(text.substr(1)), 0};
    throw InvalidArgument("unknown parameter '" + text + "' (expected lambda<j>, q<j>,<u> or p<j>)");
}

struct Flags {
    std::optional<std::string> config, data, family, alpha, gamma, beta, nig, out, dump, table, param, grid_mode;
    std::optional<std::size_t> k, budget, threads, points;
    std::optional<std::uint64_t> oracle_cap;
    std::optional<double> lower, upper, threshold;
    bool compare = false;
    // generate
    std::uint64_t seed = 1;
    std::size_t n = 20;
    double lambda = 1.0;
    std::size_t n2 = 0;
    double lambda2 = 1.0;
};

RunConfig make_config(const Flags& f) {
    RunConfig c;
    if (f.config) {
        std::ifstream in(*f.config);
        if (!in) throw InvalidArgument("cannot read config file '" + *f.config + "'");
        std::stringstream buf;
        buf << in.rdbuf();
        apply_json(c, buf.str());
        const std::filesystem::path data(c.data_path);
        if (!c.data_path.empty() && data.is_relative()) {
            c.data_path = (std::filesystem::path(*f.config).parent_path() / data).string();
        }
    }
    if (f.family) c.family = parse_family(*f.family);
    if (f.k) c.k = *f.k;
    if (f.alpha) c.alpha = parse_reals(*f.alpha, ',', "--alpha");
    if (f.gamma) c.priors = parse_gamma_flag(*f.gamma);
    if (f.beta) c.priors = parse_beta_flag(*f.beta);
    if (f.nig) c.priors = parse_nig_flag(*f.nig);
    if (f.data) c.data_path = *f.data;
    if (f.out) c.output_path = *f.out;
    if (f.dump) c.dump_path = *f.dump;
    if (f.table) c.table_path = *f.table;
    if (f.param) c.grid.param = *f.param;
    if (f.grid_mode) {
        if (*f.grid_mode == "auto") c.grid.mode = GridMode::automatic;
        else if (*f.grid_mode == "display") c.grid.mode = GridMode::display;
        else throw InvalidArgument("--grid-mode is 'auto' or 'display'");
    }
    if (f.lower) c.grid.lower = *f.lower;
    if (f.upper) c.grid.upper = *f.upper;
    if (f.points) c.grid.points = *f.points;
    if (f.budget) c.entry_budget = *f.budget;
    if (f.oracle_cap) c.oracle_cap = *f.oracle_cap;
    if (f.threads) c.threads = *f.threads;
    if (f.threshold) c.threshold = *f.threshold;
    if (c.k < 1) throw InvalidArgument("k must be >= 1");
    if (c.grid.points < 2) throw InvalidArgument("a grid needs at least 2 points");
    if (c.grid.lower.has_value() != c.grid.upper.has_value()) {
        throw InvalidArgument("--lower and --upper must be given together");
    }
    return c;
}

Dataset load_data(const RunConfig& c, std::ostream& err) {
    if (c.data_path.empty()) throw InvalidArgument("no data file given (--data)");
    IngestReport report;
    Dataset data = ingest(c.data_path, c.family, &report);
    err << fmt::format("data: n={} min={:.17g} max={:.17g} sum={:.17g}\n", report.n, report.min, report.max,
                       report.sum);
    return data;
}

LatticeOptions lattice_options(const RunConfig& c) { return {c.entry_budget, c.threads, LatticeBackend::hash_merge}; }

WeightedPosterior engine_posterior(const RunConfig& c, const Dataset& data) {
    MixturePrior prior = resolve_prior(c, data);
    return normalize(build(data, c.k, lattice_options(c)), std::move(prior), {c.threads});
}

double relative_deviation(double a, double b) {
    const double scale = std::max(std::abs(a), std::abs(b));
    return scale == 0.0 ? 0.0 : std::abs(a - b) / scale;
}

int cmd_enumerate(const RunConfig& c, std::ostream& out, std::ostream& err) {
    const Dataset data = load_data(c, err);
    const StatisticLattice lattice = build(data, c.k, lattice_options(c));
    if (!c.dump_path.empty()) {
        std::ofstream file(c.dump_path, std::ios::binary);
        if (!file) throw InvalidArgument("cannot open dump file '" + c.dump_path + "'");
        lattice.dump(file);
    }
    const Multiplicity total = lattice.total_count();
    const Multiplicity expected = power(c.k, data.size());
    const bool ok = total == expected;
    out << "distinct=" << lattice.distinct_count() << " total=" << total.str() << " expected=" << expected.str()
        << (ok ? " OK" : " MISMATCH") << '\n';
    return ok ? kOk : kFailure;
}

int cmd_posterior(const RunConfig& c, std::ostream& out, std::ostream& err) {
    const Dataset data = load_data(c, err);
    const auto wp = engine_posterior(c, data);
    std::ofstream file;
    open_output(c.output_path, file, out) << to_text(summarize(wp, data, c.threshold));
    return kOk;
}

int cmd_marginal(const RunConfig& c, std::ostream& out, std::ostream& err) {
    if (c.grid.param.empty()) throw InvalidArgument("marginal needs --param");
    const Dataset data = load_data(c, err);
    const Param param = parse_param(c.grid.param, c.family);
    const auto wp = engine_posterior(c, data);
    if (param.component >= c.k) throw InvalidArgument("parameter component index exceeds k");
    if (param.kind == Param::q && param.category >= data.statistic_dim()) {
        throw InvalidArgument("parameter category index exceeds the number of categories");
    }

    std::vector<double> grid;
    if (c.grid.lower) {
        grid = warped_grid(*c.grid.lower, *c.grid.upper, c.grid.points);
    } else if (c.grid.mode == GridMode::display) {
        if (param.kind == Param::lambda) {
            double top = 0.0;
            for (std::size_t i = 0; i < data.size(); ++i) top = std::max(top, static_cast<double>(data.counts(i)[0]));
            if (!(1.2 * top > 0.01)) throw InvalidArgument("display grid needs max(data) > 0");
            grid = warped_grid(0.01, 1.2 * top, c.grid.points);
        } else {
            grid = warped_grid(0.01, 0.99, c.grid.points);
        }
    } else if (param.kind == Param::p) {
        grid = default_weight_grid(wp, param.component, c.grid.points);
    } else {
        grid = default_component_grid(wp, param.component, param.category, c.grid.points);
    }

    const EngineOptions eopt{c.threads};
    const DensityGrid density = param.kind == Param::p
                                    ? marginal_weight_density(wp, param.component, grid, eopt)
                                    : marginal_component_density(wp, param.component, grid, param.category, eopt);
    std::ofstream file;
    density.write_csv(open_output(c.output_path, file, out));
    return kOk;
}

int cmd_evidence(const RunConfig& c, std::ostream& out, std::ostream& err) {
    const Dataset data = load_data(c, err);
    const auto wp = engine_posterior(c, data);
    out << fmt::format("{:.17g}", log_evidence(wp, data)) << '\n';
    return kOk;
}

int cmd_concentration(const RunConfig& c, std::ostream& out, std::ostream& err) {
    const Dataset data = load_data(c, err);
    const auto wp = engine_posterior(c, data);
    out << fmt::format("concentration={} distinct={} threshold={}\n", mass_concentration(wp, c.threshold),
                       wp.size(), c.threshold);
    return kOk;
}

int cmd_oracle(const RunConfig& c, bool compare, std::ostream& out, std::ostream& err) {
    const Dataset data = load_data(c, err);
    const MixturePrior prior = resolve_prior(c, data);
    const OracleOptions oopt{c.oracle_cap, c.threads};
    const OracleResult result = oracle_posterior(data, prior, oopt, c.threshold);
    if (!c.table_path.empty()) {
        std::ofstream file(c.table_path, std::ios::binary);
        if (!file) throw InvalidArgument("cannot open table file '" + c.table_path + "'");
        write_allocation_table(file, data, prior, oopt);
    }
    std::ofstream file;
    std::ostream& sink = open_output(c.output_path, file, out);
    sink << to_text(result.summary);
    if (!compare) return kOk;
    if (data.family() == Family::normal) {
        out << "compare: no lattice for the normal family\n";
        return kOk;
    }

    const auto wp = normalize(build(data, c.k, lattice_options(c)), prior, {c.threads});
    bool structural = wp.size() == result.groups.size();
    double worst = 0.0;
    for (std::size_t i = 0; structural && i < wp.size(); ++i) {
        const auto& g = result.groups[i];
        structural = std::ranges::equal(wp.lattice().key(i), g.key) && wp.lattice().multiplicity(i) == g.multiplicity;
        worst = std::max(worst, relative_deviation(wp.weight(i), g.weight));
    }
    const auto ep = expected_weights(wp);
    const auto em = expected_component_means(wp);
    for (std::size_t j = 0; structural && j < c.k; ++j) {
        worst = std::max(worst, relative_deviation(ep[j], result.summary.expected_weights[j]));
        for (std::size_t u = 0; u < em[j].size(); ++u) {
            worst = std::max(worst, relative_deviation(em[j][u], result.summary.expected_means[j][u]));
        }
    }
    worst = std::max(worst, std::abs(std::expm1(log_evidence(wp, data) - result.summary.log_evidence)));
    const bool match = structural && worst <= 1e-10;
    out << (match ? "MATCH" : "MISMATCH") << fmt::format(" max_rel_dev={:.3e}", worst)
        << (structural ? "" : " (lattice keys or multiplicities differ)") << '\n';
    return match ? kOk : kFailure;
}

int cmd_generate(const Flags& f, std::ostream& out) {
    const auto sample = poisson_mixture_sample(f.n, f.lambda, f.n2, f.lambda2, f.seed);
    std::ofstream file;
    std::ostream& sink = open_output(f.out.value_or(""), file, out);
    for (std::int64_t x : sample) sink << x << '\n';
    return kOk;
}

} // namespace

Dataset parse_dataset(std::istream& in, Family family, IngestReport* report) {
    std::vector<std::int64_t> counts;
    std::vector<std::vector<std::int64_t>> rows;
    std::vector<double> reals;
    IngestReport r;
    r.min = std::numeric_limits<double>::infinity();
    r.max = -std::numeric_limits<double>::infinity();
    auto tally = [&](double x) {
        ++r.n;
        r.min = std::min(r.min, x);
        r.max = std::max(r.max, x);
        r.sum += x;
    };

    std::string raw;
    std::size_t line_no = 0;
    while (std::getline(in, raw)) {
        ++line_no;
        const std::string line = trim(raw);
        if (line.empty()) continue;
        const std::string where = "line " + std::to_string(line_no) + ": ";
        if (family == Family::normal) {
            double x = 0.0;
            if (!parse_number(line, x) || !std::isfinite(x)) throw IngestError(where + "not a finite real '" + line + "'", line_no);
            reals.push_back(x);
            tally(x);
            continue;
        }
        const auto fields = split(line, ',');
        std::vector<std::int64_t> row;
        for (const auto& field : fields) {
            std::int64_t x = 0;
            if (!parse_number(field, x)) throw IngestError(where + "not an integer '" + field + "'", line_no);
            if (x < 0) throw IngestError(where + "negative count " + field, line_no);
            row.push_back(x);
        }
        if (family == Family::poisson) {
            if (row.size() != 1) throw IngestError(where + "expected a single count", line_no);
            counts.push_back(row[0]);
            tally(static_cast<double>(row[0]));
            continue;
        }
        if (row.size() < 2) throw IngestError(where + "multinomial rows need at least 2 categories", line_no);
        if (!rows.empty() && row.size() != rows.front().size()) {
            throw IngestError(where + "row has " + std::to_string(row.size()) + " categories, expected " +
                                  std::to_string(rows.front().size()),
                              line_no);
        }
        std::int64_t total = 0;
        for (std::int64_t x : row) total += x;
        if (total < 1) throw IngestError(where + "row total must be >= 1", line_no);
        tally(static_cast<double>(total));
        rows.push_back(std::move(row));
    }
    if (r.n == 0) throw IngestError("no observations", 0);
    if (report) *report = r;
    switch (family) {
    case Family::poisson:
        return Dataset::poisson(std::move(counts));
    case Family::multinomial:
        return Dataset::multinomial(rows);
    case Family::normal:
        return Dataset::normal(std::move(reals));
    }
    throw InvalidArgument("unknown family");
}

Dataset ingest(const std::string& path, Family family, IngestReport* report) {
    std::ifstream in(path);
    if (!in) throw IngestError("cannot open data file '" + path + "'", 0);
    return parse_dataset(in, family, report);
}

void apply_json(RunConfig& c, const std::string& json_text) {
    json doc;
    try {
        doc = json::parse(json_text);
    } catch (const json::parse_error& e) {
        throw InvalidArgument(std::string("config is not valid JSON: ") + e.what());
    }
    try {
        if (doc.contains("family")) c.family = parse_family(doc["family"].get<std::string>());
        if (doc.contains("k")) c.k = doc["k"].get<std::size_t>();
        if (doc.contains("alpha")) c.alpha = doc["alpha"].get<std::vector<double>>();
        if (doc.contains("priors")) {
            c.priors.clear();
            for (const auto& p : doc["priors"]) c.priors.push_back(prior_from_json(p, c.family));
        }
        if (doc.contains("grid")) {
            const auto& g = doc["grid"];
            if (g.contains("param")) c.grid.param = g["param"].get<std::string>();
            if (g.contains("lower")) c.grid.lower = g["lower"].get<double>();
            if (g.contains("upper")) c.grid.upper = g["upper"].get<double>();
            if (g.contains("points")) c.grid.points = g["points"].get<std::size_t>();
            if (g.contains("mode")) {
                const auto mode = g["mode"].get<std::string>();
                if (mode == "auto") c.grid.mode = GridMode::automatic;
                else if (mode == "display") c.grid.mode = GridMode::display;
                else throw InvalidArgument("grid.mode is 'auto' or 'display'");
            }
        }
        if (doc.contains("entry_budget")) c.entry_budget = doc["entry_budget"].get<std::size_t>();
        if (doc.contains("oracle_cap")) c.oracle_cap = doc["oracle_cap"].get<std::uint64_t>();
        if (doc.contains("threads")) c.threads = doc["threads"].get<std::size_t>();
        if (doc.contains("threshold")) c.threshold = doc["threshold"].get<double>();
        if (doc.contains("data")) c.data_path = doc["data"].get<std::string>();
        if (doc.contains("output")) c.output_path = doc["output"].get<std::string>();
        if (doc.contains("dump")) c.dump_path = doc["dump"].get<std::string>();
        if (doc.contains("table")) c.table_path = doc["table"].get<std::string>();
    } catch (const json::exception& e) {
        throw InvalidArgument(std::string("bad config field: ") + e.what());
    }
}

MixturePrior resolve_prior(const RunConfig& c, const Dataset& data) {
    if (data.family() != c.family) throw InvalidArgument("data family does not match the configured family");
    MixturePrior prior;
    prior.alpha = c.alpha.empty() ? std::vector<double>(c.k, 1.0) : replicate(c.alpha, c.k, "alpha");
    if (!c.priors.empty()) {
        prior.components = replicate(c.priors, c.k, "component priors");
    } else {
        switch (c.family) {
        case Family::poisson:
            prior.components.assign(c.k, PoissonPrior{1.0, 1.0});
            break;
        case Family::multinomial:
            prior.components.assign(c.k, MultinomialPrior{std::vector<double>(data.statistic_dim(), 0.5)});
            break;
        case Family::normal:
            prior.components.assign(c.k, NormalPrior{0.0, 0.1, 4.0, 4.0});
            break;
        }
    }
    if (prior.family() != c.family) throw InvalidArgument("component priors do not match the configured family");
    prior.validate();
    return prior;
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    Flags f;
    CLI::App app{"Exact Bayesian inference for finite exponential-family mixtures", "mixexact"};
    app.require_subcommand(1);
    app.fallthrough();
    app.add_option("--config", f.config, "JSON configuration file");
    app.add_option("--data", f.data, "data file");
    app.add_option("--family", f.family, "poisson | multinomial | normal");
    app.add_option("-k,--components", f.k, "number of mixture components");
    app.add_option("--alpha", f.alpha, "Dirichlet weight concentrations, comma-separated");
    app.add_option("--gamma", f.gamma, "Poisson priors shape:rate[,shape:rate...]");
    app.add_option("--beta", f.beta, "multinomial priors b1,b2,...[;b1,b2,...]");
    app.add_option("--nig", f.nig, "normal priors location:c:a:b[,...]");
    app.add_option("--budget", f.budget, "lattice entry budget");
    app.add_option("--oracle-cap", f.oracle_cap, "maximum k^n for brute force");
    app.add_option("--threads", f.threads, "worker threads (0 = machine parallelism)");
    app.add_option("--out", f.out, "output file (default: standard output)");

    auto* enumerate = app.add_subcommand("enumerate", "build the statistic lattice and check k^n conservation");
    enumerate->add_option("--dump", f.dump, "write the lattice dump here");
    auto* posterior = app.add_subcommand("posterior", "write the posterior summary");
    posterior->add_option("--threshold", f.threshold, "mass threshold for the concentration count");
    auto* marginal = app.add_subcommand("marginal", "write a marginal density grid as CSV");
    marginal->add_option("--param", f.param, "lambda<j>, q<j>,<u> or p<j>");
    marginal->add_option("--lower", f.lower, "grid lower bound");
    marginal->add_option("--upper", f.upper, "grid upper bound");
    marginal->add_option("--points", f.points, "grid points");
    marginal->add_option("--grid-mode", f.grid_mode, "auto (mass-covering) or display");
    app.add_subcommand("evidence", "print the log marginal likelihood");
    auto* concentration = app.add_subcommand("concentration", "count statistics carrying the top posterior mass");
    concentration->add_option("--threshold", f.threshold, "mass threshold in (0, 1]");
    auto* oracle = app.add_subcommand("oracle", "brute-force posterior over all k^n allocations");
    oracle->add_flag("--compare", f.compare, "also build the lattice and compare");
    oracle->add_option("--table", f.table, "write the per-allocation weight table as CSV");
    oracle->add_option("--threshold", f.threshold, "mass threshold for the concentration count");
    auto* generate = app.add_subcommand("generate", "print a seeded synthetic Poisson sample");
    generate->add_option("--seed", f.seed, "random seed");
    generate->add_option("--n", f.n, "draws from the first Poisson");
    generate->add_option("--lambda", f.lambda, "first Poisson mean");
    generate->add_option("--n2", f.n2, "draws from the second Poisson");
    generate->add_option("--lambda2", f.lambda2, "second Poisson mean");

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return kOk;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << '\n';
        return kInvalidConfig;
    }

    try {
        if (generate->parsed()) return cmd_generate(f, out);
        const RunConfig config = make_config(f);
        if (enumerate->parsed()) return cmd_enumerate(config, out, err);
        if (posterior->parsed()) return cmd_posterior(config, out, err);
        if (marginal->parsed()) return cmd_marginal(config, out, err);
        if (concentration->parsed()) return cmd_concentration(config, out, err);
        if (oracle->parsed()) return cmd_oracle(config, f.compare, out, err);
        return cmd_evidence(config, out, err);
    } catch (const IngestError& e) {
        err << "error: " << e.what() << '\n';
        return kIngestFailure;
    } catch (const ResourceLimit& e) {
        err << "error: " << e.what() << '\n';
        return kResourceLimit;
    } catch (const OracleCapExceeded& e) {
        err << "error: " << e.what() << '\n';
        return kOracleCap;
    } catch (const InvalidArgument& e) {
        err << "error: " << e.what() << '\n';
        return kInvalidConfig;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return kFailure;
    }
}

} // namespace mixexact::cli
