#include "mixexact/stat_lattice.hpp"

#include "mixexact/errors.hpp"
#include "mixexact/parallel.hpp"

#include <boost/container_hash/hash.hpp>

#include <algorithm>
#include <cmath>
#include <istream>
#include <limits>
#include <numeric>
#include <ostream>
#include <sstream>
#include <unordered_map>

namespace mixexact {

namespace {

using Key = std::vector<std::int64_t>;

struct KeyHash {
    std::size_t operator()(const Key& key) const noexcept { return boost::hash_range(key.begin(), key.end()); }
};

using SuccessorMap = std::unordered_map<Key, Multiplicity, KeyHash>;

[[noreturn]] void over_budget(std::size_t reached, std::size_t budget) {
    throw ResourceLimit("statistic lattice reached " + std::to_string(reached) + " entries (budget " +
                            std::to_string(budget) + ")",
                        reached);
}

std::vector<std::string> split(const std::string& line, char sep) {
    std::vector<std::string> fields;
    std::string field;
    std::istringstream in(line);
    while (std::getline(in, field, sep)) fields.push_back(field);
    if (!line.empty() && line.back() == sep) fields.emplace_back();
    return fields;
}

std::size_t parse_size(const std::string& text, const std::string& what) {
    std::size_t pos = 0;
    unsigned long long value = 0;
    try {
        value = std::stoull(text, &pos);
    } catch (const std::exception&) {
        pos = 0;
    }
    if (pos == 0 || pos != text.size() || text.front() == '-') {
        throw InvalidArgument("lattice dump: bad " + what + " '" + text + "'");
    }
    return static_cast<std::size_t>(value);
}

} // namespace

double log_multiplicity(const Multiplicity& m) {
    if (m.is_zero()) return -std::numeric_limits<double>::infinity();
    const std::size_t top = boost::multiprecision::msb(m);
    if (top < 1000) return std::log(m.convert_to<double>());
    const std::size_t shift = top - 62;
    const Multiplicity head = m >> shift;
    return std::log(head.convert_to<double>()) + static_cast<double>(shift) * std::log(2.0);
}

Multiplicity power(std::size_t k, std::size_t n) { return boost::multiprecision::pow(Multiplicity(k), static_cast<unsigned>(n)); }

StatisticLattice StatisticLattice::empty(Family family, std::size_t statistic_dim, std::size_t k) {
    if (k < 1) throw InvalidArgument("number of components must be >= 1");
    if (family == Family::normal) throw UnsupportedFamily("lattices are not built for the normal family");
    StatisticLattice lattice(family, k, 0, statistic_dim);
    lattice.keys_.assign(lattice.key_width(), 0);
    lattice.multiplicities_.emplace_back(1);
    return lattice;
}

StatisticLattice StatisticLattice::init(Family family, std::span<const std::int64_t> first_obs, std::size_t k) {
    if (k < 1) throw InvalidArgument("number of components must be >= 1");
    if (family == Family::normal) throw UnsupportedFamily("lattices are not built for the normal family");
    const std::size_t dim = first_obs.size();
    StatisticLattice lattice(family, k, 1, dim);
    const std::size_t width = lattice.key_width();
    lattice.keys_.assign(k * width, 0);
    // Slot k-1 first so entries come out in ascending key order.
    for (std::size_t e = 0; e < k; ++e) {
        const std::size_t j = k - 1 - e;
        std::int64_t* key = lattice.keys_.data() + e * width;
        key[j * (1 + dim)] = 1;
        std::copy(first_obs.begin(), first_obs.end(), key + j * (1 + dim) + 1);
    }
    lattice.multiplicities_.assign(k, Multiplicity(1));
    return lattice;
}

Multiplicity StatisticLattice::total_count() const {
    Multiplicity total = 0;
    for (const auto& m : multiplicities_) total += m;
    return total;
}

std::size_t StatisticLattice::find(std::span<const std::int64_t> probe) const {
    if (probe.size() != key_width()) return size();
    std::size_t lo = 0;
    std::size_t hi = size();
    while (lo < hi) {
        const std::size_t mid = lo + (hi - lo) / 2;
        const auto k = key(mid);
        if (std::lexicographical_compare(k.begin(), k.end(), probe.begin(), probe.end())) {
            lo = mid + 1;
        } else {
            hi = mid;
        }
    }
    if (lo < size() && std::ranges::equal(key(lo), probe)) return lo;
    return size();
}

StatisticLattice extend(const StatisticLattice& lattice, std::span<const std::int64_t> obs,
                        const LatticeOptions& options) {
    if (obs.size() != lattice.statistic_dim()) {
        throw InvalidArgument("observation width does not match the lattice statistic");
    }
    for (std::int64_t x : obs) {
        if (x < 0) throw InvalidArgument("negative observation");
    }
    if (lattice.size() == 0) throw InvalidArgument("cannot extend an empty lattice");

    const std::size_t k = lattice.components();
    const std::size_t dim = lattice.statistic_dim();
    const std::size_t width = lattice.key_width();
    const std::size_t m = lattice.size();

    StatisticLattice next(lattice.family(), k, lattice.observations() + 1, dim);

    auto successor = [&](std::size_t i, std::size_t j, std::int64_t* out) {
        const auto src = lattice.key(i);
        std::copy(src.begin(), src.end(), out);
        std::int64_t* block = out + j * (1 + dim);
        block[0] += 1;
        for (std::size_t u = 0; u < dim; ++u) block[1 + u] += obs[u];
    };

    std::vector<std::pair<Key, Multiplicity>> merged;

    if (options.backend == LatticeBackend::hash_merge) {
        const std::size_t threads = resolve_threads(options.threads);
        const std::size_t chunks = std::max<std::size_t>(1, std::min(threads, m));
        std::vector<SuccessorMap> partial(chunks);
        parallel_chunks(m, chunks, [&](std::size_t c, std::size_t begin, std::size_t end) {
            SuccessorMap& local = partial[c];
            local.reserve(std::min(options.entry_budget, (end - begin) * k) + 1);
            Key key(width);
            for (std::size_t i = begin; i < end; ++i) {
                for (std::size_t j = 0; j < k; ++j) {
                    successor(i, j, key.data());
                    local[key] += lattice.multiplicity(i);
                }
                if (local.size() > options.entry_budget) over_budget(local.size(), options.entry_budget);
            }
        });
        SuccessorMap total = std::move(partial.front());
        for (std::size_t c = 1; c < chunks; ++c) {
            for (auto& [key, mult] : partial[c]) total[key] += mult;
            partial[c].clear();
            if (total.size() > options.entry_budget) over_budget(total.size(), options.entry_budget);
        }
        merged.reserve(total.size());
        for (auto& [key, mult] : total) merged.emplace_back(key, std::move(mult));
        std::sort(merged.begin(), merged.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
    } else {
        const std::size_t count = m * k;
        std::vector<std::int64_t> flat(count * width);
        for (std::size_t i = 0; i < m; ++i) {
            for (std::size_t j = 0; j < k; ++j) successor(i, j, flat.data() + (i * k + j) * width);
        }
        auto at = [&](std::size_t r) { return std::span<const std::int64_t>(flat).subspan(r * width, width); };
        std::vector<std::size_t> order(count);
        std::iota(order.begin(), order.end(), std::size_t{0});
        std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
            const auto ka = at(a);
            const auto kb = at(b);
            return std::lexicographical_compare(ka.begin(), ka.end(), kb.begin(), kb.end());
        });
        for (std::size_t r = 0; r < count;) {
            const auto head = at(order[r]);
            Multiplicity mult = 0;
            std::size_t s = r;
            for (; s < count && std::ranges::equal(at(order[s]), head); ++s) mult += lattice.multiplicity(order[s] / k);
            merged.emplace_back(Key(head.begin(), head.end()), std::move(mult));
            if (merged.size() > options.entry_budget) over_budget(merged.size(), options.entry_budget);
            r = s;
        }
    }

    next.keys_.reserve(merged.size() * width);
    next.multiplicities_.reserve(merged.size());
    for (auto& [key, mult] : merged) {
        next.keys_.insert(next.keys_.end(), key.begin(), key.end());
        next.multiplicities_.push_back(std::move(mult));
    }
    return next;
}

StatisticLattice build(const Dataset& data, std::size_t k, const LatticeOptions& options) {
    if (data.family() == Family::normal) {
        throw UnsupportedFamily("lattices are not built for the normal family; use the oracle");
    }
    if (data.empty()) throw InvalidArgument("cannot build a lattice from an empty dataset");
    StatisticLattice lattice = StatisticLattice::init(data.family(), data.counts(0), k);
    if (lattice.size() > options.entry_budget) over_budget(lattice.size(), options.entry_budget);
    for (std::size_t i = 1; i < data.size(); ++i) lattice = extend(lattice, data.counts(i), options);
    return lattice;
}

void StatisticLattice::dump(std::ostream& out) const {
    out << "family=" << to_string(family_) << "\tk=" << k_ << "\tn=" << n_ << "\tdim=" << dim_ << '\n';
    const std::size_t width = key_width();
    for (std::size_t i = 0; i < size(); ++i) {
        const auto k = key(i);
        for (std::size_t c = 0; c < width; ++c) out << k[c] << '\t';
        out << multiplicities_[i].str() << '\n';
    }
}

std::string StatisticLattice::dump() const {
    std::ostringstream out;
    dump(out);
    return out.str();
}

StatisticLattice StatisticLattice::load(std::istream& in) {
    std::string line;
    if (!std::getline(in, line)) throw InvalidArgument("lattice dump: missing header");
    const auto header = split(line, '\t');
    auto field = [&](std::size_t idx, const std::string& name) {
        if (idx >= header.size() || header[idx].rfind(name + "=", 0) != 0) {
            throw InvalidArgument("lattice dump: header field '" + name + "' missing");
        }
        return header[idx].substr(name.size() + 1);
    };
    if (header.size() != 4) throw InvalidArgument("lattice dump: malformed header");
    const Family family = parse_family(field(0, "family"));
    const std::size_t k = parse_size(field(1, "k"), "k");
    const std::size_t n = parse_size(field(2, "n"), "n");
    const std::size_t dim = parse_size(field(3, "dim"), "dim");
    if (k < 1 || dim < 1) throw InvalidArgument("lattice dump: k and dim must be >= 1");
    if (family == Family::normal) throw UnsupportedFamily("lattices are not built for the normal family");

    StatisticLattice lattice(family, k, n, dim);
    const std::size_t width = lattice.key_width();
    std::size_t line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty()) continue;
        const auto fields = split(line, '\t');
        if (fields.size() != width + 1) {
            throw InvalidArgument("lattice dump line " + std::to_string(line_no) + ": expected " +
                                  std::to_string(width + 1) + " fields");
        }
        const std::size_t start = lattice.keys_.size();
        std::int64_t absorbed = 0;
        for (std::size_t c = 0; c < width; ++c) {
            const auto value = static_cast<std::int64_t>(parse_size(fields[c], "key value"));
            lattice.keys_.push_back(value);
            if (c % (1 + dim) == 0) absorbed += value;
        }
        if (absorbed != static_cast<std::int64_t>(n)) {
            throw InvalidArgument("lattice dump line " + std::to_string(line_no) + ": group counts do not sum to n");
        }
        if (start > 0 && !std::lexicographical_compare(lattice.keys_.begin() + static_cast<std::ptrdiff_t>(start - width),
                                                       lattice.keys_.begin() + static_cast<std::ptrdiff_t>(start),
                                                       lattice.keys_.begin() + static_cast<std::ptrdiff_t>(start),
                                                       lattice.keys_.end())) {
            throw InvalidArgument("lattice dump line " + std::to_string(line_no) + ": keys not strictly increasing");
        }
        const std::string& digits = fields.back();
        if (digits.empty() || !std::all_of(digits.begin(), digits.end(), [](char ch) { return ch >= '0' && ch <= '9'; })) {
            throw InvalidArgument("lattice dump line " + std::to_string(line_no) + ": bad multiplicity");
        }
        lattice.multiplicities_.emplace_back(digits);
    }
    if (lattice.total_count() != power(k, n)) {
        throw InvalidArgument("lattice dump: multiplicities do not sum to k^n");
    }
    return lattice;
}

} // namespace mixexact
