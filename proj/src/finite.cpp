#include "bilearn/finite.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <limits>
#include <mutex>
#include <numbers>
#include <numeric>
#include <unordered_map>

namespace bilearn {

namespace {

// Sets larger than this are never materialized as tables.
constexpr std::size_t kMaxSetSize = std::size_t{1} << 40;

} // namespace

struct FiniteSet::Node {
    bool atomic = true;
    std::vector<std::string> labels;
    std::vector<FiniteSet> factors;
    std::vector<std::size_t> strides;
    std::size_t size = 0;

    // Rendered element -> index, built on first lookup.
    mutable std::once_flag lookup_once;
    mutable std::unordered_map<std::string, Index> lookup;
};

FiniteSet::FiniteSet() : FiniteSet(std::make_shared<Node>()) {}

FiniteSet::FiniteSet(std::shared_ptr<const Node> node) : node_(std::move(node)) {}

FiniteSet FiniteSet::atomic(std::vector<std::string> labels)
{
    auto node = std::make_shared<Node>();
    std::unordered_map<std::string, Index> seen;
    for (Index i = 0; i < labels.size(); ++i) {
        if (labels[i].empty()) {
            throw Error(ErrorKind::EmptyLabel, "label at position " + std::to_string(i) + " is empty");
        }
        if (!seen.emplace(labels[i], i).second) {
            throw Error(ErrorKind::DuplicateLabel, "label '" + labels[i] + "' appears more than once");
        }
    }
    node->atomic = true;
    node->size = labels.size();
    node->labels = std::move(labels);
    return FiniteSet(std::move(node));
}

FiniteSet FiniteSet::product(std::vector<FiniteSet> factors)
{
    auto node = std::make_shared<Node>();
    node->atomic = false;
    node->strides.assign(factors.size(), 1);
    std::size_t size = 1;
    for (std::size_t i = factors.size(); i-- > 0;) {
        node->strides[i] = size;
        const std::size_t fs = factors[i].size();
        if (fs != 0 && size > kMaxSetSize / fs) {
            throw Error(ErrorKind::CapExceeded, "product set is too large to materialize");
        }
        size *= fs;
    }
    node->size = size;
    node->factors = std::move(factors);
    return FiniteSet(std::move(node));
}

bool FiniteSet::is_atomic() const noexcept { return node_->atomic; }

std::size_t FiniteSet::size() const noexcept { return node_->size; }

const std::vector<std::string>& FiniteSet::labels() const noexcept { return node_->labels; }

const std::vector<FiniteSet>& FiniteSet::factors() const noexcept { return node_->factors; }

const FiniteSet& FiniteSet::factor(std::size_t pos) const
{
    if (pos >= arity()) {
        throw Error(ErrorKind::BadPosition, "factor position " + std::to_string(pos) + " out of range for "
                                                + describe());
    }
    return node_->factors[pos];
}

Index FiniteSet::component(Index element, std::size_t pos) const
{
    return (element / node_->strides[pos]) % node_->factors[pos].size();
}

std::vector<Index> FiniteSet::to_tuple(Index element) const
{
    std::vector<Index> tuple(arity());
    for (std::size_t i = 0; i < tuple.size(); ++i) {
        tuple[i] = component(element, i);
    }
    return tuple;
}

Index FiniteSet::from_tuple(std::span<const Index> tuple) const
{
    if (tuple.size() != arity()) {
        throw Error(ErrorKind::LengthMismatch, "tuple of length " + std::to_string(tuple.size())
                                                   + " for a product of arity " + std::to_string(arity()));
    }
    Index flat = 0;
    for (std::size_t i = 0; i < tuple.size(); ++i) {
        if (tuple[i] >= node_->factors[i].size()) {
            throw Error(ErrorKind::IndexOutOfRange, "tuple component " + std::to_string(i) + " out of range");
        }
        flat += tuple[i] * node_->strides[i];
    }
    return flat;
}

std::string FiniteSet::render(Index element) const
{
    if (is_atomic()) {
        return node_->labels.at(element);
    }
    std::string out = "(";
    for (std::size_t i = 0; i < arity(); ++i) {
        if (i != 0) {
            out += ',';
        }
        out += node_->factors[i].render(component(element, i));
    }
    out += ')';
    return out;
}

std::optional<Index> FiniteSet::find(std::string_view text) const
{
    std::call_once(node_->lookup_once, [this] {
        node_->lookup.reserve(size());
        for (Index i = 0; i < size(); ++i) {
            node_->lookup.emplace(render(i), i);
        }
    });
    auto it = node_->lookup.find(std::string(text));
    if (it == node_->lookup.end()) {
        return std::nullopt;
    }
    return it->second;
}

std::string FiniteSet::describe() const
{
    if (is_atomic()) {
        std::string out = "{";
        for (std::size_t i = 0; i < node_->labels.size(); ++i) {
            if (i != 0) {
                out += ',';
            }
            out += node_->labels[i];
        }
        return out + "}";
    }
    if (arity() == 0) {
        return "1";
    }
    std::string out = "(";
    for (std::size_t i = 0; i < arity(); ++i) {
        if (i != 0) {
            out += " * ";
        }
        out += node_->factors[i].describe();
    }
    return out + ")";
}

bool operator==(const FiniteSet& lhs, const FiniteSet& rhs)
{
    if (lhs.node_ == rhs.node_) {
        return true;
    }
    if (lhs.is_atomic() != rhs.is_atomic() || lhs.size() != rhs.size()) {
        return false;
    }
    if (lhs.is_atomic()) {
        return lhs.labels() == rhs.labels();
    }
    return lhs.factors() == rhs.factors();
}

// ---------------------------------------------------------------------------

FinFn::FinFn(FiniteSet dom, FiniteSet cod, std::vector<Index> table)
    : dom_(std::move(dom)), cod_(std::move(cod)), table_(std::move(table))
{
    if (table_.size() != dom_.size()) {
        throw Error(ErrorKind::LengthMismatch, "table has " + std::to_string(table_.size())
                                                   + " entries but the domain has "
                                                   + std::to_string(dom_.size()) + " elements");
    }
    for (Index x = 0; x < table_.size(); ++x) {
        if (table_[x] >= cod_.size()) {
            throw Error(ErrorKind::IndexOutOfRange, "entry " + std::to_string(x) + " maps to "
                                                        + std::to_string(table_[x]) + ", codomain has "
                                                        + std::to_string(cod_.size()) + " elements");
        }
    }
}

bool FinFn::is_surjective() const
{
    std::vector<bool> hit(cod_.size(), false);
    std::size_t count = 0;
    for (Index y : table_) {
        if (!hit[y]) {
            hit[y] = true;
            ++count;
        }
    }
    return count == cod_.size();
}

bool FinFn::is_injective() const
{
    std::vector<bool> hit(cod_.size(), false);
    for (Index y : table_) {
        if (hit[y]) {
            return false;
        }
        hit[y] = true;
    }
    return true;
}

// ---------------------------------------------------------------------------

FiniteSet make_set(std::vector<std::string> labels) { return FiniteSet::atomic(std::move(labels)); }

FiniteSet product(std::vector<FiniteSet> factors) { return FiniteSet::product(std::move(factors)); }

FinFn make_fn(FiniteSet dom, FiniteSet cod, std::vector<Index> table)
{
    return FinFn(std::move(dom), std::move(cod), std::move(table));
}

FinFn compose_fn(const FinFn& f, const FinFn& g)
{
    if (!(f.cod() == g.dom())) {
        throw Error(ErrorKind::TypeMismatch, "cannot compose: codomain " + f.cod().describe()
                                                 + " differs from domain " + g.dom().describe());
    }
    return tabulate(f.dom(), g.cod(), [&](Index x) { return g(f(x)); });
}

FinFn identity_fn(const FiniteSet& a)
{
    std::vector<Index> table(a.size());
    std::iota(table.begin(), table.end(), Index{0});
    return FinFn(a, a, std::move(table));
}

FinFn projection(const FiniteSet& prod, std::size_t pos)
{
    if (!prod.is_product() || pos >= prod.arity()) {
        throw Error(ErrorKind::BadPosition, "no factor " + std::to_string(pos) + " in " + prod.describe());
    }
    return tabulate(prod, prod.factor(pos), [&](Index x) { return prod.component(x, pos); });
}

FinFn pair(const std::vector<FinFn>& fs)
{
    if (fs.empty()) {
        throw Error(ErrorKind::TypeMismatch, "pair needs at least one function to fix the domain");
    }
    std::vector<FiniteSet> cods;
    for (const auto& f : fs) {
        if (!(f.dom() == fs.front().dom())) {
            throw Error(ErrorKind::TypeMismatch, "pair components have different domains");
        }
        cods.push_back(f.cod());
    }
    const FiniteSet cod = product(std::move(cods));
    std::vector<Index> tuple(fs.size());
    return tabulate(fs.front().dom(), cod, [&](Index x) {
        for (std::size_t i = 0; i < fs.size(); ++i) {
            tuple[i] = fs[i](x);
        }
        return cod.from_tuple(tuple);
    });
}

FinFn product_fn(const std::vector<FinFn>& fs)
{
    std::vector<FiniteSet> doms;
    std::vector<FiniteSet> cods;
    for (const auto& f : fs) {
        doms.push_back(f.dom());
        cods.push_back(f.cod());
    }
    const FiniteSet dom = product(std::move(doms));
    const FiniteSet cod = product(std::move(cods));
    std::vector<Index> tuple(fs.size());
    return tabulate(dom, cod, [&](Index x) {
        for (std::size_t i = 0; i < fs.size(); ++i) {
            tuple[i] = fs[i](dom.component(x, i));
        }
        return cod.from_tuple(tuple);
    });
}

FinFn permute(const FiniteSet& prod, const std::vector<std::size_t>& order)
{
    if (!prod.is_product() || order.size() != prod.arity()) {
        throw Error(ErrorKind::BadPosition, "permutation length does not match " + prod.describe());
    }
    std::vector<bool> used(order.size(), false);
    std::vector<FiniteSet> factors;
    for (std::size_t pos : order) {
        if (pos >= order.size() || used[pos]) {
            throw Error(ErrorKind::BadPosition, "factor order is not a permutation");
        }
        used[pos] = true;
        factors.push_back(prod.factor(pos));
    }
    const FiniteSet cod = product(std::move(factors));
    std::vector<Index> tuple(order.size());
    return tabulate(prod, cod, [&](Index x) {
        for (std::size_t j = 0; j < order.size(); ++j) {
            tuple[j] = prod.component(x, order[j]);
        }
        return cod.from_tuple(tuple);
    });
}

FinFn swap(const FiniteSet& prod)
{
    if (prod.arity() != 2) {
        throw Error(ErrorKind::BadPosition, "swap needs a binary product, got " + prod.describe());
    }
    return permute(prod, {1, 0});
}

FinFn terminal_fn(const FiniteSet& a)
{
    return FinFn(a, FiniteSet::unit(), std::vector<Index>(a.size(), 0));
}

// ---------------------------------------------------------------------------

std::uint64_t default_enum_cap()
{
    if (const char* env = std::getenv("BILEARN_ENUM_CAP"); env != nullptr && *env != '\0') {
        char* end = nullptr;
        const unsigned long long value = std::strtoull(env, &end, 10);
        if (end != nullptr && *end == '\0') {
            return value;
        }
    }
    return kDefaultEnumCap;
}

std::optional<std::uint64_t> function_count(std::size_t dom_size, std::size_t cod_size)
{
    std::uint64_t count = 1;
    for (std::size_t i = 0; i < dom_size; ++i) {
        if (cod_size == 0) {
            return 0;
        }
        if (count > std::numeric_limits<std::uint64_t>::max() / cod_size) {
            return std::nullopt;
        }
        count *= cod_size;
    }
    return count;
}

FunctionEnumerator::FunctionEnumerator(FiniteSet dom, FiniteSet cod, std::uint64_t cap)
    : dom_(std::move(dom)), cod_(std::move(cod))
{
    const auto count = function_count(dom_.size(), cod_.size());
    if (!count || *count > cap) {
        throw Error(ErrorKind::CapExceeded, "enumerating " + std::to_string(cod_.size()) + "^"
                                                + std::to_string(dom_.size()) + " functions exceeds the cap of "
                                                + std::to_string(cap));
    }
    count_ = *count;
    current_.assign(dom_.size(), 0);
    done_ = count_ == 0;
}

const std::vector<Index>* FunctionEnumerator::next_table()
{
    if (done_) {
        return nullptr;
    }
    if (!started_) {
        started_ = true;
        return &current_;
    }
    for (std::size_t i = current_.size(); i-- > 0;) {
        if (++current_[i] < cod_.size()) {
            return &current_;
        }
        current_[i] = 0;
    }
    done_ = true;
    return nullptr;
}

std::optional<FinFn> FunctionEnumerator::next()
{
    const auto* table = next_table();
    if (table == nullptr) {
        return std::nullopt;
    }
    return FinFn(dom_, cod_, *table);
}

std::vector<FinFn> enumerate_functions(const FiniteSet& dom, const FiniteSet& cod, std::uint64_t cap)
{
    FunctionEnumerator it(dom, cod, cap);
    std::vector<FinFn> out;
    out.reserve(it.count());
    while (auto f = it.next()) {
        out.push_back(std::move(*f));
    }
    return out;
}

std::uint64_t SplitMix64::next() noexcept
{
    std::uint64_t z = (state_ += 0x9E3779B97F4A7C15ULL);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

std::uint64_t SplitMix64::below(std::uint64_t bound) noexcept
{
    // Reject the final partial block so every residue is equally likely.
    const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max()
                                - std::numeric_limits<std::uint64_t>::max() % bound;
    std::uint64_t x = next();
    while (x >= limit) {
        x = next();
    }
    return x % bound;
}

double SplitMix64::uniform() noexcept { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

double SplitMix64::normal() noexcept
{
    double u1 = uniform();
    while (u1 <= 0.0) {
        u1 = uniform();
    }
    const double u2 = uniform();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

FinFn random_fn(const FiniteSet& dom, const FiniteSet& cod, std::uint64_t seed)
{
    if (cod.size() == 0 && dom.size() != 0) {
        throw Error(ErrorKind::EmptyCodomain, "no function from a non-empty set into the empty set");
    }
    SplitMix64 rng(seed);
    return tabulate(dom, cod, [&](Index) { return static_cast<Index>(rng.below(cod.size())); });
}

} // namespace bilearn
