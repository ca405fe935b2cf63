#pragma once

#include <cstddef>
#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "bilearn/error.hpp"

namespace bilearn {

using Index = std::size_t;

/// An ordered finite carrier. Either atomic (a list of distinct labels) or a
/// product of other finite sets. Product elements are enumerated in
/// lexicographic order of their factor indices, leftmost factor most
/// significant, so element (1,2) of 2 x 3 has flat index 5.
///
/// Sets are immutable and cheap to copy; equality is structural.
class FiniteSet {
public:
    /// The empty atomic set.
    FiniteSet();

    static FiniteSet atomic(std::vector<std::string> labels);
    static FiniteSet product(std::vector<FiniteSet> factors);
    /// The empty product, i.e. the monoidal unit 1 = {()}.
    static FiniteSet unit() { return product({}); }

    bool is_atomic() const noexcept;
    bool is_product() const noexcept { return !is_atomic(); }
    std::size_t size() const noexcept;

    /// Labels of an atomic set; empty for products.
    const std::vector<std::string>& labels() const noexcept;
    /// Factors of a product; empty for atomic sets.
    const std::vector<FiniteSet>& factors() const noexcept;
    std::size_t arity() const noexcept { return factors().size(); }
    const FiniteSet& factor(std::size_t pos) const;

    /// Component `pos` of a product element.
    Index component(Index element, std::size_t pos) const;
    std::vector<Index> to_tuple(Index element) const;
    Index from_tuple(std::span<const Index> tuple) const;
    Index from_tuple(std::initializer_list<Index> tuple) const
    {
        return from_tuple(std::span<const Index>(tuple.begin(), tuple.size()));
    }

    /// Canonical text form of an element: the label for atomic sets,
    /// `(x,y,...)` for products. No whitespace is ever emitted.
    std::string render(Index element) const;
    /// Inverse of render; nullopt when no element renders to `text`.
    std::optional<Index> find(std::string_view text) const;

    /// Short structural description, e.g. `{a0,a1}` or `({a0,a1} * 1)`.
    std::string describe() const;

    friend bool operator==(const FiniteSet& lhs, const FiniteSet& rhs);

private:
    struct Node;
    explicit FiniteSet(std::shared_ptr<const Node> node);

    std::shared_ptr<const Node> node_;
};

/// A total function between finite sets stored as an explicit table of
/// codomain indices.
class FinFn {
public:
    /// Validates totality: table length equals |dom| and every entry is a
    /// codomain index.
    FinFn(FiniteSet dom, FiniteSet cod, std::vector<Index> table);

    const FiniteSet& dom() const noexcept { return dom_; }
    const FiniteSet& cod() const noexcept { return cod_; }
    const std::vector<Index>& table() const noexcept { return table_; }

    Index operator()(Index x) const { return table_[x]; }

    bool is_surjective() const;
    bool is_injective() const;
    bool is_bijective() const { return dom_.size() == cod_.size() && is_injective(); }

    friend bool operator==(const FinFn& lhs, const FinFn& rhs) = default;

private:
    FiniteSet dom_;
    FiniteSet cod_;
    std::vector<Index> table_;
};

template <typename F>
FinFn tabulate(const FiniteSet& dom, const FiniteSet& cod, F&& f)
{
    std::vector<Index> table(dom.size());
    for (Index x = 0; x < table.size(); ++x) {
        table[x] = f(x);
    }
    return FinFn(dom, cod, std::move(table));
}

// ---------------------------------------------------------------------------
// Combinators

FiniteSet make_set(std::vector<std::string> labels);
FiniteSet product(std::vector<FiniteSet> factors);
FinFn make_fn(FiniteSet dom, FiniteSet cod, std::vector<Index> table);

/// g after f. Requires cod(f) == dom(g).
FinFn compose_fn(const FinFn& f, const FinFn& g);
FinFn identity_fn(const FiniteSet& a);
/// Projection onto factor `pos` (0-based) of a product set.
FinFn projection(const FiniteSet& prod, std::size_t pos);
/// <f1,...,fk> : D -> C1 x ... x Ck for functions sharing a domain D.
FinFn pair(const std::vector<FinFn>& fs);
/// f1 x ... x fk : D1 x ... x Dk -> C1 x ... x Ck.
FinFn product_fn(const std::vector<FinFn>& fs);
/// Reorders the factors of a product: the result's factor j is the input's
/// factor order[j]. `order` must be a permutation.
FinFn permute(const FiniteSet& prod, const std::vector<std::size_t>& order);
/// Swap of a binary product.
FinFn swap(const FiniteSet& prod);
/// The unique map into the unit set.
FinFn terminal_fn(const FiniteSet& a);

// ---------------------------------------------------------------------------
// Enumeration and sampling

inline constexpr std::uint64_t kDefaultEnumCap = 1'000'000;

/// Default cap on the number of functions an enumeration may yield. The
/// BILEARN_ENUM_CAP environment variable overrides kDefaultEnumCap.
std::uint64_t default_enum_cap();

/// |cod|^|dom|, or nullopt if it does not fit in 64 bits.
std::optional<std::uint64_t> function_count(std::size_t dom_size, std::size_t cod_size);

/// Yields every total function dom -> cod exactly once, in lexicographic
/// order of tables (entry 0 most significant).
class FunctionEnumerator {
public:
    FunctionEnumerator(FiniteSet dom, FiniteSet cod, std::uint64_t cap = default_enum_cap());

    std::uint64_t count() const noexcept { return count_; }

    /// Next table, or nullptr when exhausted. The pointer is valid until the
    /// following call.
    const std::vector<Index>* next_table();
    std::optional<FinFn> next();

private:
    FiniteSet dom_;
    FiniteSet cod_;
    std::uint64_t count_;
    std::vector<Index> current_;
    bool started_ = false;
    bool done_ = false;
};

std::vector<FinFn> enumerate_functions(const FiniteSet& dom, const FiniteSet& cod,
                                       std::uint64_t cap = default_enum_cap());

/// SplitMix64 (Steele, Lea & Flood 2014): state += 0x9E3779B97F4A7C15, then
/// the output is mixed with shifts 30/27/31 and multipliers
/// 0xBF58476D1CE4E5B9 / 0x94D049BB133111EB. Bounded draws use rejection
/// sampling on the top of the range so they are exactly uniform.
class SplitMix64 {
public:
    explicit SplitMix64(std::uint64_t seed) noexcept : state_(seed) {}

    std::uint64_t next() noexcept;
    /// Uniform in [0, bound); bound must be positive.
    std::uint64_t below(std::uint64_t bound) noexcept;
    /// Uniform in [0, 1) with 53 random bits.
    double uniform() noexcept;
    /// Standard normal via Box-Muller (one value per call).
    double normal() noexcept;
    /// An independent generator seeded from this one's next output.
    SplitMix64 split() noexcept { return SplitMix64(next()); }

private:
    std::uint64_t state_;
};

/// Uniformly random table; deterministic in `seed`.
FinFn random_fn(const FiniteSet& dom, const FiniteSet& cod, std::uint64_t seed);

} // namespace bilearn
