#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "bilearn/finite.hpp"
#include "bilearn/lens.hpp"

namespace bilearn {

/// A1 <-left- S -right-> A2. Representative of a symmetric lens.
class LensSpan {
public:
    /// Throws HeadMismatch unless both legs have the same source.
    LensSpan(AsymmetricLens left, AsymmetricLens right);

    const FiniteSet& head() const noexcept { return left_.src(); }
    const AsymmetricLens& left() const noexcept { return left_; }
    const AsymmetricLens& right() const noexcept { return right_; }
    const FiniteSet& left_foot() const noexcept { return left_.dst(); }
    const FiniteSet& right_foot() const noexcept { return right_.dst(); }

    friend bool operator==(const LensSpan&, const LensSpan&) = default;

private:
    AsymmetricLens left_;
    AsymmetricLens right_;
};

/// One clause of an equivalence-witness check.
struct ClauseReport {
    std::string clause;
    bool passed = true;
    std::string counterexample;
};

/// Clause-by-clause result of checking conditions (E) or (E').
struct WitnessReport {
    std::vector<ClauseReport> clauses;

    bool passed() const;
    explicit operator bool() const { return passed(); }
    std::string describe() const;
};

/// The pullback {(x1,x2) | g(x1) = h(x2)} of a cospan S1 -g-> A <-h- S2,
/// materialized as an atomic set with labels `(x1|x2)` in lexicographic
/// (x1,x2) order.
struct Pullback {
    FiniteSet set;
    FiniteSet left;   // S1
    FiniteSet right;  // S2
    std::vector<std::pair<Index, Index>> pairs;
    std::vector<Index> index_of;  // x1 * |S2| + x2 -> element of set, or npos

    static constexpr Index npos = static_cast<Index>(-1);

    Index lookup(Index x1, Index x2) const { return index_of[x1 * right.size() + x2]; }
};

Pullback pullback(const FinFn& g, const FinFn& h);

LensSpan span_new(AsymmetricLens left, AsymmetricLens right);
LensSpan span_identity(const FiniteSet& a);
LensSpan span_tensor(const LensSpan& s1, const LensSpan& s2);

/// Composite A1 <-> A3 of A1 <-> A2 and A2 <-> A3 through the pullback of
/// the inner legs' Gets. Both left legs must satisfy PutGet (throws
/// LeftLegPutGetViolation with the counterexample otherwise).
LensSpan span_compose(const LensSpan& s1, const LensSpan& s2);

/// Composite of two spans whose left legs are constant complement lenses
/// P x A -> A (A the last factor of the head). The head is the flat product
/// [P2 factors..., P1 factors..., A1]. Throws NotConstantComplement.
LensSpan span_compose_cc(const LensSpan& s1, const LensSpan& s2);

/// The head bijection [P2..., P1..., A1] -> pullback head identifying
/// span_compose_cc(s1,s2) with span_compose(s1,s2).
FinFn cc_head_relabeling(const LensSpan& s1, const LensSpan& s2, const LensSpan& cc_composite,
                         const LensSpan& general_composite);

/// True when the left leg is a constant complement lens onto the last
/// factor of a product head.
bool has_constant_complement_left(const LensSpan& s);

/// Conditions (E) for f : head(s) -> head(s2):
/// (i) f surjective, (ii) Gets preserved, (iii) Puts preserved:
/// f(p(a, x)) = p'(a, f(x)) for both legs.
WitnessReport conditions_e_check(const FinFn& f, const LensSpan& s, const LensSpan& s2);

/// Quotient of a span by a head partition. `quotient` maps the original
/// head onto the minimized one.
struct SpanQuotient {
    LensSpan span;
    FinFn quotient;
};

/// Quotient by the coarsest partition of the head on which both Gets are
/// constant and both Puts map blocks into blocks. Blocks are numbered in
/// order of their least member and labelled by its rendering.
SpanQuotient span_quotient(const LensSpan& s);
LensSpan span_minimize(const LensSpan& s);

/// Span induced on [0,k) by a surjection f from the head, if f's kernel is a
/// congruence (labels q0..q{k-1}); nullopt otherwise.
std::optional<LensSpan> induced_span(const LensSpan& s, const FinFn& f);

/// Result of deciding s == s' up to the generated equivalence.
struct SpanEquivResult {
    bool equivalent = false;
    std::size_t minimized_size_a = 0;
    std::size_t minimized_size_b = 0;
    /// Bijection between the minimized heads when equivalent.
    std::optional<FinFn> bijection;
    /// When not equivalent: a head element of one span with no counterpart.
    std::string distinguishing;
};

SpanEquivResult span_equiv_detail(const LensSpan& s, const LensSpan& s2);
bool span_equiv(const LensSpan& s, const LensSpan& s2);

inline constexpr std::size_t kDefaultOracleHeadCap = 4;

/// Brute-force semantics of the generated equivalence: searches zigzags of
/// conditions-(E) maps, enumerating every function between heads. Returns
/// the zigzag length of the first witness found, or nullopt if none exists
/// within max_zigzag steps. Intermediate spans are restricted to quotients
/// of `s` (any larger intermediate factors through one).
std::optional<std::size_t> span_equiv_oracle_length(const LensSpan& s, const LensSpan& s2,
                                                    std::size_t max_zigzag,
                                                    std::size_t head_cap = kDefaultOracleHeadCap);
bool span_equiv_oracle(const LensSpan& s, const LensSpan& s2, std::size_t max_zigzag,
                       std::size_t head_cap = kDefaultOracleHeadCap);

} // namespace bilearn
