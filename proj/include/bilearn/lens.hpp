#pragma once

#include <string>
#include <utility>
#include <vector>

#include "bilearn/finite.hpp"

namespace bilearn {

/// An asymmetric lens A -> B: get : A -> B and put : B x A -> A. The put
/// domain is always the binary product [B, A] in that order. No laws are
/// imposed at construction.
class AsymmetricLens {
public:
    /// Throws TypeMismatch naming the leg that is mistyped.
    AsymmetricLens(FinFn get, FinFn put);

    const FiniteSet& src() const noexcept { return get_.dom(); }
    const FiniteSet& dst() const noexcept { return get_.cod(); }
    const FinFn& get() const noexcept { return get_; }
    const FinFn& put() const noexcept { return put_; }

    Index get(Index a) const { return get_(a); }
    Index put(Index b, Index a) const { return put_(b * src().size() + a); }

    friend bool operator==(const AsymmetricLens&, const AsymmetricLens&) = default;

private:
    FinFn get_;
    FinFn put_;
};

/// Outcome of an exhaustive law check. On failure `witness` names the first
/// counterexample in enumeration order as (variable, rendered element) pairs.
struct LawReport {
    std::string law;
    bool passed = true;
    std::vector<std::pair<std::string, std::string>> witness;

    explicit operator bool() const noexcept { return passed; }
    /// `PutGet holds` or `PutGet fails at (b=...,a=...)`.
    std::string describe() const;
};

AsymmetricLens lens_new(FinFn get, FinFn put);
/// l1 ; l2 : get = g2 . g1, put(c,a) = p1(p2(c, g1(a)), a).
AsymmetricLens lens_compose(const AsymmetricLens& l1, const AsymmetricLens& l2);
/// (pi_1, id_A).
AsymmetricLens lens_identity(const FiniteSet& a);
/// Cartesian monoidal product (A x C) -> (B x D).
AsymmetricLens lens_tensor(const AsymmetricLens& l1, const AsymmetricLens& l2);

/// g(p(b,a)) = b for all (b,a).
LawReport check_putget(const AsymmetricLens& l);
/// p(g(a),a) = a for all a.
LawReport check_getput(const AsymmetricLens& l);

/// (k, pi_1) : A1 x A2 -> A1 with k(a1', (a1,a2)) = (a1', a2).
AsymmetricLens constant_complement(const FiniteSet& a1, const FiniteSet& a2);
/// Constant complement lens viewing factor `pos` of a product: get is the
/// projection and put overwrites that one component.
AsymmetricLens constant_complement_at(const FiniteSet& prod, std::size_t pos);
/// True when `l` is exactly constant_complement_at(l.src(), pos).
bool is_constant_complement_at(const AsymmetricLens& l, std::size_t pos);

} // namespace bilearn
