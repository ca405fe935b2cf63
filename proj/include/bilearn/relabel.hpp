#pragma once

// Explicit bijections between finite sets and transport of lenses, spans and
// learners along them. Every "equal up to reordering" comparison in the
// library goes through these tables.

#include <vector>

#include "bilearn/finite.hpp"
#include "bilearn/learner.hpp"
#include "bilearn/lens.hpp"
#include "bilearn/symlens.hpp"

namespace bilearn {

/// Atomic sets at the leaves of a (possibly nested) product, left to right.
/// An atomic set is its own single leaf; the unit has none.
std::vector<FiniteSet> leaves(const FiniteSet& set);

/// The flat product of leaves(set).
FiniteSet flatten(const FiniteSet& set);

/// Bijection `from -> to` between two sets with the same leaves up to the
/// permutation `leaf_order`: leaf j of `to` is leaf leaf_order[j] of `from`.
/// An empty `leaf_order` means the identity permutation, which covers all
/// reassociations and unitors. Throws TypeMismatch if leaves disagree.
FinFn restructure(const FiniteSet& from, const FiniteSet& to, const std::vector<std::size_t>& leaf_order = {});

/// Canonical bijection set -> flatten(set).
FinFn flatten_iso(const FiniteSet& set);

FinFn inverse(const FinFn& bijection);

/// l transported along src_iso : A -> A' and dst_iso : B -> B'.
AsymmetricLens transport_lens(const AsymmetricLens& l, const FinFn& src_iso, const FinFn& dst_iso);
/// Same span on a relabelled head; feet unchanged.
LensSpan transport_span(const LensSpan& s, const FinFn& head_iso);
/// Same learner on relabelled parameters; ends unchanged.
Learner transport_learner(const Learner& l, const FinFn& params_iso);

} // namespace bilearn
