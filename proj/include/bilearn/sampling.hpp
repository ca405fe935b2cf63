#pragma once

// Seeded generators for random lenses, spans and learners. Used by the
// property tests, the acceptance suite and `functor-check`.

#include <cstdint>
#include <string>

#include "bilearn/finite.hpp"
#include "bilearn/learner.hpp"
#include "bilearn/lens.hpp"
#include "bilearn/symlens.hpp"

namespace bilearn {

/// Atomic set {prefix0, ..., prefix(n-1)}.
FiniteSet numbered_set(const std::string& prefix, std::size_t n);

AsymmetricLens random_lens(const FiniteSet& src, const FiniteSet& dst, std::uint64_t seed);
/// Requires |src| >= |dst| (Get must be surjective), or dst empty with src empty.
AsymmetricLens random_putget_lens(const FiniteSet& src, const FiniteSet& dst, std::uint64_t seed);
AsymmetricLens random_getput_lens(const FiniteSet& src, const FiniteSet& dst, std::uint64_t seed);
AsymmetricLens random_well_behaved_lens(const FiniteSet& src, const FiniteSet& dst, std::uint64_t seed);

LensSpan random_span(const FiniteSet& head, const FiniteSet& a1, const FiniteSet& a2, std::uint64_t seed);
/// Left leg satisfies PutGet; right leg is bare.
LensSpan random_putget_left_span(const FiniteSet& head, const FiniteSet& a1, const FiniteSet& a2,
                                 std::uint64_t seed);
/// Head [P, A1] with the constant complement left leg onto A1.
LensSpan random_cc_span(const FiniteSet& p, const FiniteSet& a1, const FiniteSet& a2, std::uint64_t seed);

Learner random_learner(const FiniteSet& p, const FiniteSet& a, const FiniteSet& b, std::uint64_t seed);

/// Adds a copy of head element `x` with identical behaviour. Puts that land
/// on `x` are randomly redirected to either copy, so the result maps onto
/// `s` by a conditions-(E) quotient.
LensSpan duplicate_state(const LensSpan& s, Index x, std::uint64_t seed);
/// The learner analogue of duplicate_state for a parameter `p`.
Learner duplicate_param(const Learner& l, Index p, std::uint64_t seed);

} // namespace bilearn
