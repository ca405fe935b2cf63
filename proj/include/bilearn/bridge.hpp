#pragma once

// The functors Lens -> Learn (trivial parameters) and Learn -> SLens
// (P x A spans with a constant complement left leg), and checkers that
// verify them on concrete representatives.

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "bilearn/learner.hpp"
#include "bilearn/lens.hpp"
#include "bilearn/symlens.hpp"

namespace bilearn {

/// P = 1, I(*,a) = g(a), U constant, r(b,*,a) = p(b,a).
Learner lens_to_learner(const AsymmetricLens& l);
/// (<U,r>, I) : P x A -> B.
AsymmetricLens learner_to_lens(const Learner& l);
/// A <-(k,pi_2)- P x A -(<U,r>,I)-> B.
LensSpan learner_to_span(const Learner& l);

enum class FunctorCheck { Composition, Tensor, Identity, Faithfulness };

std::string_view to_string(FunctorCheck check);

/// One verification record. For Composition/Tensor/Identity the two sides
/// are images that must agree; for Faithfulness they are the images of two
/// learners whose equivalence must be reflected exactly.
struct FunctorReport {
    FunctorCheck check = FunctorCheck::Composition;
    std::string descriptor;
    LensSpan left_side;
    LensSpan right_side;
    /// Table equality after the canonical head relabeling.
    bool equal_exact = false;
    /// span_equiv of the two sides.
    bool equal_up_to_equiv = false;
    /// Faithfulness only: learner_equiv of the two learners.
    std::optional<bool> learners_equivalent;
    std::string detail;

    bool passed() const;
};

using LearnerComposer = std::function<Learner(const Learner&, const Learner&)>;

/// Head bijection (Q x P) x A -> pullback head, ((q,p),a) |-> ((p,a),(q,I(p,a))).
FinFn composition_head_relabeling(const Learner& l1, const Learner& l2, const LensSpan& composite_image,
                                  const LensSpan& span_composite);

/// Compares learner_to_span(l1 ; l2) with span_compose of the two images.
/// `compose` replaces learner_compose (used to inject faulty rules in tests).
FunctorReport verify_functor_composition(const Learner& l1, const Learner& l2, std::string descriptor = {},
                                         const LearnerComposer& compose = learner_compose);

/// Compares learner_to_span(l1 (x) l2) with span_tensor of the two images.
FunctorReport verify_functor_tensor(const Learner& l1, const Learner& l2, std::string descriptor = {});

/// learner_to_span(learner_identity(a)) against span_identity(a).
FunctorReport verify_functor_identity(const FiniteSet& a);

/// learner_equiv(l, l2) must coincide with span_equiv of the images.
FunctorReport verify_functor_faithfulness(const Learner& l, const Learner& l2, std::string descriptor = {});

struct SamplerConfig {
    std::size_t max_set_size = 3;
    std::size_t max_param_size = 3;
    std::size_t cases = 20;
    std::uint64_t seed = 0;
};

/// Identity checks for sets of size 0..max_set_size followed by `cases`
/// faithfulness checks; every third pair is a duplicated-parameter
/// (equivalent) pair. Reports are ordered by case.
std::vector<FunctorReport> verify_functor_identity_and_faithfulness(const SamplerConfig& config);

} // namespace bilearn
