#pragma once

#include <optional>
#include <string>

#include "bilearn/finite.hpp"
#include "bilearn/lens.hpp"
#include "bilearn/symlens.hpp"

namespace bilearn {

/// A learner (P, I, U, r) : A -> B over finite sets.
///   implementation I : P x A -> B      (domain [P, A])
///   update         U : B x P x A -> P  (domain [B, P, A])
///   request        r : B x P x A -> A  (domain [B, P, A])
/// No laws are required.
class Learner {
public:
    /// Throws TypeMismatch naming the offending function.
    Learner(FiniteSet params, FinFn impl, FinFn update, FinFn request);

    const FiniteSet& params() const noexcept { return params_; }
    const FiniteSet& src() const noexcept { return src_; }
    const FiniteSet& dst() const noexcept { return impl_.cod(); }
    const FinFn& impl() const noexcept { return impl_; }
    const FinFn& update() const noexcept { return update_; }
    const FinFn& request() const noexcept { return request_; }

    Index impl(Index p, Index a) const { return impl_(p * src_.size() + a); }
    Index update(Index b, Index p, Index a) const { return update_(triple(b, p, a)); }
    Index request(Index b, Index p, Index a) const { return request_(triple(b, p, a)); }

    friend bool operator==(const Learner&, const Learner&) = default;

private:
    Index triple(Index b, Index p, Index a) const { return (b * params_.size() + p) * src_.size() + a; }

    FiniteSet params_;
    FiniteSet src_;
    FinFn impl_;
    FinFn update_;
    FinFn request_;
};

Learner learner_new(FiniteSet params, FinFn impl, FinFn update, FinFn request);

/// Composite A -> C of l1 : A -> B and l2 : B -> C with parameters [Q, P]:
///   I*J(q,p,a)   = J(q, I(p,a))
///   U*V(c,q,p,a) = (V(c,q,I(p,a)), U(s(c,q,I(p,a)),p,a))   in Q x P order
///   r*s(c,q,p,a) = r(s(c,q,I(p,a)), p, a)
Learner learner_compose(const Learner& l1, const Learner& l2);
/// Monoidal product (A x C) -> (B x D) with parameters [P, Q].
Learner learner_tensor(const Learner& l1, const Learner& l2);
/// Trivial-parameter learner: I(*,a) = a, r(b,*,a) = b.
Learner learner_identity(const FiniteSet& a);

enum class WitnessMode {
    Surjective,  // conditions (E') as used here
    Bijective,   // the stricter variant requiring f to be a bijection
};

/// Conditions (E') for f : P -> P'. Four clauses: surjective (or bijective),
/// preserves implementations, updates and requests.
WitnessReport conditions_eprime_check(const FinFn& f, const Learner& l, const Learner& l2,
                                      WitnessMode mode = WitnessMode::Surjective);

struct LearnerQuotient {
    Learner learner;
    FinFn quotient;
};

/// Coarsest parameter partition on which I and r rows agree and U maps
/// blocks into blocks. Blocks are numbered and labelled by least member.
LearnerQuotient learner_quotient(const Learner& l);
Learner learner_minimize(const Learner& l);

/// Learner induced on f's codomain by a surjection of parameters whose
/// kernel is a congruence; nullopt otherwise.
std::optional<Learner> induced_learner(const Learner& l, const FinFn& f);

struct LearnerEquivResult {
    bool equivalent = false;
    std::size_t minimized_size_a = 0;
    std::size_t minimized_size_b = 0;
    std::optional<FinFn> bijection;
    std::string distinguishing;
};

LearnerEquivResult learner_equiv_detail(const Learner& l, const Learner& l2);
bool learner_equiv(const Learner& l, const Learner& l2);

/// Zigzag brute force for the generated learner equivalence (see
/// span_equiv_oracle_length).
std::optional<std::size_t> learner_equiv_oracle_length(const Learner& l, const Learner& l2,
                                                       std::size_t max_zigzag,
                                                       std::size_t param_cap = kDefaultOracleHeadCap);
bool learner_equiv_oracle(const Learner& l, const Learner& l2, std::size_t max_zigzag,
                          std::size_t param_cap = kDefaultOracleHeadCap);

/// I-UR: r(I(p,a),p,a) = a and U(I(p,a),p,a) = p for all (p,a).
LawReport check_iur(const Learner& l);
/// UR-I: I(U(b,p,a), r(b,p,a)) = b for all (b,p,a).
LawReport check_uri(const Learner& l);

} // namespace bilearn
