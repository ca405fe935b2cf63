#pragma once

// Test-side helpers and independent reference evaluators. Nothing here calls
// the library's composition code: each oracle re-evaluates the defining
// formulas pointwise on plain index arithmetic.

#include <functional>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "bilearn/finite.hpp"
#include "bilearn/learner.hpp"
#include "bilearn/lens.hpp"
#include "bilearn/symlens.hpp"

namespace testing {

using bilearn::AsymmetricLens;
using bilearn::ErrorKind;
using bilearn::FiniteSet;
using bilearn::FinFn;
using bilearn::Index;
using bilearn::Learner;
using bilearn::LensSpan;

/// Kind of the bilearn::Error thrown by f, or nullopt if none is thrown.
template <typename F>
std::optional<ErrorKind> error_kind(F&& f)
{
    try {
        f();
    } catch (const bilearn::Error& e) {
        return e.kind();
    }
    return std::nullopt;
}

/// Element of `set` by its rendering; fails loudly if absent.
inline Index el(const FiniteSet& set, const std::string& text)
{
    const auto found = set.find(text);
    if (!found) {
        throw std::runtime_error("no element " + text + " in " + set.describe());
    }
    return *found;
}

// ---------------------------------------------------------------------------
// Lens composite: get = g2 . g1, put(c, a) = p1(p2(c, g1(a)), a).

struct LensTables {
    std::vector<Index> get;
    std::vector<Index> put;  // indexed c * |A| + a
};

inline LensTables compose_lens_oracle(const AsymmetricLens& l1, const AsymmetricLens& l2)
{
    const std::size_t na = l1.src().size();
    const std::size_t nb = l1.dst().size();
    const std::size_t nc = l2.dst().size();
    const auto& g1 = l1.get().table();
    const auto& p1 = l1.put().table();
    const auto& g2 = l2.get().table();
    const auto& p2 = l2.put().table();
    LensTables out;
    for (Index a = 0; a < na; ++a) {
        out.get.push_back(g2[g1[a]]);
    }
    for (Index c = 0; c < nc; ++c) {
        for (Index a = 0; a < na; ++a) {
            const Index b = p2[c * nb + g1[a]];
            out.put.push_back(p1[b * na + a]);
        }
    }
    return out;
}

// ---------------------------------------------------------------------------
// Span composite over the explicit pullback {(x1, x2) | R1.get(x1) = L2.get(x2)}.

struct SpanPairs {
    std::vector<std::pair<Index, Index>> head;
    std::function<Index(Index, Index)> left_get;
    std::function<std::pair<Index, Index>(Index, Index, Index)> left_put;  // (a1, x1, x2)
    std::function<Index(Index, Index)> right_get;
    std::function<std::pair<Index, Index>(Index, Index, Index)> right_put;  // (a3, x1, x2)
};

inline SpanPairs compose_span_oracle(const LensSpan& s1, const LensSpan& s2)
{
    SpanPairs out;
    for (Index x1 = 0; x1 < s1.head().size(); ++x1) {
        for (Index x2 = 0; x2 < s2.head().size(); ++x2) {
            if (s1.right().get(x1) == s2.left().get(x2)) {
                out.head.emplace_back(x1, x2);
            }
        }
    }
    const AsymmetricLens L1 = s1.left();
    const AsymmetricLens R1 = s1.right();
    const AsymmetricLens L2 = s2.left();
    const AsymmetricLens R2 = s2.right();
    out.left_get = [L1](Index x1, Index) { return L1.get(x1); };
    out.left_put = [L1, R1, L2](Index a1, Index x1, Index x2) {
        const Index y1 = L1.put(a1, x1);
        return std::pair{y1, L2.put(R1.get(y1), x2)};
    };
    out.right_get = [R2](Index, Index x2) { return R2.get(x2); };
    out.right_put = [R1, L2, R2](Index a3, Index x1, Index x2) {
        const Index y2 = R2.put(a3, x2);
        const Index y1 = R1.put(L2.get(y2), x1);
        return std::pair{y1, L2.put(R1.get(y1), y2)};
    };
    return out;
}

/// Compares a library span composite with the oracle, locating pullback
/// elements through their `(x1|x2)` labels.
inline bool span_matches_oracle(const LensSpan& composite, const LensSpan& s1, const LensSpan& s2)
{
    const SpanPairs o = compose_span_oracle(s1, s2);
    const FiniteSet& head = composite.head();
    if (head.size() != o.head.size()) {
        return false;
    }
    auto at = [&](Index x1, Index x2) {
        return el(head, "(" + s1.head().render(x1) + "|" + s2.head().render(x2) + ")");
    };
    for (const auto& [x1, x2] : o.head) {
        const Index t = at(x1, x2);
        if (composite.left().get(t) != o.left_get(x1, x2) || composite.right().get(t) != o.right_get(x1, x2)) {
            return false;
        }
        for (Index a1 = 0; a1 < composite.left_foot().size(); ++a1) {
            const auto [y1, y2] = o.left_put(a1, x1, x2);
            if (composite.left().put(a1, t) != at(y1, y2)) {
                return false;
            }
        }
        for (Index a3 = 0; a3 < composite.right_foot().size(); ++a3) {
            const auto [y1, y2] = o.right_put(a3, x1, x2);
            if (composite.right().put(a3, t) != at(y1, y2)) {
                return false;
            }
        }
    }
    return true;
}

// ---------------------------------------------------------------------------
// Learner composite, evaluated directly from the defining formulas. The
// composite parameter (q, p) has flat index q * |P| + p.

struct LearnerTables {
    std::vector<Index> impl;     // ((q,p), a)
    std::vector<Index> update;   // (c, (q,p), a)
    std::vector<Index> request;  // (c, (q,p), a)
};

inline LearnerTables compose_learner_oracle(const Learner& l1, const Learner& l2)
{
    const std::size_t np = l1.params().size();
    const std::size_t nq = l2.params().size();
    const std::size_t na = l1.src().size();
    const std::size_t nc = l2.dst().size();
    LearnerTables out;
    for (Index q = 0; q < nq; ++q) {
        for (Index p = 0; p < np; ++p) {
            for (Index a = 0; a < na; ++a) {
                out.impl.push_back(l2.impl(q, l1.impl(p, a)));
            }
        }
    }
    for (Index c = 0; c < nc; ++c) {
        for (Index q = 0; q < nq; ++q) {
            for (Index p = 0; p < np; ++p) {
                for (Index a = 0; a < na; ++a) {
                    const Index b = l1.impl(p, a);
                    const Index b_req = l2.request(c, q, b);
                    const Index q_new = l2.update(c, q, b);
                    const Index p_new = l1.update(b_req, p, a);
                    out.update.push_back(q_new * np + p_new);
                    out.request.push_back(l1.request(b_req, p, a));
                }
            }
        }
    }
    return out;
}

// ---------------------------------------------------------------------------
// Law predicates written straight from the equations.

inline bool putget_holds(const AsymmetricLens& l)
{
    for (Index b = 0; b < l.dst().size(); ++b) {
        for (Index a = 0; a < l.src().size(); ++a) {
            if (l.get(l.put(b, a)) != b) {
                return false;
            }
        }
    }
    return true;
}

inline bool getput_holds(const AsymmetricLens& l)
{
    for (Index a = 0; a < l.src().size(); ++a) {
        if (l.put(l.get(a), a) != a) {
            return false;
        }
    }
    return true;
}

/// Conditions (E) evaluated directly: surjective, Gets and Puts preserved.
inline bool e_witness(const FinFn& f, const LensSpan& s, const LensSpan& t)
{
    if (!f.is_surjective()) {
        return false;
    }
    for (Index x = 0; x < s.head().size(); ++x) {
        if (s.left().get(x) != t.left().get(f(x)) || s.right().get(x) != t.right().get(f(x))) {
            return false;
        }
        for (Index a = 0; a < s.left_foot().size(); ++a) {
            if (f(s.left().put(a, x)) != t.left().put(a, f(x))) {
                return false;
            }
        }
        for (Index a = 0; a < s.right_foot().size(); ++a) {
            if (f(s.right().put(a, x)) != t.right().put(a, f(x))) {
                return false;
            }
        }
    }
    return true;
}

} // namespace testing
