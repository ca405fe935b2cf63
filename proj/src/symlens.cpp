#include "bilearn/symlens.hpp"

#include <algorithm>

#include "refine.hpp"

namespace bilearn {

namespace {

void require_same_feet(const LensSpan& s, const LensSpan& s2, const char* what)
{
    if (!(s.left_foot() == s2.left_foot()) || !(s.right_foot() == s2.right_foot())) {
        throw Error(ErrorKind::TypeMismatch, std::string(what) + ": spans do not share both feet");
    }
}

// Conditions (E) for a head map given as a table. With report == nullptr it
// stops at the first failure.
bool check_e(const std::vector<Index>& f, const LensSpan& s, const LensSpan& s2, WitnessReport* report)
{
    const FiniteSet& head = s.head();
    const FiniteSet& head2 = s2.head();
    bool ok = true;

    ClauseReport surj{"(i) surjective"};
    {
        std::vector<bool> hit(head2.size(), false);
        for (Index y : f) {
            hit[y] = true;
        }
        const auto missing = std::find(hit.begin(), hit.end(), false);
        if (missing != hit.end()) {
            surj.passed = false;
            surj.counterexample = "no preimage for " + head2.render(static_cast<Index>(missing - hit.begin()));
            ok = false;
            if (report == nullptr) {
                return false;
            }
        }
    }

    ClauseReport gets{"(ii) preserves Gets"};
    for (Index x = 0; x < head.size() && gets.passed; ++x) {
        const bool left_ok = s2.left().get(f[x]) == s.left().get(x);
        const bool right_ok = s2.right().get(f[x]) == s.right().get(x);
        if (!left_ok || !right_ok) {
            gets.passed = false;
            gets.counterexample = std::string(left_ok ? "right" : "left") + " Get differs at s=" + head.render(x);
            ok = false;
            if (report == nullptr) {
                return false;
            }
        }
    }

    ClauseReport puts{"(iii) preserves Puts"};
    auto check_leg = [&](const AsymmetricLens& leg, const AsymmetricLens& leg2, const char* side) {
        for (Index x = 0; x < head.size(); ++x) {
            for (Index a = 0; a < leg.dst().size(); ++a) {
                if (f[leg.put(a, x)] != leg2.put(a, f[x])) {
                    puts.passed = false;
                    puts.counterexample = std::string(side) + " Put differs at (a=" + leg.dst().render(a)
                                          + ",s=" + head.render(x) + ")";
                    return false;
                }
            }
        }
        return true;
    };
    if (!check_leg(s.left(), s2.left(), "left") || !check_leg(s.right(), s2.right(), "right")) {
        ok = false;
    }

    if (report != nullptr) {
        report->clauses = {std::move(surj), std::move(gets), std::move(puts)};
    }
    return ok;
}

// Tables for the Puts of both legs, one per foot element, as head maps.
std::vector<std::vector<Index>> put_transitions(const LensSpan& s)
{
    std::vector<std::vector<Index>> out;
    for (const AsymmetricLens* leg : {&s.left(), &s.right()}) {
        for (Index a = 0; a < leg->dst().size(); ++a) {
            std::vector<Index> t(s.head().size());
            for (Index x = 0; x < t.size(); ++x) {
                t[x] = leg->put(a, x);
            }
            out.push_back(std::move(t));
        }
    }
    return out;
}

std::vector<std::vector<Index>> get_observations(const LensSpan& s)
{
    std::vector<std::vector<Index>> out(s.head().size());
    for (Index x = 0; x < out.size(); ++x) {
        out[x] = {s.left().get(x), s.right().get(x)};
    }
    return out;
}

FiniteSet numbered_set(std::size_t k)
{
    std::vector<std::string> labels;
    for (std::size_t i = 0; i < k; ++i) {
        labels.push_back("q" + std::to_string(i));
    }
    return make_set(std::move(labels));
}

bool has_direct_witness(const LensSpan& from, const LensSpan& to)
{
    FunctionEnumerator it(from.head(), to.head());
    while (const auto* table = it.next_table()) {
        if (check_e(*table, from, to, nullptr)) {
            return true;
        }
    }
    return false;
}

} // namespace

LensSpan::LensSpan(AsymmetricLens left, AsymmetricLens right) : left_(std::move(left)), right_(std::move(right))
{
    if (!(left_.src() == right_.src())) {
        throw Error(ErrorKind::HeadMismatch, "left leg source " + left_.src().describe()
                                                 + " differs from right leg source " + right_.src().describe());
    }
}

bool WitnessReport::passed() const
{
    return std::all_of(clauses.begin(), clauses.end(), [](const ClauseReport& c) { return c.passed; });
}

std::string WitnessReport::describe() const
{
    std::string out;
    for (const auto& c : clauses) {
        out += c.clause + ": " + (c.passed ? "ok" : "FAIL " + c.counterexample) + "\n";
    }
    return out;
}

Pullback pullback(const FinFn& g, const FinFn& h)
{
    if (!(g.cod() == h.cod())) {
        throw Error(ErrorKind::TypeMismatch, "pullback: cospan legs have different codomains");
    }
    Pullback pb{FiniteSet(), g.dom(), h.dom(), {}, {}};
    pb.index_of.assign(g.dom().size() * h.dom().size(), Pullback::npos);
    std::vector<std::string> labels;
    for (Index x1 = 0; x1 < g.dom().size(); ++x1) {
        for (Index x2 = 0; x2 < h.dom().size(); ++x2) {
            if (g(x1) == h(x2)) {
                pb.index_of[x1 * h.dom().size() + x2] = pb.pairs.size();
                pb.pairs.emplace_back(x1, x2);
                labels.push_back("(" + g.dom().render(x1) + "|" + h.dom().render(x2) + ")");
            }
        }
    }
    pb.set = make_set(std::move(labels));
    return pb;
}

LensSpan span_new(AsymmetricLens left, AsymmetricLens right) { return LensSpan(std::move(left), std::move(right)); }

LensSpan span_identity(const FiniteSet& a) { return LensSpan(lens_identity(a), lens_identity(a)); }

LensSpan span_tensor(const LensSpan& s1, const LensSpan& s2)
{
    return LensSpan(lens_tensor(s1.left(), s2.left()), lens_tensor(s1.right(), s2.right()));
}

LensSpan span_compose(const LensSpan& s1, const LensSpan& s2)
{
    if (!(s1.right_foot() == s2.left_foot())) {
        throw Error(ErrorKind::TypeMismatch, "span_compose: middle feet differ: " + s1.right_foot().describe()
                                                 + " vs " + s2.left_foot().describe());
    }
    if (auto r = check_putget(s1.left()); !r) {
        throw Error(ErrorKind::LeftLegPutGetViolation, "left leg of the first span: " + r.describe());
    }
    if (auto r = check_putget(s2.left()); !r) {
        throw Error(ErrorKind::LeftLegPutGetViolation, "left leg of the second span: " + r.describe());
    }

    const AsymmetricLens& p2g2 = s1.right();  // S1 -> A2
    const AsymmetricLens& q2h2 = s2.left();   // S2 -> A2
    const FiniteSet& s1_head = s1.head();
    const FiniteSet& s2_head = s2.head();
    const Pullback t = pullback(p2g2.get(), q2h2.get());

    auto in_t = [&](Index x1, Index x2) {
        const Index idx = t.lookup(x1, x2);
        if (idx == Pullback::npos) {
            throw std::logic_error("span_compose: put left the pullback");
        }
        return idx;
    };

    // (q2bar, h2bar) : T -> S1
    FinFn h2bar = tabulate(t.set, s1_head, [&](Index x) { return t.pairs[x].first; });
    const FiniteSet q2bar_dom = product({s1_head, t.set});
    FinFn q2bar = tabulate(q2bar_dom, t.set, [&](Index x) {
        const Index x1_new = q2bar_dom.component(x, 0);
        const Index x2 = t.pairs[q2bar_dom.component(x, 1)].second;
        return in_t(x1_new, q2h2.put(p2g2.get(x1_new), x2));
    });

    // (p2bar, g2bar) : T -> S2
    FinFn g2bar = tabulate(t.set, s2_head, [&](Index x) { return t.pairs[x].second; });
    const FiniteSet p2bar_dom = product({s2_head, t.set});
    FinFn p2bar = tabulate(p2bar_dom, t.set, [&](Index x) {
        const Index x2_new = p2bar_dom.component(x, 0);
        const Index x1 = t.pairs[p2bar_dom.component(x, 1)].first;
        const Index y1 = p2g2.put(q2h2.get(x2_new), x1);
        const Index y2 = q2h2.put(p2g2.get(y1), x2_new);
        return in_t(y1, y2);
    });

    AsymmetricLens left = lens_compose(AsymmetricLens(std::move(h2bar), std::move(q2bar)), s1.left());
    AsymmetricLens right = lens_compose(AsymmetricLens(std::move(g2bar), std::move(p2bar)), s2.right());
    return LensSpan(std::move(left), std::move(right));
}

bool has_constant_complement_left(const LensSpan& s)
{
    const FiniteSet& head = s.head();
    return head.is_product() && head.arity() >= 1 && is_constant_complement_at(s.left(), head.arity() - 1);
}

LensSpan span_compose_cc(const LensSpan& s1, const LensSpan& s2)
{
    if (!has_constant_complement_left(s1) || !has_constant_complement_left(s2)) {
        throw Error(ErrorKind::NotConstantComplement,
                    "span_compose_cc needs constant complement left legs onto the last head factor");
    }
    if (!(s1.right_foot() == s2.left_foot())) {
        throw Error(ErrorKind::TypeMismatch, "span_compose_cc: middle feet differ");
    }
    const FiniteSet& h1 = s1.head();  // P1... x A1
    const FiniteSet& h2 = s2.head();  // P2... x A2
    const std::size_t k1 = h1.arity() - 1;
    const std::size_t k2 = h2.arity() - 1;

    std::vector<FiniteSet> factors;
    for (std::size_t i = 0; i < k2; ++i) {
        factors.push_back(h2.factor(i));
    }
    for (std::size_t i = 0; i <= k1; ++i) {
        factors.push_back(h1.factor(i));
    }
    const FiniteSet head = product(std::move(factors));
    const AsymmetricLens& p2g2 = s1.right();
    const AsymmetricLens& p3g3 = s2.right();

    // Splits (m2..., m1..., a1) into x1 = (m1..., a1) and x2 = (m2..., g2(x1)).
    std::vector<Index> tuple1(k1 + 1);
    std::vector<Index> tuple2(k2 + 1);
    auto split = [&](Index x) {
        const auto t = head.to_tuple(x);
        std::copy(t.begin() + static_cast<std::ptrdiff_t>(k2), t.end(), tuple1.begin());
        const Index x1 = h1.from_tuple(tuple1);
        std::copy(t.begin(), t.begin() + static_cast<std::ptrdiff_t>(k2), tuple2.begin());
        tuple2[k2] = p2g2.get(x1);
        return std::pair{x1, h2.from_tuple(tuple2)};
    };

    FinFn get = tabulate(head, p3g3.dst(), [&](Index x) { return p3g3.get(split(x).second); });
    const FiniteSet put_dom = product({p3g3.dst(), head});
    FinFn put = tabulate(put_dom, head, [&](Index x) {
        const Index a3 = put_dom.component(x, 0);
        const auto [x1, x2] = split(put_dom.component(x, 1));
        const auto m2a2 = h2.to_tuple(p3g3.put(a3, x2));  // (m2'..., a2')
        const auto m1a1 = h1.to_tuple(p2g2.put(m2a2.back(), x1));
        std::vector<Index> out(m2a2.begin(), m2a2.end() - 1);
        out.insert(out.end(), m1a1.begin(), m1a1.end());
        return head.from_tuple(out);
    });

    return LensSpan(constant_complement_at(head, k1 + k2), AsymmetricLens(std::move(get), std::move(put)));
}

FinFn cc_head_relabeling(const LensSpan& s1, const LensSpan& s2, const LensSpan& cc_composite,
                         const LensSpan& general_composite)
{
    const Pullback t = pullback(s1.right().get(), s2.left().get());
    if (!(t.set == general_composite.head())) {
        throw Error(ErrorKind::TypeMismatch, "cc_head_relabeling: general composite head is not the pullback");
    }
    const FiniteSet& head = cc_composite.head();
    const FiniteSet& h1 = s1.head();
    const FiniteSet& h2 = s2.head();
    const std::size_t k2 = h2.arity() - 1;
    return tabulate(head, t.set, [&](Index x) {
        const auto tuple = head.to_tuple(x);
        const std::vector<Index> m1a1(tuple.begin() + static_cast<std::ptrdiff_t>(k2), tuple.end());
        const Index x1 = h1.from_tuple(m1a1);
        std::vector<Index> m2a2(tuple.begin(), tuple.begin() + static_cast<std::ptrdiff_t>(k2));
        m2a2.push_back(s1.right().get(x1));
        return t.lookup(x1, h2.from_tuple(m2a2));
    });
}

WitnessReport conditions_e_check(const FinFn& f, const LensSpan& s, const LensSpan& s2)
{
    require_same_feet(s, s2, "conditions_e_check");
    if (!(f.dom() == s.head()) || !(f.cod() == s2.head())) {
        throw Error(ErrorKind::TypeMismatch, "conditions_e_check: f must map head to head");
    }
    WitnessReport report;
    check_e(f.table(), s, s2, &report);
    return report;
}

SpanQuotient span_quotient(const LensSpan& s)
{
    const FiniteSet& head = s.head();
    const auto transitions = put_transitions(s);
    const auto block = detail::coarsest_congruence(get_observations(s), transitions);
    const std::size_t k = detail::block_count(block);

    std::vector<Index> rep(k, Pullback::npos);
    std::vector<std::string> labels(k);
    for (Index x = 0; x < head.size(); ++x) {
        if (rep[block[x]] == Pullback::npos) {
            rep[block[x]] = x;
            labels[block[x]] = head.render(x);
        }
    }
    const FiniteSet qhead = make_set(std::move(labels));
    FinFn quotient(head, qhead, block);

    auto quotient_leg = [&](const AsymmetricLens& leg) {
        FinFn get = tabulate(qhead, leg.dst(), [&](Index y) { return leg.get(rep[y]); });
        const FiniteSet put_dom = product({leg.dst(), qhead});
        FinFn put = tabulate(put_dom, qhead, [&](Index x) {
            return block[leg.put(put_dom.component(x, 0), rep[put_dom.component(x, 1)])];
        });
        return AsymmetricLens(std::move(get), std::move(put));
    };
    return SpanQuotient{LensSpan(quotient_leg(s.left()), quotient_leg(s.right())), std::move(quotient)};
}

LensSpan span_minimize(const LensSpan& s) { return span_quotient(s).span; }

std::optional<LensSpan> induced_span(const LensSpan& s, const FinFn& f)
{
    if (!(f.dom() == s.head()) || !f.is_surjective()) {
        return std::nullopt;
    }
    const FiniteSet& qhead = f.cod();
    std::vector<Index> rep(qhead.size(), Pullback::npos);
    for (Index x = 0; x < f.dom().size(); ++x) {
        if (rep[f(x)] == Pullback::npos) {
            rep[f(x)] = x;
        }
    }
    auto induced_leg = [&](const AsymmetricLens& leg) -> std::optional<AsymmetricLens> {
        for (Index x = 0; x < f.dom().size(); ++x) {
            if (leg.get(x) != leg.get(rep[f(x)])) {
                return std::nullopt;
            }
            for (Index a = 0; a < leg.dst().size(); ++a) {
                if (f(leg.put(a, x)) != f(leg.put(a, rep[f(x)]))) {
                    return std::nullopt;
                }
            }
        }
        FinFn get = tabulate(qhead, leg.dst(), [&](Index y) { return leg.get(rep[y]); });
        const FiniteSet put_dom = product({leg.dst(), qhead});
        FinFn put = tabulate(put_dom, qhead, [&](Index x) {
            return f(leg.put(put_dom.component(x, 0), rep[put_dom.component(x, 1)]));
        });
        return AsymmetricLens(std::move(get), std::move(put));
    };
    auto left = induced_leg(s.left());
    auto right = induced_leg(s.right());
    if (!left || !right) {
        return std::nullopt;
    }
    return LensSpan(std::move(*left), std::move(*right));
}

SpanEquivResult span_equiv_detail(const LensSpan& s, const LensSpan& s2)
{
    require_same_feet(s, s2, "span_equiv");
    const SpanQuotient qa = span_quotient(s);
    const SpanQuotient qb = span_quotient(s2);
    const LensSpan& ma = qa.span;
    const LensSpan& mb = qb.span;
    SpanEquivResult result;
    result.minimized_size_a = ma.head().size();
    result.minimized_size_b = mb.head().size();

    // Refine the disjoint union of the two minimized heads. Both sides are
    // already minimal, so every block holds at most one element per side and
    // the spans are equivalent iff every block holds exactly one of each.
    const std::size_t na = ma.head().size();
    const std::size_t nb = mb.head().size();
    auto obs = get_observations(ma);
    auto obs_b = get_observations(mb);
    obs.insert(obs.end(), obs_b.begin(), obs_b.end());
    auto ta = put_transitions(ma);
    const auto tb = put_transitions(mb);
    for (std::size_t t = 0; t < ta.size(); ++t) {
        for (Index y : tb[t]) {
            ta[t].push_back(y + na);
        }
    }
    const auto block = detail::coarsest_congruence(obs, ta);
    const std::size_t k = detail::block_count(block);
    std::vector<Index> a_of(k, Pullback::npos);
    std::vector<Index> b_of(k, Pullback::npos);
    for (Index x = 0; x < na; ++x) {
        a_of[block[x]] = x;
    }
    for (Index y = 0; y < nb; ++y) {
        b_of[block[na + y]] = y;
    }
    for (std::size_t b = 0; b < k; ++b) {
        if (a_of[b] == Pullback::npos || b_of[b] == Pullback::npos) {
            const bool from_a = a_of[b] != Pullback::npos;
            const LensSpan& side = from_a ? ma : mb;
            const Index x = from_a ? a_of[b] : b_of[b];
            result.distinguishing = std::string(from_a ? "first" : "second") + " span state "
                                    + side.head().render(x) + " (gets " + side.left_foot().render(side.left().get(x))
                                    + ", " + side.right_foot().render(side.right().get(x))
                                    + ") has no counterpart in the other span";
            return result;
        }
    }
    FinFn bijection = tabulate(ma.head(), mb.head(), [&](Index x) { return b_of[block[x]]; });
    if (!bijection.is_bijective() || !check_e(bijection.table(), ma, mb, nullptr)) {
        throw std::logic_error("span_equiv: refinement produced an invalid bijection");
    }
    result.equivalent = true;
    result.bijection = std::move(bijection);
    return result;
}

bool span_equiv(const LensSpan& s, const LensSpan& s2) { return span_equiv_detail(s, s2).equivalent; }

std::optional<std::size_t> span_equiv_oracle_length(const LensSpan& s, const LensSpan& s2, std::size_t max_zigzag,
                                                    std::size_t head_cap)
{
    require_same_feet(s, s2, "span_equiv_oracle");
    if (s.head().size() > head_cap || s2.head().size() > head_cap) {
        throw Error(ErrorKind::CapExceeded, "span_equiv_oracle: heads larger than " + std::to_string(head_cap));
    }
    if (s == s2) {
        return 0;
    }
    std::vector<LensSpan> seen{s};
    std::vector<LensSpan> frontier{s};
    for (std::size_t length = 1; length <= max_zigzag && !frontier.empty(); ++length) {
        for (const auto& x : frontier) {
            if (has_direct_witness(x, s2) || has_direct_witness(s2, x)) {
                return length;
            }
        }
        std::vector<LensSpan> next;
        for (const auto& x : frontier) {
            const std::size_t n = x.head().size();
            detail::for_each_partition(n, [&](const std::vector<Index>& rgs, std::size_t k) {
                if (k == n) {
                    return;
                }
                auto q = induced_span(x, FinFn(x.head(), numbered_set(k), rgs));
                if (q && std::find(seen.begin(), seen.end(), *q) == seen.end()) {
                    seen.push_back(*q);
                    next.push_back(std::move(*q));
                }
            });
        }
        frontier = std::move(next);
    }
    return std::nullopt;
}

bool span_equiv_oracle(const LensSpan& s, const LensSpan& s2, std::size_t max_zigzag, std::size_t head_cap)
{
    return span_equiv_oracle_length(s, s2, max_zigzag, head_cap).has_value();
}

} // namespace bilearn
