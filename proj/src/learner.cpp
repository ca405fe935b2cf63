#include "bilearn/learner.hpp"

#include <algorithm>
#include <array>

#include "refine.hpp"

namespace bilearn {

namespace {

constexpr Index kNone = static_cast<Index>(-1);

FiniteSet impl_source(const FiniteSet& params, const FinFn& impl)
{
    const FiniteSet& dom = impl.dom();
    if (!dom.is_product() || dom.arity() != 2 || !(dom.factor(0) == params)) {
        throw Error(ErrorKind::TypeMismatch, "implementation: domain " + dom.describe()
                                                 + " should be [P, A] with P = " + params.describe());
    }
    return dom.factor(1);
}

void require_same_ends(const Learner& l, const Learner& l2, const char* what)
{
    if (!(l.src() == l2.src()) || !(l.dst() == l2.dst())) {
        throw Error(ErrorKind::TypeMismatch, std::string(what) + ": learners do not share source and target");
    }
}

bool check_eprime(const std::vector<Index>& f, const Learner& l, const Learner& l2, WitnessMode mode,
                  WitnessReport* report)
{
    const FiniteSet& ps = l.params();
    const FiniteSet& as = l.src();
    const FiniteSet& bs = l.dst();
    bool ok = true;
    auto fail = [&](ClauseReport& clause, std::string what) {
        clause.passed = false;
        clause.counterexample = std::move(what);
        ok = false;
        return report == nullptr;
    };

    ClauseReport onto{mode == WitnessMode::Surjective ? "(i) surjective" : "(i) bijective"};
    {
        std::vector<bool> hit(l2.params().size(), false);
        bool injective = true;
        for (Index y : f) {
            injective = injective && !hit[y];
            hit[y] = true;
        }
        const auto missing = std::find(hit.begin(), hit.end(), false);
        if (missing != hit.end()) {
            if (fail(onto, "no preimage for " + l2.params().render(static_cast<Index>(missing - hit.begin())))) {
                return false;
            }
        } else if (mode == WitnessMode::Bijective && !injective) {
            if (fail(onto, "not injective")) {
                return false;
            }
        }
    }

    ClauseReport impl{"(ii) preserves implementations"};
    for (Index p = 0; p < ps.size() && impl.passed; ++p) {
        for (Index a = 0; a < as.size(); ++a) {
            if (l2.impl(f[p], a) != l.impl(p, a)) {
                if (fail(impl, "at (p=" + ps.render(p) + ",a=" + as.render(a) + ")")) {
                    return false;
                }
                break;
            }
        }
    }

    ClauseReport upd{"(iii) preserves updates"};
    ClauseReport req{"(iv) preserves requests"};
    for (Index b = 0; b < bs.size(); ++b) {
        for (Index p = 0; p < ps.size(); ++p) {
            for (Index a = 0; a < as.size(); ++a) {
                const std::string where = "at (b=" + bs.render(b) + ",p=" + ps.render(p) + ",a=" + as.render(a) + ")";
                if (upd.passed && l2.update(b, f[p], a) != f[l.update(b, p, a)]) {
                    if (fail(upd, where)) {
                        return false;
                    }
                }
                if (req.passed && l2.request(b, f[p], a) != l.request(b, p, a)) {
                    if (fail(req, where)) {
                        return false;
                    }
                }
            }
        }
    }

    if (report != nullptr) {
        report->clauses = {std::move(onto), std::move(impl), std::move(upd), std::move(req)};
    }
    return ok;
}

std::vector<std::vector<Index>> behaviour_rows(const Learner& l)
{
    const std::size_t np = l.params().size();
    const std::size_t na = l.src().size();
    const std::size_t nb = l.dst().size();
    std::vector<std::vector<Index>> rows(np);
    for (Index p = 0; p < np; ++p) {
        auto& row = rows[p];
        for (Index a = 0; a < na; ++a) {
            row.push_back(l.impl(p, a));
        }
        for (Index b = 0; b < nb; ++b) {
            for (Index a = 0; a < na; ++a) {
                row.push_back(l.request(b, p, a));
            }
        }
    }
    return rows;
}

std::vector<std::vector<Index>> update_transitions(const Learner& l)
{
    const std::size_t np = l.params().size();
    std::vector<std::vector<Index>> out;
    for (Index b = 0; b < l.dst().size(); ++b) {
        for (Index a = 0; a < l.src().size(); ++a) {
            std::vector<Index> t(np);
            for (Index p = 0; p < np; ++p) {
                t[p] = l.update(b, p, a);
            }
            out.push_back(std::move(t));
        }
    }
    return out;
}

// Learner with parameters relabelled onto `qparams` through `rep` (one
// representative per new parameter) and `to_new` (old parameter -> new).
template <typename ToNew>
Learner rebuild(const Learner& l, const FiniteSet& qparams, const std::vector<Index>& rep, ToNew&& to_new)
{
    const FiniteSet impl_dom = product({qparams, l.src()});
    FinFn impl = tabulate(impl_dom, l.dst(), [&](Index x) {
        return l.impl(rep[impl_dom.component(x, 0)], impl_dom.component(x, 1));
    });
    const FiniteSet tri = product({l.dst(), qparams, l.src()});
    FinFn update = tabulate(tri, qparams, [&](Index x) {
        return to_new(l.update(tri.component(x, 0), rep[tri.component(x, 1)], tri.component(x, 2)));
    });
    FinFn request = tabulate(tri, l.src(), [&](Index x) {
        return l.request(tri.component(x, 0), rep[tri.component(x, 1)], tri.component(x, 2));
    });
    return Learner(qparams, std::move(impl), std::move(update), std::move(request));
}

bool has_direct_witness(const Learner& from, const Learner& to)
{
    FunctionEnumerator it(from.params(), to.params());
    while (const auto* table = it.next_table()) {
        if (check_eprime(*table, from, to, WitnessMode::Surjective, nullptr)) {
            return true;
        }
    }
    return false;
}

} // namespace

Learner::Learner(FiniteSet params, FinFn impl, FinFn update, FinFn request)
    : params_(std::move(params)),
      src_(impl_source(params_, impl)),
      impl_(std::move(impl)),
      update_(std::move(update)),
      request_(std::move(request))
{
    const FiniteSet tri = product({impl_.cod(), params_, src_});
    if (!(update_.dom() == tri) || !(update_.cod() == params_)) {
        throw Error(ErrorKind::TypeMismatch, "update: expected " + tri.describe() + " -> " + params_.describe()
                                                 + ", got " + update_.dom().describe() + " -> "
                                                 + update_.cod().describe());
    }
    if (!(request_.dom() == tri) || !(request_.cod() == src_)) {
        throw Error(ErrorKind::TypeMismatch, "request: expected " + tri.describe() + " -> " + src_.describe()
                                                 + ", got " + request_.dom().describe() + " -> "
                                                 + request_.cod().describe());
    }
}

Learner learner_new(FiniteSet params, FinFn impl, FinFn update, FinFn request)
{
    return Learner(std::move(params), std::move(impl), std::move(update), std::move(request));
}

Learner learner_compose(const Learner& l1, const Learner& l2)
{
    if (!(l1.dst() == l2.src())) {
        throw Error(ErrorKind::TypeMismatch, "learner_compose: target " + l1.dst().describe()
                                                 + " does not match source " + l2.src().describe());
    }
    const FiniteSet& a = l1.src();
    const FiniteSet& c = l2.dst();
    const FiniteSet qp = product({l2.params(), l1.params()});

    const FiniteSet impl_dom = product({qp, a});
    FinFn impl = tabulate(impl_dom, c, [&](Index x) {
        const Index qpi = impl_dom.component(x, 0);
        return l2.impl(qp.component(qpi, 0), l1.impl(qp.component(qpi, 1), impl_dom.component(x, 1)));
    });

    const FiniteSet tri = product({c, qp, a});
    FinFn update = tabulate(tri, qp, [&](Index x) {
        const Index ci = tri.component(x, 0);
        const Index q = qp.component(tri.component(x, 1), 0);
        const Index p = qp.component(tri.component(x, 1), 1);
        const Index ai = tri.component(x, 2);
        const Index b = l1.impl(p, ai);
        const Index b_req = l2.request(ci, q, b);
        return qp.from_tuple({l2.update(ci, q, b), l1.update(b_req, p, ai)});
    });
    FinFn request = tabulate(tri, a, [&](Index x) {
        const Index ci = tri.component(x, 0);
        const Index q = qp.component(tri.component(x, 1), 0);
        const Index p = qp.component(tri.component(x, 1), 1);
        const Index ai = tri.component(x, 2);
        return l1.request(l2.request(ci, q, l1.impl(p, ai)), p, ai);
    });
    return Learner(qp, std::move(impl), std::move(update), std::move(request));
}

Learner learner_tensor(const Learner& l1, const Learner& l2)
{
    const FiniteSet pq = product({l1.params(), l2.params()});
    const FiniteSet ac = product({l1.src(), l2.src()});
    const FiniteSet bd = product({l1.dst(), l2.dst()});

    const FiniteSet impl_dom = product({pq, ac});
    FinFn impl = tabulate(impl_dom, bd, [&](Index x) {
        const Index pqi = impl_dom.component(x, 0);
        const Index aci = impl_dom.component(x, 1);
        return bd.from_tuple({l1.impl(pq.component(pqi, 0), ac.component(aci, 0)),
                              l2.impl(pq.component(pqi, 1), ac.component(aci, 1))});
    });

    const FiniteSet tri = product({bd, pq, ac});
    auto unpack = [&](Index x) {
        const Index bdi = tri.component(x, 0);
        const Index pqi = tri.component(x, 1);
        const Index aci = tri.component(x, 2);
        return std::array<Index, 6>{bd.component(bdi, 0), bd.component(bdi, 1), pq.component(pqi, 0),
                                    pq.component(pqi, 1), ac.component(aci, 0), ac.component(aci, 1)};
    };
    FinFn update = tabulate(tri, pq, [&](Index x) {
        const auto [b, d, p, q, ai, ci] = unpack(x);
        return pq.from_tuple({l1.update(b, p, ai), l2.update(d, q, ci)});
    });
    FinFn request = tabulate(tri, ac, [&](Index x) {
        const auto [b, d, p, q, ai, ci] = unpack(x);
        return ac.from_tuple({l1.request(b, p, ai), l2.request(d, q, ci)});
    });
    return Learner(pq, std::move(impl), std::move(update), std::move(request));
}

Learner learner_identity(const FiniteSet& a)
{
    const FiniteSet one = FiniteSet::unit();
    const FiniteSet impl_dom = product({one, a});
    FinFn impl = tabulate(impl_dom, a, [&](Index x) { return impl_dom.component(x, 1); });
    const FiniteSet tri = product({a, one, a});
    FinFn update(tri, one, std::vector<Index>(tri.size(), 0));
    FinFn request = tabulate(tri, a, [&](Index x) { return tri.component(x, 0); });
    return Learner(one, std::move(impl), std::move(update), std::move(request));
}

WitnessReport conditions_eprime_check(const FinFn& f, const Learner& l, const Learner& l2, WitnessMode mode)
{
    require_same_ends(l, l2, "conditions_eprime_check");
    if (!(f.dom() == l.params()) || !(f.cod() == l2.params())) {
        throw Error(ErrorKind::TypeMismatch, "conditions_eprime_check: f must map parameters to parameters");
    }
    WitnessReport report;
    check_eprime(f.table(), l, l2, mode, &report);
    return report;
}

LearnerQuotient learner_quotient(const Learner& l)
{
    const FiniteSet& ps = l.params();
    const auto block = detail::coarsest_congruence(behaviour_rows(l), update_transitions(l));
    const std::size_t k = detail::block_count(block);
    std::vector<Index> rep(k, kNone);
    std::vector<std::string> labels(k);
    for (Index p = 0; p < ps.size(); ++p) {
        if (rep[block[p]] == kNone) {
            rep[block[p]] = p;
            labels[block[p]] = ps.render(p);
        }
    }
    const FiniteSet qparams = make_set(std::move(labels));
    Learner quotient = rebuild(l, qparams, rep, [&](Index p) { return block[p]; });
    return LearnerQuotient{std::move(quotient), FinFn(ps, qparams, block)};
}

Learner learner_minimize(const Learner& l) { return learner_quotient(l).learner; }

std::optional<Learner> induced_learner(const Learner& l, const FinFn& f)
{
    if (!(f.dom() == l.params()) || !f.is_surjective()) {
        return std::nullopt;
    }
    std::vector<Index> rep(f.cod().size(), kNone);
    for (Index p = 0; p < f.dom().size(); ++p) {
        if (rep[f(p)] == kNone) {
            rep[f(p)] = p;
        }
    }
    for (Index p = 0; p < f.dom().size(); ++p) {
        const Index r = rep[f(p)];
        for (Index a = 0; a < l.src().size(); ++a) {
            if (l.impl(p, a) != l.impl(r, a)) {
                return std::nullopt;
            }
            for (Index b = 0; b < l.dst().size(); ++b) {
                if (l.request(b, p, a) != l.request(b, r, a) || f(l.update(b, p, a)) != f(l.update(b, r, a))) {
                    return std::nullopt;
                }
            }
        }
    }
    return rebuild(l, f.cod(), rep, [&](Index p) { return f(p); });
}

LearnerEquivResult learner_equiv_detail(const Learner& l, const Learner& l2)
{
    require_same_ends(l, l2, "learner_equiv");
    const Learner ma = learner_quotient(l).learner;
    const Learner mb = learner_quotient(l2).learner;
    LearnerEquivResult result;
    const std::size_t na = ma.params().size();
    const std::size_t nb = mb.params().size();
    result.minimized_size_a = na;
    result.minimized_size_b = nb;

    auto rows = behaviour_rows(ma);
    const auto rows_b = behaviour_rows(mb);
    rows.insert(rows.end(), rows_b.begin(), rows_b.end());
    auto ta = update_transitions(ma);
    const auto tb = update_transitions(mb);
    for (std::size_t t = 0; t < ta.size(); ++t) {
        for (Index y : tb[t]) {
            ta[t].push_back(y + na);
        }
    }
    const auto block = detail::coarsest_congruence(rows, ta);
    const std::size_t k = detail::block_count(block);
    std::vector<Index> a_of(k, kNone);
    std::vector<Index> b_of(k, kNone);
    for (Index x = 0; x < na; ++x) {
        a_of[block[x]] = x;
    }
    for (Index y = 0; y < nb; ++y) {
        b_of[block[na + y]] = y;
    }
    for (std::size_t b = 0; b < k; ++b) {
        if (a_of[b] == kNone || b_of[b] == kNone) {
            const bool from_a = a_of[b] != kNone;
            const Learner& side = from_a ? ma : mb;
            result.distinguishing = std::string(from_a ? "first" : "second") + " learner parameter "
                                    + side.params().render(from_a ? a_of[b] : b_of[b])
                                    + " has no counterpart in the other learner";
            return result;
        }
    }
    FinFn bijection = tabulate(ma.params(), mb.params(), [&](Index p) { return b_of[block[p]]; });
    if (!bijection.is_bijective() || !check_eprime(bijection.table(), ma, mb, WitnessMode::Bijective, nullptr)) {
        throw std::logic_error("learner_equiv: refinement produced an invalid bijection");
    }
    result.equivalent = true;
    result.bijection = std::move(bijection);
    return result;
}

bool learner_equiv(const Learner& l, const Learner& l2) { return learner_equiv_detail(l, l2).equivalent; }

std::optional<std::size_t> learner_equiv_oracle_length(const Learner& l, const Learner& l2, std::size_t max_zigzag,
                                                       std::size_t param_cap)
{
    require_same_ends(l, l2, "learner_equiv_oracle");
    if (l.params().size() > param_cap || l2.params().size() > param_cap) {
        throw Error(ErrorKind::CapExceeded, "learner_equiv_oracle: parameter sets larger than "
                                                + std::to_string(param_cap));
    }
    if (l == l2) {
        return 0;
    }
    std::vector<Learner> seen{l};
    std::vector<Learner> frontier{l};
    for (std::size_t length = 1; length <= max_zigzag && !frontier.empty(); ++length) {
        for (const auto& x : frontier) {
            if (has_direct_witness(x, l2) || has_direct_witness(l2, x)) {
                return length;
            }
        }
        std::vector<Learner> next;
        for (const auto& x : frontier) {
            const std::size_t n = x.params().size();
            detail::for_each_partition(n, [&](const std::vector<Index>& rgs, std::size_t k) {
                if (k == n) {
                    return;
                }
                std::vector<std::string> labels;
                for (std::size_t i = 0; i < k; ++i) {
                    labels.push_back("q" + std::to_string(i));
                }
                auto q = induced_learner(x, FinFn(x.params(), make_set(std::move(labels)), rgs));
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

bool learner_equiv_oracle(const Learner& l, const Learner& l2, std::size_t max_zigzag, std::size_t param_cap)
{
    return learner_equiv_oracle_length(l, l2, max_zigzag, param_cap).has_value();
}

LawReport check_iur(const Learner& l)
{
    LawReport report{"I-UR"};
    for (Index p = 0; p < l.params().size(); ++p) {
        for (Index a = 0; a < l.src().size(); ++a) {
            const Index b = l.impl(p, a);
            if (l.request(b, p, a) != a || l.update(b, p, a) != p) {
                report.passed = false;
                report.witness = {{"p", l.params().render(p)}, {"a", l.src().render(a)}};
                return report;
            }
        }
    }
    return report;
}

LawReport check_uri(const Learner& l)
{
    LawReport report{"UR-I"};
    for (Index b = 0; b < l.dst().size(); ++b) {
        for (Index p = 0; p < l.params().size(); ++p) {
            for (Index a = 0; a < l.src().size(); ++a) {
                if (l.impl(l.update(b, p, a), l.request(b, p, a)) != b) {
                    report.passed = false;
                    report.witness = {{"b", l.dst().render(b)}, {"p", l.params().render(p)}, {"a", l.src().render(a)}};
                    return report;
                }
            }
        }
    }
    return report;
}

} // namespace bilearn
