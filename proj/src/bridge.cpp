#include "bilearn/bridge.hpp"

#include "bilearn/relabel.hpp"
#include "bilearn/sampling.hpp"

namespace bilearn {

Learner lens_to_learner(const AsymmetricLens& l)
{
    const FiniteSet one = FiniteSet::unit();
    const FiniteSet& a = l.src();
    const FiniteSet& b = l.dst();
    const FiniteSet impl_dom = product({one, a});
    FinFn impl = tabulate(impl_dom, b, [&](Index x) { return l.get(impl_dom.component(x, 1)); });
    const FiniteSet tri = product({b, one, a});
    FinFn update(tri, one, std::vector<Index>(tri.size(), 0));
    FinFn request = tabulate(tri, a, [&](Index x) { return l.put(tri.component(x, 0), tri.component(x, 2)); });
    return Learner(one, std::move(impl), std::move(update), std::move(request));
}

AsymmetricLens learner_to_lens(const Learner& l)
{
    const FiniteSet& pa = l.impl().dom();
    const FiniteSet put_dom = product({l.dst(), pa});
    FinFn put = tabulate(put_dom, pa, [&](Index x) {
        const Index b = put_dom.component(x, 0);
        const Index pai = put_dom.component(x, 1);
        const Index p = pa.component(pai, 0);
        const Index a = pa.component(pai, 1);
        return pa.from_tuple({l.update(b, p, a), l.request(b, p, a)});
    });
    return AsymmetricLens(l.impl(), std::move(put));
}

LensSpan learner_to_span(const Learner& l)
{
    return LensSpan(constant_complement_at(l.impl().dom(), 1), learner_to_lens(l));
}

std::string_view to_string(FunctorCheck check)
{
    switch (check) {
    case FunctorCheck::Composition: return "composition";
    case FunctorCheck::Tensor: return "tensor";
    case FunctorCheck::Identity: return "identity";
    case FunctorCheck::Faithfulness: return "faithfulness";
    }
    return "unknown";
}

bool FunctorReport::passed() const
{
    if (check == FunctorCheck::Faithfulness) {
        return learners_equivalent.has_value() && *learners_equivalent == equal_up_to_equiv;
    }
    return equal_exact && equal_up_to_equiv;
}

FinFn composition_head_relabeling(const Learner& l1, const Learner& l2, const LensSpan& composite_image,
                                  const LensSpan& span_composite)
{
    const FiniteSet qp = product({l2.params(), l1.params()});
    const FiniteSet expected = product({qp, l1.src()});
    if (!(composite_image.head() == expected)) {
        throw Error(ErrorKind::TypeMismatch, "composite head " + composite_image.head().describe()
                                                 + " is not (Q * P) * A");
    }
    const Pullback t = pullback(learner_to_span(l1).right().get(), learner_to_span(l2).left().get());
    if (!(t.set == span_composite.head())) {
        throw Error(ErrorKind::TypeMismatch, "span composite head is not the expected pullback");
    }
    const FiniteSet& s1 = l1.impl().dom();  // P x A
    const FiniteSet s2 = product({l2.params(), l1.dst()});
    return tabulate(expected, t.set, [&](Index x) {
        const Index qpi = expected.component(x, 0);
        const Index q = qp.component(qpi, 0);
        const Index p = qp.component(qpi, 1);
        const Index a = expected.component(x, 1);
        return t.lookup(s1.from_tuple({p, a}), s2.from_tuple({q, l1.impl(p, a)}));
    });
}

FunctorReport verify_functor_composition(const Learner& l1, const Learner& l2, std::string descriptor,
                                         const LearnerComposer& compose)
{
    if (!(l1.dst() == l2.src())) {
        throw Error(ErrorKind::TypeMismatch, "verify_functor_composition: learners are not composable");
    }
    FunctorReport report{FunctorCheck::Composition, std::move(descriptor),
                         learner_to_span(compose(l1, l2)),
                         span_compose(learner_to_span(l1), learner_to_span(l2))};
    try {
        const FinFn relabel = composition_head_relabeling(l1, l2, report.left_side, report.right_side);
        const LensSpan moved = transport_span(report.left_side, relabel);
        report.equal_exact = moved == report.right_side;
        if (!report.equal_exact) {
            report.detail = moved.left() == report.right_side.left() ? "right legs differ" : "left legs differ";
        }
    } catch (const Error& e) {
        report.detail = e.what();
    }
    report.equal_up_to_equiv = span_equiv(report.left_side, report.right_side);
    return report;
}

FunctorReport verify_functor_tensor(const Learner& l1, const Learner& l2, std::string descriptor)
{
    FunctorReport report{FunctorCheck::Tensor, std::move(descriptor), learner_to_span(learner_tensor(l1, l2)),
                         span_tensor(learner_to_span(l1), learner_to_span(l2))};
    // ((p,q),(a,c)) -> ((p,a),(q,c))
    const FiniteSet& from = report.left_side.head();
    const FiniteSet& to = report.right_side.head();
    const FiniteSet& pq = from.factor(0);
    const FiniteSet& ac = from.factor(1);
    const FiniteSet& pa = to.factor(0);
    const FiniteSet& qc = to.factor(1);
    const FinFn relabel = tabulate(from, to, [&](Index x) {
        const Index pqi = from.component(x, 0);
        const Index aci = from.component(x, 1);
        return to.from_tuple({pa.from_tuple({pq.component(pqi, 0), ac.component(aci, 0)}),
                              qc.from_tuple({pq.component(pqi, 1), ac.component(aci, 1)})});
    });
    report.equal_exact = transport_span(report.left_side, relabel) == report.right_side;
    report.equal_up_to_equiv = span_equiv(report.left_side, report.right_side);
    return report;
}

FunctorReport verify_functor_identity(const FiniteSet& a)
{
    FunctorReport report{FunctorCheck::Identity, "identity on " + a.describe(),
                         learner_to_span(learner_identity(a)), span_identity(a)};
    const FinFn unitor = restructure(report.left_side.head(), a);
    report.equal_exact = transport_span(report.left_side, unitor) == report.right_side;
    report.equal_up_to_equiv = span_equiv(report.left_side, report.right_side);
    return report;
}

FunctorReport verify_functor_faithfulness(const Learner& l, const Learner& l2, std::string descriptor)
{
    FunctorReport report{FunctorCheck::Faithfulness, std::move(descriptor), learner_to_span(l),
                         learner_to_span(l2)};
    report.equal_exact = report.left_side == report.right_side;
    report.equal_up_to_equiv = span_equiv(report.left_side, report.right_side);
    report.learners_equivalent = learner_equiv(l, l2);
    if (!report.passed()) {
        report.detail = *report.learners_equivalent ? "equivalent learners map to inequivalent spans"
                                                    : "inequivalent learners map to equivalent spans";
    }
    return report;
}

std::vector<FunctorReport> verify_functor_identity_and_faithfulness(const SamplerConfig& config)
{
    std::vector<FunctorReport> reports;
    for (std::size_t n = 0; n <= config.max_set_size; ++n) {
        reports.push_back(verify_functor_identity(numbered_set("a", n)));
    }
    SplitMix64 rng(config.seed);
    for (std::size_t i = 0; i < config.cases; ++i) {
        const std::uint64_t case_seed = rng.next();
        SplitMix64 local(case_seed);
        const FiniteSet a = numbered_set("a", 1 + local.below(config.max_set_size));
        const FiniteSet b = numbered_set("b", 1 + local.below(config.max_set_size));
        const FiniteSet p = numbered_set("p", 1 + local.below(config.max_param_size));
        const Learner l = random_learner(p, a, b, local.next());
        Learner l2 = l;
        if (i % 3 == 0) {
            l2 = duplicate_param(l, local.below(p.size()), local.next());
        } else {
            const FiniteSet p2 = numbered_set("p", 1 + local.below(config.max_param_size));
            l2 = random_learner(p2, a, b, local.next());
        }
        reports.push_back(verify_functor_faithfulness(l, l2, "seed " + std::to_string(case_seed)));
    }
    return reports;
}

} // namespace bilearn
