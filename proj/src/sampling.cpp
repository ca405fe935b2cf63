#include "bilearn/sampling.hpp"

#include <algorithm>
#include <numeric>

namespace bilearn {

namespace {

Index pick(SplitMix64& rng, std::size_t n) { return static_cast<Index>(rng.below(n)); }

// Surjective Get: a random permutation covers dst first, the rest is random.
FinFn random_surjection(const FiniteSet& src, const FiniteSet& dst, SplitMix64& rng)
{
    if (src.size() < dst.size() || (dst.size() == 0 && src.size() != 0)) {
        throw Error(ErrorKind::EmptyCodomain, "no surjection from " + src.describe() + " onto " + dst.describe());
    }
    std::vector<Index> order(src.size());
    std::iota(order.begin(), order.end(), Index{0});
    for (std::size_t i = order.size(); i > 1; --i) {
        std::swap(order[i - 1], order[pick(rng, i)]);
    }
    std::vector<Index> table(src.size());
    for (std::size_t i = 0; i < order.size(); ++i) {
        table[order[i]] = i < dst.size() ? i : pick(rng, dst.size());
    }
    return FinFn(src, dst, std::move(table));
}

std::vector<std::vector<Index>> fibres(const FinFn& g)
{
    std::vector<std::vector<Index>> out(g.cod().size());
    for (Index a = 0; a < g.dom().size(); ++a) {
        out[g(a)].push_back(a);
    }
    return out;
}

std::string fresh_label(const FiniteSet& head, Index x)
{
    std::string label = head.render(x) + "'";
    while (head.find(label)) {
        label += "'";
    }
    return label;
}

} // namespace

FiniteSet numbered_set(const std::string& prefix, std::size_t n)
{
    std::vector<std::string> labels;
    for (std::size_t i = 0; i < n; ++i) {
        labels.push_back(prefix + std::to_string(i));
    }
    return make_set(std::move(labels));
}

AsymmetricLens random_lens(const FiniteSet& src, const FiniteSet& dst, std::uint64_t seed)
{
    SplitMix64 rng(seed);
    FinFn get = random_fn(src, dst, rng.next());
    FinFn put = random_fn(product({dst, src}), src, rng.next());
    return AsymmetricLens(std::move(get), std::move(put));
}

AsymmetricLens random_putget_lens(const FiniteSet& src, const FiniteSet& dst, std::uint64_t seed)
{
    SplitMix64 rng(seed);
    FinFn get = random_surjection(src, dst, rng);
    const auto fibre = fibres(get);
    const FiniteSet put_dom = product({dst, src});
    FinFn put = tabulate(put_dom, src, [&](Index x) {
        const auto& choices = fibre[put_dom.component(x, 0)];
        return choices[pick(rng, choices.size())];
    });
    return AsymmetricLens(std::move(get), std::move(put));
}

AsymmetricLens random_getput_lens(const FiniteSet& src, const FiniteSet& dst, std::uint64_t seed)
{
    SplitMix64 rng(seed);
    FinFn get = random_fn(src, dst, rng.next());
    const FiniteSet put_dom = product({dst, src});
    FinFn put = tabulate(put_dom, src, [&](Index x) {
        const Index b = put_dom.component(x, 0);
        const Index a = put_dom.component(x, 1);
        return b == get(a) ? a : pick(rng, src.size());
    });
    return AsymmetricLens(std::move(get), std::move(put));
}

AsymmetricLens random_well_behaved_lens(const FiniteSet& src, const FiniteSet& dst, std::uint64_t seed)
{
    SplitMix64 rng(seed);
    FinFn get = random_surjection(src, dst, rng);
    const auto fibre = fibres(get);
    const FiniteSet put_dom = product({dst, src});
    FinFn put = tabulate(put_dom, src, [&](Index x) {
        const Index b = put_dom.component(x, 0);
        const Index a = put_dom.component(x, 1);
        if (b == get(a)) {
            return a;
        }
        const auto& choices = fibre[b];
        return choices[pick(rng, choices.size())];
    });
    return AsymmetricLens(std::move(get), std::move(put));
}

LensSpan random_span(const FiniteSet& head, const FiniteSet& a1, const FiniteSet& a2, std::uint64_t seed)
{
    SplitMix64 rng(seed);
    AsymmetricLens left = random_lens(head, a1, rng.next());
    return LensSpan(std::move(left), random_lens(head, a2, rng.next()));
}

LensSpan random_putget_left_span(const FiniteSet& head, const FiniteSet& a1, const FiniteSet& a2,
                                 std::uint64_t seed)
{
    SplitMix64 rng(seed);
    AsymmetricLens left = random_putget_lens(head, a1, rng.next());
    return LensSpan(std::move(left), random_lens(head, a2, rng.next()));
}

LensSpan random_cc_span(const FiniteSet& p, const FiniteSet& a1, const FiniteSet& a2, std::uint64_t seed)
{
    const FiniteSet head = product({p, a1});
    return LensSpan(constant_complement_at(head, 1), random_lens(head, a2, seed));
}

Learner random_learner(const FiniteSet& p, const FiniteSet& a, const FiniteSet& b, std::uint64_t seed)
{
    SplitMix64 rng(seed);
    const FiniteSet tri = product({b, p, a});
    FinFn impl = random_fn(product({p, a}), b, rng.next());
    FinFn update = random_fn(tri, p, rng.next());
    FinFn request = random_fn(tri, a, rng.next());
    return Learner(p, std::move(impl), std::move(update), std::move(request));
}

LensSpan duplicate_state(const LensSpan& s, Index x, std::uint64_t seed)
{
    const FiniteSet& head = s.head();
    std::vector<std::string> labels;
    for (Index i = 0; i < head.size(); ++i) {
        labels.push_back(head.render(i));
    }
    labels.push_back(fresh_label(head, x));
    const FiniteSet big = make_set(std::move(labels));
    const Index copy = head.size();
    auto original = [&](Index y) { return y == copy ? x : y; };
    SplitMix64 rng(seed);
    auto widen = [&](const AsymmetricLens& leg) {
        FinFn get = tabulate(big, leg.dst(), [&](Index y) { return leg.get(original(y)); });
        const FiniteSet put_dom = product({leg.dst(), big});
        FinFn put = tabulate(put_dom, big, [&](Index i) {
            const Index out = leg.put(put_dom.component(i, 0), original(put_dom.component(i, 1)));
            return out == x && rng.below(2) == 1 ? copy : out;
        });
        return AsymmetricLens(std::move(get), std::move(put));
    };
    AsymmetricLens left = widen(s.left());
    return LensSpan(std::move(left), widen(s.right()));
}

Learner duplicate_param(const Learner& l, Index p, std::uint64_t seed)
{
    const FiniteSet& ps = l.params();
    std::vector<std::string> labels;
    for (Index i = 0; i < ps.size(); ++i) {
        labels.push_back(ps.render(i));
    }
    labels.push_back(fresh_label(ps, p));
    const FiniteSet big = make_set(std::move(labels));
    const Index copy = ps.size();
    auto original = [&](Index q) { return q == copy ? p : q; };
    SplitMix64 rng(seed);
    const FiniteSet impl_dom = product({big, l.src()});
    FinFn impl = tabulate(impl_dom, l.dst(), [&](Index x) {
        return l.impl(original(impl_dom.component(x, 0)), impl_dom.component(x, 1));
    });
    const FiniteSet tri = product({l.dst(), big, l.src()});
    FinFn update = tabulate(tri, big, [&](Index x) {
        const Index out = l.update(tri.component(x, 0), original(tri.component(x, 1)), tri.component(x, 2));
        return out == p && rng.below(2) == 1 ? copy : out;
    });
    FinFn request = tabulate(tri, l.src(), [&](Index x) {
        return l.request(tri.component(x, 0), original(tri.component(x, 1)), tri.component(x, 2));
    });
    return Learner(big, std::move(impl), std::move(update), std::move(request));
}

} // namespace bilearn
