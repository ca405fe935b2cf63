#include "bilearn/relabel.hpp"

#include <numeric>

namespace bilearn {

namespace {

void collect_leaves(const FiniteSet& set, std::vector<FiniteSet>& out)
{
    if (set.is_atomic()) {
        out.push_back(set);
        return;
    }
    for (const auto& f : set.factors()) {
        collect_leaves(f, out);
    }
}

void leaf_tuple(const FiniteSet& set, Index element, std::vector<Index>& out)
{
    if (set.is_atomic()) {
        out.push_back(element);
        return;
    }
    for (std::size_t i = 0; i < set.arity(); ++i) {
        leaf_tuple(set.factor(i), set.component(element, i), out);
    }
}

Index from_leaf_tuple(const FiniteSet& set, const std::vector<Index>& tuple, std::size_t& pos)
{
    if (set.is_atomic()) {
        return tuple[pos++];
    }
    std::vector<Index> components(set.arity());
    for (std::size_t i = 0; i < set.arity(); ++i) {
        components[i] = from_leaf_tuple(set.factor(i), tuple, pos);
    }
    return set.from_tuple(components);
}

} // namespace

std::vector<FiniteSet> leaves(const FiniteSet& set)
{
    std::vector<FiniteSet> out;
    collect_leaves(set, out);
    return out;
}

FiniteSet flatten(const FiniteSet& set) { return product(leaves(set)); }

FinFn restructure(const FiniteSet& from, const FiniteSet& to, const std::vector<std::size_t>& leaf_order)
{
    const auto from_leaves = leaves(from);
    const auto to_leaves = leaves(to);
    std::vector<std::size_t> order = leaf_order;
    if (order.empty()) {
        order.resize(from_leaves.size());
        std::iota(order.begin(), order.end(), std::size_t{0});
    }
    if (order.size() != to_leaves.size() || from_leaves.size() != to_leaves.size()) {
        throw Error(ErrorKind::TypeMismatch, "restructure: " + from.describe() + " and " + to.describe()
                                                 + " have different numbers of leaves");
    }
    std::vector<bool> used(order.size(), false);
    for (std::size_t j = 0; j < order.size(); ++j) {
        if (order[j] >= order.size() || used[order[j]] || !(from_leaves[order[j]] == to_leaves[j])) {
            throw Error(ErrorKind::TypeMismatch, "restructure: leaf " + std::to_string(j) + " of "
                                                     + to.describe() + " does not match");
        }
        used[order[j]] = true;
    }
    std::vector<Index> tuple;
    std::vector<Index> permuted(order.size());
    return tabulate(from, to, [&](Index x) {
        tuple.clear();
        leaf_tuple(from, x, tuple);
        for (std::size_t j = 0; j < order.size(); ++j) {
            permuted[j] = tuple[order[j]];
        }
        std::size_t pos = 0;
        return from_leaf_tuple(to, permuted, pos);
    });
}

FinFn flatten_iso(const FiniteSet& set) { return restructure(set, flatten(set)); }

FinFn inverse(const FinFn& bijection)
{
    if (!bijection.is_bijective()) {
        throw Error(ErrorKind::TypeMismatch, "inverse of a non-bijective function");
    }
    std::vector<Index> table(bijection.dom().size());
    for (Index x = 0; x < table.size(); ++x) {
        table[bijection(x)] = x;
    }
    return FinFn(bijection.cod(), bijection.dom(), std::move(table));
}

AsymmetricLens transport_lens(const AsymmetricLens& l, const FinFn& src_iso, const FinFn& dst_iso)
{
    if (!(src_iso.dom() == l.src()) || !(dst_iso.dom() == l.dst())) {
        throw Error(ErrorKind::TypeMismatch, "transport_lens: bijections do not start at the lens ends");
    }
    const FinFn src_inv = inverse(src_iso);
    const FinFn dst_inv = inverse(dst_iso);
    const FiniteSet& src = src_iso.cod();
    const FiniteSet& dst = dst_iso.cod();
    FinFn get = tabulate(src, dst, [&](Index a) { return dst_iso(l.get(src_inv(a))); });
    const FiniteSet put_dom = product({dst, src});
    FinFn put = tabulate(put_dom, src, [&](Index x) {
        return src_iso(l.put(dst_inv(put_dom.component(x, 0)), src_inv(put_dom.component(x, 1))));
    });
    return AsymmetricLens(std::move(get), std::move(put));
}

LensSpan transport_span(const LensSpan& s, const FinFn& head_iso)
{
    return LensSpan(transport_lens(s.left(), head_iso, identity_fn(s.left_foot())),
                    transport_lens(s.right(), head_iso, identity_fn(s.right_foot())));
}

Learner transport_learner(const Learner& l, const FinFn& params_iso)
{
    if (!(params_iso.dom() == l.params())) {
        throw Error(ErrorKind::TypeMismatch, "transport_learner: bijection does not start at the parameters");
    }
    const FinFn inv = inverse(params_iso);
    const FiniteSet& ps = params_iso.cod();
    const FiniteSet impl_dom = product({ps, l.src()});
    FinFn impl = tabulate(impl_dom, l.dst(), [&](Index x) {
        return l.impl(inv(impl_dom.component(x, 0)), impl_dom.component(x, 1));
    });
    const FiniteSet tri = product({l.dst(), ps, l.src()});
    FinFn update = tabulate(tri, ps, [&](Index x) {
        return params_iso(l.update(tri.component(x, 0), inv(tri.component(x, 1)), tri.component(x, 2)));
    });
    FinFn request = tabulate(tri, l.src(), [&](Index x) {
        return l.request(tri.component(x, 0), inv(tri.component(x, 1)), tri.component(x, 2));
    });
    return Learner(ps, std::move(impl), std::move(update), std::move(request));
}

} // namespace bilearn
