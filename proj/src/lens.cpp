#include "bilearn/lens.hpp"

namespace bilearn {

namespace {

void require_put_shape(const FinFn& get, const FinFn& put)
{
    const FiniteSet expected_dom = product({get.cod(), get.dom()});
    if (!(put.dom() == expected_dom)) {
        throw Error(ErrorKind::TypeMismatch, "put leg: domain " + put.dom().describe() + " should be "
                                                 + expected_dom.describe());
    }
    if (!(put.cod() == get.dom())) {
        throw Error(ErrorKind::TypeMismatch, "put leg: codomain " + put.cod().describe() + " should be "
                                                 + get.dom().describe());
    }
}

} // namespace

AsymmetricLens::AsymmetricLens(FinFn get, FinFn put) : get_(std::move(get)), put_(std::move(put))
{
    require_put_shape(get_, put_);
}

std::string LawReport::describe() const
{
    if (passed) {
        return law + " holds";
    }
    std::string out = law + " fails at (";
    for (std::size_t i = 0; i < witness.size(); ++i) {
        if (i != 0) {
            out += ',';
        }
        out += witness[i].first + "=" + witness[i].second;
    }
    return out + ")";
}

AsymmetricLens lens_new(FinFn get, FinFn put) { return AsymmetricLens(std::move(get), std::move(put)); }

AsymmetricLens lens_compose(const AsymmetricLens& l1, const AsymmetricLens& l2)
{
    if (!(l1.dst() == l2.src())) {
        throw Error(ErrorKind::TypeMismatch, "lens_compose: target " + l1.dst().describe()
                                                 + " does not match source " + l2.src().describe());
    }
    const FiniteSet& a = l1.src();
    const FiniteSet& c = l2.dst();
    FinFn get = compose_fn(l1.get(), l2.get());
    const FiniteSet put_dom = product({c, a});
    FinFn put = tabulate(put_dom, a, [&](Index x) {
        const Index ci = put_dom.component(x, 0);
        const Index ai = put_dom.component(x, 1);
        return l1.put(l2.put(ci, l1.get(ai)), ai);
    });
    return AsymmetricLens(std::move(get), std::move(put));
}

AsymmetricLens lens_identity(const FiniteSet& a)
{
    return AsymmetricLens(identity_fn(a), projection(product({a, a}), 0));
}

AsymmetricLens lens_tensor(const AsymmetricLens& l1, const AsymmetricLens& l2)
{
    FinFn get = product_fn({l1.get(), l2.get()});
    const FiniteSet& src = get.dom();
    const FiniteSet& dst = get.cod();
    const FiniteSet put_dom = product({dst, src});
    FinFn put = tabulate(put_dom, src, [&](Index x) {
        const Index bd = put_dom.component(x, 0);
        const Index ac = put_dom.component(x, 1);
        const Index a = l1.put(dst.component(bd, 0), src.component(ac, 0));
        const Index c = l2.put(dst.component(bd, 1), src.component(ac, 1));
        return src.from_tuple({a, c});
    });
    return AsymmetricLens(std::move(get), std::move(put));
}

LawReport check_putget(const AsymmetricLens& l)
{
    LawReport report{"PutGet"};
    for (Index b = 0; b < l.dst().size(); ++b) {
        for (Index a = 0; a < l.src().size(); ++a) {
            if (l.get(l.put(b, a)) != b) {
                report.passed = false;
                report.witness = {{"b", l.dst().render(b)}, {"a", l.src().render(a)}};
                return report;
            }
        }
    }
    return report;
}

LawReport check_getput(const AsymmetricLens& l)
{
    LawReport report{"GetPut"};
    for (Index a = 0; a < l.src().size(); ++a) {
        if (l.put(l.get(a), a) != a) {
            report.passed = false;
            report.witness = {{"a", l.src().render(a)}};
            return report;
        }
    }
    return report;
}

AsymmetricLens constant_complement(const FiniteSet& a1, const FiniteSet& a2)
{
    return constant_complement_at(product({a1, a2}), 0);
}

AsymmetricLens constant_complement_at(const FiniteSet& prod, std::size_t pos)
{
    FinFn get = projection(prod, pos);
    const FiniteSet& view = get.cod();
    const FiniteSet put_dom = product({view, prod});
    FinFn put = tabulate(put_dom, prod, [&](Index x) {
        auto tuple = prod.to_tuple(put_dom.component(x, 1));
        tuple[pos] = put_dom.component(x, 0);
        return prod.from_tuple(tuple);
    });
    return AsymmetricLens(std::move(get), std::move(put));
}

bool is_constant_complement_at(const AsymmetricLens& l, std::size_t pos)
{
    if (!l.src().is_product() || pos >= l.src().arity() || !(l.src().factor(pos) == l.dst())) {
        return false;
    }
    return l == constant_complement_at(l.src(), pos);
}

} // namespace bilearn
