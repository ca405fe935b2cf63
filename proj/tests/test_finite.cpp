#include <doctest.h>

#include <cstdlib>
#include <set>

#include "bilearn/finite.hpp"
#include "bilearn/relabel.hpp"
#include "support.hpp"

using namespace bilearn;
using testing::el;
using testing::error_kind;

TEST_CASE("make_set")
{
    CHECK(make_set({"a0", "a1"}).size() == 2);
    CHECK(make_set({"a0", "a1"}).is_atomic());
    CHECK(make_set({}).size() == 0);
    CHECK(error_kind([] { make_set({"x", "x"}); }) == ErrorKind::DuplicateLabel);
    CHECK(error_kind([] { make_set({"x", ""}); }) == ErrorKind::EmptyLabel);
}

TEST_CASE("product sizes and the unit")
{
    const FiniteSet two = make_set({"a0", "a1"});
    const FiniteSet three = make_set({"b0", "b1", "b2"});
    CHECK(product({two, three}).size() == 6);
    CHECK(product({}).size() == 1);
    CHECK(product({}) == FiniteSet::unit());
    CHECK(product({two, make_set({})}).size() == 0);

    SUBCASE("element (1,2) of 2 x 3 has flat index 5")
    {
        const FiniteSet p = product({two, three});
        CHECK(p.from_tuple({1, 2}) == 5);
        CHECK(p.render(5) == "(a1,b2)");
        CHECK(p.find("(a1,b2)") == Index{5});
        CHECK(p.component(5, 0) == 1);
        CHECK(p.component(5, 1) == 2);
    }
}

TEST_CASE("structural equality ignores identity")
{
    CHECK(make_set({"a", "b"}) == make_set({"a", "b"}));
    CHECK_FALSE(make_set({"a", "b"}) == make_set({"b", "a"}));
    const FiniteSet a = make_set({"a"});
    CHECK(product({a, a}) == product({make_set({"a"}), make_set({"a"})}));
    CHECK_FALSE(product({a, product({a})}) == product({a, a}));
}

TEST_CASE("index <-> tuple round-trips")
{
    const FiniteSet x = make_set({"x0", "x1", "x2"});
    const FiniteSet y = make_set({"y0", "y1"});
    const FiniteSet nested = product({x, product({y, x}), y});
    for (Index e = 0; e < nested.size(); ++e) {
        CHECK(nested.from_tuple(nested.to_tuple(e)) == e);
        CHECK(nested.find(nested.render(e)) == e);
    }
    // Exhaustive up to 10^4 elements.
    std::vector<FiniteSet> factors;
    for (int i = 0; i < 4; ++i) {
        factors.push_back(make_set({"0", "1", "2", "3", "4", "5", "6", "7", "8", "9"}));
    }
    const FiniteSet big = product(factors);
    REQUIRE(big.size() == 10000);
    bool ok = true;
    for (Index e = 0; e < big.size(); ++e) {
        ok = ok && big.from_tuple(big.to_tuple(e)) == e;
    }
    CHECK(ok);
    CHECK(error_kind([&] { big.from_tuple({1, 2}); }) == ErrorKind::LengthMismatch);
    CHECK(error_kind([&] { big.from_tuple({1, 2, 3, 10}); }) == ErrorKind::IndexOutOfRange);
}

TEST_CASE("make_fn")
{
    const FiniteSet two = make_set({"a0", "a1"});
    const FiniteSet one = make_set({"*"});
    CHECK(make_fn(two, two, {0, 1}) == identity_fn(two));
    const FinFn c = make_fn(two, one, {0, 0});
    CHECK(c(0) == 0);
    CHECK(c(1) == 0);
    CHECK(error_kind([&] { make_fn(two, two, {0}); }) == ErrorKind::LengthMismatch);
    CHECK(error_kind([&] { make_fn(two, two, {0, 2}); }) == ErrorKind::IndexOutOfRange);
}

TEST_CASE("compose_fn")
{
    const FiniteSet two = make_set({"a0", "a1"});
    CHECK(compose_fn(make_fn(two, two, {1, 0}), make_fn(two, two, {1, 0})).table() == std::vector<Index>{0, 1});
    const FinFn g = make_fn(two, two, {1, 1});
    CHECK(compose_fn(identity_fn(two), g) == g);
    CHECK(compose_fn(make_fn(two, two, {0, 0}), g).table() == std::vector<Index>{1, 1});
    CHECK(error_kind([&] { compose_fn(g, identity_fn(make_set({"z"}))); }) == ErrorKind::TypeMismatch);
}

TEST_CASE("compose_fn is associative and unital on sets of size <= 2")
{
    const FiniteSet sets[] = {make_set({}), make_set({"a"}), make_set({"a", "b"})};
    for (const auto& x : sets) {
        for (const auto& y : sets) {
            for (const auto& f : enumerate_functions(x, y)) {
                CHECK(compose_fn(identity_fn(x), f) == f);
                CHECK(compose_fn(f, identity_fn(y)) == f);
                for (const auto& z : sets) {
                    for (const auto& g : enumerate_functions(y, z)) {
                        for (const auto& h : enumerate_functions(z, sets[2])) {
                            REQUIRE(compose_fn(compose_fn(f, g), h) == compose_fn(f, compose_fn(g, h)));
                        }
                    }
                }
            }
        }
    }
}

TEST_CASE("projection, pair and swap")
{
    const FiniteSet b = make_set({"b0", "b1"});
    const FiniteSet a = make_set({"a0", "a1", "a2"});
    const FiniteSet ba = product({b, a});
    CHECK(projection(ba, 1)(ba.from_tuple({1, 2})) == 2);
    CHECK(projection(ba, 0)(ba.from_tuple({1, 2})) == 1);
    CHECK(error_kind([&] { projection(ba, 2); }) == ErrorKind::BadPosition);

    const FiniteSet two_three = product({b, a});
    const FinFn sw = swap(two_three);
    CHECK(sw.cod() == product({a, b}));
    CHECK(sw(two_three.from_tuple({1, 2})) == product({a, b}).from_tuple({2, 1}));

    SUBCASE("projection after pair is the component, exhaustively")
    {
        for (const auto& f : enumerate_functions(a, b)) {
            const FinFn paired = pair({f, identity_fn(a)});
            CHECK(compose_fn(paired, projection(paired.cod(), 0)) == f);
            CHECK(compose_fn(paired, projection(paired.cod(), 1)) == identity_fn(a));
        }
    }
}

TEST_CASE("permute and product_fn")
{
    const FiniteSet x = make_set({"x0", "x1"});
    const FiniteSet y = make_set({"y0", "y1", "y2"});
    const FiniteSet z = make_set({"z0"});
    const FiniteSet xyz = product({x, y, z});
    const FinFn perm = permute(xyz, {2, 0, 1});
    CHECK(perm.cod() == product({z, x, y}));
    CHECK(perm.is_bijective());
    CHECK(perm(el(xyz, "(x1,y2,z0)")) == el(perm.cod(), "(z0,x1,y2)"));
    CHECK(error_kind([&] { permute(xyz, {0, 0, 1}); }) == ErrorKind::BadPosition);

    const FinFn f = make_fn(x, x, {1, 0});
    const FinFn g = make_fn(y, y, {2, 0, 1});
    const FinFn fg = product_fn({f, g});
    const FiniteSet xy = product({x, y});
    CHECK(fg(el(xy, "(x0,y1)")) == el(xy, "(x1,y0)"));
}

TEST_CASE("terminal_fn is the unique map into the unit")
{
    const FiniteSet a = make_set({"a0", "a1"});
    CHECK(terminal_fn(a).cod() == FiniteSet::unit());
    CHECK(enumerate_functions(a, FiniteSet::unit()).size() == 1);
    CHECK(enumerate_functions(a, FiniteSet::unit()).front() == terminal_fn(a));
}

TEST_CASE("enumerate_functions")
{
    const FiniteSet one = make_set({"a"});
    const FiniteSet two = make_set({"a", "b"});
    const FiniteSet three = make_set({"a", "b", "c"});
    CHECK(enumerate_functions(one, three).size() == 3);
    CHECK(enumerate_functions(two, two).size() == 4);
    CHECK(enumerate_functions(make_set({}), make_set({})).size() == 1);
    CHECK(enumerate_functions(one, make_set({})).empty());

    SUBCASE("yields size(cod)^size(dom) distinct tables")
    {
        for (std::size_t n = 0; n <= 3; ++n) {
            for (std::size_t m = 0; m <= 3; ++m) {
                std::vector<std::string> dl;
                std::vector<std::string> cl;
                for (std::size_t i = 0; i < n; ++i) {
                    dl.push_back("d" + std::to_string(i));
                }
                for (std::size_t i = 0; i < m; ++i) {
                    cl.push_back("c" + std::to_string(i));
                }
                const auto fns = enumerate_functions(make_set(dl), make_set(cl));
                std::set<std::vector<Index>> distinct;
                for (const auto& f : fns) {
                    distinct.insert(f.table());
                }
                std::size_t expected = 1;
                for (std::size_t i = 0; i < n; ++i) {
                    expected *= m;
                }
                CHECK(fns.size() == expected);
                CHECK(distinct.size() == expected);
            }
        }
    }

    SUBCASE("cap")
    {
        CHECK(error_kind([&] { enumerate_functions(three, three, 26); }) == ErrorKind::CapExceeded);
        CHECK(enumerate_functions(three, three, 27).size() == 27);
    }
}

TEST_CASE("enumeration cap honours the environment")
{
    const char* old = std::getenv("BILEARN_ENUM_CAP");
    const std::string saved = old ? old : "";
    setenv("BILEARN_ENUM_CAP", "5", 1);
    CHECK(default_enum_cap() == 5);
    CHECK(error_kind([] { enumerate_functions(make_set({"a", "b", "c"}), make_set({"x", "y"})); })
          == ErrorKind::CapExceeded);
    if (old) {
        setenv("BILEARN_ENUM_CAP", saved.c_str(), 1);
    } else {
        unsetenv("BILEARN_ENUM_CAP");
        CHECK(default_enum_cap() == kDefaultEnumCap);
    }
}

TEST_CASE("random_fn")
{
    const FiniteSet a = make_set({"a0", "a1", "a2", "a3"});
    const FiniteSet b = make_set({"b0", "b1", "b2"});
    CHECK(random_fn(a, b, 42) == random_fn(a, b, 42));
    CHECK(random_fn(make_set({}), b, 1).table().empty());
    CHECK(random_fn(make_set({}), b, 2) == random_fn(make_set({}), b, 3));
    CHECK(error_kind([&] { random_fn(a, make_set({}), 0); }) == ErrorKind::EmptyCodomain);
    random_fn(a, b, 0);  // seed 0 is valid
}

TEST_CASE("SplitMix64 reference outputs")
{
    // First outputs for seed 0 of the published SplitMix64 generator.
    SplitMix64 rng(0);
    CHECK(rng.next() == 0xE220A8397B1DCDAFULL);
    CHECK(rng.next() == 0x6E789E6AA1B965F4ULL);
    CHECK(rng.next() == 0x06C45D188009454FULL);

    SplitMix64 r2(7);
    std::vector<int> counts(3, 0);
    for (int i = 0; i < 3000; ++i) {
        const auto v = r2.below(3);
        REQUIRE(v < 3);
        ++counts[v];
    }
    for (int c : counts) {
        CHECK(c > 850);
    }
    for (int i = 0; i < 100; ++i) {
        const double u = r2.uniform();
        REQUIRE(u >= 0.0);
        REQUIRE(u < 1.0);
    }
}

TEST_CASE("flatten and restructure")
{
    const FiniteSet x = make_set({"x0", "x1"});
    const FiniteSet y = make_set({"y0", "y1", "y2"});
    const FiniteSet z = make_set({"z0", "z1"});
    const FiniteSet nested = product({product({x, y}), z});
    CHECK(flatten(nested) == product({x, y, z}));
    const FinFn iso = flatten_iso(nested);
    CHECK(iso.is_bijective());
    CHECK(iso(el(nested, "((x1,y2),z0)")) == el(flatten(nested), "(x1,y2,z0)"));

    const FiniteSet other = product({x, product({y, z})});
    const FinFn assoc = restructure(nested, other);
    CHECK(assoc(el(nested, "((x1,y0),z1)")) == el(other, "(x1,(y0,z1))"));
    CHECK(compose_fn(assoc, inverse(assoc)) == identity_fn(nested));

    const FiniteSet with_unit = product({x, FiniteSet::unit()});
    const FinFn unitor = restructure(with_unit, x);
    CHECK(unitor(el(with_unit, "(x1,())")) == 1);

    const FiniteSet reordered = product({z, x, y});
    const FinFn perm = restructure(nested, reordered, {2, 0, 1});
    CHECK(perm(el(nested, "((x1,y2),z0)")) == el(reordered, "(z0,x1,y2)"));
    CHECK(error_kind([&] { restructure(nested, product({x, y})); }) == ErrorKind::TypeMismatch);
}
