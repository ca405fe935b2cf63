#include <doctest.h>

#include <string>

#include "bilearn/bridge.hpp"
#include "bilearn/sampling.hpp"
#include "bilearn/spec.hpp"
#include "support.hpp"

using namespace bilearn;
using testing::el;
using testing::error_kind;

namespace {

const std::string kData = BILEARN_DATA_DIR;

FiniteSet sized(const std::string& prefix, std::size_t n) { return numbered_set(prefix, n); }

/// Kind and message of the error thrown while parsing `text`.
std::pair<std::optional<ErrorKind>, std::string> parse_failure(const std::string& text)
{
    try {
        parse_spec_text(text, "t.spec");
    } catch (const Error& e) {
        return {e.kind(), e.what()};
    }
    return {std::nullopt, ""};
}

} // namespace

TEST_CASE("parse shipped specs")
{
    SUBCASE("identity lens")
    {
        const SpecDocument doc = parse_spec(kData + "/specs/identity.spec");
        CHECK(doc.kind_of("idA") == EntityKind::Lens);
        CHECK(doc.lens("idA") == lens_identity(make_set({"a0", "a1"})));
        CHECK(check_putget(doc.lens("idA")).passed);
        CHECK(check_getput(doc.lens("idA")).passed);
        CHECK(doc.names() == std::vector<std::string>{"A", "BA", "id", "keep", "idA"});
    }
    SUBCASE("constant complement put table")
    {
        const SpecDocument doc = parse_spec(kData + "/specs/constant_complement.spec");
        const AsymmetricLens& cc = doc.lens("cc");
        CHECK(cc == constant_complement(doc.set("A1"), doc.set("A2")));
        const FiniteSet& a = doc.set("A");
        CHECK(cc.put(el(doc.set("A1"), "y"), el(a, "(x,v)")) == el(a, "(y,v)"));
        CHECK(cc.put(el(doc.set("A1"), "x"), el(a, "(y,u)")) == el(a, "(x,u)"));
    }
}

TEST_CASE("parse errors")
{
    SUBCASE("missing mapping names the element")
    {
        const auto [kind, message] = parse_failure("set A : a0 a1\n"
                                                   "fn f : A -> A\n"
                                                   "  a0 => a1\n");
        CHECK(kind == ErrorKind::MissingMapping);
        CHECK(message.find("a1") != std::string::npos);
        CHECK(message.find("t.spec:2:") != std::string::npos);
    }
    SUBCASE("unknown keyword with position")
    {
        const auto [kind, message] = parse_failure("set A : a0\n\n  # comment\nsett B : b\n");
        CHECK(kind == ErrorKind::ParseError);
        CHECK(message.find("t.spec:4:1:") != std::string::npos);
    }
    SUBCASE("unresolved names")
    {
        CHECK(parse_failure("prod P = A * A\n").first == ErrorKind::UnresolvedName);
        CHECK(parse_failure("set A : a\nlens l : A -> A get=g put=p\n").first == ErrorKind::UnresolvedName);
    }
    SUBCASE("shape errors")
    {
        const std::string base = "set A : a0 a1\nset B : b0\nprod BA = B * A\n"
                                 "fn g : A -> B\n  a0 => b0\n  a1 => b0\n"
                                 "fn p : BA -> A\n  (b0,a0) => a0\n  (b0,a1) => a1\n";
        CHECK_FALSE(parse_failure(base + "lens l : A -> B get=g put=p\n").first.has_value());
        CHECK(parse_failure(base + "lens l : B -> A get=g put=p\n").first == ErrorKind::ShapeError);
        CHECK(parse_failure(base + "lens l : A -> B get=p put=g\n").first == ErrorKind::ShapeError);
        CHECK(parse_failure(base + "lens l : A -> B get=A put=p\n").first == ErrorKind::ShapeError);
        CHECK(parse_failure(base + "lens l : A -> B get=g\n").first == ErrorKind::ParseError);
        CHECK(parse_failure(base + "lens l : A -> B get=g put=p get=g\n").first == ErrorKind::ParseError);
        CHECK(parse_failure(base + "lens l : A -> B put=p get=g\nspan s = l <- B -> l\n").first
              == ErrorKind::ShapeError);
    }
    SUBCASE("bad mappings")
    {
        const std::string head = "set A : a0 a1\nfn f : A -> A\n";
        CHECK(parse_failure(head + "  a0 => a2\n  a1 => a0\n").first == ErrorKind::ParseError);
        CHECK(parse_failure(head + "  a0 => a0\n  a0 => a1\n  a1 => a0\n").first == ErrorKind::ParseError);
        CHECK(parse_failure(head + "  a0 -> a0\n  a1 => a0\n").first == ErrorKind::ParseError);
        CHECK(parse_failure("set A : a0 a0\n").first == ErrorKind::ParseError);
        CHECK(parse_failure("set A : a\nset A : b\n").first == ErrorKind::ParseError);
    }
    SUBCASE("missing file")
    {
        CHECK(error_kind([] { parse_spec("/nonexistent/x.spec"); }) == ErrorKind::ParseError);
    }
}

TEST_CASE("parse accepts free ordering and comments")
{
    const SpecDocument doc = parse_spec_text("set A : a0 a1   # two labels\n"
                                             "prod U =\n"
                                             "prod BA = A * A\n"
                                             "fn g : A -> A\n"
                                             "  a1 => a0   # reversed order\n"
                                             "  a0 => a1\n"
                                             "fn p : BA -> A\n"
                                             "  (a1,a1) => a1\n  (a0,a0) => a0\n  (a0,a1) => a0\n  (a1,a0) => a1\n"
                                             "lens l : A -> A put=p get=g\n");
    CHECK(doc.set("U").size() == 1);
    CHECK(doc.fn("g").table() == std::vector<Index>{1, 0});
    CHECK(doc.lens("l").put() == projection(product({doc.set("A"), doc.set("A")}), 0));
    CHECK(error_kind([&] { doc.lens("g"); }) == ErrorKind::UnknownName);
    CHECK(error_kind([&] { doc.kind_of("zzz"); }) == ErrorKind::UnknownName);
}

TEST_CASE("writer round trip")
{
    SplitMix64 rng(10);
    for (int i = 0; i < 30; ++i) {
        const FiniteSet a = sized("a", 1 + rng.below(3));
        const FiniteSet b = sized("b", 1 + rng.below(3));
        const FiniteSet c = sized("c", 1 + rng.below(2));
        const AsymmetricLens lens = random_lens(product({a, b}), c, rng.next());
        const Learner learner = random_learner(sized("p", 1 + rng.below(3)), a, b, rng.next());
        const LensSpan span = span_compose(learner_to_span(learner),
                                           learner_to_span(random_learner(sized("q", 2), b, c, rng.next())));

        SpecWriter w;
        w.reserve("L");
        w.reserve("S");
        w.reserve("R");
        w.add_lens(lens, "L");
        w.add_span(span, "S");
        w.add_learner(learner, "R");
        const SpecDocument doc = parse_spec_text(w.str());
        REQUIRE(doc.lens("L") == lens);
        REQUIRE(doc.span("S") == span);
        REQUIRE(doc.learner("R") == learner);
        CHECK(write_spec(doc) == write_spec(parse_spec_text(write_spec(doc))));
    }
}

TEST_CASE("writer naming")
{
    SpecWriter w;
    const FiniteSet a = sized("a", 2);
    CHECK(w.add_set(a, "A") == "A");
    CHECK(w.add_set(a, "B") == "A");
    CHECK(w.add_set(sized("b", 2), "A") == "A_1");
    CHECK(error_kind([&] { w.add_set(make_set({"#x"}), "X"); }) == ErrorKind::ShapeError);
    CHECK(error_kind([&] { w.add_set(make_set({"x y"}), "X"); }) == ErrorKind::ShapeError);
}

TEST_CASE("document rejects duplicate names")
{
    SpecDocument doc;
    doc.add("A", sized("a", 1));
    CHECK(error_kind([&] { doc.add("A", identity_fn(sized("a", 1))); }) == ErrorKind::DuplicateLabel);
}
