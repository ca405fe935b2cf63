#include <doctest.h>

#include <cmath>

#include "bilearn/diff.hpp"
#include "bilearn/finite.hpp"
#include "support.hpp"

using namespace bilearn;
using testing::error_kind;

namespace {

Vector vec(std::initializer_list<double> xs)
{
    Vector v(static_cast<Eigen::Index>(xs.size()));
    Eigen::Index i = 0;
    for (double x : xs) {
        v[i++] = x;
    }
    return v;
}

Vector normal_vector(std::size_t n, SplitMix64& rng)
{
    Vector v(static_cast<Eigen::Index>(n));
    for (Eigen::Index i = 0; i < v.size(); ++i) {
        v[i] = rng.normal();
    }
    return v;
}

double max_abs(const Vector& v) { return v.size() == 0 ? 0.0 : v.cwiseAbs().maxCoeff(); }

/// Numerical gradient of 1/2|f(p,a) - b|^2 with respect to the stacked [p, a].
std::pair<Vector, Vector> numeric_loss_gradient(const ParaFn& f, const Vector& b, const Vector& p, const Vector& a)
{
    const double h = 1e-6;
    auto loss = [&](const Vector& pp, const Vector& aa) { return 0.5 * (f.forward(pp, aa) - b).squaredNorm(); };
    Vector gp(p.size());
    for (Eigen::Index i = 0; i < p.size(); ++i) {
        Vector up = p;
        Vector dn = p;
        up[i] += h;
        dn[i] -= h;
        gp[i] = (loss(up, a) - loss(dn, a)) / (2 * h);
    }
    Vector ga(a.size());
    for (Eigen::Index i = 0; i < a.size(); ++i) {
        Vector up = a;
        Vector dn = a;
        up[i] += h;
        dn[i] -= h;
        ga[i] = (loss(p, up) - loss(p, dn)) / (2 * h);
    }
    return {gp, ga};
}

/// Random stack of depth 1..3 with widths 1..4.
std::vector<ParaFn> random_stack(SplitMix64& rng)
{
    std::vector<ParaFn> layers;
    std::size_t width = 1 + rng.below(4);
    const std::size_t depth = 1 + rng.below(3);
    for (std::size_t i = 0; i < depth; ++i) {
        switch (rng.below(4)) {
        case 0: {
            const std::size_t out = 1 + rng.below(4);
            layers.push_back(para_linear(out, width));
            width = out;
            break;
        }
        case 1: layers.push_back(para_bias(width)); break;
        case 2: layers.push_back(para_activation(Activation::Tanh, width)); break;
        default: layers.push_back(para_activation(Activation::Sigmoid, width)); break;
        }
    }
    return layers;
}

} // namespace

TEST_CASE("layers")
{
    SUBCASE("scalar linear")
    {
        const ParaFn f = para_linear(1, 1);
        CHECK(f.forward(vec({2.0}), vec({3.0}))[0] == doctest::Approx(6.0));
    }
    SUBCASE("linear matches a dense matrix product")
    {
        SplitMix64 rng(1);
        const ParaFn f = para_linear(3, 2);
        CHECK(f.name() == "linear:2x3");
        const Vector p = normal_vector(6, rng);
        const Vector a = normal_vector(2, rng);
        const Vector y = f.forward(p, a);
        for (int r = 0; r < 3; ++r) {
            CHECK(y[r] == doctest::Approx(p[2 * r] * a[0] + p[2 * r + 1] * a[1]).epsilon(1e-12));
        }
    }
    SUBCASE("composed linear layers are the matrix chain")
    {
        SplitMix64 rng(2);
        const ParaFn f = para_linear(3, 2);
        const ParaFn g = para_linear(2, 3);
        const ParaFn h = para_compose(f, g);
        REQUIRE(h.pdim() == 12);
        const Vector q = normal_vector(6, rng);
        const Vector p = normal_vector(6, rng);
        const Vector a = normal_vector(2, rng);
        Vector qp(12);
        qp << q, p;
        Eigen::MatrixXd W(3, 2);
        Eigen::MatrixXd V(2, 3);
        for (int r = 0; r < 3; ++r) {
            for (int c = 0; c < 2; ++c) {
                W(r, c) = p[r * 2 + c];
                V(c, r) = q[c * 3 + r];
            }
        }
        CHECK(max_abs(h.forward(qp, a) - V * (W * a)) < 1e-12);
    }
    SUBCASE("tanh derivative at zero")
    {
        const ParaFn t = para_activation(Activation::Tanh, 1);
        const VjpResult r = t.vjp(Vector(0), vec({0.0}), vec({1.0}));
        CHECK(r.dinput[0] == doctest::Approx(1.0));
        CHECK(r.dparams.size() == 0);
    }
    SUBCASE("relu and sigmoid")
    {
        const ParaFn relu = para_activation(Activation::Relu, 2);
        const Vector y = relu.forward(Vector(0), vec({-1.0, 2.0}));
        CHECK(y[0] == 0.0);
        CHECK(y[1] == 2.0);
        const ParaFn sig = para_activation(Activation::Sigmoid, 1);
        CHECK(sig.forward(Vector(0), vec({0.0}))[0] == doctest::Approx(0.5));
        CHECK(sig.vjp(Vector(0), vec({0.0}), vec({1.0})).dinput[0] == doctest::Approx(0.25));
    }
    SUBCASE("tensor acts blockwise")
    {
        const ParaFn t = para_tensor(para_linear(1, 1), para_bias(1));
        CHECK(t.pdim() == 2);
        const Vector y = t.forward(vec({2.0, 5.0}), vec({3.0, 1.0}));
        CHECK(y[0] == doctest::Approx(6.0));
        CHECK(y[1] == doctest::Approx(6.0));
    }
    SUBCASE("dimension errors")
    {
        CHECK(error_kind([] { para_compose(para_linear(3, 2), para_linear(1, 2)); }) == ErrorKind::DimMismatch);
        CHECK(error_kind([] { para_linear(1, 1).forward(vec({1.0}), vec({1.0, 2.0})); }) == ErrorKind::DimMismatch);
        CHECK(error_kind([] { para_linear(1, 1).forward(vec({1.0}), vec({std::nan("")})); }) == ErrorKind::NonFinite);
    }
}

TEST_CASE("vjp is linear in the cotangent")
{
    SplitMix64 rng(3);
    for (int i = 0; i < 50; ++i) {
        const std::vector<ParaFn> stack = random_stack(rng);
        ParaFn f = stack[0];
        for (std::size_t k = 1; k < stack.size(); ++k) {
            f = para_compose(f, stack[k]);
        }
        const Vector p = normal_vector(f.pdim(), rng);
        const Vector a = normal_vector(f.adim(), rng);
        const Vector u = normal_vector(f.bdim(), rng);
        const Vector v = normal_vector(f.bdim(), rng);
        const double alpha = rng.normal();
        const double beta = rng.normal();
        const VjpResult lhs = f.vjp(p, a, alpha * u + beta * v);
        const VjpResult ru = f.vjp(p, a, u);
        const VjpResult rv = f.vjp(p, a, v);
        CHECK(max_abs(lhs.dparams - (alpha * ru.dparams + beta * rv.dparams)) < 1e-9);
        CHECK(max_abs(lhs.dinput - (alpha * ru.dinput + beta * rv.dinput)) < 1e-9);
    }
}

TEST_CASE("gradient_learner")
{
    SUBCASE("scalar linear step")
    {
        const SmoothLearner l = gradient_learner(para_linear(1, 1), 0.1);
        CHECK(l.update(vec({0.0}), vec({1.0}), vec({1.0}))[0] == doctest::Approx(0.9).epsilon(1e-15));
        CHECK(std::abs(l.request(vec({0.0}), vec({1.0}), vec({1.0}))[0]) < 1e-15);
    }
    SUBCASE("analytic gradients on a scalar grid")
    {
        const double eps = 0.3;
        const SmoothLearner l = gradient_learner(para_linear(1, 1), eps);
        for (double p : {-1.5, 0.0, 0.7}) {
            for (double a : {-2.0, 0.5, 3.0}) {
                for (double b : {-1.0, 0.0, 2.5}) {
                    const double res = p * a - b;
                    CHECK(l.update(vec({b}), vec({p}), vec({a}))[0] == doctest::Approx(p - eps * res * a).epsilon(1e-12));
                    CHECK(l.request(vec({b}), vec({p}), vec({a}))[0] == doctest::Approx(a - res * p).epsilon(1e-12));
                }
            }
        }
    }
    SUBCASE("update and request follow the numerical gradient")
    {
        SplitMix64 rng(4);
        for (int i = 0; i < 30; ++i) {
            const std::vector<ParaFn> stack = random_stack(rng);
            const SmoothLearner l = compose_layers(stack, 0.2);
            const Vector p = normal_vector(l.pdim(), rng);
            const Vector a = normal_vector(l.adim(), rng);
            const Vector b = normal_vector(l.bdim(), rng);
            const auto [gp, ga] = numeric_loss_gradient(l.para(), b, p, a);
            CHECK(max_abs(l.update(b, p, a) - (p - 0.2 * gp)) < 1e-6);
            CHECK(max_abs(l.request(b, p, a) - (a - ga)) < 1e-6);
        }
    }
    SUBCASE("zero residual leaves parameters and input fixed")
    {
        SplitMix64 rng(5);
        for (int i = 0; i < 50; ++i) {
            const std::vector<ParaFn> stack = random_stack(rng);
            const SmoothLearner l = compose_layers(stack, 0.5);
            const Vector p = normal_vector(l.pdim(), rng);
            const Vector a = normal_vector(l.adim(), rng);
            const Vector b = l.impl(p, a);
            CHECK(max_abs(l.update(b, p, a) - p) <= 1e-12);
            CHECK(max_abs(l.request(b, p, a) - a) <= 1e-12);
        }
    }
    SUBCASE("UR-I does not hold in general")
    {
        const SmoothLearner l = gradient_learner(para_linear(1, 1), 0.1);
        const Vector b = vec({0.0});
        const Vector p = vec({2.0});
        const Vector a = vec({1.0});
        const Vector relearned = l.impl(l.update(b, p, a), l.request(b, p, a));
        CHECK(std::abs(relearned[0] - b[0]) > 1e-3);
    }
    SUBCASE("step size must be positive")
    {
        CHECK(error_kind([] { gradient_learner(para_linear(1, 1), 0.0); }) == ErrorKind::NonPositiveEps);
        CHECK(error_kind([] { gradient_learner(para_linear(1, 1), -1.0); }) == ErrorKind::NonPositiveEps);
        CHECK(error_kind([] { gradient_learner(para_linear(1, 1), std::nan("")); }) == ErrorKind::NonPositiveEps);
    }
}

TEST_CASE("smooth_compose")
{
    SUBCASE("identity unit")
    {
        SplitMix64 rng(6);
        const SmoothLearner l = gradient_learner(para_linear(2, 3), 0.1);
        const SmoothLearner id = gradient_learner(para_identity(2), 0.1);
        const SmoothLearner c = smooth_compose(l, id);
        for (int i = 0; i < 20; ++i) {
            const Vector p = normal_vector(6, rng);
            const Vector a = normal_vector(3, rng);
            const Vector b = normal_vector(2, rng);
            CHECK(max_abs(c.impl(p, a) - l.impl(p, a)) <= 1e-12);
            CHECK(max_abs(c.update(b, p, a) - l.update(b, p, a)) <= 1e-12);
            CHECK(max_abs(c.request(b, p, a) - l.request(b, p, a)) <= 1e-12);
        }
    }
    SUBCASE("two linear layers against the monolithic learner")
    {
        SplitMix64 rng(7);
        const ParaFn f = para_linear(3, 2);
        const ParaFn g = para_linear(1, 3);
        const SmoothLearner composed = smooth_compose(gradient_learner(f, 0.05), gradient_learner(g, 0.05));
        const SmoothLearner mono = gradient_learner(para_compose(f, g), 0.05);
        for (int i = 0; i < 100; ++i) {
            const Vector qp = normal_vector(9, rng);
            const Vector a = normal_vector(2, rng);
            const Vector c = normal_vector(1, rng);
            CHECK(max_abs(composed.update(c, qp, a) - mono.update(c, qp, a)) <= 1e-9);
            CHECK(max_abs(composed.request(c, qp, a) - mono.request(c, qp, a)) <= 1e-9);
        }
    }
    SUBCASE("errors")
    {
        CHECK(error_kind([] { smooth_compose(gradient_learner(para_linear(2, 1), 0.1), gradient_learner(para_linear(1, 2), 0.2)); })
              == ErrorKind::EpsMismatch);
        CHECK(error_kind([] { smooth_compose(gradient_learner(para_linear(2, 1), 0.1), gradient_learner(para_linear(1, 3), 0.1)); })
              == ErrorKind::DimMismatch);
    }
}

TEST_CASE("composition equals backpropagation")
{
    SplitMix64 rng(8);
    for (int i = 0; i < 30; ++i) {
        const std::vector<ParaFn> stack = random_stack(rng);
        CHECK(backprop_deviation(stack, 0.1, 20, rng.next()) <= 1e-9);
    }
}

TEST_CASE("finite_diff_check")
{
    const double h = 1e-5;
    SUBCASE("linear is exact up to rounding")
    {
        const ParaFn f = para_linear(3, 4);
        const CheckReport r = finite_diff_check(f, random_fd_samples(f, 20, 1), h, 1e-4);
        CHECK(r.passed);
        CHECK(r.max_rel_error < 1e-9);
    }
    SUBCASE("every layer passes")
    {
        const std::vector<ParaFn> layers = {para_linear(2, 3), para_bias(3), para_activation(Activation::Tanh, 3),
                                            para_activation(Activation::Sigmoid, 3),
                                            para_activation(Activation::Relu, 3), para_identity(3)};
        for (const ParaFn& f : layers) {
            const CheckReport r = finite_diff_check(f, random_fd_samples(f, 20, 2), h, 1e-4);
            CHECK_MESSAGE(r.passed, f.name());
            CHECK(r.samples == 20);
        }
    }
    SUBCASE("sign-flipped vjp")
    {
        const ParaFn good = para_activation(Activation::Tanh, 2);
        const ParaFn bad(
            "flipped", 0, 2, 2, [good](const Vector& p, const Vector& a) { return good.forward(p, a); },
            [good](const Vector& p, const Vector& a, const Vector& db) {
                VjpResult r = good.vjp(p, a, db);
                r.dinput = -r.dinput;
                return r;
            });
        const CheckReport r = finite_diff_check(bad, random_fd_samples(bad, 10, 3), h, 1e-4);
        CHECK_FALSE(r.passed);
        CHECK(r.max_rel_error == doctest::Approx(2.0).epsilon(1e-4));
    }
}

TEST_CASE("sgd_train")
{
    std::vector<TrainSample> data;
    for (int i = 0; i < 50; ++i) {
        const double a = -2.0 + 4.0 * i / 49.0;
        data.push_back({vec({a}), vec({1.7 * a})});
    }

    SUBCASE("zero steps keeps the initial state")
    {
        const SmoothLearner l = gradient_learner(para_linear(1, 1), 0.05);
        const TrainTrace t = sgd_train(l, data, 0, 1, vec({0.3}));
        REQUIRE(t.records.size() == 1);
        CHECK_FALSE(t.records[0].sample.has_value());
        CHECK(t.final_params()[0] == 0.3);
        double expected = 0.0;
        for (const auto& s : data) {
            expected += 0.5 * std::pow(0.3 * s.a[0] - s.b[0], 2);
        }
        CHECK(t.final_loss() == doctest::Approx(expected / 50.0).epsilon(1e-12));
    }
    SUBCASE("converges to the least-squares slope")
    {
        double sab = 0.0;
        double saa = 0.0;
        for (const auto& s : data) {
            sab += s.a[0] * s.b[0];
            saa += s.a[0] * s.a[0];
        }
        const SmoothLearner l = gradient_learner(para_linear(1, 1), 0.05);
        const TrainTrace t = sgd_train(l, data, 500, 7, initial_params(1, 7));
        CHECK(t.records.size() == 501);
        CHECK(t.final_loss() < 1e-6);
        CHECK(std::abs(t.final_params()[0] - sab / saa) < 1e-3);
        for (const auto& r : t.records) {
            CHECK(std::isfinite(r.loss));
            CHECK(r.loss >= 0.0);
        }
    }
    SUBCASE("same seed, same trace")
    {
        const SmoothLearner l = gradient_learner(para_linear(1, 1), 0.05);
        const TrainTrace t1 = sgd_train(l, data, 60, 3, vec({0.0}));
        const TrainTrace t2 = sgd_train(l, data, 60, 3, vec({0.0}));
        for (std::size_t i = 0; i < t1.records.size(); ++i) {
            CHECK(t1.records[i].loss == t2.records[i].loss);
            CHECK(t1.records[i].sample == t2.records[i].sample);
        }
    }
    SUBCASE("large step diverges")
    {
        const SmoothLearner l = gradient_learner(para_linear(1, 1), 10.0);
        CHECK(error_kind([&] { sgd_train(l, data, 500, 7, initial_params(1, 7)); }) == ErrorKind::DivergenceDetected);
    }
    SUBCASE("mismatched data")
    {
        const SmoothLearner l = gradient_learner(para_linear(1, 1), 0.05);
        CHECK(error_kind([&] { sgd_train(l, {{vec({1.0, 2.0}), vec({1.0})}}, 1, 0, vec({0.0})); })
              == ErrorKind::DimMismatch);
    }
}

TEST_CASE("parse_model")
{
    const std::vector<ParaFn> layers = parse_model("linear:4x3,tanh,linear:3x1");
    REQUIRE(layers.size() == 3);
    CHECK(layers[0].adim() == 4);
    CHECK(layers[0].bdim() == 3);
    CHECK(layers[1].adim() == 3);
    CHECK(layers[2].bdim() == 1);
    CHECK(parse_model("linear:2x2,bias,relu:2,sigmoid,identity").size() == 5);
    CHECK(error_kind([] { parse_model("linear:2x3,linear:2x1"); }) == ErrorKind::DimMismatch);
    CHECK(error_kind([] { parse_model("conv:3"); }) == ErrorKind::ParseError);
    CHECK(error_kind([] { parse_model("tanh"); }) == ErrorKind::ParseError);
    CHECK(error_kind([] { parse_model(""); }) == ErrorKind::ParseError);
}
