#pragma once

// Real-vector learners: parametrised differentiable functions with
// vector-Jacobian products, the gradient-descent learner built from them,
// learner composition (which is backpropagation), and a small SGD loop.

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "bilearn/error.hpp"

namespace bilearn {

using Vector = Eigen::VectorXd;

struct VjpResult {
    Vector dparams;
    Vector dinput;
};

/// A differentiable map I : R^pdim x R^adim -> R^bdim together with its
/// transposed-Jacobian products (dI/dp)^T db and (dI/da)^T db.
class ParaFn {
public:
    using Forward = std::function<Vector(const Vector& p, const Vector& a)>;
    using Vjp = std::function<VjpResult(const Vector& p, const Vector& a, const Vector& db)>;

    ParaFn(std::string name, std::size_t pdim, std::size_t adim, std::size_t bdim, Forward forward, Vjp vjp);

    const std::string& name() const noexcept { return name_; }
    std::size_t pdim() const noexcept { return pdim_; }
    std::size_t adim() const noexcept { return adim_; }
    std::size_t bdim() const noexcept { return bdim_; }

    /// Both throw DimMismatch on wrongly sized or NonFinite on non-finite input.
    Vector forward(const Vector& p, const Vector& a) const;
    VjpResult vjp(const Vector& p, const Vector& a, const Vector& db) const;

private:
    std::string name_;
    std::size_t pdim_;
    std::size_t adim_;
    std::size_t bdim_;
    Forward forward_;
    Vjp vjp_;
};

enum class Activation { Tanh, Sigmoid, Relu };

/// I(W, a) = W a with W a rows x cols matrix stored row-major in p.
ParaFn para_linear(std::size_t rows, std::size_t cols);
/// I(p, a) = a + p.
ParaFn para_bias(std::size_t dim);
/// Elementwise activation, no parameters.
ParaFn para_activation(Activation kind, std::size_t dim);
/// I(*, a) = a with zero-dimensional parameters.
ParaFn para_identity(std::size_t dim);
/// g after f: (g.f)([q, p], a) = g(q, f(p, a)). Parameters are [q, p].
ParaFn para_compose(const ParaFn& f, const ParaFn& g);
/// (f x g)([p, q], [a, c]) = [f(p, a), g(q, c)].
ParaFn para_tensor(const ParaFn& f, const ParaFn& g);

/// A learner R^adim -> R^bdim with parameters in R^pdim. Built either from
/// a ParaFn by gradient_learner or by composing other smooth learners.
class SmoothLearner {
public:
    using Step = std::function<Vector(const Vector& b, const Vector& p, const Vector& a)>;

    SmoothLearner(ParaFn para, double eps, Step update, Step request);

    const ParaFn& para() const noexcept { return para_; }
    double eps() const noexcept { return eps_; }
    std::size_t pdim() const noexcept { return para_.pdim(); }
    std::size_t adim() const noexcept { return para_.adim(); }
    std::size_t bdim() const noexcept { return para_.bdim(); }

    Vector impl(const Vector& p, const Vector& a) const { return para_.forward(p, a); }
    Vector update(const Vector& b, const Vector& p, const Vector& a) const;
    Vector request(const Vector& b, const Vector& p, const Vector& a) const;

private:
    ParaFn para_;
    double eps_;
    Step update_;
    Step request_;
};

/// U(b,p,a) = p - eps * grad_p 1/2|I(p,a) - b|^2
/// r(b,p,a) = a -       grad_a 1/2|I(p,a) - b|^2   (no step size here)
/// Throws NonPositiveEps unless eps > 0.
SmoothLearner gradient_learner(const ParaFn& f, double eps);

/// Learner composite l1 ; l2 with parameters [q, p]. Requires equal step
/// sizes (EpsMismatch) and l1.bdim == l2.adim (DimMismatch).
SmoothLearner smooth_compose(const SmoothLearner& l1, const SmoothLearner& l2);

struct FdSample {
    Vector p;
    Vector a;
    Vector db;
};

struct CheckReport {
    bool passed = true;
    double max_rel_error = 0.0;
    std::size_t samples = 0;
    std::size_t worst_sample = 0;
};

/// `count` points with standard normal coordinates.
std::vector<FdSample> random_fd_samples(const ParaFn& f, std::size_t count, std::uint64_t seed);

/// Compares vjp against central differences of db . I along every
/// coordinate of p and a. Relative error per sample is
/// |fd - vjp| / max(|fd|, |vjp|, 1e-12) over the stacked [dp, da].
CheckReport finite_diff_check(const ParaFn& f, const std::vector<FdSample>& samples, double h, double tol);

struct TrainSample {
    Vector a;
    Vector b;
};

struct TrainRecord {
    std::size_t step = 0;
    std::optional<std::size_t> sample;  // none for the initial state
    Vector params;
    double loss = 0.0;  // mean of 1/2|I(p,a) - b|^2 over the dataset
};

struct TrainTrace {
    std::vector<TrainRecord> records;

    double final_loss() const { return records.back().loss; }
    const Vector& final_params() const { return records.back().params; }
};

inline constexpr double kDivergenceLoss = 1e12;

double dataset_loss(const SmoothLearner& l, const Vector& p, const std::vector<TrainSample>& data);

/// Per-sample gradient descent: each step applies p <- U(b,p,a) for the next
/// sample of a seeded reshuffle of the dataset (fresh shuffle per pass).
/// Throws DivergenceDetected once the loss exceeds kDivergenceLoss or stops
/// being finite.
TrainTrace sgd_train(const SmoothLearner& l, const std::vector<TrainSample>& data, std::size_t steps,
                     std::uint64_t seed, const Vector& initial);

/// Normal(0, 0.5^2) parameter vector.
Vector initial_params(std::size_t pdim, std::uint64_t seed);

/// Layers from a description such as `linear:4x3,tanh,linear:3x1`.
/// `linear:IxO` maps R^I to R^O; `bias`, `tanh`, `sigmoid`, `relu`,
/// `identity` take their width from the previous layer or an explicit
/// `:N` suffix.
std::vector<ParaFn> parse_model(const std::string& description);

/// gradient_learner per layer, composed left to right with smooth_compose.
SmoothLearner compose_layers(const std::vector<ParaFn>& layers, double eps);

/// Maximum absolute deviation between compose_layers and the monolithic
/// gradient learner of the composed ParaFn, over update and request at
/// `points` random (c, params, a).
double backprop_deviation(const std::vector<ParaFn>& layers, double eps, std::size_t points, std::uint64_t seed);

} // namespace bilearn
