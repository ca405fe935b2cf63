#include "bilearn/diff.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

#include "bilearn/finite.hpp"

namespace bilearn {

namespace {

void require_dim(const Vector& v, std::size_t dim, const std::string& what, const std::string& fn)
{
    if (static_cast<std::size_t>(v.size()) != dim) {
        throw Error(ErrorKind::DimMismatch, fn + ": " + what + " has dimension " + std::to_string(v.size())
                                                + ", expected " + std::to_string(dim));
    }
    if (!v.allFinite()) {
        throw Error(ErrorKind::NonFinite, fn + ": " + what + " has non-finite entries");
    }
}

Vector concat(const Vector& x, const Vector& y)
{
    Vector out(x.size() + y.size());
    out << x, y;
    return out;
}

std::string activation_name(Activation kind)
{
    switch (kind) {
    case Activation::Tanh: return "tanh";
    case Activation::Sigmoid: return "sigmoid";
    case Activation::Relu: return "relu";
    }
    return "?";
}

} // namespace

ParaFn::ParaFn(std::string name, std::size_t pdim, std::size_t adim, std::size_t bdim, Forward forward, Vjp vjp)
    : name_(std::move(name)), pdim_(pdim), adim_(adim), bdim_(bdim), forward_(std::move(forward)), vjp_(std::move(vjp))
{
}

Vector ParaFn::forward(const Vector& p, const Vector& a) const
{
    require_dim(p, pdim_, "parameters", name_);
    require_dim(a, adim_, "input", name_);
    return forward_(p, a);
}

VjpResult ParaFn::vjp(const Vector& p, const Vector& a, const Vector& db) const
{
    require_dim(p, pdim_, "parameters", name_);
    require_dim(a, adim_, "input", name_);
    require_dim(db, bdim_, "output cotangent", name_);
    return vjp_(p, a, db);
}

ParaFn para_linear(std::size_t rows, std::size_t cols)
{
    using RowMajor = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
    const auto r = static_cast<Eigen::Index>(rows);
    const auto c = static_cast<Eigen::Index>(cols);
    return ParaFn(
        "linear:" + std::to_string(cols) + "x" + std::to_string(rows), rows * cols, cols, rows,
        [r, c](const Vector& p, const Vector& a) -> Vector {
            return Eigen::Map<const RowMajor>(p.data(), r, c) * a;
        },
        [r, c](const Vector& p, const Vector& a, const Vector& db) {
            VjpResult out{Vector(r * c), Vector()};
            Eigen::Map<RowMajor>(out.dparams.data(), r, c) = db * a.transpose();
            out.dinput = Eigen::Map<const RowMajor>(p.data(), r, c).transpose() * db;
            return out;
        });
}

ParaFn para_bias(std::size_t dim)
{
    return ParaFn(
        "bias:" + std::to_string(dim), dim, dim, dim,
        [](const Vector& p, const Vector& a) -> Vector { return a + p; },
        [](const Vector&, const Vector&, const Vector& db) { return VjpResult{db, db}; });
}

ParaFn para_activation(Activation kind, std::size_t dim)
{
    auto value = [kind](double x) {
        switch (kind) {
        case Activation::Tanh: return std::tanh(x);
        case Activation::Sigmoid: return 1.0 / (1.0 + std::exp(-x));
        case Activation::Relu: return x > 0.0 ? x : 0.0;
        }
        return x;
    };
    auto slope = [kind, value](double x) {
        switch (kind) {
        case Activation::Tanh: {
            const double t = std::tanh(x);
            return 1.0 - t * t;
        }
        case Activation::Sigmoid: {
            const double s = value(x);
            return s * (1.0 - s);
        }
        case Activation::Relu: return x > 0.0 ? 1.0 : 0.0;
        }
        return 1.0;
    };
    return ParaFn(
        activation_name(kind) + ":" + std::to_string(dim), 0, dim, dim,
        [value](const Vector&, const Vector& a) -> Vector { return a.unaryExpr(value); },
        [slope](const Vector&, const Vector& a, const Vector& db) {
            return VjpResult{Vector(0), a.unaryExpr(slope).cwiseProduct(db)};
        });
}

ParaFn para_identity(std::size_t dim)
{
    return ParaFn(
        "identity:" + std::to_string(dim), 0, dim, dim, [](const Vector&, const Vector& a) -> Vector { return a; },
        [](const Vector&, const Vector&, const Vector& db) { return VjpResult{Vector(0), db}; });
}

ParaFn para_compose(const ParaFn& f, const ParaFn& g)
{
    if (f.bdim() != g.adim()) {
        throw Error(ErrorKind::DimMismatch, "para_compose: " + f.name() + " outputs " + std::to_string(f.bdim())
                                                + " values but " + g.name() + " takes " + std::to_string(g.adim()));
    }
    const auto qd = static_cast<Eigen::Index>(g.pdim());
    const auto pd = static_cast<Eigen::Index>(f.pdim());
    return ParaFn(
        f.name() + "," + g.name(), g.pdim() + f.pdim(), f.adim(), g.bdim(),
        [f, g, qd, pd](const Vector& qp, const Vector& a) -> Vector {
            return g.forward(qp.head(qd), f.forward(qp.tail(pd), a));
        },
        [f, g, qd, pd](const Vector& qp, const Vector& a, const Vector& dc) {
            const Vector p = qp.tail(pd);
            const Vector b = f.forward(p, a);
            const VjpResult outer = g.vjp(qp.head(qd), b, dc);
            const VjpResult inner = f.vjp(p, a, outer.dinput);
            return VjpResult{concat(outer.dparams, inner.dparams), inner.dinput};
        });
}

ParaFn para_tensor(const ParaFn& f, const ParaFn& g)
{
    const auto fp = static_cast<Eigen::Index>(f.pdim());
    const auto gp = static_cast<Eigen::Index>(g.pdim());
    const auto fa = static_cast<Eigen::Index>(f.adim());
    const auto ga = static_cast<Eigen::Index>(g.adim());
    const auto fb = static_cast<Eigen::Index>(f.bdim());
    const auto gb = static_cast<Eigen::Index>(g.bdim());
    return ParaFn(
        "(" + f.name() + ")x(" + g.name() + ")", f.pdim() + g.pdim(), f.adim() + g.adim(), f.bdim() + g.bdim(),
        [=](const Vector& p, const Vector& a) -> Vector {
            return concat(f.forward(p.head(fp), a.head(fa)), g.forward(p.tail(gp), a.tail(ga)));
        },
        [=](const Vector& p, const Vector& a, const Vector& db) {
            const VjpResult left = f.vjp(p.head(fp), a.head(fa), db.head(fb));
            const VjpResult right = g.vjp(p.tail(gp), a.tail(ga), db.tail(gb));
            return VjpResult{concat(left.dparams, right.dparams), concat(left.dinput, right.dinput)};
        });
}

// ---------------------------------------------------------------------------

SmoothLearner::SmoothLearner(ParaFn para, double eps, Step update, Step request)
    : para_(std::move(para)), eps_(eps), update_(std::move(update)), request_(std::move(request))
{
    if (!(eps_ > 0.0) || !std::isfinite(eps_)) {
        throw Error(ErrorKind::NonPositiveEps, "step size must be a positive finite number");
    }
}

Vector SmoothLearner::update(const Vector& b, const Vector& p, const Vector& a) const
{
    require_dim(b, bdim(), "target", para_.name());
    return update_(b, p, a);
}

Vector SmoothLearner::request(const Vector& b, const Vector& p, const Vector& a) const
{
    require_dim(b, bdim(), "target", para_.name());
    return request_(b, p, a);
}

SmoothLearner gradient_learner(const ParaFn& f, double eps)
{
    return SmoothLearner(
        f, eps,
        [f, eps](const Vector& b, const Vector& p, const Vector& a) -> Vector {
            return p - eps * f.vjp(p, a, f.forward(p, a) - b).dparams;
        },
        [f](const Vector& b, const Vector& p, const Vector& a) -> Vector {
            return a - f.vjp(p, a, f.forward(p, a) - b).dinput;
        });
}

SmoothLearner smooth_compose(const SmoothLearner& l1, const SmoothLearner& l2)
{
    if (l1.eps() != l2.eps()) {
        throw Error(ErrorKind::EpsMismatch, "smooth_compose: step sizes differ");
    }
    ParaFn para = para_compose(l1.para(), l2.para());
    const auto qd = static_cast<Eigen::Index>(l2.pdim());
    const auto pd = static_cast<Eigen::Index>(l1.pdim());
    return SmoothLearner(
        std::move(para), l1.eps(),
        [l1, l2, qd, pd](const Vector& c, const Vector& qp, const Vector& a) -> Vector {
            const Vector q = qp.head(qd);
            const Vector p = qp.tail(pd);
            const Vector b = l1.impl(p, a);
            const Vector b_req = l2.request(c, q, b);
            return concat(l2.update(c, q, b), l1.update(b_req, p, a));
        },
        [l1, l2, qd, pd](const Vector& c, const Vector& qp, const Vector& a) -> Vector {
            const Vector q = qp.head(qd);
            const Vector p = qp.tail(pd);
            return l1.request(l2.request(c, q, l1.impl(p, a)), p, a);
        });
}

// ---------------------------------------------------------------------------

std::vector<FdSample> random_fd_samples(const ParaFn& f, std::size_t count, std::uint64_t seed)
{
    SplitMix64 rng(seed);
    auto draw = [&](std::size_t n) {
        Vector v(static_cast<Eigen::Index>(n));
        for (Eigen::Index i = 0; i < v.size(); ++i) {
            v[i] = rng.normal();
        }
        return v;
    };
    std::vector<FdSample> out;
    for (std::size_t i = 0; i < count; ++i) {
        FdSample s{draw(f.pdim()), draw(f.adim()), Vector()};
        s.db = draw(f.bdim());
        out.push_back(std::move(s));
    }
    return out;
}

CheckReport finite_diff_check(const ParaFn& f, const std::vector<FdSample>& samples, double h, double tol)
{
    CheckReport report;
    report.samples = samples.size();
    for (std::size_t k = 0; k < samples.size(); ++k) {
        const FdSample& s = samples[k];
        const VjpResult analytic = f.vjp(s.p, s.a, s.db);
        const Vector exact = concat(analytic.dparams, analytic.dinput);
        Vector numeric(exact.size());
        auto directional = [&](const Vector& p_plus, const Vector& a_plus, const Vector& p_minus,
                               const Vector& a_minus) {
            return s.db.dot(f.forward(p_plus, a_plus) - f.forward(p_minus, a_minus)) / (2.0 * h);
        };
        for (Eigen::Index i = 0; i < s.p.size(); ++i) {
            Vector up = s.p;
            Vector down = s.p;
            up[i] += h;
            down[i] -= h;
            numeric[i] = directional(up, s.a, down, s.a);
        }
        for (Eigen::Index i = 0; i < s.a.size(); ++i) {
            Vector up = s.a;
            Vector down = s.a;
            up[i] += h;
            down[i] -= h;
            numeric[s.p.size() + i] = directional(s.p, up, s.p, down);
        }
        const double scale = std::max({numeric.norm(), exact.norm(), 1e-12});
        const double err = (numeric - exact).norm() / scale;
        if (err > report.max_rel_error) {
            report.max_rel_error = err;
            report.worst_sample = k;
        }
    }
    report.passed = report.max_rel_error <= tol;
    return report;
}

// ---------------------------------------------------------------------------

double dataset_loss(const SmoothLearner& l, const Vector& p, const std::vector<TrainSample>& data)
{
    if (data.empty()) {
        return 0.0;
    }
    double total = 0.0;
    for (const auto& s : data) {
        total += 0.5 * (l.impl(p, s.a) - s.b).squaredNorm();
    }
    return total / static_cast<double>(data.size());
}

TrainTrace sgd_train(const SmoothLearner& l, const std::vector<TrainSample>& data, std::size_t steps,
                     std::uint64_t seed, const Vector& initial)
{
    require_dim(initial, l.pdim(), "initial parameters", "sgd_train");
    for (const auto& s : data) {
        require_dim(s.a, l.adim(), "sample input", "sgd_train");
        require_dim(s.b, l.bdim(), "sample target", "sgd_train");
    }
    TrainTrace trace;
    Vector p = initial;
    trace.records.push_back({0, std::nullopt, p, dataset_loss(l, p, data)});
    if (data.empty()) {
        return trace;
    }
    SplitMix64 rng(seed);
    std::vector<std::size_t> order(data.size());
    std::size_t cursor = order.size();
    for (std::size_t step = 1; step <= steps; ++step) {
        if (cursor == order.size()) {
            std::iota(order.begin(), order.end(), std::size_t{0});
            for (std::size_t i = order.size(); i > 1; --i) {
                std::swap(order[i - 1], order[rng.below(i)]);
            }
            cursor = 0;
        }
        const std::size_t idx = order[cursor++];
        const TrainSample& s = data[idx];
        const Vector next = l.update(s.b, p, s.a);
        // The request is part of the learner step; a single learner has no
        // upstream to send it to.
        [[maybe_unused]] const Vector requested = l.request(s.b, p, s.a);
        if (!next.allFinite()) {
            throw Error(ErrorKind::DivergenceDetected, "parameters stopped being finite at step " + std::to_string(step));
        }
        p = next;
        const double loss = dataset_loss(l, p, data);
        if (!std::isfinite(loss) || loss > kDivergenceLoss) {
            throw Error(ErrorKind::DivergenceDetected, "loss exceeded the divergence threshold at step "
                                                           + std::to_string(step));
        }
        trace.records.push_back({step, idx, p, loss});
    }
    return trace;
}

Vector initial_params(std::size_t pdim, std::uint64_t seed)
{
    SplitMix64 rng(seed);
    Vector p(static_cast<Eigen::Index>(pdim));
    for (Eigen::Index i = 0; i < p.size(); ++i) {
        p[i] = 0.5 * rng.normal();
    }
    return p;
}

std::vector<ParaFn> parse_model(const std::string& description)
{
    std::vector<ParaFn> layers;
    std::optional<std::size_t> width;
    std::stringstream in(description);
    std::string token;
    auto parse_count = [&](const std::string& text) -> std::size_t {
        std::size_t pos = 0;
        unsigned long value = 0;
        try {
            value = std::stoul(text, &pos);
        } catch (const std::exception&) {
            pos = 0;
        }
        if (pos == 0 || pos != text.size() || value == 0) {
            throw Error(ErrorKind::ParseError, "model: bad size '" + text + "' in '" + token + "'");
        }
        return value;
    };
    while (std::getline(in, token, ',')) {
        const auto colon = token.find(':');
        const std::string kind = token.substr(0, colon);
        const std::string arg = colon == std::string::npos ? "" : token.substr(colon + 1);
        if (kind == "linear") {
            const auto x = arg.find('x');
            if (x == std::string::npos) {
                throw Error(ErrorKind::ParseError, "model: linear layers are written linear:INxOUT");
            }
            const std::size_t ins = parse_count(arg.substr(0, x));
            const std::size_t outs = parse_count(arg.substr(x + 1));
            if (width && *width != ins) {
                throw Error(ErrorKind::DimMismatch, "model: " + token + " follows a layer of width "
                                                        + std::to_string(*width));
            }
            layers.push_back(para_linear(outs, ins));
            width = outs;
            continue;
        }
        std::size_t dim = 0;
        if (!arg.empty()) {
            dim = parse_count(arg);
            if (width && *width != dim) {
                throw Error(ErrorKind::DimMismatch, "model: " + token + " follows a layer of width "
                                                        + std::to_string(*width));
            }
        } else if (width) {
            dim = *width;
        } else {
            throw Error(ErrorKind::ParseError, "model: cannot infer the width of leading layer '" + token + "'");
        }
        if (kind == "bias") {
            layers.push_back(para_bias(dim));
        } else if (kind == "tanh") {
            layers.push_back(para_activation(Activation::Tanh, dim));
        } else if (kind == "sigmoid") {
            layers.push_back(para_activation(Activation::Sigmoid, dim));
        } else if (kind == "relu") {
            layers.push_back(para_activation(Activation::Relu, dim));
        } else if (kind == "identity") {
            layers.push_back(para_identity(dim));
        } else {
            throw Error(ErrorKind::ParseError, "model: unknown layer '" + token + "'");
        }
        width = dim;
    }
    if (layers.empty()) {
        throw Error(ErrorKind::ParseError, "model: no layers");
    }
    return layers;
}

SmoothLearner compose_layers(const std::vector<ParaFn>& layers, double eps)
{
    if (layers.empty()) {
        throw Error(ErrorKind::DimMismatch, "compose_layers: no layers");
    }
    SmoothLearner out = gradient_learner(layers.front(), eps);
    for (std::size_t i = 1; i < layers.size(); ++i) {
        out = smooth_compose(out, gradient_learner(layers[i], eps));
    }
    return out;
}

double backprop_deviation(const std::vector<ParaFn>& layers, double eps, std::size_t points, std::uint64_t seed)
{
    const SmoothLearner composed = compose_layers(layers, eps);
    ParaFn chain = layers.front();
    for (std::size_t i = 1; i < layers.size(); ++i) {
        chain = para_compose(chain, layers[i]);
    }
    const SmoothLearner monolithic = gradient_learner(chain, eps);
    SplitMix64 rng(seed);
    auto draw = [&](std::size_t n) {
        Vector v(static_cast<Eigen::Index>(n));
        for (Eigen::Index i = 0; i < v.size(); ++i) {
            v[i] = rng.normal();
        }
        return v;
    };
    auto max_abs = [](const Vector& v) { return v.size() == 0 ? 0.0 : v.cwiseAbs().maxCoeff(); };
    double worst = 0.0;
    for (std::size_t k = 0; k < points; ++k) {
        const Vector c = draw(composed.bdim());
        const Vector p = draw(composed.pdim());
        const Vector a = draw(composed.adim());
        worst = std::max(worst, max_abs(composed.update(c, p, a) - monolithic.update(c, p, a)));
        worst = std::max(worst, max_abs(composed.request(c, p, a) - monolithic.request(c, p, a)));
    }
    return worst;
}

} // namespace bilearn
