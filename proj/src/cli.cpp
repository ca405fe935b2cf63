#include "bilearn/cli.hpp"

#include <cstdio>
#include <fstream>
#include <ostream>
#include <sstream>

#include <CLI11.hpp>

#include "bilearn/sampling.hpp"

namespace bilearn::cli {

namespace {

std::string num(double x)
{
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.10g", x);
    return buf;
}

std::string vec(const Vector& v)
{
    std::string out = "[";
    for (Eigen::Index i = 0; i < v.size(); ++i) {
        out += (i == 0 ? "" : ", ") + num(v[i]);
    }
    return out + "]";
}

nlohmann::ordered_json vec_json(const Vector& v)
{
    auto out = nlohmann::ordered_json::array();
    for (Eigen::Index i = 0; i < v.size(); ++i) {
        out.push_back(v[i]);
    }
    return out;
}

std::string map_text(const FinFn& f)
{
    std::string out;
    for (Index x = 0; x < f.dom().size(); ++x) {
        out += (x == 0 ? "" : " ") + f.dom().render(x) + "->" + f.cod().render(f(x));
    }
    return out;
}

std::string infer_kind(const SpecDocument& doc, const std::string& kind, const std::string& name)
{
    if (!kind.empty()) {
        return kind;
    }
    return std::string(to_string(doc.kind_of(name)));
}

void write_file(const std::string& path, const std::string& text)
{
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw Error(ErrorKind::ParseError, path + ": cannot open for writing");
    }
    out << text;
}

} // namespace

std::string render(const Report& report, bool json)
{
    if (json) {
        nlohmann::ordered_json doc = report.data;
        doc["exit_code"] = report.exit_code;
        return doc.dump(2) + "\n";
    }
    std::string out;
    for (const auto& l : report.lines) {
        out += l + "\n";
    }
    return out;
}

int exit_code_for(ErrorKind kind)
{
    switch (kind) {
    case ErrorKind::LeftLegPutGetViolation:
    case ErrorKind::DivergenceDetected: return kExitFail;
    default: return kExitUsage;
    }
}

// ---------------------------------------------------------------------------

Report check_laws(const SpecDocument& doc, const std::string& name, const std::vector<std::string>& laws)
{
    const EntityKind kind = doc.kind_of(name);
    if (kind != EntityKind::Lens && kind != EntityKind::Learner) {
        throw Error(ErrorKind::UnknownName, "'" + name + "' is a " + std::string(to_string(kind))
                                                + ", expected a lens or learner");
    }
    const bool is_lens = kind == EntityKind::Lens;
    auto selected = [&](const std::string& law) {
        return laws.empty() || std::find(laws.begin(), laws.end(), "all") != laws.end()
               || std::find(laws.begin(), laws.end(), law) != laws.end();
    };
    for (const auto& law : laws) {
        const bool known = law == "all" || (is_lens ? law == "putget" || law == "getput" : law == "iur" || law == "uri");
        if (!known) {
            throw Error(ErrorKind::ParseError, "law '" + law + "' does not apply to " + std::string(to_string(kind))
                                                   + " " + name);
        }
    }
    std::vector<LawReport> results;
    if (is_lens) {
        const AsymmetricLens& l = doc.lens(name);
        if (selected("putget")) {
            results.push_back(check_putget(l));
        }
        if (selected("getput")) {
            results.push_back(check_getput(l));
        }
    } else {
        const Learner& l = doc.learner(name);
        if (selected("iur")) {
            results.push_back(check_iur(l));
        }
        if (selected("uri")) {
            results.push_back(check_uri(l));
        }
    }
    Report report;
    report.data["command"] = "check-laws";
    report.data["name"] = name;
    report.data["kind"] = std::string(to_string(kind));
    auto& out = report.data["laws"] = nlohmann::ordered_json::array();
    report.line(std::string(to_string(kind)) + " " + name);
    for (const auto& r : results) {
        report.line(r.law + ": " + (r.passed ? "pass" : "FAIL"));
        nlohmann::ordered_json entry{{"law", r.law}, {"passed", r.passed}};
        if (!r.passed) {
            report.line("  " + r.describe());
            auto& w = entry["witness"] = nlohmann::ordered_json::object();
            for (const auto& [k, v] : r.witness) {
                w[k] = v;
            }
            entry["description"] = r.describe();
            report.exit_code = kExitFail;
        }
        out.push_back(std::move(entry));
    }
    return report;
}

Output compose(const SpecDocument& doc, const std::string& kind_in, const std::vector<std::string>& names,
               const std::string& result_name)
{
    if (names.empty()) {
        throw Error(ErrorKind::ParseError, "compose needs at least one name");
    }
    const std::string kind = infer_kind(doc, kind_in, names.front());
    Output result;
    Report& report = result.report;
    report.data["command"] = "compose";
    report.data["kind"] = kind;
    report.data["inputs"] = names;
    report.data["name"] = result_name;
    SpecWriter writer;
    std::string chain;
    for (const auto& n : names) {
        chain += (chain.empty() ? "" : " ; ") + n;
    }
    if (kind == "lens") {
        AsymmetricLens acc = doc.lens(names.front());
        for (std::size_t i = 1; i < names.size(); ++i) {
            acc = lens_compose(acc, doc.lens(names[i]));
        }
        writer.add_lens(acc, result_name);
        report.line("lens " + result_name + " = " + chain);
        report.line("source: " + acc.src().describe() + " (" + std::to_string(acc.src().size()) + ")");
        report.line("target: " + acc.dst().describe() + " (" + std::to_string(acc.dst().size()) + ")");
        report.data["source_size"] = acc.src().size();
        report.data["target_size"] = acc.dst().size();
    } else if (kind == "span") {
        LensSpan acc = doc.span(names.front());
        for (std::size_t i = 1; i < names.size(); ++i) {
            acc = span_compose(acc, doc.span(names[i]));
        }
        writer.add_span(acc, result_name);
        report.line("span " + result_name + " = " + chain);
        report.line("head: " + std::to_string(acc.head().size()) + " states");
        report.line("feet: " + acc.left_foot().describe() + " and " + acc.right_foot().describe());
        report.data["head_size"] = acc.head().size();
        report.data["left_foot_size"] = acc.left_foot().size();
        report.data["right_foot_size"] = acc.right_foot().size();
    } else if (kind == "learner") {
        Learner acc = doc.learner(names.front());
        for (std::size_t i = 1; i < names.size(); ++i) {
            acc = learner_compose(acc, doc.learner(names[i]));
        }
        writer.add_learner(acc, result_name);
        report.line("learner " + result_name + " = " + chain);
        report.line("params: " + acc.params().describe() + " (" + std::to_string(acc.params().size()) + ")");
        report.line("source: " + acc.src().describe() + " (" + std::to_string(acc.src().size()) + ")");
        report.line("target: " + acc.dst().describe() + " (" + std::to_string(acc.dst().size()) + ")");
        report.data["params"] = acc.params().describe();
        report.data["params_size"] = acc.params().size();
        report.data["source_size"] = acc.src().size();
        report.data["target_size"] = acc.dst().size();
    } else {
        throw Error(ErrorKind::ParseError, "unknown kind '" + kind + "' (expected lens, span or learner)");
    }
    result.spec_text = writer.str();
    return result;
}

Report functor_check(const FunctorCheckOptions& options)
{
    if (options.sets > kFunctorCheckMaxSize || options.params > kFunctorCheckMaxSize) {
        throw Error(ErrorKind::CapExceeded, "functor-check: set and parameter sizes are limited to "
                                                + std::to_string(kFunctorCheckMaxSize));
    }
    if (options.sets == 0 || options.params == 0) {
        throw Error(ErrorKind::ParseError, "functor-check: sizes must be at least 1");
    }
    SplitMix64 rng(options.seed);
    std::size_t passed = 0;
    std::size_t exact = 0;
    std::optional<FunctorReport> first_failure;
    for (std::size_t i = 0; i < options.cases; ++i) {
        const std::uint64_t case_seed = rng.next();
        SplitMix64 local(case_seed);
        const FiniteSet a = numbered_set("a", 1 + local.below(options.sets));
        const FiniteSet b = numbered_set("b", 1 + local.below(options.sets));
        const FiniteSet c = numbered_set("c", 1 + local.below(options.sets));
        const FiniteSet p = numbered_set("p", 1 + local.below(options.params));
        const FiniteSet q = numbered_set("q", 1 + local.below(options.params));
        const Learner l1 = random_learner(p, a, b, local.next());
        const Learner l2 = random_learner(q, b, c, local.next());
        char desc[64];
        std::snprintf(desc, sizeof desc, "case %zu seed %016llx", i, static_cast<unsigned long long>(case_seed));
        FunctorReport r = verify_functor_composition(l1, l2, desc, options.composer);
        exact += r.equal_exact ? 1 : 0;
        if (r.passed()) {
            ++passed;
        } else if (!first_failure) {
            first_failure = std::move(r);
        }
    }
    Report report;
    const std::size_t failed = options.cases - passed;
    report.exit_code = failed == 0 ? kExitPass : kExitFail;
    report.line("functor-check: sets<=" + std::to_string(options.sets) + " params<="
                + std::to_string(options.params) + " cases=" + std::to_string(options.cases)
                + " seed=" + std::to_string(options.seed));
    report.line("passed: " + std::to_string(passed));
    report.line("failed: " + std::to_string(failed));
    report.line("equal exact: " + std::to_string(exact));
    report.data["command"] = "functor-check";
    report.data["sets"] = options.sets;
    report.data["params"] = options.params;
    report.data["cases"] = options.cases;
    report.data["seed"] = options.seed;
    report.data["passed"] = passed;
    report.data["failed"] = failed;
    report.data["equal_exact"] = exact;
    if (first_failure) {
        const std::string detail = first_failure->detail.empty() ? "images differ" : first_failure->detail;
        report.line("first failure: " + first_failure->descriptor + ": " + detail);
        report.data["first_failure"] = {{"case", first_failure->descriptor},
                                        {"equal_exact", first_failure->equal_exact},
                                        {"equal_up_to_equiv", first_failure->equal_up_to_equiv},
                                        {"detail", detail}};
    } else {
        report.data["first_failure"] = nullptr;
    }
    return report;
}

// ---------------------------------------------------------------------------

std::vector<TrainSample> synthetic_linear_data(std::size_t dim, std::size_t count, double slope)
{
    std::vector<TrainSample> out;
    for (std::size_t i = 0; i < count; ++i) {
        const double t = count == 1 ? 0.0 : -2.0 + 4.0 * static_cast<double>(i) / static_cast<double>(count - 1);
        Vector a = Vector::Constant(static_cast<Eigen::Index>(dim), t);
        out.push_back({a, slope * a});
    }
    return out;
}

std::vector<TrainSample> read_dataset_csv(const std::string& path, std::size_t adim, std::size_t bdim)
{
    std::ifstream in(path);
    if (!in) {
        throw Error(ErrorKind::ParseError, path + ": cannot open file");
    }
    auto split = [](const std::string& line) {
        std::vector<std::string> cells;
        std::stringstream ss(line);
        std::string cell;
        while (std::getline(ss, cell, ',')) {
            const auto b = cell.find_first_not_of(" \t\r");
            const auto e = cell.find_last_not_of(" \t\r");
            cells.push_back(b == std::string::npos ? "" : cell.substr(b, e - b + 1));
        }
        return cells;
    };
    std::string line;
    if (!std::getline(in, line)) {
        throw Error(ErrorKind::ParseError, path + ": missing header");
    }
    const auto header = split(line);
    std::size_t na = 0;
    std::size_t nb = 0;
    for (const auto& h : header) {
        if (h == "a" + std::to_string(na) && nb == 0) {
            ++na;
        } else if (h == "b" + std::to_string(nb)) {
            ++nb;
        } else {
            throw Error(ErrorKind::ParseError, path + ":1: header must be a0,a1,...,b0,b1,...");
        }
    }
    if (na != adim || nb != bdim) {
        throw Error(ErrorKind::DimMismatch, path + ": data has " + std::to_string(na) + " inputs and "
                                                + std::to_string(nb) + " outputs, model expects "
                                                + std::to_string(adim) + " and " + std::to_string(bdim));
    }
    std::vector<TrainSample> out;
    std::size_t line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.find_first_not_of(" \t\r") == std::string::npos) {
            continue;
        }
        const auto cells = split(line);
        if (cells.size() != na + nb) {
            throw Error(ErrorKind::ParseError, path + ":" + std::to_string(line_no) + ": expected "
                                                   + std::to_string(na + nb) + " values");
        }
        Vector row(static_cast<Eigen::Index>(cells.size()));
        for (std::size_t i = 0; i < cells.size(); ++i) {
            char* end = nullptr;
            const double v = std::strtod(cells[i].c_str(), &end);
            if (cells[i].empty() || *end != '\0' || !std::isfinite(v)) {
                throw Error(ErrorKind::ParseError, path + ":" + std::to_string(line_no) + ": bad number '"
                                                       + cells[i] + "'");
            }
            row[static_cast<Eigen::Index>(i)] = v;
        }
        out.push_back({row.head(static_cast<Eigen::Index>(na)), row.tail(static_cast<Eigen::Index>(nb))});
    }
    return out;
}

Report train(const TrainOptions& options)
{
    const std::vector<ParaFn> layers = parse_model(options.model);
    const SmoothLearner learner = compose_layers(layers, options.eps);
    std::vector<TrainSample> data;
    if (options.data.empty()) {
        if (learner.adim() != learner.bdim()) {
            throw Error(ErrorKind::DimMismatch, "synthetic data needs equal input and output widths");
        }
        data = synthetic_linear_data(learner.adim());
    } else {
        data = read_dataset_csv(options.data, learner.adim(), learner.bdim());
    }
    SplitMix64 rng(options.seed);
    const Vector init = initial_params(learner.pdim(), rng.next());
    const TrainTrace trace = sgd_train(learner, data, options.steps, rng.next(), init);

    Report report;
    report.data["command"] = "train";
    report.data["model"] = options.model;
    report.data["parameters"] = learner.pdim();
    report.data["samples"] = data.size();
    report.data["eps"] = options.eps;
    report.data["steps"] = options.steps;
    report.data["seed"] = options.seed;
    report.line("model: " + options.model + " (parameters " + std::to_string(learner.pdim()) + ", input "
                + std::to_string(learner.adim()) + ", output " + std::to_string(learner.bdim()) + ")");
    report.line("samples: " + std::to_string(data.size()));
    report.line("initial loss: " + num(trace.records.front().loss));
    report.data["initial_loss"] = trace.records.front().loss;
    if (options.steps > 0) {
        report.line("final loss: " + num(trace.final_loss()));
        report.line("params: " + vec(trace.final_params()));
        report.data["final_loss"] = trace.final_loss();
        report.data["final_params"] = vec_json(trace.final_params());
    }
    if (options.check_backprop) {
        const double dev = backprop_deviation(layers, options.eps, 100, options.seed);
        const bool ok = dev <= options.tol;
        report.line("max backprop deviation: " + num(dev) + " (tolerance " + num(options.tol) + ", "
                    + (ok ? "pass" : "FAIL") + ")");
        report.data["backprop_deviation"] = dev;
        report.data["backprop_passed"] = ok;
        if (!ok) {
            report.exit_code = kExitFail;
        }
    }
    if (!options.trace_path.empty()) {
        std::string csv = "step,loss\n";
        for (const auto& r : trace.records) {
            char buf[64];
            std::snprintf(buf, sizeof buf, "%zu,%.17g\n", r.step, r.loss);
            csv += buf;
        }
        write_file(options.trace_path, csv);
        report.data["trace"] = options.trace_path;
    }
    return report;
}

// ---------------------------------------------------------------------------

Report equiv(const SpecDocument& doc, const std::string& kind_in, const std::string& a, const std::string& b)
{
    const std::string kind = infer_kind(doc, kind_in, a);
    Report report;
    report.data["command"] = "equiv";
    report.data["kind"] = kind;
    report.data["first"] = a;
    report.data["second"] = b;
    bool equivalent = false;
    std::size_t size_a = 0;
    std::size_t size_b = 0;
    std::optional<FinFn> witness;
    std::string distinguishing;
    std::string quotients[2];
    if (kind == "span") {
        const SpanEquivResult r = span_equiv_detail(doc.span(a), doc.span(b));
        equivalent = r.equivalent;
        size_a = r.minimized_size_a;
        size_b = r.minimized_size_b;
        witness = r.bijection;
        distinguishing = r.distinguishing;
        quotients[0] = map_text(span_quotient(doc.span(a)).quotient);
        quotients[1] = map_text(span_quotient(doc.span(b)).quotient);
    } else if (kind == "learner") {
        const LearnerEquivResult r = learner_equiv_detail(doc.learner(a), doc.learner(b));
        equivalent = r.equivalent;
        size_a = r.minimized_size_a;
        size_b = r.minimized_size_b;
        witness = r.bijection;
        distinguishing = r.distinguishing;
        quotients[0] = map_text(learner_quotient(doc.learner(a)).quotient);
        quotients[1] = map_text(learner_quotient(doc.learner(b)).quotient);
    } else {
        throw Error(ErrorKind::ParseError, "unknown kind '" + kind + "' (expected span or learner)");
    }
    report.exit_code = equivalent ? kExitPass : kExitFail;
    report.line(kind + " " + a + " vs " + b + ": " + (equivalent ? "equivalent" : "not equivalent"));
    report.line("minimized sizes: " + std::to_string(size_a) + " and " + std::to_string(size_b));
    report.line("quotient of " + a + ": " + quotients[0]);
    report.line("quotient of " + b + ": " + quotients[1]);
    report.data["equivalent"] = equivalent;
    report.data["minimized_sizes"] = {size_a, size_b};
    report.data["quotients"] = {quotients[0], quotients[1]};
    if (witness) {
        report.line("witness: " + map_text(*witness));
        report.data["witness"] = map_text(*witness);
    } else {
        report.line("distinguishing: " + distinguishing);
        report.data["distinguishing"] = distinguishing;
    }
    return report;
}

Output minimize(const SpecDocument& doc, const std::string& kind_in, const std::string& name,
                const std::string& result_name)
{
    const std::string kind = infer_kind(doc, kind_in, name);
    Output result;
    Report& report = result.report;
    report.data["command"] = "minimize";
    report.data["kind"] = kind;
    report.data["name"] = name;
    SpecWriter writer;
    if (kind == "span") {
        const LensSpan& s = doc.span(name);
        const SpanQuotient q = span_quotient(s);
        writer.add_span(q.span, result_name);
        report.line("span " + name + ": head " + std::to_string(s.head().size()) + " -> "
                    + std::to_string(q.span.head().size()));
        report.line("quotient: " + map_text(q.quotient));
        report.data["size_before"] = s.head().size();
        report.data["size_after"] = q.span.head().size();
        report.data["quotient"] = map_text(q.quotient);
    } else if (kind == "learner") {
        const Learner& l = doc.learner(name);
        const LearnerQuotient q = learner_quotient(l);
        writer.add_learner(q.learner, result_name);
        report.line("learner " + name + ": params " + std::to_string(l.params().size()) + " -> "
                    + std::to_string(q.learner.params().size()));
        report.line("quotient: " + map_text(q.quotient));
        report.data["size_before"] = l.params().size();
        report.data["size_after"] = q.learner.params().size();
        report.data["quotient"] = map_text(q.quotient);
    } else {
        throw Error(ErrorKind::ParseError, "unknown kind '" + kind + "' (expected span or learner)");
    }
    result.spec_text = writer.str();
    return result;
}

// ---------------------------------------------------------------------------

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err, const Hooks& hooks)
{
    CLI::App app{"Finite lenses, symmetric lenses, learners and gradient-descent training", "bilearn"};
    app.require_subcommand(1);
    app.fallthrough();

    std::uint64_t seed = 0;
    bool json = false;
    double tol = 1e-9;
    app.add_option("--seed", seed, "Seed for sampled cases and training")->capture_default_str();
    app.add_flag("--json", json, "Print the report as one JSON object");
    app.add_option("--tol", tol, "Numeric tolerance for derivative checks")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();

    std::string spec_path;
    std::string kind;
    std::string out_path;
    std::string result_name = "composite";

    auto* laws_cmd = app.add_subcommand("check-laws", "Check lens or learner laws exhaustively");
    std::string law_name;
    std::vector<std::string> laws;
    laws_cmd->add_option("spec", spec_path, "Spec file")->required()->check(CLI::ExistingFile);
    laws_cmd->add_option("name", law_name, "Lens or learner name")->required();
    laws_cmd->add_option("--law", laws, "putget, getput, iur, uri or all (repeatable)");

    auto* compose_cmd = app.add_subcommand("compose", "Compose a chain of lenses, spans or learners");
    std::vector<std::string> names;
    compose_cmd->add_option("spec", spec_path, "Spec file")->required()->check(CLI::ExistingFile);
    compose_cmd->add_option("names", names, "Names to compose, left to right")->required();
    compose_cmd->add_option("--kind", kind, "lens, span or learner")
        ->check(CLI::IsMember({"lens", "span", "learner"}));
    compose_cmd->add_option("--out", out_path, "Write the composite to this spec file");
    compose_cmd->add_option("--name", result_name, "Name of the composite")->capture_default_str();

    auto* functor_cmd = app.add_subcommand("functor-check", "Verify the learner-to-span functor on random pairs");
    FunctorCheckOptions fopts;
    functor_cmd->add_option("--sets", fopts.sets, "Largest set size")->capture_default_str();
    functor_cmd->add_option("--params", fopts.params, "Largest parameter set size")->capture_default_str();
    functor_cmd->add_option("--cases", fopts.cases, "Number of learner pairs")->capture_default_str();

    auto* train_cmd = app.add_subcommand("train", "Train a layered gradient-descent learner");
    TrainOptions topts;
    train_cmd->add_option("--model", topts.model, "Layers, e.g. linear:4x3,tanh,linear:3x1")->required();
    train_cmd->add_option("--data", topts.data, "CSV with columns a0..,b0.. (default: synthetic b = 1.7a)")
        ->check(CLI::ExistingFile);
    train_cmd->add_option("--eps", topts.eps, "Step size")->capture_default_str();
    train_cmd->add_option("--steps", topts.steps, "Number of SGD steps")->capture_default_str();
    train_cmd->add_option("--report", topts.trace_path, "Write the loss trace as CSV (step,loss)");
    train_cmd->add_flag("--check-backprop", topts.check_backprop,
                        "Compare composed updates with the monolithic gradient learner");

    auto* equiv_cmd = app.add_subcommand("equiv", "Decide equivalence of two spans or learners");
    std::string first;
    std::string second;
    equiv_cmd->add_option("spec", spec_path, "Spec file")->required()->check(CLI::ExistingFile);
    equiv_cmd->add_option("first", first, "First name")->required();
    equiv_cmd->add_option("second", second, "Second name")->required();
    equiv_cmd->add_option("--kind", kind, "span or learner")->check(CLI::IsMember({"span", "learner"}));

    auto* min_cmd = app.add_subcommand("minimize", "Minimize a span or learner");
    std::string min_name;
    min_cmd->add_option("spec", spec_path, "Spec file")->required()->check(CLI::ExistingFile);
    min_cmd->add_option("structure", min_name, "Span or learner name")->required();
    min_cmd->add_option("--kind", kind, "span or learner")->check(CLI::IsMember({"span", "learner"}));
    min_cmd->add_option("--out", out_path, "Write the minimized structure to this spec file");
    min_cmd->add_option("--name", result_name, "Name of the result")->capture_default_str();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        if (json && e.get_exit_code() != 0) {
            nlohmann::ordered_json doc{{"error", {{"kind", "UsageError"}, {"message", e.what()}}}};
            doc["exit_code"] = kExitUsage;
            out << doc.dump(2) << "\n";
            return kExitUsage;
        }
        const int code = app.exit(e, out, err);
        return code == 0 ? kExitPass : kExitUsage;
    }

    auto emit_output = [&](Output result) {
        if (!out_path.empty()) {
            write_file(out_path, result.spec_text);
            result.report.data["out"] = out_path;
        } else if (json) {
            result.report.data["spec"] = result.spec_text;
        } else {
            result.report.line("");
            std::string text = result.spec_text;
            if (!text.empty() && text.back() == '\n') {
                text.pop_back();
            }
            result.report.line(text);
        }
        return result.report;
    };

    try {
        Report report;
        if (laws_cmd->parsed()) {
            report = check_laws(parse_spec(spec_path), law_name, laws);
        } else if (compose_cmd->parsed()) {
            report = emit_output(compose(parse_spec(spec_path), kind, names, result_name));
        } else if (functor_cmd->parsed()) {
            fopts.seed = seed;
            fopts.composer = hooks.composer;
            report = functor_check(fopts);
        } else if (train_cmd->parsed()) {
            topts.seed = seed;
            topts.tol = tol;
            report = train(topts);
        } else if (equiv_cmd->parsed()) {
            report = equiv(parse_spec(spec_path), kind, first, second);
        } else if (min_cmd->parsed()) {
            report = emit_output(minimize(parse_spec(spec_path), kind, min_name, result_name));
        }
        out << render(report, json);
        return report.exit_code;
    } catch (const Error& e) {
        if (json) {
            nlohmann::ordered_json doc{{"error", {{"kind", std::string(to_string(e.kind()))}, {"message", e.what()}}}};
            doc["exit_code"] = exit_code_for(e.kind());
            out << doc.dump(2) << "\n";
        } else {
            err << "error: " << e.what() << "\n";
        }
        return exit_code_for(e.kind());
    }
}

} // namespace bilearn::cli
