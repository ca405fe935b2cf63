#pragma once

// Command implementations behind the `bilearn` executable. Each command
// returns a Report that renders either as text lines or as one JSON object.

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include <json.hpp>

#include "bilearn/bridge.hpp"
#include "bilearn/diff.hpp"
#include "bilearn/spec.hpp"

namespace bilearn::cli {

inline constexpr int kExitPass = 0;
inline constexpr int kExitFail = 1;
inline constexpr int kExitUsage = 2;

struct Report {
    int exit_code = kExitPass;
    std::vector<std::string> lines;
    nlohmann::ordered_json data = nlohmann::ordered_json::object();

    void line(std::string text) { lines.push_back(std::move(text)); }
};

std::string render(const Report& report, bool json);

/// Exit code for a library error: 1 for failed checks, 2 otherwise.
int exit_code_for(ErrorKind kind);

/// `laws` holds any of putget, getput (lenses), iur, uri (learners) or all.
/// Throws UnknownName unless `name` is a lens or learner.
Report check_laws(const SpecDocument& doc, const std::string& name, const std::vector<std::string>& laws);

struct Output {
    Report report;
    std::string spec_text;
};

/// kind is lens, span or learner; names are composed left to right.
Output compose(const SpecDocument& doc, const std::string& kind, const std::vector<std::string>& names,
               const std::string& result_name);

struct FunctorCheckOptions {
    std::size_t sets = 2;
    std::size_t params = 2;
    std::size_t cases = 200;
    std::uint64_t seed = 0;
    LearnerComposer composer = learner_compose;
};

inline constexpr std::size_t kFunctorCheckMaxSize = 4;

/// Throws CapExceeded when sets or params exceed kFunctorCheckMaxSize.
Report functor_check(const FunctorCheckOptions& options);

struct TrainOptions {
    std::string model;
    std::string data;  // CSV path; empty selects the synthetic b = 1.7 a set
    double eps = 0.05;
    std::size_t steps = 500;
    std::uint64_t seed = 0;
    std::string trace_path;
    bool check_backprop = false;
    double tol = 1e-9;
};

Report train(const TrainOptions& options);

/// Columns a0.. then b0..; throws ParseError or DimMismatch.
std::vector<TrainSample> read_dataset_csv(const std::string& path, std::size_t adim, std::size_t bdim);
/// `count` inputs evenly spaced over [-2, 2] in every coordinate, b = slope * a.
std::vector<TrainSample> synthetic_linear_data(std::size_t dim, std::size_t count = 50, double slope = 1.7);

/// kind is span or learner, or empty to infer from the first name.
Report equiv(const SpecDocument& doc, const std::string& kind, const std::string& a, const std::string& b);

Output minimize(const SpecDocument& doc, const std::string& kind, const std::string& name,
                const std::string& result_name);

struct Hooks {
    LearnerComposer composer = learner_compose;
};

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err, const Hooks& hooks = {});

} // namespace bilearn::cli
