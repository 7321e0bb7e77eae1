#pragma once

#include <nlohmann/json.hpp>
#include <string>
#include <utility>
#include <vector>

#include "cvxeps/functions.hpp"
#include "cvxeps/numerics.hpp"
#include "cvxeps/parametric.hpp"
#include "cvxeps/sets.hpp"

namespace cvxeps {

/// A validated fixture: one named operation with JSON inputs and an optional
/// expected result. Operation tags: subdiff, conjugate, polar, normal,
/// sum-rule, value-fn, parametric-unconstrained, parametric-constrained,
/// regularity.
struct Scenario {
    std::string name;
    std::string op;
    std::string description;
    nlohmann::json raw;
};

struct RunReport {
    std::string name;
    std::string op;
    bool pass = false;
    double hausdorff_error = 0.0;
    std::vector<std::string> flags;
    long long millis = 0;
    std::string computed;  // human-readable serialization of the result
    /// Per-eta diagnostic for ladder-based operations: (eta, clipped measure).
    std::vector<std::pair<double, double>> eta_convergence;
    std::string svg;  // non-empty for 2D dual-set scenarios
};

struct SuiteSummary {
    std::vector<RunReport> reports;  // sorted by scenario name
    bool all_pass = false;
};

// JSON (de)serialization of the core types. Throws ParseError / SchemaError.
ConvexFn fn_from_json(const nlohmann::json& j);
ConvexSetDesc set_from_json(const nlohmann::json& j);
ParametricProblem problem_from_json(const nlohmann::json& j);
/// Expected-set descriptions: interval, box, empty, window, point,
/// norm_affine (<a,z> + w |z|_2 <= c), abs_affine (<a,z> + sum w_i |z_i| <= c).
DualSet expected_from_json(const nlohmann::json& j, int dim, const Tolerances& tol);

Scenario load_scenario(const std::string& path);
RunReport run_scenario(const Scenario& s, const Tolerances& tol);
RunReport run_scenario_file(const std::string& path, const Tolerances& tol);

/// Runs every .json fixture in the directory (sorted by file name).
SuiteSummary run_fixture_suite(const std::string& fixtures_dir, const Tolerances& tol);

/// CSV report: header scenario,operation,pass,hausdorff_error,flags,millis;
/// rows sorted by scenario name; fixed number formatting for determinism.
std::string to_csv(const std::vector<RunReport>& reports);

/// Membership raster of a 2D dual set on the window, with the expected set's
/// boundary cells overlaid.
std::string render_svg(const DualSet& computed, const DualSet* expected,
                       const Tolerances& tol, int cells = 120);

}  // namespace cvxeps
