#pragma once

#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "equilib/system.hpp"

namespace equilib {

enum class SolveMode { newton, descent };
enum class SolveStatus { converged, max_iter, collapse_detected };

std::string to_string(SolveStatus s);
std::string to_string(SolveMode m);

struct SolverOptions {
  int max_iterations = 200;
  double residual_tolerance = 1e-12;
  double min_gap_floor = 1e-10;   // collision guard
  double step_damping = 1.0;      // initial step fraction, in (0, 1]
  SolveMode mode = SolveMode::newton;

  void validate() const;
  nlohmann::json to_json() const;
  static SolverOptions from_json(const nlohmann::json& j);
};

struct TraceEntry {
  double residual_norm = 0.0;
  double min_gap = 0.0;
  double energy = 0.0;
};

struct SolveReport {
  Configuration final_config;
  double residual_norm = 0.0;  // max_i |r_i| at the final iterate
  int iterations = 0;
  SolveStatus status = SolveStatus::max_iter;
  std::vector<TraceEntry> trace;

  nlohmann::json to_json() const;
};

/// Damped Newton on the residual system r(x) = 0 with Levenberg-style
/// regularization; steps that would push the minimum pairwise gap below
/// min_gap_floor are backtracked, and a stalled shrinking-gap line search is
/// reported as collapse_detected.
SolveReport solve_critical(const Configuration& init, const ProblemSpec& spec,
                           const SolverOptions& opts);

/// Gradient descent with Armijo backtracking on H_N (monotone energy trace).
/// Converged when max_i |d_i r_i| <= residual_tolerance * M_N.
SolveReport minimize_energy(const Configuration& init, const ProblemSpec& spec,
                            const SolverOptions& opts);

struct PolygonEquilibrium {
  Configuration config;
  double omega = 0.0;  // V = omega |x|^2 makes the polygon critical
};

/// n unit charges on the regular n-gon of radius r; critical for
/// V = omega |x|^2 with omega = (n-1) / (4 n r^2).
PolygonEquilibrium polygon_relative_equilibrium(int n, double r);

enum class ChargePattern { all_plus, alternating };

/// Uniform positions in [-b, b]^2 with the requested charge pattern;
/// deterministic for a fixed seed. Points closer than 1e-3 * b to an earlier
/// point are redrawn.
Configuration random_configuration(int n, ChargePattern pattern,
                                   double box_half_width, unsigned seed);

/// Same, with explicit charges.
Configuration random_configuration(int n, const std::vector<double>& charges,
                                   double box_half_width, unsigned seed);

}  // namespace equilib
