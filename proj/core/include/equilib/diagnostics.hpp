#pragma once

#include <string>
#include <vector>

#include <Eigen/Dense>
#include <nlohmann/json.hpp>

#include "equilib/gridded_measure.hpp"
#include "equilib/system.hpp"
#include "equilib/test_field.hpp"

namespace equilib {

/// One flux evaluation around a circle, with the analytic value it is
/// compared against.
struct FluxResult {
  Eigen::VectorXd computed;
  Eigen::VectorXd expected;
  double delta_used = 0.0;
  int nodes = 0;

  nlohmann::json to_json() const;
};

/// Trapezoid quadrature of (R_N - [grad h_N, grad h_N]) nu over the circle of
/// the given radius; with the sign conventions used here (g = -log in 2-d and
/// the remainder orientation of FieldSample) this is the combination whose
/// flux around particle i equals (2 c_d d_i / M_N) r_i, and hence vanishes
/// exactly at critical points. Geometrically convergent in the node count
/// since the integrand is smooth and periodic. The circle must stay clear of
/// every particle (proximity error otherwise). nodes >= 16.
Eigen::VectorXd flux_integral(const Configuration& cfg, const ProblemSpec& spec,
                              const Eigen::VectorXd& center, double radius,
                              int nodes);

/// Same, reusing a prepared evaluator.
Eigen::VectorXd flux_integral(const FieldEvaluator& field,
                              const Eigen::VectorXd& center, double radius,
                              int nodes);

/// Analytic right-hand side of the flux identity around particle i:
/// (2 c_d / M_N^2) sum_{j != i} d_i d_j (grad g + grad F)(x_i - x_j)
///   + (2 c_d / M_N) d_i grad V(x_i)  =  (2 c_d d_i / M_N) r_i.
Eigen::VectorXd flux_expected(const Configuration& cfg, const ProblemSpec& spec,
                              int i);

/// Central finite-difference row-divergence of the total tensor at x; decays
/// like O(step^2) off the particles. Requires particle distance > 10 * step.
Eigen::VectorXd divergence_probe(const Configuration& cfg, const ProblemSpec& spec,
                                 const Eigen::VectorXd& x, double step);

struct FactorizationSplit {
  double lhs = 0.0;  // grad g(x-y) . (phi(x) - phi(y))
  double rhs = 0.0;  // Q1 G1 + Q2 G2 + Q3 G3 along the segment
  int quadrature_order = 0;
};

/// Splits the bounded vorticity kernel into the direction-only factors Q_i
/// and the segment integrals G_i of the phi derivatives (Gauss-Legendre,
/// order doubled from 32 until two orders agree to 1e-12). Dimension 2.
FactorizationSplit factorization_split(const Eigen::Vector2d& x,
                                       const Eigen::Vector2d& y,
                                       const TestField& phi);

/// Discrete weak-form residual
/// (1/2) sum_{i != j} m_i m_j (grad g + grad F)(x_i - x_j) . (phi(x_i) - phi(x_j))
///   + sum_i m_i grad V(x_i) . phi(x_i),   m_i = d_i / M_N.
/// Equals sum_i m_i phi(x_i) . r_i; vanishes at critical points.
double vorticity_residual(const Configuration& cfg, const ProblemSpec& spec,
                          const TestField& phi);

enum class StabilityVariant { literal, grouped, full_hessian };

std::string to_string(StabilityVariant v);

struct StabilityReport {
  StabilityVariant variant = StabilityVariant::full_hessian;
  std::vector<double> site_min_eigenvalues;  // per-i matrices (literal/grouped)
  std::vector<double> pair_min_eigenvalues;  // per unordered pair (literal/grouped)
  std::vector<double> hessian_eigenvalues;   // full spectrum (full_hessian)
  double min_eigenvalue = 0.0;
  double tolerance = 0.0;  // pass when min_eigenvalue >= tolerance
  bool pass = false;

  nlohmann::json to_json() const;
};

/// Second-order conditions.
///  literal:      S_i = sum_{j != i} d_i d_j (D2g + D2F)(x_i - x_j) + d_i D2V(x_i)
///                and per pair d_i d_j D2g(x_i - x_j) + D2F(x_i - x_j);
///  grouped:      pair matrices d_i d_j (D2g + D2F)(x_i - x_j);
///  full_hessian: spectrum of the exact Hessian of H_N.
/// Pass when every reported minimum is >= -1e-8 * cfg.scale().
StabilityReport stability_check(const Configuration& cfg, const ProblemSpec& spec,
                                StabilityVariant variant);

/// Limit stability quadratic form
/// integral of (phi(x) - phi(y))^T (D2g + D2F)(x - y) (phi(x) - phi(y))
/// over mu x mu, diagonal excluded. For the Coulomb part the kernel is the
/// bounded expression -|dphi|^2/|X|^2 + 2 (dphi . X)^2 / |X|^4, set to zero
/// on the diagonal. Dimension 2; the continuum input must be nonnegative.
double limit_stability_form(const Configuration& cfg, const ProblemSpec& spec,
                            const TestField& phi);
double limit_stability_form(const GriddedMeasure& mu, const ProblemSpec& spec,
                            const TestField& phi);

}  // namespace equilib
