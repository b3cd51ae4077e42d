#pragma once

#include <vector>

#include <Eigen/Dense>

#include "equilib/configuration.hpp"
#include "equilib/kernel.hpp"
#include "equilib/potentials.hpp"

namespace equilib {

/// The problem data: dimension, interaction F and confinement V.
struct ProblemSpec {
  Dimension dim{2};
  InteractionSpec interaction = InteractionSpec::zero();
  PotentialSpec potential = PotentialSpec::zero();
};

/// H_N(x) = (1/(2 M_N)) sum_i sum_{j != i} d_i d_j (g+F)(x_i - x_j)
///          + sum_i d_i V(x_i).
double hamiltonian(const Configuration& cfg, const ProblemSpec& spec);

/// Equilibrium residuals r_i = (1/M_N) sum_{j != i} d_j (grad g + grad F)(x_i - x_j)
/// + grad V(x_i). The configuration is critical iff every r_i vanishes.
std::vector<Eigen::VectorXd> residuals(const Configuration& cfg,
                                       const ProblemSpec& spec);

/// max_i |r_i|.
double max_residual_norm(const Configuration& cfg, const ProblemSpec& spec);

/// Flat gradient of H_N (length N*d); block i equals d_i * r_i.
Eigen::VectorXd hamiltonian_grad(const Configuration& cfg, const ProblemSpec& spec);

/// Exact (N*d) x (N*d) Hessian of H_N.
Eigen::MatrixXd hamiltonian_hess(const Configuration& cfg, const ProblemSpec& spec);

/// Tightness statistic
/// (1/(2 M_N^2)) sum_{i != j} |d_i||d_j| (g + |F|)(x_i - x_j)
/// + (1/M_N) sum_i |d_i| V(x_i).
double boundedness_statistic(const Configuration& cfg, const ProblemSpec& spec);

/// Field data at one off-particle point.
struct FieldSample {
  Eigen::VectorXd point;
  double h = 0.0;               // electric potential h_N
  Eigen::VectorXd grad_h;       // grad h_N
  Eigen::MatrixXd stress;       // 2 X (x) X - |X|^2 Id with X = grad h_N
  Eigen::MatrixXd remainder;    // regular part R_N
};

/// Evaluates h_N, its gradient, the stress tensor and the regular part R_N at
/// points away from the particles. The per-particle force data entering R_N
/// is precomputed once, so repeated evaluations (quadrature loops) are cheap.
class FieldEvaluator {
 public:
  /// guard_radius < 0 selects the default 1e-9 * cfg.scale().
  FieldEvaluator(const Configuration& cfg, const ProblemSpec& spec,
                 double guard_radius = -1.0);

  FieldSample operator()(const Eigen::VectorXd& x) const;
  double guard_radius() const { return guard_; }
  /// Distance from x to the nearest particle.
  double particle_distance(const Eigen::VectorXd& x) const;

  const Configuration& configuration() const { return cfg_; }

 private:
  Configuration cfg_;
  ProblemSpec spec_;
  double guard_;
  Eigen::MatrixXd forces_;  // column k: (grad F * mu_N)(x_k) + grad V(x_k)
};

/// One-off field evaluation.
FieldSample field_eval(const Configuration& cfg, const ProblemSpec& spec,
                       const Eigen::VectorXd& x, double guard_radius = -1.0);

}  // namespace equilib
