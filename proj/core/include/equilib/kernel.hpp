#pragma once

#include <Eigen/Dense>

namespace equilib {

/// Spatial dimension. The Coulomb kernel branches at d = 2 (logarithmic vs
/// power law); d = 1 is admitted only for the log kernel itself, everything
/// downstream requires d >= 2.
class Dimension {
 public:
  explicit Dimension(int d);
  int value() const { return d_; }

 private:
  int d_;
};

/// g(x) = -log|x| for d in {1,2},  |x|^{2-d} for d >= 3.
/// Throws std::domain_error at x = 0 (kernel singularity).
double coulomb_g(const Eigen::VectorXd& x, Dimension dim);

/// Analytic gradient of g: -x/|x|^2 (d = 2), -(d-2) x/|x|^d (d >= 3).
Eigen::VectorXd coulomb_grad(const Eigen::VectorXd& x, Dimension dim);

/// Analytic Hessian of g. Symmetric, trace-free off the origin for d = 2.
Eigen::MatrixXd coulomb_hess(const Eigen::VectorXd& x, Dimension dim);

/// c_d with -Laplacian(g) = c_d delta_0: 2*pi for d = 2,
/// (d-2) * area(S^{d-1}) for d >= 3. Requires d >= 2.
double coulomb_constant(Dimension dim);

/// Surface area of the unit sphere S^{d-1} in R^d.
double unit_sphere_area(int d);

}  // namespace equilib
