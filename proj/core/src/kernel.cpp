#include "equilib/kernel.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace equilib {

Dimension::Dimension(int d) : d_(d) {
  if (d < 1) throw std::invalid_argument("Dimension: d must be >= 1");
}

namespace {

void check_nonzero(const Eigen::VectorXd& x) {
  if (x.squaredNorm() == 0.0) {
    throw std::domain_error("coulomb kernel: kernel singularity at x = 0");
  }
}

}  // namespace

double coulomb_g(const Eigen::VectorXd& x, Dimension dim) {
  check_nonzero(x);
  const double r = x.norm();
  if (dim.value() <= 2) return -std::log(r);
  return std::pow(r, 2.0 - dim.value());
}

Eigen::VectorXd coulomb_grad(const Eigen::VectorXd& x, Dimension dim) {
  check_nonzero(x);
  const int d = dim.value();
  const double r2 = x.squaredNorm();
  if (d <= 2) return -x / r2;
  return -(d - 2) * x * std::pow(r2, -0.5 * d);
}

Eigen::MatrixXd coulomb_hess(const Eigen::VectorXd& x, Dimension dim) {
  check_nonzero(x);
  const int d = dim.value();
  const int n = static_cast<int>(x.size());
  const double r2 = x.squaredNorm();
  Eigen::MatrixXd id = Eigen::MatrixXd::Identity(n, n);
  if (d <= 2) {
    // D^2(-log r) = -I/r^2 + 2 x x^T / r^4
    return -id / r2 + 2.0 * (x * x.transpose()) / (r2 * r2);
  }
  // D^2(r^{2-d}) = -(d-2) [ I/r^d - d x x^T / r^{d+2} ]
  const double rmd = std::pow(r2, -0.5 * d);
  return -(d - 2) * (id * rmd - d * (x * x.transpose()) * rmd / r2);
}

double unit_sphere_area(int d) {
  // area(S^{d-1}) = 2 pi^{d/2} / Gamma(d/2)
  return 2.0 * std::pow(std::numbers::pi, 0.5 * d) / std::tgamma(0.5 * d);
}

double coulomb_constant(Dimension dim) {
  const int d = dim.value();
  if (d < 2) throw std::domain_error("coulomb_constant: requires d >= 2");
  if (d == 2) return 2.0 * std::numbers::pi;
  return (d - 2) * unit_sphere_area(d);
}

}  // namespace equilib
