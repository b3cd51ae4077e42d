#pragma once

#include <string>
#include <vector>

#include <Eigen/Dense>
#include <nlohmann/json.hpp>

namespace equilib {

/// value/gradient/Hessian/Laplacian of a confinement at one point.
struct PotentialEval {
  double value = 0.0;
  Eigen::VectorXd gradient;
  Eigen::MatrixXd hessian;
  double laplacian = 0.0;
};

/// value/gradient/Hessian of an interaction at one point.
struct InteractionEval {
  double value = 0.0;
  Eigen::VectorXd gradient;
  Eigen::MatrixXd hessian;
};

/// Confinement V. Constructible variants:
///   zero
///   quadratic(omega):        V = omega |x|^2
///   linear(a1, a2):          V = -a2 x1 + a1 x2   (uniformly translating frame)
///   polynomial(c):           V = sum_k c[k] |x|^{2k}
///   gaussian_well(depth, w): V = -depth exp(-|x|^2 / (2 w^2))
class PotentialSpec {
 public:
  static PotentialSpec zero();
  static PotentialSpec quadratic(double omega);
  static PotentialSpec linear(double alpha1, double alpha2);
  static PotentialSpec polynomial(std::vector<double> radial_coefficients);
  static PotentialSpec gaussian_well(double depth, double width);

  PotentialEval eval(const Eigen::VectorXd& x) const;
  double value(const Eigen::VectorXd& x) const { return eval(x).value; }
  Eigen::VectorXd gradient(const Eigen::VectorXd& x) const { return eval(x).gradient; }
  Eigen::MatrixXd hessian(const Eigen::VectorXd& x) const { return eval(x).hessian; }

  bool is_zero() const;
  const std::string& variant() const { return variant_; }
  /// omega of the quadratic variant; throws for other variants.
  double quadratic_omega() const;
  nlohmann::json to_json() const;
  static PotentialSpec from_json(const nlohmann::json& j);

 private:
  PotentialSpec() = default;
  std::string variant_ = "zero";
  std::vector<double> params_;
};

/// Interaction F. Every variant is a radial profile in |x|^2, so F(x) = F(-x)
/// holds structurally and grad F(0) = 0.
///   zero
///   gaussian(beta, sigma):  F = beta exp(-|x|^2 / sigma^2)
///   even_polynomial(c):     F = sum_k c[k] |x|^{2k}
class InteractionSpec {
 public:
  static InteractionSpec zero();
  static InteractionSpec gaussian(double beta, double sigma);
  static InteractionSpec even_polynomial(std::vector<double> radial_coefficients);

  InteractionEval eval(const Eigen::VectorXd& x) const;
  double value(const Eigen::VectorXd& x) const { return eval(x).value; }
  Eigen::VectorXd gradient(const Eigen::VectorXd& x) const { return eval(x).gradient; }
  Eigen::MatrixXd hessian(const Eigen::VectorXd& x) const { return eval(x).hessian; }

  bool is_zero() const;
  const std::string& variant() const { return variant_; }
  nlohmann::json to_json() const;
  static InteractionSpec from_json(const nlohmann::json& j);

 private:
  InteractionSpec() = default;
  std::string variant_ = "zero";
  std::vector<double> params_;
};

}  // namespace equilib
