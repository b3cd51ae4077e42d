#include "equilib/potentials.hpp"

#include <cmath>
#include <stdexcept>

namespace equilib {

namespace {

struct RadialDerivs {
  double f = 0.0;    // f(s) at s = |x|^2
  double fp = 0.0;   // f'(s)
  double fpp = 0.0;  // f''(s)
};

// Chain rule for W(x) = f(|x|^2):
//   grad W = 2 f' x,  D^2 W = 2 f' I + 4 f'' x x^T,  Lap W = 2 d f' + 4 s f''
PotentialEval radial_eval(const RadialDerivs& r, const Eigen::VectorXd& x) {
  const int d = static_cast<int>(x.size());
  const double s = x.squaredNorm();
  PotentialEval out;
  out.value = r.f;
  out.gradient = 2.0 * r.fp * x;
  out.hessian = 2.0 * r.fp * Eigen::MatrixXd::Identity(d, d) +
                4.0 * r.fpp * (x * x.transpose());
  out.laplacian = 2.0 * d * r.fp + 4.0 * s * r.fpp;
  return out;
}

RadialDerivs poly_in_s(const std::vector<double>& c, double s) {
  RadialDerivs r;
  for (int k = static_cast<int>(c.size()) - 1; k >= 0; --k) {
    r.fpp = r.fpp * s + r.fp * 2.0;  // d/ds of fp accumulated via Horner
    r.fp = r.fp * s + r.f;
    r.f = r.f * s + c[static_cast<std::size_t>(k)];
  }
  return r;
}

PotentialEval zero_eval(const Eigen::VectorXd& x) {
  const int d = static_cast<int>(x.size());
  PotentialEval out;
  out.gradient = Eigen::VectorXd::Zero(d);
  out.hessian = Eigen::MatrixXd::Zero(d, d);
  return out;
}

}  // namespace

PotentialSpec PotentialSpec::zero() { return PotentialSpec(); }

PotentialSpec PotentialSpec::quadratic(double omega) {
  PotentialSpec p;
  p.variant_ = "quadratic";
  p.params_ = {omega};
  return p;
}

PotentialSpec PotentialSpec::linear(double alpha1, double alpha2) {
  PotentialSpec p;
  p.variant_ = "linear";
  p.params_ = {alpha1, alpha2};
  return p;
}

PotentialSpec PotentialSpec::polynomial(std::vector<double> radial_coefficients) {
  PotentialSpec p;
  p.variant_ = "polynomial";
  p.params_ = std::move(radial_coefficients);
  return p;
}

PotentialSpec PotentialSpec::gaussian_well(double depth, double width) {
  if (width <= 0.0) throw std::invalid_argument("gaussian_well: width must be > 0");
  PotentialSpec p;
  p.variant_ = "gaussian_well";
  p.params_ = {depth, width};
  return p;
}

bool PotentialSpec::is_zero() const { return variant_ == "zero"; }

double PotentialSpec::quadratic_omega() const {
  if (variant_ != "quadratic") {
    throw std::logic_error("quadratic_omega: potential variant is " + variant_);
  }
  return params_[0];
}

PotentialEval PotentialSpec::eval(const Eigen::VectorXd& x) const {
  const double s = x.squaredNorm();
  if (variant_ == "zero") return zero_eval(x);
  if (variant_ == "quadratic") {
    return radial_eval({params_[0] * s, params_[0], 0.0}, x);
  }
  if (variant_ == "polynomial") {
    return radial_eval(poly_in_s(params_, s), x);
  }
  if (variant_ == "gaussian_well") {
    const double depth = params_[0];
    const double w2 = params_[1] * params_[1];
    const double e = -depth * std::exp(-s / (2.0 * w2));
    return radial_eval({e, -e / (2.0 * w2), e / (4.0 * w2 * w2)}, x);
  }
  // linear: V = -a2 x1 + a1 x2, defined on the first two coordinates
  if (x.size() < 2) throw std::domain_error("linear potential: requires d >= 2");
  PotentialEval out = zero_eval(x);
  out.value = -params_[1] * x[0] + params_[0] * x[1];
  out.gradient[0] = -params_[1];
  out.gradient[1] = params_[0];
  return out;
}

InteractionSpec InteractionSpec::zero() { return InteractionSpec(); }

InteractionSpec InteractionSpec::gaussian(double beta, double sigma) {
  if (sigma <= 0.0) throw std::invalid_argument("gaussian interaction: sigma must be > 0");
  InteractionSpec f;
  f.variant_ = "gaussian";
  f.params_ = {beta, sigma};
  return f;
}

InteractionSpec InteractionSpec::even_polynomial(std::vector<double> radial_coefficients) {
  InteractionSpec f;
  f.variant_ = "even_polynomial";
  f.params_ = std::move(radial_coefficients);
  return f;
}

bool InteractionSpec::is_zero() const { return variant_ == "zero"; }

InteractionEval InteractionSpec::eval(const Eigen::VectorXd& x) const {
  const double s = x.squaredNorm();
  PotentialEval e;
  if (variant_ == "zero") {
    e = zero_eval(x);
  } else if (variant_ == "gaussian") {
    const double s2 = params_[1] * params_[1];
    const double v = params_[0] * std::exp(-s / s2);
    e = radial_eval({v, -v / s2, v / (s2 * s2)}, x);
  } else {
    e = radial_eval(poly_in_s(params_, s), x);
  }
  return {e.value, std::move(e.gradient), std::move(e.hessian)};
}

namespace {

void check_keys(const nlohmann::json& j, std::initializer_list<const char*> allowed) {
  for (const auto& item : j.items()) {
    bool ok = false;
    for (const char* k : allowed) {
      if (item.key() == k) { ok = true; break; }
    }
    if (!ok) {
      throw std::invalid_argument("unknown key \"" + item.key() + "\" in spec object");
    }
  }
}

}  // namespace

nlohmann::json PotentialSpec::to_json() const {
  nlohmann::json j{{"variant", variant_}};
  if (variant_ == "quadratic") j["omega"] = params_[0];
  if (variant_ == "linear") { j["alpha1"] = params_[0]; j["alpha2"] = params_[1]; }
  if (variant_ == "polynomial") j["coefficients"] = params_;
  if (variant_ == "gaussian_well") { j["depth"] = params_[0]; j["width"] = params_[1]; }
  return j;
}

PotentialSpec PotentialSpec::from_json(const nlohmann::json& j) {
  const std::string v = j.at("variant").get<std::string>();
  if (v == "zero") { check_keys(j, {"variant"}); return zero(); }
  if (v == "quadratic") {
    check_keys(j, {"variant", "omega"});
    return quadratic(j.at("omega").get<double>());
  }
  if (v == "linear") {
    check_keys(j, {"variant", "alpha1", "alpha2"});
    return linear(j.at("alpha1").get<double>(), j.at("alpha2").get<double>());
  }
  if (v == "polynomial") {
    check_keys(j, {"variant", "coefficients"});
    return polynomial(j.at("coefficients").get<std::vector<double>>());
  }
  if (v == "gaussian_well") {
    check_keys(j, {"variant", "depth", "width"});
    return gaussian_well(j.at("depth").get<double>(), j.at("width").get<double>());
  }
  throw std::invalid_argument("unknown potential variant \"" + v + "\"");
}

nlohmann::json InteractionSpec::to_json() const {
  nlohmann::json j{{"variant", variant_}};
  if (variant_ == "gaussian") { j["beta"] = params_[0]; j["sigma"] = params_[1]; }
  if (variant_ == "even_polynomial") j["coefficients"] = params_;
  return j;
}

InteractionSpec InteractionSpec::from_json(const nlohmann::json& j) {
  const std::string v = j.at("variant").get<std::string>();
  if (v == "zero") { check_keys(j, {"variant"}); return zero(); }
  if (v == "gaussian") {
    check_keys(j, {"variant", "beta", "sigma"});
    return gaussian(j.at("beta").get<double>(), j.at("sigma").get<double>());
  }
  if (v == "even_polynomial") {
    check_keys(j, {"variant", "coefficients"});
    return even_polynomial(j.at("coefficients").get<std::vector<double>>());
  }
  throw std::invalid_argument("unknown interaction variant \"" + v + "\"");
}

}  // namespace equilib
