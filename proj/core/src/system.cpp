#include "equilib/system.hpp"

#include <cmath>
#include <stdexcept>

#include "equilib/summation.hpp"

namespace equilib {

namespace {

// Ordered pair list (i < j); shared by every O(N^2) loop so the deterministic
// reduction tree is identical across call sites.
std::size_t pair_count(int n) {
  return static_cast<std::size_t>(n) * static_cast<std::size_t>(n - 1) / 2;
}

template <typename F>
void for_each_pair(int n, F&& body) {
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) body(i, j);
  }
}

}  // namespace

double hamiltonian(const Configuration& cfg, const ProblemSpec& spec) {
  const int n = cfg.size();
  std::vector<double> terms;
  terms.reserve(pair_count(n) + static_cast<std::size_t>(n));
  for_each_pair(n, [&](int i, int j) {
    const Eigen::VectorXd diff = cfg.position(i) - cfg.position(j);
    double pair = coulomb_g(diff, spec.dim);
    if (!spec.interaction.is_zero()) pair += spec.interaction.value(diff);
    terms.push_back(cfg.charge(i) * cfg.charge(j) * pair / cfg.charge_mass());
  });
  for (int i = 0; i < n; ++i) {
    terms.push_back(cfg.charge(i) * spec.potential.value(cfg.position(i)));
  }
  return pairwise_reduce(terms);
}

std::vector<Eigen::VectorXd> residuals(const Configuration& cfg,
                                       const ProblemSpec& spec) {
  const int n = cfg.size();
  const int d = cfg.dim();
  const double inv_mass = 1.0 / cfg.charge_mass();
  std::vector<std::vector<Eigen::VectorXd>> terms(
      static_cast<std::size_t>(n));
  for (auto& t : terms) t.reserve(static_cast<std::size_t>(n));
  for_each_pair(n, [&](int i, int j) {
    const Eigen::VectorXd diff = cfg.position(i) - cfg.position(j);
    Eigen::VectorXd force = coulomb_grad(diff, spec.dim);
    if (!spec.interaction.is_zero()) force += spec.interaction.gradient(diff);
    terms[static_cast<std::size_t>(i)].push_back(inv_mass * cfg.charge(j) * force);
    terms[static_cast<std::size_t>(j)].push_back(-inv_mass * cfg.charge(i) * force);
  });
  std::vector<Eigen::VectorXd> out(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    auto& t = terms[static_cast<std::size_t>(i)];
    Eigen::VectorXd sum = t.empty() ? Eigen::VectorXd::Zero(d).eval()
                                    : pairwise_reduce(t);
    out[static_cast<std::size_t>(i)] = sum + spec.potential.gradient(cfg.position(i));
  }
  return out;
}

double max_residual_norm(const Configuration& cfg, const ProblemSpec& spec) {
  double m = 0.0;
  for (const auto& r : residuals(cfg, spec)) m = std::max(m, r.norm());
  return m;
}

Eigen::VectorXd hamiltonian_grad(const Configuration& cfg, const ProblemSpec& spec) {
  const auto r = residuals(cfg, spec);
  const int d = cfg.dim();
  Eigen::VectorXd grad(cfg.size() * d);
  for (int i = 0; i < cfg.size(); ++i) {
    grad.segment(i * d, d) = cfg.charge(i) * r[static_cast<std::size_t>(i)];
  }
  return grad;
}

Eigen::MatrixXd hamiltonian_hess(const Configuration& cfg, const ProblemSpec& spec) {
  const int n = cfg.size();
  const int d = cfg.dim();
  const double inv_mass = 1.0 / cfg.charge_mass();
  Eigen::MatrixXd hess = Eigen::MatrixXd::Zero(n * d, n * d);
  for_each_pair(n, [&](int i, int j) {
    const Eigen::VectorXd diff = cfg.position(i) - cfg.position(j);
    Eigen::MatrixXd block = coulomb_hess(diff, spec.dim);
    if (!spec.interaction.is_zero()) block += spec.interaction.hessian(diff);
    block *= inv_mass * cfg.charge(i) * cfg.charge(j);
    hess.block(i * d, j * d, d, d) = -block;
    hess.block(j * d, i * d, d, d) = -block;
    hess.block(i * d, i * d, d, d) += block;
    hess.block(j * d, j * d, d, d) += block;
  });
  for (int i = 0; i < n; ++i) {
    hess.block(i * d, i * d, d, d) +=
        cfg.charge(i) * spec.potential.hessian(cfg.position(i));
  }
  return hess;
}

double boundedness_statistic(const Configuration& cfg, const ProblemSpec& spec) {
  const int n = cfg.size();
  const double mass = cfg.charge_mass();
  std::vector<double> terms;
  terms.reserve(pair_count(n) + static_cast<std::size_t>(n));
  for_each_pair(n, [&](int i, int j) {
    const Eigen::VectorXd diff = cfg.position(i) - cfg.position(j);
    double pair = coulomb_g(diff, spec.dim);
    if (!spec.interaction.is_zero()) pair += std::abs(spec.interaction.value(diff));
    terms.push_back(std::abs(cfg.charge(i)) * std::abs(cfg.charge(j)) * pair /
                    (mass * mass));
  });
  for (int i = 0; i < n; ++i) {
    terms.push_back(std::abs(cfg.charge(i)) * spec.potential.value(cfg.position(i)) /
                    mass);
  }
  return pairwise_reduce(terms);
}

FieldEvaluator::FieldEvaluator(const Configuration& cfg, const ProblemSpec& spec,
                               double guard_radius)
    : cfg_(cfg), spec_(spec), guard_(guard_radius) {
  if (guard_ < 0.0) guard_ = 1e-9 * cfg_.scale();
  const int n = cfg_.size();
  const int d = cfg_.dim();
  forces_ = Eigen::MatrixXd::Zero(d, n);
  for (int k = 0; k < n; ++k) {
    Eigen::VectorXd f = spec_.potential.gradient(cfg_.position(k));
    if (!spec_.interaction.is_zero()) {
      // (grad F * mu_N)(x_k); the l = k term vanishes since grad F(0) = 0.
      for (int l = 0; l < n; ++l) {
        if (l == k) continue;
        f += cfg_.weight(l) *
             spec_.interaction.gradient(cfg_.position(k) - cfg_.position(l));
      }
    }
    forces_.col(k) = f;
  }
}

double FieldEvaluator::particle_distance(const Eigen::VectorXd& x) const {
  double dist = std::numeric_limits<double>::infinity();
  for (int k = 0; k < cfg_.size(); ++k) {
    dist = std::min(dist, (x - cfg_.position(k)).norm());
  }
  return dist;
}

FieldSample FieldEvaluator::operator()(const Eigen::VectorXd& x) const {
  if (particle_distance(x) <= guard_) {
    throw std::domain_error("field_eval: point inside guard radius of a particle");
  }
  const int n = cfg_.size();
  const int d = cfg_.dim();
  FieldSample s;
  s.point = x;
  std::vector<double> h_terms;
  h_terms.reserve(static_cast<std::size_t>(n));
  std::vector<Eigen::VectorXd> g_terms;
  g_terms.reserve(static_cast<std::size_t>(n));
  std::vector<Eigen::MatrixXd> r_terms;
  r_terms.reserve(static_cast<std::size_t>(n));
  for (int k = 0; k < n; ++k) {
    const Eigen::VectorXd diff = x - cfg_.position(k);
    const double w = cfg_.weight(k);
    h_terms.push_back(w * coulomb_g(diff, spec_.dim));
    const Eigen::VectorXd gk = coulomb_grad(diff, spec_.dim);
    g_terms.push_back(w * gk);
    // (R_N)_{ij} = -2 (g_j * [mu_N (F_i * mu_N + V_i)]);
    // row index i is the force component, column j the kernel derivative.
    r_terms.push_back(-2.0 * w * (forces_.col(k) * gk.transpose()));
  }
  s.h = pairwise_reduce(h_terms);
  s.grad_h = pairwise_reduce(g_terms);
  s.remainder = pairwise_reduce(r_terms);
  s.stress = 2.0 * (s.grad_h * s.grad_h.transpose()) -
             s.grad_h.squaredNorm() * Eigen::MatrixXd::Identity(d, d);
  return s;
}

FieldSample field_eval(const Configuration& cfg, const ProblemSpec& spec,
                       const Eigen::VectorXd& x, double guard_radius) {
  return FieldEvaluator(cfg, spec, guard_radius)(x);
}

}  // namespace equilib
