#include "equilib/diagnostics.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

#include "equilib/quadrature.hpp"
#include "equilib/summation.hpp"

namespace equilib {

nlohmann::json FluxResult::to_json() const {
  return {{"computed", std::vector<double>(computed.data(), computed.data() + computed.size())},
          {"expected", std::vector<double>(expected.data(), expected.data() + expected.size())},
          {"delta", delta_used},
          {"nodes", nodes}};
}

Eigen::VectorXd flux_integral(const FieldEvaluator& field,
                              const Eigen::VectorXd& center, double radius,
                              int nodes) {
  if (field.configuration().dim() != 2) {
    throw std::domain_error("flux_integral: circle contours require d = 2");
  }
  if (nodes < 16) throw std::invalid_argument("flux_integral: nodes must be >= 16");
  if (radius <= 0.0) throw std::invalid_argument("flux_integral: radius must be > 0");
  // every quadrature node must be clear of the particles
  const Configuration& cfg = field.configuration();
  for (int k = 0; k < cfg.size(); ++k) {
    const double circle_dist =
        std::abs((cfg.position(k) - center).norm() - radius);
    if (circle_dist <= field.guard_radius()) {
      throw std::domain_error("flux_integral: contour too close to particle " +
                              std::to_string(k));
    }
  }
  std::vector<Eigen::Vector2d> terms;
  terms.reserve(static_cast<std::size_t>(nodes));
  for (int k = 0; k < nodes; ++k) {
    const double theta = 2.0 * std::numbers::pi * k / nodes;
    const Eigen::Vector2d nu(std::cos(theta), std::sin(theta));
    const Eigen::Vector2d x = center + radius * nu;
    const FieldSample s = field(x);
    terms.push_back((s.remainder - s.stress) * nu);
  }
  const Eigen::Vector2d total = pairwise_reduce(terms);
  return (2.0 * std::numbers::pi * radius / nodes) * total;
}

Eigen::VectorXd flux_integral(const Configuration& cfg, const ProblemSpec& spec,
                              const Eigen::VectorXd& center, double radius,
                              int nodes) {
  return flux_integral(FieldEvaluator(cfg, spec), center, radius, nodes);
}

Eigen::VectorXd flux_expected(const Configuration& cfg, const ProblemSpec& spec,
                              int i) {
  if (i < 0 || i >= cfg.size()) {
    throw std::invalid_argument("flux_expected: particle index out of range");
  }
  const double cd = coulomb_constant(spec.dim);
  return (2.0 * cd * cfg.charge(i) / cfg.charge_mass()) *
         residuals(cfg, spec)[static_cast<std::size_t>(i)];
}

Eigen::VectorXd divergence_probe(const Configuration& cfg, const ProblemSpec& spec,
                                 const Eigen::VectorXd& x, double step) {
  if (step <= 0.0) throw std::invalid_argument("divergence_probe: step must be > 0");
  FieldEvaluator field(cfg, spec);
  if (field.particle_distance(x) <= 10.0 * step) {
    throw std::domain_error("divergence_probe: point within 10 steps of a particle");
  }
  const int d = cfg.dim();
  Eigen::VectorXd div = Eigen::VectorXd::Zero(d);
  for (int j = 0; j < d; ++j) {
    Eigen::VectorXd xp = x, xm = x;
    xp[j] += step;
    xm[j] -= step;
    const FieldSample sp = field(xp);
    const FieldSample sm = field(xm);
    const Eigen::MatrixXd tp = sp.remainder - sp.stress;
    const Eigen::MatrixXd tm = sm.remainder - sm.stress;
    div += (tp.col(j) - tm.col(j)) / (2.0 * step);
  }
  return div;
}

namespace {

// G_1 = int_0^1 d1 phi1, G_2 = int_0^1 d2 phi2, G_3 = int_0^1 (d1 phi2 + d2 phi1)
// along the segment s x + (1-s) y.
Eigen::Vector3d segment_integrals(const Eigen::Vector2d& x, const Eigen::Vector2d& y,
                                  const TestField& phi, int order) {
  const GaussLegendreRule rule = gauss_legendre(order);
  Eigen::Vector3d total = Eigen::Vector3d::Zero();
  for (int k = 0; k < order; ++k) {
    const double s = rule.nodes[static_cast<std::size_t>(k)];
    const Eigen::Matrix2d jac = phi.jacobian(s * x + (1.0 - s) * y);
    total += rule.weights[static_cast<std::size_t>(k)] *
             Eigen::Vector3d(jac(0, 0), jac(1, 1), jac(1, 0) + jac(0, 1));
  }
  return total;
}

}  // namespace

FactorizationSplit factorization_split(const Eigen::Vector2d& x,
                                       const Eigen::Vector2d& y,
                                       const TestField& phi) {
  const Eigen::Vector2d diff = x - y;
  const double r2 = diff.squaredNorm();
  if (r2 == 0.0) throw std::domain_error("factorization_split: x = y");

  FactorizationSplit out;
  out.lhs = (-diff / r2).dot(phi.value(x) - phi.value(y));

  const Eigen::Vector3d q(-diff[0] * diff[0] / r2, -diff[1] * diff[1] / r2,
                          -diff[0] * diff[1] / r2);
  int order = 32;
  Eigen::Vector3d g = segment_integrals(x, y, phi, order);
  for (; order <= 1 << 14;) {
    const Eigen::Vector3d refined = segment_integrals(x, y, phi, 2 * order);
    order *= 2;
    const bool settled = (refined - g).cwiseAbs().maxCoeff() <= 1e-12;
    g = refined;
    if (settled) break;
  }
  out.quadrature_order = order;
  out.rhs = q.dot(g);
  return out;
}

double vorticity_residual(const Configuration& cfg, const ProblemSpec& spec,
                          const TestField& phi) {
  if (cfg.dim() != 2) {
    throw std::domain_error("vorticity_residual: requires d = 2");
  }
  const int n = cfg.size();
  std::vector<double> terms;
  terms.reserve(static_cast<std::size_t>(n) * (static_cast<std::size_t>(n) + 1) / 2);
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      const Eigen::Vector2d diff = cfg.position(i) - cfg.position(j);
      Eigen::Vector2d force = coulomb_grad(diff, spec.dim);
      if (!spec.interaction.is_zero()) force += spec.interaction.gradient(diff);
      // (1/2) sum_{i != j} collapses to the unordered-pair sum by symmetry
      terms.push_back(cfg.weight(i) * cfg.weight(j) *
                      force.dot(phi.value(cfg.position(i)) -
                                phi.value(cfg.position(j))));
    }
  }
  for (int i = 0; i < n; ++i) {
    terms.push_back(cfg.weight(i) *
                    spec.potential.gradient(cfg.position(i))
                        .dot(phi.value(cfg.position(i))));
  }
  return pairwise_reduce(terms);
}

std::string to_string(StabilityVariant v) {
  switch (v) {
    case StabilityVariant::literal: return "literal";
    case StabilityVariant::grouped: return "grouped";
    case StabilityVariant::full_hessian: return "full_hessian";
  }
  return "unknown";
}

nlohmann::json StabilityReport::to_json() const {
  return {{"variant", to_string(variant)},
          {"site_min_eigenvalues", site_min_eigenvalues},
          {"pair_min_eigenvalues", pair_min_eigenvalues},
          {"hessian_eigenvalues", hessian_eigenvalues},
          {"min_eigenvalue", min_eigenvalue},
          {"tolerance", tolerance},
          {"pass", pass}};
}

StabilityReport stability_check(const Configuration& cfg, const ProblemSpec& spec,
                                StabilityVariant variant) {
  StabilityReport report;
  report.variant = variant;
  report.tolerance = -1e-8 * cfg.scale();
  const int n = cfg.size();
  double min_eig = std::numeric_limits<double>::infinity();

  if (variant == StabilityVariant::full_hessian) {
    const Eigen::MatrixXd hess = hamiltonian_hess(cfg, spec);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(hess, Eigen::EigenvaluesOnly);
    const auto& ev = es.eigenvalues();
    report.hessian_eigenvalues.assign(ev.data(), ev.data() + ev.size());
    min_eig = ev.minCoeff();
  } else {
    for (int i = 0; i < n; ++i) {
      Eigen::MatrixXd site = cfg.charge(i) * spec.potential.hessian(cfg.position(i));
      for (int j = 0; j < n; ++j) {
        if (j == i) continue;
        const Eigen::VectorXd diff = cfg.position(i) - cfg.position(j);
        Eigen::MatrixXd pair_kernel = coulomb_hess(diff, spec.dim);
        if (!spec.interaction.is_zero()) pair_kernel += spec.interaction.hessian(diff);
        site += cfg.charge(i) * cfg.charge(j) * pair_kernel;
      }
      Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(site, Eigen::EigenvaluesOnly);
      report.site_min_eigenvalues.push_back(es.eigenvalues().minCoeff());
      min_eig = std::min(min_eig, es.eigenvalues().minCoeff());
    }
    for (int i = 0; i < n; ++i) {
      for (int j = i + 1; j < n; ++j) {
        const Eigen::VectorXd diff = cfg.position(i) - cfg.position(j);
        Eigen::MatrixXd pair;
        if (variant == StabilityVariant::literal) {
          pair = cfg.charge(i) * cfg.charge(j) * coulomb_hess(diff, spec.dim);
          if (!spec.interaction.is_zero()) pair += spec.interaction.hessian(diff);
        } else {
          pair = coulomb_hess(diff, spec.dim);
          if (!spec.interaction.is_zero()) pair += spec.interaction.hessian(diff);
          pair *= cfg.charge(i) * cfg.charge(j);
        }
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(pair, Eigen::EigenvaluesOnly);
        report.pair_min_eigenvalues.push_back(es.eigenvalues().minCoeff());
        min_eig = std::min(min_eig, es.eigenvalues().minCoeff());
      }
    }
  }

  report.min_eigenvalue = min_eig;
  report.pass = min_eig >= report.tolerance;
  return report;
}

namespace {

// (dphi)^T D^2 g(X) dphi in the bounded 2D form, plus the F part.
double stability_kernel(const Eigen::Vector2d& diff, const Eigen::Vector2d& dphi,
                        const ProblemSpec& spec) {
  const double r2 = diff.squaredNorm();
  const double dot = dphi.dot(diff);
  double out = -dphi.squaredNorm() / r2 + 2.0 * dot * dot / (r2 * r2);
  if (!spec.interaction.is_zero()) {
    out += dphi.dot(spec.interaction.hessian(diff) * dphi);
  }
  return out;
}

}  // namespace

double limit_stability_form(const Configuration& cfg, const ProblemSpec& spec,
                            const TestField& phi) {
  if (cfg.dim() != 2) {
    throw std::domain_error("limit_stability_form: requires d = 2");
  }
  const int n = cfg.size();
  std::vector<Eigen::Vector2d> values(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) values[static_cast<std::size_t>(i)] = phi.value(cfg.position(i));
  std::vector<double> terms;
  terms.reserve(static_cast<std::size_t>(n) * static_cast<std::size_t>(n) / 2);
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      const Eigen::Vector2d diff = cfg.position(i) - cfg.position(j);
      const Eigen::Vector2d dphi =
          values[static_cast<std::size_t>(i)] - values[static_cast<std::size_t>(j)];
      // full i != j sum = twice the unordered-pair sum
      terms.push_back(2.0 * cfg.weight(i) * cfg.weight(j) *
                      stability_kernel(diff, dphi, spec));
    }
  }
  return pairwise_reduce(terms);
}

double limit_stability_form(const GriddedMeasure& mu, const ProblemSpec& spec,
                            const TestField& phi) {
  if (spec.dim.value() != 2) {
    throw std::domain_error("limit_stability_form: requires d = 2");
  }
  if (!mu.is_nonnegative()) {
    throw std::invalid_argument("limit_stability_form: measure must be nonnegative");
  }
  const auto cells = mu.support_cells();
  const std::size_t m = cells.size();
  std::vector<Eigen::Vector2d> values(m);
  for (std::size_t c = 0; c < m; ++c) values[c] = phi.value(cells[c].center);
  double sum = 0.0, comp = 0.0;
  for (std::size_t c = 0; c < m; ++c) {
    for (std::size_t cp = c + 1; cp < m; ++cp) {
      const double term =
          2.0 * cells[c].mass * cells[cp].mass *
          stability_kernel(cells[c].center - cells[cp].center,
                           values[c] - values[cp], spec);
      const double y = term - comp;
      const double t = sum + y;
      comp = (t - sum) - y;
      sum = t;
    }
  }
  return sum;
}

}  // namespace equilib
