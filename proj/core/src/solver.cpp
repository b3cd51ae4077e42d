#include "equilib/solver.hpp"

#include <cmath>
#include <numbers>
#include <random>
#include <stdexcept>

namespace equilib {

std::string to_string(SolveStatus s) {
  switch (s) {
    case SolveStatus::converged: return "converged";
    case SolveStatus::max_iter: return "max_iter";
    case SolveStatus::collapse_detected: return "collapse_detected";
  }
  return "unknown";
}

std::string to_string(SolveMode m) {
  return m == SolveMode::newton ? "newton" : "descent";
}

void SolverOptions::validate() const {
  if (max_iterations < 1) throw std::invalid_argument("solver: max_iterations < 1");
  if (residual_tolerance <= 0.0) {
    throw std::invalid_argument("solver: residual_tolerance must be > 0");
  }
  if (min_gap_floor <= 0.0) {
    throw std::invalid_argument("solver: min_gap_floor must be > 0");
  }
  if (step_damping <= 0.0 || step_damping > 1.0) {
    throw std::invalid_argument("solver: step_damping must be in (0, 1]");
  }
}

nlohmann::json SolverOptions::to_json() const {
  return {{"max_iterations", max_iterations},
          {"residual_tolerance", residual_tolerance},
          {"min_gap_floor", min_gap_floor},
          {"step_damping", step_damping},
          {"mode", to_string(mode)}};
}

SolverOptions SolverOptions::from_json(const nlohmann::json& j) {
  SolverOptions o;
  for (const auto& item : j.items()) {
    if (item.key() == "max_iterations") o.max_iterations = item.value().get<int>();
    else if (item.key() == "residual_tolerance") o.residual_tolerance = item.value().get<double>();
    else if (item.key() == "min_gap_floor") o.min_gap_floor = item.value().get<double>();
    else if (item.key() == "step_damping") o.step_damping = item.value().get<double>();
    else if (item.key() == "mode") {
      const std::string m = item.value().get<std::string>();
      if (m == "newton") o.mode = SolveMode::newton;
      else if (m == "descent") o.mode = SolveMode::descent;
      else throw std::invalid_argument("solver: unknown mode \"" + m + "\"");
    } else {
      throw std::invalid_argument("unknown key \"" + item.key() + "\" in solver options");
    }
  }
  o.validate();
  return o;
}

nlohmann::json SolveReport::to_json() const {
  nlohmann::json tr = nlohmann::json::array();
  for (const auto& t : trace) {
    tr.push_back({{"residual_norm", t.residual_norm},
                  {"min_gap", t.min_gap},
                  {"energy", t.energy}});
  }
  return {{"residual_norm", residual_norm},
          {"iterations", iterations},
          {"status", to_string(status)},
          {"trace", tr}};
}

namespace {

Eigen::VectorXd flatten_residuals(const std::vector<Eigen::VectorXd>& r, int d) {
  Eigen::VectorXd out(static_cast<int>(r.size()) * d);
  for (std::size_t i = 0; i < r.size(); ++i) {
    out.segment(static_cast<int>(i) * d, d) = r[i];
  }
  return out;
}

double max_block_norm(const Eigen::VectorXd& v, int d) {
  double m = 0.0;
  for (int i = 0; i < v.size() / d; ++i) m = std::max(m, v.segment(i * d, d).norm());
  return m;
}

// Jacobian of the residual map r(x); block (i,j) = d H_hess(i,j) / d_i.
Eigen::MatrixXd residual_jacobian(const Configuration& cfg, const ProblemSpec& spec) {
  Eigen::MatrixXd jac = hamiltonian_hess(cfg, spec);
  const int d = cfg.dim();
  for (int i = 0; i < cfg.size(); ++i) {
    jac.middleRows(i * d, d) /= cfg.charge(i);
  }
  return jac;
}

Eigen::MatrixXd unflatten(const Eigen::VectorXd& x, int d) {
  return Eigen::Map<const Eigen::MatrixXd>(x.data(), d, static_cast<int>(x.size()) / d);
}

}  // namespace

SolveReport solve_critical(const Configuration& init, const ProblemSpec& spec,
                           const SolverOptions& opts) {
  opts.validate();
  const int d = init.dim();
  const int n = init.size();
  Configuration cfg = init;
  double lambda_factor = 1e-12;
  SolveReport report{cfg, 0.0, 0, SolveStatus::max_iter, {}};
  int consecutive_stalls = 0;

  for (int iter = 0; iter < opts.max_iterations; ++iter) {
    const auto res = residuals(cfg, spec);
    const Eigen::VectorXd r = flatten_residuals(res, d);
    const double rn = max_block_norm(r, d);
    report.trace.push_back({rn, cfg.min_gap(), hamiltonian(cfg, spec)});
    report.iterations = iter;
    if (rn <= opts.residual_tolerance) {
      report.status = SolveStatus::converged;
      break;
    }

    const Eigen::MatrixXd jac = residual_jacobian(cfg, spec);
    const Eigen::MatrixXd normal = jac.transpose() * jac;
    const double diag_scale = std::max(normal.diagonal().maxCoeff(), 1e-300);
    const Eigen::VectorXd rhs = -jac.transpose() * r;
    const Eigen::VectorXd delta =
        (normal + lambda_factor * diag_scale *
                      Eigen::MatrixXd::Identity(n * d, n * d))
            .ldlt()
            .solve(rhs);

    // Backtracking on the residual norm; candidates breaching the gap floor
    // are rejected outright.
    double alpha = opts.step_damping;
    bool accepted = false;
    bool gap_reject = false;
    Eigen::VectorXd x = Eigen::Map<const Eigen::VectorXd>(
        cfg.positions().data(), n * d);
    for (int halving = 0; halving < 30; ++halving) {
      const Eigen::MatrixXd cand_pos = unflatten(x + alpha * delta, d);
      if (min_pairwise_gap(cand_pos) < opts.min_gap_floor) {
        gap_reject = true;
        alpha *= 0.5;
        continue;
      }
      Configuration cand = cfg.with_positions(cand_pos);
      if (max_residual_norm(cand, spec) < rn) {
        cfg = std::move(cand);
        accepted = true;
        break;
      }
      alpha *= 0.5;
    }

    if (accepted) {
      lambda_factor = std::max(lambda_factor / 10.0, 1e-14);
      consecutive_stalls = 0;
      continue;
    }
    if (gap_reject) {
      report.status = SolveStatus::collapse_detected;
      break;
    }
    lambda_factor *= 100.0;
    if (++consecutive_stalls > 6) {
      report.status = SolveStatus::max_iter;
      break;
    }
  }

  report.final_config = cfg;
  report.residual_norm = max_residual_norm(cfg, spec);
  if (report.status == SolveStatus::max_iter &&
      report.residual_norm <= opts.residual_tolerance) {
    report.status = SolveStatus::converged;
  }
  if (!report.trace.empty() && report.status == SolveStatus::converged) {
    report.iterations = static_cast<int>(report.trace.size()) - 1;
  }
  return report;
}

SolveReport minimize_energy(const Configuration& init, const ProblemSpec& spec,
                            const SolverOptions& opts) {
  opts.validate();
  const int d = init.dim();
  const int n = init.size();
  Configuration cfg = init;
  SolveReport report{cfg, 0.0, 0, SolveStatus::max_iter, {}};

  Eigen::VectorXd x = Eigen::Map<const Eigen::VectorXd>(cfg.positions().data(), n * d);
  Eigen::VectorXd grad = hamiltonian_grad(cfg, spec);
  double energy = hamiltonian(cfg, spec);
  Eigen::VectorXd prev_x, prev_grad;
  const double grad_tol = opts.residual_tolerance * cfg.charge_mass();

  for (int iter = 0; iter < opts.max_iterations; ++iter) {
    report.trace.push_back({max_block_norm(grad, d), cfg.min_gap(), energy});
    report.iterations = iter;
    if (max_block_norm(grad, d) <= grad_tol) {
      report.status = SolveStatus::converged;
      break;
    }

    // Barzilai-Borwein trial step, Armijo safeguard keeps the trace monotone.
    double step = opts.step_damping / (1.0 + grad.norm());
    if (iter > 0) {
      const Eigen::VectorXd s = x - prev_x;
      const Eigen::VectorXd y = grad - prev_grad;
      const double sy = s.dot(y);
      if (sy > 0.0) step = std::min(s.dot(s) / sy, 1e6);
    }

    const double g2 = grad.squaredNorm();
    bool accepted = false;
    for (int halving = 0; halving < 60; ++halving) {
      const Eigen::MatrixXd cand_pos = unflatten(x - step * grad, d);
      if (min_pairwise_gap(cand_pos) >= opts.min_gap_floor) {
        Configuration cand = cfg.with_positions(cand_pos);
        const double cand_energy = hamiltonian(cand, spec);
        if (cand_energy <= energy - 1e-4 * step * g2) {
          prev_x = x;
          prev_grad = grad;
          x -= step * grad;
          cfg = std::move(cand);
          grad = hamiltonian_grad(cfg, spec);
          energy = cand_energy;
          accepted = true;
          break;
        }
      }
      step *= 0.5;
    }
    if (!accepted) {
      report.status = SolveStatus::max_iter;
      break;
    }
  }

  report.final_config = cfg;
  report.residual_norm = max_residual_norm(cfg, spec);
  if (max_block_norm(grad, d) <= grad_tol) report.status = SolveStatus::converged;
  return report;
}

PolygonEquilibrium polygon_relative_equilibrium(int n, double r) {
  if (n < 2) throw std::invalid_argument("polygon_relative_equilibrium: n must be >= 2");
  if (r <= 0.0) throw std::invalid_argument("polygon_relative_equilibrium: r must be > 0");
  Eigen::MatrixXd positions(2, n);
  for (int k = 0; k < n; ++k) {
    const double theta = 2.0 * std::numbers::pi * k / n;
    positions(0, k) = r * std::cos(theta);
    positions(1, k) = r * std::sin(theta);
  }
  const double omega = (n - 1) / (4.0 * n * r * r);
  return {Configuration(std::move(positions), Eigen::VectorXd::Ones(n)), omega};
}

Configuration random_configuration(int n, const std::vector<double>& charges,
                                   double box_half_width, unsigned seed) {
  if (n < 1) throw std::invalid_argument("random_configuration: n must be >= 1");
  if (static_cast<int>(charges.size()) != n) {
    throw std::invalid_argument("random_configuration: charge list size mismatch");
  }
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> uni(-box_half_width, box_half_width);
  const double gap_floor = 1e-3 * box_half_width;
  Eigen::MatrixXd positions(2, n);
  for (int i = 0; i < n; ++i) {
    for (;;) {
      positions(0, i) = uni(rng);
      positions(1, i) = uni(rng);
      bool ok = true;
      for (int j = 0; j < i; ++j) {
        if ((positions.col(i) - positions.col(j)).norm() <= gap_floor) {
          ok = false;
          break;
        }
      }
      if (ok) break;
    }
  }
  Eigen::VectorXd q(n);
  for (int i = 0; i < n; ++i) q[i] = charges[static_cast<std::size_t>(i)];
  return Configuration(std::move(positions), std::move(q));
}

Configuration random_configuration(int n, ChargePattern pattern,
                                   double box_half_width, unsigned seed) {
  std::vector<double> charges(static_cast<std::size_t>(n), 1.0);
  if (pattern == ChargePattern::alternating) {
    for (int i = 1; i < n; i += 2) charges[static_cast<std::size_t>(i)] = -1.0;
  }
  return random_configuration(n, charges, box_half_width, seed);
}

}  // namespace equilib
