#include "equilib/meanfield.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace equilib {

GriddedMeasure equilibrium_disk(double omega, int cells_per_side) {
  if (omega <= 0.0) throw std::invalid_argument("equilibrium_disk: omega must be > 0");
  if (cells_per_side < 4) {
    throw std::invalid_argument("equilibrium_disk: grid too coarse");
  }
  const double radius = 1.0 / std::sqrt(2.0 * omega);
  const double density = 2.0 * omega / std::numbers::pi;
  const int n = cells_per_side;
  const double h = 2.0 * radius / n;
  const Eigen::Vector2d origin(-radius, -radius);

  Eigen::MatrixXd grid = Eigen::MatrixXd::Zero(n, n);
  const double r2 = radius * radius;
  const double half_diag = h * std::numbers::sqrt2 / 2.0;
  constexpr int kSub = 32;
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      const Eigen::Vector2d c = origin + h * Eigen::Vector2d(i + 0.5, j + 0.5);
      const double rc = c.norm();
      if (rc + half_diag <= radius) {
        grid(i, j) = density;
      } else if (rc - half_diag < radius) {
        // boundary cell: midpoint subsampling of the overlap area
        int inside = 0;
        for (int a = 0; a < kSub; ++a) {
          for (int b = 0; b < kSub; ++b) {
            const Eigen::Vector2d p =
                c + h * Eigen::Vector2d((a + 0.5) / kSub - 0.5,
                                        (b + 0.5) / kSub - 0.5);
            if (p.squaredNorm() <= r2) ++inside;
          }
        }
        grid(i, j) = density * inside / (kSub * kSub);
      }
    }
  }
  // exact unit mass by construction contract
  grid /= grid.sum() * h * h;
  return GriddedMeasure(origin, h, std::move(grid));
}

double Dictionary::field_norm(const TestField& phi) {
  constexpr int kSamples = 48;
  double sup_value = 0.0, sup_deriv = 0.0;
  const double r = phi.radius();
  for (int i = 0; i <= kSamples; ++i) {
    for (int j = 0; j <= kSamples; ++j) {
      const Eigen::Vector2d x =
          phi.center() + 2.0 * r *
                             Eigen::Vector2d(static_cast<double>(i) / kSamples - 0.5,
                                             static_cast<double>(j) / kSamples - 0.5);
      sup_value = std::max(sup_value, phi.value(x).norm());
      sup_deriv = std::max(sup_deriv, phi.jacobian(x).norm());
    }
  }
  return sup_value + sup_deriv;
}

Dictionary Dictionary::standard(double extent) {
  if (extent <= 0.0) throw std::invalid_argument("Dictionary: extent must be > 0");
  Dictionary dict;
  const Eigen::Vector2d o = Eigen::Vector2d::Zero();
  const double r = 2.0 * extent;  // plateau covers the working box
  dict.fields.push_back(TestField::constant_bump({1.0, 0.0}, o, r));
  dict.fields.push_back(TestField::constant_bump({0.0, 1.0}, o, r));
  dict.fields.push_back(TestField::coordinate_bump(0, 1, 0, o, r));
  dict.fields.push_back(TestField::coordinate_bump(1, 0, 1, o, r));
  dict.fields.push_back(TestField::coordinate_bump(0, 2, 0, o, r));
  dict.fields.push_back(TestField::coordinate_bump(1, 1, 1, o, r));
  dict.fields.push_back(TestField::rotational_bump(o, r));
  dict.fields.push_back(
      TestField::constant_bump({1.0, 0.0}, {0.4 * extent, 0.0}, extent));
  dict.fields.push_back(
      TestField::constant_bump({0.0, 1.0}, {0.0, -0.4 * extent}, extent));
  dict.fields.push_back(TestField::rotational_bump({0.3 * extent, 0.3 * extent}, extent));
  for (const auto& f : dict.fields) dict.norms.push_back(field_norm(f));
  return dict;
}

Eigen::Vector2d pair_with_field(const Configuration& cfg, const TestField& phi) {
  Eigen::Vector2d out = Eigen::Vector2d::Zero();
  for (int i = 0; i < cfg.size(); ++i) {
    out += cfg.weight(i) * phi.value(cfg.position(i));
  }
  return out;
}

Eigen::Vector2d pair_with_field(const GriddedMeasure& mu, const TestField& phi) {
  Eigen::Vector2d out = Eigen::Vector2d::Zero();
  for (const auto& cell : mu.support_cells()) {
    out += cell.mass * phi.value(cell.center);
  }
  return out;
}

namespace {

template <typename A, typename B>
double dual_gap_impl(const A& a, const B& b, const Dictionary& dict) {
  if (dict.fields.empty()) throw std::invalid_argument("dual_norm_gap: empty dictionary");
  double gap = 0.0;
  for (std::size_t k = 0; k < dict.fields.size(); ++k) {
    const Eigen::Vector2d diff =
        pair_with_field(a, dict.fields[k]) - pair_with_field(b, dict.fields[k]);
    gap = std::max(gap, diff.norm() / dict.norms[k]);
  }
  return gap;
}

}  // namespace

double dual_norm_gap(const Configuration& a, const Configuration& b,
                     const Dictionary& dict) {
  return dual_gap_impl(a, b, dict);
}
double dual_norm_gap(const Configuration& a, const GriddedMeasure& b,
                     const Dictionary& dict) {
  return dual_gap_impl(a, b, dict);
}
double dual_norm_gap(const GriddedMeasure& a, const GriddedMeasure& b,
                     const Dictionary& dict) {
  return dual_gap_impl(a, b, dict);
}

std::vector<HistogramBin> radial_histogram(const Configuration& cfg, int bins) {
  if (bins < 4) throw std::invalid_argument("radial_histogram: bins must be >= 4");
  double r_max = 0.0;
  for (int i = 0; i < cfg.size(); ++i) {
    r_max = std::max(r_max, cfg.position(i).norm());
  }
  const double width = r_max > 0.0 ? r_max * (1.0 + 1e-12) / bins : 1.0 / bins;
  std::vector<double> mass(static_cast<std::size_t>(bins), 0.0);
  for (int i = 0; i < cfg.size(); ++i) {
    const int k = std::min(static_cast<int>(cfg.position(i).norm() / width), bins - 1);
    mass[static_cast<std::size_t>(k)] += std::abs(cfg.charge(i));
  }
  std::vector<HistogramBin> out(static_cast<std::size_t>(bins));
  for (int k = 0; k < bins; ++k) {
    const double r0 = k * width;
    const double r1 = (k + 1) * width;
    const double area = std::numbers::pi * (r1 * r1 - r0 * r0);
    out[static_cast<std::size_t>(k)].radius = 0.5 * (r0 + r1);
    out[static_cast<std::size_t>(k)].density =
        mass[static_cast<std::size_t>(k)] / (area * cfg.charge_mass());
  }
  return out;
}

double continuum_vorticity_residual(const GriddedMeasure& mu, const ProblemSpec& spec,
                                    const TestField& phi) {
  if (spec.dim.value() != 2) {
    throw std::domain_error("continuum_vorticity_residual: requires d = 2");
  }
  const auto cells = mu.support_cells();
  const std::size_t m = cells.size();
  std::vector<Eigen::Vector2d> values(m);
  for (std::size_t c = 0; c < m; ++c) values[c] = phi.value(cells[c].center);

  const bool with_f = !spec.interaction.is_zero();
  // Kahan-compensated serial pair sum; the kernel is bounded, the diagonal
  // is excluded by convention.
  double sum = 0.0, comp = 0.0;
  for (std::size_t c = 0; c < m; ++c) {
    for (std::size_t cp = c + 1; cp < m; ++cp) {
      const Eigen::Vector2d diff = cells[c].center - cells[cp].center;
      const double r2 = diff.squaredNorm();
      Eigen::Vector2d force = -diff / r2;
      if (with_f) force += spec.interaction.gradient(diff);
      const double term =
          cells[c].mass * cells[cp].mass * force.dot(values[c] - values[cp]);
      const double y = term - comp;
      const double t = sum + y;
      comp = (t - sum) - y;
      sum = t;
    }
  }
  for (std::size_t c = 0; c < m; ++c) {
    const double term =
        cells[c].mass * spec.potential.gradient(cells[c].center).dot(values[c]);
    const double y = term - comp;
    const double t = sum + y;
    comp = (t - sum) - y;
    sum = t;
  }
  return sum;
}

double excised_field_l2_gap(const Configuration& cfg, double omega,
                            double inner_radius, double outer_radius,
                            double excision_radius, int grid) {
  const FieldEvaluator field(cfg, ProblemSpec{Dimension(2)});
  double sum = 0.0;
  int count = 0;
  for (int i = 0; i < grid; ++i) {
    for (int j = 0; j < grid; ++j) {
      const Eigen::Vector2d x =
          2.0 * outer_radius *
          Eigen::Vector2d((i + 0.5) / grid - 0.5, (j + 0.5) / grid - 0.5);
      const double r = x.norm();
      if (r < inner_radius || r > outer_radius) continue;
      if (field.particle_distance(x) <= excision_radius) continue;
      // circle-law field: -2 omega x inside the disk, -x/|x|^2 outside
      const double mass_r = std::min(1.0, 2.0 * omega * r * r);
      const Eigen::Vector2d reference = -mass_r / (r * r) * x;
      sum += (field(x).grad_h - reference).squaredNorm();
      ++count;
    }
  }
  if (count == 0) throw std::invalid_argument("excised_field_l2_gap: empty annulus");
  return sum / count;
}

nlohmann::json StudyRow::to_json() const {
  return {{"n", n},
          {"seed", seed},
          {"status", to_string(status)},
          {"residual_norm", residual_norm},
          {"boundedness", boundedness},
          {"dual_gap", dual_gap},
          {"support_radius", support_radius},
          {"bulk_density", bulk_density},
          {"field_l2_gap", field_l2_gap},
          {"energy", energy}};
}

std::vector<StudyRow> convergence_study(const ProblemSpec& spec,
                                        const std::vector<int>& n_values,
                                        const std::vector<unsigned>& seeds,
                                        const SolverOptions& opts) {
  if (spec.dim.value() != 2) {
    throw std::domain_error("convergence_study: requires d = 2");
  }
  const double omega = spec.potential.quadratic_omega();
  const double radius = 1.0 / std::sqrt(2.0 * omega);
  const GriddedMeasure reference = equilibrium_disk(omega, 128);
  const Dictionary dict = Dictionary::standard(1.5 * radius);

  std::vector<StudyRow> rows;
  for (std::size_t k = 0; k < n_values.size(); ++k) {
    const int n = n_values[k];
    const unsigned seed = seeds.empty() ? 1u : seeds[k % seeds.size()];
    const Configuration init =
        random_configuration(n, ChargePattern::all_plus, radius, seed);
    const SolveReport report = minimize_energy(init, spec, opts);
    const Configuration& cfg = report.final_config;

    StudyRow row;
    row.n = n;
    row.seed = seed;
    row.status = report.status;
    row.residual_norm = report.residual_norm;
    row.boundedness = boundedness_statistic(cfg, spec);
    row.dual_gap = dual_norm_gap(cfg, reference, dict);
    for (int i = 0; i < cfg.size(); ++i) {
      row.support_radius = std::max(row.support_radius, cfg.position(i).norm());
    }
    const auto hist = radial_histogram(cfg, 20);
    double bulk = 0.0;
    int bulk_bins = 0;
    for (const auto& bin : hist) {
      if (bin.radius <= 0.8 * radius) {
        bulk += bin.density;
        ++bulk_bins;
      }
    }
    row.bulk_density = bulk_bins > 0 ? bulk / bulk_bins : 0.0;
    row.field_l2_gap = excised_field_l2_gap(
        cfg, omega, 0.3 * radius, 1.2 * radius,
        0.75 * radius / std::sqrt(static_cast<double>(n)), 96);
    row.energy = report.trace.empty() ? hamiltonian(cfg, spec)
                                      : report.trace.back().energy;
    rows.push_back(row);
  }
  return rows;
}

}  // namespace equilib
