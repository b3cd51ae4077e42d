#pragma once

#include <vector>

#include <nlohmann/json.hpp>

#include "equilib/gridded_measure.hpp"
#include "equilib/solver.hpp"
#include "equilib/system.hpp"
#include "equilib/test_field.hpp"

namespace equilib {

/// Uniform measure of total mass 1 and density 2*omega/pi on the disk of
/// radius (2*omega)^{-1/2}: the equilibrium measure for V = omega |x|^2,
/// F = 0 in 2D. Boundary cells carry area-fraction weights.
GriddedMeasure equilibrium_disk(double omega, int cells_per_side = 128);

/// Family of test fields with precomputed norms (sup |phi| + sup |D phi|
/// sampled on the support grid); a computable stand-in for the dual-norm
/// test family.
struct Dictionary {
  std::vector<TestField> fields;
  std::vector<double> norms;

  /// Bumps of assorted profiles covering the box [-extent, extent]^2.
  static Dictionary standard(double extent);
  static double field_norm(const TestField& phi);
};

/// max over the dictionary of |<a, phi> - <b, phi>| / norm(phi); a lower
/// bound on the dual-norm distance between the two measures.
double dual_norm_gap(const Configuration& a, const Configuration& b,
                     const Dictionary& dict);
double dual_norm_gap(const Configuration& a, const GriddedMeasure& b,
                     const Dictionary& dict);
double dual_norm_gap(const GriddedMeasure& a, const GriddedMeasure& b,
                     const Dictionary& dict);

/// <mu, phi> for the empirical measure of cfg (weights d_i / M_N).
Eigen::Vector2d pair_with_field(const Configuration& cfg, const TestField& phi);
Eigen::Vector2d pair_with_field(const GriddedMeasure& mu, const TestField& phi);

struct HistogramBin {
  double radius = 0.0;   // bin midpoint
  double density = 0.0;  // |charge| mass per unit area, normalized by M_N
};

/// Charge-weighted radial density profile about the origin. bins >= 4.
std::vector<HistogramBin> radial_histogram(const Configuration& cfg, int bins);

/// Continuum vorticity residual of a gridded measure:
/// (1/2) sum_{cells c != c'} (grad g + grad F)(x_c - x_c') . (phi(x_c) - phi(x_c'))
///   * m_c m_c'  +  sum_c grad V(x_c) . phi(x_c) m_c,
/// with the (bounded) kernel set to zero on the diagonal.
double continuum_vorticity_residual(const GriddedMeasure& mu, const ProblemSpec& spec,
                                    const TestField& phi);

/// Mean-square electric-field mismatch between grad h_N and the analytic
/// equilibrium field of the circle law, on the annulus
/// inner_radius <= |x| <= outer_radius with small disks around the particles
/// excised.
double excised_field_l2_gap(const Configuration& cfg, double omega,
                            double inner_radius, double outer_radius,
                            double excision_radius, int grid = 128);

struct StudyRow {
  int n = 0;
  unsigned seed = 0;
  SolveStatus status = SolveStatus::max_iter;
  double residual_norm = 0.0;
  double boundedness = 0.0;
  double dual_gap = 0.0;
  double support_radius = 0.0;
  double bulk_density = 0.0;   // mean histogram density over r <= 0.8 R
  double field_l2_gap = 0.0;
  double energy = 0.0;

  nlohmann::json to_json() const;
};

/// Minimizer-based convergence study against the circle law. Requires a
/// quadratic confinement and positive charges; one seed per entry of
/// n_values (seeds recycled if shorter).
std::vector<StudyRow> convergence_study(const ProblemSpec& spec,
                                        const std::vector<int>& n_values,
                                        const std::vector<unsigned>& seeds,
                                        const SolverOptions& opts);

}  // namespace equilib
