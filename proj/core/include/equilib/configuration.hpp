#pragma once

#include <iosfwd>
#include <vector>

#include <Eigen/Dense>

namespace equilib {

/// Immutable particle configuration: N positions in R^d with nonzero signed
/// charges. The minimum pairwise gap q_N and the total charge mass
/// M_N = sum |d_i| are computed on construction; coincident positions are a
/// construction error.
class Configuration {
 public:
  /// positions: d x N (one column per particle), charges: length N.
  Configuration(Eigen::MatrixXd positions, Eigen::VectorXd charges);

  int dim() const { return static_cast<int>(positions_.rows()); }
  int size() const { return static_cast<int>(positions_.cols()); }
  const Eigen::MatrixXd& positions() const { return positions_; }
  Eigen::VectorXd position(int i) const { return positions_.col(i); }
  const Eigen::VectorXd& charges() const { return charges_; }
  double charge(int i) const { return charges_[i]; }

  /// M_N = sum_i |d_i|.
  double charge_mass() const { return charge_mass_; }
  /// q_N = min_{i != j} |x_i - x_j|; +infinity for N = 1.
  double min_gap() const { return min_gap_; }
  /// Normalized weight m_i = d_i / M_N of the empirical measure.
  double weight(int i) const { return charges_[i] / charge_mass_; }

  /// Tolerance scale 1 + max_i |x_i| + max_i |d_i| / M_N.
  double scale() const;

  Configuration translated(const Eigen::VectorXd& shift) const;
  Configuration with_positions(const Eigen::MatrixXd& positions) const;

  /// Text table, one row per particle: d coordinates then the charge.
  /// Blank lines and lines starting with '#' are skipped on read.
  static Configuration read_particle_table(std::istream& in);
  void write_particle_table(std::ostream& out) const;

 private:
  Eigen::MatrixXd positions_;
  Eigen::VectorXd charges_;
  double charge_mass_ = 0.0;
  double min_gap_ = 0.0;
};

/// q_N of a raw position block, without constructing a Configuration.
double min_pairwise_gap(const Eigen::MatrixXd& positions);

}  // namespace equilib
