#pragma once

#include <iosfwd>
#include <vector>

#include <Eigen/Dense>

namespace equilib {

/// Continuum signed measure on R^2 sampled as cell-center densities on a
/// rectangular grid; the mass of cell (i, j) is density(i, j) * cell_size^2.
class GriddedMeasure {
 public:
  /// origin is the lower-left corner of cell (0, 0).
  GriddedMeasure(const Eigen::Vector2d& origin, double cell_size,
                 Eigen::MatrixXd density);

  const Eigen::Vector2d& origin() const { return origin_; }
  double cell_size() const { return cell_size_; }
  int cells_x() const { return static_cast<int>(density_.rows()); }
  int cells_y() const { return static_cast<int>(density_.cols()); }
  const Eigen::MatrixXd& density() const { return density_; }

  Eigen::Vector2d cell_center(int i, int j) const;
  double cell_mass(int i, int j) const {
    return density_(i, j) * cell_size_ * cell_size_;
  }
  double total_mass() const;
  bool is_nonnegative() const { return density_.minCoeff() >= 0.0; }

  /// Flat list of (center, mass) for cells with nonzero mass.
  struct Cell {
    Eigen::Vector2d center;
    double mass;
  };
  std::vector<Cell> support_cells() const;

  /// Text format: header line "origin_x origin_y cell_size nx ny", then
  /// row-major densities, one grid row per line.
  static GriddedMeasure read_text(std::istream& in);
  void write_text(std::ostream& out) const;

 private:
  Eigen::Vector2d origin_;
  double cell_size_;
  Eigen::MatrixXd density_;
};

}  // namespace equilib
