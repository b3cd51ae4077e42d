#include "equilib/gridded_measure.hpp"

#include <iomanip>
#include <istream>
#include <ostream>
#include <stdexcept>

namespace equilib {

GriddedMeasure::GriddedMeasure(const Eigen::Vector2d& origin, double cell_size,
                               Eigen::MatrixXd density)
    : origin_(origin), cell_size_(cell_size), density_(std::move(density)) {
  if (cell_size_ <= 0.0) {
    throw std::invalid_argument("GriddedMeasure: cell_size must be > 0");
  }
  if (density_.rows() < 1 || density_.cols() < 1) {
    throw std::invalid_argument("GriddedMeasure: empty density grid");
  }
  if (!density_.allFinite()) {
    throw std::invalid_argument("GriddedMeasure: non-finite density");
  }
}

Eigen::Vector2d GriddedMeasure::cell_center(int i, int j) const {
  return origin_ + cell_size_ * Eigen::Vector2d(i + 0.5, j + 0.5);
}

double GriddedMeasure::total_mass() const {
  return density_.sum() * cell_size_ * cell_size_;
}

std::vector<GriddedMeasure::Cell> GriddedMeasure::support_cells() const {
  std::vector<Cell> cells;
  for (int i = 0; i < cells_x(); ++i) {
    for (int j = 0; j < cells_y(); ++j) {
      if (density_(i, j) != 0.0) cells.push_back({cell_center(i, j), cell_mass(i, j)});
    }
  }
  return cells;
}

GriddedMeasure GriddedMeasure::read_text(std::istream& in) {
  double ox, oy, h;
  int nx, ny;
  if (!(in >> ox >> oy >> h >> nx >> ny)) {
    throw std::invalid_argument("GriddedMeasure: bad header");
  }
  if (nx < 1 || ny < 1) throw std::invalid_argument("GriddedMeasure: bad grid size");
  Eigen::MatrixXd density(nx, ny);
  for (int i = 0; i < nx; ++i) {
    for (int j = 0; j < ny; ++j) {
      if (!(in >> density(i, j))) {
        throw std::invalid_argument("GriddedMeasure: truncated density data");
      }
    }
  }
  return GriddedMeasure({ox, oy}, h, std::move(density));
}

void GriddedMeasure::write_text(std::ostream& out) const {
  out << std::setprecision(17) << origin_[0] << ' ' << origin_[1] << ' '
      << cell_size_ << ' ' << cells_x() << ' ' << cells_y() << '\n';
  for (int i = 0; i < cells_x(); ++i) {
    for (int j = 0; j < cells_y(); ++j) {
      out << density_(i, j) << (j + 1 == cells_y() ? '\n' : ' ');
    }
  }
}

}  // namespace equilib
