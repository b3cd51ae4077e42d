#include "equilib/configuration.hpp"

#include <iomanip>
#include <istream>
#include <limits>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>

namespace equilib {

double min_pairwise_gap(const Eigen::MatrixXd& positions) {
  const int n = static_cast<int>(positions.cols());
  double gap = std::numeric_limits<double>::infinity();
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      gap = std::min(gap, (positions.col(i) - positions.col(j)).norm());
    }
  }
  return gap;
}

Configuration::Configuration(Eigen::MatrixXd positions, Eigen::VectorXd charges)
    : positions_(std::move(positions)), charges_(std::move(charges)) {
  if (positions_.cols() < 1) {
    throw std::invalid_argument("Configuration: need at least one particle");
  }
  if (positions_.cols() != charges_.size()) {
    throw std::invalid_argument("Configuration: positions/charges size mismatch");
  }
  for (int i = 0; i < charges_.size(); ++i) {
    if (charges_[i] == 0.0) {
      throw std::invalid_argument("Configuration: charge " + std::to_string(i) +
                                  " is zero");
    }
  }
  charge_mass_ = charges_.cwiseAbs().sum();
  min_gap_ = min_pairwise_gap(positions_);
  if (min_gap_ <= 0.0) {
    throw std::invalid_argument("Configuration: coincident particle positions");
  }
}

double Configuration::scale() const {
  double max_r = 0.0;
  for (int i = 0; i < size(); ++i) max_r = std::max(max_r, positions_.col(i).norm());
  return 1.0 + max_r + charges_.cwiseAbs().maxCoeff() / charge_mass_;
}

Configuration Configuration::translated(const Eigen::VectorXd& shift) const {
  Eigen::MatrixXd p = positions_;
  p.colwise() += shift;
  return Configuration(std::move(p), charges_);
}

Configuration Configuration::with_positions(const Eigen::MatrixXd& positions) const {
  return Configuration(positions, charges_);
}

Configuration Configuration::read_particle_table(std::istream& in) {
  std::vector<std::vector<double>> rows;
  std::string line;
  int cols = -1;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos || line[first] == '#') continue;
    std::istringstream ls(line);
    std::vector<double> row;
    double v;
    while (ls >> v) row.push_back(v);
    if (!ls.eof()) {
      throw std::invalid_argument("particle table: bad number on line " +
                                  std::to_string(lineno));
    }
    if (row.size() < 2) {
      throw std::invalid_argument("particle table: line " + std::to_string(lineno) +
                                  " needs at least one coordinate and a charge");
    }
    if (cols < 0) cols = static_cast<int>(row.size());
    if (static_cast<int>(row.size()) != cols) {
      throw std::invalid_argument("particle table: inconsistent column count on line " +
                                  std::to_string(lineno));
    }
    rows.push_back(std::move(row));
  }
  if (rows.empty()) throw std::invalid_argument("particle table: no particles");
  const int d = cols - 1;
  const int n = static_cast<int>(rows.size());
  Eigen::MatrixXd positions(d, n);
  Eigen::VectorXd charges(n);
  for (int i = 0; i < n; ++i) {
    for (int k = 0; k < d; ++k) positions(k, i) = rows[static_cast<std::size_t>(i)][static_cast<std::size_t>(k)];
    charges[i] = rows[static_cast<std::size_t>(i)][static_cast<std::size_t>(d)];
  }
  return Configuration(std::move(positions), std::move(charges));
}

void Configuration::write_particle_table(std::ostream& out) const {
  out << std::setprecision(17);
  for (int i = 0; i < size(); ++i) {
    for (int k = 0; k < dim(); ++k) out << positions_(k, i) << ' ';
    out << charges_[i] << '\n';
  }
}

}  // namespace equilib
