#include <doctest.h>

#include <cmath>
#include <random>
#include <sstream>
#include <stdexcept>
#include <vector>

#include <Eigen/Dense>

#include "equilib/solver.hpp"
#include "equilib/system.hpp"

using namespace equilib;
using Eigen::MatrixXd;
using Eigen::VectorXd;

namespace {

Configuration two_body(double x0, double x1, double d0 = 1.0, double d1 = 1.0) {
  MatrixXd pos(2, 2);
  pos << x0, x1, 0, 0;
  VectorXd q(2);
  q << d0, d1;
  return Configuration(pos, q);
}

ProblemSpec quad_spec(double omega = 1.0) {
  return ProblemSpec{Dimension(2), InteractionSpec::zero(),
                     PotentialSpec::quadratic(omega)};
}

ProblemSpec free_spec() {
  return ProblemSpec{Dimension(2), InteractionSpec::zero(), PotentialSpec::zero()};
}

ProblemSpec mixed_spec() {
  return ProblemSpec{Dimension(2), InteractionSpec::gaussian(0.3, 1.2),
                     PotentialSpec::quadratic(0.7)};
}

}  // namespace

TEST_CASE("Configuration invariants and accessors") {
  Configuration cfg = two_body(0, 1, 2.0, -3.0);
  CHECK(cfg.size() == 2);
  CHECK(cfg.dim() == 2);
  CHECK(cfg.charge_mass() == doctest::Approx(5.0));
  CHECK(cfg.min_gap() == doctest::Approx(1.0));
  CHECK(cfg.weight(1) == doctest::Approx(-0.6));
  CHECK(cfg.scale() == doctest::Approx(1.0 + 1.0 + 3.0 / 5.0));

  MatrixXd pos(2, 2);
  pos << 0, 0, 0, 0;
  VectorXd q(2);
  q << 1, 1;
  CHECK_THROWS_AS(Configuration(pos, q), std::invalid_argument);  // coincident
  q << 1, 0;
  pos(0, 1) = 1;
  CHECK_THROWS_AS(Configuration(pos, q), std::invalid_argument);  // zero charge

  // single particle: empty pair set, infinite gap
  MatrixXd single(2, 1);
  single << 0.5, -0.5;
  VectorXd one(1);
  one << 1;
  Configuration solo(single, one);
  CHECK(std::isinf(solo.min_gap()));
}

TEST_CASE("particle table round trip and error reporting") {
  Configuration cfg = two_body(0.25, -1.5, 1.0, -2.0);
  std::stringstream ss;
  cfg.write_particle_table(ss);
  Configuration back = Configuration::read_particle_table(ss);
  CHECK(back.positions().isApprox(cfg.positions(), 1e-15));
  CHECK(back.charges().isApprox(cfg.charges(), 1e-15));

  std::stringstream bad("# comment\n0 0 1\n1 oops 1\n");
  try {
    Configuration::read_particle_table(bad);
    CHECK(false);
  } catch (const std::invalid_argument& e) {
    CHECK(std::string(e.what()).find("3") != std::string::npos);  // line number
  }
}

TEST_CASE("hamiltonian examples") {
  CHECK(hamiltonian(two_body(0, 1), free_spec()) == doctest::Approx(0.0));
  CHECK(hamiltonian(two_body(0, std::exp(1.0)), free_spec()) ==
        doctest::Approx(-0.5));
  // adding V = |x|^2 contributes 0 + e^2
  CHECK(hamiltonian(two_body(0, std::exp(1.0)), quad_spec()) ==
        doctest::Approx(-0.5 + std::exp(2.0)));
}

TEST_CASE("boundedness statistic examples") {
  CHECK(boundedness_statistic(two_body(0, 1), free_spec()) == doctest::Approx(0.0));
  CHECK(boundedness_statistic(two_body(0, std::exp(1.0)), free_spec()) ==
        doctest::Approx(-0.25));
  MatrixXd pos(2, 1);
  pos << 0, 0;
  VectorXd q(1);
  q << 1;
  CHECK(boundedness_statistic(Configuration(pos, q), quad_spec()) ==
        doctest::Approx(0.0));
}

TEST_CASE("residuals: single particle and the symmetric pair") {
  MatrixXd pos(2, 1);
  pos << 0.4, -0.7;
  VectorXd q(1);
  q << 2.5;
  Configuration solo(pos, q);
  auto r = residuals(solo, quad_spec());
  CHECK(r[0].isApprox(2 * solo.position(0), 1e-14));  // grad V only

  const double a = 1.0 / (2.0 * std::sqrt(2.0));
  Configuration pair = two_body(-a, a);
  CHECK(max_residual_norm(pair, quad_spec()) <= 1e-12);
}

TEST_CASE("gradient identity and FD consistency") {
  std::mt19937_64 rng(31);
  std::uniform_real_distribution<double> unif(-1.0, 1.0);
  std::bernoulli_distribution coin;
  ProblemSpec spec = mixed_spec();

  for (int trial = 0; trial < 50; ++trial) {
    const int n = 4;
    MatrixXd pos(2, n);
    VectorXd q(n);
    for (int i = 0; i < n; ++i) {
      pos.col(i) << unif(rng), unif(rng);
      q[i] = coin(rng) ? 1.0 : -1.0;
    }
    if (min_pairwise_gap(pos) < 0.2) continue;
    Configuration cfg(pos, q);

    auto r = residuals(cfg, spec);
    VectorXd grad = hamiltonian_grad(cfg, spec);
    for (int i = 0; i < n; ++i) {
      CHECK((grad.segment(2 * i, 2) - q[i] * r[i]).norm() <= 1e-14 * (1 + grad.norm()));
    }

    // gradient against central differences of H_N
    const double h = 1e-6;
    VectorXd fd(2 * n);
    for (int k = 0; k < 2 * n; ++k) {
      MatrixXd pp = pos, pm = pos;
      pp(k % 2, k / 2) += h;
      pm(k % 2, k / 2) -= h;
      fd[k] = (hamiltonian(cfg.with_positions(pp), spec) -
               hamiltonian(cfg.with_positions(pm), spec)) /
              (2 * h);
    }
    CHECK((grad - fd).norm() <= 1e-6 * (1 + grad.norm()));

    // Hessian against central differences of the gradient
    MatrixXd H = hamiltonian_hess(cfg, spec);
    CHECK((H - H.transpose()).norm() <= 1e-12 * (1 + H.norm()));
    MatrixXd fdH(2 * n, 2 * n);
    for (int k = 0; k < 2 * n; ++k) {
      MatrixXd pp = pos, pm = pos;
      pp(k % 2, k / 2) += h;
      pm(k % 2, k / 2) -= h;
      fdH.col(k) = (hamiltonian_grad(cfg.with_positions(pp), spec) -
                    hamiltonian_grad(cfg.with_positions(pm), spec)) /
                   (2 * h);
    }
    CHECK((H - fdH).norm() <= 1e-5 * (1 + H.norm()));
  }
}

TEST_CASE("single particle Hessian is d1 D2V") {
  MatrixXd pos(2, 1);
  pos << 0.3, 0.1;
  VectorXd q(1);
  q << 1;
  MatrixXd H = hamiltonian_hess(Configuration(pos, q), quad_spec());
  CHECK(H.isApprox(2 * MatrixXd::Identity(2, 2), 1e-14));
}

TEST_CASE("translation and permutation invariance") {
  Configuration cfg = random_configuration(6, ChargePattern::alternating, 1.0, 9);
  ProblemSpec spec{Dimension(2), InteractionSpec::gaussian(0.5, 1.0),
                   PotentialSpec::zero()};

  VectorXd shift(2);
  shift << 0.8, -1.7;
  Configuration moved = cfg.translated(shift);
  CHECK(hamiltonian(moved, spec) ==
        doctest::Approx(hamiltonian(cfg, spec)).epsilon(1e-12));
  auto r0 = residuals(cfg, spec);
  auto r1 = residuals(moved, spec);
  for (int i = 0; i < cfg.size(); ++i) {
    CHECK((r0[i] - r1[i]).norm() <= 1e-12);
  }

  // Hessian annihilates uniform translations when V = 0
  MatrixXd H = hamiltonian_hess(cfg, spec);
  for (int k = 0; k < 2; ++k) {
    VectorXd t = VectorXd::Zero(2 * cfg.size());
    for (int i = 0; i < cfg.size(); ++i) t[2 * i + k] = 1.0;
    CHECK((H * t).norm() <= 1e-10 * (1 + H.norm()));
  }

  // permutation invariance of the scalar statistics
  std::vector<int> perm = {3, 0, 5, 1, 4, 2};
  MatrixXd ppos(2, cfg.size());
  VectorXd pq(cfg.size());
  for (int i = 0; i < cfg.size(); ++i) {
    ppos.col(i) = cfg.position(perm[i]);
    pq[i] = cfg.charge(perm[i]);
  }
  Configuration permuted(ppos, pq);
  ProblemSpec spec2 = mixed_spec();
  CHECK(hamiltonian(permuted, spec2) ==
        doctest::Approx(hamiltonian(cfg, spec2)).epsilon(1e-12));
  CHECK(boundedness_statistic(permuted, spec2) ==
        doctest::Approx(boundedness_statistic(cfg, spec2)).epsilon(1e-12));
}

TEST_CASE("field_eval: potential, stress, remainder") {
  MatrixXd pos(2, 1);
  pos << 0, 0;
  VectorXd q(1);
  q << 1;
  Configuration solo(pos, q);

  VectorXd x(2);
  x << std::exp(1.0), 0;
  FieldSample s = field_eval(solo, free_spec(), x);
  CHECK(s.h == doctest::Approx(-1.0));

  x << 1, 0;
  s = field_eval(solo, free_spec(), x);
  CHECK(s.grad_h.isApprox((VectorXd(2) << -1, 0).finished(), 1e-14));
  CHECK(s.stress(0, 0) == doctest::Approx(1.0));
  CHECK(s.stress(1, 1) == doctest::Approx(-1.0));
  CHECK(s.stress(0, 1) == doctest::Approx(0.0));
  CHECK(s.remainder.norm() == doctest::Approx(0.0));  // F = V = 0

  // stress structure and trace at generic points of a bigger system
  Configuration cfg = random_configuration(5, ChargePattern::alternating, 1.0, 4);
  FieldEvaluator field(cfg, mixed_spec());
  std::mt19937_64 rng(77);
  std::uniform_real_distribution<double> unif(-2.0, 2.0);
  for (int trial = 0; trial < 20; ++trial) {
    VectorXd p(2);
    p << unif(rng), unif(rng);
    if (field.particle_distance(p) < 0.1) continue;
    FieldSample fs = field(p);
    MatrixXd expect = 2 * fs.grad_h * fs.grad_h.transpose() -
                      fs.grad_h.squaredNorm() * MatrixXd::Identity(2, 2);
    CHECK((fs.stress - expect).norm() <= 1e-14 * (1 + expect.norm()));
    CHECK(std::abs(fs.stress.trace()) <= 1e-14 * (1 + fs.grad_h.squaredNorm()));
    CHECK((fs.remainder - fs.remainder.transpose()).norm() <= 10.0);  // no symmetry claimed
  }

  // guard radius
  CHECK_THROWS_AS(field(cfg.position(0)), std::domain_error);
}

TEST_CASE("h_N is harmonic off the particles: FD Laplacian decays like step^2") {
  Configuration cfg = random_configuration(4, ChargePattern::all_plus, 1.0, 15);
  FieldEvaluator field(cfg, free_spec());
  VectorXd p(2);
  p << 2.5, 1.0;

  auto fd_lap = [&](double h) {
    double c = field(p).h;
    double sum = 0.0;
    for (int k = 0; k < 2; ++k) {
      VectorXd pp = p, pm = p;
      pp[k] += h;
      pm[k] -= h;
      sum += field(pp).h + field(pm).h - 2 * c;
    }
    return sum / (h * h);
  };
  double l1 = std::abs(fd_lap(1e-2));
  double l2 = std::abs(fd_lap(5e-3));
  CHECK(l1 <= 1e-3);
  // either both already at roundoff level or a clear O(h^2) drop
  if (l1 > 1e-9) CHECK(l2 <= 0.4 * l1);
}
