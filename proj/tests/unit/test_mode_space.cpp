#include <cmath>
#include <numbers>
#include <random>

#include <Eigen/Eigenvalues>

#include "doctest.h"
#include "tfim/errors.hpp"
#include "tfim/mode_space.hpp"

using namespace tfim;
using std::numbers::pi;

TEST_CASE("drive protocol") {
  const DriveProtocol d(1.0, 0.5, pi);
  CHECK(d.field_at(0.0) == 1.0);
  CHECK(d.period() == doctest::Approx(2.0).epsilon(1e-15));
  CHECK(d.field_at(0.5) == 1.0 + 0.5 * std::sin(pi * 0.5));
  CHECK_THROWS_AS(DriveProtocol(1.0, 0.5, 0.0), InvalidArgument);
  CHECK_THROWS_AS(DriveProtocol(1.0, 0.5, -1.0), InvalidArgument);
}

TEST_CASE("momentum grid") {
  SUBCASE("N=4") {
    const auto g = momentum_grid(4);
    REQUIRE(g.size() == 2);
    CHECK(g[0] == doctest::Approx(pi / 4));
    CHECK(g[1] == doctest::Approx(3 * pi / 4));
  }
  SUBCASE("N=2 single mode") {
    const auto g = momentum_grid(2);
    REQUIRE(g.size() == 1);
    CHECK(g[0] == doctest::Approx(pi / 2));
  }
  SUBCASE("N=8") {
    const auto g = momentum_grid(8);
    REQUIRE(g.size() == 4);
    for (int m = 0; m < 4; ++m)
      CHECK(g[m] == doctest::Approx((2 * m + 1) * pi / 8));
  }
  SUBCASE("strictly increasing inside (0, pi)") {
    const auto g = momentum_grid(1024);
    for (std::size_t m = 0; m < g.size(); ++m) {
      CHECK(g[m] > 0.0);
      CHECK(g[m] < pi);
      if (m > 0)
        CHECK(g[m] > g[m - 1]);
    }
  }
  CHECK_THROWS_AS(momentum_grid(7), InvalidArgument);
  CHECK_THROWS_AS(momentum_grid(0), InvalidArgument);
  CHECK_THROWS_AS(momentum_grid(-2), InvalidArgument);
}

TEST_CASE("dispersion") {
  CHECK(dispersion(1.0, pi) == doctest::Approx(2.0));
  CHECK(dispersion(0.0, pi / 2) == doctest::Approx(1.0));
  CHECK(dispersion(2.0, 0.0) == doctest::Approx(1.0));
  CHECK(dispersion(1.0, 0.0) == 0.0);
  CHECK(dispersion(-1.0, pi) == doctest::Approx(0.0).epsilon(1e-15));
  // even under k -> -k
  std::mt19937 rng(7);
  std::uniform_real_distribution<double> hk(-3.0, 3.0), kk(0.0, pi);
  for (int i = 0; i < 200; ++i) {
    const double h = hk(rng), k = kk(rng);
    CHECK(dispersion(h, -k) == doctest::Approx(dispersion(h, k)).epsilon(1e-14));
    CHECK(dispersion(h, k) >= 0.0);
  }
}

TEST_CASE("bdg hamiltonian") {
  SUBCASE("h=1, k=pi is diagonal (+4, -4)") {
    const auto m = bdg_hamiltonian(1.0, pi);
    CHECK(m(0, 0).real() == doctest::Approx(4.0));
    CHECK(m(1, 1).real() == doctest::Approx(-4.0));
    CHECK(std::abs(m(0, 1)) < 1e-15);
    CHECK(std::abs(m(1, 0)) < 1e-15);
  }
  SUBCASE("eigenvalues are +-2 eps") {
    std::mt19937 rng(11);
    std::uniform_real_distribution<double> hk(-3.0, 3.0), kk(0.0, pi);
    auto check = [](double h, double k) {
      const auto m = bdg_hamiltonian(h, k);
      CHECK((m - m.adjoint()).cwiseAbs().maxCoeff() == 0.0);
      const Eigen::SelfAdjointEigenSolver<Eigen::Matrix2cd> es(m);
      const double e = 2.0 * dispersion(h, k);
      CHECK(std::abs(es.eigenvalues()(0) + e) < 1e-12);
      CHECK(std::abs(es.eigenvalues()(1) - e) < 1e-12);
    };
    check(2.0, 0.0);
    check(0.7, 1.3);
    for (int i = 0; i < 500; ++i)
      check(hk(rng), kk(rng));
  }
}

namespace {
Eigen::Vector2cd nambu(const ModeState& s) { return Eigen::Vector2cd(s.v, s.u); }
}  // namespace

TEST_CASE("ground state amplitudes") {
  SUBCASE("infinite field is the empty state") {
    const auto s = ground_state_amplitudes(1e6, pi / 2);
    CHECK(std::norm(s.v) < 1e-12);
    CHECK(std::abs(s.u - 1.0) < 1e-6);
  }
  SUBCASE("no pairing at k = pi") {
    const auto s = ground_state_amplitudes(1.0, pi);
    CHECK(std::abs(s.u - 1.0) < 1e-12);
    CHECK(std::abs(s.v) < 1e-12);
  }
  SUBCASE("h=0.5, k=pi/3 against an independent eigensolver") {
    const double h = 0.5, k = pi / 3;
    const auto s = ground_state_amplitudes(h, k);
    const Eigen::SelfAdjointEigenSolver<Eigen::Matrix2cd> es(bdg_hamiltonian(h, k));
    const Eigen::Vector2cd ref = es.eigenvectors().col(0);
    // equal up to a global phase
    CHECK(std::abs(std::abs(ref.dot(nambu(s))) - 1.0) < 1e-12);
    const double energy = (nambu(s).adjoint() * bdg_hamiltonian(h, k) * nambu(s))(0).real();
    CHECK(energy == doctest::Approx(-2.0 * dispersion(h, k)).epsilon(1e-12));
  }
  SUBCASE("normalized, u real nonnegative, lowest eigenvector everywhere") {
    std::mt19937 rng(3);
    std::uniform_real_distribution<double> hk(-3.0, 3.0), kk(1e-3, pi - 1e-3);
    for (int i = 0; i < 1000; ++i) {
      const double h = hk(rng), k = kk(rng);
      const auto s = ground_state_amplitudes(h, k);
      CHECK(std::abs(s.norm_sq() - 1.0) < 1e-12);
      CHECK(s.u.imag() == 0.0);
      CHECK(s.u.real() >= 0.0);
      const Eigen::Vector2cd r = bdg_hamiltonian(h, k) * nambu(s) + 2.0 * dispersion(h, k) * nambu(s);
      CHECK(r.norm() < 1e-12);
    }
  }
  SUBCASE("continuous in h away from the gap closing") {
    const double k = 0.4;
    for (double h = -2.0; h < 2.0; h += 0.01) {
      const auto a = ground_state_amplitudes(h, k);
      const auto b = ground_state_amplitudes(h + 1e-7, k);
      CHECK(std::abs(a.u - b.u) + std::abs(a.v - b.v) < 1e-5);
    }
  }
  CHECK_THROWS_AS(ground_state_amplitudes(1.0, 0.0), DegenerateMode);
  CHECK_THROWS_AS(ground_state_amplitudes(-1.0, pi), DegenerateMode);
}

TEST_CASE("ground-state energy equals the sum of pair energies") {
  for (int n : {8, 64, 256}) {
    for (double h : {0.3, 1.0, 2.5}) {
      const auto grid = momentum_grid(n);
      const auto modes = ground_state(h, grid);
      double expected = 0.0, measured = 0.0;
      for (const auto& s : modes) {
        expected += -2.0 * dispersion(h, s.k);
        measured += (nambu(s).adjoint() * bdg_hamiltonian(h, s.k) * nambu(s))(0).real();
      }
      CHECK(std::abs(expected - measured) < 1e-9 * n);
    }
  }
}
