#pragma once

// Transverse-field Ising chain H(t) = -sum_i [ sx_i sx_{i+1} - h(t) sz_i ]
// in the even-parity sector, reduced to independent (k, -k) fermion pairs.
//
// Conventions (fixed once, checked against exact diagonalization):
//   sz_i = 2 n_i - 1, c_i = prod_{j<i}(-sz_j) s-_i, c_n = N^{-1/2} sum_k e^{ikn} c_k.
//   Each pair evolves in the two-state space {c_k^+ c_-k^+ |0>, |0>} with
//   amplitudes (v, u), which is also the Nambu basis (c_k, c_-k^+).  The
//   generator there is 2(h - cos k) Z + 2 sin k Y.

#include <cmath>
#include <complex>
#include <numbers>
#include <span>
#include <vector>

#include <Eigen/Core>

namespace tfim {

using complex = std::complex<double>;

struct DriveProtocol {
  double h = 1.0;      // static field
  double dh = 0.0;     // modulation amplitude
  double omega = std::numbers::pi;

  DriveProtocol() = default;
  DriveProtocol(double h, double dh, double omega);

  double field_at(double t) const noexcept { return h + dh * std::sin(omega * t); }
  double period() const noexcept { return 2.0 * std::numbers::pi / omega; }
  bool is_static() const noexcept { return dh == 0.0; }

  friend bool operator==(const DriveProtocol&, const DriveProtocol&) = default;
};

/// Antiperiodic momenta k_m = (2m+1)pi/N, m = 0 .. N/2-1.
class MomentumGrid {
public:
  explicit MomentumGrid(int chain_length);

  int chain_length() const noexcept { return n_; }
  std::size_t size() const noexcept { return k_.size(); }
  double operator[](std::size_t m) const { return k_[m]; }
  std::span<const double> values() const noexcept { return k_; }
  double spacing() const noexcept { return 2.0 * std::numbers::pi / n_; }

  friend bool operator==(const MomentumGrid&, const MomentumGrid&) = default;

private:
  int n_;
  std::vector<double> k_;
};

struct ModeState {
  double k = 0.0;
  complex u{1.0, 0.0};
  complex v{0.0, 0.0};
  long n_cycles = 0;

  double norm_sq() const noexcept { return std::norm(u) + std::norm(v); }
};

MomentumGrid momentum_grid(int chain_length);

double dispersion(double h, double k);

Eigen::Matrix2cd bdg_hamiltonian(double h, double k);

/// BCS amplitudes of the pair ground state, u real and nonnegative.
/// Throws DegenerateMode where the gap closes.
ModeState ground_state_amplitudes(double h, double k);

std::vector<ModeState> ground_state(double h, const MomentumGrid& grid);

}  // namespace tfim
