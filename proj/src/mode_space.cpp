#include "tfim/mode_space.hpp"

#include <cmath>
#include <string>

#include "tfim/errors.hpp"

namespace tfim {

namespace {
// Below this the pair is gapless to rounding: sin(pi) alone is ~1e-16.
constexpr double kGapFloor = 1e-12;
}  // namespace

DriveProtocol::DriveProtocol(double h_, double dh_, double omega_) : h(h_), dh(dh_), omega(omega_) {
  if (!(omega_ > 0.0) || !std::isfinite(omega_))
    throw InvalidArgument("drive: omega must be finite and positive, got " + std::to_string(omega_));
  if (!std::isfinite(h_) || !std::isfinite(dh_))
    throw InvalidArgument("drive: h and dh must be finite");
}

MomentumGrid::MomentumGrid(int chain_length) : n_(chain_length) {
  if (chain_length < 2 || chain_length % 2 != 0)
    throw InvalidArgument("momentum grid: chain length must be even and >= 2, got " +
                          std::to_string(chain_length));
  k_.resize(static_cast<std::size_t>(chain_length / 2));
  for (std::size_t m = 0; m < k_.size(); ++m)
    k_[m] = static_cast<double>(2 * m + 1) * std::numbers::pi / chain_length;
}

MomentumGrid momentum_grid(int chain_length) { return MomentumGrid(chain_length); }

double dispersion(double h, double k) { return std::hypot(h - std::cos(k), std::sin(k)); }

Eigen::Matrix2cd bdg_hamiltonian(double h, double k) {
  const double a = 2.0 * (h - std::cos(k));
  const double b = 2.0 * std::sin(k);
  Eigen::Matrix2cd m;
  m << complex(a, 0.0), complex(0.0, -b),
       complex(0.0, b), complex(-a, 0.0);
  return m;
}

ModeState ground_state_amplitudes(double h, double k) {
  const double a = 2.0 * (h - std::cos(k));
  const double b = 2.0 * std::sin(k);
  const double e = std::hypot(a, b);
  if (!(e > kGapFloor))
    throw DegenerateMode("ground state: gap closes at h=" + std::to_string(h) +
                         ", k=" + std::to_string(k));

  // Eigenvector of aZ + bY for -e, written as (v, u).  Two algebraically equal
  // forms; pick the one without cancellation.
  double u = 0.0;
  complex v;
  if (a >= 0.0) {
    u = a + e;
    v = complex(0.0, b);
  } else {
    u = std::abs(b);
    v = complex(0.0, b >= 0.0 ? e - a : a - e);
  }
  const double norm = std::sqrt(u * u + std::norm(v));
  return ModeState{k, complex(u / norm, 0.0), v / norm, 0};
}

std::vector<ModeState> ground_state(double h, const MomentumGrid& grid) {
  std::vector<ModeState> modes;
  modes.reserve(grid.size());
  for (double k : grid.values())
    modes.push_back(ground_state_amplitudes(h, k));
  return modes;
}

}  // namespace tfim
