#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include <Eigen/Core>

#include "tfim/mode_space.hpp"

namespace tfim {

/// Translation-invariant two-point kernels of a paired Gaussian state,
///   f[r] = <c_m^+ c_{m+r}>,  g[r] = <c_m c_{m+r}>,  r = 0 .. N-1.
///
/// The fermions obey antiperiodic boundary conditions in the even-parity
/// sector, so f[N - r] = -f[r]; use f_at/g_at for signed displacements.
struct PairCorrelators {
  int chain_length = 0;
  std::vector<complex> f;
  std::vector<complex> g;

  /// Displacement d in (-N, N).
  complex f_at(int d) const {
    return d >= 0 ? f[static_cast<std::size_t>(d)] : std::conj(f[static_cast<std::size_t>(-d)]);
  }
  complex g_at(int d) const {
    return d >= 0 ? g[static_cast<std::size_t>(d)] : -g[static_cast<std::size_t>(-d)];
  }
};

/// Eq.-2 layout [[alpha, beta^+], [beta, 1 - alpha]] for sites 0 .. l-1 with
/// alpha_nm = <c_n c_m^+> and beta_nm = <c_n c_m>.
struct CorrelationBlock {
  int l = 0;
  std::int64_t n_cycles = 0;
  Eigen::MatrixXcd gamma;
};

PairCorrelators pair_correlators(std::span<const ModeState> modes, int chain_length);

CorrelationBlock block_correlation_matrix(const PairCorrelators& corr, int l, std::int64_t n_cycles = 0);

}  // namespace tfim
