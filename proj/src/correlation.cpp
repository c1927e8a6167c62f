#include "tfim/correlation.hpp"

#include <cmath>
#include <string>

#include "tfim/errors.hpp"

namespace tfim {

PairCorrelators pair_correlators(std::span<const ModeState> modes, int chain_length) {
  const MomentumGrid grid(chain_length);
  if (modes.size() != grid.size())
    throw InvalidArgument("pair_correlators: " + std::to_string(modes.size()) + " modes for N=" +
                          std::to_string(chain_length));
  for (std::size_t m = 0; m < modes.size(); ++m) {
    if (std::abs(modes[m].k - grid[m]) > 1e-12)
      throw InvalidArgument("pair_correlators: mode " + std::to_string(m) + " is not on the N=" +
                            std::to_string(chain_length) + " grid");
    if (std::abs(modes[m].norm_sq() - 1.0) > 1e-9)
      throw InvalidArgument("pair_correlators: mode " + std::to_string(m) + " is not normalized");
  }

  // k_m r = pi (2m+1) r / N, reduced exactly modulo 2N before the table lookup.
  const auto two_n = static_cast<std::int64_t>(2 * chain_length);
  std::vector<double> cos_table(static_cast<std::size_t>(two_n));
  std::vector<double> sin_table(static_cast<std::size_t>(two_n));
  for (std::int64_t j = 0; j < two_n; ++j) {
    const double angle = std::numbers::pi * static_cast<double>(j) / chain_length;
    cos_table[static_cast<std::size_t>(j)] = std::cos(angle);
    sin_table[static_cast<std::size_t>(j)] = std::sin(angle);
  }

  std::vector<double> occupation(modes.size());
  std::vector<complex> pairing(modes.size());
  for (std::size_t m = 0; m < modes.size(); ++m) {
    occupation[m] = std::norm(modes[m].v);
    pairing[m] = std::conj(modes[m].u) * modes[m].v;
  }

  PairCorrelators out;
  out.chain_length = chain_length;
  out.f.resize(static_cast<std::size_t>(chain_length));
  out.g.resize(static_cast<std::size_t>(chain_length));
  const double scale = 2.0 / chain_length;

#pragma omp parallel for schedule(static)
  for (int r = 0; r < chain_length; ++r) {
    double fr = 0.0;
    complex gr = 0.0;
    for (std::size_t m = 0; m < modes.size(); ++m) {
      const auto j = static_cast<std::size_t>((static_cast<std::int64_t>(2 * m + 1) * r) % two_n);
      fr += occupation[m] * cos_table[j];
      gr += pairing[m] * sin_table[j];
    }
    out.f[static_cast<std::size_t>(r)] = complex(scale * fr, 0.0);
    out.g[static_cast<std::size_t>(r)] = complex(0.0, scale) * gr;
  }
  return out;
}

CorrelationBlock block_correlation_matrix(const PairCorrelators& corr, int l, std::int64_t n_cycles) {
  if (l < 1 || l > corr.chain_length)
    throw InvalidArgument("block_correlation_matrix: block size " + std::to_string(l) + " outside [1, " +
                          std::to_string(corr.chain_length) + "]");
  const auto n = static_cast<Eigen::Index>(l);
  Eigen::MatrixXcd alpha(n, n), beta(n, n);
  for (Eigen::Index a = 0; a < n; ++a)
    for (Eigen::Index b = 0; b < n; ++b) {
      const int d = static_cast<int>(a - b);
      alpha(a, b) = (a == b ? 1.0 : 0.0) - corr.f_at(d);
      beta(a, b) = corr.g_at(-d);
    }

  CorrelationBlock block;
  block.l = l;
  block.n_cycles = n_cycles;
  block.gamma.resize(2 * n, 2 * n);
  block.gamma.topLeftCorner(n, n) = alpha;
  block.gamma.topRightCorner(n, n) = beta.adjoint();
  block.gamma.bottomLeftCorner(n, n) = beta;
  block.gamma.bottomRightCorner(n, n) = Eigen::MatrixXcd::Identity(n, n) - alpha;
  return block;
}

}  // namespace tfim
