#pragma once

#include <map>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "tfim/entropy.hpp"

namespace tfim {

struct LinearFit {
  double slope = 0.0;
  double intercept = 0.0;
  double r2 = 0.0;
  double rss = 0.0;  // residual sum of squares
};

/// Ordinary least squares y = slope x + intercept.  r2 is 1 for a perfect
/// fit, including the degenerate constant-data case.
LinearFit fit_line(std::span<const double> x, std::span<const double> y);

enum class TailLaw { area, log };
std::string to_string(TailLaw law);

struct RegimeWindows {
  double volume_factor = 0.5;  // volume fit on l <= volume_factor * l_star
  double tail_factor = 2.0;    // tail fit on l >= tail_factor * l_star
  /// Residual rms below this (bits) counts as a perfect fit when comparing
  /// the area and log tail models.
  double entropy_resolution = 1e-3;
};

struct RegimeReport {
  double volume_slope = 0.0;
  double volume_intercept = 0.0;
  std::pair<int, int> volume_fit_range{0, 0};
  double volume_r2 = 0.0;
  int volume_samples = 0;

  TailLaw tail_law = TailLaw::area;
  std::pair<double, double> tail_fit_params{0.0, 0.0};  // (coefficient, offset); coefficient 0 for area
  std::pair<int, int> tail_fit_range{0, 0};
  double tail_r2 = 0.0;
  int tail_samples = 0;
  double area_rms = 0.0;
  double log_rms = 0.0;

  double l_star_predicted = 0.0;
  double l_star_observed = 0.0;  // NaN when the fits never cross
};

/// l* = 2 v_max n T.
double predict_crossover(double v_max, double n_cycles, double period);

/// Volume fit below the crossover, area-vs-log fit above it.  The tail window
/// is capped at l = N/2 since S(l) = S(N - l) on a ring.
RegimeReport classify_regimes(const EntropyProfile& profile, double l_star, const RegimeWindows& windows = {});

using Curve = std::vector<std::pair<double, double>>;  // (h, S_half)

struct PeakEstimate {
  double h_c = 0.0;
  double s_peak = 0.0;  // parabola value at h_c
};

/// Vertex of the parabola through the sample maximum and its two neighbours.
PeakEstimate pseudo_critical_point(const Curve& curve);

struct FssDataset {
  std::map<int, Curve> curves;
  double nu = 1.0;
  std::map<int, PeakEstimate> peaks;  // h_c^N and S_{N/2}(h_c^N)
};

/// Resolves every curve's peak; curves without an interior peak are removed
/// and returned as (N, reason).
std::vector<std::pair<int, std::string>> resolve_peaks(FssDataset& data);

/// (N^{1/nu} (h - h_c^N), S - S(h_c^N)) per curve, sorted by x.  nu may be
/// +infinity (unscaled abscissa).
std::map<int, Curve> fss_transform(const FssDataset& data, double nu);

struct CollapseReport {
  double quality = 0.0;        // mean squared distance, all overlapping points
  double left_quality = 0.0;   // x < 0 only (0 when none)
  double right_quality = 0.0;  // x >= 0 only
  int points = 0;
};

CollapseReport collapse_report(const FssDataset& data, double nu);
double fss_collapse(const FssDataset& data);
double fss_collapse(const FssDataset& data, double nu);

}  // namespace tfim
