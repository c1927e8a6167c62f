#include "tfim/scaling.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <sstream>

#include "tfim/errors.hpp"

namespace tfim {

LinearFit fit_line(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size() || x.size() < 2)
    throw InvalidArgument("fit_line: need two or more (x, y) pairs of equal length");
  const auto n = static_cast<double>(x.size());
  const double mx = std::accumulate(x.begin(), x.end(), 0.0) / n;
  const double my = std::accumulate(y.begin(), y.end(), 0.0) / n;
  double sxx = 0.0, sxy = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
    syy += (y[i] - my) * (y[i] - my);
  }
  if (sxx == 0.0)
    throw InvalidArgument("fit_line: abscissae are all equal");
  LinearFit fit;
  fit.slope = sxy / sxx;
  fit.intercept = my - fit.slope * mx;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double r = y[i] - (fit.slope * x[i] + fit.intercept);
    fit.rss += r * r;
  }
  fit.r2 = syy > 0.0 ? 1.0 - fit.rss / syy : 1.0;
  return fit;
}

std::string to_string(TailLaw law) { return law == TailLaw::area ? "area" : "log"; }

double predict_crossover(double v_max, double n_cycles, double period) {
  if (!(v_max > 0.0) || !(n_cycles > 0.0) || !(period > 0.0))
    throw InvalidArgument("predict_crossover: velocity, cycle count and period must be positive");
  return 2.0 * v_max * n_cycles * period;
}

namespace {

double bic(double rms, double resolution, std::size_t n, int params) {
  const double r = std::max(rms, resolution);
  const auto dn = static_cast<double>(n);
  return dn * std::log(r * r) + params * std::log(dn);
}

// First upward crossing of the volume line through the log tail.
double line_meets_log(double a, double b, double c, double d, double l_max) {
  auto gap = [&](double l) { return a * l + b - (c * std::log2(l) + d); };
  constexpr int kScan = 4000;
  const double lo = 0.5, hi = 4.0 * l_max;
  double prev_l = lo, prev = gap(lo);
  for (int i = 1; i <= kScan; ++i) {
    const double l = lo * std::pow(hi / lo, static_cast<double>(i) / kScan);
    const double cur = gap(l);
    if (prev < 0.0 && cur >= 0.0) {
      double left = prev_l, right = l;
      for (int it = 0; it < 200; ++it) {
        const double mid = 0.5 * (left + right);
        (gap(mid) < 0.0 ? left : right) = mid;
      }
      return 0.5 * (left + right);
    }
    prev_l = l;
    prev = cur;
  }
  return std::numeric_limits<double>::quiet_NaN();
}

}  // namespace

RegimeReport classify_regimes(const EntropyProfile& profile, double l_star, const RegimeWindows& windows) {
  if (!(l_star > 0.0) || !std::isfinite(l_star))
    throw InvalidArgument("classify_regimes: l_star must be positive and finite");
  if (profile.samples.size() < 8)
    throw InsufficientData("profile: " + std::to_string(profile.samples.size()) + " samples, need >= 8");

  const double volume_edge = windows.volume_factor * l_star;
  const double tail_edge = windows.tail_factor * l_star;
  const int half = profile.chain_length / 2;

  std::vector<double> vl, vs, tl, ts;
  for (const auto& s : profile.samples) {
    if (s.l <= volume_edge) {
      vl.push_back(s.l);
      vs.push_back(s.entropy);
    }
    if (s.l >= tail_edge && s.l <= half) {
      tl.push_back(s.l);
      ts.push_back(s.entropy);
    }
  }
  auto require = [](const std::vector<double>& w, const std::string& name) {
    if (w.size() < 3) {
      std::ostringstream msg;
      msg << name << " window: " << w.size() << " samples, need >= 3";
      throw InsufficientData(msg.str());
    }
  };
  {
    std::ostringstream v, t;
    v << "volume (l <= " << volume_edge << ")";
    t << "tail (" << tail_edge << " <= l <= " << half << ")";
    require(vl, v.str());
    require(tl, t.str());
  }

  RegimeReport report;
  report.l_star_predicted = l_star;

  const auto volume = fit_line(vl, vs);
  report.volume_slope = volume.slope;
  report.volume_intercept = volume.intercept;
  report.volume_r2 = volume.r2;
  report.volume_fit_range = {static_cast<int>(vl.front()), static_cast<int>(vl.back())};
  report.volume_samples = static_cast<int>(vl.size());

  const auto n = ts.size();
  const double mean = std::accumulate(ts.begin(), ts.end(), 0.0) / static_cast<double>(n);
  double rss_area = 0.0;
  for (double s : ts)
    rss_area += (s - mean) * (s - mean);
  std::vector<double> log_l(tl.size());
  std::transform(tl.begin(), tl.end(), log_l.begin(), [](double l) { return std::log2(l); });
  const auto logfit = fit_line(log_l, ts);

  report.area_rms = std::sqrt(rss_area / static_cast<double>(n));
  report.log_rms = std::sqrt(logfit.rss / static_cast<double>(n));
  report.tail_fit_range = {static_cast<int>(tl.front()), static_cast<int>(tl.back())};
  report.tail_samples = static_cast<int>(n);

  const bool log_wins = bic(report.log_rms, windows.entropy_resolution, n, 2) <
                        bic(report.area_rms, windows.entropy_resolution, n, 1);
  if (log_wins) {
    report.tail_law = TailLaw::log;
    report.tail_fit_params = {logfit.slope, logfit.intercept};
    report.tail_r2 = logfit.r2;
    report.l_star_observed =
        line_meets_log(volume.slope, volume.intercept, logfit.slope, logfit.intercept, profile.chain_length);
  } else {
    report.tail_law = TailLaw::area;
    report.tail_fit_params = {0.0, mean};
    report.tail_r2 = rss_area > 0.0 ? 0.0 : 1.0;
    const double cross = volume.slope > 0.0 ? (mean - volume.intercept) / volume.slope : -1.0;
    report.l_star_observed = cross > 0.0 ? cross : std::numeric_limits<double>::quiet_NaN();
  }
  return report;
}

PeakEstimate pseudo_critical_point(const Curve& curve) {
  if (curve.size() < 5)
    throw InvalidArgument("pseudo_critical_point: need >= 5 samples, got " + std::to_string(curve.size()));
  Curve c = curve;
  std::sort(c.begin(), c.end());
  const auto top = static_cast<std::size_t>(
      std::max_element(c.begin(), c.end(), [](const auto& a, const auto& b) { return a.second < b.second; }) -
      c.begin());
  if (top == 0 || top + 1 == c.size()) {
    std::ostringstream msg;
    msg << "maximum at the edge of the sampled range (h=" << c[top].first << ")";
    throw NoInteriorPeak(msg.str());
  }
  const auto [x0, y0] = c[top - 1];
  const auto [x1, y1] = c[top];
  const auto [x2, y2] = c[top + 1];
  const double num = (x1 - x0) * (x1 - x0) * (y1 - y2) - (x1 - x2) * (x1 - x2) * (y1 - y0);
  const double den = (x1 - x0) * (y1 - y2) - (x1 - x2) * (y1 - y0);
  if (den == 0.0)
    throw NoInteriorPeak("flat top: parabola through the maximum is degenerate");
  const double xv = x1 - 0.5 * num / den;
  // Lagrange form evaluated at the vertex
  const double s = y0 * (xv - x1) * (xv - x2) / ((x0 - x1) * (x0 - x2)) +
                   y1 * (xv - x0) * (xv - x2) / ((x1 - x0) * (x1 - x2)) +
                   y2 * (xv - x0) * (xv - x1) / ((x2 - x0) * (x2 - x1));
  return {xv, s};
}

std::vector<std::pair<int, std::string>> resolve_peaks(FssDataset& data) {
  std::vector<std::pair<int, std::string>> dropped;
  data.peaks.clear();
  for (auto it = data.curves.begin(); it != data.curves.end();) {
    try {
      data.peaks[it->first] = pseudo_critical_point(it->second);
      ++it;
    } catch (const NoInteriorPeak& e) {
      dropped.emplace_back(it->first, e.what());
      it = data.curves.erase(it);
    } catch (const InvalidArgument& e) {
      dropped.emplace_back(it->first, e.what());
      it = data.curves.erase(it);
    }
  }
  return dropped;
}

std::map<int, Curve> fss_transform(const FssDataset& data, double nu) {
  if (!(nu > 0.0))
    throw InvalidArgument("fss_transform: nu must be positive");
  std::map<int, Curve> out;
  for (const auto& [n, curve] : data.curves) {
    const auto peak = data.peaks.find(n);
    if (peak == data.peaks.end())
      throw InvalidArgument("fss_transform: no pseudo-critical point for N=" + std::to_string(n));
    const double scale = std::isinf(nu) ? 1.0 : std::pow(static_cast<double>(n), 1.0 / nu);
    Curve t;
    t.reserve(curve.size());
    for (const auto& [h, s] : curve)
      t.emplace_back(scale * (h - peak->second.h_c), s - peak->second.s_peak);
    std::sort(t.begin(), t.end());
    out.emplace(n, std::move(t));
  }
  return out;
}

namespace {

// Piecewise-linear interpolant through points sorted by x; repeated
// abscissae are merged to their mean.
class Interpolant {
public:
  explicit Interpolant(Curve pts) {
    std::sort(pts.begin(), pts.end());
    for (std::size_t i = 0; i < pts.size();) {
      std::size_t j = i;
      double sum = 0.0;
      while (j < pts.size() && pts[j].first == pts[i].first)
        sum += pts[j++].second;
      x_.push_back(pts[i].first);
      y_.push_back(sum / static_cast<double>(j - i));
      i = j;
    }
  }
  bool covers(double x) const { return !x_.empty() && x >= x_.front() && x <= x_.back(); }
  double operator()(double x) const {
    const auto hi = static_cast<std::size_t>(std::lower_bound(x_.begin(), x_.end(), x) - x_.begin());
    if (x_[hi] == x)
      return y_[hi];
    const std::size_t lo = hi - 1;
    const double w = (x - x_[lo]) / (x_[hi] - x_[lo]);
    return (1.0 - w) * y_[lo] + w * y_[hi];
  }

private:
  std::vector<double> x_, y_;
};

}  // namespace

CollapseReport collapse_report(const FssDataset& data, double nu) {
  CollapseReport report;
  const auto curves = fss_transform(data, nu);
  if (curves.size() < 2)
    return report;

  double total = 0.0, left = 0.0, right = 0.0;
  int n_left = 0, n_right = 0;
  for (const auto& [n, curve] : curves) {
    Curve others;
    for (const auto& [m, other] : curves)
      if (m != n)
        others.insert(others.end(), other.begin(), other.end());
    const Interpolant reference(std::move(others));
    for (const auto& [x, y] : curve) {
      if (!reference.covers(x))
        continue;
      const double d = y - reference(x);
      total += d * d;
      ++report.points;
      if (x < 0.0) {
        left += d * d;
        ++n_left;
      } else {
        right += d * d;
        ++n_right;
      }
    }
  }
  if (report.points == 0)
    throw NoOverlap("fss_collapse: transformed curves share no abscissa range");
  report.quality = total / report.points;
  report.left_quality = n_left ? left / n_left : 0.0;
  report.right_quality = n_right ? right / n_right : 0.0;
  return report;
}

double fss_collapse(const FssDataset& data, double nu) { return collapse_report(data, nu).quality; }
double fss_collapse(const FssDataset& data) { return fss_collapse(data, data.nu); }

}  // namespace tfim
