#include "tfim/experiment.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <limits>
#include <set>
#include <sstream>

#include "tfim/correlation.hpp"
#include "tfim/entropy.hpp"
#include "tfim/errors.hpp"
#include "tfim/exact_chain.hpp"
#include "tfim/spectrum_cache.hpp"
#include "tfim/tables.hpp"

namespace tfim {

using nlohmann::json;
namespace fs = std::filesystem;

// ---------------------------------------------------------------- config

std::vector<int> BlockSizeRule::resolve(int chain_length) const {
  const int hi = max > 0 ? max : chain_length / 2;
  if (kind == Kind::list) {
    std::vector<int> out = sizes;
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
  }
  if (min < 1 || hi < min || hi > chain_length)
    throw ConfigError("block_sizes: need 1 <= min <= max <= N");
  std::vector<int> out;
  if (kind == Kind::linear) {
    for (int l = min; l <= hi; l += step)
      out.push_back(l);
    if (out.back() != hi)
      out.push_back(hi);
    return out;
  }
  for (int i = 0; i < count; ++i) {
    const double frac = count > 1 ? static_cast<double>(i) / (count - 1) : 0.0;
    const int l = static_cast<int>(std::lround(min * std::pow(static_cast<double>(hi) / min, frac)));
    if (out.empty() || l > out.back())
      out.push_back(l);
  }
  return out;
}

std::vector<double> FieldSweep::values() const {
  std::vector<double> out(static_cast<std::size_t>(count));
  for (int i = 0; i < count; ++i)
    out[static_cast<std::size_t>(i)] = count > 1 ? h_min + (h_max - h_min) * i / (count - 1) : h_min;
  return out;
}

void ExperimentConfig::validate() const {
  auto fail = [](const std::string& what) { throw ConfigError(what); };
  if (chain_length < 2 || chain_length % 2)
    fail("chain_length must be even and >= 2");
  if (!(drive.omega > 0.0) || !std::isfinite(drive.omega) || !std::isfinite(drive.h) || !std::isfinite(drive.dh))
    fail("drive: omega must be positive, all values finite");
  if (cycles.empty() || std::any_of(cycles.begin(), cycles.end(), [](auto n) { return n < 0; }))
    fail("cycles: need one or more nonnegative cycle counts");
  if (steps_per_period < 1)
    fail("steps_per_period must be >= 1");
  if (block_sizes.kind == BlockSizeRule::Kind::geometric && block_sizes.count < 1)
    fail("block_sizes.count must be >= 1");
  if (block_sizes.kind == BlockSizeRule::Kind::linear && block_sizes.step < 1)
    fail("block_sizes.step must be >= 1");
  for (int l : block_sizes.resolve(chain_length))
    if (l < 1 || l > chain_length)
      fail("block size " + std::to_string(l) + " outside [1, N]");
  if (field_sweep && (field_sweep->count < 1 || !(field_sweep->h_max >= field_sweep->h_min)))
    fail("field_sweep: need count >= 1 and h_max >= h_min");
  for (int n : fss.sizes)
    if (n < 2 || n % 2)
      fail("fss.sizes: chain lengths must be even and >= 2");
  if (!(fss.nu > 0.0))
    fail("fss.nu must be positive");
  for (double nu : fss.compare_nu)
    if (!(nu > 0.0))
      fail("fss.compare_nu entries must be positive");
  for (int n : oracle.sizes)
    if (n < 2 || n % 2 || n > exact::SpinChain::kMaxSites)
      fail("oracle.sizes: chain lengths must be even and in [2, 16]");
  if (oracle.steps_per_period < 1 || !(oracle.tolerance > 0.0))
    fail("oracle: steps_per_period >= 1 and tolerance > 0 required");
  if (!(windows.volume_factor > 0.0) || !(windows.tail_factor > windows.volume_factor) ||
      !(windows.entropy_resolution >= 0.0))
    fail("analysis: need 0 < volume_factor < tail_factor and entropy_resolution >= 0");
}

namespace {

void reject_unknown(const json& obj, std::initializer_list<const char*> keys, const std::string& where) {
  if (!obj.is_object())
    throw ConfigError(where + ": expected an object");
  const std::set<std::string> allowed(keys.begin(), keys.end());
  for (const auto& [key, value] : obj.items())
    if (!allowed.count(key))
      throw ConfigError("unknown key '" + (where.empty() ? key : where + "." + key) + "'");
}

template <class T>
void read(const json& obj, const char* key, T& target, const std::string& where) {
  if (!obj.contains(key))
    return;
  try {
    target = obj.at(key).get<T>();
  } catch (const json::exception& e) {
    throw ConfigError((where.empty() ? std::string(key) : where + "." + key) + ": " + e.what());
  }
}

}  // namespace

ExperimentConfig config_from_json(const json& doc) {
  ExperimentConfig c;
  reject_unknown(doc,
                 {"chain_length", "drive", "cycles", "block_sizes", "field_sweep", "fss", "oracle", "analysis",
                  "steps_per_period", "output_dir"},
                 "");
  read(doc, "chain_length", c.chain_length, "");
  read(doc, "cycles", c.cycles, "");
  read(doc, "steps_per_period", c.steps_per_period, "");
  read(doc, "output_dir", c.output_dir, "");

  if (doc.contains("drive")) {
    const auto& d = doc["drive"];
    reject_unknown(d, {"h", "dh", "omega"}, "drive");
    read(d, "h", c.drive.h, "drive");
    read(d, "dh", c.drive.dh, "drive");
    read(d, "omega", c.drive.omega, "drive");
  }
  if (doc.contains("block_sizes")) {
    const auto& b = doc["block_sizes"];
    if (b.is_array()) {
      c.block_sizes.kind = BlockSizeRule::Kind::list;
      read(doc, "block_sizes", c.block_sizes.sizes, "");
    } else {
      reject_unknown(b, {"rule", "count", "step", "min", "max"}, "block_sizes");
      std::string rule = "geometric";
      read(b, "rule", rule, "block_sizes");
      if (rule == "geometric")
        c.block_sizes.kind = BlockSizeRule::Kind::geometric;
      else if (rule == "linear")
        c.block_sizes.kind = BlockSizeRule::Kind::linear;
      else
        throw ConfigError("block_sizes.rule: expected 'geometric' or 'linear', got '" + rule + "'");
      read(b, "count", c.block_sizes.count, "block_sizes");
      read(b, "step", c.block_sizes.step, "block_sizes");
      read(b, "min", c.block_sizes.min, "block_sizes");
      read(b, "max", c.block_sizes.max, "block_sizes");
    }
  }
  if (doc.contains("field_sweep") && !doc["field_sweep"].is_null()) {
    const auto& s = doc["field_sweep"];
    reject_unknown(s, {"h_min", "h_max", "count"}, "field_sweep");
    FieldSweep sweep;
    read(s, "h_min", sweep.h_min, "field_sweep");
    read(s, "h_max", sweep.h_max, "field_sweep");
    read(s, "count", sweep.count, "field_sweep");
    c.field_sweep = sweep;
  }
  if (doc.contains("fss")) {
    const auto& f = doc["fss"];
    reject_unknown(f, {"sizes", "nu", "compare_nu"}, "fss");
    read(f, "sizes", c.fss.sizes, "fss");
    read(f, "nu", c.fss.nu, "fss");
    read(f, "compare_nu", c.fss.compare_nu, "fss");
  }
  if (doc.contains("oracle")) {
    const auto& o = doc["oracle"];
    reject_unknown(o, {"sizes", "fields", "cycles", "steps_per_period", "tolerance"}, "oracle");
    read(o, "sizes", c.oracle.sizes, "oracle");
    read(o, "fields", c.oracle.fields, "oracle");
    read(o, "cycles", c.oracle.cycles, "oracle");
    read(o, "steps_per_period", c.oracle.steps_per_period, "oracle");
    read(o, "tolerance", c.oracle.tolerance, "oracle");
  }
  if (doc.contains("analysis")) {
    const auto& a = doc["analysis"];
    reject_unknown(a, {"volume_factor", "tail_factor", "entropy_resolution"}, "analysis");
    read(a, "volume_factor", c.windows.volume_factor, "analysis");
    read(a, "tail_factor", c.windows.tail_factor, "analysis");
    read(a, "entropy_resolution", c.windows.entropy_resolution, "analysis");
  }
  c.validate();
  return c;
}

json config_to_json(const ExperimentConfig& c) {
  json doc;
  doc["chain_length"] = c.chain_length;
  doc["drive"] = {{"h", c.drive.h}, {"dh", c.drive.dh}, {"omega", c.drive.omega}};
  doc["cycles"] = c.cycles;
  switch (c.block_sizes.kind) {
    case BlockSizeRule::Kind::list:
      doc["block_sizes"] = c.block_sizes.sizes;
      break;
    case BlockSizeRule::Kind::geometric:
      doc["block_sizes"] = {{"rule", "geometric"},
                            {"count", c.block_sizes.count},
                            {"min", c.block_sizes.min},
                            {"max", c.block_sizes.max}};
      break;
    case BlockSizeRule::Kind::linear:
      doc["block_sizes"] = {{"rule", "linear"},
                            {"step", c.block_sizes.step},
                            {"min", c.block_sizes.min},
                            {"max", c.block_sizes.max}};
      break;
  }
  if (c.field_sweep)
    doc["field_sweep"] = {
        {"h_min", c.field_sweep->h_min}, {"h_max", c.field_sweep->h_max}, {"count", c.field_sweep->count}};
  doc["fss"] = {{"sizes", c.fss.sizes}, {"nu", c.fss.nu}, {"compare_nu", c.fss.compare_nu}};
  doc["oracle"] = {{"sizes", c.oracle.sizes},
                   {"fields", c.oracle.fields},
                   {"cycles", c.oracle.cycles},
                   {"steps_per_period", c.oracle.steps_per_period},
                   {"tolerance", c.oracle.tolerance}};
  doc["analysis"] = {{"volume_factor", c.windows.volume_factor},
                     {"tail_factor", c.windows.tail_factor},
                     {"entropy_resolution", c.windows.entropy_resolution}};
  doc["steps_per_period"] = c.steps_per_period;
  doc["output_dir"] = c.output_dir;
  return doc;
}

ExperimentConfig load_config(const fs::path& file) {
  std::ifstream in(file);
  if (!in)
    throw ConfigError("cannot read config file " + file.string());
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::parse_error& e) {
    throw ConfigError(file.string() + ": " + e.what());
  }
  return config_from_json(doc);
}

// ---------------------------------------------------------------- runs

namespace {

fs::path prepare_output(const ExperimentConfig& config) {
  const fs::path dir(config.output_dir);
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec || !fs::is_directory(dir))
    throw IoError("cannot create output directory " + dir.string() + (ec ? ": " + ec.message() : ""));
  return dir;
}

json manifest(const std::string& command, const ExperimentConfig& config, const std::vector<fs::path>& files) {
  json doc;
  doc["schema_version"] = kManifestSchemaVersion;
  doc["code_version"] = kCodeVersion;
  doc["command"] = command;
  doc["config"] = config_to_json(config);
  doc["integrator"] = {{"scheme", "magnus4-gauss-legendre-su2"}, {"steps_per_period", config.steps_per_period}};
  doc["momentum_sector"] = "antiperiodic";
  json names = json::array();
  for (const auto& f : files)
    names.push_back(f.filename().string());
  doc["files"] = names;
  return doc;
}

void write_profile(const fs::path& file, const EntropyProfile& profile) {
  std::vector<std::vector<double>> rows;
  rows.reserve(profile.samples.size());
  for (const auto& s : profile.samples)
    rows.push_back({static_cast<double>(s.l), s.entropy});
  write_table(file, {"l", "S_bits"}, rows);
}

json to_json(const RegimeReport& r) {
  return {{"volume_slope", r.volume_slope},
          {"volume_intercept", r.volume_intercept},
          {"volume_fit_range", {r.volume_fit_range.first, r.volume_fit_range.second}},
          {"volume_r2", r.volume_r2},
          {"volume_samples", r.volume_samples},
          {"tail_law", to_string(r.tail_law)},
          {"tail_fit_params", {r.tail_fit_params.first, r.tail_fit_params.second}},
          {"tail_fit_range", {r.tail_fit_range.first, r.tail_fit_range.second}},
          {"tail_r2", r.tail_r2},
          {"tail_samples", r.tail_samples},
          {"area_rms", r.area_rms},
          {"log_rms", r.log_rms},
          {"l_star_predicted", r.l_star_predicted},
          {"l_star_observed", r.l_star_observed}};
}

std::string cycles_tag(std::int64_t n) { return "n" + std::to_string(n); }

}  // namespace

GroundStateRun run_ground_state(const ExperimentConfig& input, const RunOptions& options) {
  ExperimentConfig config = input;
  config.drive.dh = 0.0;
  config.validate();
  const auto sizes = config.block_sizes.resolve(config.chain_length);
  const MomentumGrid grid(config.chain_length);
  const auto modes = ground_state(config.drive.h, grid);
  const auto corr = pair_correlators(modes, config.chain_length);

  GroundStateRun run;
  run.profile = entropy_profile(corr, sizes, 0, config.drive);
  if (options.write_files) {
    const auto dir = prepare_output(config);
    run.files.push_back(dir / "ground_state.tsv");
    write_profile(run.files.back(), run.profile);
    write_json(dir / "manifest.json", manifest("ground-state", config, run.files));
  }
  return run;
}

DrivenRun run_driven_profile(const ExperimentConfig& config, const RunOptions& options) {
  config.validate();
  const auto sizes = config.block_sizes.resolve(config.chain_length);
  const MomentumGrid grid(config.chain_length);
  const auto spectrum = cached_floquet_spectrum(config.drive, grid, config.steps_per_period, options.cache_dir);
  const auto initial = ground_state(config.drive.h, grid);

  DrivenRun run;
  run.v_max = spectrum.v_max;
  run.period = spectrum.period();
  std::optional<fs::path> dir;
  if (options.write_files)
    dir = prepare_output(config);

  if (dir) {
    std::vector<std::vector<double>> rows;
    for (std::size_t m = 0; m < spectrum.modes.size(); ++m) {
      const bool interior = m > 0 && m + 1 < spectrum.modes.size();
      rows.push_back({spectrum.modes[m].k, spectrum.modes[m].mu,
                      interior ? spectrum.v_group[m - 1] : std::numeric_limits<double>::quiet_NaN()});
    }
    run.files.push_back(*dir / "spectrum.tsv");
    write_table(run.files.back(), {"k", "mu", "v_group"}, rows);
  }

  for (const auto n : config.cycles) {
    DrivenCycleResult result;
    const auto modes = evolve_modes(initial, spectrum, n);
    const auto corr = pair_correlators(modes, config.chain_length);
    result.profile = entropy_profile(corr, sizes, n, config.drive);
    if (n == 0) {
      result.regime_error = "no crossover at n=0";
    } else if (!(spectrum.v_max > 0.0)) {
      result.regime_error = "v_max is zero";
    } else {
      const double l_star = predict_crossover(spectrum.v_max, static_cast<double>(n), spectrum.period());
      try {
        result.regimes = classify_regimes(result.profile, l_star, config.windows);
      } catch (const InsufficientData& e) {
        result.regime_error = e.what();
      }
    }
    if (dir) {
      run.files.push_back(*dir / ("profile_" + cycles_tag(n) + ".tsv"));
      write_profile(run.files.back(), result.profile);
      json report = {{"n_cycles", n}, {"v_max", spectrum.v_max}, {"period", spectrum.period()}};
      if (result.regimes)
        report["regimes"] = to_json(*result.regimes);
      else
        report["error"] = result.regime_error;
      run.files.push_back(*dir / ("regimes_" + cycles_tag(n) + ".json"));
      write_json(run.files.back(), report);
    }
    run.cycles.push_back(std::move(result));
  }
  if (dir) {
    auto doc = manifest("drive", config, run.files);
    doc["spectrum_cache_key"] = [&] {
      std::ostringstream key;
      key << std::hex << std::setw(16) << std::setfill('0')
          << spectrum_key(config.drive, config.chain_length, config.steps_per_period);
      return key.str();
    }();
    write_json(*dir / "manifest.json", doc);
  }
  return run;
}

double half_chain_entropy(const DriveProtocol& drive, int chain_length, std::int64_t n_cycles, int steps,
                          const std::optional<fs::path>& cache_dir) {
  const MomentumGrid grid(chain_length);
  auto modes = ground_state(drive.h, grid);
  if (n_cycles > 0) {
    const auto spectrum = cached_floquet_spectrum(drive, grid, steps, cache_dir);
    modes = evolve_modes(modes, spectrum, n_cycles);
  }
  const auto corr = pair_correlators(modes, chain_length);
  return entanglement_entropy(block_correlation_matrix(corr, chain_length / 2, n_cycles));
}

FssRun run_fss(const ExperimentConfig& config, const RunOptions& options) {
  config.validate();
  if (!config.field_sweep)
    throw ConfigError("fss: field_sweep is required");
  if (config.fss.sizes.size() < 2)
    throw ConfigError("fss: need two or more chain lengths");
  if (config.cycles.size() != 1)
    throw ConfigError("fss: exactly one cycle count expected");
  const auto n_cycles = config.cycles.front();
  const auto fields = config.field_sweep->values();

  FssRun run;
  run.data.nu = config.fss.nu;
  for (int n : config.fss.sizes) {
    Curve curve;
    for (double h : fields) {
      const DriveProtocol drive(h, config.drive.dh, config.drive.omega);
      curve.emplace_back(h, half_chain_entropy(drive, n, n_cycles, config.steps_per_period, options.cache_dir));
    }
    run.data.curves[n] = std::move(curve);
  }
  run.raw_curves = run.data.curves;
  run.dropped = resolve_peaks(run.data);
  if (run.data.curves.size() < 2)
    throw NoInteriorPeak("fss: fewer than two curves have an interior peak");

  std::vector<double> nus{config.fss.nu};
  nus.insert(nus.end(), config.fss.compare_nu.begin(), config.fss.compare_nu.end());
  nus.push_back(std::numeric_limits<double>::infinity());
  for (double nu : nus)
    run.collapse.emplace_back(nu, collapse_report(run.data, nu));

  std::vector<double> log_n, peak_s;
  for (const auto& [n, peak] : run.data.peaks) {
    log_n.push_back(std::log2(static_cast<double>(n)));
    peak_s.push_back(peak.s_peak);
  }
  run.log_divergence = fit_line(log_n, peak_s);

  if (options.write_files) {
    const auto dir = prepare_output(config);
    std::vector<std::vector<double>> rows;
    for (const auto& [n, curve] : run.raw_curves)
      for (const auto& [h, s] : curve)
        rows.push_back({static_cast<double>(n), h, s});
    run.files.push_back(dir / "fss_curves.tsv");
    write_table(run.files.back(), {"N", "h", "S_half"}, rows);

    rows.clear();
    for (const auto& [n, peak] : run.data.peaks)
      rows.push_back({static_cast<double>(n), peak.h_c, peak.s_peak});
    run.files.push_back(dir / "fss_peaks.tsv");
    write_table(run.files.back(), {"N", "h_c", "S_half_at_h_c"}, rows);

    rows.clear();
    for (const auto& [nu, report] : run.collapse)
      for (const auto& [n, curve] : fss_transform(run.data, nu))
        for (const auto& [x, y] : curve)
          rows.push_back({1.0 / nu, static_cast<double>(n), x, y});
    run.files.push_back(dir / "fss_collapse.tsv");
    write_table(run.files.back(), {"inv_nu", "N", "x", "y"}, rows);

    json report;
    report["n_cycles"] = n_cycles;
    json collapse = json::array();
    for (const auto& [nu, r] : run.collapse)
      collapse.push_back({{"inv_nu", 1.0 / nu},
                          {"quality", r.quality},
                          {"left_quality", r.left_quality},
                          {"right_quality", r.right_quality},
                          {"points", r.points}});
    report["collapse"] = collapse;
    json dropped = json::array();
    for (const auto& [n, why] : run.dropped)
      dropped.push_back({{"N", n}, {"reason", why}});
    report["dropped"] = dropped;
    report["log_divergence"] = {{"slope", run.log_divergence.slope},
                                {"intercept", run.log_divergence.intercept},
                                {"r2", run.log_divergence.r2}};
    run.files.push_back(dir / "fss_report.json");
    write_json(run.files.back(), report);
    write_json(dir / "manifest.json", manifest("fss", config, run.files));
  }
  return run;
}

OracleRun run_oracle(const ExperimentConfig& config, const RunOptions& options) {
  config.validate();
  OracleRun run;
  for (int n_sites : config.oracle.sizes) {
    const exact::SpinChain chain(n_sites);
    const MomentumGrid grid(n_sites);
    const auto spectrum = floquet_spectrum(config.drive, grid, config.steps_per_period);
    for (double h : config.oracle.fields) {
      const auto initial_modes = ground_state(h, grid);
      const auto initial_state = chain.ground_state(h);
      for (const auto n : config.oracle.cycles) {
        const auto modes = evolve_modes(initial_modes, spectrum, n);
        const auto corr = pair_correlators(modes, n_sites);
        const auto psi =
            n > 0 ? chain.evolve(initial_state, config.drive, n, config.oracle.steps_per_period) : initial_state;
        for (int l = 1; l <= n_sites; ++l) {
          const auto block = block_correlation_matrix(corr, l, n);
          OracleRow row{n_sites, h, n, l, entanglement_entropy(block), chain.block_entropy(psi, l), 0.0};
          const auto exact_corr = chain.block_correlators(psi, l);
          const auto alpha = block.gamma.topLeftCorner(l, l);
          const auto beta = block.gamma.bottomLeftCorner(l, l);
          row.correlator_error = std::max((alpha - exact_corr.alpha).cwiseAbs().maxCoeff(),
                                          (beta - exact_corr.beta).cwiseAbs().maxCoeff());
          run.max_entropy_error = std::max(run.max_entropy_error, std::abs(row.s_fermion - row.s_exact));
          run.max_correlator_error = std::max(run.max_correlator_error, row.correlator_error);
          run.rows.push_back(row);
        }
      }
    }
  }
  run.passed = run.max_entropy_error <= config.oracle.tolerance && run.max_correlator_error <= config.oracle.tolerance;

  if (options.write_files) {
    const auto dir = prepare_output(config);
    std::vector<std::vector<double>> rows;
    for (const auto& r : run.rows)
      rows.push_back({static_cast<double>(r.chain_length), r.h, static_cast<double>(r.n_cycles),
                      static_cast<double>(r.l), r.s_fermion, r.s_exact, std::abs(r.s_fermion - r.s_exact),
                      r.correlator_error});
    run.files.push_back(dir / "oracle.tsv");
    write_table(run.files.back(),
                {"N", "h", "n", "l", "S_free_fermion", "S_exact", "abs_diff", "max_correlator_diff"}, rows);
    auto doc = manifest("oracle", config, run.files);
    doc["max_entropy_error"] = run.max_entropy_error;
    doc["max_correlator_error"] = run.max_correlator_error;
    doc["passed"] = run.passed;
    write_json(dir / "manifest.json", doc);
  }
  return run;
}

}  // namespace tfim
