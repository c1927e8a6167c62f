// tfim: stroboscopic entanglement of the driven transverse-field Ising chain.
//
//   tfim ground-state --config run.json
//   tfim drive --config run.json --cycles 30 --output-dir out/critical
//   tfim fss --config fss.json
//   tfim oracle --config oracle.json
//
// Exit codes: 0 success, 2 invalid config, 3 numerical-structure violation,
// 4 I/O failure, 1 any other analysis failure.

#include <cmath>
#include <cstdio>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "tfim/errors.hpp"
#include "tfim/experiment.hpp"
#include "tfim/spectrum_cache.hpp"

namespace {

struct Overrides {
  std::string config_file;
  std::optional<int> chain_length;
  std::optional<double> h, dh, omega;
  std::vector<std::int64_t> cycles;
  std::vector<int> block_sizes;
  std::optional<int> steps;
  std::optional<std::string> output_dir;
  std::optional<double> volume_factor, tail_factor;

  tfim::ExperimentConfig build() const {
    nlohmann::json doc = config_file.empty() ? nlohmann::json::object()
                                             : tfim::config_to_json(tfim::load_config(config_file));
    if (chain_length) doc["chain_length"] = *chain_length;
    if (h) doc["drive"]["h"] = *h;
    if (dh) doc["drive"]["dh"] = *dh;
    if (omega) doc["drive"]["omega"] = *omega;
    if (!cycles.empty()) doc["cycles"] = cycles;
    if (!block_sizes.empty()) doc["block_sizes"] = block_sizes;
    if (steps) doc["steps_per_period"] = *steps;
    if (output_dir) doc["output_dir"] = *output_dir;
    if (volume_factor) doc["analysis"]["volume_factor"] = *volume_factor;
    if (tail_factor) doc["analysis"]["tail_factor"] = *tail_factor;
    return tfim::config_from_json(doc);
  }
};

void add_common(CLI::App* cmd, Overrides& o) {
  cmd->add_option("-c,--config", o.config_file, "JSON experiment config")->check(CLI::ExistingFile);
  cmd->add_option("-N,--chain-length", o.chain_length, "number of spins (even)");
  cmd->add_option("--field", o.h, "static field h");
  cmd->add_option("--dh", o.dh, "drive amplitude");
  cmd->add_option("--omega", o.omega, "drive angular frequency");
  cmd->add_option("--cycles", o.cycles, "stroboscopic cycle counts");
  cmd->add_option("--block-sizes", o.block_sizes, "explicit block sizes");
  cmd->add_option("--steps", o.steps, "integrator substeps per period");
  cmd->add_option("-o,--output-dir", o.output_dir, "directory for tables and manifest");
  cmd->add_option("--volume-factor", o.volume_factor, "volume window edge as a multiple of l*");
  cmd->add_option("--tail-factor", o.tail_factor, "tail window edge as a multiple of l*");
}

void report_driven(const tfim::DrivenRun& run) {
  std::printf("v_max = %.6f  period = %.6f\n", run.v_max, run.period);
  for (const auto& c : run.cycles) {
    std::printf("n = %lld: %zu samples", static_cast<long long>(c.profile.n_cycles), c.profile.samples.size());
    if (c.regimes)
      std::printf(", volume slope %.4f (R2 %.4f), tail %s, l* predicted %.1f observed %.1f\n",
                  c.regimes->volume_slope, c.regimes->volume_r2, tfim::to_string(c.regimes->tail_law).c_str(),
                  c.regimes->l_star_predicted, c.regimes->l_star_observed);
    else
      std::printf(" (%s)\n", c.regime_error.c_str());
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Driven transverse-field Ising chain: stroboscopic block entanglement"};
  app.require_subcommand(1);
  Overrides o;

  auto* ground = app.add_subcommand("ground-state", "entropy profile of the static ground state");
  auto* drive = app.add_subcommand("drive", "entropy profiles after n drive cycles, with regime analysis");
  auto* fss = app.add_subcommand("fss", "half-chain entropy field sweeps and finite-size-scaling collapse");
  auto* oracle = app.add_subcommand("oracle", "cross-check against exact diagonalization of small chains");
  for (auto* cmd : {ground, drive, fss, oracle})
    add_common(cmd, o);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    const auto config = o.build();
    tfim::RunOptions options;
    options.cache_dir = tfim::cache_dir_from_env();

    if (ground->parsed()) {
      const auto run = tfim::run_ground_state(config, options);
      std::printf("wrote %zu samples to %s\n", run.profile.samples.size(), run.files.front().string().c_str());
    } else if (drive->parsed()) {
      report_driven(tfim::run_driven_profile(config, options));
    } else if (fss->parsed()) {
      const auto run = tfim::run_fss(config, options);
      for (const auto& [n, why] : run.dropped)
        std::printf("N = %d dropped: %s\n", n, why.c_str());
      for (const auto& [n, peak] : run.data.peaks)
        std::printf("N = %d: h_c = %.6f  S_half = %.6f\n", n, peak.h_c, peak.s_peak);
      std::printf("log-divergence fit: slope %.4f  R2 %.4f\n", run.log_divergence.slope, run.log_divergence.r2);
      for (const auto& [nu, r] : run.collapse)
        std::printf("collapse 1/nu = %.4f: %.6g\n", std::isinf(nu) ? 0.0 : 1.0 / nu, r.quality);
    } else if (oracle->parsed()) {
      const auto run = tfim::run_oracle(config, options);
      std::printf("oracle: %zu comparisons, max |dS| = %.3e, max correlator diff = %.3e -> %s\n", run.rows.size(),
                  run.max_entropy_error, run.max_correlator_error, run.passed ? "ok" : "MISMATCH");
      if (!run.passed)
        return 3;
    }
    return 0;
  } catch (const tfim::ConfigError& e) {
    std::cerr << "invalid config: " << e.what() << '\n';
    return 2;
  } catch (const tfim::InvalidArgument& e) {
    std::cerr << "invalid config: " << e.what() << '\n';
    return 2;
  } catch (const tfim::NumericalError& e) {
    std::cerr << "numerical structure violation: " << e.what() << '\n';
    return 3;
  } catch (const tfim::IoError& e) {
    std::cerr << "I/O failure: " << e.what() << '\n';
    return 4;
  } catch (const std::filesystem::filesystem_error& e) {
    std::cerr << "I/O failure: " << e.what() << '\n';
    return 4;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
}
