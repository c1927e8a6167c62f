#pragma once

// Experiment configuration and the pipeline runs behind the command-line tool.

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "tfim/floquet.hpp"
#include "tfim/scaling.hpp"

namespace tfim {

inline constexpr int kManifestSchemaVersion = 1;
inline constexpr const char* kCodeVersion = TFIM_VERSION;

struct BlockSizeRule {
  enum class Kind { geometric, linear, list };
  Kind kind = Kind::geometric;
  int count = 24;   // geometric
  int step = 1;     // linear
  int min = 1;
  int max = 0;      // 0: N/2
  std::vector<int> sizes;  // list

  std::vector<int> resolve(int chain_length) const;
};

struct FieldSweep {
  double h_min = 0.8;
  double h_max = 1.2;
  int count = 21;

  std::vector<double> values() const;
};

struct FssSettings {
  std::vector<int> sizes{32, 64, 128, 256};
  double nu = 1.0;
  std::vector<double> compare_nu{2.0};
};

struct OracleSettings {
  std::vector<int> sizes{4, 6, 8};
  std::vector<double> fields{0.3, 1.0, 2.5};
  std::vector<std::int64_t> cycles{0, 1, 3};
  int steps_per_period = 2000;
  double tolerance = 1e-6;
};

struct ExperimentConfig {
  int chain_length = 256;
  DriveProtocol drive{1.0, 0.5, std::numbers::pi};
  std::vector<std::int64_t> cycles{0};
  BlockSizeRule block_sizes;
  std::optional<FieldSweep> field_sweep;
  FssSettings fss;
  OracleSettings oracle;
  RegimeWindows windows;
  int steps_per_period = kDefaultStepsPerPeriod;
  std::string output_dir = "out";

  /// Throws ConfigError on any value outside module preconditions.
  void validate() const;
};

/// Unknown keys and ill-typed values throw ConfigError.
ExperimentConfig config_from_json(const nlohmann::json& doc);
nlohmann::json config_to_json(const ExperimentConfig& config);
ExperimentConfig load_config(const std::filesystem::path& file);

struct RunOptions {
  std::optional<std::filesystem::path> cache_dir;  // FloquetSpectrum cache
  bool write_files = true;
};

struct GroundStateRun {
  EntropyProfile profile;
  std::vector<std::filesystem::path> files;
};

struct DrivenCycleResult {
  EntropyProfile profile;
  std::optional<RegimeReport> regimes;
  std::string regime_error;  // why regimes is empty
};

struct DrivenRun {
  double v_max = 0.0;
  double period = 0.0;
  std::vector<DrivenCycleResult> cycles;
  std::vector<std::filesystem::path> files;
};

struct FssRun {
  FssDataset data;
  std::map<int, Curve> raw_curves;  // before peak resolution
  std::vector<std::pair<int, std::string>> dropped;
  std::vector<std::pair<double, CollapseReport>> collapse;  // (nu, report); nu = inf is the unscaled abscissa
  LinearFit log_divergence;  // S_{N/2}(h_c^N) against log2 N
  std::vector<std::filesystem::path> files;
};

struct OracleRow {
  int chain_length = 0;
  double h = 0.0;
  std::int64_t n_cycles = 0;
  int l = 0;
  double s_fermion = 0.0;
  double s_exact = 0.0;
  double correlator_error = 0.0;  // max |alpha|, |beta| entry difference on this block
};

struct OracleRun {
  std::vector<OracleRow> rows;
  double max_entropy_error = 0.0;
  double max_correlator_error = 0.0;
  bool passed = false;
  std::vector<std::filesystem::path> files;
};

GroundStateRun run_ground_state(const ExperimentConfig& config, const RunOptions& options = {});
DrivenRun run_driven_profile(const ExperimentConfig& config, const RunOptions& options = {});
FssRun run_fss(const ExperimentConfig& config, const RunOptions& options = {});
OracleRun run_oracle(const ExperimentConfig& config, const RunOptions& options = {});

/// Half-chain entropy S_{N/2} of the ground state of drive.h after n cycles.
double half_chain_entropy(const DriveProtocol& drive, int chain_length, std::int64_t n_cycles, int steps,
                          const std::optional<std::filesystem::path>& cache_dir = std::nullopt);

}  // namespace tfim
