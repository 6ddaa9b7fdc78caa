#pragma once

#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "heraldq/cases.hpp"
#include "heraldq/quasiprob.hpp"

namespace heraldq {

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// `count` equispaced values from min to max inclusive.
struct Sweep {
  double min = 0.0;
  double max = 0.0;
  int count = 1;

  static Sweep single(double v) { return {v, v, 1}; }
  std::vector<double> values() const;
};

enum class Command { Wigner, SweepMetrics, CatSurface, Validate };

std::string_view command_name(Command c);

struct ScenarioConfig {
  std::vector<Case> cases;
  Sweep nbar;
  Sweep r;
  bool link_xi = true;           // measurement cases take chi = chi_from_xi(r, nbar)
  std::optional<double> chi;     // explicit chi, replaces the linkage
  double amplitude_f = 1e-2;
  std::optional<double> herald_p;  // solve the window for this probability
  std::optional<double> window;    // explicit half-width
  double grid_extent = 6.0;
  int grid_n = 241;
  double tau_th = 0.0;
  std::filesystem::path out_dir = "out";
  std::optional<std::string> fault_inject;
  unsigned workers = 0;  // 0: one per hardware thread

  /// Throws ConfigError.
  void validate() const;
  GridSpec grid() const { return GridSpec::square(grid_extent, grid_n); }
};

/// Command defaults: the r = 0.5, nbar in {0, 1} gallery for `wigner` and `validate`, an
/// r in [0, 2] sweep at nbar = 1 for `sweep-metrics`, and a (r, nbar) surface
/// of bdag_U at outcome 0 for `cat-surface`.
ScenarioConfig default_config(Command cmd);

/// Overlays the keys present in `j` onto `cfg`. `source` is the raw document
/// text, used to attach line numbers to messages.
void apply_json(ScenarioConfig& cfg, const nlohmann::json& j, const std::string& source = {});

/// Reads and applies a JSON config file; throws ConfigError with the line of
/// a parse error.
void apply_config_file(ScenarioConfig& cfg, const std::filesystem::path& path);

nlohmann::json to_json(const ScenarioConfig& cfg);

/// The case spec of one sweep cell, with the window solved when a herald
/// probability is configured. Empty when the cell heralds with zero
/// probability (b acting first on the vacuum).
std::optional<CaseSpec> cell_spec(const ScenarioConfig& cfg, Case kind, double nbar, double r);

/// Perturbs one normal-form field: nu, mu, lambda, xi, zeta, mbar, sigma_l, f.
NormalForm inject_fault(NormalForm nf, const std::string& name);

/// 17 significant digits, enough to round-trip any double.
std::string format_double(double v);

/// Each command writes its files under cfg.out_dir plus run_metadata.json
/// and returns the process exit code.
int run_wigner(const ScenarioConfig& cfg);
int run_sweep_metrics(const ScenarioConfig& cfg);
int run_cat_surface(const ScenarioConfig& cfg);
int run_validate(const ScenarioConfig& cfg);

int run_command(Command cmd, const ScenarioConfig& cfg);

}  // namespace heraldq
