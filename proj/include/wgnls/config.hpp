#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "wgnls/constants.hpp"
#include "wgnls/datum.hpp"
#include "wgnls/error.hpp"
#include "wgnls/experiments.hpp"
#include "wgnls/propagator.hpp"

namespace wgnls {

/// Every violation found while reading a config, in file order.
class ConfigError : public Error {
 public:
  explicit ConfigError(std::vector<std::string> violations);
  const std::vector<std::string>& violations() const noexcept { return violations_; }

 private:
  std::vector<std::string> violations_;
};

struct WeinsteinConfig {
  int n_max = 5;
  Grid2 grid{128, 32.0};
};

struct LargeScaleConfig {
  std::vector<double> lambdas{1.0, 2.0, 4.0};
  double t_end = 1.0;
  LargeScaleOptions options;
};

struct VirialConfig {
  double radius = 0.0;  ///< 0 picks the smallest radius meeting exterior_mass
  double exterior_mass = 1e-8;
};

struct GnTestConfig {
  int samples = 10000;
};

struct RunConfig {
  Grid3 grid;
  EvolveControls controls;
  std::string constants_source = "compute";
  CChoice c_choice = CChoice::Upper;
  std::uint64_t seed = 11;
  std::string output_dir = "wgnls_out";
  int workers = 0;
  DatumSpec datum;
  ConstantsOptions constants;
  WeinsteinConfig weinstein;
  LargeScaleConfig large_scale;
  VirialConfig virial;
  GnTestConfig gn_test;
  std::vector<CampaignRow> rows;

  /// Sorted section.key=value lines of everything that was set; hashed into
  /// the run manifest.
  std::string canonical;
};

/// Edit distance used for "did you mean" suggestions.
std::size_t levenshtein(const std::string& a, const std::string& b);

/// Parses INI text. overrides are "section.key=value" strings applied after
/// the file. Throws ConfigError with all violations at once.
RunConfig parse_config_text(const std::string& text, const std::vector<std::string>& overrides = {});
/// Throws Error(Io) if the file cannot be read.
RunConfig parse_config(const std::string& path, const std::vector<std::string>& overrides = {});

/// Section and key names accepted by the parser ("row.*" stands for campaign rows).
std::vector<std::pair<std::string, std::vector<std::string>>> config_schema();

}  // namespace wgnls
