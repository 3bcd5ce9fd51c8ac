#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "stokes/bifurcation.hpp"
#include "stokes/dispersion.hpp"
#include "stokes/spectral.hpp"

namespace stokes {

struct GridSpec {
  int n_modes = 64;
  int dealias = 4;      ///< collocation points per mode
  int dno_order = 6;

  SpectralGrid build() const { return SpectralGrid(n_modes, dealias * n_modes, dno_order); }
};

struct Tolerances {
  double resonance = kDefaultResonanceTol;
  double newton = 1e-13;
  double residual = 1e-10;
  double distinct = 1e-6;
};

/// Everything a CLI run needs; every field has a default so an empty object is valid.
struct RunConfig {
  PhysicalParams params;
  GridSpec grid;
  Tolerances tol;
  int j_star = 1;
  std::optional<int> partner;   ///< resonant partner (resonant-* commands)
  std::optional<int> j;         ///< second wavenumber for the resonance command
  int j_max = 256;
  std::vector<double> epsilons{0.01, 0.02, 0.04};
  std::vector<double> a_values{4e-4};
  std::vector<double> c_values;
  int multistart = 16;
  std::uint64_t seed = 20240917;
  AtlasGrid atlas;
  std::string output_dir = "stokes_out";
  int threads = 1;

  /// Largest |j| the run touches; N must be at least 4 times this.
  int max_wavenumber() const;
  /// Throws ConfigError on any broken invariant.
  void validate() const;
  DriverOptions driver_options() const;
};

/// Unknown keys are rejected.
RunConfig config_from_json(const nlohmann::json& j);
RunConfig parse_config(const std::string& text);
nlohmann::json to_json(const RunConfig& c);
std::string serialize_config(const RunConfig& c);

}  // namespace stokes
