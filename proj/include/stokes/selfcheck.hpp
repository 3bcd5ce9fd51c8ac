#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <json.hpp>

#include "stokes/dispersion.hpp"
#include "stokes/spectral.hpp"

namespace stokes {

struct SelfCheckItem {
  std::string name;
  double value = 0.0;      ///< worst error observed
  double threshold = 0.0;
  bool passed = false;
};

struct SelfCheckReport {
  std::vector<SelfCheckItem> items;
  bool passed() const;
  nlohmann::json to_json() const;
};

/// Invariant suite: projector algebra, preconditioner inverse, gradient of the
/// Hamiltonian, DNO against the conformal oracle, DNO symmetry, equivariance
/// of F and invariance of the reduced quantities. `trials` random draws each.
SelfCheckReport run_selfcheck(const PhysicalParams& p, const SpectralGrid& grid, int j_star, int trials = 8,
                              std::uint64_t seed = 1);

}  // namespace stokes
