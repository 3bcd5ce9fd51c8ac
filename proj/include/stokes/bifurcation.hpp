#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <string>
#include <vector>

#include <json.hpp>

#include "stokes/reduction.hpp"

namespace stokes {

/// One solution (c, u) of F(c, u) = 0.
struct BranchPoint {
  double c = 0.0;
  SurfaceState state;
  double amplitude = 0.0;       ///< kernel coordinate epsilon or prescribed momentum a
  double momentum = 0.0;        ///< momentum(state), recomputed
  double residual_norm = 0.0;   ///< ||F(c, state)||, recomputed
  ReducedVector orbit_tag;      ///< kernel coordinates, rotated to a canonical phase
  double phi = 0.0;             ///< Phi(c, v) (fixed speed) or H(u) (fixed momentum)
  double grad_norm = 0.0;       ///< ||reduced_grad(c, v)||
  bool accepted = false;        ///< residual_norm <= tolerance of the driver
  nlohmann::json diagnostics;
};

nlohmann::json to_json(const BranchPoint& b);

// ---------------------------------------------------------------- orbits

struct OrbitDistance {
  double distance = 0.0;  ///< min over the O(2) action of ||v1 - g v2||_*
  double theta = 0.0;
  bool reflected = false;
};

/// ||.||_* distance between the O(2)-orbits of v1 and v2.
OrbitDistance orbit_distance(const ReducedVector& v1, const ReducedVector& v2);
bool orbit_distinct(const ReducedVector& v1, const ReducedVector& v2, double tol = 1e-6);

/// Representative of the orbit with the j_star block rotated onto beta = 0, alpha >= 0.
ReducedVector canonical_phase(const ReducedVector& v);

// ---------------------------------------------------------- mountain pass

/// Smooth functional on R^d used by the mountain-pass search.
class ReducedFunctional {
public:
  virtual ~ReducedFunctional() = default;
  virtual std::size_t dim() const = 0;
  virtual double value(const Eigen::VectorXd& x) = 0;
  virtual double value_grad(const Eigen::VectorXd& x, Eigen::VectorXd& grad) = 0;
  /// Weights w_i of the norm ||x||^2 = sum w_i x_i^2 used to size the search ball.
  virtual Eigen::VectorXd weights() const { return Eigen::VectorXd::Ones(static_cast<Eigen::Index>(dim())); }
};

/// Phi(c, .) on the kernel coordinates, with warm-started range solves.
class KernelFunctional : public ReducedFunctional {
public:
  KernelFunctional(const KernelData& kernel, const SpectralGrid& grid, double c, ReductionOptions opt = {});
  std::size_t dim() const override { return kernel_.dim(); }
  double value(const Eigen::VectorXd& x) override;
  double value_grad(const Eigen::VectorXd& x, Eigen::VectorXd& grad) override;
  Eigen::VectorXd weights() const override;

private:
  ReducedEval eval(const Eigen::VectorXd& x);
  KernelData kernel_;
  SpectralGrid grid_;
  double c_;
  ReductionOptions opt_;
};

struct MountainPassOptions {
  int path_nodes = 17;
  int steps = 300;
  double radius = 0.1;        ///< ball searched for the low point, in the weighted norm
  int directions = 48;        ///< trial rays for the low point
  double grad_tol = 1e-9;     ///< stop when the climbing node is this stationary
  std::uint64_t seed = 12345;
};

struct MountainPassResult {
  bool geometry_ok = false;
  std::string status;         ///< "converged", "stagnated", "path-collapse" or "no-low-point"
  double level = 0.0;         ///< max over the final path
  Eigen::VectorXd point;      ///< climbing node
  double point_grad_norm = 0.0;
  Eigen::VectorXd low_point;
  int steps_taken = 0;
  std::vector<double> max_history;
  std::vector<double> path_values;
};

MountainPassResult mountain_pass(ReducedFunctional& f, const MountainPassOptions& opt = {});

// ------------------------------------------------------------- drivers

struct DriverOptions {
  double tol = 1e-10;              ///< acceptance bound on ||F(c, u)||
  double distinct_tol = 1e-6;
  std::uint64_t seed = 20240917;
  int threads = 1;
  ReductionOptions reduction;
};

/// Crandall-Rabinowitz branch u_eps = eps v_{j*}^{(1)} + w, c_eps from dPhi[v] = 0.
std::vector<BranchPoint> nonresonant_branch(const PhysicalParams& p, const SpectralGrid& grid, int j_star,
                                            const std::vector<double>& epsilons, const DriverOptions& opt = {});

struct FixedSpeedResult {
  double c = 0.0;
  std::vector<BranchPoint> orbits;   ///< geometrically distinct, nontrivial, in discovery order
  int symmetric_starts = 0;
  int full_starts = 0;
  int newton_failures = 0;
  nlohmann::json log;
};

/// Critical points of Phi(c, .) on a four-dimensional kernel. `multistart` is
/// the side of the polar grid of the symmetric search; the full search uses
/// 4 * multistart seeded random starts.
FixedSpeedResult resonant_fixed_speed(const PhysicalParams& p, const SpectralGrid& grid, int j_star, int partner,
                                      double c, int multistart = 16, const DriverOptions& opt = {});

/// Newton polish of grad Phi(c, .) = 0 from x0 (pseudo-inverse Jacobian).
struct CriticalPoint {
  bool converged = false;
  ReducedVector v;
  double grad_norm = 0.0;
  int iterations = 0;
};
CriticalPoint polish_critical_point(const KernelData& k, const SpectralGrid& grid, double c, const ReducedVector& x0,
                                    const ReductionOptions& opt = {}, int max_iter = 40);

struct FixedMomentumResult {
  double a = 0.0;
  BranchPoint min_orbit;
  BranchPoint max_orbit;
  bool distinct = false;
  nlohmann::json log;
};

FixedMomentumResult resonant_fixed_momentum(const PhysicalParams& p, const SpectralGrid& grid, int j_star, int partner,
                                            double a, int multistart = 8, const DriverOptions& opt = {},
                                            double a_max = 0.01);

/// Critical speeds along a momentum sweep, in the given order.
std::vector<FixedMomentumResult> fixed_momentum_sweep(const PhysicalParams& p, const SpectralGrid& grid, int j_star,
                                                      int partner, const std::vector<double>& a_values,
                                                      int multistart = 8, const DriverOptions& opt = {});

}  // namespace stokes
