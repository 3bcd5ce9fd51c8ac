#pragma once

#include <optional>
#include <vector>

#include <json.hpp>

#include "stokes/dispersion.hpp"
#include "stokes/spectral.hpp"
#include "stokes/state.hpp"
#include "stokes/wavefield.hpp"

namespace stokes {

/// Kernel of L_{c*}: the resonant wavenumbers, the bifurcation speed and the
/// symbols M_j used by the symplectic basis.
struct KernelData {
  PhysicalParams params;
  int j_star = 0;
  double c_star = 0.0;
  /// j_star first, then the other resonant wavenumbers by increasing |j|.
  std::vector<int> modes;
  /// M_k for k = 0..N (index 0 unused); M is even in j.
  std::vector<double> m_by_k;
  double resonance_tol = kDefaultResonanceTol;
  int n_modes = 0;

  double m_symbol(int j) const;
  bool contains(int j) const;
  int index_of(int j) const;  ///< position in `modes`, -1 when absent
  std::size_t dim() const noexcept { return 2 * modes.size(); }
};

/// M_j = (G_0(j) / (g + kappa j^2 + gamma^2 G_0(j) / (4 j^2)))^{1/4}.
double m_symbol(const PhysicalParams& p, int j);

/// Scans 0 < |j| <= N. `force_modes` overrides the scan (e.g. {j*} to run
/// the non-resonant machinery on a single block).
KernelData kernel_basis(const PhysicalParams& p, const SpectralGrid& grid, int j_star,
                        double tol = kDefaultResonanceTol, std::optional<std::vector<int>> force_modes = {});

/// Coordinates (alpha_j, beta_j) laid out as [alpha_{m0}, beta_{m0}, alpha_{m1}, ...]
/// following KernelData::modes.
struct ReducedVector {
  std::vector<int> modes;
  Eigen::VectorXd x;

  ReducedVector() = default;
  explicit ReducedVector(const KernelData& k);
  ReducedVector(std::vector<int> modes_, Eigen::VectorXd x_);

  double alpha(std::size_t i) const { return x[2 * i]; }
  double beta(std::size_t i) const { return x[2 * i + 1]; }
  double& alpha(std::size_t i) { return x[2 * i]; }
  double& beta(std::size_t i) { return x[2 * i + 1]; }

  /// ||v||_*^2 = 1/2 sum |j| (alpha_j^2 + beta_j^2).
  double star_norm_sq() const;
  double star_norm() const;
  /// Momentum of the kernel vector itself: -1/2 sum j (alpha_j^2 + beta_j^2).
  double quadratic_momentum() const;
};

ReducedVector rotate(const ReducedVector& v, double theta);  ///< tau_theta in coordinates
ReducedVector reflect(const ReducedVector& v);               ///< S in coordinates

nlohmann::json to_json(const ReducedVector& v);

/// v_j^{(1)} (which = 1) or v_j^{(2)} (which = 2) on a grid with n_modes.
SurfaceState basis_vector(const KernelData& k, int j, int which);

/// (1/2 pi) int eta zeta_1 - eta_1 zeta dx.
double sympl_form(const SurfaceState& u, const SurfaceState& u1);

ReducedVector coords(const KernelData& k, const SurfaceState& u);
SurfaceState embed(const KernelData& k, const ReducedVector& v);
SurfaceState project_V(const KernelData& k, const SurfaceState& u);
SurfaceState project_W(const KernelData& k, const SurfaceState& u);

/// Inverse of Pi_W L_c on W (c defaults to c*). Mode 0 follows
/// L_c v_0^{(1)} = -g v_0^{(2)}. Throws ProjectionLeak when r has a component
/// in V above leak_tol times max(||r||, reference_norm).
SurfaceState preconditioner_apply(const KernelData& k, const SurfaceState& r, std::optional<double> c = {},
                                  double leak_tol = 1e-9, double reference_norm = 0.0);

struct ReductionOptions {
  double newton_tol = 1e-13;
  int max_iter = 50;
  double v_guard = 0.2;
  double c_guard = 0.5;
};

struct RangeSolution {
  SurfaceState w;
  SurfaceState u;          ///< embed(v) + w
  SurfaceState residual;   ///< full F(c, u)
  int iterations = 0;
  std::vector<double> history;
  double achieved = 0.0;   ///< ||Pi_W F(c, u)||
  double contraction = 0.0;

  nlohmann::json diagnostics() const;
};

/// Quasi-Newton iteration w <- w - A Pi_W F(c, v + w) from w = warm (or 0).
RangeSolution range_solve(const KernelData& k, const SpectralGrid& grid, double c, const ReducedVector& v,
                          const ReductionOptions& opt = {}, const SurfaceState* warm = nullptr);

/// Everything the bifurcation drivers need at one (c, v).
struct ReducedEval {
  double c = 0.0;
  double phi = 0.0;
  ReducedVector grad;
  double momentum = 0.0;   ///< I(v + w)
  RangeSolution range;
};

ReducedEval reduced_eval(const KernelData& k, const SpectralGrid& grid, double c, const ReducedVector& v,
                         const ReductionOptions& opt = {}, const SurfaceState* warm = nullptr);

double reduced_phi(const KernelData& k, const SpectralGrid& grid, double c, const ReducedVector& v,
                   const ReductionOptions& opt = {});
ReducedVector reduced_grad(const KernelData& k, const SpectralGrid& grid, double c, const ReducedVector& v,
                           const ReductionOptions& opt = {});

struct SpeedSolution {
  double c = 0.0;
  int iterations = 0;
  ReducedEval eval;
};

/// Speed with dPhi(c, v)[v] = 0, by a chord step of slope 2 I(v) followed by secant steps.
SpeedSolution c_of_v_solve(const KernelData& k, const SpectralGrid& grid, const ReducedVector& v,
                           const ReductionOptions& opt = {}, std::optional<double> c_guess = {});
double c_of_v(const KernelData& k, const SpectralGrid& grid, const ReducedVector& v,
              const ReductionOptions& opt = {});

/// I(v + w(c(v), v)); zero at v = 0.
double reduced_momentum(const KernelData& k, const SpectralGrid& grid, const ReducedVector& v,
                        const ReductionOptions& opt = {});

}  // namespace stokes
