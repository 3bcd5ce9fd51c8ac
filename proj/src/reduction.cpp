#include "stokes/reduction.hpp"

#include <algorithm>
#include <cmath>

#include "stokes/errors.hpp"

namespace stokes {

double m_symbol(const PhysicalParams& p, int j) {
  if (j == 0) throw DomainError("m_symbol: j must be nonzero");
  const double jj = static_cast<double>(j);
  const double g0 = flat_dno_symbol(p.depth, jj);
  const double a = p.g + p.kappa * jj * jj + p.gamma * p.gamma * g0 / (4.0 * jj * jj);
  return std::pow(g0 / a, 0.25);
}

double KernelData::m_symbol(int j) const {
  const auto k = static_cast<std::size_t>(std::abs(j));
  if (j == 0 || k >= m_by_k.size()) throw MisuseError("KernelData::m_symbol: wavenumber outside the grid");
  return m_by_k[k];
}

bool KernelData::contains(int j) const { return index_of(j) >= 0; }

int KernelData::index_of(int j) const {
  const auto it = std::find(modes.begin(), modes.end(), j);
  return it == modes.end() ? -1 : static_cast<int>(it - modes.begin());
}

KernelData kernel_basis(const PhysicalParams& p, const SpectralGrid& grid, int j_star, double tol,
                        std::optional<std::vector<int>> force_modes) {
  p.validate();
  if (j_star == 0) throw DomainError("kernel_basis: j_star must be nonzero");
  if (!(tol > 0)) throw MisuseError("kernel_basis: tol must be positive");
  const int n = grid.n_modes();
  if (std::abs(j_star) > n) throw GridTooSmall("kernel_basis: |j_star| exceeds the number of modes");

  KernelData k;
  k.params = p;
  k.j_star = j_star;
  k.c_star = bifurcation_speed(p, j_star);
  k.resonance_tol = tol;
  k.n_modes = n;
  k.m_by_k.assign(n + 1, 0.0);
  for (int j = 1; j <= n; ++j) k.m_by_k[j] = m_symbol(p, j);

  if (force_modes) {
    k.modes = *force_modes;
    if (k.modes.empty() || k.modes.front() != j_star) throw MisuseError("kernel_basis: forced modes must start with j_star");
    for (int j : k.modes) {
      if (j == 0 || std::abs(j) > n || (j > 0) != (j_star > 0))
        throw MisuseError("kernel_basis: forced modes must be nonzero, inside the grid and share the sign of j_star");
    }
  } else {
    k.modes.push_back(j_star);
    const int sign = j_star > 0 ? 1 : -1;
    for (int m = 1; m <= n; ++m) {
      const int j = sign * m;
      if (j == j_star) continue;
      const double res = std::abs(omega(p, j) - k.c_star * j);
      if (res <= tol * std::max(1.0, std::abs(k.c_star * j))) k.modes.push_back(j);
    }
  }
  return k;
}

ReducedVector::ReducedVector(const KernelData& k) : modes(k.modes), x(Eigen::VectorXd::Zero(k.dim())) {}

ReducedVector::ReducedVector(std::vector<int> modes_, Eigen::VectorXd x_) : modes(std::move(modes_)), x(std::move(x_)) {
  if (static_cast<std::size_t>(x.size()) != 2 * modes.size()) throw MisuseError("ReducedVector: size mismatch");
}

double ReducedVector::star_norm_sq() const {
  double s = 0.0;
  for (std::size_t i = 0; i < modes.size(); ++i) s += 0.5 * std::abs(modes[i]) * (alpha(i) * alpha(i) + beta(i) * beta(i));
  return s;
}

double ReducedVector::star_norm() const { return std::sqrt(star_norm_sq()); }

double ReducedVector::quadratic_momentum() const {
  double s = 0.0;
  for (std::size_t i = 0; i < modes.size(); ++i) s -= 0.5 * modes[i] * (alpha(i) * alpha(i) + beta(i) * beta(i));
  return s;
}

ReducedVector rotate(const ReducedVector& v, double theta) {
  ReducedVector out = v;
  for (std::size_t i = 0; i < v.modes.size(); ++i) {
    const double a = v.modes[i] * theta;
    const double cs = std::cos(a), sn = std::sin(a);
    out.alpha(i) = cs * v.alpha(i) + sn * v.beta(i);
    out.beta(i) = -sn * v.alpha(i) + cs * v.beta(i);
  }
  return out;
}

ReducedVector reflect(const ReducedVector& v) {
  ReducedVector out = v;
  for (std::size_t i = 0; i < v.modes.size(); ++i) out.beta(i) = -v.beta(i);
  return out;
}

nlohmann::json to_json(const ReducedVector& v) {
  auto arr = nlohmann::json::array();
  for (std::size_t i = 0; i < v.modes.size(); ++i) arr.push_back({{"j", v.modes[i]}, {"alpha", v.alpha(i)}, {"beta", v.beta(i)}});
  return arr;
}

SurfaceState basis_vector(const KernelData& k, int j, int which) {
  const double m = k.m_symbol(j);
  const int kk = std::abs(j);
  const double s = j > 0 ? 1.0 : -1.0;
  SurfaceState v(k.n_modes);
  if (which == 1) {
    // (M cos jx, M^{-1} sin jx)
    v.eta = trig_mode(k.n_modes, kk, m, 0.0);
    v.zeta = trig_mode(k.n_modes, kk, 0.0, s / m);
  } else if (which == 2) {
    // (-M sin jx, M^{-1} cos jx)
    v.eta = trig_mode(k.n_modes, kk, 0.0, -s * m);
    v.zeta = trig_mode(k.n_modes, kk, 1.0 / m, 0.0);
  } else {
    throw MisuseError("basis_vector: which must be 1 or 2");
  }
  return v;
}

double sympl_form(const SurfaceState& u, const SurfaceState& u1) {
  return mean_product(u.eta, u1.zeta) - mean_product(u1.eta, u.zeta);
}

namespace {

// Coordinates of the mode-|j| content of u along V_j, read off the single
// Fourier coefficient.
std::pair<double, double> block_coords(const KernelData& k, const SurfaceState& u, int j) {
  const int kk = std::abs(j);
  if (kk > u.n_modes()) return {0.0, 0.0};
  const double m = k.m_symbol(j);
  const double s = j > 0 ? 1.0 : -1.0;
  // eta = a cos + b sin, zeta = c cos + d sin on mode kk
  const double a = 2 * u.eta[kk].real(), b = -2 * u.eta[kk].imag();
  const double c = 2 * u.zeta[kk].real(), d = -2 * u.zeta[kk].imag();
  // alpha = W(u, v2), beta = -W(u, v1); W averages products of cos/sin to 1/2
  const double alpha = 0.5 * (a / m + s * d * m);
  const double beta = 0.5 * (c * m - s * b / m);
  return {alpha, beta};
}

}  // namespace

ReducedVector coords(const KernelData& k, const SurfaceState& u) {
  ReducedVector v(k);
  for (std::size_t i = 0; i < k.modes.size(); ++i) {
    const auto [a, b] = block_coords(k, u, k.modes[i]);
    v.alpha(i) = a;
    v.beta(i) = b;
  }
  return v;
}

SurfaceState embed(const KernelData& k, const ReducedVector& v) {
  SurfaceState u(k.n_modes);
  for (std::size_t i = 0; i < v.modes.size(); ++i) {
    const int j = v.modes[i];
    if (v.alpha(i) != 0.0) u += v.alpha(i) * basis_vector(k, j, 1);
    if (v.beta(i) != 0.0) u += v.beta(i) * basis_vector(k, j, 2);
  }
  return u;
}

SurfaceState project_V(const KernelData& k, const SurfaceState& u) {
  SurfaceState out = embed(k, coords(k, u));
  return out.n_modes() == u.n_modes() ? out : out.resized(u.n_modes());
}

SurfaceState project_W(const KernelData& k, const SurfaceState& u) { return u - project_V(k, u); }

SurfaceState preconditioner_apply(const KernelData& k, const SurfaceState& r, std::optional<double> c_opt,
                                  double leak_tol, double reference_norm) {
  const PhysicalParams& p = k.params;
  const double c = c_opt.value_or(k.c_star);
  const int n = r.n_modes();
  SurfaceState out(n);

  const ReducedVector leak = coords(k, r);
  const double scale = std::max(r.norm(), reference_norm);
  if (leak.x.norm() > leak_tol * scale) {
    throw ProjectionLeak("preconditioner_apply: residual has a component in V",
                         {{"leak_norm", leak.x.norm()}, {"residual_norm", r.norm()}});
  }

  out.eta[0] = -r.zeta[0] / p.g;
  out.zeta[0] = 0;

  for (int kk = 1; kk <= n; ++kk) {
    const int sign = k.j_star > 0 ? 1 : -1;
    const int j_in = sign * kk;
    if (k.contains(j_in)) {
      // Only V_{-j} lies in W at this wavenumber; L_c acts there as the
      // rotation v1 -> lambda v2, v2 -> -lambda v1.
      const int j = -j_in;
      const double lambda = c * j - omega(p, j);
      const auto [pa, qb] = block_coords(k, r, j);
      const double x1 = qb / lambda, x2 = -pa / lambda;
      const double m = k.m_symbol(j);
      const double s = j > 0 ? 1.0 : -1.0;
      // x1 v1 + x2 v2 on mode kk
      out.eta[kk] = std::complex<double>(x1 * m / 2, 0.0) + std::complex<double>(0.0, x2 * s * m / 2);
      out.zeta[kk] = std::complex<double>(x2 / m / 2, -x1 * s / m / 2);
      continue;
    }
    const auto [g0, a, s] = mode_symbols(p, c, kk);
    const std::complex<double> det = s * s + a * g0;
    out.eta[kk] = (s * r.eta[kk] - g0 * r.zeta[kk]) / det;
    out.zeta[kk] = (a * r.eta[kk] + s * r.zeta[kk]) / det;
  }
  return out;
}

nlohmann::json RangeSolution::diagnostics() const {
  return {{"iterations", iterations}, {"residual_history", history}, {"contraction_factor", contraction},
          {"achieved_tolerance", achieved}};
}

RangeSolution range_solve(const KernelData& k, const SpectralGrid& grid, double c, const ReducedVector& v,
                          const ReductionOptions& opt, const SurfaceState* warm) {
  if (grid.n_modes() != k.n_modes) throw MisuseError("range_solve: grid and kernel disagree on N");
  if (v.star_norm() > opt.v_guard) throw MisuseError("range_solve: ||v|| exceeds the guard radius");
  if (std::abs(c - k.c_star) > opt.c_guard) throw MisuseError("range_solve: |c - c*| exceeds the guard");

  RangeSolution sol;
  const SurfaceState base = embed(k, v);
  sol.w = warm ? project_W(k, *warm) : SurfaceState(k.n_modes);
  sol.w.zeta[0] = 0;

  int stagnant = 0;
  for (int it = 0;; ++it) {
    sol.u = base + sol.w;
    sol.residual = residual(k.params, grid, c, sol.u);
    const SurfaceState rw = project_W(k, sol.residual);
    const double res = rw.norm();
    sol.history.push_back(res);
    sol.iterations = it;
    if (!std::isfinite(res)) {
      throw NonConvergence("range_solve: residual is not finite", sol.diagnostics());
    }
    if (sol.history.size() >= 2) {
      const double prev = sol.history[sol.history.size() - 2];
      const double ratio = prev > 0 ? res / prev : 0.0;
      if (sol.history.size() == 2 || ratio > sol.contraction) sol.contraction = std::max(sol.contraction, ratio);
      stagnant = ratio > 0.5 ? stagnant + 1 : 0;
    }
    sol.achieved = res;
    if (res <= opt.newton_tol) break;
    // Rounding floor: progress has stopped but the residual is already
    // within a few ulps of the scale of F.
    if (stagnant >= 3 && res <= 1e2 * opt.newton_tol) break;
    if (it >= opt.max_iter || stagnant >= 6) {
      throw NonConvergence("range_solve: no contraction", sol.diagnostics());
    }
    sol.w -= preconditioner_apply(k, rw, c, 1e-9, sol.residual.norm());
  }
  return sol;
}

ReducedEval reduced_eval(const KernelData& k, const SpectralGrid& grid, double c, const ReducedVector& v,
                         const ReductionOptions& opt, const SurfaceState* warm) {
  ReducedEval e;
  e.c = c;
  e.range = range_solve(k, grid, c, v, opt, warm);
  const SurfaceState& u = e.range.u;
  e.momentum = momentum(u);
  e.phi = hamiltonian_wahlen(k.params, grid, u) + c * e.momentum;
  e.grad = ReducedVector(k);
  // dPhi/dalpha_j = W(F, v_j1), dPhi/dbeta_j = W(F, v_j2); with
  // F = p v1 + q v2 on V_j this is (-q, p) = (-beta_F, alpha_F).
  const ReducedVector f = coords(k, e.range.residual);
  for (std::size_t i = 0; i < k.modes.size(); ++i) {
    e.grad.alpha(i) = -f.beta(i);
    e.grad.beta(i) = f.alpha(i);
  }
  return e;
}

double reduced_phi(const KernelData& k, const SpectralGrid& grid, double c, const ReducedVector& v,
                   const ReductionOptions& opt) {
  return reduced_eval(k, grid, c, v, opt).phi;
}

ReducedVector reduced_grad(const KernelData& k, const SpectralGrid& grid, double c, const ReducedVector& v,
                           const ReductionOptions& opt) {
  return reduced_eval(k, grid, c, v, opt).grad;
}

SpeedSolution c_of_v_solve(const KernelData& k, const SpectralGrid& grid, const ReducedVector& v,
                           const ReductionOptions& opt, std::optional<double> c_guess) {
  const double i2 = 2.0 * v.quadratic_momentum();
  if (v.x.norm() == 0.0 || i2 == 0.0) throw DomainError("c_of_v: v must be nonzero");

  auto radial = [&](const ReducedEval& e) { return e.grad.x.dot(v.x); };

  SpeedSolution out;
  double c0 = c_guess.value_or(k.c_star);
  ReducedEval e0 = reduced_eval(k, grid, c0, v, opt);
  double h0 = radial(e0);
  double slope = i2;
  std::vector<double> history{h0};
  const double c_tol = 4e-16 * std::max(1.0, std::abs(k.c_star));
  for (int it = 1; it <= opt.max_iter; ++it) {
    const double c1 = c0 - h0 / slope;
    if (std::abs(c1 - k.c_star) > opt.c_guard) {
      throw NonConvergence("c_of_v: speed left the guard interval",
                           {{"c", c1}, {"radial_history", history}});
    }
    ReducedEval e1 = reduced_eval(k, grid, c1, v, opt, &e0.range.w);
    const double h1 = radial(e1);
    history.push_back(h1);
    const double step = std::abs(c1 - c0);
    if (h1 != h0) slope = (h1 - h0) / (c1 - c0);
    c0 = c1;
    h0 = h1;
    e0 = std::move(e1);
    out.iterations = it;
    if (h1 == 0.0 || step <= c_tol) break;
    if (it == opt.max_iter) {
      throw NonConvergence("c_of_v: no convergence", {{"radial_history", history}});
    }
  }
  out.c = c0;
  out.eval = std::move(e0);
  return out;
}

double c_of_v(const KernelData& k, const SpectralGrid& grid, const ReducedVector& v, const ReductionOptions& opt) {
  return c_of_v_solve(k, grid, v, opt).c;
}

double reduced_momentum(const KernelData& k, const SpectralGrid& grid, const ReducedVector& v,
                        const ReductionOptions& opt) {
  if (v.x.norm() == 0.0) return 0.0;
  return c_of_v_solve(k, grid, v, opt).eval.momentum;
}

}  // namespace stokes
