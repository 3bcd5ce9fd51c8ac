#include "stokes/bifurcation.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

#include <Eigen/SVD>

#include "stokes/errors.hpp"
#include "stokes/parallel.hpp"

namespace stokes {

nlohmann::json to_json(const BranchPoint& b) {
  return {{"c", b.c},
          {"amplitude", b.amplitude},
          {"momentum", b.momentum},
          {"residual_norm", b.residual_norm},
          {"phi", b.phi},
          {"grad_norm", b.grad_norm},
          {"accepted", b.accepted},
          {"orbit_tag", to_json(b.orbit_tag)},
          {"state", to_json(b.state)},
          {"diagnostics", b.diagnostics}};
}

namespace {

BranchPoint assemble(const KernelData& k, const SpectralGrid& grid, const ReducedEval& e, const ReducedVector& v,
                     double amplitude, double tol) {
  BranchPoint b;
  b.c = e.c;
  b.state = e.range.u;
  b.amplitude = amplitude;
  b.momentum = momentum(b.state);
  b.residual_norm = residual(k.params, grid, b.c, b.state).norm();
  b.orbit_tag = canonical_phase(v);
  b.phi = e.phi;
  b.grad_norm = e.grad.x.norm();
  b.accepted = b.residual_norm <= tol;
  b.diagnostics = {{"range", e.range.diagnostics()}};
  return b;
}

struct NewtonResult {
  Eigen::VectorXd y;
  Eigen::VectorXd f;
  bool converged = false;
  int iterations = 0;
};

// Damped Newton with a forward-difference Jacobian and an SVD pseudo-inverse.
// Zero singular values (symmetry directions) are dropped.
template <class Eq>
NewtonResult newton_pinv(Eq&& eq, Eigen::VectorXd y, const Eigen::VectorXd& h, double ftol, int max_iter) {
  NewtonResult r;
  r.f = eq(y);
  for (int it = 0; it < max_iter; ++it) {
    r.iterations = it;
    const double fn = r.f.norm();
    if (!std::isfinite(fn)) break;
    if (fn <= ftol) {
      r.converged = true;
      break;
    }
    Eigen::MatrixXd jac(r.f.size(), y.size());
    for (Eigen::Index i = 0; i < y.size(); ++i) {
      Eigen::VectorXd yp = y;
      yp[i] += h[i];
      jac.col(i) = (eq(yp) - r.f) / h[i];
    }
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(jac, Eigen::ComputeThinU | Eigen::ComputeThinV);
    svd.setThreshold(1e-9);
    const Eigen::VectorXd step = svd.solve(r.f);
    double lambda = 1.0;
    bool improved = false;
    for (int bt = 0; bt < 12; ++bt) {
      const Eigen::VectorXd yn = y - lambda * step;
      Eigen::VectorXd fnew;
      try {
        fnew = eq(yn);
      } catch (const Error&) {
        lambda *= 0.5;
        continue;
      }
      if (fnew.allFinite() && fnew.norm() < fn) {
        y = yn;
        r.f = fnew;
        improved = true;
        break;
      }
      lambda *= 0.5;
    }
    if (!improved) {
      // at the rounding floor the residual cannot decrease any more
      r.converged = fn <= 1e2 * ftol;
      break;
    }
    if (lambda * step.norm() <= 1e-16 * std::max(1.0, y.norm()) && r.f.norm() <= 1e2 * ftol) {
      r.converged = true;
      break;
    }
  }
  r.y = y;
  return r;
}

ReducedVector from_active(const KernelData& k, const std::vector<int>& active, const Eigen::VectorXd& y) {
  ReducedVector v(k);
  for (std::size_t i = 0; i < active.size(); ++i) v.x[active[i]] = y[static_cast<Eigen::Index>(i)];
  return v;
}

Eigen::VectorXd to_active(const ReducedVector& v, const std::vector<int>& active) {
  Eigen::VectorXd y(static_cast<Eigen::Index>(active.size()));
  for (std::size_t i = 0; i < active.size(); ++i) y[static_cast<Eigen::Index>(i)] = v.x[active[i]];
  return y;
}

std::vector<int> alpha_indices(const KernelData& k) {
  std::vector<int> idx;
  for (std::size_t i = 0; i < k.modes.size(); ++i) idx.push_back(static_cast<int>(2 * i));
  return idx;
}

std::vector<int> all_indices(const KernelData& k) {
  std::vector<int> idx;
  for (std::size_t i = 0; i < k.dim(); ++i) idx.push_back(static_cast<int>(i));
  return idx;
}

// Unit vector (in ||.||_*) from normalized coordinates x_j = sqrt(|j|/2) (alpha_j, beta_j).
ReducedVector from_normalized(const KernelData& k, const Eigen::VectorXd& xn) {
  ReducedVector v(k);
  for (std::size_t i = 0; i < k.modes.size(); ++i) {
    const double s = std::sqrt(0.5 * std::abs(k.modes[i]));
    v.alpha(i) = xn[2 * i] / s;
    v.beta(i) = xn[2 * i + 1] / s;
  }
  const double n = v.star_norm();
  if (n > 0) v.x /= n;
  return v;
}

KernelData resonant_kernel(const PhysicalParams& p, const SpectralGrid& grid, int j_star, int partner,
                           const DriverOptions& opt) {
  const ClassificationRecord rec = classify_kernel(p, j_star, 256, kDefaultResonanceTol);
  if (rec.kernel_dim != 4 || !rec.partner || *rec.partner != partner) {
    throw MisuseError("resonant driver: the kernel is not four-dimensional with the requested partner");
  }
  (void)opt;
  KernelData k = kernel_basis(p, grid, j_star, kDefaultResonanceTol);
  if (!k.contains(partner)) throw GridTooSmall("resonant driver: partner mode lies outside the grid");
  return k;
}

}  // namespace

CriticalPoint polish_critical_point(const KernelData& k, const SpectralGrid& grid, double c, const ReducedVector& x0,
                                    const ReductionOptions& opt, int max_iter) {
  SurfaceState warm(k.n_modes);
  auto eq = [&](const Eigen::VectorXd& y) {
    ReducedEval e = reduced_eval(k, grid, c, ReducedVector(k.modes, y), opt, &warm);
    warm = e.range.w;
    return Eigen::VectorXd(e.grad.x);
  };
  const Eigen::VectorXd h = Eigen::VectorXd::Constant(x0.x.size(), 1e-7);
  NewtonResult r = newton_pinv(eq, x0.x, h, 1e-14, max_iter);
  CriticalPoint cp;
  cp.converged = r.converged;
  cp.v = ReducedVector(k.modes, r.y);
  cp.grad_norm = r.f.norm();
  cp.iterations = r.iterations;
  return cp;
}

std::vector<BranchPoint> nonresonant_branch(const PhysicalParams& p, const SpectralGrid& grid, int j_star,
                                            const std::vector<double>& epsilons, const DriverOptions& opt) {
  const ClassificationRecord rec = classify_kernel(p, j_star, 256, kDefaultResonanceTol);
  if (rec.kernel_dim != 2) throw MisuseError("nonresonant_branch: the kernel is resonant for this j_star");
  const KernelData k = kernel_basis(p, grid, j_star, kDefaultResonanceTol, std::vector<int>{j_star});

  std::vector<BranchPoint> out(epsilons.size());
  parallel_for(epsilons.size(), opt.threads, [&](std::size_t i) {
    const double eps = epsilons[i];
    ReducedVector v(k);
    v.alpha(0) = eps;
    if (eps == 0.0) {
      BranchPoint b;
      b.c = k.c_star;
      b.state = SurfaceState(k.n_modes);
      b.orbit_tag = v;
      b.accepted = true;
      b.diagnostics = {{"trivial", true}};
      out[i] = b;
      return;
    }
    const SpeedSolution s = c_of_v_solve(k, grid, v, opt.reduction);
    BranchPoint b = assemble(k, grid, s.eval, v, eps, opt.tol);
    double parity = 0.0;
    for (int m = 0; m <= k.n_modes; ++m) {
      parity = std::max({parity, std::abs(b.state.eta[m].imag()), std::abs(b.state.zeta[m].real())});
    }
    const double first_amp = 2.0 * std::abs(b.state.eta[std::abs(j_star)]);
    b.diagnostics["speed_iterations"] = s.iterations;
    b.diagnostics["parity_defect"] = parity;
    b.diagnostics["first_fourier_amplitude"] = first_amp;
    b.diagnostics["speed_shift_over_eps2"] = (b.c - k.c_star) / (eps * eps);
    out[i] = b;
  });
  return out;
}

FixedSpeedResult resonant_fixed_speed(const PhysicalParams& p, const SpectralGrid& grid, int j_star, int partner,
                                      double c, int multistart, const DriverOptions& opt) {
  const KernelData k = resonant_kernel(p, grid, j_star, partner, opt);
  if (c == k.c_star) throw MisuseError("resonant_fixed_speed: c must differ from c*");
  if (std::abs(c - k.c_star) > opt.reduction.c_guard) throw MisuseError("resonant_fixed_speed: c outside the guard");
  if (multistart < 1) throw MisuseError("resonant_fixed_speed: multistart must be positive");

  // Size of the cubic part of Phi, which sets the radius where nontrivial
  // critical points live: |v| ~ |c - c*| / C.
  const double probe = 0.01;
  double cubic = 0.0;
  for (double sgn : {1.0, -1.0}) {
    Eigen::VectorXd xn = Eigen::VectorXd::Zero(k.dim());
    xn[0] = 1.0;
    xn[2] = sgn;
    ReducedVector d = from_normalized(k, xn);
    d.x *= probe;
    cubic = std::max(cubic, std::abs(reduced_phi(k, grid, k.c_star, d, opt.reduction)) / std::pow(probe, 3));
  }
  const double r_max = std::min(3.0 * std::abs(c - k.c_star) / std::max(cubic, 1e-12), 0.8 * opt.reduction.v_guard);

  struct Start {
    ReducedVector v;
    std::vector<int> active;
  };
  std::vector<Start> starts;
  const std::vector<int> sym = alpha_indices(k);
  for (int i = 0; i < multistart; ++i) {
    for (int j = 0; j < multistart; ++j) {
      const double r = r_max * (i + 1) / multistart;
      const double phi = 2.0 * std::numbers::pi * (j + 0.5) / multistart;
      Eigen::VectorXd xn = Eigen::VectorXd::Zero(k.dim());
      xn[0] = std::cos(phi);
      xn[2] = std::sin(phi);
      ReducedVector v = from_normalized(k, xn);
      v.x *= r;
      starts.push_back({v, sym});
    }
  }
  const int symmetric = static_cast<int>(starts.size());
  std::mt19937_64 rng(opt.seed);
  std::normal_distribution<double> normal;
  std::uniform_real_distribution<double> unif(0.2, 1.0);
  for (int i = 0; i < 4 * multistart; ++i) {
    Eigen::VectorXd xn(k.dim());
    for (Eigen::Index m = 0; m < xn.size(); ++m) xn[m] = normal(rng);
    ReducedVector v = from_normalized(k, xn);
    v.x *= r_max * unif(rng);
    starts.push_back({v, all_indices(k)});
  }

  std::vector<NewtonResult> results(starts.size());
  parallel_for(starts.size(), opt.threads, [&](std::size_t s) {
    const Start& st = starts[s];
    SurfaceState warm(k.n_modes);
    auto eq = [&](const Eigen::VectorXd& y) {
      ReducedEval e = reduced_eval(k, grid, c, from_active(k, st.active, y), opt.reduction, &warm);
      warm = e.range.w;
      return to_active(e.grad, st.active);
    };
    const Eigen::VectorXd y0 = to_active(st.v, st.active);
    try {
      results[s] = newton_pinv(eq, y0, Eigen::VectorXd::Constant(y0.size(), 1e-7), 1e-14, 40);
      results[s].y = from_active(k, st.active, results[s].y).x;
    } catch (const Error&) {
      results[s] = NewtonResult{};
    }
  });

  FixedSpeedResult out;
  out.c = c;
  out.symmetric_starts = symmetric;
  out.full_starts = static_cast<int>(starts.size()) - symmetric;
  out.log = nlohmann::json::array();
  for (std::size_t s = 0; s < starts.size(); ++s) {
    const NewtonResult& r = results[s];
    if (!r.converged) {
      ++out.newton_failures;
      continue;
    }
    const ReducedVector v(k.modes, r.y);
    if (v.star_norm() <= 1e-6 * r_max) continue;  // trivial solution
    bool seen = false;
    for (const auto& b : out.orbits) {
      if (!orbit_distinct(b.orbit_tag, v, opt.distinct_tol)) {
        seen = true;
        break;
      }
    }
    if (seen) continue;
    // full 4D polish
    const CriticalPoint cp = polish_critical_point(k, grid, c, v, opt.reduction);
    const ReducedEval e = reduced_eval(k, grid, c, cp.v, opt.reduction);
    BranchPoint b = assemble(k, grid, e, cp.v, cp.v.star_norm(), opt.tol);
    b.diagnostics["start_index"] = s;
    b.diagnostics["symmetric_start"] = s < static_cast<std::size_t>(symmetric);
    b.diagnostics["newton_iterations"] = r.iterations;
    out.log.push_back({{"start", s}, {"phi", b.phi}, {"star_norm", cp.v.star_norm()}, {"residual", b.residual_norm}});
    out.orbits.push_back(std::move(b));
  }
  return out;
}

namespace {

struct MomentumPoint {
  bool ok = false;
  ReducedVector v;
  double c = 0.0;
};

// Point t v_hat of S_a = {I(v) = a} along a unit direction; I(t v_hat) is
// increasing in t, so a secant iteration safeguarded by bisection suffices.
MomentumPoint on_momentum_sphere(const KernelData& k, const SpectralGrid& grid, const ReducedVector& dir, double a,
                                 const ReductionOptions& opt) {
  auto eval = [&](double t, double& c) {
    ReducedVector v = dir;
    v.x *= t;
    const SpeedSolution s = c_of_v_solve(k, grid, v, opt);
    c = s.c;
    return std::abs(s.eval.momentum) - std::abs(a);
  };
  double c0 = 0, c1 = 0;
  double lo = 0.0, hi = INFINITY;
  double t0 = std::sqrt(std::abs(a)), t1 = 1.02 * t0;
  double f0 = eval(t0, c0), f1 = eval(t1, c1);
  auto bracket = [&](double t, double f) {
    if (f < 0) lo = std::max(lo, t);
    else hi = std::min(hi, t);
  };
  bracket(t0, f0);
  bracket(t1, f1);
  for (int it = 0; it < 60; ++it) {
    if (std::abs(f1) <= 1e-15 * std::abs(a)) break;
    double t2 = f1 != f0 ? t1 - f1 * (t1 - t0) / (f1 - f0) : 0.5 * (lo + hi);
    if (!(t2 > lo && t2 < hi)) t2 = std::isfinite(hi) ? 0.5 * (lo + hi) : 2.0 * t1;
    t0 = t1;
    f0 = f1;
    c0 = c1;
    t1 = t2;
    f1 = eval(t1, c1);
    bracket(t1, f1);
    if (std::isfinite(hi) && hi - lo <= 1e-16 * hi) break;
  }
  MomentumPoint mp;
  mp.ok = std::abs(f1) <= 1e-12 * std::abs(a);
  mp.v = dir;
  mp.v.x *= t1;
  mp.c = c1;
  return mp;
}

}  // namespace

FixedMomentumResult resonant_fixed_momentum(const PhysicalParams& p, const SpectralGrid& grid, int j_star, int partner,
                                            double a, int multistart, const DriverOptions& opt, double a_max) {
  const KernelData k = resonant_kernel(p, grid, j_star, partner, opt);
  if (a == 0.0 || (a > 0) == (j_star > 0)) throw MisuseError("resonant_fixed_momentum: need sign(a) = -sign(j_star)");
  if (std::abs(a) > a_max) throw MisuseError("resonant_fixed_momentum: |a| exceeds the guard");
  if (multistart < 0) throw MisuseError("resonant_fixed_momentum: multistart must be non-negative");

  struct Start {
    ReducedVector dir;
    std::vector<int> active;
  };
  std::vector<Start> starts;
  const int circle = 16;
  for (int i = 0; i < circle; ++i) {
    const double phi = 2.0 * std::numbers::pi * (i + 0.5) / circle;
    Eigen::VectorXd xn = Eigen::VectorXd::Zero(k.dim());
    xn[0] = std::cos(phi);
    xn[2] = std::sin(phi);
    starts.push_back({from_normalized(k, xn), alpha_indices(k)});
  }
  std::mt19937_64 rng(opt.seed);
  std::normal_distribution<double> normal;
  for (int i = 0; i < multistart; ++i) {
    Eigen::VectorXd xn(k.dim());
    for (Eigen::Index m = 0; m < xn.size(); ++m) xn[m] = normal(rng);
    starts.push_back({from_normalized(k, xn), all_indices(k)});
  }

  struct Critical {
    bool ok = false;
    ReducedVector v;
    double c = 0.0;
    double energy = 0.0;
    int iterations = 0;
  };
  std::vector<Critical> found(starts.size());
  parallel_for(starts.size(), opt.threads, [&](std::size_t s) {
    const Start& st = starts[s];
    try {
      const MomentumPoint mp = on_momentum_sphere(k, grid, st.dir, a, opt.reduction);
      if (!mp.ok) return;
      // unknowns (active coordinates, c); equations (active gradient, I - a)
      SurfaceState warm(k.n_modes);
      auto eq = [&](const Eigen::VectorXd& y) {
        const Eigen::Index n = static_cast<Eigen::Index>(st.active.size());
        ReducedEval e = reduced_eval(k, grid, y[n], from_active(k, st.active, y.head(n)), opt.reduction, &warm);
        warm = e.range.w;
        Eigen::VectorXd f(n + 1);
        f.head(n) = to_active(e.grad, st.active);
        f[n] = e.momentum - a;
        return f;
      };
      const Eigen::Index n = static_cast<Eigen::Index>(st.active.size());
      Eigen::VectorXd y0(n + 1);
      y0.head(n) = to_active(mp.v, st.active);
      y0[n] = mp.c;
      const NewtonResult r = newton_pinv(eq, y0, Eigen::VectorXd::Constant(n + 1, 1e-7), 1e-15, 40);
      if (!r.converged) return;
      Critical cr;
      cr.ok = true;
      cr.v = from_active(k, st.active, r.y.head(n));
      cr.c = r.y[n];
      cr.iterations = r.iterations;
      const ReducedEval e = reduced_eval(k, grid, cr.c, cr.v, opt.reduction);
      cr.energy = e.phi - cr.c * e.momentum;
      found[s] = cr;
    } catch (const Error&) {
    }
  });

  FixedMomentumResult out;
  out.a = a;
  out.log = nlohmann::json::array();
  int imin = -1, imax = -1;
  for (std::size_t s = 0; s < found.size(); ++s) {
    if (!found[s].ok) continue;
    out.log.push_back({{"start", s}, {"c", found[s].c}, {"energy", found[s].energy}, {"iterations", found[s].iterations}});
    if (imin < 0 || found[s].energy < found[imin].energy) imin = static_cast<int>(s);
    if (imax < 0 || found[s].energy > found[imax].energy) imax = static_cast<int>(s);
  }
  if (imin < 0) {
    throw SearchFailure("resonant_fixed_momentum: no critical point on S_a converged", {{"a", a}, {"starts", starts.size()}});
  }
  auto finish = [&](const Critical& cr) {
    const ReducedEval e = reduced_eval(k, grid, cr.c, cr.v, opt.reduction);
    BranchPoint b = assemble(k, grid, e, cr.v, a, opt.tol);
    b.phi = cr.energy;
    const double momentum_error = std::abs(b.momentum - a);
    b.accepted = b.accepted && momentum_error <= 1e-10 && b.grad_norm <= 1e-8;
    b.diagnostics["momentum_error"] = momentum_error;
    b.diagnostics["energy"] = cr.energy;
    return b;
  };
  out.min_orbit = finish(found[imin]);
  out.max_orbit = finish(found[imax]);
  out.distinct = orbit_distinct(out.min_orbit.orbit_tag, out.max_orbit.orbit_tag, opt.distinct_tol);
  return out;
}

std::vector<FixedMomentumResult> fixed_momentum_sweep(const PhysicalParams& p, const SpectralGrid& grid, int j_star,
                                                      int partner, const std::vector<double>& a_values, int multistart,
                                                      const DriverOptions& opt) {
  std::vector<FixedMomentumResult> out;
  for (double a : a_values) out.push_back(resonant_fixed_momentum(p, grid, j_star, partner, a, multistart, opt));
  return out;
}

}  // namespace stokes
