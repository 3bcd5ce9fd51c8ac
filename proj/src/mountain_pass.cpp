// Climbing-image path relaxation between the origin and a low point of the
// functional, a discrete analogue of lowering the maximum along a path.
#include <algorithm>
#include <cmath>
#include <random>

#include "stokes/bifurcation.hpp"
#include "stokes/errors.hpp"

namespace stokes {

KernelFunctional::KernelFunctional(const KernelData& kernel, const SpectralGrid& grid, double c, ReductionOptions opt)
    : kernel_(kernel), grid_(grid), c_(c), opt_(opt) {}

ReducedEval KernelFunctional::eval(const Eigen::VectorXd& x) {
  return reduced_eval(kernel_, grid_, c_, ReducedVector(kernel_.modes, x), opt_);
}

double KernelFunctional::value(const Eigen::VectorXd& x) { return eval(x).phi; }

double KernelFunctional::value_grad(const Eigen::VectorXd& x, Eigen::VectorXd& grad) {
  ReducedEval e = eval(x);
  grad = e.grad.x;
  return e.phi;
}

Eigen::VectorXd KernelFunctional::weights() const {
  Eigen::VectorXd w(kernel_.dim());
  for (std::size_t i = 0; i < kernel_.modes.size(); ++i) w[2 * i] = w[2 * i + 1] = 0.5 * std::abs(kernel_.modes[i]);
  return w;
}

namespace {

double weighted_norm(const Eigen::VectorXd& x, const Eigen::VectorXd& w) {
  return std::sqrt(x.cwiseProduct(x).dot(w));
}

// Nodes redistributed at equal arclength along the polyline, per segment
// [first, last] of node indices; the segment end nodes stay fixed.
void reparametrize(std::vector<Eigen::VectorXd>& nodes, std::size_t first, std::size_t last) {
  if (last <= first + 1) return;
  std::vector<double> s{0.0};
  for (std::size_t i = first + 1; i <= last; ++i) s.push_back(s.back() + (nodes[i] - nodes[i - 1]).norm());
  const double total = s.back();
  if (total == 0.0) return;
  std::vector<Eigen::VectorXd> old(nodes.begin() + first, nodes.begin() + last + 1);
  const std::size_t count = last - first;
  std::size_t seg = 0;
  for (std::size_t i = 1; i < count; ++i) {
    const double target = total * i / count;
    while (seg + 1 < s.size() - 1 && s[seg + 1] < target) ++seg;
    const double len = s[seg + 1] - s[seg];
    const double t = len > 0 ? (target - s[seg]) / len : 0.0;
    nodes[first + i] = (1 - t) * old[seg] + t * old[seg + 1];
  }
}

}  // namespace

MountainPassResult mountain_pass(ReducedFunctional& f, const MountainPassOptions& opt) {
  if (opt.path_nodes < 3) throw MisuseError("mountain_pass: need at least 3 path nodes");
  const auto d = static_cast<Eigen::Index>(f.dim());
  const Eigen::VectorXd w = f.weights();
  MountainPassResult res;

  // Low point: first sign change of f along trial rays, taking the ray that
  // leaves the positive region earliest.
  std::vector<Eigen::VectorXd> rays;
  for (Eigen::Index i = 0; i < d; ++i) {
    for (double s : {1.0, -1.0}) {
      Eigen::VectorXd e = Eigen::VectorXd::Zero(d);
      e[i] = s;
      rays.push_back(e);
    }
  }
  std::mt19937_64 rng(opt.seed);
  std::normal_distribution<double> normal;
  while (static_cast<int>(rays.size()) < opt.directions) {
    Eigen::VectorXd e(d);
    for (Eigen::Index i = 0; i < d; ++i) e[i] = normal(rng);
    rays.push_back(e);
  }
  const int radial_samples = 24;
  double best_t = INFINITY;
  Eigen::VectorXd best_dir;
  for (auto& e : rays) {
    e /= weighted_norm(e, w);
    for (int i = 1; i <= radial_samples; ++i) {
      const double t = opt.radius * i / radial_samples;
      if (t >= best_t) break;
      double v;
      try {
        v = f.value(t * e);
      } catch (const NumericalError&) {
        break;  // the reduction does not reach this far along the ray
      }
      if (v < 0.0) {
        best_t = t;
        best_dir = e;
        break;
      }
    }
  }
  if (!std::isfinite(best_t)) {
    res.status = "no-low-point";
    return res;
  }
  // step a little past the crossing so the end point is strictly below 0
  Eigen::VectorXd low = best_t * best_dir;
  for (double factor : {1.25, 1.1, 1.0}) {
    const Eigen::VectorXd cand = std::min(factor * best_t, opt.radius) * best_dir;
    try {
      if (f.value(cand) < 0.0) {
        low = cand;
        break;
      }
    } catch (const NumericalError&) {
    }
  }
  res.low_point = low;

  const int p = opt.path_nodes;
  std::vector<Eigen::VectorXd> nodes(p);
  for (int i = 0; i < p; ++i) nodes[i] = low * (static_cast<double>(i) / (p - 1));
  std::vector<double> values(p, 0.0);
  std::vector<Eigen::VectorXd> grads(p, Eigen::VectorXd::Zero(d));
  values[0] = f.value(nodes[0]);
  values[p - 1] = f.value(nodes[p - 1]);

  double step = -1.0;
  double prev_force = INFINITY;
  int climb = 1;
  std::vector<Eigen::VectorXd> forces(p, Eigen::VectorXd::Zero(d));
  for (int it = 0; it < opt.steps; ++it) {
    for (int i = 1; i < p - 1; ++i) values[i] = f.value_grad(nodes[i], grads[i]);
    climb = static_cast<int>(std::max_element(values.begin() + 1, values.end() - 1) - values.begin());
    const double vmax = values[climb];
    res.max_history.push_back(vmax);
    res.steps_taken = it + 1;
    res.point_grad_norm = grads[climb].norm();
    if (vmax <= 0.0) {
      res.status = "path-collapse";
      res.level = vmax;
      res.point = nodes[climb];
      res.path_values = values;
      return res;
    }
    if (res.point_grad_norm <= opt.grad_tol) {
      res.status = "converged";
      break;
    }

    // descent directions: gradient across the path, and for the climbing
    // node the gradient with its tangential part reversed
    double force = 0.0;
    for (int i = 1; i < p - 1; ++i) {
      Eigen::VectorXd tau = nodes[i + 1] - nodes[i - 1];
      const double tn = tau.norm();
      if (tn > 0) tau /= tn;
      const double along = grads[i].dot(tau);
      forces[i] = grads[i] - along * tau;
      if (i == climb) forces[i] -= along * tau;
      force = std::max(force, forces[i].norm());
    }
    const double spacing = (nodes[p - 1] - nodes[0]).norm() / (p - 1);
    if (step < 0.0) step = 0.25 * spacing / std::max(force, 1e-300);
    if (force > prev_force) step *= 0.5;
    else step *= 1.2;
    // no node moves by more than one path spacing per step
    step = std::min(step, spacing / std::max(force, 1e-300));
    prev_force = force;

    for (int i = 1; i < p - 1; ++i) nodes[i] -= step * forces[i];
    reparametrize(nodes, 0, static_cast<std::size_t>(climb));
    reparametrize(nodes, static_cast<std::size_t>(climb), static_cast<std::size_t>(p - 1));
  }
  if (res.status.empty()) {
    res.status = "stagnated";
    for (int i = 1; i < p - 1; ++i) values[i] = f.value_grad(nodes[i], grads[i]);
    climb = static_cast<int>(std::max_element(values.begin() + 1, values.end() - 1) - values.begin());
    res.point_grad_norm = grads[climb].norm();
  }
  res.geometry_ok = true;
  res.level = values[climb];
  res.point = nodes[climb];
  res.path_values = values;
  return res;
}

}  // namespace stokes
