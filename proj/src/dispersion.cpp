#include "stokes/dispersion.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <limits>
#include <ostream>

#include "stokes/errors.hpp"
#include "stokes/numfmt.hpp"
#include "stokes/parallel.hpp"

namespace stokes {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

int sign_of(double x) { return (x > 0) - (x < 0); }

// Omega = s + sqrt(X + s^2) with s the vorticity shift and X >= 0 the
// gravity-capillary part; written as X / (r - s) when s < 0 so the sum never
// cancels.
double shifted_root(double shift, double x) {
  const double r = std::sqrt(x + shift * shift);
  if (shift >= 0) return shift + r;
  return x / (r - shift);
}

}  // namespace

Depth Depth::finite(double h) {
  if (!(h > 0) || !std::isfinite(h)) throw DomainError("depth must be a positive finite number or \"inf\"");
  return Depth{h};
}

double Depth::value() const {
  if (!value_) throw UnsupportedConfiguration("infinite depth has no numeric value");
  return *value_;
}

std::string Depth::to_string() const { return value_ ? fmt17(*value_) : std::string("inf"); }

Depth Depth::parse(std::string_view text) {
  if (text == "inf" || text == "infinity" || text == "Inf") return infinite();
  double h = 0;
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), h);
  if (ec != std::errc{} || ptr != text.data() + text.size()) {
    throw ConfigError("cannot parse depth '" + std::string(text) + "'");
  }
  return finite(h);
}

void PhysicalParams::validate() const {
  if (!(g > 0) || !std::isfinite(g)) throw DomainError("gravity must be positive and finite");
  if (!(kappa >= 0) || !std::isfinite(kappa)) throw DomainError("surface tension must be non-negative and finite");
  if (!std::isfinite(gamma)) throw DomainError("vorticity must be finite");
}

std::ostream& operator<<(std::ostream& os, const PhysicalParams& p) {
  return os << "(g=" << p.g << ", depth=" << p.depth.to_string() << ", kappa=" << p.kappa
            << ", gamma=" << p.gamma << ")";
}

double omega(const PhysicalParams& p, double xi) {
  if (xi == 0) throw DomainError("omega: xi must be nonzero");
  if (p.depth.is_infinite()) {
    const double x = (p.g + p.kappa * xi * xi) * std::abs(xi);
    return shifted_root(0.5 * p.gamma * sign_of(xi), x);
  }
  const double t = std::tanh(p.depth.value() * xi);
  const double x = (p.g + p.kappa * xi * xi) * xi * t;
  return shifted_root(0.5 * p.gamma * t, x);
}

double phase_speed(const PhysicalParams& p, double xi) {
  if (xi == 0) throw DomainError("phase_speed: xi must be nonzero");
  return omega(p, xi) / xi;
}

double phase_speed_limit(const PhysicalParams& p, Side side) {
  const double s = side == Side::Positive ? 1.0 : -1.0;
  if (!p.depth.is_infinite()) {
    const double h = p.depth.value();
    return 0.5 * p.gamma * h + s * std::sqrt((p.g + 0.25 * p.gamma * p.gamma * h) * h);
  }
  // Deep water: the side where the vorticity shift has the sign of xi blows
  // up; on the other side f -> -g/gamma (or its mirror).
  const double signed_gamma = s * p.gamma;
  if (signed_gamma >= 0) return s * kInf;
  return -p.g / p.gamma;
}

BondNumbers bond_numbers(const PhysicalParams& p) {
  if (p.depth.is_infinite()) throw UnsupportedConfiguration("Bond numbers are defined for finite depth only");
  const double h = p.depth.value();
  const double base = p.kappa / (p.g * h * h);
  const double q = h * p.gamma * p.gamma / (6.0 * p.g);
  const double e = h * p.gamma * p.gamma / (9.0 * p.g);
  const double r = std::sqrt(q * q + e);
  const double plus = base - q - r;
  const double minus = base + (r > q ? e / (r + q) : 0.0);
  return {plus, minus};
}

double bifurcation_speed(const PhysicalParams& p, int j_star) {
  if (j_star == 0) throw DomainError("bifurcation_speed: j_star must be nonzero");
  return phase_speed(p, static_cast<double>(j_star));
}

std::string_view to_string(Regime r) {
  switch (r) {
    case Regime::R1a: return "1a";
    case Regime::R1b: return "1b";
    case Regime::R2a: return "2a";
    case Regime::R2b: return "2b";
  }
  return "?";
}

std::string_view to_string(Monotonicity m) {
  switch (m) {
    case Monotonicity::StrictlyIncreasing: return "strictly_increasing";
    case Monotonicity::StrictlyDecreasing: return "strictly_decreasing";
    case Monotonicity::UniqueLocalMinimum: return "unique_local_minimum";
    case Monotonicity::UniqueLocalMaximum: return "unique_local_maximum";
  }
  return "?";
}

namespace {

// Shape of f on one half-line, read off from the signs of successive
// differences along an increasing log-spaced grid.
std::optional<Monotonicity> sampled_shape(const PhysicalParams& p, Side side) {
  constexpr int n = 1200;
  const double lo = std::log10(1e-4), hi = std::log10(1e6);
  std::vector<double> xs(n);
  for (int i = 0; i < n; ++i) {
    const double x = std::pow(10.0, lo + (hi - lo) * i / (n - 1));
    xs[i] = side == Side::Positive ? x : -x;
  }
  if (side == Side::Negative) std::reverse(xs.begin(), xs.end());
  std::vector<int> runs;
  double prev = phase_speed(p, xs[0]);
  for (int i = 1; i < n; ++i) {
    const double cur = phase_speed(p, xs[i]);
    const double d = cur - prev;
    prev = cur;
    const double scale = 64 * std::numeric_limits<double>::epsilon() * std::max(1.0, std::abs(cur));
    if (std::abs(d) <= scale) continue;
    const int s = d > 0 ? 1 : -1;
    if (runs.empty() || runs.back() != s) runs.push_back(s);
  }
  if (runs.size() == 1) return runs[0] > 0 ? Monotonicity::StrictlyIncreasing : Monotonicity::StrictlyDecreasing;
  if (runs.size() == 2) return runs[0] < 0 ? Monotonicity::UniqueLocalMinimum : Monotonicity::UniqueLocalMaximum;
  return std::nullopt;
}

}  // namespace

RegimeReport kernel_regime(const PhysicalParams& p) {
  p.validate();
  RegimeReport rep{};
  const bool capillary = p.kappa > 0;
  if (p.depth.is_infinite()) {
    rep.regime = capillary ? Regime::R2a : Regime::R2b;
    rep.positive_side = capillary ? Monotonicity::UniqueLocalMinimum : Monotonicity::StrictlyDecreasing;
    rep.negative_side = capillary ? Monotonicity::UniqueLocalMaximum : Monotonicity::StrictlyDecreasing;
  } else if (!capillary) {
    rep.regime = Regime::R1b;
    rep.positive_side = rep.negative_side = Monotonicity::StrictlyDecreasing;
  } else {
    rep.regime = Regime::R1a;
    const double h = p.depth.value();
    const auto bond = bond_numbers(p);
    // The f'' limits are stated for gamma >= 0; negative vorticity maps onto
    // that case through f(xi; gamma) = -f(-xi; -gamma), which swaps B+ and B-.
    const double b_pos = p.gamma >= 0 ? bond.plus : bond.minus;
    const double b_neg = p.gamma >= 0 ? bond.minus : bond.plus;
    const double alpha = 2 * p.g * h * h * h / std::sqrt((4 * p.g + p.gamma * p.gamma * h) * h);
    rep.second_derivative_plus = alpha * (b_pos - 1.0 / 3.0);
    rep.second_derivative_minus = -alpha * (b_neg - 1.0 / 3.0);
    rep.positive_side = *rep.second_derivative_plus >= 0 ? Monotonicity::StrictlyIncreasing
                                                         : Monotonicity::UniqueLocalMinimum;
    rep.negative_side = *rep.second_derivative_minus <= 0 ? Monotonicity::StrictlyIncreasing
                                                          : Monotonicity::UniqueLocalMaximum;
  }
  rep.sampled_consistent = sampled_shape(p, Side::Positive) == rep.positive_side &&
                           sampled_shape(p, Side::Negative) == rep.negative_side;
  return rep;
}

ClassificationRecord classify_kernel(const PhysicalParams& p, int j_star, int j_max, double tol) {
  p.validate();
  if (j_star == 0) throw DomainError("classify_kernel: j_star must be nonzero");
  if (j_max < std::abs(j_star)) throw MisuseError("classify_kernel: j_max must be at least |j_star|");
  if (!(tol > 0)) throw MisuseError("classify_kernel: tol must be positive");

  ClassificationRecord rec;
  rec.params = p;
  rec.j_star = j_star;
  rec.c_star = bifurcation_speed(p, j_star);
  if (!p.depth.is_infinite()) {
    const auto b = bond_numbers(p);
    rec.bond_plus = b.plus;
    rec.bond_minus = b.minus;
  }
  const auto regime = kernel_regime(p);
  rec.regime = regime.regime;

  const auto shape = j_star > 0 ? regime.positive_side : regime.negative_side;
  if (shape == Monotonicity::StrictlyIncreasing || shape == Monotonicity::StrictlyDecreasing) {
    rec.kernel_dim = 2;
    return rec;
  }

  rec.searched = true;
  const int s = j_star > 0 ? 1 : -1;
  double best = std::numeric_limits<double>::infinity();
  int best_j = 0;
  for (int m = 1; m <= j_max; ++m) {
    const int j = s * m;
    if (j == j_star) continue;
    const double cj = rec.c_star * j;
    const double res = std::abs(omega(p, j) - cj);
    const double rel = res / std::max(1.0, std::abs(cj));
    if (rel < best) {
      best = rel;
      best_j = j;
      rec.residual = res;
    }
  }
  if (best_j != 0 && best <= tol) {
    rec.kernel_dim = 4;
    rec.partner = best_j;
  }
  return rec;
}

ResonantKappa find_resonant_kappa(double g, Depth depth, double gamma, int j_star, int j, double kappa_max) {
  if (j_star == 0 || j == 0) throw DomainError("find_resonant_kappa: wavenumbers must be nonzero");
  if (!(std::abs(j_star) < std::abs(j)) || (j > 0) != (j_star > 0)) {
    throw MisuseError("find_resonant_kappa: need 1 <= |j_star| < |j| with equal signs");
  }
  PhysicalParams p{g, depth, 0.0, gamma};
  p.validate();
  const double s = j_star > 0 ? 1.0 : -1.0;
  auto diff = [&](double kappa) {
    p.kappa = kappa;
    return s * (phase_speed(p, j) - phase_speed(p, j_star));
  };

  const double d0 = diff(0.0);
  if (!(d0 < 0)) {
    throw SearchFailure("find_resonant_kappa: phase-speed difference is not negative at kappa = 0",
                        {{"difference_at_zero", d0}});
  }
  double hi = 1.0;
  while (diff(hi) <= 0) {
    hi *= 2;
    if (hi > kappa_max) {
      throw SearchFailure("find_resonant_kappa: no sign change below the kappa cap",
                          {{"kappa_max", kappa_max}, {"difference_at_zero", d0}, {"last_kappa", hi / 2}});
    }
  }

  // every sign change on [0, hi]; the smallest root wins
  constexpr int n_scan = 2000;
  std::vector<double> grid{0.0};
  for (int i = 0; i < n_scan; ++i) grid.push_back(hi * std::pow(10.0, -12.0 + 12.0 * i / (n_scan - 1)));
  ResonantKappa out{};
  double prev_k = grid[0], prev_d = d0;
  for (std::size_t i = 1; i < grid.size(); ++i) {
    const double k = grid[i], d = diff(k);
    if (d == 0) {
      out.roots.push_back(k);
    } else if ((prev_d < 0) != (d < 0) && prev_d != 0) {
      double lo = prev_k, up = k, dlo = prev_d;
      for (int it = 0; it < 200; ++it) {
        const double mid = 0.5 * (lo + up);
        if (mid <= lo || mid >= up) break;
        const double dm = diff(mid);
        if (dm == 0) {
          lo = up = mid;
          break;
        }
        if ((dm < 0) == (dlo < 0)) {
          lo = mid;
          dlo = dm;
        } else {
          up = mid;
        }
      }
      const double a = std::abs(diff(lo)), b = std::abs(diff(up));
      out.roots.push_back(a <= b ? lo : up);
    }
    prev_k = k;
    prev_d = d;
  }
  if (out.roots.empty()) throw SearchFailure("find_resonant_kappa: bracket lost during scan", {{"kappa_hi", hi}});
  out.kappa = out.roots.front();
  out.residual = std::abs(diff(out.kappa));
  return out;
}

std::vector<ClassificationRecord> atlas_scan(const AtlasGrid& grid, int j_star, int j_max, double tol, int threads) {
  if (grid.size() == 0) throw MisuseError("atlas_scan: empty parameter grid");
  std::vector<ClassificationRecord> out(grid.size());
  const std::size_t nd = grid.depth.size(), nk = grid.kappa.size(), ng = grid.gamma.size();
  parallel_for(out.size(), threads, [&](std::size_t idx) {
    std::size_t r = idx;
    const std::size_t ig = r % ng;
    r /= ng;
    const std::size_t ik = r % nk;
    r /= nk;
    const std::size_t id = r % nd;
    const std::size_t igr = r / nd;
    PhysicalParams p{grid.g[igr], grid.depth[id], grid.kappa[ik], grid.gamma[ig]};
    out[idx] = classify_kernel(p, j_star, std::max(j_max, std::abs(j_star)), tol);
  });
  return out;
}

void write_atlas_csv(std::ostream& os, const std::vector<ClassificationRecord>& records) {
  os << kAtlasHeader << '\n';
  for (const auto& r : records) {
    os << fmt17(r.params.g) << ',' << r.params.depth.to_string() << ',' << fmt17(r.params.kappa) << ','
       << fmt17(r.params.gamma) << ',' << r.j_star << ',' << fmt17(r.c_star) << ',' << r.kernel_dim << ',';
    if (r.partner) os << *r.partner;
    os << ',';
    if (r.bond_plus) os << fmt17(*r.bond_plus);
    os << ',';
    if (r.bond_minus) os << fmt17(*r.bond_minus);
    os << ',' << to_string(r.regime) << '\n';
  }
  if (!os) throw Error("write_atlas_csv: output stream failure");
}

}  // namespace stokes
