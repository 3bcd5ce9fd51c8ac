#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace stokes {

/// Fluid depth: a positive length or the deep-water limit.
class Depth {
public:
  static Depth finite(double h);
  static Depth infinite() { return Depth{}; }

  bool is_infinite() const noexcept { return !value_; }
  /// Only meaningful for finite depth.
  double value() const;

  /// "inf" or the number with 17 significant digits.
  std::string to_string() const;
  static Depth parse(std::string_view text);

  friend bool operator==(const Depth&, const Depth&) = default;

private:
  Depth() = default;
  explicit Depth(double h) : value_(h) {}
  std::optional<double> value_;
};

/// Gravity, depth, surface tension and constant vorticity. The wavelength is
/// fixed to 2 pi.
struct PhysicalParams {
  double g = 1.0;
  Depth depth = Depth::infinite();
  double kappa = 0.0;
  double gamma = 0.0;

  /// Throws DomainError unless g > 0, kappa >= 0 and all values are finite.
  void validate() const;
};

std::ostream& operator<<(std::ostream& os, const PhysicalParams& p);

/// Fixed relative tolerance used both for kernel classification and for the
/// construction of the resonant mode set in the reduction.
inline constexpr double kDefaultResonanceTol = 1e-9;

// Linear dispersion relation Omega_xi (frequency of the wave e^{i xi x}).
double omega(const PhysicalParams& p, double xi);

// Linear phase speed f(xi) = Omega_xi / xi.
double phase_speed(const PhysicalParams& p, double xi);

enum class Side { Positive, Negative };

/// One-sided limit of f at 0 (may be +-infinity in deep water).
double phase_speed_limit(const PhysicalParams& p, Side side);

struct BondNumbers {
  double plus;
  double minus;
};

/// Vorticity-modified Bond numbers. Finite depth only.
BondNumbers bond_numbers(const PhysicalParams& p);

/// c* = Omega_{j*} / j*.
double bifurcation_speed(const PhysicalParams& p, int j_star);

enum class Regime { R1a, R1b, R2a, R2b };

std::string_view to_string(Regime r);

/// Shape of f restricted to one half-line.
enum class Monotonicity { StrictlyIncreasing, StrictlyDecreasing, UniqueLocalMinimum, UniqueLocalMaximum };

std::string_view to_string(Monotonicity m);

struct RegimeReport {
  Regime regime;
  Monotonicity positive_side;  ///< f on (0, inf)
  Monotonicity negative_side;  ///< f on (-inf, 0)
  /// lim f''(0+) and lim f''(0-); only set in regime 1a.
  std::optional<double> second_derivative_plus;
  std::optional<double> second_derivative_minus;
  /// Whether a log-grid sample of f' reproduces the predicted shapes.
  bool sampled_consistent = false;
};

RegimeReport kernel_regime(const PhysicalParams& p);

struct ClassificationRecord {
  PhysicalParams params;
  int j_star = 0;
  double c_star = 0.0;
  int kernel_dim = 2;
  std::optional<int> partner;
  std::optional<double> bond_plus;
  std::optional<double> bond_minus;
  Regime regime = Regime::R1b;
  /// |Omega_j - c* j| of the partner, or of the closest candidate when none
  /// was accepted (absent when the search was skipped).
  std::optional<double> residual;
  bool searched = false;
};

/// Searches |j| <= j_max with sign(j) = sign(j*) for a second wavenumber with
/// the same phase speed. tol is relative: |Omega_j - c* j| <= tol max(1, |c* j|).
ClassificationRecord classify_kernel(const PhysicalParams& p, int j_star, int j_max = 256,
                                     double tol = kDefaultResonanceTol);

struct ResonantKappa {
  double kappa;
  /// All roots bracketed below the cap, ascending; kappa is the first one.
  std::vector<double> roots;
  double residual;
};

/// Surface tension at which wavenumbers j* and j share the same phase speed.
ResonantKappa find_resonant_kappa(double g, Depth depth, double gamma, int j_star, int j,
                                  double kappa_max = 1e12);

struct AtlasGrid {
  std::vector<double> g;
  std::vector<Depth> depth;
  std::vector<double> kappa;
  std::vector<double> gamma;

  std::size_t size() const noexcept { return g.size() * depth.size() * kappa.size() * gamma.size(); }
};

/// One classification per grid point, in row-major order (g, depth, kappa, gamma).
std::vector<ClassificationRecord> atlas_scan(const AtlasGrid& grid, int j_star, int j_max = 256,
                                             double tol = kDefaultResonanceTol, int threads = 1);

inline constexpr std::string_view kAtlasHeader =
    "g,depth,kappa,gamma,j_star,c_star,kernel_dim,partner,bond_plus,bond_minus,regime";

void write_atlas_csv(std::ostream& os, const std::vector<ClassificationRecord>& records);

}  // namespace stokes
