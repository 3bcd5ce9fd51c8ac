#include <doctest.h>

#include <cmath>
#include <random>

#include "stokes/bifurcation.hpp"
#include "stokes/errors.hpp"

using namespace stokes;

namespace {

const PhysicalParams kWilton{1.0, Depth::infinite(), 0.5, 0.0};

/// Radial test functionals of the weighted norm r = ||x||_*.
class Radial : public ReducedFunctional {
public:
  explicit Radial(bool cubic) : cubic_(cubic), w_(Eigen::Vector4d(0.5, 0.5, 1.0, 1.0)) {}
  std::size_t dim() const override { return 4; }
  Eigen::VectorXd weights() const override { return w_; }
  double value(const Eigen::VectorXd& x) override {
    Eigen::VectorXd g;
    return value_grad(x, g);
  }
  double value_grad(const Eigen::VectorXd& x, Eigen::VectorXd& g) override {
    const double r = std::sqrt(x.cwiseProduct(x).dot(w_));
    const double dr = cubic_ ? 2 - 3 * r : 2;  // d/dr of r^2 - r^3, divided by r
    g = dr * w_.cwiseProduct(x);
    return r * r - (cubic_ ? r * r * r : 0.0);
  }

private:
  bool cubic_;
  Eigen::VectorXd w_;
};

}  // namespace

TEST_SUITE("bifurcation") {
  TEST_CASE("orbit distance") {
    const KernelData k = kernel_basis(kWilton, SpectralGrid(16), -1);
    std::mt19937_64 rng(1);
    std::normal_distribution<double> normal;
    ReducedVector v(k);
    for (Eigen::Index i = 0; i < 4; ++i) v.x[i] = normal(rng);
    CHECK_FALSE(orbit_distinct(v, rotate(v, 0.7)));
    CHECK_FALSE(orbit_distinct(v, reflect(v)));
    CHECK_FALSE(orbit_distinct(v, reflect(rotate(v, 2.5))));
    ReducedVector a(k), b(k);
    a.alpha(0) = 1.0 / std::sqrt(0.5);
    b.alpha(1) = 1.0;
    CHECK(orbit_distinct(a, b));
    CHECK(orbit_distance(a, b).distance == doctest::Approx(std::sqrt(2.0)));
    const ReducedVector c = canonical_phase(rotate(v, 1.1));
    CHECK(std::abs(c.beta(0)) <= 1e-14);
    CHECK(c.alpha(0) >= 0.0);
    CHECK_FALSE(orbit_distinct(c, v));
  }

  TEST_CASE("mountain pass on synthetic functionals") {
    Radial quad(false);
    const MountainPassResult q = mountain_pass(quad);
    CHECK_FALSE(q.geometry_ok);
    CHECK((q.status == "no-low-point" || q.status == "path-collapse"));

    Radial cubic(true);
    MountainPassOptions opt;
    opt.radius = 2.0;
    const MountainPassResult r = mountain_pass(cubic, opt);
    CHECK(r.geometry_ok);
    CHECK(r.status == "converged");
    CHECK(r.level == doctest::Approx(4.0 / 27.0).epsilon(1e-8));
    // min-max consistency: the level never exceeds the max along the initial straight path
    double straight = 0.0;
    for (int i = 0; i <= 20000; ++i) straight = std::max(straight, cubic.value(r.low_point * (i / 20000.0)));
    CHECK(r.level <= straight + 1e-8);
    CHECK(r.level >= 0.0);
  }

  TEST_CASE("non-resonant branch: trivial point, parity and speed shift") {
    const SpectralGrid grid(64);
    const auto pts = nonresonant_branch(PhysicalParams{}, grid, 1, {0.0, 0.01, 0.02});
    CHECK(pts[0].c == 1.0);
    CHECK(pts[0].state.norm() == 0.0);
    for (std::size_t i = 1; i < pts.size(); ++i) {
      CHECK(pts[i].accepted);
      CHECK(pts[i].residual_norm <= 1e-10);
      CHECK(pts[i].diagnostics["parity_defect"].get<double>() <= 1e-10);
      CHECK(pts[i].momentum == doctest::Approx(momentum(pts[i].state)).epsilon(1e-12));
      const double a = pts[i].diagnostics["first_fourier_amplitude"].get<double>();
      CHECK(std::abs(pts[i].c - 1.0 - a * a / 2) <= 5 * std::pow(a, 4));
    }
    CHECK_THROWS_AS(nonresonant_branch(kWilton, SpectralGrid(16), -1, {0.01}), MisuseError);
  }

  TEST_CASE("branch point serialization") {
    const auto pts = nonresonant_branch(PhysicalParams{}, SpectralGrid(16), 1, {0.01});
    const nlohmann::json j = to_json(pts[0]);
    CHECK(j.at("c").get<double>() == pts[0].c);
    CHECK((state_from_json(j.at("state")) - pts[0].state).norm() == 0.0);
  }

  TEST_CASE("driver preconditions") {
    const SpectralGrid grid(16);
    const double cs = bifurcation_speed(kWilton, -1);
    CHECK_THROWS_AS(resonant_fixed_speed(kWilton, grid, -1, -2, cs), MisuseError);
    CHECK_THROWS_AS(resonant_fixed_speed(kWilton, grid, -1, -3, cs + 1e-3), MisuseError);
    CHECK_THROWS_AS(resonant_fixed_speed(PhysicalParams{}, grid, 1, 2, 1.001), MisuseError);
    CHECK_THROWS_AS(resonant_fixed_momentum(kWilton, grid, -1, -2, -1e-4), MisuseError);
    CHECK_THROWS_AS(resonant_fixed_momentum(kWilton, grid, -1, -2, 0.5), MisuseError);
  }

  TEST_CASE("fixed-speed orbits are invariant under the group action") {
    const SpectralGrid grid(24);
    const double cs = bifurcation_speed(kWilton, -1);
    const FixedSpeedResult r = resonant_fixed_speed(kWilton, grid, -1, -2, cs + 2e-3, 4);
    REQUIRE_FALSE(r.orbits.empty());
    const KernelData k = kernel_basis(kWilton, grid, -1);
    for (const BranchPoint& b : r.orbits) {
      CHECK(b.residual_norm <= 1e-10);
      for (double theta : {0.4, 1.9, 4.0}) {
        CHECK(std::abs(reduced_phi(k, grid, r.c, rotate(b.orbit_tag, theta)) - b.phi) <= 1e-10);
        const SurfaceState moved = translate(b.state, theta);
        CHECK(std::abs(residual(kWilton, grid, r.c, moved).norm() - b.residual_norm) <= 1e-12);
      }
    }
  }
}
