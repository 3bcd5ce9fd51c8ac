#include <doctest.h>

#include <cmath>
#include <random>

#include "oracles.hpp"
#include "stokes/dispersion.hpp"
#include "stokes/errors.hpp"

using namespace stokes;

namespace {

PhysicalParams deep(double kappa = 0.0, double gamma = 0.0) { return {1.0, Depth::infinite(), kappa, gamma}; }
PhysicalParams shallow(double h, double kappa = 0.0, double gamma = 0.0, double g = 1.0) {
  return {g, Depth::finite(h), kappa, gamma};
}

oracle::Params to_oracle(const PhysicalParams& p) {
  oracle::Params o{p.g, {}, p.kappa, p.gamma};
  if (!p.depth.is_infinite()) o.depth = p.depth.value();
  return o;
}

}  // namespace

TEST_SUITE("dispersion") {
  TEST_CASE("omega closed-form examples") {
    CHECK(omega(deep(), 1.0) == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(omega(deep(0.0, 2.0), 1.0) == doctest::Approx(1.0 + std::sqrt(2.0)).epsilon(1e-15));
    CHECK(omega(shallow(1.0), 2.0) == doctest::Approx(std::sqrt(2.0 * std::tanh(2.0))).epsilon(1e-15));
    CHECK_THROWS_AS(omega(deep(), 0.0), DomainError);
  }

  TEST_CASE("omega is positive for gamma >= 0 and xi > 0") {
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int i = 0; i < 200; ++i) {
      const PhysicalParams p = shallow(0.1 + 5 * u(rng), 3 * u(rng), 3 * u(rng), 0.1 + 5 * u(rng));
      CHECK(omega(p, 0.01 + 20 * u(rng)) > 0.0);
    }
  }

  TEST_CASE("phase speed examples and antisymmetry") {
    CHECK(phase_speed_limit(shallow(1.0), Side::Positive) == doctest::Approx(1.0));
    CHECK(phase_speed(deep(0.5), 1.0) == doctest::Approx(std::sqrt(1.5)).epsilon(1e-15));
    const PhysicalParams a = shallow(2.0, 1.0, 0.7), b = shallow(2.0, 1.0, -0.7);
    CHECK(phase_speed(a, -3.0) == doctest::Approx(-phase_speed(b, 3.0)).epsilon(1e-15));
    CHECK_THROWS_AS(phase_speed(deep(), 0.0), DomainError);
  }

  TEST_CASE("phase speed limits match small xi") {
    const PhysicalParams p = shallow(1.3, 0.2, 0.6);
    CHECK(phase_speed(p, 1e-6) == doctest::Approx(phase_speed_limit(p, Side::Positive)).epsilon(1e-8));
    CHECK(phase_speed(p, -1e-6) == doctest::Approx(phase_speed_limit(p, Side::Negative)).epsilon(1e-8));
  }

  TEST_CASE("bond numbers") {
    auto b = bond_numbers(shallow(1.0, 1.0));
    CHECK(b.plus == doctest::Approx(1.0));
    CHECK(b.minus == doctest::Approx(1.0));
    b = bond_numbers(shallow(1.0, 0.0, 2.0));
    CHECK(b.plus == doctest::Approx(-(2.0 / 3.0) * (1 + std::sqrt(2.0))).epsilon(1e-14));
    CHECK(b.minus == doctest::Approx(-(2.0 / 3.0) * (1 - std::sqrt(2.0))).epsilon(1e-14));
    b = bond_numbers(shallow(0.1, 0.074, 0.0, 9.81));
    CHECK(b.plus == doctest::Approx(0.074 / (9.81 * 0.01)).epsilon(1e-14));
    CHECK_THROWS_AS(bond_numbers(deep()), UnsupportedConfiguration);
  }

  TEST_CASE("bond numbers against the high-precision oracle for tiny vorticity") {
    for (double gamma : {1e-8, -1e-4, 1e-2, 3.0}) {
      const PhysicalParams p = shallow(0.7, 0.3, gamma, 2.0);
      const auto b = bond_numbers(p);
      const auto [bp, bm] = oracle::bond_numbers(to_oracle(p));
      CHECK(std::abs(b.plus - bp.convert_to<double>()) <= 1e-13 * std::abs(bp.convert_to<double>()));
      CHECK(std::abs(b.minus - bm.convert_to<double>()) <= 1e-13 * std::abs(bm.convert_to<double>()));
    }
  }

  TEST_CASE("bifurcation speed") {
    CHECK(bifurcation_speed(deep(), 1) == doctest::Approx(1.0));
    CHECK(bifurcation_speed(deep(), -1) == doctest::Approx(-1.0));
    CHECK(bifurcation_speed(deep(0.5), -2) == doctest::Approx(-std::sqrt(1.5)).epsilon(1e-15));
    CHECK_THROWS_AS(bifurcation_speed(deep(), 0), DomainError);
  }

  TEST_CASE("kernel regimes") {
    auto r = kernel_regime(shallow(1.0));
    CHECK(r.regime == Regime::R1b);
    CHECK(r.positive_side == Monotonicity::StrictlyDecreasing);
    r = kernel_regime(deep(1.0));
    CHECK(r.regime == Regime::R2a);
    CHECK(r.positive_side == Monotonicity::UniqueLocalMinimum);
    r = kernel_regime(shallow(1.0, 10.0));
    CHECK(r.regime == Regime::R1a);
    CHECK(r.positive_side == Monotonicity::StrictlyIncreasing);
    CHECK(r.sampled_consistent);
  }

  TEST_CASE("classification examples") {
    auto rec = classify_kernel(shallow(1.0), 1);
    CHECK(rec.kernel_dim == 2);
    CHECK(rec.regime == Regime::R1b);
    rec = classify_kernel(deep(0.5), -1);
    CHECK(rec.kernel_dim == 4);
    REQUIRE(rec.partner);
    CHECK(*rec.partner == -2);
    CHECK(*rec.residual <= 1e-9 * std::max(1.0, std::abs(rec.c_star * 2)));
    rec = classify_kernel(deep(0.5), -3);
    CHECK(rec.kernel_dim == 2);
    CHECK_THROWS_AS(classify_kernel(deep(), 0), DomainError);
    CHECK_THROWS_AS(classify_kernel(deep(), 5, 3), MisuseError);
  }

  TEST_CASE("classification agrees with the brute-force scan on resonant draws") {
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int i = 0; i < 10; ++i) {
      const double h = 0.5 + 3 * u(rng), gamma = 2 * u(rng) - 1;
      const int js = -1 - static_cast<int>(3 * u(rng));
      const int j = js - 1 - static_cast<int>(3 * u(rng));
      const double kappa = find_resonant_kappa(1.0, Depth::finite(h), gamma, js, j).kappa;
      const PhysicalParams p = shallow(h, kappa, gamma);
      const auto rec = classify_kernel(p, js, 64);
      const auto bf = oracle::brute_force_kernel(to_oracle(p), js, 64, kDefaultResonanceTol);
      CHECK(rec.kernel_dim == bf.dim);
      CHECK(rec.partner == bf.partner);
    }
  }

  TEST_CASE("resonant surface tension") {
    CHECK(find_resonant_kappa(1.0, Depth::infinite(), 0.0, -1, -2).kappa == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(find_resonant_kappa(1.0, Depth::infinite(), 0.0, -1, -3).kappa ==
          doctest::Approx(1.0 / 3.0).epsilon(1e-12));
    const double k = find_resonant_kappa(1.0, Depth::finite(1.0), 0.0, -1, -2).kappa;
    // root of sqrt((1 + k) tanh 1) = sqrt((1 + 4k) tanh 2 / 2)
    const double lhs = (1 + k) * std::tanh(1.0), rhs = (1 + 4 * k) * std::tanh(2.0) / 2;
    CHECK(std::abs(lhs - rhs) <= 1e-12);
    CHECK_THROWS_AS(find_resonant_kappa(1.0, Depth::infinite(), 0.0, -1, 2), MisuseError);
    CHECK_THROWS_AS(find_resonant_kappa(1.0, Depth::infinite(), 0.0, -2, -1), MisuseError);
  }

  TEST_CASE("atlas scan") {
    AtlasGrid grid{{1.0}, {Depth::infinite()}, {0.13, 0.5, 1.0}, {0.0}};
    const auto recs = atlas_scan(grid, -1);
    REQUIRE(recs.size() == 3);
    CHECK(recs[0].kernel_dim == 2);
    CHECK(recs[1].kernel_dim == 4);
    CHECK(recs[2].kernel_dim == 2);
    AtlasGrid single{{1.0}, {Depth::finite(1.0)}, {0.0}, {0.0}};
    CHECK(atlas_scan(single, 1).at(0).kernel_dim == 2);
    CHECK_THROWS(atlas_scan(AtlasGrid{}, 1));
  }

  TEST_CASE("depth parsing") {
    CHECK(Depth::parse("inf").is_infinite());
    CHECK(Depth::parse("2.5").value() == 2.5);
    CHECK(Depth::infinite().to_string() == "inf");
    CHECK_THROWS(Depth::parse("deep"));
  }
}
