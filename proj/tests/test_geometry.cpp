// domain_geometry tests: masks and neighborhoods, the two-window
// measurement predicates against an exhaustive pair check, and the
// ball-chain arithmetic.

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "fraccal/geometry.hpp"
#include "fraccal/rng.hpp"

using namespace fraccal;

TEST_CASE("mask construction and set algebra") {
  const GridSpec g = make_grid(10.0, 64);
  const RegionMask a = mask_from_intervals(g, {{-1.0, 1.0}});
  const RegionMask b = mask_from_intervals(g, {{0.5, 2.0}});
  CHECK(!a.empty());
  CHECK(make_mask(g).empty());
  CHECK(!masks_disjoint(a, b));
  CHECK(masks_disjoint(a, mask_from_intervals(g, {{3.0, 4.0}})));
  CHECK(mask_union(a, b).count() >= a.count());
  CHECK(mask_intersection(a, b).count() <= std::min(a.count(), b.count()));

  const auto ivs = mask_to_intervals(a);
  REQUIRE(ivs.size() == 1);
  CHECK(ivs[0].lo >= -1.0 - 1e-9);
  CHECK(ivs[0].hi <= 1.0 + 1e-9);
}

TEST_CASE("neighborhood: r = 0 identity, interval dilation, monotonicity") {
  const GridSpec g = make_grid(10.0, 512);
  const RegionMask a = mask_from_intervals(g, {{-1.0, 1.0}});

  const RegionMask same = neighborhood(a, 0.0);
  CHECK(same.indices() == a.indices());

  const RegionMask grown = neighborhood(a, 2.0);
  const RegionMask expect = mask_from_intervals(g, {{-3.0, 3.0}});
  CHECK(std::abs(grown.count() - expect.count()) <= 2);  // one node of rounding per side

  CHECK_THROWS_AS(neighborhood(a, -0.5), PreconditionError);
  CHECK_THROWS_AS(neighborhood(make_mask(g), 1.0), PreconditionError);

  CounterRng rng(5, "geometry/neigh");
  const GridSpec gs = make_grid(10.0, 64);
  for (int t = 0; t < 100; ++t) {
    RegionMask r = make_mask(gs);
    for (int j = 0; j < gs.N; ++j) r.member[j] = rng.uniform() < 0.2 ? 1 : 0;
    if (r.empty()) r.member[0] = 1;
    const double r1 = rng.uniform(0.0, 3.0);
    const double r2 = r1 + rng.uniform(0.0, 3.0);
    const RegionMask n1 = neighborhood(r, r1);
    const RegionMask n2 = neighborhood(r, r2);
    for (int j = 0; j < gs.N; ++j) CHECK(n1.member[j] <= n2.member[j]);
  }
}

TEST_CASE("neighborhood distributes over union") {
  const GridSpec g = make_grid(10.0, 64);
  CounterRng rng(6, "geometry/union");
  for (int t = 0; t < 20; ++t) {
    RegionMask a = make_mask(g), b = make_mask(g);
    for (int j = 0; j < g.N; ++j) {
      a.member[j] = rng.uniform() < 0.15 ? 1 : 0;
      b.member[j] = rng.uniform() < 0.15 ? 1 : 0;
    }
    if (a.empty()) a.member[3] = 1;
    if (b.empty()) b.member[7] = 1;
    const double r = rng.uniform(0.0, 2.5);
    const RegionMask lhs = neighborhood(mask_union(a, b), r);
    const RegionMask rhs = mask_union(neighborhood(a, r), neighborhood(b, r));
    CHECK(lhs.indices() == rhs.indices());
  }
}

namespace {

// independent exhaustive evaluation of the separation predicate
bool exhaustive_separation(const RegionMask& omega, const RegionMask& w1, const RegionMask& w2) {
  const GridSpec& g = omega.grid;
  for (int ja : w1.indices())
    for (int jb : w2.indices()) {
      const double x1 = g.node(ja), x2 = g.node(jb);
      double d1 = 1e300, d2 = 1e300;
      for (int jo : omega.indices()) {
        d1 = std::min(d1, std::abs(x1 - g.node(jo)));
        d2 = std::min(d2, std::abs(x2 - g.node(jo)));
      }
      if (std::abs(x1 - x2) < std::max(d1, d2) - 1e-12 * g.L) return false;
    }
  return true;
}

}  // namespace

TEST_CASE("measurement geometry: reference configuration passes") {
  const GridSpec g = make_grid(10.0, 512);
  const RegionMask omega = mask_from_intervals(g, {{-1.0, 1.0}});
  const RegionMask w1 = mask_from_intervals(g, {{3.0, 6.0}});
  const RegionMask w2 = mask_from_intervals(g, {{-6.0, -3.0}});
  const GeometryVerdict v = measurement_geometry_ok(omega, w1, w2);
  CHECK(v.separation_ok);
  CHECK(v.polar_cone_ok);
  CHECK(v.separation_ok == exhaustive_separation(omega, w1, w2));

  // symmetric in the two windows
  const GeometryVerdict swapped = measurement_geometry_ok(omega, w2, w1);
  CHECK(swapped.separation_ok == v.separation_ok);
  CHECK(swapped.polar_cone_ok == v.polar_cone_ok);
  CHECK(swapped.min_gap == doctest::Approx(v.min_gap).epsilon(1e-12));
}

TEST_CASE("measurement geometry: adjacent same-side windows fail separation") {
  const GridSpec g = make_grid(10.0, 512);
  const RegionMask omega = mask_from_intervals(g, {{-1.0, 1.0}});
  const RegionMask w1 = mask_from_intervals(g, {{2.0, 3.0}});
  const RegionMask w2 = mask_from_intervals(g, {{3.5, 4.0}});
  const GeometryVerdict v = measurement_geometry_ok(omega, w1, w2);
  CHECK_FALSE(v.separation_ok);
  CHECK_FALSE(exhaustive_separation(omega, w1, w2));
  CHECK_FALSE(v.polar_cone_ok);
}

TEST_CASE("measurement geometry rejects overlapping masks") {
  const GridSpec g = make_grid(10.0, 64);
  const RegionMask omega = mask_from_intervals(g, {{-1.0, 1.0}});
  const RegionMask w1 = mask_from_intervals(g, {{0.5, 3.0}});
  const RegionMask w2 = mask_from_intervals(g, {{-6.0, -3.0}});
  CHECK_THROWS_AS(measurement_geometry_ok(omega, w1, w2), PreconditionError);
}

TEST_CASE("chain_counts reproduces the worked arithmetic") {
  const ChainReport rep = chain_counts(0.1, 4.5, 1.0, 0.0, 0.01);
  CHECK(rep.y1 == doctest::Approx(1.0 / 24.0).epsilon(1e-15));
  CHECK(rep.n_vert == 22);  // ceil(1 + ln(1/24)/ln(6/7)) = ceil(21.616)
  CHECK(rep.n1 == 23);      // ceil(5 * 4.5)
  CHECK(rep.n2 == 5);       // ceil(5 * 1.0)
  CHECK(rep.n3 == 44);      // ceil(ln(0.01)/ln(0.9)) = ceil(43.708)
  CHECK(rep.c_omega_w == doctest::Approx(std::log(10.0) * 4.5).epsilon(1e-14));

  CHECK_THROWS_AS(chain_counts(2.5, 4.5, 1.0, 0.0, 0.01), PreconditionError);
  CHECK_THROWS_AS(chain_counts(0.1, 4.5, 1.0, 0.0, 1.5), PreconditionError);
}

TEST_CASE("chain totals respect the ball-chain bound with ceiling slack") {
  // The 14|log r_W| absorption of the vertical-chain count holds for r_W
  // small: 13|log y_1| <= 14|log r_W| needs |log r_W| to dominate the
  // offset log(12/5) from y_1 = (5/12) r_W.  Sample inside that regime.
  CounterRng rng(7, "geometry/chain");
  for (int t = 0; t < 50; ++t) {
    const double r_w = rng.uniform(0.001, 0.35);
    const double gap = rng.uniform(0.1, 8.0);
    const double r_om = rng.uniform(0.1, 3.0);
    const double h = rng.uniform(0.001, 0.9);
    const ChainReport rep = chain_counts(r_w, gap, r_om, 0.0, h);
    const double bound =
        std::ceil(14.0 * std::abs(std::log(r_w)) + 5.0 * gap + 5.0 * r_om +
                  10.0 * std::abs(std::log(h))) + 4.0;
    CHECK(static_cast<double>(rep.n_vert + rep.n1 + rep.n2 + rep.n3) <= bound);
  }
}

TEST_CASE("sigma_constant: worked value, linearity, monotonicity") {
  const ChainReport rep = chain_counts(0.1, 4.5, 1.0, 0.0, 0.01);
  const double sigma = sigma_constant(rep, 1.0);
  CHECK(sigma == doctest::Approx(1.0 / (std::log(10.0) * 4.5)).epsilon(1e-14));
  CHECK(sigma == doctest::Approx(0.09651).epsilon(1e-3));
  CHECK(sigma_constant(rep, 0.5) == doctest::Approx(0.5 * sigma).epsilon(1e-15));

  double prev = 1e300;
  for (double r_w : {0.1, 0.05, 0.01}) {
    const double s = sigma_constant(chain_counts(r_w, 4.5, 1.0, 0.0, 0.01), 1.0);
    CHECK(s < prev);
    prev = s;
  }

  // decreasing in r_omega and in the gap as well
  CHECK(sigma_constant(chain_counts(0.1, 4.5, 2.0, 0.0, 0.01), 1.0) < sigma);
  CHECK(sigma_constant(chain_counts(0.1, 6.5, 1.0, 0.0, 0.01), 1.0) < sigma);

  ChainReport zero = rep;
  zero.c_omega_w = 0.0;
  CHECK_THROWS_AS(sigma_constant(zero, 1.0), PreconditionError);
}
