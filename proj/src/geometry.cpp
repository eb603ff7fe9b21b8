#include "fraccal/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

namespace fraccal {

bool RegionMask::empty() const {
  for (auto m : member)
    if (m) return false;
  return true;
}

int RegionMask::count() const {
  int c = 0;
  for (auto m : member) c += (m != 0);
  return c;
}

std::vector<int> RegionMask::indices() const {
  std::vector<int> idx;
  idx.reserve(member.size());
  for (int j = 0; j < static_cast<int>(member.size()); ++j)
    if (member[j]) idx.push_back(j);
  return idx;
}

RegionMask make_mask(const GridSpec& grid) {
  return RegionMask{grid, std::vector<std::uint8_t>(static_cast<std::size_t>(grid.N), 0)};
}

RegionMask mask_from_intervals(const GridSpec& grid, const std::vector<Interval>& intervals) {
  RegionMask m = make_mask(grid);
  const double tol = 1e-12 * grid.L;
  for (const auto& iv : intervals) {
    if (iv.hi < iv.lo) throw PreconditionError("mask: interval with hi < lo");
    for (int j = 0; j < grid.N; ++j) {
      const double x = grid.node(j);
      if (x >= iv.lo - tol && x <= iv.hi + tol) m.member[j] = 1;
    }
  }
  return m;
}

RegionMask mask_complement(const RegionMask& a) {
  RegionMask m = a;
  for (auto& v : m.member) v = v ? 0 : 1;
  return m;
}

RegionMask mask_union(const RegionMask& a, const RegionMask& b) {
  require_same_grid(a.grid, b.grid, "mask_union");
  RegionMask m = a;
  for (std::size_t j = 0; j < m.member.size(); ++j) m.member[j] = a.member[j] || b.member[j];
  return m;
}

RegionMask mask_intersection(const RegionMask& a, const RegionMask& b) {
  require_same_grid(a.grid, b.grid, "mask_intersection");
  RegionMask m = a;
  for (std::size_t j = 0; j < m.member.size(); ++j) m.member[j] = a.member[j] && b.member[j];
  return m;
}

bool masks_disjoint(const RegionMask& a, const RegionMask& b) {
  require_same_grid(a.grid, b.grid, "masks_disjoint");
  for (std::size_t j = 0; j < a.member.size(); ++j)
    if (a.member[j] && b.member[j]) return false;
  return true;
}

std::vector<Interval> mask_to_intervals(const RegionMask& a) {
  std::vector<Interval> out;
  const int N = a.grid.N;
  int j = 0;
  while (j < N) {
    if (!a.member[j]) {
      ++j;
      continue;
    }
    int start = j;
    while (j < N && a.member[j]) ++j;
    out.push_back(Interval{a.grid.node(start), a.grid.node(j - 1)});
  }
  return out;
}

double torus_distance(const GridSpec& grid, double a, double b) {
  double d = std::abs(a - b);
  return std::min(d, 2.0 * grid.L - d);
}

double flat_distance_to(const RegionMask& A, double x) {
  double best = std::numeric_limits<double>::infinity();
  for (int j = 0; j < A.grid.N; ++j)
    if (A.member[j]) best = std::min(best, std::abs(x - A.grid.node(j)));
  return best;
}

double torus_distance_to(const RegionMask& A, double x) {
  double best = std::numeric_limits<double>::infinity();
  for (int j = 0; j < A.grid.N; ++j)
    if (A.member[j]) best = std::min(best, torus_distance(A.grid, x, A.grid.node(j)));
  return best;
}

RegionMask neighborhood(const RegionMask& A, double r) {
  if (A.empty()) throw PreconditionError("neighborhood: empty mask");
  if (r < 0.0) throw PreconditionError("neighborhood: radius must be >= 0");
  RegionMask out = make_mask(A.grid);
  const double tol = 1e-12 * A.grid.L;
  for (int j = 0; j < A.grid.N; ++j)
    out.member[j] = (torus_distance_to(A, A.grid.node(j)) <= r + tol) ? 1 : 0;
  return out;
}

GeometryVerdict measurement_geometry_ok(const RegionMask& omega, const RegionMask& w1,
                                        const RegionMask& w2) {
  require_same_grid(omega.grid, w1.grid, "measurement_geometry_ok");
  require_same_grid(omega.grid, w2.grid, "measurement_geometry_ok");
  if (omega.empty() || w1.empty() || w2.empty())
    throw PreconditionError("measurement_geometry_ok: empty mask");
  if (!masks_disjoint(w1, w2) || !masks_disjoint(omega, w1) || !masks_disjoint(omega, w2))
    throw PreconditionError("measurement_geometry_ok: masks must be pairwise disjoint");

  const auto i1 = w1.indices();
  const auto i2 = w2.indices();

  // distance of every window node to Omega, flat metric
  std::vector<double> d1(i1.size()), d2(i2.size());
  for (std::size_t a = 0; a < i1.size(); ++a) d1[a] = flat_distance_to(omega, w1.grid.node(i1[a]));
  for (std::size_t b = 0; b < i2.size(); ++b) d2[b] = flat_distance_to(omega, w2.grid.node(i2[b]));

  GeometryVerdict v;
  v.min_gap = std::numeric_limits<double>::infinity();
  for (std::size_t a = 0; a < i1.size(); ++a) {
    const double x1 = w1.grid.node(i1[a]);
    for (std::size_t b = 0; b < i2.size(); ++b) {
      const double x2 = w2.grid.node(i2[b]);
      const double gap = std::abs(x1 - x2) - std::max(d1[a], d2[b]);
      v.min_gap = std::min(v.min_gap, gap);
    }
  }
  v.separation_ok = v.min_gap >= -1e-12 * omega.grid.L;

  // 1-D polar cone: both windows on opposite sides of the Omega centroid
  double centroid = 0.0;
  int n = 0;
  for (int j = 0; j < omega.grid.N; ++j)
    if (omega.member[j]) {
      centroid += omega.grid.node(j);
      ++n;
    }
  centroid /= n;
  double lo1 = std::numeric_limits<double>::infinity(), hi1 = -lo1;
  double lo2 = lo1, hi2 = -lo1;
  for (int j : i1) {
    const double t = w1.grid.node(j) - centroid;
    lo1 = std::min(lo1, t);
    hi1 = std::max(hi1, t);
  }
  for (int j : i2) {
    const double t = w2.grid.node(j) - centroid;
    lo2 = std::min(lo2, t);
    hi2 = std::max(hi2, t);
  }
  v.polar_cone_ok = (hi1 <= 0.0 && lo2 >= 0.0) || (hi2 <= 0.0 && lo1 >= 0.0);
  return v;
}

ChainReport chain_counts(double r_w, double x_w, double r_omega, double x_omega, double h_param,
                         double c_multiplier) {
  if (!(r_w > 0.0) || r_w > 2.0)
    throw PreconditionError("chain_counts: require 0 < r_w <= 2 (got " + std::to_string(r_w) + ")");
  if (!(r_omega > 0.0)) throw PreconditionError("chain_counts: r_omega must be positive");
  if (!(h_param > 0.0 && h_param < 1.0))
    throw PreconditionError("chain_counts: h must lie in (0,1)");

  ChainReport rep;
  rep.y1 = (5.0 / 12.0) * r_w;
  rep.n_vert = static_cast<long long>(std::ceil(1.0 + std::log(rep.y1) / std::log(6.0 / 7.0)));
  rep.n1 = static_cast<long long>(std::ceil(5.0 * std::abs(x_w - x_omega)));
  rep.n2 = static_cast<long long>(std::ceil(5.0 * r_omega));
  rep.n3 = static_cast<long long>(std::ceil(std::log(h_param) / std::log(9.0 / 10.0)));
  rep.c_omega_w = c_multiplier * r_omega * std::abs(std::log(r_w)) * std::abs(x_w - x_omega);
  rep.sigma = rep.c_omega_w > 0.0 ? 1.0 / rep.c_omega_w : 0.0;
  return rep;
}

double sigma_constant(const ChainReport& report, double c_ns) {
  if (!(c_ns > 0.0)) throw PreconditionError("sigma_constant: c_ns must be positive");
  if (!(report.c_omega_w > 0.0)) throw PreconditionError("sigma_constant: C = 0");
  return c_ns / report.c_omega_w;
}

}  // namespace fraccal
