// geometry.hpp — node-set geometry: region masks, metric neighborhoods,
// the two-window measurement predicates, and the ball-chain step counts
// with the stability exponent sigma.

#pragma once

#include <cstdint>
#include <vector>

#include "fraccal/grid.hpp"

namespace fraccal {

struct Interval {
  double lo = 0.0;
  double hi = 0.0;
};

struct RegionMask {
  GridSpec grid;
  std::vector<std::uint8_t> member;  // length N

  bool empty() const;
  int count() const;
  bool contains(int j) const { return member[static_cast<std::size_t>(j)] != 0; }
  std::vector<int> indices() const;
};

RegionMask make_mask(const GridSpec& grid);
// Nodes x_j with lo <= x_j <= hi for any of the intervals (closed, with a
// metric tolerance of 1e-12*L so interval ends falling on nodes are stable).
RegionMask mask_from_intervals(const GridSpec& grid, const std::vector<Interval>& intervals);
RegionMask mask_complement(const RegionMask& a);
RegionMask mask_union(const RegionMask& a, const RegionMask& b);
RegionMask mask_intersection(const RegionMask& a, const RegionMask& b);
bool masks_disjoint(const RegionMask& a, const RegionMask& b);
// Recovers a minimal closed-interval representation (for serialization).
std::vector<Interval> mask_to_intervals(const RegionMask& a);

// min(|a-b|, 2L-|a-b|)
double torus_distance(const GridSpec& grid, double a, double b);

// Flat (non-torus) distance from point x to the node set A on the
// fundamental interval; used by the measurement predicates.
double flat_distance_to(const RegionMask& A, double x);
// Torus distance from x to the node set A; used by neighborhoods and
// propagation checks, which live on the computational torus.
double torus_distance_to(const RegionMask& A, double x);

// N(A,r): nodes whose torus distance to A is <= r.
RegionMask neighborhood(const RegionMask& A, double r);

struct GeometryVerdict {
  bool separation_ok = false;
  bool polar_cone_ok = false;
  double min_gap = 0.0;  // min over node pairs of |x1-x2| - max_j dist(x_j, Omega)
};

// Exhaustive check of |x1-x2| >= max_j dist(x_j, Omega) over all node pairs
// (x1,x2) in W1 x W2, plus the 1-D polar-cone test (opposite sides of the
// Omega centroid).  Distances are flat, on the fundamental interval.
GeometryVerdict measurement_geometry_ok(const RegionMask& omega, const RegionMask& w1,
                                        const RegionMask& w2);

struct ChainReport {
  double y1 = 0.0;         // first chain height, (5/12) r_W
  long long n_vert = 0;    // vertical chain steps
  long long n1 = 0;        // horizontal steps
  long long n2 = 0;        // covering steps
  long long n3 = 0;        // downward steps
  double c_omega_w = 0.0;  // geometry constant C_{Omega,W}
  double sigma = 0.0;      // stability exponent with c_{n,s} = 1
};

// Step counts of the half-ball chain running from the measurement window
// (radius r_w, center x_w) to the domain ball (radius r_omega, center
// x_omega), stopped at height h_param.  Counts are ceiled to integers;
// c_multiplier scales the implicit constant in C_{Omega,W}.
ChainReport chain_counts(double r_w, double x_w, double r_omega, double x_omega, double h_param,
                         double c_multiplier = 1.0);

// sigma = c_ns / C_{Omega,W}
double sigma_constant(const ChainReport& report, double c_ns);

}  // namespace fraccal
