// kernel.hpp — dense Hilbert-Schmidt kernel perturbations Psi u(x) =
// int psi(x,y) u(y) dy realized by nodal quadrature, the example kernel
// builders (finite propagation band, prescribed decay, admissible family,
// separable Schwartz), and empirical decay / propagation estimators.

#pragma once

#include <Eigen/Dense>

#include <functional>
#include <optional>
#include <vector>

#include "fraccal/geometry.hpp"
#include "fraccal/grid.hpp"

namespace fraccal {

struct Kernel {
  GridSpec grid;
  Eigen::MatrixXd K;  // K(i,j) = psi(x_i, x_j), all finite

  // Hilbert-Schmidt norm h * ||K||_F (the discrete L2(R x R) norm of psi).
  double hs_norm() const { return grid.h() * K.norm(); }
};

struct DecayProfile {
  enum class Kind { prescribed, hs_bound, operator_norm };
  std::vector<double> radii;  // strictly increasing
  std::vector<double> mu;     // >= 0, same length
  Kind kind = Kind::prescribed;

  // piecewise-linear evaluation, clamped at the ends
  double at(double r) const;
};

Kernel make_kernel(const GridSpec& grid, Eigen::MatrixXd K);
Kernel kernel_transpose(const Kernel& k);

// (Psi u)_i = h sum_j K(i,j) u_j ; the adjoint uses K^T.
Field kernel_apply(const Kernel& k, const Field& u);
Field kernel_apply_adjoint(const Kernel& k, const Field& u);

// Example 1: band kernel, K(i,j) = profile(d) for torus-dist <= R, else 0.
// Default profile is the constant 1.  Requires R < L/2 so the band does
// not wrap into itself.
Kernel build_finite_propagation(const GridSpec& grid, double R,
                                const std::function<double(double)>& amplitude_profile = {});

// A decay target mu~ with its derivative; must be positive, strictly
// decreasing and differentiable on [0, 2L].
struct DecayFunction {
  std::function<double(double)> value;
  std::function<double(double)> derivative;
};

// Example 2 radial factor psi~_2(rho) = (-(mu~^2)'(rho) / (c_n rho^{n-1}))^{1/2}
// evaluated with n = 1, c_1 = 2 (the measure of S^0).
double example2_radial_factor(const DecayFunction& mu_tilde, double rho);

// Example 2 builder: K(i,j) = psi_1(x_i) * rho2(d_ij) with psi_1 a unit-L2
// Gaussian and rho2 the cell-averaged radial factor
//   rho2(d)^2 = (mu~^2(d) - mu~^2(d+h)) / (2h),
// which makes the discrete Hilbert-Schmidt tail telescope to exactly
// mu~^2(r) - mu~^2(L+h), so the estimated decay profile is bounded by mu~.
Kernel build_prescribed_decay(const GridSpec& grid, const DecayFunction& mu_tilde);

struct AdmissibleResult {
  DecayProfile mu;      // mu(r) = exp(-(c(r) f(r))^{1/sigma(r)}) on the sampled radii
  Kernel kernel;        // built from a strictly decreasing minorant of mu
  bool warning_not_decaying = false;
};

// Example 3 builder.
AdmissibleResult build_admissible(const GridSpec& grid, const std::function<double(double)>& c_fun,
                                  const std::function<double(double)>& sigma_fun,
                                  const std::function<double(double)>& f_growth,
                                  const std::vector<double>& radii);

// Example 4 builder: K(i,j) = k1(x_i) * k2(x_i - x_j) with the difference
// taken on the torus; k2 is sampled on the grid as a function of the
// (wrapped) difference.
Kernel build_separable_schwartz(const Field& k1_samples, const Field& k2_samples);

struct DecayEstimate {
  DecayProfile hs_bound;       // h * Frobenius norm of the far sub-block
  DecayProfile operator_norm;  // largest singular value of the far->base sub-block, x h
  bool truncated = false;      // some requested radii exceeded the torus headroom
};

// Empirical decay profiles of a kernel over the given radii; base is the
// support set used for the operator-norm surrogate (inputs on base,
// outputs on N(base,r)_e).
DecayEstimate estimate_decay(const Kernel& k, const RegionMask& base,
                             const std::vector<double>& radii);

// Smallest R such that every entry with torus-dist(x_i,x_j) > R has
// magnitude <= tol.  Returns 0 if no entry exceeds tol.
double estimate_propagation(const Kernel& k, double tol);

// Largest singular value of h*K by power iteration (1e-8 relative).
double l2_operator_norm(const Kernel& k);

}  // namespace fraccal
