// runge.hpp — quantitative Runge approximation.  Assembles the operator
// A = restrict_Omega ∘ Poisson over a window basis, diagonalizes A*A in the
// H^s geometry of the basis, and produces truncated exterior data with
// certified norm identities.
//
// The generalized eigensystem A^T M A phi = lambda S phi (M = h*I the
// L2(Omega) Gram, S the H^s Gram of the basis) is computed through the
// SVD of G = sqrt(h) * A * L^{-T} with S = L L^T:
//   lambda_j = sigma_j^2,  phi_j = L^{-T} v_j,  w_j = u_j / sqrt(h).
// The singular vectors keep {w_j} L2(Omega)-orthonormal and {phi_j}
// S-orthonormal at machine precision even for eigenvalues near the rank
// floor, which a normal-equations eigensolve does not.

#pragma once

#include <Eigen/Dense>

#include "fraccal/dn_map.hpp"
#include "fraccal/solver.hpp"

namespace fraccal {

// modes with lambda <= RUNGE_EIGEN_FLOOR * lambda_1 are treated as null space
inline constexpr double kRungeEigenFloor = 1e-14;

struct RungeSystem {
  ExteriorBasis basis;        // window basis (possibly thinned)
  std::vector<int> omega_idx; // Omega nodes, in grid order
  GridSpec grid;
  double s = 0.5;
  Eigen::MatrixXd A;       // |Omega| x B, columns poisson(f_b)|_Omega
  Eigen::MatrixXd S;       // H^s Gram of the basis
  Eigen::VectorXd lambda;  // descending, >= 0 (all B of them)
  Eigen::MatrixXd phi;     // B x B, S-orthonormal coefficient eigenvectors
  Eigen::MatrixXd w;       // |Omega| x kept, L2(Omega)-orthonormal images
  int kept = 0;            // modes above the eigen floor
  int thinned = 0;         // basis functions dropped to make S factorizable
};

RungeSystem runge_assemble(const DirichletSolver& solver, const RegionMask& window,
                           int basis_size, double width_factor = 1.0);

struct RungeData {
  Field f_eps;             // window-supported exterior datum
  Eigen::VectorXd f_coef;  // its coefficients in the window basis
  Field r_eps;             // Omega-supported residual (mode sum + off-range part)
  double n_eps = 0.0;
  int used_modes = 0;
};

// v must be supported on Omega.  f_eps keeps exactly the modes with
// lambda_j > n_eps^2 (and above the eigen floor).
RungeData runge_truncate(const RungeSystem& sys, const Field& v, double n_eps);

struct RungeCertificate {
  double approx_err = 0.0;     // ||A f_eps - v||_{L2(Omega)} via the operator action
  double residual_norm = 0.0;  // ||r_eps||_{L2(Omega)} via the mode sum
  double f_norm = 0.0;         // ||f_eps||_S
  double f_norm_bound = 0.0;   // N_eps^{-1} ||v||_{L2}
  double astar_r_norm = 0.0;   // ||A* r_eps||_S
  double astar_bound = 0.0;    // N_eps ||r_eps||_{L2}
  double dual_lhs = 0.0;       // ||A f_eps - v||^2
  double dual_rhs = 0.0;       // ||v||_{H^s} * dual_norm_on(r_eps, Omega, s)
  bool dual_bound_ok = false;
  bool ok = false;
  double violated_margin = 0.0;  // worst relative violation across the checks
};

RungeCertificate runge_certify(const RungeSystem& sys, const RungeData& data, const Field& v);

// Step-3 threshold N_eps = mu(R)^{1-delta} read off a decay profile.
double pick_n_eps(const DecayProfile& profile, double R, double delta);

}  // namespace fraccal
