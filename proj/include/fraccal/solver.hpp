// solver.hpp — the direct problem (-Delta)^s u + Psi u = F in Omega,
// u = f in Omega_e, by strong-form collocation on the Omega nodes.
//
// With C the circulant of |xi|^{2s} and K the kernel matrix, the strong
// form row at an Omega node i reads  (C u)_i + h (K u)_i = F_i.  Exterior
// values are imposed, interior values come from one dense factorization
// of the Omega block.  The associated bilinear form is
//   B_Psi(u,v) = <(-Delta)^{s/2}u, (-Delta)^{s/2}v>_{L2} + <Psi u, v>_{L2}
// and satisfies B_Psi(u, e_j) = h * (strong form)_j exactly.

#pragma once

#include <Eigen/Dense>
#include <Eigen/LU>

#include <memory>

#include "fraccal/geometry.hpp"
#include "fraccal/grid.hpp"
#include "fraccal/kernel.hpp"

namespace fraccal {

struct DirichletProblem {
  GridSpec grid;
  double s = 0.5;
  RegionMask omega;
  Kernel kernel;
};

// Validates: s in (0,1), omega non-empty proper subset, shared grids.
DirichletProblem make_problem(const GridSpec& grid, double s, RegionMask omega, Kernel kernel);

struct SolveReport {
  Field u;
  double interior_residual = 0.0;   // max over Omega of |strong form - F|
  double exterior_mismatch = 0.0;   // max over Omega_e of |u - f|; 0 by construction
  double condition_estimate = 0.0;  // sigma_max / sigma_min of the Omega block
};

struct WellposednessReport {
  double min_singular_value = 0.0;
  double block_norm = 0.0;  // largest singular value of the Omega block
  bool ok = false;          // min_sv > 1e-10 * block_norm
};

struct CoercivityReport {
  double c0_hat = 0.0;   // smallest generalized eigenvalue of (Q_sym + c1 M, S)
  double c1_used = 0.0;  // L2 operator norm of the kernel
};

// Caches the Omega-block factorization; immutable after construction, safe
// to share between concurrent solves.
class DirichletSolver {
 public:
  explicit DirichletSolver(DirichletProblem problem);

  const DirichletProblem& problem() const { return problem_; }
  const WellposednessReport& wellposedness() const { return wp_; }

  // u = f_ext on Omega_e exactly; interior solves the strong form.
  SolveReport solve(const Field& f_ext, const Field& F_src) const;
  Field poisson(const Field& f_ext) const;  // F = 0

  // strong form C u + h K u at every node
  Field strong_form(const Field& u) const;

 private:
  DirichletProblem problem_;
  Multiplier frac_symbol_;
  std::vector<int> omega_idx_;
  Eigen::MatrixXd block_;  // A_{Omega,Omega}
  Eigen::PartialPivLU<Eigen::MatrixXd> lu_;
  WellposednessReport wp_;
};

double bilinear_form(const DirichletProblem& p, const Field& u, const Field& v);
WellposednessReport wellposedness_check(const DirichletProblem& p);
CoercivityReport coercivity_audit(const DirichletProblem& p);
SolveReport solve_dirichlet(const DirichletProblem& p, const Field& f_ext, const Field& F_src);
Field poisson(const DirichletProblem& p, const Field& f_ext);

}  // namespace fraccal
