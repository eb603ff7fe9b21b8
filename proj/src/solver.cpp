#include "fraccal/solver.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

#include <cmath>

#include "fraccal/sobolev.hpp"

namespace fraccal {

namespace {

// circulant column of (-Delta)^s: c_m = (1/N) sum_k |xi_k|^{2s} e^{2 pi i km/N}
Eigen::VectorXd frac_circulant_column(const GridSpec& g, double s) {
  const Multiplier m = fractional_symbol(g, s);
  // inverse DFT of the symbol; real and even
  Eigen::VectorXcd y(g.N);
  for (int k = 0; k < g.N; ++k) y[k] = m.symbol[k];
  return dft_inverse_real(g, y);
}

}  // namespace

DirichletProblem make_problem(const GridSpec& grid, double s, RegionMask omega, Kernel kernel) {
  if (!(s > 0.0 && s < 1.0)) throw PreconditionError("problem: s must lie in (0,1)");
  require_same_grid(grid, omega.grid, "problem");
  require_same_grid(grid, kernel.grid, "problem");
  if (omega.empty()) throw PreconditionError("problem: omega is empty");
  if (omega.count() == grid.N) throw PreconditionError("problem: omega must be a proper subset");
  return DirichletProblem{grid, s, std::move(omega), std::move(kernel)};
}

DirichletSolver::DirichletSolver(DirichletProblem problem)
    : problem_(std::move(problem)),
      frac_symbol_(fractional_symbol(problem_.grid, problem_.s)),
      omega_idx_(problem_.omega.indices()) {
  const GridSpec& g = problem_.grid;
  const double h = g.h();
  const Eigen::VectorXd c = frac_circulant_column(g, problem_.s);

  const int n = static_cast<int>(omega_idx_.size());
  block_.resize(n, n);
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b) {
      int d = (omega_idx_[a] - omega_idx_[b]) % g.N;
      if (d < 0) d += g.N;
      block_(a, b) = c[d] + h * problem_.kernel.K(omega_idx_[a], omega_idx_[b]);
    }

  Eigen::BDCSVD<Eigen::MatrixXd> svd(block_);
  wp_.block_norm = svd.singularValues()(0);
  wp_.min_singular_value = svd.singularValues()(svd.singularValues().size() - 1);
  wp_.ok = wp_.min_singular_value > 1e-10 * wp_.block_norm;

  lu_.compute(block_);
}

Field DirichletSolver::strong_form(const Field& u) const {
  Field out = multiplier_apply(u, frac_symbol_);
  out.values += kernel_apply(problem_.kernel, u).values;
  return out;
}

SolveReport DirichletSolver::solve(const Field& f_ext, const Field& F_src) const {
  require_same_grid(problem_.grid, f_ext.grid, "solve");
  require_same_grid(problem_.grid, F_src.grid, "solve");
  if (!wp_.ok)
    throw NumericalError(
        "solve: interior block numerically singular; see wellposedness_check (min_sv = " +
        std::to_string(wp_.min_singular_value) + ")");

  // splice exterior data, zero the interior, evaluate the coupling once
  Field u{problem_.grid, f_ext.values};
  for (int j : omega_idx_) u.values[j] = 0.0;
  const Field coupled = strong_form(u);

  const int n = static_cast<int>(omega_idx_.size());
  Eigen::VectorXd rhs(n);
  for (int a = 0; a < n; ++a) rhs[a] = F_src.values[omega_idx_[a]] - coupled.values[omega_idx_[a]];
  const Eigen::VectorXd interior = lu_.solve(rhs);
  for (int a = 0; a < n; ++a) u.values[omega_idx_[a]] = interior[a];

  SolveReport rep{u, 0.0, 0.0, wp_.block_norm / wp_.min_singular_value};
  const Field resid = strong_form(u);
  for (int a = 0; a < n; ++a)
    rep.interior_residual =
        std::max(rep.interior_residual, std::abs(resid.values[omega_idx_[a]] - F_src.values[omega_idx_[a]]));
  return rep;  // exterior_mismatch stays 0: exterior values are imposed
}

Field DirichletSolver::poisson(const Field& f_ext) const {
  return solve(f_ext, make_field(problem_.grid)).u;
}

double bilinear_form(const DirichletProblem& p, const Field& u, const Field& v) {
  require_same_grid(p.grid, u.grid, "bilinear_form");
  require_same_grid(p.grid, v.grid, "bilinear_form");
  const double frac = spectral_pair(u, v, fractional_symbol(p.grid, p.s));
  return frac + l2_inner(kernel_apply(p.kernel, u), v);
}

WellposednessReport wellposedness_check(const DirichletProblem& p) {
  return DirichletSolver(p).wellposedness();
}

CoercivityReport coercivity_audit(const DirichletProblem& p) {
  CoercivityReport rep;
  rep.c1_used = l2_operator_norm(p.kernel);

  const std::vector<int> idx = p.omega.indices();
  const int n = static_cast<int>(idx.size());
  const double h = p.grid.h();
  const Eigen::VectorXd c = frac_circulant_column(p.grid, p.s);

  // symmetrized quadratic form of B_Psi on Omega-supported nodal vectors:
  // Q = h*C + h^2*(K + K^T)/2 restricted to Omega
  Eigen::MatrixXd Q(n, n);
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b) {
      int d = (idx[a] - idx[b]) % p.grid.N;
      if (d < 0) d += p.grid.N;
      Q(a, b) = h * c[d] +
                0.5 * h * h * (p.kernel.K(idx[a], idx[b]) + p.kernel.K(idx[b], idx[a]));
    }
  const Eigen::MatrixXd M = h * Eigen::MatrixXd::Identity(n, n);
  const Eigen::MatrixXd S = hs_gram(p.grid, idx, p.s);

  Eigen::GeneralizedSelfAdjointEigenSolver<Eigen::MatrixXd> ges(Q + rep.c1_used * M, S);
  if (ges.info() != Eigen::Success)
    throw NumericalError("coercivity_audit: generalized eigensolve failed");
  rep.c0_hat = ges.eigenvalues()(0);
  return rep;
}

SolveReport solve_dirichlet(const DirichletProblem& p, const Field& f_ext, const Field& F_src) {
  return DirichletSolver(p).solve(f_ext, F_src);
}

Field poisson(const DirichletProblem& p, const Field& f_ext) {
  return DirichletSolver(p).poisson(f_ext);
}

}  // namespace fraccal
