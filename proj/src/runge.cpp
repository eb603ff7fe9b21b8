#include "fraccal/runge.hpp"

#include <Eigen/Cholesky>
#include <Eigen/SVD>

#include <cmath>
#include <limits>

#include "fraccal/parallel.hpp"
#include "fraccal/sobolev.hpp"

namespace fraccal {

namespace {

Eigen::MatrixXd basis_hs_gram(const std::vector<Field>& fs, double s) {
  const int n = static_cast<int>(fs.size());
  Eigen::MatrixXd S(n, n);
  for (int a = 0; a < n; ++a)
    for (int b = 0; b <= a; ++b) S(a, b) = S(b, a) = sobolev_inner(fs[a], fs[b], s);
  return S;
}

}  // namespace

RungeSystem runge_assemble(const DirichletSolver& solver, const RegionMask& window,
                           int basis_size, double width_factor) {
  const DirichletProblem& p = solver.problem();
  if (!masks_disjoint(p.omega, window))
    throw PreconditionError("runge_assemble: window overlaps omega");

  RungeSystem sys;
  sys.grid = p.grid;
  sys.s = p.s;
  sys.omega_idx = p.omega.indices();

  ExteriorBasis basis = make_bump_basis(window, basis_size, width_factor);

  // S must be positive definite to factor; drop every other bump if not
  Eigen::LLT<Eigen::MatrixXd> llt;
  for (;;) {
    sys.S = basis_hs_gram(basis.functions, p.s);
    llt.compute(sys.S);
    if (llt.info() == Eigen::Success) break;
    if (basis.functions.size() <= 2)
      throw NumericalError("runge_assemble: H^s Gram cannot be factorized");
    ExteriorBasis thinner{basis.window, {}};
    for (std::size_t b = 0; b < basis.functions.size(); b += 2)
      thinner.functions.push_back(basis.functions[b]);
    sys.thinned += static_cast<int>(basis.functions.size() - thinner.functions.size());
    basis = std::move(thinner);
  }

  const int B = static_cast<int>(basis.functions.size());
  const int n_om = static_cast<int>(sys.omega_idx.size());
  const double h = p.grid.h();

  sys.A.resize(n_om, B);
  parallel_for(B, [&](int b) {
    const Field u = solver.poisson(basis.functions[b]);
    for (int a = 0; a < n_om; ++a) sys.A(a, b) = u.values[sys.omega_idx[a]];
  });
  sys.basis = std::move(basis);

  // G = sqrt(h) A L^{-T}; SVD gives the generalized eigensystem of (A^T M A, S)
  const Eigen::MatrixXd L = llt.matrixL();
  Eigen::MatrixXd G = std::sqrt(h) * sys.A;
  // right-solve G <- G L^{-T}
  L.transpose().triangularView<Eigen::Upper>().solveInPlace<Eigen::OnTheRight>(G);

  Eigen::BDCSVD<Eigen::MatrixXd> svd(G, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const int nsv = static_cast<int>(svd.singularValues().size());

  sys.lambda = Eigen::VectorXd::Zero(B);
  for (int j = 0; j < nsv; ++j) sys.lambda[j] = svd.singularValues()(j) * svd.singularValues()(j);

  // phi_j = L^{-T} v_j (S-orthonormal); fill the tail beyond nsv with zeros
  sys.phi = Eigen::MatrixXd::Zero(B, B);
  Eigen::MatrixXd V = svd.matrixV();
  L.transpose().triangularView<Eigen::Upper>().solveInPlace(V);
  sys.phi.leftCols(nsv) = V;

  const double lam1 = sys.lambda.size() > 0 ? sys.lambda[0] : 0.0;
  sys.kept = 0;
  for (int j = 0; j < nsv; ++j)
    if (sys.lambda[j] > kRungeEigenFloor * lam1 && sys.lambda[j] > 0.0) ++sys.kept;
  sys.w = svd.matrixU().leftCols(sys.kept) / std::sqrt(h);
  return sys;
}

RungeData runge_truncate(const RungeSystem& sys, const Field& v, double n_eps) {
  require_same_grid(sys.grid, v.grid, "runge_truncate");
  if (n_eps < 0.0) throw PreconditionError("runge_truncate: n_eps must be >= 0");
  const double h = sys.grid.h();
  const int n_om = static_cast<int>(sys.omega_idx.size());

  Eigen::VectorXd v_om(n_om);
  for (int a = 0; a < n_om; ++a) v_om[a] = v.values[sys.omega_idx[a]];

  // <v, w_j>_{L2(Omega)}
  const Eigen::VectorXd coef = h * (sys.w.transpose() * v_om);

  const int B = static_cast<int>(sys.basis.functions.size());
  RungeData data;
  data.n_eps = n_eps;
  data.f_coef = Eigen::VectorXd::Zero(B);
  Eigen::VectorXd af = Eigen::VectorXd::Zero(n_om);  // retained-mode image
  for (int j = 0; j < sys.kept; ++j) {
    if (sys.lambda[j] > n_eps * n_eps) {
      const double sigma = std::sqrt(sys.lambda[j]);
      data.f_coef += (coef[j] / sigma) * sys.phi.col(j);
      af += coef[j] * sys.w.col(j);
      ++data.used_modes;
    }
  }

  data.f_eps = make_field(sys.grid);
  for (int b = 0; b < B; ++b) data.f_eps.values += data.f_coef[b] * sys.basis.functions[b].values;

  // r_eps = v - sum_{retained} <v,w_j> w_j : the dropped-mode sum plus the
  // component of v outside the resolved range
  data.r_eps = make_field(sys.grid);
  for (int a = 0; a < n_om; ++a) data.r_eps.values[sys.omega_idx[a]] = v_om[a] - af[a];
  return data;
}

RungeCertificate runge_certify(const RungeSystem& sys, const RungeData& data, const Field& v) {
  const double h = sys.grid.h();
  const int n_om = static_cast<int>(sys.omega_idx.size());

  Eigen::VectorXd v_om(n_om), r_om(n_om);
  for (int a = 0; a < n_om; ++a) {
    v_om[a] = v.values[sys.omega_idx[a]];
    r_om[a] = data.r_eps.values[sys.omega_idx[a]];
  }

  RungeCertificate cert;
  const Eigen::VectorXd af = sys.A * data.f_coef;  // operator action, not the mode sum
  cert.approx_err = std::sqrt(h) * (af - v_om).norm();
  cert.residual_norm = std::sqrt(h) * r_om.norm();

  cert.f_norm = std::sqrt(std::max(0.0, data.f_coef.dot(sys.S * data.f_coef)));
  const double v_l2 = std::sqrt(h) * v_om.norm();
  cert.f_norm_bound = data.n_eps > 0.0 ? v_l2 / data.n_eps
                                       : std::numeric_limits<double>::infinity();

  // A* r = S^{-1} A^T M r ;  ||A* r||_S = sqrt(t^T S^{-1} t) with t = h A^T r
  const Eigen::VectorXd t = h * (sys.A.transpose() * r_om);
  Eigen::LLT<Eigen::MatrixXd> llt(sys.S);
  if (llt.info() != Eigen::Success) throw NumericalError("runge_certify: Gram factorization failed");
  cert.astar_r_norm = std::sqrt(std::max(0.0, t.dot(llt.solve(t))));
  cert.astar_bound = data.n_eps * cert.residual_norm;

  cert.dual_lhs = cert.approx_err * cert.approx_err;
  cert.dual_rhs = sobolev_norm(v, sys.s) * [&] {
    RegionMask omega = make_mask(sys.grid);
    for (int j : sys.omega_idx) omega.member[j] = 1;
    return dual_norm_on(data.r_eps, omega, sys.s);
  }();
  cert.dual_bound_ok = cert.dual_lhs <= cert.dual_rhs * (1.0 + 1e-9) + 1e-300;

  const double slack = 1e-9;
  double worst = 0.0;
  auto check = [&](double lhs, double rhs) {
    const double denom = std::max({std::abs(rhs), 1e-300});
    worst = std::max(worst, (lhs - rhs) / denom);
  };
  check(cert.astar_r_norm, cert.astar_bound);
  if (std::isfinite(cert.f_norm_bound)) check(cert.f_norm, cert.f_norm_bound);
  check(cert.dual_lhs, cert.dual_rhs);
  cert.violated_margin = worst;
  cert.ok = worst <= slack;
  return cert;
}

double pick_n_eps(const DecayProfile& profile, double R, double delta) {
  if (!(delta > 0.0 && delta < 1.0)) throw PreconditionError("pick_n_eps: delta must lie in (0,1)");
  const double mu = profile.at(R);
  if (!(mu > 0.0)) return 0.0;  // finite propagation beyond R: no truncation needed
  return std::pow(mu, 1.0 - delta);
}

}  // namespace fraccal
