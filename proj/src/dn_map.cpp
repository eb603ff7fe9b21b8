#include "fraccal/dn_map.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>

#include "fraccal/parallel.hpp"

namespace fraccal {

ExteriorBasis make_bump_basis(const RegionMask& window, int count, double width_factor) {
  if (window.empty()) throw PreconditionError("bump basis: empty window");
  if (count < 1) throw PreconditionError("bump basis: count must be >= 1");
  const std::vector<int> idx = window.indices();
  if (count > static_cast<int>(idx.size()))
    throw PreconditionError("bump basis: more bumps than window nodes");
  const GridSpec& g = window.grid;
  const double h = g.h();

  // centers on a uniform sub-grid of the window's node list, de-duplicated
  // so dense bases stay independent
  const int n_nodes = static_cast<int>(idx.size());
  std::vector<double> centers(count);
  int prev = -1;
  for (int b = 0; b < count; ++b) {
    const double t = (b + 1.0) / (count + 1.0);
    int pos = static_cast<int>(std::lround(t * (n_nodes - 1)));
    // strictly increasing, while leaving room for the remaining bumps
    pos = std::max(pos, prev + 1);
    pos = std::min(pos, n_nodes - count + b);
    prev = pos;
    centers[b] = g.node(idx[pos]);
  }
  double spacing = count > 1 ? std::abs(centers[1] - centers[0]) : h * idx.size() / 2.0;
  for (int b = 1; b + 1 < count; ++b)
    spacing = std::min(spacing, std::abs(centers[b + 1] - centers[b]));
  // width floor h: at maximal packing the bumps degenerate to nodal spikes
  const double w = std::max(width_factor * spacing, 1.0000001 * h);

  ExteriorBasis basis{window, {}};
  basis.functions.reserve(count);
  for (int b = 0; b < count; ++b) {
    Field f = make_field(g);
    for (int j : idx) {
      const double z = torus_distance(g, g.node(j), centers[b]);
      if (z < w) f.values[j] = 0.5 * (1.0 + std::cos(M_PI * z / w));
    }
    basis.functions.push_back(std::move(f));
  }

  // linear independence via the L2 Gram
  Eigen::MatrixXd gram(count, count);
  for (int a = 0; a < count; ++a)
    for (int b = 0; b <= a; ++b)
      gram(a, b) = gram(b, a) = l2_inner(basis.functions[a], basis.functions[b]);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(gram);
  if (es.eigenvalues()(0) <= 1e-12 * es.eigenvalues()(count - 1))
    throw PreconditionError("bump basis: functions are numerically dependent");
  return basis;
}

DNMatrix assemble_dn(const DirichletSolver& solver, const ExteriorBasis& basis_in,
                     const ExteriorBasis& basis_out) {
  const DirichletProblem& p = solver.problem();
  if (!masks_disjoint(p.omega, basis_in.window) || !masks_disjoint(p.omega, basis_out.window))
    throw PreconditionError("assemble_dn: window overlaps omega");
  const int ni = static_cast<int>(basis_in.functions.size());
  const int no = static_cast<int>(basis_out.functions.size());
  DNMatrix dn;
  dn.entries.resize(ni, no);
  parallel_for(ni, [&](int a) {
    const Field u = solver.poisson(basis_in.functions[a]);
    for (int b = 0; b < no; ++b)
      dn.entries(a, b) = bilinear_form(p, u, basis_out.functions[b]);
  });
  return dn;
}

AdjointGapResult adjoint_gap(const DirichletProblem& p, const ExteriorBasis& basis_in,
                             const ExteriorBasis& basis_out) {
  DirichletProblem adj = p;
  adj.kernel = kernel_transpose(p.kernel);
  const DirichletSolver fwd(p), rev(adj);
  if (!fwd.wellposedness().ok || !rev.wellposedness().ok)
    throw NumericalError("adjoint_gap: well-posedness fails for Psi or Psi*");

  const DNMatrix lhs = assemble_dn(fwd, basis_in, basis_out);
  const DNMatrix rhs = assemble_dn(rev, basis_out, basis_in);  // Lambda_{Psi*} g_b against f_a

  AdjointGapResult res;
  res.scale = 1.0;
  for (int a = 0; a < lhs.entries.rows(); ++a)
    for (int b = 0; b < lhs.entries.cols(); ++b) {
      res.gap = std::max(res.gap, std::abs(lhs.entries(a, b) - rhs.entries(b, a)));
      res.scale = std::max({res.scale, std::abs(lhs.entries(a, b)), std::abs(rhs.entries(b, a))});
    }
  return res;
}

AlessandriniResult alessandrini_gap(const DirichletSolver& s1, const DirichletSolver& s2,
                                    const DirichletSolver& s2_adj, const Field& f, const Field& g) {
  const DirichletProblem& p1 = s1.problem();
  const DirichletProblem& p2 = s2.problem();

  const Field u1 = s1.poisson(f);
  const Field u2 = s2.poisson(f);
  AlessandriniResult res;
  res.lhs = bilinear_form(p1, u1, g) - bilinear_form(p2, u2, g);

  const Field v2 = s2_adj.poisson(g);  // P_{Psi_2^*} g
  Field diff = kernel_apply(p1.kernel, u1);
  diff.values -= kernel_apply(p2.kernel, u1).values;
  res.rhs = l2_inner(diff, v2);
  res.gap = std::abs(res.lhs - res.rhs);
  return res;
}

AlessandriniResult alessandrini_gap(const DirichletProblem& p1, const DirichletProblem& p2,
                                    const Field& f, const Field& g) {
  DirichletProblem p2a = p2;
  p2a.kernel = kernel_transpose(p2.kernel);
  return alessandrini_gap(DirichletSolver(p1), DirichletSolver(p2), DirichletSolver(p2a), f, g);
}

}  // namespace fraccal
