// dn_map.hpp — discrete Dirichlet-to-Neumann pairings
// <Lambda_Psi[f],[g]> = B_Psi(P_Psi f, g) over finite exterior bases,
// the adjoint relation (Lambda_Psi)* = Lambda_{Psi*}, and the Alessandrini
// identity relating DN differences to interior kernel pairings.

#pragma once

#include <Eigen/Dense>

#include <vector>

#include "fraccal/solver.hpp"

namespace fraccal {

struct ExteriorBasis {
  RegionMask window;
  std::vector<Field> functions;  // each exactly zero outside window
};

// Raised-cosine bumps centered on a uniform sub-grid of the window nodes;
// half-width = width_factor * center spacing (min 2h).  Verifies exact
// support and linear independence (relative Gram eigenvalue > 1e-12).
ExteriorBasis make_bump_basis(const RegionMask& window, int count, double width_factor = 1.0);

struct DNMatrix {
  Eigen::MatrixXd entries;  // entries(a,b) = B_Psi(P_Psi f_a, g_b)
};

DNMatrix assemble_dn(const DirichletSolver& solver, const ExteriorBasis& basis_in,
                     const ExteriorBasis& basis_out);

struct AdjointGapResult {
  double gap = 0.0;    // max_ab |B_Psi(P_Psi f_a, g_b) - B_{Psi*}(P_{Psi*} g_b, f_a)|
  double scale = 0.0;  // max(1, largest entry magnitude of either matrix)
};

AdjointGapResult adjoint_gap(const DirichletProblem& p, const ExteriorBasis& basis_in,
                             const ExteriorBasis& basis_out);

struct AlessandriniResult {
  double lhs = 0.0;  // <(Lambda_1 - Lambda_2)[f], [g]>
  double rhs = 0.0;  // <(Psi_1 - Psi_2) P_1 f, P_{2*} g>_{L2}
  double gap = 0.0;
};

// Both sides evaluated through independent solves.
AlessandriniResult alessandrini_gap(const DirichletSolver& s1, const DirichletSolver& s2,
                                    const DirichletSolver& s2_adj, const Field& f, const Field& g);
AlessandriniResult alessandrini_gap(const DirichletProblem& p1, const DirichletProblem& p2,
                                    const Field& f, const Field& g);

}  // namespace fraccal
