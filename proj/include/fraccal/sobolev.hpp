// sobolev.hpp — dense H^r Gram matrices of the nodal characteristic basis
// and localized dual (negative-order) norms computed against them.
//
// The nodal H^r Gram is circulant: S_ij = c_{(i-j) mod N} with
// c_m = (h/N) sum_k <xi_k>^{2r} e^{-2 pi i km/N}, so any sub-Gram is a
// slice of one DFT of the symbol.

#pragma once

#include <Eigen/Dense>

#include "fraccal/geometry.hpp"
#include "fraccal/grid.hpp"

namespace fraccal {

// Circulant generator column of the H^r nodal Gram.
Eigen::VectorXd hs_gram_circulant(const GridSpec& grid, double r);

// Dense Gram S_{ab} = sobolev_inner(e_{nodes[a]}, e_{nodes[b]}, r).
Eigen::MatrixXd hs_gram(const GridSpec& grid, const std::vector<int>& nodes, double r);

// sup { h sum_{j in U} g_j v_j : spt v in U, ||v||_{H^s} = 1 }
//   = sqrt(h^2 g_U^T S^{-1} g_U),  S the H^s Gram on U.
// Throws PreconditionError on empty U, NumericalError if S is not SPD.
double dual_norm_on(const Field& g, const RegionMask& U, double s);

}  // namespace fraccal
