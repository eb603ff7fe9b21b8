#include "fraccal/sobolev.hpp"

#include <Eigen/Cholesky>

#include <cmath>

namespace fraccal {

Eigen::VectorXd hs_gram_circulant(const GridSpec& grid, double r) {
  const Multiplier m = bessel_symbol(grid, 2.0 * r);
  const Eigen::VectorXcd y = dft_forward(grid, m.symbol);
  return (grid.h() / grid.N) * y.real();
}

Eigen::MatrixXd hs_gram(const GridSpec& grid, const std::vector<int>& nodes, double r) {
  const Eigen::VectorXd c = hs_gram_circulant(grid, r);
  const int n = static_cast<int>(nodes.size());
  Eigen::MatrixXd S(n, n);
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b) {
      int d = (nodes[a] - nodes[b]) % grid.N;
      if (d < 0) d += grid.N;
      S(a, b) = c[d];
    }
  return S;
}

double dual_norm_on(const Field& g, const RegionMask& U, double s) {
  require_same_grid(g.grid, U.grid, "dual_norm_on");
  if (U.empty()) throw PreconditionError("dual_norm_on: empty region");
  if (!(s > 0.0 && s < 1.0)) throw PreconditionError("dual_norm_on: s must lie in (0,1)");

  const std::vector<int> idx = U.indices();
  const Eigen::MatrixXd S = hs_gram(g.grid, idx, s);
  Eigen::VectorXd gU(idx.size());
  for (std::size_t a = 0; a < idx.size(); ++a) gU[a] = g.values[idx[a]];

  Eigen::LLT<Eigen::MatrixXd> llt(S);
  if (llt.info() != Eigen::Success)
    throw NumericalError("dual_norm_on: H^s Gram is not numerically SPD (conditioning failure)");
  const Eigen::VectorXd sol = llt.solve(gU);
  const double h = g.grid.h();
  return std::sqrt(std::max(0.0, h * h * gU.dot(sol)));
}

}  // namespace fraccal
