#include "fraccal/grid.hpp"

#include <unsupported/Eigen/FFT>

#include <cmath>
#include <string>

namespace fraccal {

GridSpec make_grid(double L, int N) {
  if (!(L > 0.0)) throw PreconditionError("grid: L must be positive");
  if (N < 16 || (N & (N - 1)) != 0)
    throw PreconditionError("grid: N must be a power of two, N >= 16 (got " + std::to_string(N) + ")");
  return GridSpec{L, N};
}

Field make_field(const GridSpec& grid) {
  return Field{grid, Eigen::VectorXd::Zero(grid.N)};
}

Field make_field(const GridSpec& grid, Eigen::VectorXd values) {
  if (values.size() != grid.N) throw PreconditionError("field: value length does not match grid");
  require_finite(values, "field");
  return Field{grid, std::move(values)};
}

void require_same_grid(const GridSpec& a, const GridSpec& b, const char* where) {
  if (!(a == b)) throw PreconditionError(std::string(where) + ": grid mismatch");
}

void require_finite(const Eigen::VectorXd& v, const char* where) {
  if (!v.allFinite()) throw PreconditionError(std::string(where) + ": non-finite entries");
}

Multiplier fractional_symbol(const GridSpec& grid, double s) {
  if (!(s > 0.0 && s < 1.0)) throw PreconditionError("fractional symbol: s must lie in (0,1)");
  Eigen::VectorXd sym(grid.N);
  for (int k = 0; k < grid.N; ++k) sym[k] = std::pow(std::abs(grid.freq(k)), 2.0 * s);
  sym[0] = 0.0;  // zero frequency annihilated, no regularization
  return Multiplier{grid, std::move(sym)};
}

Multiplier bessel_symbol(const GridSpec& grid, double r) {
  Eigen::VectorXd sym(grid.N);
  for (int k = 0; k < grid.N; ++k) {
    const double xi = grid.freq(k);
    sym[k] = std::pow(1.0 + xi * xi, 0.5 * r);
  }
  return Multiplier{grid, std::move(sym)};
}

Eigen::VectorXcd dft_forward(const GridSpec& grid, const Eigen::VectorXd& u) {
  std::vector<std::complex<double>> in(grid.N), out(grid.N);
  for (int j = 0; j < grid.N; ++j) in[j] = u[j];
  Eigen::FFT<double> fft;
  fft.fwd(out, in);
  return Eigen::Map<Eigen::VectorXcd>(out.data(), grid.N);
}

Eigen::VectorXd dft_inverse_real(const GridSpec& grid, const Eigen::VectorXcd& y) {
  std::vector<std::complex<double>> in(grid.N), out(grid.N);
  for (int k = 0; k < grid.N; ++k) in[k] = y[k];
  Eigen::FFT<double> fft;
  fft.inv(out, in);  // carries the 1/N
  Eigen::VectorXd res(grid.N);
  for (int j = 0; j < grid.N; ++j) res[j] = out[j].real();
  return res;
}

Field multiplier_apply(const Field& u, const Multiplier& m) {
  require_same_grid(u.grid, m.grid, "multiplier_apply");
  require_finite(m.symbol, "multiplier_apply: symbol");
  Eigen::VectorXcd y = dft_forward(u.grid, u.values);
  y.array() *= m.symbol.array();
  return Field{u.grid, dft_inverse_real(u.grid, y)};
}

Field frac_laplacian(const Field& u, double s) {
  return multiplier_apply(u, fractional_symbol(u.grid, s));
}

double spectral_pair(const Field& u, const Field& v, const Multiplier& m) {
  require_same_grid(u.grid, v.grid, "spectral_pair");
  require_same_grid(u.grid, m.grid, "spectral_pair");
  const Eigen::VectorXcd yu = dft_forward(u.grid, u.values);
  const Eigen::VectorXcd yv = dft_forward(v.grid, v.values);
  const double w = u.grid.h() / u.grid.N;
  double acc = 0.0;
  for (int k = 0; k < u.grid.N; ++k)
    acc += m.symbol[k] * (yu[k] * std::conj(yv[k])).real();
  return w * acc;
}

double sobolev_inner(const Field& u, const Field& v, double r) {
  return spectral_pair(u, v, bessel_symbol(u.grid, 2.0 * r));
}

double sobolev_norm(const Field& u, double r) {
  return std::sqrt(std::max(0.0, sobolev_inner(u, u, r)));
}

double l2_inner(const Field& u, const Field& v) {
  require_same_grid(u.grid, v.grid, "l2_inner");
  return u.grid.h() * u.values.dot(v.values);
}

double l2_norm(const Field& u) {
  return std::sqrt(u.grid.h()) * u.values.norm();
}

}  // namespace fraccal
