#include "fraccal/kernel.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace fraccal {

namespace {

// torus distance between nodes i and j as a multiple of h
int node_offset(const GridSpec& g, int i, int j) {
  int d = std::abs(i - j);
  return std::min(d, g.N - d);
}

Eigen::VectorXd unit_l2_gaussian(const GridSpec& g) {
  Eigen::VectorXd psi(g.N);
  for (int j = 0; j < g.N; ++j) {
    const double x = g.node(j);
    psi[j] = std::exp(-x * x);
  }
  psi /= std::sqrt(g.h()) * psi.norm();
  return psi;
}

}  // namespace

double DecayProfile::at(double r) const {
  if (radii.empty()) throw PreconditionError("decay profile: empty");
  if (r <= radii.front()) return mu.front();
  if (r >= radii.back()) return mu.back();
  auto it = std::upper_bound(radii.begin(), radii.end(), r);
  const std::size_t hi = static_cast<std::size_t>(it - radii.begin());
  const std::size_t lo = hi - 1;
  const double t = (r - radii[lo]) / (radii[hi] - radii[lo]);
  return (1.0 - t) * mu[lo] + t * mu[hi];
}

Kernel make_kernel(const GridSpec& grid, Eigen::MatrixXd K) {
  if (K.rows() != grid.N || K.cols() != grid.N)
    throw PreconditionError("kernel: matrix does not match grid");
  if (!K.allFinite()) throw PreconditionError("kernel: non-finite entries");
  return Kernel{grid, std::move(K)};
}

Kernel kernel_transpose(const Kernel& k) {
  return Kernel{k.grid, k.K.transpose()};
}

Field kernel_apply(const Kernel& k, const Field& u) {
  require_same_grid(k.grid, u.grid, "kernel_apply");
  return Field{u.grid, k.grid.h() * (k.K * u.values)};
}

Field kernel_apply_adjoint(const Kernel& k, const Field& u) {
  require_same_grid(k.grid, u.grid, "kernel_apply_adjoint");
  return Field{u.grid, k.grid.h() * (k.K.transpose() * u.values)};
}

Kernel build_finite_propagation(const GridSpec& grid, double R,
                                const std::function<double(double)>& amplitude_profile) {
  if (!(R > 0.0)) throw PreconditionError("band kernel: R must be positive");
  if (!(R < grid.L / 2.0))
    throw PreconditionError("band kernel: R must be < L/2, the band wraps otherwise");
  Eigen::MatrixXd K(grid.N, grid.N);
  const double h = grid.h();
  for (int i = 0; i < grid.N; ++i)
    for (int j = 0; j < grid.N; ++j) {
      const double d = h * node_offset(grid, i, j);
      K(i, j) = d <= R ? (amplitude_profile ? amplitude_profile(d) : 1.0) : 0.0;
    }
  return make_kernel(grid, std::move(K));
}

double example2_radial_factor(const DecayFunction& mu_tilde, double rho) {
  // n = 1: c_1 = 2, rho^{n-1} = 1.  -(mu~^2)' = -2 mu~ mu~'.
  const double v = mu_tilde.value(rho);
  const double d = mu_tilde.derivative(rho);
  return std::sqrt(std::max(0.0, -v * d));
}

Kernel build_prescribed_decay(const GridSpec& grid, const DecayFunction& mu_tilde) {
  if (!mu_tilde.value || !mu_tilde.derivative)
    throw PreconditionError("prescribed decay: mu_tilde needs value and derivative");
  const double h = grid.h();
  const int half = grid.N / 2;

  // validate positivity and strict monotone decrease on the sampled range
  double prev = mu_tilde.value(0.0);
  if (!(prev > 0.0)) throw PreconditionError("prescribed decay: mu_tilde must be positive");
  for (int m = 1; m <= half + 1; ++m) {
    const double cur = mu_tilde.value(h * m);
    if (!(cur > 0.0) || cur >= prev)
      throw PreconditionError("prescribed decay: mu_tilde must be strictly decreasing");
    prev = cur;
  }

  // cell-averaged radial factor per distance class
  Eigen::VectorXd rho2(half + 1);
  for (int m = 0; m <= half; ++m) {
    const double a = mu_tilde.value(h * m);
    const double b = mu_tilde.value(h * (m + 1));
    rho2[m] = std::sqrt(std::max(0.0, (a * a - b * b) / (2.0 * h)));
  }

  const Eigen::VectorXd psi1 = unit_l2_gaussian(grid);
  Eigen::MatrixXd K(grid.N, grid.N);
  for (int i = 0; i < grid.N; ++i)
    for (int j = 0; j < grid.N; ++j) K(i, j) = psi1[i] * rho2[node_offset(grid, i, j)];
  return make_kernel(grid, std::move(K));
}

AdmissibleResult build_admissible(const GridSpec& grid, const std::function<double(double)>& c_fun,
                                  const std::function<double(double)>& sigma_fun,
                                  const std::function<double(double)>& f_growth,
                                  const std::vector<double>& radii) {
  if (radii.size() < 2) throw PreconditionError("admissible: need at least two radii");
  AdmissibleResult res;
  res.mu.kind = DecayProfile::Kind::prescribed;
  res.mu.radii = radii;
  res.mu.mu.resize(radii.size());
  for (std::size_t i = 0; i < radii.size(); ++i) {
    const double r = radii[i];
    if (i > 0 && radii[i] <= radii[i - 1])
      throw PreconditionError("admissible: radii must be strictly increasing");
    const double c = c_fun(r), sg = sigma_fun(r), f = f_growth(r);
    if (!(c > 0.0) || !(sg > 0.0)) throw PreconditionError("admissible: c, sigma must be positive");
    res.mu.mu[i] = std::exp(-std::pow(std::max(0.0, c * f), 1.0 / sg));
  }
  res.warning_not_decaying = res.mu.mu.back() > 0.5 * res.mu.mu.front();

  // strictly decreasing minorant of mu on a grid-resolution ladder, then a
  // piecewise log-linear DecayFunction feeding the Example 2 builder
  const double h = grid.h();
  const int half = grid.N / 2;
  std::vector<double> rs(half + 3), ms(half + 3);
  double running = res.mu.at(0.0);
  const double shrink = 1.0 - 1e-9;
  for (int m = 0; m <= half + 2; ++m) {
    rs[m] = h * m;
    running = std::min(running * shrink, res.mu.at(rs[m]));
    running = std::max(running, 1e-300);
    ms[m] = running;
  }
  auto value = [rs, ms, h](double r) {
    if (r <= 0.0) return ms.front();
    const double t = r / h;
    const std::size_t lo = std::min(static_cast<std::size_t>(t), ms.size() - 2);
    const double frac = t - static_cast<double>(lo);
    // log-linear between samples keeps strict positivity and monotonicity
    return ms[lo] * std::pow(ms[lo + 1] / ms[lo], std::min(frac, 1.0));
  };
  auto derivative = [rs, ms, h, value](double r) {
    const double t = std::max(0.0, r / h);
    const std::size_t lo = std::min(static_cast<std::size_t>(t), ms.size() - 2);
    const double slope = std::log(ms[lo + 1] / ms[lo]) / h;  // <= 0
    return slope * value(r);
  };
  res.kernel = build_prescribed_decay(grid, DecayFunction{value, derivative});
  return res;
}

Kernel build_separable_schwartz(const Field& k1_samples, const Field& k2_samples) {
  require_same_grid(k1_samples.grid, k2_samples.grid, "separable kernel");
  const GridSpec& g = k1_samples.grid;
  // k2 is a function of the wrapped difference z = x_i - x_j in [-L, L):
  // index of z on the grid is (i - j) mod N offset by the origin node.
  const int origin = g.N / 2;  // node(N/2) = 0
  Eigen::MatrixXd K(g.N, g.N);
  for (int i = 0; i < g.N; ++i)
    for (int j = 0; j < g.N; ++j) {
      int d = (i - j + origin) % g.N;
      if (d < 0) d += g.N;
      K(i, j) = k1_samples.values[i] * k2_samples.values[d];
    }
  return make_kernel(g, std::move(K));
}

namespace {

// largest singular value of a rectangular block by power iteration on B^T B
double block_sigma_max(const Eigen::MatrixXd& B, double rel_tol, int max_iter) {
  if (B.rows() == 0 || B.cols() == 0) return 0.0;
  Eigen::VectorXd v = Eigen::VectorXd::Ones(B.cols());
  for (int i = 0; i < B.cols(); ++i) v[i] += 1e-3 * std::sin(1.0 + i);  // break symmetry
  v.normalize();
  double sigma = 0.0;
  for (int it = 0; it < max_iter; ++it) {
    const Eigen::VectorXd u = B * v;
    const double cur = u.norm();  // ||Bv|| -> sigma_max as v aligns
    if (cur == 0.0) return 0.0;
    v = B.transpose() * u;
    const double nv = v.norm();
    if (nv == 0.0) return cur;
    v /= nv;
    if (it > 0 && std::abs(cur - sigma) <= rel_tol * std::max(cur, 1e-300)) return cur;
    sigma = cur;
  }
  throw NumericalError("power iteration: no convergence within iteration cap");
}

}  // namespace

DecayEstimate estimate_decay(const Kernel& k, const RegionMask& base,
                             const std::vector<double>& radii) {
  require_same_grid(k.grid, base.grid, "estimate_decay");
  if (base.empty()) throw PreconditionError("estimate_decay: empty base");
  const double h = k.grid.h();
  const int half = k.grid.N / 2;
  const double r_max = h * half;  // torus headroom

  // squared Frobenius mass per distance class
  Eigen::VectorXd class_sq = Eigen::VectorXd::Zero(half + 1);
  for (int i = 0; i < k.grid.N; ++i)
    for (int j = 0; j < k.grid.N; ++j)
      class_sq[node_offset(k.grid, i, j)] += k.K(i, j) * k.K(i, j);
  // suffix sums: tail_sq[m] = sum of classes at distance >= m*h
  Eigen::VectorXd tail_sq(half + 2);
  tail_sq[half + 1] = 0.0;
  for (int m = half; m >= 0; --m) tail_sq[m] = tail_sq[m + 1] + class_sq[m];

  DecayEstimate est;
  est.hs_bound.kind = DecayProfile::Kind::hs_bound;
  est.operator_norm.kind = DecayProfile::Kind::operator_norm;
  const std::vector<int> base_idx = base.indices();

  for (double r : radii) {
    double rr = r;
    if (rr > r_max + 1e-12 * k.grid.L) {
      est.truncated = true;
      rr = r_max;
    }
    // hs bound: entries with torus-dist >= r
    const int m0 = static_cast<int>(std::ceil(rr / h - 1e-9));
    est.hs_bound.radii.push_back(r);
    est.hs_bound.mu.push_back(h * std::sqrt(tail_sq[std::min(m0, half + 1)]));

    // operator-norm surrogate: inputs on base, outputs on N(base,r)_e
    const RegionMask far = mask_complement(neighborhood(base, rr));
    const std::vector<int> far_idx = far.indices();
    double sigma = 0.0;
    if (!far_idx.empty()) {
      Eigen::MatrixXd block(far_idx.size(), base_idx.size());
      for (std::size_t a = 0; a < far_idx.size(); ++a)
        for (std::size_t b = 0; b < base_idx.size(); ++b)
          block(a, b) = k.K(far_idx[a], base_idx[b]);
      sigma = h * block_sigma_max(block, 1e-10, 50000);
    }
    est.operator_norm.radii.push_back(r);
    est.operator_norm.mu.push_back(sigma);
  }
  return est;
}

double estimate_propagation(const Kernel& k, double tol) {
  if (tol < 0.0) throw PreconditionError("estimate_propagation: tol must be >= 0");
  const int half = k.grid.N / 2;
  Eigen::VectorXd class_max = Eigen::VectorXd::Zero(half + 1);
  for (int i = 0; i < k.grid.N; ++i)
    for (int j = 0; j < k.grid.N; ++j) {
      const int m = node_offset(k.grid, i, j);
      class_max[m] = std::max(class_max[m], std::abs(k.K(i, j)));
    }
  int last = -1;
  for (int m = 0; m <= half; ++m)
    if (class_max[m] > tol) last = m;
  return last < 0 ? 0.0 : k.grid.h() * last;
}

double l2_operator_norm(const Kernel& k) {
  return k.grid.h() * block_sigma_max(k.K, 1e-9, 100000);
}

}  // namespace fraccal
