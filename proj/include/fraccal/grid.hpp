// grid.hpp — uniform periodic grid on [-L, L), fields sampled on it, and
// Fourier multiplier machinery.
//
// Conventions used throughout the project:
//   nodes        x_j  = -L + j*h,           j = 0..N-1,  h = 2L/N
//   frequencies  xi_k = (pi/L) * k_signed,  k_signed in {-N/2, ..., N/2-1}
//   forward DFT  y_k  = sum_j u_j e^{-2 pi i jk/N}   (unscaled)
//   discrete L2  ||u||^2 = h * sum_j u_j^2
// Parseval then reads  h*sum|u|^2 = (h/N)*sum|y|^2, so every spectral
// pairing below carries the weight h/N.  Symbols are stored in FFT-bin
// order (bin k holds m(xi at signed frequency of bin k)).

#pragma once

#include <Eigen/Dense>

#include "fraccal/errors.hpp"

namespace fraccal {

struct GridSpec {
  double L = 10.0;  // half-length of the torus [-L, L)
  int N = 512;      // node count, power of two, >= 16

  double h() const { return 2.0 * L / N; }
  double node(int j) const { return -L + h() * j; }

  // signed frequency index of FFT bin k
  int signed_index(int k) const { return k < N / 2 ? k : k - N; }
  double freq(int k) const { return (M_PI / L) * signed_index(k); }

  bool operator==(const GridSpec& other) const = default;
};

// Validates the GridSpec invariants (N power of two, N >= 16, L > 0).
GridSpec make_grid(double L, int N);

struct Field {
  GridSpec grid;
  Eigen::VectorXd values;  // length N, all finite
};

struct Multiplier {
  GridSpec grid;
  Eigen::VectorXd symbol;  // length N, FFT-bin order, real (even symbols only)
};

Field make_field(const GridSpec& grid);
Field make_field(const GridSpec& grid, Eigen::VectorXd values);

void require_same_grid(const GridSpec& a, const GridSpec& b, const char* where);
void require_finite(const Eigen::VectorXd& v, const char* where);

// Symbol builders.
Multiplier fractional_symbol(const GridSpec& grid, double s);  // |xi|^{2s}
Multiplier bessel_symbol(const GridSpec& grid, double r);      // <xi>^r = (1+xi^2)^{r/2}

// F^{-1}(m * F(u)).  Real output; the imaginary residue of a real even
// symbol is discarded (it sits at roundoff level).
Field multiplier_apply(const Field& u, const Multiplier& m);

// (-Delta)^s u via the symbol |xi|^{2s}; s must lie in (0,1).
Field frac_laplacian(const Field& u, double s);

// Discrete H^r inner product <u,v>_{H^r} = (h/N) sum_k <xi_k>^{2r} y_u conj(y_v).
double sobolev_inner(const Field& u, const Field& v, double r);
double sobolev_norm(const Field& u, double r);

// h-weighted Euclidean (= discrete L2) pairing.
double l2_inner(const Field& u, const Field& v);
double l2_norm(const Field& u);

// Spectral pairing (h/N) sum_k m_k y_u conj(y_v) for a given symbol; used by
// the bilinear form so that <(-Delta)^{s/2}u, (-Delta)^{s/2}v> costs one pass.
double spectral_pair(const Field& u, const Field& v, const Multiplier& m);

// Raw transforms (exposed for the Gram assembly in sobolev.cpp).
Eigen::VectorXcd dft_forward(const GridSpec& grid, const Eigen::VectorXd& u);
Eigen::VectorXd dft_inverse_real(const GridSpec& grid, const Eigen::VectorXcd& y);

}  // namespace fraccal
