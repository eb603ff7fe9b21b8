// recovery.hpp — finite-resolution uniqueness experiments: recover the
// interior pairings <(Psi_1 - Psi_2) v_1, v_2> from DN data through Runge
// probes (Alessandrini route), reconstruct the kernel difference on
// Omega x Omega, and the finite-propagation demonstration where all cross
// terms vanish by support disjointness.

#pragma once

#include <Eigen/Dense>

#include <optional>
#include <vector>

#include "fraccal/runge.hpp"

namespace fraccal {

struct RecoveryConfig {
  RegionMask omega;
  RegionMask w1;
  RegionMask w2;
  int basis_size = 12;
  double basis_width_factor = 1.0;
  // N_eps stages as multiples of sqrt(lambda_1) of each Runge system,
  // coarse to fine.  The report's headline numbers come from the last stage.
  std::vector<double> n_eps_factors = {1e-1, 1e-3, 1e-7};
  double delta = 0.75;  // must lie in (1/2, 1)
  std::vector<Field> probes;
  double tol = 0.05;  // acceptance tolerance on probe pairings, x scale
  bool waive_geometry = false;
  bool deconvolve = false;
};

// Raised-cosine probes on a uniform sub-grid of omega, H^s-normalized.
// width_factor widens each bump relative to the sub-grid spacing; the
// default 3 keeps the probes within reach of the resolvable Runge modes.
std::vector<Field> make_default_probes(const RegionMask& omega, double s, int count = 8,
                                       double width_factor = 3.0);

void validate_recovery_config(const RecoveryConfig& cfg);

struct ProbePairingResult {
  double estimated = 0.0;  // <(Lambda_1 - Lambda_2) f_1, f_2> via DN pairings
  double truth = 0.0;      // h^2-weighted <(K1-K2) v1, v2>
  double err = 0.0;        // |estimated - truth|
  // error budget: estimated = truth + cross_term + resid_term + unexplained
  double cross_term = 0.0;   // parts pairing the exterior data through (Psi1-Psi2)
  double resid_term = 0.0;   // parts from the Runge residuals r_1, r_2
  double unexplained = 0.0;  // solver-level remainder
  double retained = 0.0;     // <(Psi1-Psi2)(P f1 - f1), (P* f2 - f2)> — the reduced pairing
  double runge_resid1 = 0.0, runge_resid2 = 0.0;
  double f_norm1 = 0.0, f_norm2 = 0.0;
};

// Shared machinery for one probe pair against prebuilt Runge systems.
ProbePairingResult probe_pairing(const DirichletSolver& s1, const DirichletSolver& s2,
                                 const RungeSystem& sys1, const RungeSystem& sys2,
                                 const Field& v1, const Field& v2, double n_eps1, double n_eps2);

// Spec-level single-pair operation; builds both Runge systems internally
// and uses the last stage of the schedule.
ProbePairingResult probe_pairing(const Kernel& K1, const Kernel& K2, const RecoveryConfig& cfg,
                                 double s, const Field& v1, const Field& v2);

struct RecoveryReport {
  Eigen::MatrixXd estimated;  // last stage
  Eigen::MatrixXd truth;
  Eigen::MatrixXd per_entry_err;
  double frobenius_rel_err = 0.0;             // last stage
  std::vector<double> stage_rel_err;          // one per schedule stage
  double scale = 0.0;                         // max(||K1||,||K2||,1) * (max probe H^s norm)^2
  double max_runge_resid1 = 0.0, max_runge_resid2 = 0.0;
  double budget_coverage = 0.0;  // |cross+resid| / |err|, worst probe pair of the last stage
  std::optional<Eigen::MatrixXd> recovered_difference;  // on Omega x Omega nodes
  std::optional<Eigen::MatrixXd> true_difference;
};

RecoveryReport recover_kernel_difference(const Kernel& K1, const Kernel& K2,
                                         const RecoveryConfig& cfg, double s);

struct FinitePropResult {
  double p = 0.0;                // max propagation of the two kernels
  double min_separation = 0.0;   // smallest of the three pairwise set distances
  double cross_terms_max = 0.0;  // max_i,j ||Psi_i f_j||_{L2(Omega u W_{3-j})}
  double pairing_err = 0.0;      // max over probe pairs of |estimated - retained|
  double probe_err_max = 0.0;    // max over probe pairs of |estimated - truth|
  double scale = 0.0;
};

// Theorem 1.1 demonstration: band kernels with window distances > p make
// every cross term vanish at band precision, so the DN pairing equals the
// reduced interior pairing to solver accuracy.
FinitePropResult finite_prop_uniqueness_demo(const Kernel& K1, const Kernel& K2,
                                             const RecoveryConfig& cfg, double s);

}  // namespace fraccal
