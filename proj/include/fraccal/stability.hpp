// stability.hpp — empirical logarithmic stability (regression of
// ||v||_{H^-s(Omega)} against |log eta|) and evaluation of the decay
// admissibility series c_M(r) |log mu(r)|^{-sigma_M(r)}.

#pragma once

#include <string>
#include <vector>

#include "fraccal/kernel.hpp"
#include "fraccal/solver.hpp"

namespace fraccal {

struct StabilityRecord {
  std::string v_id;
  double v_norm_neg = 0.0;  // ||v||_{H^-s(Omega)}
  double eta = 0.0;         // ||(-Delta)^s w||_{H^-s(W)}
};

struct StabilityResult {
  std::vector<StabilityRecord> records;  // eta above the 1e-14 floor only
  double c_hat = 0.0;
  double sigma_hat = 0.0;
  double fit_r2 = 0.0;
  int used_in_fit = 0;  // records with eta < e^{-1}
};

// For each family member v (normalized to ||v||_{L2(Omega)} = 1): solve
// (-Delta)^s w + Psi w = v in Omega with w = 0 outside, record
// (||v||_{H^-s(Omega)}, ||(-Delta)^s w||_{H^-s(W)}), then fit
// log v_norm_neg = log c_hat - sigma_hat * log|log eta| over eta < e^{-1}.
StabilityResult stability_experiment(const DirichletSolver& solver, const RegionMask& W,
                                     const std::vector<Field>& family);

// Half-wave cosine ladder on the hull of omega: member i oscillates
// round(i * max_halfwaves / (count-1)) half-periods across the hull.
// Mixing parities spreads eta over several decades.
std::vector<Field> fourier_mode_family(const RegionMask& omega, int count,
                                       int max_halfwaves = 45);

enum class ConditionVerdict { tending_to_zero, inconclusive, violated };

struct ConditionSeries {
  std::vector<double> radii;
  std::vector<double> value;  // c_M(r) |log mu(r)|^{-sigma_M(r)}
  ConditionVerdict verdict = ConditionVerdict::inconclusive;
  std::vector<double> excluded_radii;  // where mu >= 1
};

ConditionSeries decay_condition_eval(const DecayProfile& profile, const std::vector<double>& cM,
                                     const std::vector<double>& sigmaM);

const char* to_string(ConditionVerdict v);

}  // namespace fraccal
