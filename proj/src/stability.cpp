#include "fraccal/stability.hpp"

#include <algorithm>
#include <cmath>

#include "fraccal/sobolev.hpp"

namespace fraccal {

StabilityResult stability_experiment(const DirichletSolver& solver, const RegionMask& W,
                                     const std::vector<Field>& family) {
  const DirichletProblem& p = solver.problem();
  require_same_grid(p.grid, W.grid, "stability_experiment");
  if (W.empty()) throw PreconditionError("stability_experiment: empty window");
  if (!solver.wellposedness().ok)
    throw NumericalError("stability_experiment: problem is not well posed");

  StabilityResult res;
  const Field zero = make_field(p.grid);
  for (std::size_t i = 0; i < family.size(); ++i) {
    Field v = family[i];
    require_same_grid(p.grid, v.grid, "stability_experiment");
    // normalize on Omega; members must live there
    double nrm2 = 0.0;
    for (int j = 0; j < p.grid.N; ++j) {
      if (!p.omega.contains(j) && v.values[j] != 0.0)
        throw PreconditionError("stability_experiment: family member not Omega-supported");
      nrm2 += v.values[j] * v.values[j];
    }
    const double nrm = std::sqrt(p.grid.h() * nrm2);
    if (nrm <= 0.0) throw PreconditionError("stability_experiment: zero family member");
    v.values /= nrm;

    const Field w = solver.solve(zero, v).u;
    const double eta = dual_norm_on(frac_laplacian(w, p.s), W, p.s);
    if (eta <= 1e-14) continue;  // below the recording floor
    StabilityRecord rec;
    rec.v_id = "v" + std::to_string(i);
    rec.v_norm_neg = dual_norm_on(v, p.omega, p.s);
    rec.eta = eta;
    res.records.push_back(std::move(rec));
  }

  // least squares on log v_norm_neg = log c - sigma * log|log eta|
  std::vector<double> X, Y;
  for (const auto& r : res.records)
    if (r.eta < std::exp(-1.0)) {
      X.push_back(std::log(std::abs(std::log(r.eta))));
      Y.push_back(std::log(r.v_norm_neg));
    }
  res.used_in_fit = static_cast<int>(X.size());
  if (res.used_in_fit < 3)
    throw NumericalError("stability_experiment: degenerate regression, fewer than 3 usable records");

  const double n = static_cast<double>(X.size());
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < X.size(); ++i) {
    sx += X[i];
    sy += Y[i];
    sxx += X[i] * X[i];
    sxy += X[i] * Y[i];
  }
  const double det = n * sxx - sx * sx;
  if (std::abs(det) < 1e-30)
    throw NumericalError("stability_experiment: degenerate regression, no spread in |log eta|");
  const double slope = (n * sxy - sx * sy) / det;
  const double intercept = (sy * sxx - sx * sxy) / det;
  res.sigma_hat = -slope;
  res.c_hat = std::exp(intercept);

  double ss_res = 0, ss_tot = 0;
  const double ymean = sy / n;
  for (std::size_t i = 0; i < X.size(); ++i) {
    const double fit = intercept + slope * X[i];
    ss_res += (Y[i] - fit) * (Y[i] - fit);
    ss_tot += (Y[i] - ymean) * (Y[i] - ymean);
  }
  res.fit_r2 = ss_tot > 0 ? 1.0 - ss_res / ss_tot : 1.0;
  return res;
}

std::vector<Field> fourier_mode_family(const RegionMask& omega, int count, int max_halfwaves) {
  if (omega.empty()) throw PreconditionError("mode family: empty omega");
  if (count < 1) throw PreconditionError("mode family: count must be >= 1");
  const std::vector<int> idx = omega.indices();
  const GridSpec& g = omega.grid;
  const double lo = g.node(idx.front());
  const double width = g.node(idx.back()) - lo;
  if (!(width > 0)) throw PreconditionError("mode family: omega has no extent");

  std::vector<Field> family;
  family.reserve(count);
  for (int i = 0; i < count; ++i) {
    const int m = count > 1 ? static_cast<int>(std::lround(i * double(max_halfwaves) / (count - 1)))
                            : 0;
    Field v = make_field(g);
    for (int j : idx) v.values[j] = std::cos(m * M_PI * (g.node(j) - lo) / width);
    family.push_back(std::move(v));
  }
  return family;
}

ConditionSeries decay_condition_eval(const DecayProfile& profile, const std::vector<double>& cM,
                                     const std::vector<double>& sigmaM) {
  if (cM.size() != profile.radii.size() || sigmaM.size() != profile.radii.size())
    throw PreconditionError("decay_condition_eval: sample grids must align with the profile");
  ConditionSeries out;
  for (std::size_t i = 0; i < profile.radii.size(); ++i) {
    const double mu = profile.mu[i];
    if (mu >= 1.0) {
      out.excluded_radii.push_back(profile.radii[i]);
      continue;
    }
    out.radii.push_back(profile.radii[i]);
    out.value.push_back(mu <= 0.0 ? 0.0 : cM[i] * std::pow(std::abs(std::log(mu)), -sigmaM[i]));
  }

  const std::size_t n = out.value.size();
  if (n < 3) {
    out.verdict = ConditionVerdict::inconclusive;
    return out;
  }
  const std::size_t start = (2 * n) / 3;
  bool nonincreasing = true;
  for (std::size_t i = start + 1; i < n; ++i)
    if (out.value[i] > out.value[i - 1] * (1.0 + 1e-12) + 1e-300) nonincreasing = false;
  const double first = out.value.front(), last = out.value.back();
  if (nonincreasing && (last == 0.0 || last < 0.1 * first))
    out.verdict = ConditionVerdict::tending_to_zero;
  else if (!nonincreasing || last > first)
    out.verdict = ConditionVerdict::violated;
  else
    out.verdict = ConditionVerdict::inconclusive;
  return out;
}

const char* to_string(ConditionVerdict v) {
  switch (v) {
    case ConditionVerdict::tending_to_zero: return "tending_to_zero";
    case ConditionVerdict::inconclusive: return "inconclusive";
    case ConditionVerdict::violated: return "violated";
  }
  return "unknown";
}

}  // namespace fraccal
