#include "fraccal/experiments.hpp"

#include <cmath>
#include <fstream>
#include <iostream>
#include <set>

#include "fraccal/io.hpp"
#include "fraccal/recovery.hpp"
#include "fraccal/sobolev.hpp"
#include "fraccal/stability.hpp"

namespace fraccal {

namespace {

const std::set<std::string> kExperiments = {"solve",     "dn",     "alessandrini", "runge",
                                            "stability", "condition", "recover",   "chain"};

void check_keys(const json& obj, const std::set<std::string>& allowed, const std::string& path,
                ValidationReport& rep) {
  for (auto it = obj.begin(); it != obj.end(); ++it)
    if (!allowed.count(it.key()))
      rep.issues.push_back({path + "/" + it.key(), "unknown key rejected"});
}

bool is_number(const json& j) { return j.is_number_float() || j.is_number_integer(); }

void validate_intervals(const json& j, const std::string& path, ValidationReport& rep) {
  if (!j.is_array() || j.empty()) {
    rep.issues.push_back({path, "must be a non-empty array of {lo, hi} intervals"});
    return;
  }
  for (std::size_t i = 0; i < j.size(); ++i) {
    const json& iv = j[i];
    const std::string p = path + "/" + std::to_string(i);
    if (!iv.is_object() || !iv.contains("lo") || !iv.contains("hi") || !is_number(iv["lo"]) ||
        !is_number(iv["hi"])) {
      rep.issues.push_back({p, "interval must be {lo: number, hi: number}"});
      continue;
    }
    check_keys(iv, {"lo", "hi"}, p, rep);
    if (iv["lo"].get<double>() > iv["hi"].get<double>())
      rep.issues.push_back({p, "lo must be <= hi"});
  }
}

void validate_kernel_spec(const json& j, const std::string& path, ValidationReport& rep) {
  if (!j.is_object() || !j.contains("builder") || !j["builder"].is_string()) {
    rep.issues.push_back({path, "kernel spec must carry a builder name"});
    return;
  }
  const std::string b = j["builder"].get<std::string>();
  auto need_pos = [&](const char* key) {
    if (!j.contains(key) || !is_number(j[key]) || !(j[key].get<double>() > 0.0))
      rep.issues.push_back({path + "/" + key, "must be a positive number"});
  };
  if (b == "zero") {
    check_keys(j, {"builder"}, path, rep);
  } else if (b == "band") {
    check_keys(j, {"builder", "R", "amplitude"}, path, rep);
    need_pos("R");
  } else if (b == "prescribed") {
    check_keys(j, {"builder", "mu0", "rate", "shape"}, path, rep);
    need_pos("mu0");
    need_pos("rate");
    if (j.contains("shape") && j["shape"] != "exp" && j["shape"] != "gauss")
      rep.issues.push_back({path + "/shape", "must be \"exp\" or \"gauss\""});
  } else if (b == "separable") {
    check_keys(j, {"builder", "k1_sigma", "k2_sigma", "amplitude"}, path, rep);
    need_pos("k1_sigma");
    need_pos("k2_sigma");
  } else if (b == "admissible") {
    check_keys(j, {"builder", "c", "sigma", "growth"}, path, rep);
    need_pos("c");
    need_pos("sigma");
    if (j.contains("growth") && j["growth"] != "linear" && j["growth"] != "log")
      rep.issues.push_back({path + "/growth", "must be \"linear\" or \"log\""});
  } else if (b == "base_plus_bump") {
    check_keys(j, {"builder", "base", "bump"}, path, rep);
    if (j.contains("base")) validate_kernel_spec(j["base"], path + "/base", rep);
    if (!j.contains("bump") || !j["bump"].is_object()) {
      rep.issues.push_back({path + "/bump", "required object {x0, y0, width, amplitude}"});
    } else {
      check_keys(j["bump"], {"x0", "y0", "width", "amplitude"}, path + "/bump", rep);
      for (const char* k : {"x0", "y0", "width", "amplitude"})
        if (!j["bump"].contains(k) || !is_number(j["bump"][k]))
          rep.issues.push_back({path + "/bump/" + k, "must be a number"});
    }
  } else {
    rep.issues.push_back({path + "/builder", "unknown builder \"" + b + "\""});
  }
}

}  // namespace

json ValidationReport::to_json() const {
  json arr = json::array();
  for (const auto& issue : issues) arr.push_back({{"path", issue.path}, {"message", issue.message}});
  return json{{"valid", issues.empty()}, {"violations", arr}};
}

ValidationReport validate_config_json(const json& cfg) {
  ValidationReport rep;
  if (!cfg.is_object()) {
    rep.issues.push_back({"/", "config must be a JSON object"});
    return rep;
  }
  check_keys(cfg,
             {"experiment", "grid", "s", "omega", "w1", "w2", "kernel1", "kernel2", "params",
              "seed", "out_dir"},
             "", rep);

  if (!cfg.contains("experiment") || !cfg["experiment"].is_string() ||
      !kExperiments.count(cfg["experiment"].get<std::string>())) {
    rep.issues.push_back({"/experiment", "must name one of solve, dn, alessandrini, runge, "
                                         "stability, condition, recover, chain"});
    return rep;
  }
  const std::string exp = cfg["experiment"].get<std::string>();

  if (!cfg.contains("seed") || !cfg["seed"].is_number_integer() || cfg["seed"].get<long long>() < 0)
    rep.issues.push_back({"/seed", "must be a non-negative integer"});
  if (!cfg.contains("out_dir") || !cfg["out_dir"].is_string())
    rep.issues.push_back({"/out_dir", "must be a string path"});

  const json params = cfg.contains("params") ? cfg["params"] : json::object();
  if (!params.is_object()) rep.issues.push_back({"/params", "must be an object"});

  if (exp == "chain") {
    check_keys(params, {"r_W", "x_W", "r_Omega", "x_Omega", "h", "c_multiplier", "c_ns"}, "/params",
               rep);
    for (const char* k : {"r_W", "x_W", "r_Omega", "x_Omega", "h"})
      if (!params.contains(k) || !is_number(params[k]))
        rep.issues.push_back({std::string("/params/") + k, "required number"});
    if (params.contains("r_W") && is_number(params["r_W"])) {
      const double rw = params["r_W"].get<double>();
      if (!(rw > 0.0 && rw <= 2.0)) rep.issues.push_back({"/params/r_W", "must lie in (0, 2]"});
    }
    if (params.contains("h") && is_number(params["h"])) {
      const double hh = params["h"].get<double>();
      if (!(hh > 0.0 && hh < 1.0)) rep.issues.push_back({"/params/h", "must lie in (0, 1)"});
    }
    return rep;  // chain needs no grid
  }

  // grid-based experiments
  if (!cfg.contains("grid") || !cfg["grid"].is_object()) {
    rep.issues.push_back({"/grid", "required object {L, N}"});
  } else {
    check_keys(cfg["grid"], {"L", "N"}, "/grid", rep);
    if (!cfg["grid"].contains("L") || !is_number(cfg["grid"]["L"]) ||
        !(cfg["grid"]["L"].get<double>() > 0.0))
      rep.issues.push_back({"/grid/L", "must be a positive number"});
    if (!cfg["grid"].contains("N") || !cfg["grid"]["N"].is_number_integer()) {
      rep.issues.push_back({"/grid/N", "must be an integer"});
    } else {
      const long long n = cfg["grid"]["N"].get<long long>();
      if (n < 16 || (n & (n - 1)) != 0)
        rep.issues.push_back({"/grid/N", "must be a power of two, N >= 16"});
    }
  }
  if (!cfg.contains("s") || !is_number(cfg["s"]) ||
      !(cfg["s"].get<double>() > 0.0 && cfg["s"].get<double>() < 1.0))
    rep.issues.push_back({"/s", "must lie in (0,1)"});

  if (!cfg.contains("omega"))
    rep.issues.push_back({"/omega", "required interval list"});
  else
    validate_intervals(cfg["omega"], "/omega", rep);

  const bool needs_w1 = exp == "dn" || exp == "alessandrini" || exp == "runge" ||
                        exp == "stability" || exp == "recover" || exp == "solve";
  const bool needs_w2 = exp == "dn" || exp == "alessandrini" || exp == "recover";
  if (needs_w1) {
    if (!cfg.contains("w1"))
      rep.issues.push_back({"/w1", "required interval list for experiment " + exp});
    else
      validate_intervals(cfg["w1"], "/w1", rep);
  }
  if (needs_w2) {
    if (!cfg.contains("w2"))
      rep.issues.push_back({"/w2", "required interval list for experiment " + exp});
    else
      validate_intervals(cfg["w2"], "/w2", rep);
  }

  const bool needs_k1 = exp != "chain";
  const bool needs_k2 = exp == "alessandrini" || exp == "recover";
  if (needs_k1) {
    if (!cfg.contains("kernel1"))
      rep.issues.push_back({"/kernel1", "required kernel spec"});
    else
      validate_kernel_spec(cfg["kernel1"], "/kernel1", rep);
  }
  if (needs_k2) {
    if (!cfg.contains("kernel2"))
      rep.issues.push_back({"/kernel2", "required kernel spec"});
    else
      validate_kernel_spec(cfg["kernel2"], "/kernel2", rep);
  }

  // geometric consistency, checkable without computation
  if (cfg.contains("grid") && cfg["grid"].is_object() && cfg["grid"].contains("L") &&
      is_number(cfg["grid"]["L"]) && cfg.contains("omega") && cfg["omega"].is_array()) {
    auto overlaps = [&](const json& a, const json& b) {
      for (const auto& ia : a)
        for (const auto& ib : b) {
          if (!ia.is_object() || !ib.is_object() || !ia.contains("lo") || !ib.contains("lo") ||
              !ia.contains("hi") || !ib.contains("hi"))
            continue;
          if (ia["lo"].get<double>() <= ib["hi"].get<double>() &&
              ib["lo"].get<double>() <= ia["hi"].get<double>())
            return true;
        }
      return false;
    };
    if (cfg.contains("w1") && cfg["w1"].is_array() && overlaps(cfg["omega"], cfg["w1"]))
      rep.issues.push_back({"/w1", "overlaps omega"});
    if (cfg.contains("w2") && cfg["w2"].is_array() && overlaps(cfg["omega"], cfg["w2"]))
      rep.issues.push_back({"/w2", "overlaps omega"});
    if (cfg.contains("w1") && cfg.contains("w2") && cfg["w1"].is_array() &&
        cfg["w2"].is_array() && overlaps(cfg["w1"], cfg["w2"]))
      rep.issues.push_back({"/w2", "overlaps w1"});
  }

  // experiment-specific params
  if (exp == "alessandrini") {
    check_keys(params, {"pairs", "basis_size", "width_factor"}, "/params", rep);
  } else if (exp == "dn") {
    check_keys(params, {"basis_size", "width_factor"}, "/params", rep);
  } else if (exp == "solve") {
    check_keys(params, {"f_amplitude", "f_width"}, "/params", rep);
  } else if (exp == "runge") {
    check_keys(params, {"basis_size", "width_factor", "n_eps_factors", "target_halfwaves"},
               "/params", rep);
  } else if (exp == "stability") {
    check_keys(params, {"family_size", "max_halfwaves"}, "/params", rep);
  } else if (exp == "condition") {
    check_keys(params, {"radius_count", "r_max", "c_M", "sigma_M"}, "/params", rep);
  } else if (exp == "recover") {
    check_keys(params,
               {"basis_size", "width_factor", "probes", "probe_width_factor", "n_eps_factors",
                "delta", "tol", "deconvolve", "waive_geometry"},
               "/params", rep);
    if (params.contains("delta")) {
      if (!is_number(params["delta"]) ||
          !(params["delta"].get<double>() > 0.5 && params["delta"].get<double>() < 1.0))
        rep.issues.push_back({"/params/delta", "delta must lie in (1/2,1)"});
    }
  }
  return rep;
}

ValidationReport validate_config_file(const std::string& path) {
  ValidationReport rep;
  std::ifstream in(path);
  if (!in) {
    rep.issues.push_back({"/", "cannot read config file " + path});
    return rep;
  }
  json cfg;
  try {
    in >> cfg;
  } catch (const json::parse_error& e) {
    rep.issues.push_back({"/", std::string("JSON parse error: ") + e.what()});
    return rep;
  }
  return validate_config_json(cfg);
}

Kernel kernel_from_spec(const json& spec, const GridSpec& grid) {
  const std::string b = spec["builder"].get<std::string>();
  if (b == "zero") return make_kernel(grid, Eigen::MatrixXd::Zero(grid.N, grid.N));
  if (b == "band") {
    const double amp = spec.value("amplitude", 1.0);
    return build_finite_propagation(grid, spec["R"].get<double>(),
                                    [amp](double) { return amp; });
  }
  if (b == "prescribed") {
    const double mu0 = spec["mu0"].get<double>();
    const double rate = spec["rate"].get<double>();
    const std::string shape = spec.value("shape", "exp");
    DecayFunction mu;
    if (shape == "gauss") {
      mu.value = [mu0, rate](double r) { return mu0 * std::exp(-0.5 * rate * r * r); };
      mu.derivative = [mu0, rate](double r) {
        return -mu0 * rate * r * std::exp(-0.5 * rate * r * r);
      };
    } else {
      mu.value = [mu0, rate](double r) { return mu0 * std::exp(-rate * r); };
      mu.derivative = [mu0, rate](double r) { return -mu0 * rate * std::exp(-rate * r); };
    }
    return build_prescribed_decay(grid, mu);
  }
  if (b == "separable") {
    const double s1 = spec["k1_sigma"].get<double>();
    const double s2 = spec["k2_sigma"].get<double>();
    const double amp = spec.value("amplitude", 1.0);
    Field k1 = make_field(grid), k2 = make_field(grid);
    for (int j = 0; j < grid.N; ++j) {
      const double x = grid.node(j);
      k1.values[j] = amp * std::exp(-0.5 * x * x / (s1 * s1));
      k2.values[j] = std::exp(-0.5 * x * x / (s2 * s2));
    }
    return build_separable_schwartz(k1, k2);
  }
  if (b == "admissible") {
    const double c = spec["c"].get<double>();
    const double sg = spec["sigma"].get<double>();
    const std::string growth = spec.value("growth", "linear");
    std::vector<double> radii;
    for (int i = 0; i <= 64; ++i) radii.push_back(grid.L * i / 64.0);
    auto f = growth == "log" ? std::function<double(double)>([](double r) { return std::log1p(r); })
                             : std::function<double(double)>([](double r) { return r; });
    return build_admissible(
               grid, [c](double) { return c; }, [sg](double) { return sg; }, f, radii)
        .kernel;
  }
  if (b == "base_plus_bump") {
    Kernel base = kernel_from_spec(spec["base"], grid);
    const json& bump = spec["bump"];
    const double x0 = bump["x0"].get<double>();
    const double y0 = bump["y0"].get<double>();
    const double w = bump["width"].get<double>();
    const double amp = bump["amplitude"].get<double>();
    auto raised = [&](double x, double c) {
      const double z = std::abs(x - c);
      return z < w ? 0.5 * (1.0 + std::cos(M_PI * z / w)) : 0.0;
    };
    for (int i = 0; i < grid.N; ++i)
      for (int j = 0; j < grid.N; ++j)
        base.K(i, j) += amp * raised(grid.node(i), x0) * raised(grid.node(j), y0);
    return base;
  }
  throw ConfigError("unknown kernel builder " + b);
}

Kernel random_built_kernel(CounterRng& rng, const GridSpec& grid, double max_norm) {
  const int family = static_cast<int>(rng.next_u64() % 4);
  Kernel k = make_kernel(grid, Eigen::MatrixXd::Zero(grid.N, grid.N));
  switch (family) {
    case 0:
      k = build_finite_propagation(grid, rng.uniform(0.5, grid.L / 2.5));
      break;
    case 1: {
      const double rate = rng.uniform(0.5, 2.0);
      k = kernel_from_spec(json{{"builder", "prescribed"}, {"mu0", 1.0}, {"rate", rate},
                                {"shape", "exp"}},
                           grid);
      break;
    }
    case 2: {
      const double rate = rng.uniform(0.3, 1.5);
      k = kernel_from_spec(json{{"builder", "prescribed"}, {"mu0", 1.0}, {"rate", rate},
                                {"shape", "gauss"}},
                           grid);
      break;
    }
    default: {
      const double s1 = rng.uniform(0.5, 2.0);
      const double s2 = rng.uniform(0.3, 1.5);
      k = kernel_from_spec(json{{"builder", "separable"}, {"k1_sigma", s1}, {"k2_sigma", s2}},
                           grid);
      break;
    }
  }
  const double norm = l2_operator_norm(k);
  if (norm > 0.0) k.K *= rng.uniform(0.3, 1.0) * max_norm / norm;
  return k;
}

namespace {

GridSpec grid_from(const json& cfg) {
  return make_grid(cfg["grid"]["L"].get<double>(), cfg["grid"]["N"].get<int>());
}

std::vector<Interval> intervals_from(const json& arr) {
  std::vector<Interval> out;
  for (const auto& iv : arr) out.push_back({iv["lo"].get<double>(), iv["hi"].get<double>()});
  return out;
}

Field random_window_field(CounterRng& rng, const RegionMask& window) {
  const std::vector<int> idx = window.indices();
  const GridSpec& g = window.grid;
  const double lo = g.node(idx.front()), hi = g.node(idx.back());
  const double c = rng.uniform(lo + 0.15 * (hi - lo), hi - 0.15 * (hi - lo));
  const double w = rng.uniform(0.15, 0.45) * (hi - lo);
  Field f = make_field(g);
  for (int j : idx) {
    const double z = std::abs(g.node(j) - c);
    if (z < w) f.values[j] = 0.5 * (1.0 + std::cos(M_PI * z / w));
  }
  return f;
}

void run_experiment(const json& cfg, Manifest& out) {
  const std::string exp = cfg["experiment"].get<std::string>();
  const std::uint64_t seed = cfg["seed"].get<std::uint64_t>();

  if (exp == "chain") {
    const json& pr = cfg["params"];
    const ChainReport rep =
        chain_counts(pr["r_W"].get<double>(), pr["x_W"].get<double>(), pr["r_Omega"].get<double>(),
                     pr["x_Omega"].get<double>(), pr["h"].get<double>(),
                     pr.value("c_multiplier", 1.0));
    json j = chain_report_to_json(rep);
    j["sigma"] = sigma_constant(rep, pr.value("c_ns", 1.0));
    out.write_json("chain_report.json", j);
    return;
  }

  const GridSpec grid = grid_from(cfg);
  const double s = cfg["s"].get<double>();
  const RegionMask omega = mask_from_intervals(grid, intervals_from(cfg["omega"]));
  const json params = cfg.contains("params") ? cfg["params"] : json::object();
  const Kernel K1 = kernel_from_spec(cfg["kernel1"], grid);

  if (exp == "solve") {
    const RegionMask w1 = mask_from_intervals(grid, intervals_from(cfg["w1"]));
    CounterRng rng(seed, "solve/f");
    Field f = random_window_field(rng, w1);
    f.values *= params.value("f_amplitude", 1.0);
    const DirichletProblem p = make_problem(grid, s, omega, K1);
    const SolveReport rep = solve_dirichlet(p, f, make_field(grid));
    out.write_csv("solution.csv", field_to_csv(rep.u));
    out.write_json("solve_report.json",
                   json{{"interior_residual", rep.interior_residual},
                        {"exterior_mismatch", rep.exterior_mismatch},
                        {"condition_estimate", rep.condition_estimate},
                        {"grid", grid_to_json(grid)},
                        {"omega", mask_to_json(omega)}});
    return;
  }

  if (exp == "dn") {
    const RegionMask w1 = mask_from_intervals(grid, intervals_from(cfg["w1"]));
    const RegionMask w2 = mask_from_intervals(grid, intervals_from(cfg["w2"]));
    const int basis_size = params.value("basis_size", 12);
    const double wf = params.value("width_factor", 1.0);
    const ExteriorBasis in = make_bump_basis(w1, basis_size, wf);
    const ExteriorBasis outb = make_bump_basis(w2, basis_size, wf);
    const DirichletSolver solver(make_problem(grid, s, omega, K1));
    const DNMatrix dn = assemble_dn(solver, in, outb);
    out.write_csv("dn_matrix.csv", matrix_to_csv(dn.entries, "g"));
    out.write_json("dn_meta.json", json{{"w1", mask_to_json(w1)},
                                        {"w2", mask_to_json(w2)},
                                        {"kernel1", cfg["kernel1"]},
                                        {"basis_size", basis_size}});
    return;
  }

  if (exp == "alessandrini") {
    const RegionMask w1 = mask_from_intervals(grid, intervals_from(cfg["w1"]));
    const RegionMask w2 = mask_from_intervals(grid, intervals_from(cfg["w2"]));
    const Kernel K2 = kernel_from_spec(cfg["kernel2"], grid);
    const int pairs = params.value("pairs", 20);
    const DirichletSolver s1(make_problem(grid, s, omega, K1));
    const DirichletSolver s2(make_problem(grid, s, omega, K2));
    const DirichletSolver s2a(make_problem(grid, s, omega, kernel_transpose(K2)));
    CounterRng rng(seed, "alessandrini/fg");
    CsvWriter csv({"pair", "lhs", "rhs", "gap"});
    double max_gap = 0.0, scale = 1.0;
    for (int i = 0; i < pairs; ++i) {
      const Field f = random_window_field(rng, w1);
      const Field g = random_window_field(rng, w2);
      const AlessandriniResult res = alessandrini_gap(s1, s2, s2a, f, g);
      csv.add_numeric_row({static_cast<double>(i), res.lhs, res.rhs, res.gap});
      max_gap = std::max(max_gap, res.gap);
      scale = std::max({scale, std::abs(res.lhs), std::abs(res.rhs)});
    }
    out.write_csv("alessandrini.csv", csv);
    out.write_json("alessandrini_report.json",
                   json{{"max_gap", max_gap}, {"scale", scale}, {"pairs", pairs}});
    if (max_gap > 1e-8 * scale)
      throw NumericalError("alessandrini experiment: gap " + format_double(max_gap) +
                           " exceeds 1e-8 * scale");
    return;
  }

  if (exp == "runge") {
    const RegionMask w1 = mask_from_intervals(grid, intervals_from(cfg["w1"]));
    const DirichletSolver solver(make_problem(grid, s, omega, K1));
    const RungeSystem sys = runge_assemble(solver, w1, params.value("basis_size", 12),
                                           params.value("width_factor", 1.0));
    out.write_csv("spectrum.csv", spectrum_to_csv(sys.lambda));

    std::vector<Field> fam = fourier_mode_family(omega, 1, params.value("target_halfwaves", 3));
    Field v = fam[0];
    v.values /= l2_norm(v);
    std::vector<double> factors = {1e-1, 1e-3, 1e-7};
    if (params.contains("n_eps_factors"))
      factors = params["n_eps_factors"].get<std::vector<double>>();
    json stages = json::array();
    for (double t : factors) {
      const double n_eps = t * std::sqrt(sys.lambda[0]);
      const RungeData data = runge_truncate(sys, v, n_eps);
      const RungeCertificate cert = runge_certify(sys, data, v);
      stages.push_back(json{{"n_eps", n_eps},
                            {"used_modes", data.used_modes},
                            {"approx_err", cert.approx_err},
                            {"residual_norm", cert.residual_norm},
                            {"f_norm", cert.f_norm},
                            {"f_norm_bound", cert.f_norm_bound},
                            {"astar_r_norm", cert.astar_r_norm},
                            {"astar_bound", cert.astar_bound},
                            {"ok", cert.ok}});
      if (!cert.ok)
        throw NumericalError("runge experiment: certificate violated, margin " +
                             format_double(cert.violated_margin));
    }
    out.write_json("runge_certificates.json", json{{"kept", sys.kept}, {"stages", stages}});
    return;
  }

  if (exp == "stability") {
    const RegionMask w1 = mask_from_intervals(grid, intervals_from(cfg["w1"]));
    const DirichletSolver solver(make_problem(grid, s, omega, K1));
    const std::vector<Field> family = fourier_mode_family(
        omega, params.value("family_size", 20), params.value("max_halfwaves", 45));
    const StabilityResult res = stability_experiment(solver, w1, family);
    CsvWriter csv({"label", "v_norm_neg", "eta", "loglog_x", "loglog_y"});
    for (const auto& r : res.records)
      csv.add_row({r.v_id, format_double(r.v_norm_neg), format_double(r.eta),
                   format_double(std::log(std::abs(std::log(r.eta)))),
                   format_double(std::log(r.v_norm_neg))});
    out.write_csv("stability_records.csv", csv);
    out.write_json("stability_fit.json", json{{"c_hat", res.c_hat},
                                              {"sigma_hat", res.sigma_hat},
                                              {"fit_r2", res.fit_r2},
                                              {"used_in_fit", res.used_in_fit}});
    return;
  }

  if (exp == "condition") {
    const int count = params.value("radius_count", 32);
    const double r_max = params.value("r_max", grid.L / 2.0);
    std::vector<double> radii;
    for (int i = 0; i < count; ++i) radii.push_back(r_max * (i + 1.0) / count);
    const DecayEstimate est = estimate_decay(K1, omega, radii);
    auto series_param = [&](const char* key, double fallback) {
      std::vector<double> v(radii.size(), fallback);
      if (params.contains(key)) {
        if (params[key].is_array())
          v = params[key].get<std::vector<double>>();
        else
          v.assign(radii.size(), params[key].get<double>());
      }
      return v;
    };
    const ConditionSeries series = decay_condition_eval(est.hs_bound, series_param("c_M", 1.0),
                                                        series_param("sigma_M", 1.0));
    CsvWriter csv({"r", "value"});
    for (std::size_t i = 0; i < series.radii.size(); ++i)
      csv.add_numeric_row({series.radii[i], series.value[i]});
    out.write_csv("condition_series.csv", csv);
    out.write_csv("decay_profile.csv", profile_to_csv(est.hs_bound));
    out.write_json("condition_report.json", json{{"verdict", to_string(series.verdict)},
                                                 {"excluded_radii", series.excluded_radii}});
    return;
  }

  if (exp == "recover") {
    const RegionMask w1 = mask_from_intervals(grid, intervals_from(cfg["w1"]));
    const RegionMask w2 = mask_from_intervals(grid, intervals_from(cfg["w2"]));
    const Kernel K2 = kernel_from_spec(cfg["kernel2"], grid);
    RecoveryConfig rc;
    rc.omega = omega;
    rc.w1 = w1;
    rc.w2 = w2;
    rc.basis_size = params.value("basis_size", 12);
    rc.basis_width_factor = params.value("width_factor", 1.0);
    rc.delta = params.value("delta", 0.75);
    rc.tol = params.value("tol", 0.05);
    rc.deconvolve = params.value("deconvolve", false);
    rc.waive_geometry = params.value("waive_geometry", false);
    if (params.contains("n_eps_factors"))
      rc.n_eps_factors = params["n_eps_factors"].get<std::vector<double>>();
    rc.probes = make_default_probes(omega, s, params.value("probes", 8),
                                    params.value("probe_width_factor", 3.0));
    const RecoveryReport rep = recover_kernel_difference(K1, K2, rc, s);
    out.write_csv("estimated.csv", matrix_to_csv(rep.estimated, "p"));
    out.write_csv("truth.csv", matrix_to_csv(rep.truth, "p"));
    out.write_csv("per_entry_err.csv", matrix_to_csv(rep.per_entry_err, "p"));
    json j{{"frobenius_rel_err", rep.frobenius_rel_err},
           {"stage_rel_err", rep.stage_rel_err},
           {"scale", rep.scale},
           {"max_runge_resid1", rep.max_runge_resid1},
           {"max_runge_resid2", rep.max_runge_resid2},
           {"budget_coverage", rep.budget_coverage}};
    out.write_json("recovery_report.json", j);
    if (rep.recovered_difference) {
      out.write_csv("recovered_difference.csv", matrix_to_csv(*rep.recovered_difference, "y"));
      out.write_csv("true_difference.csv", matrix_to_csv(*rep.true_difference, "y"));
    }
    const double tol = params.value("tol", 0.1);
    if (rep.frobenius_rel_err > tol)
      throw NumericalError("recover experiment: frobenius_rel_err " +
                           format_double(rep.frobenius_rel_err) + " exceeds tol " +
                           format_double(tol));
    return;
  }

  throw ConfigError("unhandled experiment " + exp);
}

}  // namespace

int run_config_file(const std::string& path) {
  json cfg;
  {
    const ValidationReport rep = validate_config_file(path);
    if (!rep.ok()) {
      std::cerr << json{{"error", "schema"}, {"report", rep.to_json()}}.dump(2) << "\n";
      return 2;
    }
    std::ifstream in(path);
    in >> cfg;
  }
  try {
    Manifest out(cfg["out_dir"].get<std::string>());
    run_experiment(cfg, out);
    out.finalize();
    return 0;
  } catch (const ConfigError& e) {
    std::cerr << json{{"error", "schema"}, {"message", e.what()}}.dump(2) << "\n";
    return 2;
  } catch (const PreconditionError& e) {
    std::cerr << json{{"error", "precondition"}, {"message", e.what()}}.dump(2) << "\n";
    return 3;
  } catch (const NumericalError& e) {
    std::cerr << json{{"error", "tolerance"}, {"message", e.what()}}.dump(2) << "\n";
    return 4;
  } catch (const std::exception& e) {
    std::cerr << json{{"error", "internal"}, {"message", e.what()}}.dump(2) << "\n";
    return 1;
  }
}

}  // namespace fraccal
