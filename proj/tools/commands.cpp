#include "commands.hpp"

#include <filesystem>

#include "eseplab/analytics.hpp"
#include "eseplab/blocking.hpp"
#include "eseplab/branching.hpp"
#include "eseplab/limits.hpp"
#include "eseplab/parallel.hpp"
#include "eseplab/simulators.hpp"
#include "eseplab/verify.hpp"

namespace eseplab::cli {

const char* const kSimulateHelp =
    "Simulates `replications` paths of `model` up to `horizon`.\n"
    "Writes path_<i>.csv (time,kind,batch[,mark]) and path_<i>.json for the first 10\n"
    "replications, and summary.json with the end-state histogram (queue models) or the\n"
    "sorted end intensities (hawkes).";
const char* const kAnalyticHelp =
    "quantity: negbin | blocking | progeny | generations | offspring | logarithmic | active_families\n"
    "  -> <quantity>.csv with columns k,probability (model esep or hawkes for cluster laws)\n"
    "quantity: transient_mgf | gesep2_mgf (theta_grid) | qt_pgf | counting_pgf | counting_pgf_raw (z_grid)\n"
    "  | joint_pgf (z_grid x z_grid) | fluid_mgf (theta_grid x theta_grid) | counting_pmf (n up to k_max)\n"
    "  | mean_nt, each over t_grid -> <quantity>.csv with argument columns, then value,in_domain\n"
    "quantity: moments | diffusion -> <quantity>.csv with columns scale,metric,value,samples,seed";
const char* const kSweepHelp =
    "quantity: batch_scaling (n_list, batch_family, burn_in as horizon) | sis (n_list as population sizes,\n"
    "  replications as grid samples) | pasta (n_list) | renewal (t_grid) | diffusion (n_list, gamma_list)\n"
    "  | sandwich (t_grid). Writes sweep.csv (scale,metric,value,samples,seed) and sweep.json.";
const char* const kVerifyHelp =
    "Runs the listed claims (default: the full suite) and writes verify_report.json.\n"
    "--replications overrides every claim's replication count. Exit code 1 on any failure.";

namespace {

std::string out_file(const RunConfig& c, const std::string& name) {
  std::error_code ec;
  std::filesystem::create_directories(c.out, ec);
  if (ec) throw Error(ErrorCode::IoError, "cannot create " + c.out);
  return (std::filesystem::path(c.out) / name).string();
}

std::string write(const RunConfig& c, const std::string& name, const std::string& text) {
  const std::string path = out_file(c, name);
  write_text_file(path, text);
  return path;
}

KernelSpec hawkes_kernel(const RunConfig& c) {
  if (c.kernel) return *c.kernel;
  return exponential_kernel(validate_params(c.params, ModelTag::Hawkes));
}

SamplePath simulate_one(const RunConfig& c, RngStreamSpec rng) {
  switch (c.model) {
    case ModelTag::Esep: return simulate_esep(c.params, c.horizon, rng);
    case ModelTag::Hawkes: return simulate_hawkes(c.params, hawkes_kernel(c), c.horizon, rng);
    case ModelTag::NGesep: return simulate_ngesep(c.params, c.params.scale, c.horizon, rng);
    case ModelTag::Hesep: return simulate_hesep(c.params, c.horizon, rng);
    case ModelTag::EsepB: return simulate_esep_b(c.params, c.horizon, rng);
    case ModelTag::Sis: return simulate_sis(c.params, c.horizon, rng);
  }
  throw Error(ErrorCode::ConfigInvalid, "unknown model");
}

std::vector<double> grid_or(const std::vector<double>& g, double fallback) {
  return g.empty() ? std::vector<double>{fallback} : g;
}

void need(bool ok, const std::string& what) {
  if (!ok) throw Error(ErrorCode::ConfigInvalid, what);
}

TransformRow row_of(const TransformResult& r) { return {r.argument, r.value, r.in_domain}; }

BranchModel branch_model(const RunConfig& c) { return c.model == ModelTag::Hawkes ? BranchModel::Hawkes : BranchModel::Esep; }

}  // namespace

int resolve_threads(const RunConfig& c) { return c.threads > 0 ? c.threads : default_threads(); }

CommandResult cmd_simulate(const RunConfig& c) {
  need(c.replications > 0, "replications must be >= 1");
  const int threads = resolve_threads(c);
  struct End {
    StateAt state;
    SamplePath path;
  };
  const std::size_t keep = 10;
  const auto ends = replicate<End>(c.replications, threads, [&](std::size_t i) {
    SamplePath path = simulate_one(c, {c.seed, i});
    End e{reconstruct_state(path, c.horizon), {}};
    if (i < keep) e.path = std::move(path);
    return e;
  });
  CommandResult res;
  for (std::size_t i = 0; i < std::min<std::size_t>(keep, ends.size()); ++i) {
    const std::string stem = "path_" + std::to_string(i);
    res.files.push_back(write(c, stem + ".csv", path_to_csv(ends[i].path)));
    res.files.push_back(write(c, stem + ".json", path_envelope(ends[i].path).dump(2) + "\n"));
  }
  EmpiricalSummary s;
  if (c.model == ModelTag::Hawkes) {
    std::vector<double> xs;
    for (const End& e : ends) xs.push_back(e.state.intensity);
    s = summarize_continuous(xs, c.seed, 0);
  } else {
    std::vector<std::int64_t> xs;
    for (const End& e : ends) xs.push_back(e.state.q);
    s = summarize_discrete(xs, c.seed, 0);
  }
  Json j = summary_to_json(s);
  j["model"] = model_name(c.model);
  j["horizon"] = c.horizon;
  j["statistic"] = c.model == ModelTag::Hawkes ? "intensity" : "q";
  if (c.model == ModelTag::Hawkes) j["sorted"] = s.sorted;
  res.files.push_back(write(c, "summary.json", j.dump(2) + "\n"));
  return res;
}

CommandResult cmd_analytic(const RunConfig& c) {
  const std::string& q = c.quantity;
  need(!q.empty(), "analytic needs a quantity");
  CommandResult res;
  const auto ts = grid_or(c.t_grid, c.horizon);
  auto pmf_file = [&](const std::vector<double>& probs) { res.files.push_back(write(c, q + ".csv", pmf_to_csv(probs))); };
  auto rows_file = [&](const std::vector<std::string>& names, const std::vector<TransformRow>& rows) {
    res.files.push_back(write(c, q + ".csv", transforms_to_csv(names, rows)));
  };
  if (q == "negbin") {
    pmf_file(esep_steady_negbin(c.params, c.k_max).probs);
  } else if (q == "blocking") {
    const BlockingSummary s = esepb_steady(c.params);
    pmf_file(s.pmf.probs);
    const Json j = {{"mean", s.mean}, {"variance", s.variance}, {"block_fraction", s.block_fraction}};
    res.files.push_back(write(c, "blocking.json", j.dump(2) + "\n"));
  } else if (q == "progeny") {
    pmf_file(progeny_law(c.params, branch_model(c), c.k_max).pmf);
  } else if (q == "generations") {
    pmf_file(branch_model(c) == BranchModel::Esep ? generations_law_esep(c.params, c.k_max).pmf
                                                  : generations_law_hawkes(c.params, c.k_max).pmf);
  } else if (q == "offspring") {
    pmf_file(offspring_law(c.params, branch_model(c)).pmf);
  } else if (q == "logarithmic") {
    pmf_file(logarithmic_law(c.params, c.k_max).pmf);
  } else if (q == "active_families") {
    pmf_file(active_families_law(c.params).pmf);
  } else if (q == "transient_mgf" || q == "gesep2_mgf") {
    std::vector<TransformRow> rows;
    for (double th : grid_or(c.theta_grid, 0.0)) {
      if (q == "gesep2_mgf") {
        rows.push_back(row_of(gesep2_steady_mgf(c.params, th)));
      } else {
        for (double t : ts) rows.push_back(row_of(esep_transient_mgf(c.params, th, t)));
      }
    }
    rows_file(q == "gesep2_mgf" ? std::vector<std::string>{"theta"} : std::vector<std::string>{"theta", "t"}, rows);
  } else if (q == "qt_pgf" || q == "counting_pgf" || q == "counting_pgf_raw") {
    std::vector<TransformRow> rows;
    for (double z : grid_or(c.z_grid, 0.5)) {
      for (double t : ts) {
        if (q == "qt_pgf") rows.push_back(row_of(esep_qt_pgf(c.params, z, t)));
        if (q == "counting_pgf") rows.push_back(row_of(esep_counting_pgf(c.params, z, t)));
        if (q == "counting_pgf_raw") rows.push_back(row_of(esep_counting_pgf_raw(c.params, z, t)));
      }
    }
    rows_file({"z", "t"}, rows);
  } else if (q == "joint_pgf") {
    std::vector<TransformRow> rows;
    const auto zs = grid_or(c.z_grid, 0.5);
    for (double z1 : zs) {
      for (double z2 : zs) {
        for (double t : ts) rows.push_back(row_of(joint_qd_pgf(c.params, z1, z2, t)));
      }
    }
    rows_file({"z1", "z2", "t"}, rows);
  } else if (q == "fluid_mgf") {
    std::vector<TransformRow> rows;
    const auto th = grid_or(c.theta_grid, 0.0);
    for (double a : th) {
      for (double b : th) {
        for (double t : ts) rows.push_back(row_of(fluid_limit_mgf(c.params, a, b, t)));
      }
    }
    rows_file({"theta_nu", "theta_q", "t"}, rows);
  } else if (q == "counting_pmf") {
    need(c.k_max >= 0, "k_max must be >= 0");
    std::vector<TransformRow> rows;
    for (double t : ts) {
      for (std::int64_t n = 0; n <= c.k_max; ++n) {
        rows.push_back({{static_cast<double>(n), t}, counting_pmf_matrix(c.params, n, t), true});
      }
    }
    rows_file({"n", "t"}, rows);
  } else if (q == "mean_nt") {
    std::vector<TransformRow> rows;
    for (double t : ts) rows.push_back({{t}, esep_mean_nt(c.params, t), true});
    rows_file({"t"}, rows);
  } else if (q == "moments") {
    ModelParams hawkes;
    hawkes.baseline = c.params.baseline;
    hawkes.jump = c.params.jump;
    hawkes.decay_rate = c.params.expire_rate;
    std::vector<double> grid = c.t_grid;
    if (grid.empty()) {
      for (int k = 0; k <= 100; ++k) grid.push_back(c.horizon * k / 100.0);
    }
    const MomentTrajectories m = moment_odes(c.params, hawkes, 2, grid);
    SweepReport r;
    for (std::size_t i = 0; i < m.t.size(); ++i) {
      const double em = m.esep_intensity[0][i], hm = m.hawkes_intensity[0][i];
      r.rows.push_back({m.t[i], "esep_intensity_mean", em, 1, 0});
      r.rows.push_back({m.t[i], "esep_intensity_var", m.esep_intensity[1][i] - em * em, 1, 0});
      r.rows.push_back({m.t[i], "hawkes_intensity_mean", hm, 1, 0});
      r.rows.push_back({m.t[i], "hawkes_intensity_var", m.hawkes_intensity[1][i] - hm * hm, 1, 0});
      r.rows.push_back({m.t[i], "esep_count_mean", m.esep_count_mean[i], 1, 0});
      r.rows.push_back({m.t[i], "esep_count_var", m.esep_count_second[i] - m.esep_count_mean[i] * m.esep_count_mean[i], 1, 0});
      r.rows.push_back({m.t[i], "hawkes_count_mean", m.hawkes_count_mean[i], 1, 0});
      r.rows.push_back(
          {m.t[i], "hawkes_count_var", m.hawkes_count_second[i] - m.hawkes_count_mean[i] * m.hawkes_count_mean[i], 1, 0});
    }
    res.files.push_back(write(c, q + ".csv", sweep_to_csv(r)));
  } else if (q == "diffusion") {
    SweepReport r;
    for (double g : c.gamma_list.empty() ? std::vector<double>{0.0, 1.0} : c.gamma_list) {
      const DiffusionBound b = diffusion_bound(c.params, g);
      r.rows.push_back({g, "sigma2_nu", b.sigma2_nu, 1, 0});
      r.rows.push_back({g, "sigma2_q", b.sigma2_q, 1, 0});
      r.rows.push_back({g, "mean_nu", b.mean_nu, 1, 0});
      r.rows.push_back({g, "mean_q", b.mean_q, 1, 0});
    }
    res.files.push_back(write(c, q + ".csv", sweep_to_csv(r)));
  } else {
    throw Error(ErrorCode::ConfigInvalid, "unknown analytic quantity '" + q + "'");
  }
  return res;
}

CommandResult cmd_sweep(const RunConfig& c) {
  const std::string& q = c.quantity;
  need(c.replications > 0, "replications must be >= 1");
  const int threads = resolve_threads(c);
  SweepReport r;
  if (q == "batch_scaling") {
    need(!c.n_list.empty(), "batch_scaling needs n_list");
    BatchScalingOptions o;
    o.family = c.batch_family == "geometric" ? BatchFamily::Geometric : BatchFamily::Deterministic;
    o.horizon = c.burn_in;
    o.threads = threads;
    r = batch_scaling_sweep(c.params, c.n_list, c.replications, c.seed, o);
  } else if (q == "sis") {
    need(!c.n_list.empty(), "sis needs n_list (population sizes)");
    GridSamplingOptions o;
    if (c.spacing > 0.0) o.spacing = c.spacing;
    o.burn_in = c.burn_in;
    r = sis_convergence_sweep(c.params, c.n_list, c.replications, c.seed, o);
  } else if (q == "pasta") {
    need(!c.n_list.empty(), "pasta needs n_list");
    r = pasta_ratio_sweep(c.params, c.n_list, {0, c.seed});
  } else if (q == "renewal") {
    r = renewal_check(c.params, grid_or(c.t_grid, c.horizon), c.seed);
  } else if (q == "diffusion") {
    need(!c.n_list.empty(), "diffusion needs n_list");
    DiffusionFitOptions o;
    if (c.spacing > 0.0) o.spacing = c.spacing;
    o.burn_in = c.burn_in;
    const double mid = c.params.expire_rate / (c.params.expire_rate + c.params.decay_rate);
    r = diffusion_fit_check(c.params, c.n_list, c.gamma_list.empty() ? std::vector<double>{0.0, mid, 1.0} : c.gamma_list,
                            c.replications, c.seed, o);
  } else if (q == "sandwich") {
    r = sandwich_check(c.params, grid_or(c.t_grid, c.horizon), c.replications, c.seed, threads);
  } else {
    throw Error(ErrorCode::ConfigInvalid, "unknown sweep '" + q + "'");
  }
  CommandResult res;
  res.files.push_back(write(c, "sweep.csv", sweep_to_csv(r)));
  Json side = {{"config", run_config_to_json(c)}, {"monotone_expected", r.monotone_expected}};
  res.files.push_back(write(c, "sweep.json", side.dump(2) + "\n"));
  return res;
}

CommandResult cmd_verify(const RunConfig& c) {
  std::vector<ClaimSpec> suite;
  if (c.claims.empty()) {
    suite = default_suite(c.seed);
  } else {
    for (const std::string& id : c.claims) suite.push_back(registered_claim(id, c.seed));
  }
  if (c.replications_set) {
    for (ClaimSpec& s : suite) s.replications = c.replications;
  }
  const auto reports = run_suite(suite, resolve_threads(c));
  CommandResult res;
  res.files.push_back(write(c, "verify_report.json", suite_to_json(reports).dump(2) + "\n"));
  res.exit_code = all_pass(reports) ? 0 : 1;
  return res;
}

}  // namespace eseplab::cli
