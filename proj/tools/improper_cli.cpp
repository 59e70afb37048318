// Batch CLI over the improper-distributions library: reproduces the figure
// data and headline numbers as CSV files with JSON run manifests.  Every
// subcommand writes its outputs plus a manifest describing the run; `rerun`
// replays a manifest byte-for-byte.  Exit codes: 0 success, 1 numerical
// failure, 2 usage error.

#include <cstdint>
#include <exception>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "improper/csv.hpp"
#include "improper/gibbs.hpp"
#include "improper/igmrf.hpp"
#include "improper/kernel.hpp"
#include "improper/qvague.hpp"
#include "improper/stats.hpp"
#include "improper/stone.hpp"

namespace {

using nlohmann::json;

/// A numerical (not usage) failure: normalization diverged, file unwritable.
class RunFailure : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

std::string default_manifest_path(const std::string& out) { return out + ".manifest.json"; }

void write_text_file(const std::string& path, const std::string& content) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw RunFailure("cannot open '" + path + "' for writing");
  os << content;
  if (!os) throw RunFailure("failed while writing '" + path + "'");
}

void write_manifest(const std::string& path, const json& manifest) {
  write_text_file(path, manifest.dump(2) + "\n");
}

// ---------------------------------------------------------------------------
// stone-figure

struct StoneParams {
  double z = 1.0;
  double M = 500.0;
  std::vector<double> xs{1.0, 0.001};
  std::string prior = "exp";
  std::string out = "stone_figure.csv";
  std::string manifest;
};

improper::Kernel stone_prior(const std::string& name) {
  if (name == "exp") return improper::stone::exponential_prior();
  if (name == "recip") return improper::stone::reciprocal_prior();
  throw RunFailure("unknown prior '" + name + "'");
}

json stone_manifest(const StoneParams& p) {
  return json{{"subcommand", "stone-figure"},
              {"parameters", {{"z", p.z}, {"M", p.M}, {"x", p.xs}, {"prior", p.prior}}},
              {"output_path", p.out}};
}

void run_stone(const StoneParams& p) {
  if (p.xs.size() != 2) throw RunFailure("stone-figure needs exactly two --x values");
  const improper::Kernel prior = stone_prior(p.prior);
  const std::vector<double> grid = improper::stone::theta_grid();
  const double step = grid[1] - grid[0];

  const improper::ProperDensity xm1 =
      improper::stone::truncated_posterior(p.xs[0], p.z, p.M, prior);
  const improper::ProperDensity xm2 =
      improper::stone::truncated_posterior(p.xs[1], p.z, p.M, prior);
  const improper::ProperDensity cross = improper::stone::posterior_given_xz(p.z, prior);
  const improper::ProperDensity naive = improper::stone::naive_fz(p.z, prior);

  std::vector<std::vector<double>> cols(4, std::vector<double>(grid.size()));
  const improper::ProperDensity* dens[4] = {&xm1, &xm2, &cross, &naive};
  for (int c = 0; c < 4; ++c) {
    double mass = 0.0;
    for (std::size_t i = 0; i < grid.size(); ++i) {
      cols[c][i] = dens[c]->eval(grid[i]);
      mass += cols[c][i] * step;
    }
    if (!std::isfinite(mass) || !(mass > 0.0))
      throw RunFailure("column " + std::to_string(c) + " does not normalize on the grid");
    for (double& v : cols[c]) v /= mass;
  }

  std::ostringstream os;
  os << "theta,dens_xM_x1,dens_xM_x2,dens_cross,dens_DD\n";
  for (std::size_t i = 0; i < grid.size(); ++i)
    improper::csv::write_row(os, grid[i], cols[0][i], cols[1][i], cols[2][i], cols[3][i]);
  write_text_file(p.out, os.str());
  write_manifest(p.manifest.empty() ? default_manifest_path(p.out) : p.manifest,
                 stone_manifest(p));
}

// ---------------------------------------------------------------------------
// gibbs

struct GibbsParams {
  double y = 0.0;
  int iters = 10000;
  std::uint64_t seed = 1;
  std::string prior = "flat";
  double tau2 = 1.0;
  double kappa2 = 1.0;
  std::string out = "gibbs.csv";
  std::string manifest;
};

json gibbs_manifest(const GibbsParams& p) {
  return json{{"subcommand", "gibbs"},
              {"parameters",
               {{"y", p.y},
                {"iters", p.iters},
                {"prior", p.prior},
                {"tau2", p.tau2},
                {"kappa2", p.kappa2}}},
              {"output_path", p.out},
              {"seed", p.seed}};
}

void run_gibbs_cmd(const GibbsParams& p) {
  improper::gibbs::GibbsConfig cfg;
  cfg.y = p.y;
  cfg.n_iter = p.iters;
  cfg.seed = p.seed;
  if (p.prior == "flat")
    cfg.prior = improper::gibbs::Prior::flat();
  else if (p.prior == "gaussian")
    cfg.prior = improper::gibbs::Prior::gaussian(p.tau2, p.kappa2);
  else
    throw RunFailure("unknown prior '" + p.prior + "'");

  const improper::gibbs::ChainTrace trace = improper::gibbs::run_gibbs(cfg);
  std::ostringstream os;
  improper::gibbs::write_csv(trace, os);
  write_text_file(p.out, os.str());

  const int window = std::max(1, std::min(50, p.iters / 4));
  const improper::gibbs::DriftReport drift = improper::gibbs::drift_diagnostic(trace, window);
  const improper::stats::KsReport ks = improper::gibbs::embedded_delta_test(trace);
  std::ostringstream ds;
  ds << "drift_slope,drift_flagged,window,ks_statistic,ks_p_value\n";
  improper::csv::write_row(ds, drift.slope, static_cast<std::int64_t>(drift.flagged ? 1 : 0),
                           static_cast<std::int64_t>(window), ks.statistic, ks.p_value);
  write_text_file(p.out + ".diagnostics.csv", ds.str());
  write_manifest(p.manifest.empty() ? default_manifest_path(p.out) : p.manifest,
                 gibbs_manifest(p));
}

// ---------------------------------------------------------------------------
// lindley

struct LindleyParams {
  std::vector<double> xs{0.0, 0.5, 1.0, 2.0};
  std::vector<double> ns{1.0, 10.0, 100.0, 10000.0};
  std::string out = "lindley.csv";
  std::string manifest;
};

json lindley_manifest(const LindleyParams& p) {
  return json{{"subcommand", "lindley"},
              {"parameters", {{"x", p.xs}, {"n", p.ns}}},
              {"output_path", p.out}};
}

void run_lindley(const LindleyParams& p) {
  std::ostringstream os;
  os << "x,n,posterior_proper,posterior_improper_limit\n";
  for (double x : p.xs)
    for (double n : p.ns)
      improper::csv::write_row(os, x, n, improper::qvague::lindley_posterior_proper(x, n),
                               improper::qvague::lindley_posterior_improper(x));
  write_text_file(p.out, os.str());
  write_manifest(p.manifest.empty() ? default_manifest_path(p.out) : p.manifest,
                 lindley_manifest(p));
}

// ---------------------------------------------------------------------------
// qvague-demo

struct QvagueParams {
  std::string case_name;
  std::string out = "qvague_demo.csv";
  std::string manifest;
};

json qvague_manifest(const QvagueParams& p) {
  return json{{"subcommand", "qvague-demo"},
              {"parameters", {{"case", p.case_name}}},
              {"output_path", p.out}};
}

improper::Kernel centered_normal(double n) {
  return improper::Kernel::of("centered normal density",
                              {"t", improper::Domain1D::real_line()}, [n](double t) {
                                return improper::stats::normal_pdf(t, 0.0, n);
                              });
}

void append_verdict_block(std::ostringstream& os, const std::string& case_name,
                          const std::string& candidate, const improper::qvague::QVagueVerdict& v,
                          const std::vector<double>& indices) {
  for (std::size_t i = 0; i < indices.size(); ++i)
    improper::csv::write_row(os, case_name, candidate, indices[i], v.scale_sequence[i],
                             v.errors[i]);
  os << "# case=" << case_name << " candidate=" << candidate
     << " converges=" << (v.converges ? "true" : "false") << "\n";
}

void run_qvague(const QvagueParams& p) {
  namespace qv = improper::qvague;
  using improper::Domain1D;
  const std::vector<double> indices{10.0, 100.0, 1000.0, 10000.0};
  std::ostringstream os;
  os << "case,candidate,index,scale,worst_error\n";

  if (p.case_name == "hM") {
    const auto seq = [](double M) {
      return qv::MixedMeasure::density(improper::Kernel::of(
          "truncated uniform", {"t", Domain1D::half_line(), {M}},
          [M](double t) { return t > 0.0 && t <= M ? 1.0 / M : 0.0; }));
    };
    const qv::TestFunctionFamily fam = qv::TestFunctionFamily::for_domain(Domain1D::half_line());
    const qv::QVagueVerdict v = qv::check_qvague(
        seq, indices, qv::MixedMeasure::lebesgue(Domain1D::half_line()), fam);
    append_verdict_block(os, p.case_name, "lebesgue", v, indices);
  } else if (p.case_name == "gauss_flat") {
    const auto seq = [](double n) { return qv::MixedMeasure::density(centered_normal(n)); };
    const qv::TestFunctionFamily fam = qv::TestFunctionFamily::for_domain(Domain1D::real_line());
    const qv::QVagueVerdict v = qv::check_qvague(
        seq, indices, qv::MixedMeasure::lebesgue(Domain1D::real_line()), fam);
    append_verdict_block(os, p.case_name, "lebesgue", v, indices);
  } else if (p.case_name == "lindley_prior") {
    const auto seq = [](double n) {
      return qv::MixedMeasure::mixture({{0.0, 0.5}}, centered_normal(n).scaled(0.5));
    };
    const qv::TestFunctionFamily fam =
        qv::TestFunctionFamily::for_domain(Domain1D::real_line(), {0.0});
    const qv::QVagueVerdict right =
        qv::check_qvague(seq, indices, qv::MixedMeasure::point_mass(0.0), fam);
    append_verdict_block(os, p.case_name, "point_mass_0", right, indices);
    const qv::MixedMeasure wrong = qv::MixedMeasure::mixture(
        {{0.0, 0.5}}, improper::Kernel::of("Lebesgue measure", {"t", Domain1D::real_line()},
                                           [](double) { return 1.0; }));
    const qv::QVagueVerdict miss = qv::check_qvague(seq, indices, wrong, fam);
    append_verdict_block(os, p.case_name, "half_atom_plus_lebesgue", miss, indices);
  } else {
    throw RunFailure("unknown case '" + p.case_name + "'");
  }

  write_text_file(p.out, os.str());
  write_manifest(p.manifest.empty() ? default_manifest_path(p.out) : p.manifest,
                 qvague_manifest(p));
}

// ---------------------------------------------------------------------------
// igmrf

struct IgmrfParams {
  int n = 100;
  double kappa = 1.0;
  double mu = 0.0;
  int samples = 10;
  std::uint64_t seed = 1;
  std::string out = "igmrf.csv";
  std::string manifest;
};

json igmrf_manifest(const IgmrfParams& p) {
  return json{{"subcommand", "igmrf"},
              {"parameters",
               {{"n", p.n}, {"kappa", p.kappa}, {"mu", p.mu}, {"samples", p.samples}}},
              {"output_path", p.out},
              {"seed", p.seed}};
}

void run_igmrf(const IgmrfParams& p) {
  if (p.samples < 1) throw RunFailure("at least one sample is required");
  std::vector<Eigen::VectorXd> draws;
  draws.reserve(static_cast<std::size_t>(p.samples));
  for (int s = 0; s < p.samples; ++s)
    draws.push_back(improper::igmrf::sample_given_mean(
        p.n, p.kappa, p.mu, p.seed + static_cast<std::uint64_t>(s)));

  std::ostringstream os;
  improper::igmrf::write_samples_csv(draws, os);
  write_text_file(p.out, os.str());

  // Summary sidecar: one row per sample; the trailing row with sample_id 0
  // aggregates (mean of sample means, mean quadratic form).
  std::ostringstream ss;
  ss << "sample_id,mean,quad_form\n";
  double mean_acc = 0.0, quad_acc = 0.0;
  for (std::size_t s = 0; s < draws.size(); ++s) {
    const double m = draws[s].mean();
    const double q = improper::igmrf::increment_quadratic_form(draws[s]);
    mean_acc += m;
    quad_acc += q;
    improper::csv::write_row(ss, static_cast<std::int64_t>(s + 1), m, q);
  }
  improper::csv::write_row(ss, static_cast<std::int64_t>(0), mean_acc / draws.size(),
                           quad_acc / draws.size());
  write_text_file(p.out + ".summary.csv", ss.str());
  write_manifest(p.manifest.empty() ? default_manifest_path(p.out) : p.manifest,
                 igmrf_manifest(p));
}

// ---------------------------------------------------------------------------
// rerun

void run_from_manifest(const std::string& manifest_path) {
  std::ifstream is(manifest_path);
  if (!is) throw RunFailure("cannot read manifest '" + manifest_path + "'");
  json m;
  try {
    is >> m;
  } catch (const json::exception& e) {
    throw RunFailure("manifest '" + manifest_path + "' is not valid JSON: " + e.what());
  }
  const std::string sub = m.at("subcommand").get<std::string>();
  const json& prm = m.at("parameters");

  if (sub == "stone-figure") {
    StoneParams p;
    p.z = prm.at("z").get<double>();
    p.M = prm.at("M").get<double>();
    p.xs = prm.at("x").get<std::vector<double>>();
    p.prior = prm.at("prior").get<std::string>();
    p.out = m.at("output_path").get<std::string>();
    p.manifest = manifest_path;
    run_stone(p);
  } else if (sub == "gibbs") {
    GibbsParams p;
    p.y = prm.at("y").get<double>();
    p.iters = prm.at("iters").get<int>();
    p.prior = prm.at("prior").get<std::string>();
    p.tau2 = prm.at("tau2").get<double>();
    p.kappa2 = prm.at("kappa2").get<double>();
    p.seed = m.at("seed").get<std::uint64_t>();
    p.out = m.at("output_path").get<std::string>();
    p.manifest = manifest_path;
    run_gibbs_cmd(p);
  } else if (sub == "lindley") {
    LindleyParams p;
    p.xs = prm.at("x").get<std::vector<double>>();
    p.ns = prm.at("n").get<std::vector<double>>();
    p.out = m.at("output_path").get<std::string>();
    p.manifest = manifest_path;
    run_lindley(p);
  } else if (sub == "qvague-demo") {
    QvagueParams p;
    p.case_name = prm.at("case").get<std::string>();
    p.out = m.at("output_path").get<std::string>();
    p.manifest = manifest_path;
    run_qvague(p);
  } else if (sub == "igmrf") {
    IgmrfParams p;
    p.n = prm.at("n").get<int>();
    p.kappa = prm.at("kappa").get<double>();
    p.mu = prm.at("mu").get<double>();
    p.samples = prm.at("samples").get<int>();
    p.seed = m.at("seed").get<std::uint64_t>();
    p.out = m.at("output_path").get<std::string>();
    p.manifest = manifest_path;
    run_igmrf(p);
  } else {
    throw RunFailure("manifest names unknown subcommand '" + sub + "'");
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "Improper-distribution toolkit: figure and table reproduction as CSV.\n"
      "Each run writes its outputs plus a JSON manifest (default <out>.manifest.json);\n"
      "`rerun --manifest <path>` replays a manifest byte-for-byte."};
  app.require_subcommand(1);

  StoneParams stone;
  CLI::App* stone_cmd = app.add_subcommand(
      "stone-figure",
      "Exponential-rates posterior comparison on the 2000-point grid over (0, 10]: "
      "truncated-kernel posteriors at two x values, the (x,z)-route, and the z-route. "
      "Columns are renormalized to unit mass on the grid domain.");
  stone_cmd->add_option("--z", stone.z, "Observed ratio z")->capture_default_str();
  stone_cmd->add_option("--M", stone.M, "Truncation point of the uniform scale kernel")
      ->capture_default_str();
  stone_cmd
      ->add_option("--x", stone.xs,
                   "Exactly two x values for the truncated-posterior columns")
      ->expected(2);
  stone_cmd->add_option("--prior", stone.prior, "Rate prior: exp or recip")
      ->check(CLI::IsMember({"exp", "recip"}))
      ->capture_default_str();
  stone_cmd->add_option("--out", stone.out, "Output CSV path")->capture_default_str();
  stone_cmd->add_option("--manifest", stone.manifest,
                        "Manifest path (default <out>.manifest.json)");

  GibbsParams gibbs;
  CLI::App* gibbs_cmd = app.add_subcommand(
      "gibbs",
      "Two-parameter normal-mean Gibbs chain with trace CSV and a diagnostics sidecar "
      "(<out>.diagnostics.csv: drift slope over mean-squared-displacement lags, "
      "sum-series KS test).");
  gibbs_cmd->add_option("--y", gibbs.y, "Observed value")->capture_default_str();
  gibbs_cmd->add_option("--iters", gibbs.iters, "Number of sweeps")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  gibbs_cmd->add_option("--seed", gibbs.seed, "RNG seed")->capture_default_str();
  gibbs_cmd->add_option("--prior", gibbs.prior, "flat or gaussian")
      ->check(CLI::IsMember({"flat", "gaussian"}))
      ->capture_default_str();
  gibbs_cmd->add_option("--tau2", gibbs.tau2, "Gaussian prior variance for theta1")
      ->capture_default_str();
  gibbs_cmd->add_option("--kappa2", gibbs.kappa2, "Gaussian prior variance for theta2")
      ->capture_default_str();
  gibbs_cmd->add_option("--out", gibbs.out, "Output CSV path")->capture_default_str();
  gibbs_cmd->add_option("--manifest", gibbs.manifest,
                        "Manifest path (default <out>.manifest.json)");

  LindleyParams lindley;
  CLI::App* lindley_cmd = app.add_subcommand(
      "lindley",
      "Point-null posterior probabilities: proper prior vs the improper-limit recipe, "
      "one row per (x, n) pair.");
  lindley_cmd->add_option("--x", lindley.xs, "Observation values")->expected(1, -1);
  lindley_cmd->add_option("--n", lindley.ns, "Prior spread values (must be > 0)")
      ->expected(1, -1);
  lindley_cmd->add_option("--out", lindley.out, "Output CSV path")->capture_default_str();
  lindley_cmd->add_option("--manifest", lindley.manifest,
                          "Manifest path (default <out>.manifest.json)");

  QvagueParams qvague;
  CLI::App* qvague_cmd = app.add_subcommand(
      "qvague-demo",
      "Scaled-convergence certificates along indices {10, 100, 1000, 10000}: per-index "
      "scale and worst error, then a verdict line per candidate.");
  qvague_cmd->add_option("case", qvague.case_name, "One of: hM, gauss_flat, lindley_prior")
      ->required()
      ->check(CLI::IsMember({"hM", "gauss_flat", "lindley_prior"}));
  qvague_cmd->add_option("--out", qvague.out, "Output CSV path")->capture_default_str();
  qvague_cmd->add_option("--manifest", qvague.manifest,
                         "Manifest path (default <out>.manifest.json)");

  IgmrfParams igmrf;
  CLI::App* igmrf_cmd = app.add_subcommand(
      "igmrf",
      "Random-walk field samples conditioned on their mean, long-format CSV "
      "(sample_id,i,x_i) plus a summary sidecar (<out>.summary.csv; trailing row with "
      "sample_id 0 aggregates).");
  igmrf_cmd->add_option("--n", igmrf.n, "Number of sites (>= 2)")->capture_default_str();
  igmrf_cmd->add_option("--kappa", igmrf.kappa, "Increment precision")->capture_default_str();
  igmrf_cmd->add_option("--mu", igmrf.mu, "Conditioned sample mean")->capture_default_str();
  igmrf_cmd->add_option("--samples", igmrf.samples, "Number of samples")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  igmrf_cmd->add_option("--seed", igmrf.seed, "RNG seed (sample s uses seed + s)")
      ->capture_default_str();
  igmrf_cmd->add_option("--out", igmrf.out, "Output CSV path")->capture_default_str();
  igmrf_cmd->add_option("--manifest", igmrf.manifest,
                        "Manifest path (default <out>.manifest.json)");

  std::string rerun_manifest;
  CLI::App* rerun_cmd =
      app.add_subcommand("rerun", "Replay a previously written manifest byte-for-byte.");
  rerun_cmd->add_option("--manifest", rerun_manifest, "Manifest to replay")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);  // prints help, exit code 0
  } catch (const CLI::ParseError& e) {
    std::cerr << e.what() << "\n";
    return 2;
  }

  try {
    if (app.got_subcommand(stone_cmd)) run_stone(stone);
    if (app.got_subcommand(gibbs_cmd)) run_gibbs_cmd(gibbs);
    if (app.got_subcommand(lindley_cmd)) run_lindley(lindley);
    if (app.got_subcommand(qvague_cmd)) run_qvague(qvague);
    if (app.got_subcommand(igmrf_cmd)) run_igmrf(igmrf);
    if (app.got_subcommand(rerun_cmd)) run_from_manifest(rerun_manifest);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
