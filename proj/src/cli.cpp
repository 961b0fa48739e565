#include "mrf/cli.hpp"

#include <CLI11.hpp>

#include <cmath>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <optional>
#include <sstream>

#include "mrf/bounds.hpp"
#include "mrf/conditions.hpp"
#include "mrf/errors.hpp"
#include "mrf/estimator.hpp"
#include "mrf/experiment.hpp"
#include "mrf/hidden.hpp"
#include "mrf/model_io.hpp"
#include "mrf/oracle.hpp"
#include "mrf/random.hpp"
#include "mrf/reconstruct.hpp"
#include "mrf/sampler.hpp"

namespace mrf {

using nlohmann::json;

namespace {

/// Failure of the reconstruction stage; maps to exit code 3.
struct ReconstructionFailed : std::runtime_error {
  using std::runtime_error::runtime_error;
};

void emit(const std::string& text, const std::string& path, std::ostream& out) {
  if (path.empty() || path == "-") {
    out << text;
  } else {
    write_text(path, text);
  }
}

std::string dump(const json& j) { return j.dump(2) + "\n"; }

struct ReconArgs {
  std::string model;
  std::string samples;
  std::string algo = "ctp";
  int d = 1;
  std::optional<double> epsilon;
  std::optional<double> delta;
  std::optional<double> kappa;
  double c1 = 1.0;
  int jobs = 1;
  std::string out;
  std::string edges_csv;
};

void add_threshold_options(CLI::App* cmd, ReconArgs& a) {
  cmd->add_option("--epsilon", a.epsilon, "gap threshold (measured from --model when omitted)");
  cmd->add_option("--delta", a.delta, "mass threshold (measured from --model when omitted)");
  cmd->add_option("--c1", a.c1, "confidence exponent C1")->capture_default_str();
  cmd->add_option("--jobs", a.jobs, "worker threads")->capture_default_str();
}

/// Fills in missing (epsilon, delta) from the exact condition check.
void measure_thresholds(const std::optional<DistTable>& dist, const Graph& graph, ConditionKind kind, int d,
                        ReconConfig& rc, const ReconArgs& a) {
  if (a.epsilon && a.delta) return;
  if (!dist) throw InputError("--epsilon and --delta are required without --model");
  const ConditionReport cr = kind == ConditionKind::two_point ? verify_two_point_conditions(*dist, graph, d)
                                                              : verify_neighbor_conditions(*dist, graph, d);
  if (!cr.holds) {
    throw InputError("the model fails the " + to_string(kind) +
                     " condition; pass --epsilon and --delta explicitly");
  }
  if (!a.epsilon) rc.epsilon = cr.epsilon_star;
  if (!a.delta) rc.delta = cr.delta_star;
}

int cmd_sample(const std::string& model_path, int k, const std::string& mode, std::uint64_t seed,
               int burn_in, int thinning, double noise_q, const std::string& out_path, std::ostream& out) {
  const Model model = read_model(model_path);
  SampleMatrix samples = mode == "exact"
                             ? sample_exact(joint_distribution(model), k, seed)
                             : gibbs_sample(model, k, seed, GibbsOptions{burn_in, thinning, 1});
  if (noise_q > 0.0) samples = apply_noise(samples, NoiseChannel{noise_q, {}}, derive_seed(seed, 0x6e6f697365));
  emit(samples_to_csv(samples), out_path, out);
  return kExitOk;
}

int cmd_reconstruct(const ReconArgs& a, std::ostream& out, std::ostream& err) {
  if (a.model.empty() && a.samples.empty()) throw InputError("reconstruct needs --model or --samples");
  Algorithm algo = algorithm_from_string(a.algo);
  if (a.kappa) algo = Algorithm::decay;
  if (algo == Algorithm::decay && !a.kappa) throw InputError("the decay algorithm needs --kappa");

  std::optional<Model> model;
  std::optional<DistTable> dist;
  if (!a.model.empty()) {
    model = read_model(a.model);
    dist = joint_distribution(*model);
  }
  std::optional<Estimator> est;
  if (!a.samples.empty()) {
    const SampleMatrix samples = read_samples(a.samples);
    if (model && (samples.n() != model->n() || samples.alphabet() != model->alphabet())) {
      throw InputError("samples (n=" + std::to_string(samples.n()) + ", A=" + std::to_string(samples.alphabet()) +
                       ") do not match the model (n=" + std::to_string(model->n()) +
                       ", A=" + std::to_string(model->alphabet()) + ")");
    }
    est.emplace(Estimator::empirical(samples));
  } else {
    est.emplace(Estimator::exact(*dist));
  }

  ReconConfig rc;
  rc.d = a.d;
  rc.epsilon = a.epsilon.value_or(0.0);
  rc.delta = a.delta.value_or(0.0);
  rc.kappa = a.kappa;
  rc.c1 = a.c1;
  rc.jobs = a.jobs;
  measure_thresholds(dist, model ? model->graph() : Graph(),
                     algo == Algorithm::ctp ? ConditionKind::two_point : ConditionKind::neighbor, a.d, rc, a);

  const ReconResult result = reconstruct(*est, algo, rc);
  emit(dump(result_to_json(result)), a.out, out);
  if (!a.edges_csv.empty()) write_text(a.edges_csv, edges_to_csv(result.graph));
  for (const auto& w : result.warnings) err << "warning: " << w << "\n";
  if (!result.success()) {
    std::ostringstream msg;
    msg << "reconstruction incomplete:";
    for (std::size_t v = 0; v < result.per_vertex.size(); ++v) {
      const auto& o = result.per_vertex[v];
      if (o.failed) msg << " vertex " << v << " (no candidate accepted)";
      if (o.ambiguous) msg << " vertex " << v << " (ambiguous largest set)";
    }
    throw ReconstructionFailed(msg.str());
  }
  return kExitOk;
}

int cmd_verify(const std::string& model_path, int d, const std::string& theorem, const std::string& out_path,
               std::ostream& out, std::ostream& err) {
  const Model model = read_model(model_path);
  ConditionReport report;
  if (theorem == "2") {
    report = verify_thm2_conditions(model, d);
  } else if (theorem == "3") {
    report = verify_thm3_conditions(model, d);
  } else {
    report = verify_hidden_conditions(model, d);
  }
  emit(dump(report_to_json(report)), out_path, out);
  std::ostream& summary = out_path.empty() || out_path == "-" ? err : out;
  summary << "condition=" << to_string(report.kind) << " d=" << d << " holds=" << (report.holds ? "true" : "false")
          << " epsilon_star=" << report.epsilon_star << " delta_star=" << report.delta_star
          << " failures=" << report.failures.size() << "\n";
  return kExitOk;
}

int cmd_experiment(const std::string& config_path, std::optional<int> jobs, std::optional<std::uint64_t> seed,
                   std::string out_path, bool no_timing, std::ostream& out) {
  json j;
  try {
    j = json::parse(read_text(config_path));
  } catch (const json::parse_error& e) {
    throw InputError("config: " + std::string(e.what()));
  }
  ExperimentConfig config = ExperimentConfig::from_json(j);
  if (jobs) config.jobs = *jobs;
  if (seed) config.seed = *seed;
  if (no_timing) config.record_timing = false;
  if (out_path.empty()) out_path = config.output;
  const ExperimentReport report = run_experiment(config);
  emit(dump(report.to_json()), out_path, out);
  if (!out_path.empty() && out_path != "-") {
    std::filesystem::path curve = out_path;
    curve.replace_extension(".csv");
    write_text(curve, report.curve_csv());
  }
  return kExitOk;
}

int cmd_bounds(int n, int d, int alphabet, double epsilon, double delta, double c1, std::optional<double> k,
               const std::string& format, const std::string& out_path, std::ostream& out) {
  json j = bounds_to_json(n, d, alphabet, epsilon, delta, c1);
  if (k) j["error_lower_bound_k"] = {{"k", *k}, {"value", error_lower_bound(n, d, alphabet, *k)}};
  if (format == "json") {
    emit(dump(j), out_path, out);
    return kExitOk;
  }
  std::ostringstream text;
  text << std::setprecision(10);
  text << "n d A epsilon delta c1 thm2_samples thm2_failure thm3_samples thm3_failure log_count_lb count_valid "
          "error_lb_k0";
  if (k) text << " error_lb_k";
  text << "\n"
       << n << " " << d << " " << alphabet << " " << epsilon << " " << delta << " " << c1 << " "
       << j["required_samples_thm2"].get<double>() << " " << j["failure_bound_thm2"].get<double>() << " "
       << j["required_samples_thm3"].get<double>() << " " << j["failure_bound_thm3"].get<double>() << " "
       << j["graph_count_log_lower_bound"].get<double>() << " "
       << (j["graph_count_bound_valid"].get<bool>() ? "yes" : "no") << " "
       << j["error_lower_bound_k0"].get<double>();
  if (k) text << " " << j["error_lower_bound_k"]["value"].get<double>();
  text << "\n";
  emit(text.str(), out_path, out);
  return kExitOk;
}

int cmd_hidden(const ReconArgs& a, const std::vector<Vertex>& hidden, int dprime, std::ostream& out) {
  if (a.model.empty() && a.samples.empty()) throw InputError("hidden needs --model or --samples");
  std::optional<DistTable> observed_dist;
  Graph target;
  if (!a.model.empty()) {
    const Model model = read_model(a.model);
    std::vector<Vertex> observed;
    for (Vertex v = 0; v < model.n(); ++v) {
      if (std::find(hidden.begin(), hidden.end(), v) == hidden.end()) observed.push_back(v);
    }
    for (Vertex h : hidden) {
      if (h < 0 || h >= model.n()) throw InputError("hidden vertex " + std::to_string(h) + " out of range");
    }
    observed_dist = marginalize(joint_distribution(model), observed);
    // The observed distribution is Markov with respect to the induced graph
    // plus a clique on every hidden neighbourhood.
    std::vector<int> label(model.n(), -1);
    for (std::size_t i = 0; i < observed.size(); ++i) label[observed[i]] = static_cast<int>(i);
    std::vector<Edge> edges = model.graph().induced(observed).edges();
    for (Vertex h : hidden) {
      const auto& nb = model.graph().neighbors(h);
      for (std::size_t x = 0; x < nb.size(); ++x) {
        for (std::size_t y = x + 1; y < nb.size(); ++y) {
          if (label[nb[x]] >= 0 && label[nb[y]] >= 0) edges.push_back(make_edge(label[nb[x]], label[nb[y]]));
        }
      }
    }
    std::sort(edges.begin(), edges.end());
    edges.erase(std::unique(edges.begin(), edges.end()), edges.end());
    target = Graph(static_cast<int>(observed.size()), edges);
  }
  std::optional<Estimator> est;
  if (!a.samples.empty()) {
    SampleMatrix samples = read_samples(a.samples);
    if (observed_dist && samples.n() != observed_dist->n) {
      std::vector<Vertex> observed;
      for (Vertex v = 0; v < samples.n(); ++v) {
        if (std::find(hidden.begin(), hidden.end(), v) == hidden.end()) observed.push_back(v);
      }
      samples = restrict_columns(samples, observed);
    }
    if (observed_dist && samples.n() != observed_dist->n) throw InputError("samples do not match the observed vertices");
    est.emplace(Estimator::empirical(samples));
  } else {
    est.emplace(Estimator::exact(*observed_dist));
  }
  ReconConfig rc;
  rc.d = 2 * dprime;
  rc.epsilon = a.epsilon.value_or(0.0);
  rc.delta = a.delta.value_or(0.0);
  rc.c1 = a.c1;
  rc.jobs = a.jobs;
  measure_thresholds(observed_dist, target, ConditionKind::neighbor, rc.d, rc, a);
  const HiddenReconstruction h = reconstruct_with_hidden(*est, dprime, rc);
  emit(dump(hidden_to_json(h)), a.out, out);
  return kExitOk;
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Structure learning for bounded-degree Markov random fields"};
  app.require_subcommand(1);

  // generate
  std::string generator, gen_out;
  std::optional<int> gen_n, gen_dim, gen_d;
  std::optional<double> gen_beta, gen_beta_min, gen_beta_max, gen_lambda;
  std::optional<std::uint64_t> gen_seed;
  auto* gen = app.add_subcommand("generate", "write a model JSON from a built-in generator");
  gen->add_option("--generator", generator, "path | cycle | cube | tree | random | independent | parity")
      ->required()
      ->check(CLI::IsMember({"path", "cycle", "cube", "tree", "random", "independent", "parity"}));
  gen->add_option("--n", gen_n, "number of vertices");
  gen->add_option("--dim", gen_dim, "cube dimension");
  gen->add_option("--d", gen_d, "degree bound (random)");
  gen->add_option("--beta", gen_beta, "coupling on every edge");
  gen->add_option("--beta-min", gen_beta_min, "smallest |coupling| (random couplings)");
  gen->add_option("--beta-max", gen_beta_max, "largest |coupling| (random couplings)");
  gen->add_option("--lambda", gen_lambda, "parity potential strength");
  gen->add_option("--seed", gen_seed, "seed for the graph and couplings");
  gen->add_option("--out", gen_out, "model JSON (default stdout)");

  // sample
  std::string model_path, out_path, mode = "exact";
  int k = 1000, burn_in = 1000, thinning = 10;
  std::uint64_t seed = 1;
  double noise_q = 0.0;
  auto* sample = app.add_subcommand("sample", "draw samples from a model");
  sample->add_option("--model", model_path, "model JSON")->required();
  sample->add_option("--k", k, "number of samples")->capture_default_str();
  sample->add_option("--mode", mode, "exact | gibbs")->check(CLI::IsMember({"exact", "gibbs"}))->capture_default_str();
  sample->add_option("--seed", seed, "random seed")->capture_default_str();
  sample->add_option("--burn-in", burn_in, "Gibbs sweeps before the first sample")->capture_default_str();
  sample->add_option("--thinning", thinning, "Gibbs sweeps between samples")->capture_default_str();
  sample->add_option("--noise-q", noise_q, "symmetric noise probability per site")->capture_default_str();
  sample->add_option("--out", out_path, "output CSV (default stdout)");

  // reconstruct
  ReconArgs ra;
  auto* recon = app.add_subcommand("reconstruct", "recover the graph from samples or an exact model");
  recon->add_option("--model", ra.model, "model JSON (exact probabilities; also used to measure thresholds)");
  recon->add_option("--samples", ra.samples, "samples CSV");
  recon->add_option("--algo", ra.algo, "ctp | general | decay")
      ->check(CLI::IsMember({"ctp", "general", "decay"}))
      ->capture_default_str();
  recon->add_option("--d", ra.d, "maximum degree")->required();
  recon->add_option("--kappa", ra.kappa, "correlation threshold (selects the decay algorithm)");
  add_threshold_options(recon, ra);
  recon->add_option("--out", ra.out, "result JSON (default stdout)");
  recon->add_option("--edges-csv", ra.edges_csv, "also write the edge list as CSV");

  // verify
  std::string theorem = "2";
  int verify_d = 1;
  std::string verify_model, verify_out;
  auto* verify = app.add_subcommand("verify", "check the non-degeneracy conditions against the exact distribution");
  verify->add_option("--model", verify_model, "model JSON")->required();
  verify->add_option("--d", verify_d, "degree parameter")->required();
  verify->add_option("--theorem", theorem, "2 (two-point) | 3 (neighbor) | hidden")
      ->check(CLI::IsMember({"2", "3", "hidden"}))
      ->capture_default_str();
  verify->add_option("--out", verify_out, "report JSON (default stdout)");

  // experiment
  std::string config_path, exp_out;
  std::optional<int> exp_jobs;
  std::optional<std::uint64_t> exp_seed;
  bool no_timing = false;
  auto* experiment = app.add_subcommand("experiment", "run a trials x k grid from a JSON config");
  experiment->add_option("config", config_path, "experiment config JSON")->required();
  experiment->add_option("--jobs", exp_jobs, "worker threads (overrides config)");
  experiment->add_option("--seed", exp_seed, "master seed (overrides config)");
  experiment->add_option("--out", exp_out, "report JSON; the curve CSV is written next to it");
  experiment->add_flag("--no-timing", no_timing, "record zero runtimes so reports are byte-identical");

  // bounds
  int bn = 2, bd = 1, alphabet = 2;
  double beps = 0.1, bdelta = 0.1, bc1 = 1.0;
  std::optional<double> bk;
  std::string format = "text", bounds_out;
  auto* bounds = app.add_subcommand(
      "bounds", "sample-size formulas and information-theoretic lower bounds (natural logarithms)");
  bounds->add_option("--n", bn, "number of vertices")->required();
  bounds->add_option("--d", bd, "maximum degree")->required();
  bounds->add_option("--alphabet", alphabet, "alphabet size")->capture_default_str();
  bounds->add_option("--epsilon", beps, "gap parameter")->capture_default_str();
  bounds->add_option("--delta", bdelta, "mass parameter")->capture_default_str();
  bounds->add_option("--c1", bc1, "confidence exponent C1")->capture_default_str();
  bounds->add_option("--k", bk, "also evaluate the error lower bound at this sample count");
  bounds->add_option("--format", format, "text | json")->check(CLI::IsMember({"text", "json"}))->capture_default_str();
  bounds->add_option("--out", bounds_out, "output file (default stdout)");

  // hidden
  ReconArgs ha;
  std::vector<Vertex> hidden;
  int dprime = 3;
  auto* hid = app.add_subcommand("hidden", "reconstruct with hidden vertices and contract their cliques");
  hid->add_option("--model", ha.model, "model JSON (exact marginal of the observed vertices)");
  hid->add_option("--samples", ha.samples, "samples CSV (hidden columns are dropped when a model is given)");
  hid->add_option("--hidden", hidden, "hidden vertices of the model")->delimiter(',');
  hid->add_option("--dprime", dprime, "maximum degree of the full graph")->capture_default_str();
  add_threshold_options(hid, ha);
  hid->add_option("--out", ha.out, "result JSON (default stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n";
    return kExitInput;
  }

  try {
    if (*gen) {
      json spec = {{"generator", generator}};
      if (gen_n) spec["n"] = *gen_n;
      if (gen_dim) spec["dim"] = *gen_dim;
      if (gen_d) spec["d"] = *gen_d;
      if (gen_beta) spec["beta"] = *gen_beta;
      if (gen_beta_min) spec["beta_min"] = *gen_beta_min;
      if (gen_beta_max) spec["beta_max"] = *gen_beta_max;
      if (gen_lambda) spec["lambda"] = *gen_lambda;
      if (gen_seed) {
        spec["seed"] = *gen_seed;
        spec["graph_seed"] = *gen_seed;
      }
      emit(dump(model_to_json(model_from_spec(spec))), gen_out, out);
      return kExitOk;
    }
    if (*sample) return cmd_sample(model_path, k, mode, seed, burn_in, thinning, noise_q, out_path, out);
    if (*recon) return cmd_reconstruct(ra, out, err);
    if (*verify) return cmd_verify(verify_model, verify_d, theorem, verify_out, out, err);
    if (*experiment) return cmd_experiment(config_path, exp_jobs, exp_seed, exp_out, no_timing, out);
    if (*bounds) return cmd_bounds(bn, bd, alphabet, beps, bdelta, bc1, bk, format, bounds_out, out);
    if (*hid) return cmd_hidden(ha, hidden, dprime, out);
  } catch (const CapExceeded& e) {
    err << "error: " << e.what() << "\n";
    return kExitCap;
  } catch (const ReconstructionFailed& e) {
    err << "error: " << e.what() << "\n";
    return kExitReconstruct;
  } catch (const HiddenRecoveryError& e) {
    err << "error: " << e.what() << "\n";
    return kExitReconstruct;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitInput;
  }
  return kExitInput;
}

}  // namespace mrf
