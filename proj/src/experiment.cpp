#include "mrf/experiment.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <sstream>

#include "mrf/bounds.hpp"
#include "mrf/conditions.hpp"
#include "mrf/errors.hpp"
#include "mrf/hidden.hpp"
#include "mrf/model_io.hpp"
#include "mrf/oracle.hpp"
#include "mrf/parallel.hpp"
#include "mrf/random.hpp"
#include "mrf/sampler.hpp"

namespace mrf {

using nlohmann::json;

namespace {

template <class T>
T field(const json& j, const char* key, T fallback) {
  if (!j.contains(key) || j[key].is_null()) return fallback;
  try {
    return j[key].get<T>();
  } catch (const json::exception&) {
    throw InputError(std::string("config: field '") + key + "' has the wrong type");
  }
}

template <class T>
T required(const json& j, const char* key) {
  if (!j.contains(key)) throw InputError(std::string("config: missing field '") + key + "'");
  return field<T>(j, key, T{});
}

Model ising_for(const Graph& g, const json& spec) {
  if (spec.contains("beta")) return ising_on_graph(g, required<double>(spec, "beta"));
  const double lo = required<double>(spec, "beta_min");
  const double hi = required<double>(spec, "beta_max");
  return random_ising(g, lo, hi, field<std::uint64_t>(spec, "seed", 1),
                      field<double>(spec, "negative_fraction", 0.0));
}

std::optional<double> optional_number(const json& j, const char* key) {
  if (!j.contains(key) || j[key].is_null()) return std::nullopt;
  return field<double>(j, key, 0.0);
}

/// Observed graph a reconstruction should output when `hidden` vertices are
/// unobserved: the induced graph plus a clique on each hidden neighbourhood.
Graph observed_target(const Graph& g, const std::vector<Vertex>& observed, const std::vector<Vertex>& hidden) {
  std::vector<int> label(g.n(), -1);
  for (std::size_t i = 0; i < observed.size(); ++i) label[observed[i]] = static_cast<int>(i);
  std::vector<Edge> edges = g.induced(observed).edges();
  for (Vertex h : hidden) {
    const auto& nb = g.neighbors(h);
    for (std::size_t a = 0; a < nb.size(); ++a) {
      for (std::size_t b = a + 1; b < nb.size(); ++b) {
        if (label[nb[a]] < 0 || label[nb[b]] < 0) continue;
        edges.push_back(make_edge(label[nb[a]], label[nb[b]]));
      }
    }
  }
  std::sort(edges.begin(), edges.end());
  edges.erase(std::unique(edges.begin(), edges.end()), edges.end());
  return Graph(static_cast<int>(observed.size()), edges);
}

std::string format_number(double x) {
  std::ostringstream out;
  out.precision(10);
  out << x;
  return out.str();
}

}  // namespace

Model model_from_spec(const json& spec) {
  if (!spec.is_object()) throw InputError("model spec must be an object");
  if (spec.contains("file")) return read_model(required<std::string>(spec, "file"));
  const std::string gen = required<std::string>(spec, "generator");
  if (gen == "path") return ising_for(path_graph(required<int>(spec, "n")), spec);
  if (gen == "cycle") return ising_for(cycle_graph(required<int>(spec, "n")), spec);
  if (gen == "cube") return ising_for(hypercube_graph(required<int>(spec, "dim")), spec);
  if (gen == "tree") {
    return ising_for(random_tree(required<int>(spec, "n"), field<std::uint64_t>(spec, "graph_seed", 1)), spec);
  }
  if (gen == "random") {
    const Graph g = random_bounded_graph(required<int>(spec, "n"), required<int>(spec, "d"),
                                         field<std::uint64_t>(spec, "graph_seed", 1));
    return ising_for(g, spec);
  }
  if (gen == "independent") return Model::from_potentials(required<int>(spec, "n"), 2, {});
  if (gen == "parity") {
    // One potential on all n vertices: lambda where the parity is even.
    const int n = required<int>(spec, "n");
    const double lambda = required<double>(spec, "lambda");
    if (n < 2 || n > 20) throw InputError("parity generator: n must be in [2, 20]");
    Potential p;
    for (Vertex v = 0; v < n; ++v) p.clique.push_back(v);
    p.table.resize(std::size_t{1} << n);
    for (std::size_t x = 0; x < p.table.size(); ++x) p.table[x] = __builtin_popcountll(x) % 2 == 0 ? lambda : 0.0;
    return Model::from_potentials(n, 2, {std::move(p)});
  }
  throw InputError("unknown model generator '" + gen + "'");
}

ExperimentConfig ExperimentConfig::from_json(const json& j) {
  if (!j.is_object()) throw InputError("config must be a JSON object");
  ExperimentConfig c;
  c.model_spec = required<json>(j, "model");
  const std::string est = field<std::string>(j, "estimator", "samples");
  if (est != "exact" && est != "samples") throw InputError("config: estimator must be exact or samples");
  c.exact_estimator = est == "exact";
  if (j.contains("k")) {
    c.k_values = j["k"].is_array() ? field<std::vector<int>>(j, "k", {}) : std::vector<int>{field<int>(j, "k", 0)};
  }
  c.sampler = field<std::string>(j, "sampler", "exact");
  if (c.sampler != "exact" && c.sampler != "gibbs") throw InputError("config: sampler must be exact or gibbs");
  c.burn_in = field<int>(j, "burn_in", 1000);
  c.thinning = field<int>(j, "thinning", 10);
  c.algorithm = algorithm_from_string(field<std::string>(j, "algorithm", "ctp"));
  c.d = required<int>(j, "d");
  c.epsilon = optional_number(j, "epsilon");
  c.delta = optional_number(j, "delta");
  c.kappa = optional_number(j, "kappa");
  c.c1 = field<double>(j, "c1", 1.0);
  c.trials = field<int>(j, "trials", 1);
  c.noise_q = field<double>(j, "noise_q", 0.0);
  c.hidden = field<std::vector<Vertex>>(j, "hidden", {});
  c.seed = field<std::uint64_t>(j, "seed", 1);
  c.jobs = field<int>(j, "jobs", 1);
  c.record_timing = field<bool>(j, "record_timing", true);
  c.output = field<std::string>(j, "output", "");

  if (c.trials < 1) throw InputError("config: trials must be >= 1");
  if (c.d < 1) throw InputError("config: d must be >= 1");
  if (!c.exact_estimator) {
    if (c.k_values.empty()) throw InputError("config: k list must be non-empty for the samples estimator");
    for (int k : c.k_values) {
      if (k < 1) throw InputError("config: every k must be >= 1");
    }
  }
  if (c.exact_estimator && c.noise_q > 0.0) throw InputError("config: noise requires the samples estimator");
  if (!(c.noise_q >= 0.0 && c.noise_q < 1.0)) throw InputError("config: noise_q must be in [0, 1)");
  if (c.algorithm == Algorithm::decay && !c.kappa) throw InputError("config: the decay algorithm needs kappa");
  if (c.kappa) c.algorithm = Algorithm::decay;
  if (!c.hidden.empty() && c.algorithm == Algorithm::ctp) c.algorithm = Algorithm::general;
  return c;
}

json ExperimentConfig::to_json() const {
  json j = {{"model", model_spec},
            {"estimator", exact_estimator ? "exact" : "samples"},
            {"k", k_values},
            {"sampler", sampler},
            {"burn_in", burn_in},
            {"thinning", thinning},
            {"algorithm", to_string(algorithm)},
            {"d", d},
            {"c1", c1},
            {"trials", trials},
            {"noise_q", noise_q},
            {"hidden", hidden},
            {"seed", seed},
            {"record_timing", record_timing}};
  j["epsilon"] = epsilon ? json(*epsilon) : json(nullptr);
  j["delta"] = delta ? json(*delta) : json(nullptr);
  j["kappa"] = kappa ? json(*kappa) : json(nullptr);
  return j;
}

json ExperimentReport::to_json() const {
  json cell_list = json::array();
  for (const auto& c : cells) {
    json j = {{"k", c.k},
              {"trial", c.trial},
              {"success", c.success},
              {"precision", c.precision},
              {"recall", c.recall},
              {"runtime_ms", c.runtime_ms}};
    if (!c.error.empty()) j["error"] = c.error;
    cell_list.push_back(std::move(j));
  }
  json curve_list = json::array();
  for (const auto& p : curve) {
    curve_list.push_back({{"k", p.k},
                          {"success_rate", p.success_rate},
                          {"mean_precision", p.mean_precision},
                          {"mean_recall", p.mean_recall},
                          {"mean_runtime_ms", p.mean_runtime_ms}});
  }
  return {{"config", config.to_json()},
          {"epsilon", epsilon},
          {"delta", delta},
          {"measured", measured},
          {"leakage", leakage},
          {"bounds", bounds},
          {"cells", std::move(cell_list)},
          {"curve", std::move(curve_list)}};
}

std::string ExperimentReport::curve_csv() const {
  std::string out = "k,success_rate,mean_precision,mean_recall,mean_runtime_ms\n";
  for (const auto& p : curve) {
    out += std::to_string(p.k) + "," + format_number(p.success_rate) + "," + format_number(p.mean_precision) +
           "," + format_number(p.mean_recall) + "," + format_number(p.mean_runtime_ms) + "\n";
  }
  return out;
}

ExperimentReport run_experiment(const ExperimentConfig& config) {
  ExperimentReport report;
  report.config = config;
  const Model model = model_from_spec(config.model_spec);
  const Graph& truth = model.graph();
  const bool hidden_mode = !config.hidden.empty();

  std::vector<Vertex> observed;
  for (Vertex v = 0; v < model.n(); ++v) {
    if (std::find(config.hidden.begin(), config.hidden.end(), v) == config.hidden.end()) observed.push_back(v);
  }
  for (Vertex h : config.hidden) {
    if (h < 0 || h >= model.n()) throw InputError("config: hidden vertex out of range");
  }
  const Graph target = hidden_mode ? observed_target(truth, observed, config.hidden) : truth;
  const int alg_d = hidden_mode ? 2 * config.d : config.d;

  const bool need_epsilon = !config.epsilon || !config.delta;
  const bool need_dist = config.exact_estimator || config.sampler == "exact" || need_epsilon;
  DistTable dist;
  if (need_dist) dist = joint_distribution(model);
  DistTable observed_dist = hidden_mode && need_dist ? marginalize(dist, observed) : DistTable{};
  const DistTable& view = hidden_mode ? observed_dist : dist;

  report.epsilon = config.epsilon.value_or(0.0);
  report.delta = config.delta.value_or(0.0);
  if (need_epsilon) {
    // Thresholds are measured on the distribution the algorithm observes. With
    // noise that law is no longer Markov on the target, so wrong candidates
    // keep a residual statistic (the leakage); epsilon / 2 is then placed
    // midway between the leakage and the signal, which is epsilon_star itself
    // when there is no noise.
    const bool noisy = config.noise_q > 0.0;
    const DistTable observed_law = noisy ? noisy_distribution(view, NoiseChannel{config.noise_q, {}}) : DistTable{};
    const DistTable& law = noisy ? observed_law : view;
    const ConditionReport cr = config.algorithm == Algorithm::ctp
                                   ? verify_two_point_conditions(law, target, alg_d)
                                   : verify_neighbor_conditions(law, target, alg_d);
    if (!cr.holds) {
      throw InputError("experiment: the model fails the " + to_string(cr.kind) +
                       " condition; supply epsilon and delta explicitly");
    }
    double epsilon = cr.epsilon_star;
    if (noisy) {
      ReconConfig probe;
      probe.d = alg_d;
      probe.epsilon = cr.epsilon_star;
      probe.delta = config.delta.value_or(cr.delta_star);
      report.leakage = markov_leakage(Estimator::exact(law), target, config.algorithm, probe);
      if (!(report.leakage < cr.epsilon_star)) {
        throw InputError("experiment: noise leakage " + std::to_string(report.leakage) +
                         " reaches the signal " + std::to_string(cr.epsilon_star) +
                         "; supply epsilon and delta explicitly");
      }
      epsilon += report.leakage;
    }
    if (!config.epsilon) report.epsilon = epsilon;
    if (!config.delta) report.delta = cr.delta_star;
    report.measured = true;
  }

  ReconConfig rc;
  rc.d = alg_d;
  rc.epsilon = report.epsilon;
  rc.delta = report.delta;
  rc.kappa = config.kappa;
  rc.c1 = config.c1;
  rc.validate();

  const int n_obs = static_cast<int>(observed.size());
  const SampleRequirement req = config.algorithm == Algorithm::ctp
                                    ? required_samples_thm2(rc.epsilon, rc.delta, alg_d, std::max(n_obs, 2), rc.c1)
                                    : required_samples_thm3(rc.epsilon, rc.delta, alg_d, std::max(n_obs, 2), rc.c1);
  report.bounds = {{"formula_samples", req.samples}, {"failure_bound", req.failure_bound}};

  const std::vector<int> ks = config.exact_estimator ? std::vector<int>{0} : config.k_values;
  report.cells.resize(ks.size() * static_cast<std::size_t>(config.trials));
  parallel_for(report.cells.size(), config.jobs, [&](std::size_t index) {
    const std::size_t ki = index / config.trials;
    const int trial = static_cast<int>(index % config.trials);
    CellResult& cell = report.cells[index];
    cell.k = ks[ki];
    cell.trial = trial;
    try {
      const std::uint64_t cell_seed = derive_seed(config.seed, ki, static_cast<std::uint64_t>(trial));
      std::optional<Estimator> est;
      if (config.exact_estimator) {
        est.emplace(Estimator::exact(view));
      } else {
        SampleMatrix samples = config.sampler == "exact"
                                   ? sample_exact(dist, cell.k, cell_seed)
                                   : gibbs_sample(model, cell.k, cell_seed, {config.burn_in, config.thinning, 1});
        if (config.noise_q > 0.0) {
          samples = apply_noise(samples, NoiseChannel{config.noise_q, {}}, derive_seed(cell_seed, 0x6e6f697365));
        }
        if (hidden_mode) samples = restrict_columns(samples, observed);
        est.emplace(Estimator::empirical(samples));
      }
      const auto start = std::chrono::steady_clock::now();
      if (hidden_mode) {
        ReconResult observed_result = reconstruct_general(*est, rc);
        const EdgeScore s = score_edges(target, observed_result.graph);
        cell.precision = s.precision;
        cell.recall = s.recall;
        try {
          const HiddenRecovery rec = recover_hidden(observed_result.graph, config.d);
          cell.success = isomorphic(rec.graph, truth);
        } catch (const HiddenRecoveryError& e) {
          cell.error = e.what();
        }
      } else {
        const ReconResult result = reconstruct(*est, config.algorithm, rc);
        const EdgeScore s = score_edges(truth, result.graph);
        cell.precision = s.precision;
        cell.recall = s.recall;
        cell.success = result.graph == truth;
      }
      const auto stop = std::chrono::steady_clock::now();
      if (config.record_timing) {
        cell.runtime_ms = std::chrono::duration<double, std::milli>(stop - start).count();
      }
    } catch (const std::exception& e) {
      cell.success = false;
      cell.error = e.what();
    }
  });

  for (std::size_t ki = 0; ki < ks.size(); ++ki) {
    CurvePoint p;
    p.k = ks[ki];
    for (int t = 0; t < config.trials; ++t) {
      const CellResult& c = report.cells[ki * config.trials + t];
      p.success_rate += c.success;
      p.mean_precision += c.precision;
      p.mean_recall += c.recall;
      p.mean_runtime_ms += c.runtime_ms;
    }
    p.success_rate /= config.trials;
    p.mean_precision /= config.trials;
    p.mean_recall /= config.trials;
    p.mean_runtime_ms /= config.trials;
    report.curve.push_back(p);
  }

  // Calibrated sample count: the constant that reproduces the smallest k in
  // the grid reaching the target success rate.
  const double target_rate = std::max(0.9, 1.0 - req.failure_bound);
  report.bounds["calibration_target"] = target_rate;
  report.bounds["calibrated_constant"] = nullptr;
  report.bounds["calibrated_samples"] = nullptr;
  if (!config.exact_estimator) {
    for (const auto& p : report.curve) {
      if (p.success_rate >= target_rate) {
        const double c = calibrate_constant(p.k, alg_d, std::max(n_obs, 2), rc.c1);
        report.bounds["calibrated_constant"] = c;
        report.bounds["calibrated_samples"] = calibrated_samples(c, alg_d, std::max(n_obs, 2), rc.c1);
        break;
      }
    }
  }
  return report;
}

}  // namespace mrf
