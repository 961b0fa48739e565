#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "mrf/model.hpp"
#include "mrf/reconstruct.hpp"

namespace mrf {

/// Builds a model from a generator spec, e.g.
///   {"generator": "cycle", "n": 4, "beta": 1.0}
///   {"generator": "random", "n": 8, "d": 3, "beta_min": 0.3, "beta_max": 1.0, "seed": 5}
///   {"file": "model.json"}
/// Generators: path, cycle, cube (dim), tree, random, independent, parity.
Model model_from_spec(const nlohmann::json& spec);

struct ExperimentConfig {
  nlohmann::json model_spec;
  bool exact_estimator = false;
  std::vector<int> k_values;
  std::string sampler = "exact";  // exact | gibbs
  int burn_in = 1000;
  int thinning = 10;
  Algorithm algorithm = Algorithm::ctp;
  int d = 1;
  std::optional<double> epsilon;  // measured from the model when absent
  std::optional<double> delta;
  std::optional<double> kappa;
  double c1 = 1.0;
  int trials = 1;
  double noise_q = 0.0;
  std::vector<Vertex> hidden;  // hidden vertices; d is then the degree bound d'
  std::uint64_t seed = 1;
  int jobs = 1;
  bool record_timing = true;
  std::string output;

  /// Throws InputError on missing or inconsistent fields.
  static ExperimentConfig from_json(const nlohmann::json& j);
  nlohmann::json to_json() const;
};

struct CellResult {
  int k = 0;  // 0 for the exact estimator
  int trial = 0;
  bool success = false;
  double precision = 0.0;
  double recall = 0.0;
  double runtime_ms = 0.0;
  std::string error;
};

struct CurvePoint {
  int k = 0;
  double success_rate = 0.0;
  double mean_precision = 0.0;
  double mean_recall = 0.0;
  double mean_runtime_ms = 0.0;
};

struct ExperimentReport {
  ExperimentConfig config;
  double epsilon = 0.0;
  double delta = 0.0;
  bool measured = false;  // (epsilon, delta) came from the exact condition check
  /// Markov leakage of the observed distribution at the measured point;
  /// nonzero only under noise, where epsilon = signal + leakage.
  double leakage = 0.0;
  nlohmann::json bounds;
  std::vector<CellResult> cells;  // ordered by (k index, trial)
  std::vector<CurvePoint> curve;

  nlohmann::json to_json() const;
  std::string curve_csv() const;
};

ExperimentReport run_experiment(const ExperimentConfig& config);

}  // namespace mrf
