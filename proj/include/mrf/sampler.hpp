#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include "mrf/model.hpp"
#include "mrf/oracle.hpp"

namespace mrf {

/// k x n matrix of alphabet symbols, row-major. Immutable once built.
class SampleMatrix {
 public:
  SampleMatrix() = default;
  /// Throws InputError if data.size() != k*n or a symbol is outside [0, A).
  SampleMatrix(int k, int n, int alphabet, std::vector<std::uint8_t> data, std::uint64_t seed,
               std::string provenance);

  int k() const { return k_; }
  int n() const { return n_; }
  int alphabet() const { return alphabet_; }
  std::uint64_t seed() const { return seed_; }
  /// "exact", "gibbs(burn_in=..,thinning=..)", "noisy(q=..,sites=..;base=..)", ...
  const std::string& provenance() const { return provenance_; }

  Symbol at(int row, int col) const { return data_[static_cast<std::size_t>(row) * n_ + col]; }
  std::span<const std::uint8_t> row(int r) const {
    return {data_.data() + static_cast<std::size_t>(r) * n_, static_cast<std::size_t>(n_)};
  }
  const std::vector<std::uint8_t>& data() const { return data_; }

  bool operator==(const SampleMatrix& o) const {
    return k_ == o.k_ && n_ == o.n_ && alphabet_ == o.alphabet_ && data_ == o.data_;
  }

 private:
  int k_ = 0;
  int n_ = 0;
  int alphabet_ = 2;
  std::vector<std::uint8_t> data_;
  std::uint64_t seed_ = 0;
  std::string provenance_;
};

/// Each listed site (all sites when `sites` is empty) is independently
/// replaced, with probability flip_prob, by a uniform draw among the other
/// A-1 symbols. For A = 2 this is the binary symmetric channel.
struct NoiseChannel {
  double flip_prob = 0.0;
  std::vector<Vertex> sites;

  std::string describe() const;
};

/// k iid draws by inverse CDF over the enumerated table.
SampleMatrix sample_exact(const DistTable& dist, int k, std::uint64_t seed);

struct GibbsOptions {
  int burn_in = 1000;   // sweeps discarded before the first sample
  int thinning = 10;    // sweeps between consecutive samples
  int chains = 1;       // independent chains; row r comes from chain r % chains
};

/// Systematic-scan Gibbs sampler (sites 0..n-1 each sweep). Throws
/// SamplerDeadlock when some site has no symbol of positive weight.
SampleMatrix gibbs_sample(const Model& model, int k, std::uint64_t seed,
                          const GibbsOptions& options = {});

/// Independent per-site corruption. Randomness is keyed by (seed, row, site)
/// so channels on disjoint site sets commute.
SampleMatrix apply_noise(const SampleMatrix& samples, const NoiseChannel& channel,
                         std::uint64_t seed);

/// Exact distribution of the channel output when the input has law `dist`.
DistTable noisy_distribution(const DistTable& dist, const NoiseChannel& channel);

/// Columns `keep` (in the given order) of every row.
SampleMatrix restrict_columns(const SampleMatrix& samples, std::span<const Vertex> keep);

/// CSV with header "#mrf-samples n=<n> A=<A> k=<k> seed=<seed> provenance=<...>"
/// followed by one comma-separated row per sample.
std::string samples_to_csv(const SampleMatrix& samples);
SampleMatrix samples_from_csv(const std::string& text);
void write_samples(const SampleMatrix& samples, const std::filesystem::path& path);
SampleMatrix read_samples(const std::filesystem::path& path);

}  // namespace mrf
