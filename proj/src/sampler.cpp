#include "mrf/sampler.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <limits>
#include <sstream>

#include "mrf/errors.hpp"
#include "mrf/model_io.hpp"
#include "mrf/random.hpp"

namespace mrf {

SampleMatrix::SampleMatrix(int k, int n, int alphabet, std::vector<std::uint8_t> data,
                           std::uint64_t seed, std::string provenance)
    : k_(k), n_(n), alphabet_(alphabet), data_(std::move(data)), seed_(seed),
      provenance_(std::move(provenance)) {
  if (k < 0 || n < 0) throw InputError("samples: negative dimensions");
  if (alphabet < 2 || alphabet > 256) throw InputError("samples: alphabet must be in [2, 256]");
  if (data_.size() != static_cast<std::size_t>(k) * static_cast<std::size_t>(n)) {
    throw InputError("samples: data size does not match k*n");
  }
  for (auto x : data_) {
    if (x >= alphabet) throw InputError("samples: symbol " + std::to_string(x) + " out of range");
  }
}

std::string NoiseChannel::describe() const {
  std::ostringstream out;
  out << "q=" << flip_prob << ",sites=";
  if (sites.empty()) {
    out << "all";
  } else {
    for (std::size_t i = 0; i < sites.size(); ++i) out << (i ? ":" : "") << sites[i];
  }
  return out.str();
}

SampleMatrix sample_exact(const DistTable& dist, int k, std::uint64_t seed) {
  if (k < 1) throw InputError("sample_exact: k must be >= 1");
  std::vector<double> cdf(dist.probs.size());
  double acc = 0.0;
  for (std::size_t s = 0; s < cdf.size(); ++s) cdf[s] = acc += dist.probs[s];
  const int n = dist.n;
  const int A = dist.alphabet;
  std::vector<std::uint8_t> data(static_cast<std::size_t>(k) * n);
  for (int r = 0; r < k; ++r) {
    const double u = hash_uniform(seed, static_cast<std::uint64_t>(r), 0) * acc;
    auto it = std::upper_bound(cdf.begin(), cdf.end(), u);
    // Skip any zero-probability tail the search might land on.
    std::size_t state = static_cast<std::size_t>(it - cdf.begin());
    if (state >= cdf.size()) state = cdf.size() - 1;
    while (dist.probs[state] == 0.0 && state > 0) --state;
    for (int c = n - 1; c >= 0; --c) {
      data[static_cast<std::size_t>(r) * n + c] = static_cast<std::uint8_t>(state % A);
      state /= A;
    }
  }
  return SampleMatrix(k, n, A, std::move(data), seed, "exact");
}

namespace {

struct SiteFactor {
  std::size_t potential;
  std::size_t site_stride;
};

}  // namespace

SampleMatrix gibbs_sample(const Model& model, int k, std::uint64_t seed,
                          const GibbsOptions& options) {
  if (k < 1) throw InputError("gibbs_sample: k must be >= 1");
  if (options.burn_in < 0 || options.thinning < 1 || options.chains < 1) {
    throw InputError("gibbs_sample: need burn_in >= 0, thinning >= 1, chains >= 1");
  }
  const int n = model.n();
  const int A = model.alphabet();
  if (A > 256) throw InputError("gibbs_sample: alphabet too large");
  const auto& pots = model.potentials();

  std::vector<std::vector<SiteFactor>> factors(n);
  for (std::size_t p = 0; p < pots.size(); ++p) {
    const auto& clique = pots[p].clique;
    std::size_t stride = 1;
    for (int j = static_cast<int>(clique.size()) - 1; j >= 0; --j) {
      factors[clique[j]].push_back({p, stride});
      stride *= static_cast<std::size_t>(A);
    }
  }

  std::vector<std::uint8_t> data(static_cast<std::size_t>(k) * n);
  std::vector<double> logw(A), weight(A);
  for (int chain = 0; chain < options.chains; ++chain) {
    const std::uint64_t chain_seed = derive_seed(seed, static_cast<std::uint64_t>(chain), 0x6962);
    std::vector<Symbol> state(n);
    for (int s = 0; s < n; ++s) {
      state[s] = static_cast<Symbol>(hash_uniform(chain_seed, 0, static_cast<std::uint64_t>(s)) * A);
    }
    std::uint64_t sweep = 0;
    auto run_sweep = [&] {
      ++sweep;
      for (int s = 0; s < n; ++s) {
        for (int a = 0; a < A; ++a) logw[a] = 0.0;
        for (const auto& f : factors[s]) {
          const auto& pot = pots[f.potential];
          std::size_t base = 0;
          for (Vertex v : pot.clique) base = base * A + static_cast<std::size_t>(v == s ? 0 : state[v]);
          for (int a = 0; a < A; ++a) logw[a] += pot.table[base + a * f.site_stride];
        }
        const double top = *std::max_element(logw.begin(), logw.end());
        if (!std::isfinite(top)) {
          throw SamplerDeadlock("gibbs_sample: site " + std::to_string(s) +
                                " has no symbol of positive weight");
        }
        double total = 0.0;
        for (int a = 0; a < A; ++a) total += weight[a] = std::exp(logw[a] - top);
        double u = hash_uniform(chain_seed, sweep, static_cast<std::uint64_t>(s)) * total;
        Symbol pick = A - 1;
        for (int a = 0; a < A; ++a) {
          if (u < weight[a]) {
            pick = a;
            break;
          }
          u -= weight[a];
        }
        while (weight[pick] == 0.0) --pick;  // guard against round-off onto a forbidden symbol
        state[s] = pick;
      }
    };
    for (int b = 0; b < options.burn_in; ++b) run_sweep();
    for (int r = chain; r < k; r += options.chains) {
      for (int t = 0; t < options.thinning; ++t) run_sweep();
      for (int s = 0; s < n; ++s) data[static_cast<std::size_t>(r) * n + s] = static_cast<std::uint8_t>(state[s]);
    }
  }
  std::ostringstream prov;
  prov << "gibbs(burn_in=" << options.burn_in << ",thinning=" << options.thinning;
  if (options.chains != 1) prov << ",chains=" << options.chains;
  prov << ")";
  return SampleMatrix(k, n, A, std::move(data), seed, prov.str());
}

namespace {

/// Validated site list of a channel over n sites; empty means all.
std::vector<Vertex> channel_sites(const NoiseChannel& channel, int n) {
  const double q = channel.flip_prob;
  if (!(q >= 0.0 && q < 1.0)) throw InputError("noise channel: flip_prob must be in [0, 1)");
  std::vector<Vertex> sites = channel.sites;
  if (sites.empty()) {
    for (Vertex v = 0; v < n; ++v) sites.push_back(v);
  }
  for (Vertex v : sites) {
    if (v < 0 || v >= n) throw InputError("noise channel: site " + std::to_string(v) + " out of range");
  }
  return sites;
}

}  // namespace

SampleMatrix apply_noise(const SampleMatrix& samples, const NoiseChannel& channel,
                         std::uint64_t seed) {
  const double q = channel.flip_prob;
  const int n = samples.n();
  const int A = samples.alphabet();
  const std::vector<Vertex> sites = channel_sites(channel, n);
  std::vector<std::uint8_t> data = samples.data();
  for (int r = 0; r < samples.k(); ++r) {
    for (Vertex v : sites) {
      const std::uint64_t site_key = static_cast<std::uint64_t>(v) * 2;
      if (hash_uniform(seed, static_cast<std::uint64_t>(r), site_key) >= q) continue;
      auto& cell = data[static_cast<std::size_t>(r) * n + v];
      int other = static_cast<int>(hash_uniform(seed, static_cast<std::uint64_t>(r), site_key + 1) * (A - 1));
      if (other >= cell) ++other;
      cell = static_cast<std::uint8_t>(other);
    }
  }
  return SampleMatrix(samples.k(), n, A, std::move(data), samples.seed(),
                      "noisy(" + channel.describe() + ";base=" + samples.provenance() + ")");
}

DistTable noisy_distribution(const DistTable& dist, const NoiseChannel& channel) {
  const std::vector<Vertex> sites = channel_sites(channel, dist.n);
  const int A = dist.alphabet;
  const double keep = 1.0 - channel.flip_prob;
  const double move = A > 1 ? channel.flip_prob / (A - 1) : 0.0;
  DistTable out = dist;
  std::vector<double> next(out.probs.size());
  for (Vertex s : sites) {
    // Stride of site s in the mixed-radix index (vertex 0 most significant).
    std::size_t stride = 1;
    for (int i = dist.n - 1; i > s; --i) stride *= A;
    for (std::size_t idx = 0; idx < out.probs.size(); ++idx) {
      const int digit = static_cast<int>(idx / stride % A);
      const std::size_t base = idx - digit * stride;
      double total = 0.0;
      for (int a = 0; a < A; ++a) total += out.probs[base + a * stride];
      next[idx] = keep * out.probs[idx] + move * (total - out.probs[idx]);
    }
    out.probs.swap(next);
  }
  return out;
}

SampleMatrix restrict_columns(const SampleMatrix& samples, std::span<const Vertex> keep) {
  for (Vertex v : keep) {
    if (v < 0 || v >= samples.n()) throw InputError("restrict_columns: column out of range");
  }
  const int m = static_cast<int>(keep.size());
  std::vector<std::uint8_t> data(static_cast<std::size_t>(samples.k()) * m);
  for (int r = 0; r < samples.k(); ++r) {
    auto row = samples.row(r);
    for (int j = 0; j < m; ++j) data[static_cast<std::size_t>(r) * m + j] = row[keep[j]];
  }
  std::string cols;
  for (int j = 0; j < m; ++j) cols += (j ? ":" : "") + std::to_string(keep[j]);
  return SampleMatrix(samples.k(), m, samples.alphabet(), std::move(data), samples.seed(),
                      "restricted(cols=" + cols + ";base=" + samples.provenance() + ")");
}

std::string samples_to_csv(const SampleMatrix& s) {
  std::string out = "#mrf-samples n=" + std::to_string(s.n()) + " A=" + std::to_string(s.alphabet()) +
                    " k=" + std::to_string(s.k()) + " seed=" + std::to_string(s.seed()) +
                    " provenance=" + s.provenance() + "\n";
  out.reserve(out.size() + static_cast<std::size_t>(s.k()) * (s.n() * 2 + 1));
  char buf[8];
  for (int r = 0; r < s.k(); ++r) {
    auto row = s.row(r);
    for (int c = 0; c < s.n(); ++c) {
      if (c) out.push_back(',');
      auto [end, ec] = std::to_chars(buf, buf + sizeof buf, static_cast<int>(row[c]));
      out.append(buf, end);
    }
    out.push_back('\n');
  }
  return out;
}

namespace {

std::string header_field(const std::string& header, const std::string& key) {
  const std::string tag = " " + key + "=";
  auto pos = header.find(tag);
  if (pos == std::string::npos) throw InputError("samples: header missing " + key);
  pos += tag.size();
  auto end = key == "provenance" ? header.size() : header.find(' ', pos);
  return header.substr(pos, end == std::string::npos ? std::string::npos : end - pos);
}

long long parse_int(const std::string& text, const std::string& what) {
  long long v = 0;
  auto [p, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (ec != std::errc() || p != text.data() + text.size()) {
    throw InputError("samples: bad " + what + ": '" + text + "'");
  }
  return v;
}

}  // namespace

SampleMatrix samples_from_csv(const std::string& text) {
  auto eol = text.find('\n');
  std::string header = text.substr(0, eol);
  if (!header.empty() && header.back() == '\r') header.pop_back();
  if (header.rfind("#mrf-samples", 0) != 0) throw InputError("samples: missing #mrf-samples header");
  const int n = static_cast<int>(parse_int(header_field(header, "n"), "n"));
  const int A = static_cast<int>(parse_int(header_field(header, "A"), "A"));
  const int k = static_cast<int>(parse_int(header_field(header, "k"), "k"));
  const auto seed = static_cast<std::uint64_t>(std::stoull(header_field(header, "seed")));
  const std::string provenance = header_field(header, "provenance");
  if (n < 0 || k < 0) throw InputError("samples: negative dimensions in header");

  std::vector<std::uint8_t> data;
  data.reserve(static_cast<std::size_t>(k) * n);
  int rows = 0;
  std::size_t pos = eol == std::string::npos ? text.size() : eol + 1;
  while (pos < text.size()) {
    std::size_t end = text.find('\n', pos);
    if (end == std::string::npos) end = text.size();
    std::size_t line_end = end;
    if (line_end > pos && text[line_end - 1] == '\r') --line_end;
    if (line_end > pos) {
      int cols = 0;
      const char* p = text.data() + pos;
      const char* last = text.data() + line_end;
      while (p < last) {
        int v = 0;
        auto [q, ec] = std::from_chars(p, last, v);
        if (ec != std::errc() || v < 0 || v >= A) {
          throw InputError("samples: bad symbol on data row " + std::to_string(rows + 1));
        }
        data.push_back(static_cast<std::uint8_t>(v));
        ++cols;
        p = q;
        if (p < last) {
          if (*p != ',') throw InputError("samples: expected ',' on data row " + std::to_string(rows + 1));
          ++p;
        }
      }
      if (cols != n) {
        throw InputError("samples: row " + std::to_string(rows + 1) + " has " + std::to_string(cols) +
                         " columns, expected " + std::to_string(n));
      }
      ++rows;
    }
    pos = end + 1;
  }
  if (rows != k) {
    throw InputError("samples: header declares k=" + std::to_string(k) + " but file has " +
                     std::to_string(rows) + " rows");
  }
  return SampleMatrix(k, n, A, std::move(data), seed, provenance);
}

void write_samples(const SampleMatrix& samples, const std::filesystem::path& path) {
  write_text(path, samples_to_csv(samples));
}

SampleMatrix read_samples(const std::filesystem::path& path) {
  return samples_from_csv(read_text(path));
}

}  // namespace mrf
