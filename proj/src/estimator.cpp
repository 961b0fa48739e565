#include "mrf/estimator.hpp"

#include <string>
#include <string_view>
#include <unordered_map>

#include "mrf/errors.hpp"

namespace mrf {

namespace {

constexpr std::size_t kTableCacheLimit = 65536;

}  // namespace

struct Estimator::State {
  bool exact = false;
  int n = 0;
  int alphabet = 2;
  int k = 0;
  DistTable dist;

  // Empirical source: columns for pair counts, plus the distinct rows with
  // their multiplicities (tables are built from these).
  std::vector<std::vector<std::uint8_t>> columns;
  std::vector<std::uint8_t> unique_rows;
  std::vector<std::uint64_t> unique_counts;

  mutable std::mutex mutex;
  mutable std::map<std::vector<Vertex>, std::shared_ptr<const MarginalTable>> cache;

  MarginalTable build(const std::vector<Vertex>& vars) const {
    if (exact) return marginal_table(dist, vars);
    MarginalTable t;
    t.vars = vars;
    t.alphabet = alphabet;
    std::size_t size = 1;
    for (std::size_t i = 0; i < vars.size(); ++i) size *= static_cast<std::size_t>(alphabet);
    std::vector<std::uint64_t> counts(size, 0);
    const std::size_t rows = unique_counts.size();
    for (std::size_t r = 0; r < rows; ++r) {
      const std::uint8_t* row = unique_rows.data() + r * static_cast<std::size_t>(n);
      std::size_t index = 0;
      for (Vertex v : vars) index = index * alphabet + row[v];
      counts[index] += unique_counts[r];
    }
    t.probs.resize(size);
    for (std::size_t i = 0; i < size; ++i) t.probs[i] = static_cast<double>(counts[i]) / k;
    return t;
  }
};

Estimator::Estimator(std::unique_ptr<State> state) : state_(std::move(state)) {}
Estimator::Estimator(Estimator&&) noexcept = default;
Estimator& Estimator::operator=(Estimator&&) noexcept = default;
Estimator::~Estimator() = default;

Estimator Estimator::empirical(const SampleMatrix& samples) {
  if (samples.k() < 1) throw InputError("estimator: no samples");
  auto s = std::make_unique<State>();
  s->n = samples.n();
  s->alphabet = samples.alphabet();
  s->k = samples.k();
  s->columns.assign(s->n, std::vector<std::uint8_t>(samples.k()));
  std::unordered_map<std::string_view, std::size_t> seen;
  const auto& data = samples.data();
  const std::size_t n = static_cast<std::size_t>(s->n);
  std::vector<std::size_t> first_row;
  std::vector<std::uint64_t> counts;
  for (int r = 0; r < samples.k(); ++r) {
    const std::uint8_t* row = data.data() + r * n;
    for (std::size_t c = 0; c < n; ++c) s->columns[c][r] = row[c];
    std::string_view key(reinterpret_cast<const char*>(row), n);
    auto [it, inserted] = seen.try_emplace(key, counts.size());
    if (inserted) {
      first_row.push_back(static_cast<std::size_t>(r));
      counts.push_back(0);
    }
    ++counts[it->second];
  }
  s->unique_rows.reserve(first_row.size() * n);
  for (std::size_t r : first_row) {
    s->unique_rows.insert(s->unique_rows.end(), data.begin() + r * n, data.begin() + (r + 1) * n);
  }
  s->unique_counts = std::move(counts);
  return Estimator(std::move(s));
}

Estimator Estimator::exact(DistTable dist) {
  auto s = std::make_unique<State>();
  s->exact = true;
  s->n = dist.n;
  s->alphabet = dist.alphabet;
  s->dist = std::move(dist);
  return Estimator(std::move(s));
}

bool Estimator::is_exact() const { return state_->exact; }
int Estimator::n() const { return state_->n; }
int Estimator::alphabet() const { return state_->alphabet; }
int Estimator::k() const { return state_->k; }

std::shared_ptr<const MarginalTable> Estimator::table(std::span<const Vertex> vars) const {
  std::vector<Vertex> key = sorted_vertex_set(vars);
  for (Vertex v : key) {
    if (v < 0 || v >= state_->n) throw InputError("estimator: vertex " + std::to_string(v) + " out of range");
  }
  {
    std::lock_guard lock(state_->mutex);
    auto it = state_->cache.find(key);
    if (it != state_->cache.end()) return it->second;
  }
  auto built = std::make_shared<const MarginalTable>(state_->build(key));
  std::lock_guard lock(state_->mutex);
  if (state_->cache.size() >= kTableCacheLimit) state_->cache.clear();
  return state_->cache.emplace(std::move(key), std::move(built)).first->second;
}

double Estimator::prob(std::span<const Vertex> U, std::span<const Symbol> x_U) const {
  if (U.size() != x_U.size()) throw InputError("estimator: assignment length does not match vertex list");
  if (U.empty()) return 1.0;
  for (Symbol x : x_U) {
    if (x < 0 || x >= state_->alphabet) throw InputError("estimator: symbol out of range");
  }
  auto t = table(U);
  std::size_t index = 0;
  for (std::size_t i = 0; i < U.size(); ++i) index += x_U[i] * t->stride(t->position(U[i]));
  return t->probs[index];
}

double Estimator::cond_prob(Vertex v, Symbol x_v, std::span<const Vertex> U,
                            std::span<const Symbol> x_U) const {
  for (Vertex u : U) {
    if (u == v) throw InputError("estimator: conditioned vertex appears in the conditioning set");
  }
  const double den = prob(U, x_U);
  if (!(den > 0.0)) throw ZeroProbability("estimator: conditioning event has zero estimated probability");
  std::vector<Vertex> vars(U.begin(), U.end());
  vars.push_back(v);
  std::vector<Symbol> xs(x_U.begin(), x_U.end());
  xs.push_back(x_v);
  return prob(vars, xs) / den;
}

double Estimator::corr(Vertex u, Vertex v) const {
  if (u == v) throw InputError("corr: u == v");
  const int n = state_->n;
  if (u < 0 || v < 0 || u >= n || v >= n) throw InputError("corr: vertex out of range");
  if (state_->exact) return correlation_distance(state_->dist, u, v);
  // Direct pass over the two columns; this is the O(k) per pair cost of the
  // correlation screen.
  const int A = state_->alphabet;
  const Vertex lo = std::min(u, v), hi = std::max(u, v);
  const auto& cu = state_->columns[lo];
  const auto& cv = state_->columns[hi];
  std::vector<std::uint64_t> counts(static_cast<std::size_t>(A) * A, 0);
  const std::size_t k = cu.size();
  for (std::size_t r = 0; r < k; ++r) ++counts[cu[r] * A + cv[r]];
  MarginalTable t;
  t.vars = {lo, hi};
  t.alphabet = A;
  t.probs.resize(counts.size());
  for (std::size_t i = 0; i < counts.size(); ++i) t.probs[i] = static_cast<double>(counts[i]) / state_->k;
  return correlation_from_pair(t);
}

}  // namespace mrf
