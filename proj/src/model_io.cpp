#include "mrf/model_io.hpp"

#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>

#include "mrf/errors.hpp"

namespace mrf {

using nlohmann::json;

namespace {

json encode_value(double x) {
  if (std::isinf(x) && x < 0) return "-inf";
  if (!std::isfinite(x)) throw InputError("model: only finite values or -inf are serializable");
  return x;
}

double decode_value(const json& j) {
  if (j.is_string()) {
    if (j.get<std::string>() == "-inf") return -std::numeric_limits<double>::infinity();
    throw InputError("model: unexpected string in potential table: " + j.get<std::string>());
  }
  if (!j.is_number()) throw InputError("model: potential table entries must be numbers");
  return j.get<double>();
}

}  // namespace

json model_to_json(const Model& model) {
  json pots = json::array();
  for (const auto& p : model.potentials()) {
    json table = json::array();
    for (double x : p.table) table.push_back(encode_value(x));
    pots.push_back({{"clique", p.clique}, {"table", std::move(table)}});
  }
  return {{"n", model.n()}, {"alphabet", model.alphabet()}, {"potentials", std::move(pots)}};
}

Model model_from_json(const json& j) {
  try {
    int n = j.at("n").get<int>();
    int alphabet = j.at("alphabet").get<int>();
    std::vector<Potential> potentials;
    for (const auto& pj : j.at("potentials")) {
      Potential p;
      p.clique = pj.at("clique").get<std::vector<Vertex>>();
      for (const auto& x : pj.at("table")) p.table.push_back(decode_value(x));
      potentials.push_back(std::move(p));
    }
    return Model::from_potentials(n, alphabet, std::move(potentials));
  } catch (const json::exception& e) {
    throw InputError(std::string("model: malformed JSON: ") + e.what());
  }
}

std::string read_text(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot open " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void write_text(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw InputError("cannot write " + path.string());
  out << text;
}

Model read_model(const std::filesystem::path& path) {
  json j;
  try {
    j = json::parse(read_text(path));
  } catch (const json::parse_error& e) {
    throw InputError("model: " + path.string() + ": " + e.what());
  }
  return model_from_json(j);
}

void write_model(const Model& model, const std::filesystem::path& path) {
  write_text(path, model_to_json(model).dump(2) + "\n");
}

json graph_to_json(const Graph& g) {
  json edges = json::array();
  for (auto [u, v] : g.edges()) edges.push_back({u, v});
  return {{"n", g.n()}, {"edges", std::move(edges)}};
}

}  // namespace mrf
