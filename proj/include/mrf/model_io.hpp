#pragma once

#include <filesystem>
#include <string>

#include <json.hpp>

#include "mrf/model.hpp"

namespace mrf {

// Model file: {"n": int, "alphabet": int,
//              "potentials": [{"clique": [int...], "table": [float...]}]}
// Tables use the mixed-radix order (first clique vertex most significant);
// -infinity is written as the string "-inf".

nlohmann::json model_to_json(const Model& model);
/// The graph is rebuilt as the union of potential cliques. Throws InputError.
Model model_from_json(const nlohmann::json& j);

Model read_model(const std::filesystem::path& path);
void write_model(const Model& model, const std::filesystem::path& path);

nlohmann::json graph_to_json(const Graph& g);

/// Reads a whole file; throws InputError when it cannot be opened.
std::string read_text(const std::filesystem::path& path);
void write_text(const std::filesystem::path& path, const std::string& text);

}  // namespace mrf
