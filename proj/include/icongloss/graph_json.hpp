#pragma once

#include "icongloss/graph.hpp"

#include <json.hpp>

namespace icongloss {

/// {"nodes": [{"id", "label"}...], "edges": [{"from", "to", "rel"}...]};
/// blank nodes serialize with a null label.
nlohmann::json graph_to_json(const LabeledGraph& g);

/// Inverse of graph_to_json; throws DataError on malformed input.
LabeledGraph graph_from_json(const nlohmann::json& j);

} // namespace icongloss
