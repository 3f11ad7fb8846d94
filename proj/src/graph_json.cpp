#include "icongloss/graph_json.hpp"

#include "icongloss/error.hpp"

namespace icongloss {

nlohmann::json graph_to_json(const LabeledGraph& g) {
    nlohmann::json nodes = nlohmann::json::array();
    for (const auto& [id, label] : g.nodes()) {
        nlohmann::json n;
        n["id"] = id.value;
        n["label"] = label ? nlohmann::json(label->str()) : nlohmann::json(nullptr);
        nodes.push_back(std::move(n));
    }
    nlohmann::json edges = nlohmann::json::array();
    for (const Edge& e : g.edges()) {
        edges.push_back({{"from", e.from.value}, {"to", e.to.value}, {"rel", e.rel}});
    }
    return {{"nodes", std::move(nodes)}, {"edges", std::move(edges)}};
}

LabeledGraph graph_from_json(const nlohmann::json& j) {
    try {
        LabeledGraph g;
        for (const auto& n : j.at("nodes")) {
            NodeId id{n.at("id").get<std::uint32_t>()};
            std::optional<Label> label;
            if (n.contains("label") && !n["label"].is_null()) {
                label = Label::parse(n["label"].get<std::string>());
            }
            g.add_node_with_id(id, std::move(label));
        }
        for (const auto& e : j.at("edges")) {
            g.add_edge(NodeId{e.at("from").get<std::uint32_t>()},
                       NodeId{e.at("to").get<std::uint32_t>()}, e.at("rel").get<std::string>());
        }
        return g;
    } catch (const nlohmann::json::exception& ex) {
        throw DataError(std::string("bad graph json: ") + ex.what());
    } catch (const std::invalid_argument& ex) {
        throw DataError(std::string("bad graph json: ") + ex.what());
    } catch (const std::length_error& ex) {
        throw DataError(std::string("bad graph json: ") + ex.what());
    }
}

} // namespace icongloss
