#pragma once

#include <compare>
#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <tuple>
#include <vector>

namespace icongloss {

/// Node labels live in one of two namespaces: ontology concepts ("c:Name")
/// and semantemes ("s:name").  Concept nodes are subject to is-a matching;
/// semanteme nodes are the vocabulary of the output semantic graphs.
enum class Ns { Concept, Sem };

struct Label {
    Ns ns;
    std::string name;

    auto operator<=>(const Label&) const = default;

    std::string str() const;

    /// Parses "c:Name" / "s:name"; throws std::invalid_argument on anything else.
    static Label parse(std::string_view text);

    static Label concept_label(std::string name) { return {Ns::Concept, std::move(name)}; }
    static Label sem(std::string name) { return {Ns::Sem, std::move(name)}; }
};

struct NodeId {
    std::uint32_t value = 0;
    auto operator<=>(const NodeId&) const = default;
};

struct Edge {
    NodeId from;
    NodeId to;
    std::string rel;
    auto operator<=>(const Edge&) const = default;
};

/// An injective, edge-preserving map from pattern node ids to host node ids.
using Matching = std::map<NodeId, NodeId>;

/// Directed labeled multigraph with set semantics on edges: two parallel
/// edges with the same relation token collapse into one.  A node label may
/// be absent; such "blank" nodes are placeholders used by graph gluing and
/// are never produced by the icon pipeline itself.
///
/// Value type: copy freely, mutate copies.  Node ids are never reused within
/// one graph value, so ids taken from a graph stay valid across edits.
class LabeledGraph {
public:
    /// Desk-scale bound; keeps canonicalization tractable by construction.
    static constexpr std::size_t kMaxNodes = 64;

    NodeId add_node(std::optional<Label> label);
    void add_node_with_id(NodeId id, std::optional<Label> label);
    void set_label(NodeId id, std::optional<Label> label);
    void add_edge(NodeId from, NodeId to, std::string rel);
    void remove_edge(const Edge& e);
    /// Removing a node with incident edges is a logic error.
    void remove_node(NodeId id);

    bool has_node(NodeId id) const { return nodes_.count(id) != 0; }
    bool has_edge(const Edge& e) const { return edges_.count(e) != 0; }
    const std::optional<Label>& label(NodeId id) const;

    std::size_t node_count() const { return nodes_.size(); }
    std::size_t edge_count() const { return edges_.size(); }
    bool empty() const { return nodes_.empty(); }

    std::vector<NodeId> node_ids() const;
    const std::map<NodeId, std::optional<Label>>& nodes() const { return nodes_; }
    const std::set<Edge>& edges() const { return edges_; }

    std::vector<Edge> out_edges(NodeId id) const;
    std::vector<Edge> in_edges(NodeId id) const;
    std::size_t out_degree(NodeId id) const;
    std::size_t in_degree(NodeId id) const;

    bool operator==(const LabeledGraph& other) const {
        return nodes_ == other.nodes_ && edges_ == other.edges_;
    }

private:
    std::map<NodeId, std::optional<Label>> nodes_;
    std::set<Edge> edges_;
    std::uint32_t next_id_ = 0;
};

/// Builds a graph from explicit (id, label) node specs and (from, to, rel)
/// edge specs.  Throws std::invalid_argument on duplicate node ids or edge
/// endpoints that were not declared.
LabeledGraph build_graph(
    const std::vector<std::pair<NodeId, std::optional<Label>>>& node_specs,
    const std::vector<std::tuple<NodeId, NodeId, std::string>>& edge_specs);

/// Canonical string form: equal for isomorphic graphs, distinct otherwise.
/// Implemented as an exhaustive node-ordering search restricted to the
/// classes of an iterated (label, degree, neighborhood) signature
/// refinement; the minimum serialization over admissible orderings wins.
std::string canonical_form(const LabeledGraph& g);

inline bool isomorphic(const LabeledGraph& a, const LabeledGraph& b) {
    return canonical_form(a) == canonical_form(b);
}

/// Decides whether a pattern node label may match a host node label.
using LabelPredicate =
    std::function<bool(const std::optional<Label>& pattern, const std::optional<Label>& host)>;

LabelPredicate label_equal();

/// All injective maps from pattern nodes to host nodes such that the
/// predicate holds on every node pair and every pattern edge (a,b,r) has a
/// host edge (m(a),m(b),r).  The host may carry extra edges between matched
/// nodes (non-induced matching).  Result is sorted, hence deterministic.
/// The pattern must be non-empty.
std::vector<Matching> find_matchings(const LabeledGraph& pattern, const LabeledGraph& host,
                                     const LabelPredicate& label_ok);

std::string to_dot(const LabeledGraph& g);

} // namespace icongloss
