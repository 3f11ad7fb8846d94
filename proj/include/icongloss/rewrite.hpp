#pragma once

#include "icongloss/graph.hpp"
#include "icongloss/ontology.hpp"
#include "icongloss/verbalize.hpp"

#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace icongloss {

/// Right-hand-side node of a rewrite rule.
///
/// literal    a fixed semanteme
/// translate  the tr fragment of the concept the referenced filter node
///            matched; incident product edges attach to the fragment head
/// subst      the matched input node itself: it persists, still concept
///            labeled, to be rewritten in place by later rule applications
///
/// A coindex shared with a filter node marks this node as the glue site for
/// that node's residual edges.
struct ProductNode {
    enum class Kind { Literal, Translate, Subst };
    Kind kind;
    std::optional<Label> label;  // literal only
    std::optional<NodeId> arg;   // translate/subst: the filter node
    std::optional<int> coindex;
};

struct ProductEdge {
    std::size_t from; // indices into RewriteRule::product_nodes
    std::size_t to;
    std::string rel;  // one of i, ii, iii, attr
};

struct RewriteRule {
    std::string id;
    LabeledGraph filter;                  // connected, concept labels only
    std::map<NodeId, int> filter_coindex; // values unique
    std::vector<ProductNode> product_nodes;
    std::vector<ProductEdge> product_edges;

    bool subst_references(NodeId filter_node) const;
    std::optional<std::size_t> product_for_coindex(int coindex) const;
};

/// Rule XML:
///   <rules>
///     <rule id="...">
///       <filter>  <node id label [coindex]/> <edge from to label/> </filter>
///       <product> <node id op="literal|translate|subst" [label] [arg] [coindex]/>
///                 <edge from to label/> </product>
///     </rule>
///   </rules>
/// Validates all rule invariants, including the termination guard: a rule
/// must delete at least one concept node or edge (the filter has an edge, or
/// some filter node is not persisted by a subst reference).
std::vector<RewriteRule> load_rules(std::string_view document, const Hierarchy& h);

/// Filter matchings of the rule on g: subsumption on labels plus the
/// dangling condition (a filter node that is neither persisted nor glued
/// through a coindexed product node must have no host edges beyond the
/// matched ones).
std::vector<Matching> match_rule(const RewriteRule& rule, const LabeledGraph& g,
                                 const Hierarchy& h);

/// One rewriting step: deletes the matched edges, instantiates the product,
/// and re-glues residual edges.  A persisted (subst) node keeps its residual
/// outgoing edges while residual incoming edges move to the product node
/// carrying its coindex; a deleted coindexed node hands all residual edges
/// to that product node.  The matching must come from match_rule.
LabeledGraph apply_rule(const RewriteRule& rule, const LabeledGraph& g, const Matching& m,
                        const Hierarchy& h, const Lexicon& lex);

/// Set of graphs deduplicated by canonical form.
class RewriteSet {
public:
    /// False when an isomorphic member was already present.
    bool insert(LabeledGraph g);
    bool contains(const LabeledGraph& g) const { return by_canon_.count(canonical_form(g)) != 0; }
    std::size_t size() const { return by_canon_.size(); }
    std::vector<std::string> keys() const;
    /// Members in canonical-form order.
    std::vector<LabeledGraph> graphs() const;

private:
    std::map<std::string, LabeledGraph> by_canon_;
};

/// Termination measure: (concept-labeled nodes, edges whose relation is a
/// concept relation, i.e. not one of i/ii/iii/attr).  Strictly decreases,
/// lexicographically, on every legal rule application.
std::pair<std::size_t, std::size_t> concept_measure(const LabeledGraph& g);

struct ClosureTrace {
    std::vector<std::vector<std::string>> iterations; // canonical keys after each pass
    struct Application {
        std::string rule_id;
        std::pair<std::size_t, std::size_t> before;
        std::pair<std::size_t, std::size_t> after;
    };
    std::vector<Application> applications;
};

struct ClosureOptions {
    std::size_t max_set_size = 10000;
    ClosureTrace* trace = nullptr;
};

/// Iterated rewriting to the fixpoint: starting from {g0}, applies every
/// rule at every matching site of every member until the set stops growing.
/// Throws DataError when the set exceeds max_set_size (runaway grammar).
RewriteSet rewrite_closure(const LabeledGraph& g0, const std::vector<RewriteRule>& rules,
                           const Hierarchy& h, const Lexicon& lex,
                           const ClosureOptions& options = {});

/// Nodes are all semantemes: no concept labels, no blanks.
bool is_terminal(const LabeledGraph& g);

/// The terminal members, sorted by canonical form.
std::vector<LabeledGraph> terminal_filter(const RewriteSet& rs);

/// A graph whose coindexed nodes ("sites") are glue points.
struct Graft {
    LabeledGraph graph;
    std::map<int, NodeId> sites;
};

/// Disjoint union of trunk and graft with each bound pair merged into one
/// node.  At every bound site exactly one side must be blank; the filled
/// label wins.  All edges are preserved.
LabeledGraph glue(const LabeledGraph& trunk, const Graft& graft,
                  const std::map<int, NodeId>& bindings);

} // namespace icongloss
