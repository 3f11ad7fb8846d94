#include "icongloss/rewrite.hpp"

#include "icongloss/error.hpp"
#include "xml_graph.hpp"

#include <algorithm>
#include <set>

namespace icongloss {

namespace {

const std::set<std::string> kSemanticRelations = {"i", "ii", "iii", "attr"};

bool filter_connected(const LabeledGraph& filter) {
    auto ids = filter.node_ids();
    if (ids.empty()) return false;
    std::set<NodeId> seen{ids.front()};
    std::vector<NodeId> queue{ids.front()};
    while (!queue.empty()) {
        NodeId u = queue.back();
        queue.pop_back();
        for (const Edge& e : filter.edges()) {
            NodeId peer;
            if (e.from == u) peer = e.to;
            else if (e.to == u) peer = e.from;
            else continue;
            if (seen.insert(peer).second) queue.push_back(peer);
        }
    }
    return seen.size() == ids.size();
}

} // namespace

bool RewriteRule::subst_references(NodeId filter_node) const {
    for (const ProductNode& p : product_nodes) {
        if (p.kind == ProductNode::Kind::Subst && p.arg == filter_node) return true;
    }
    return false;
}

std::optional<std::size_t> RewriteRule::product_for_coindex(int coindex) const {
    for (std::size_t k = 0; k < product_nodes.size(); ++k) {
        if (product_nodes[k].coindex == coindex) return k;
    }
    return std::nullopt;
}

std::vector<RewriteRule> load_rules(std::string_view document, const Hierarchy& h) {
    auto tree = detail::parse_xml(document);
    auto root = tree.get_child_optional("rules");
    if (!root) throw DataError("rule file must have a <rules> root");

    std::vector<RewriteRule> rules;
    std::set<std::string> ids;
    for (const auto& [key, elem] : *root) {
        if (key == "<xmlattr>" || key == "<xmlcomment>") continue;
        if (key != "rule") throw DataError("unexpected element <" + key + "> under <rules>");

        RewriteRule rule;
        rule.id = detail::require_attr(elem, "id", "rule");
        if (!ids.insert(rule.id).second) throw DataError("duplicate rule id '" + rule.id + "'");
        const std::string ctx = "rule '" + rule.id + "'";

        auto filter_elem = elem.get_child_optional("filter");
        auto product_elem = elem.get_child_optional("product");
        if (!filter_elem || !product_elem) {
            throw DataError(ctx + " needs one <filter> and one <product>");
        }

        // filter side
        auto filter = detail::read_graph_elements(*filter_elem, ctx + " filter", true);
        if (filter.graph.empty()) throw DataError(ctx + ": empty filter");
        if (!filter_connected(filter.graph)) throw DataError(ctx + ": filter is not connected");
        for (const auto& [id, label] : filter.graph.nodes()) {
            if (!label || label->ns != Ns::Concept || !h.has_concept(*label)) {
                throw DataError(ctx + ": filter label " +
                                (label ? label->str() : std::string("_")) +
                                " is not a declared concept");
            }
        }
        for (const Edge& e : filter.graph.edges()) {
            if (!h.has_relation(e.rel)) {
                throw DataError(ctx + ": undeclared relation '" + e.rel + "'");
            }
        }
        std::set<int> seen_coindex;
        for (const auto& [node, cx] : filter.coindex) {
            if (!seen_coindex.insert(cx).second) {
                throw DataError(ctx + ": coindex " + std::to_string(cx) +
                                " used on two filter nodes");
            }
        }
        rule.filter = filter.graph;
        rule.filter_coindex = filter.coindex;

        // product side
        std::map<std::string, std::size_t> product_by_xml_id;
        std::set<int> product_coindex;
        std::set<NodeId> subst_args;
        for (const auto& [pkey, pelem] : *product_elem) {
            if (pkey == "<xmlattr>" || pkey == "<xmlcomment>") continue;
            if (pkey == "node") {
                std::string xml_id = detail::require_attr(pelem, "id", ctx + " product node");
                if (product_by_xml_id.count(xml_id)) {
                    throw DataError(ctx + ": duplicate product node id '" + xml_id + "'");
                }
                std::string op = detail::require_attr(pelem, "op", ctx + " product node " + xml_id);
                ProductNode node;
                if (op == "literal") {
                    node.kind = ProductNode::Kind::Literal;
                    std::string text =
                        detail::require_attr(pelem, "label", ctx + " literal " + xml_id);
                    Label label = [&] {
                        try {
                            return Label::parse(text);
                        } catch (const std::invalid_argument& ex) {
                            throw DataError(ctx + ": " + ex.what());
                        }
                    }();
                    if (label.ns != Ns::Sem) {
                        throw DataError(ctx + ": product literal " + label.str() +
                                        " must be a semanteme");
                    }
                    node.label = label;
                    if (detail::optional_attr(pelem, "arg")) {
                        throw DataError(ctx + ": literal node '" + xml_id + "' cannot take arg");
                    }
                } else if (op == "translate" || op == "subst") {
                    node.kind = op == "translate" ? ProductNode::Kind::Translate
                                                  : ProductNode::Kind::Subst;
                    if (detail::optional_attr(pelem, "label")) {
                        throw DataError(ctx + ": " + op + " node '" + xml_id +
                                        "' cannot carry a label");
                    }
                    std::string arg = detail::require_attr(pelem, "arg", ctx + " " + op);
                    auto it = filter.by_xml_id.find(arg);
                    if (it == filter.by_xml_id.end()) {
                        throw DataError(ctx + ": " + op + " arg '" + arg +
                                        "' is not a filter node");
                    }
                    node.arg = it->second;
                    if (node.kind == ProductNode::Kind::Subst &&
                        !subst_args.insert(it->second).second) {
                        throw DataError(ctx + ": filter node '" + arg +
                                        "' is the target of two subst nodes");
                    }
                } else {
                    throw DataError(ctx + ": unknown product op '" + op + "'");
                }
                if (auto cx = detail::optional_attr(pelem, "coindex")) {
                    int value = 0;
                    try {
                        value = std::stoi(*cx);
                    } catch (const std::exception&) {
                        throw DataError(ctx + ": bad coindex '" + *cx + "'");
                    }
                    bool in_filter = false;
                    for (const auto& [node_id, fcx] : rule.filter_coindex) {
                        if (fcx == value) in_filter = true;
                    }
                    if (!in_filter) {
                        throw DataError(ctx + ": product coindex " + std::to_string(value) +
                                        " has no filter counterpart");
                    }
                    if (!product_coindex.insert(value).second) {
                        throw DataError(ctx + ": coindex " + std::to_string(value) +
                                        " used on two product nodes");
                    }
                    node.coindex = value;
                }
                product_by_xml_id.emplace(xml_id, rule.product_nodes.size());
                rule.product_nodes.push_back(std::move(node));
            } else if (pkey == "edge") {
                std::string from = detail::require_attr(pelem, "from", ctx + " product edge");
                std::string to = detail::require_attr(pelem, "to", ctx + " product edge");
                std::string rel = detail::require_attr(pelem, "label", ctx + " product edge");
                auto f = product_by_xml_id.find(from);
                auto t = product_by_xml_id.find(to);
                if (f == product_by_xml_id.end() || t == product_by_xml_id.end()) {
                    throw DataError(ctx + ": product edge references unknown node '" +
                                    (f == product_by_xml_id.end() ? from : to) + "'");
                }
                if (!kSemanticRelations.count(rel)) {
                    throw DataError(ctx + ": product edge relation '" + rel +
                                    "' must be one of i/ii/iii/attr");
                }
                rule.product_edges.push_back({f->second, t->second, rel});
            } else {
                throw DataError(ctx + ": unexpected element <" + pkey + "> under <product>");
            }
        }

        // termination guard: something concept-level must go away
        bool deletes_node = false;
        for (NodeId f : rule.filter.node_ids()) {
            if (!rule.subst_references(f)) deletes_node = true;
        }
        if (rule.filter.edge_count() == 0 && !deletes_node) {
            throw DataError(ctx + ": rule deletes no concept node or edge and would never "
                                  "terminate");
        }

        rules.push_back(std::move(rule));
    }
    return rules;
}

namespace {

// Host edges incident to v that are not images of filter edges.
bool has_residual_edges(const LabeledGraph& g, NodeId v, const std::set<Edge>& matched_edges) {
    for (const Edge& e : g.edges()) {
        if ((e.from == v || e.to == v) && !matched_edges.count(e)) return true;
    }
    return false;
}

std::set<Edge> matched_edge_images(const RewriteRule& rule, const Matching& m) {
    std::set<Edge> images;
    for (const Edge& e : rule.filter.edges()) {
        images.insert(Edge{m.at(e.from), m.at(e.to), e.rel});
    }
    return images;
}

} // namespace

std::vector<Matching> match_rule(const RewriteRule& rule, const LabeledGraph& g,
                                 const Hierarchy& h) {
    auto candidates = find_matchings(rule.filter, g, subsumption_predicate(h));

    std::vector<Matching> out;
    for (const Matching& m : candidates) {
        const std::set<Edge> matched = matched_edge_images(rule, m);
        bool ok = true;
        for (const auto& [f, v] : m) {
            bool persisted = rule.subst_references(f);
            auto cx = rule.filter_coindex.find(f);
            bool redirected =
                cx != rule.filter_coindex.end() && rule.product_for_coindex(cx->second).has_value();
            if (!persisted && !redirected && has_residual_edges(g, v, matched)) {
                ok = false; // would orphan edges of a deleted node
                break;
            }
        }
        if (ok) out.push_back(m);
    }
    return out;
}

LabeledGraph apply_rule(const RewriteRule& rule, const LabeledGraph& g, const Matching& m,
                        const Hierarchy& h, const Lexicon& lex) {
    LabeledGraph out = g;

    // 1. matched edges go away
    const std::set<Edge> matched = matched_edge_images(rule, m);
    for (const Edge& e : matched) out.remove_edge(e);

    // 2. snapshot residual edges of the matched nodes (product edges are not
    //    added yet, so everything incident now is residual)
    std::set<NodeId> matched_hosts;
    for (const auto& [f, v] : m) matched_hosts.insert(v);
    std::set<Edge> residual;
    for (const Edge& e : out.edges()) {
        if (matched_hosts.count(e.from) || matched_hosts.count(e.to)) residual.insert(e);
    }

    // 3. instantiate product nodes
    std::vector<NodeId> attach(rule.product_nodes.size());
    for (std::size_t k = 0; k < rule.product_nodes.size(); ++k) {
        const ProductNode& p = rule.product_nodes[k];
        switch (p.kind) {
        case ProductNode::Kind::Literal:
            attach[k] = out.add_node(p.label);
            break;
        case ProductNode::Kind::Subst:
            attach[k] = m.at(*p.arg);
            break;
        case ProductNode::Kind::Translate: {
            const std::optional<Label>& matched = g.label(m.at(*p.arg));
            Fragment frag = translate_concept(lex, h, *matched);
            std::map<NodeId, NodeId> remap;
            for (const auto& [fid, flabel] : frag.graph.nodes()) {
                remap[fid] = out.add_node(flabel);
            }
            for (const Edge& e : frag.graph.edges()) {
                out.add_edge(remap.at(e.from), remap.at(e.to), e.rel);
            }
            attach[k] = remap.at(frag.head);
            break;
        }
        }
    }

    // 4. endpoint remapping for residual edges
    std::map<NodeId, NodeId> src_map, dst_map;
    std::set<NodeId> doomed;
    for (NodeId f : rule.filter.node_ids()) {
        NodeId v = m.at(f);
        std::optional<NodeId> redirect;
        if (auto cx = rule.filter_coindex.find(f); cx != rule.filter_coindex.end()) {
            if (auto k = rule.product_for_coindex(cx->second)) redirect = attach[*k];
        }
        if (rule.subst_references(f)) {
            src_map[v] = v;                       // outgoing edges stay
            dst_map[v] = redirect.value_or(v);    // incoming edges move to the glue site
        } else if (redirect) {
            src_map[v] = *redirect;
            dst_map[v] = *redirect;
            doomed.insert(v);
        } else {
            if (has_residual_edges(out, v, {})) {
                throw std::invalid_argument("apply_rule: matching violates the dangling "
                                            "condition at node " +
                                            std::to_string(v.value));
            }
            doomed.insert(v);
        }
    }
    for (const Edge& e : residual) out.remove_edge(e);
    for (const Edge& e : residual) {
        NodeId from = src_map.count(e.from) ? src_map.at(e.from) : e.from;
        NodeId to = dst_map.count(e.to) ? dst_map.at(e.to) : e.to;
        out.add_edge(from, to, e.rel);
    }
    for (NodeId v : doomed) out.remove_node(v);

    // 5. product edges, attached at fragment heads / persisted nodes
    for (const ProductEdge& pe : rule.product_edges) {
        out.add_edge(attach[pe.from], attach[pe.to], pe.rel);
    }
    return out;
}

bool RewriteSet::insert(LabeledGraph g) {
    std::string key = canonical_form(g);
    return by_canon_.emplace(std::move(key), std::move(g)).second;
}

std::vector<std::string> RewriteSet::keys() const {
    std::vector<std::string> out;
    out.reserve(by_canon_.size());
    for (const auto& [key, g] : by_canon_) out.push_back(key);
    return out;
}

std::vector<LabeledGraph> RewriteSet::graphs() const {
    std::vector<LabeledGraph> out;
    out.reserve(by_canon_.size());
    for (const auto& [key, g] : by_canon_) out.push_back(g);
    return out;
}

std::pair<std::size_t, std::size_t> concept_measure(const LabeledGraph& g) {
    std::size_t nodes = 0, edges = 0;
    for (const auto& [id, label] : g.nodes()) {
        if (label && label->ns == Ns::Concept) ++nodes;
    }
    for (const Edge& e : g.edges()) {
        if (!kSemanticRelations.count(e.rel)) ++edges;
    }
    return {nodes, edges};
}

RewriteSet rewrite_closure(const LabeledGraph& g0, const std::vector<RewriteRule>& rules,
                           const Hierarchy& h, const Lexicon& lex,
                           const ClosureOptions& options) {
    RewriteSet set;
    set.insert(g0);
    std::vector<LabeledGraph> frontier{g0};
    if (options.trace) options.trace->iterations.push_back(set.keys());

    while (!frontier.empty()) {
        std::vector<LabeledGraph> discovered;
        for (const LabeledGraph& g : frontier) {
            for (const RewriteRule& rule : rules) {
                for (const Matching& m : match_rule(rule, g, h)) {
                    LabeledGraph result = apply_rule(rule, g, m, h, lex);
                    if (options.trace) {
                        options.trace->applications.push_back(
                            {rule.id, concept_measure(g), concept_measure(result)});
                    }
                    if (set.insert(result)) {
                        if (set.size() > options.max_set_size) {
                            throw DataError("rewrite set exceeded " +
                                            std::to_string(options.max_set_size) +
                                            " graphs; runaway grammar?");
                        }
                        discovered.push_back(std::move(result));
                    }
                }
            }
        }
        if (options.trace) options.trace->iterations.push_back(set.keys());
        frontier = std::move(discovered);
    }
    return set;
}

bool is_terminal(const LabeledGraph& g) {
    for (const auto& [id, label] : g.nodes()) {
        if (!label || label->ns != Ns::Sem) return false;
    }
    return true;
}

std::vector<LabeledGraph> terminal_filter(const RewriteSet& rs) {
    std::vector<LabeledGraph> out;
    for (const LabeledGraph& g : rs.graphs()) {
        if (is_terminal(g)) out.push_back(g);
    }
    return out; // graphs() is already in canonical-form order
}

LabeledGraph glue(const LabeledGraph& trunk, const Graft& graft,
                  const std::map<int, NodeId>& bindings) {
    LabeledGraph out = trunk;
    std::map<NodeId, NodeId> remap; // graft node -> out node
    for (const auto& [coindex, trunk_node] : bindings) {
        auto site = graft.sites.find(coindex);
        if (site == graft.sites.end()) {
            throw std::invalid_argument("glue: graft has no site for coindex " +
                                        std::to_string(coindex));
        }
        const std::optional<Label>& trunk_label = out.label(trunk_node);
        const std::optional<Label>& graft_label = graft.graph.label(site->second);
        if (trunk_label.has_value() == graft_label.has_value()) {
            throw std::invalid_argument(
                "glue: bound site " + std::to_string(coindex) +
                (trunk_label ? " has two filled nodes" : " has two blank nodes"));
        }
        if (!trunk_label) out.set_label(trunk_node, *graft_label);
        remap[site->second] = trunk_node;
    }
    for (NodeId gid : graft.graph.node_ids()) {
        if (!remap.count(gid)) remap[gid] = out.add_node(graft.graph.label(gid));
    }
    for (const Edge& e : graft.graph.edges()) {
        out.add_edge(remap.at(e.from), remap.at(e.to), e.rel);
    }
    return out;
}

} // namespace icongloss
