#include "icongloss/graph.hpp"

#include <algorithm>
#include <cctype>
#include <numeric>
#include <sstream>
#include <stdexcept>

namespace icongloss {

namespace {

bool valid_token(std::string_view s) {
    if (s.empty()) return false;
    for (char c : s) {
        if (!std::isalnum(static_cast<unsigned char>(c)) && c != '_') return false;
    }
    return true;
}

std::string label_text(const std::optional<Label>& l) {
    return l ? l->str() : std::string("_");
}

} // namespace

std::string Label::str() const {
    return (ns == Ns::Concept ? "c:" : "s:") + name;
}

Label Label::parse(std::string_view text) {
    Ns ns;
    if (text.starts_with("c:")) {
        ns = Ns::Concept;
    } else if (text.starts_with("s:")) {
        ns = Ns::Sem;
    } else {
        throw std::invalid_argument("label must start with 'c:' or 's:': '" + std::string(text) + "'");
    }
    std::string_view name = text.substr(2);
    if (!valid_token(name)) {
        throw std::invalid_argument("bad label name: '" + std::string(text) + "'");
    }
    return {ns, std::string(name)};
}

NodeId LabeledGraph::add_node(std::optional<Label> label) {
    NodeId id{next_id_};
    add_node_with_id(id, std::move(label));
    return id;
}

void LabeledGraph::add_node_with_id(NodeId id, std::optional<Label> label) {
    if (nodes_.count(id)) {
        throw std::invalid_argument("duplicate node id " + std::to_string(id.value));
    }
    if (nodes_.size() >= kMaxNodes) {
        throw std::length_error("graph exceeds " + std::to_string(kMaxNodes) + " nodes");
    }
    nodes_.emplace(id, std::move(label));
    if (id.value >= next_id_) next_id_ = id.value + 1;
}

void LabeledGraph::set_label(NodeId id, std::optional<Label> label) {
    auto it = nodes_.find(id);
    if (it == nodes_.end()) {
        throw std::invalid_argument("unknown node id " + std::to_string(id.value));
    }
    it->second = std::move(label);
}

void LabeledGraph::add_edge(NodeId from, NodeId to, std::string rel) {
    if (!has_node(from) || !has_node(to)) {
        throw std::invalid_argument("edge endpoint not declared: " +
                                    std::to_string(from.value) + " -> " + std::to_string(to.value));
    }
    if (!valid_token(rel)) {
        throw std::invalid_argument("bad relation token: '" + rel + "'");
    }
    edges_.insert(Edge{from, to, std::move(rel)});
}

void LabeledGraph::remove_edge(const Edge& e) {
    edges_.erase(e);
}

void LabeledGraph::remove_node(NodeId id) {
    auto it = nodes_.find(id);
    if (it == nodes_.end()) {
        throw std::invalid_argument("unknown node id " + std::to_string(id.value));
    }
    for (const Edge& e : edges_) {
        if (e.from == id || e.to == id) {
            throw std::logic_error("removing node " + std::to_string(id.value) +
                                   " with incident edges");
        }
    }
    nodes_.erase(it);
}

const std::optional<Label>& LabeledGraph::label(NodeId id) const {
    auto it = nodes_.find(id);
    if (it == nodes_.end()) {
        throw std::invalid_argument("unknown node id " + std::to_string(id.value));
    }
    return it->second;
}

std::vector<NodeId> LabeledGraph::node_ids() const {
    std::vector<NodeId> ids;
    ids.reserve(nodes_.size());
    for (const auto& [id, label] : nodes_) ids.push_back(id);
    return ids;
}

std::vector<Edge> LabeledGraph::out_edges(NodeId id) const {
    std::vector<Edge> out;
    for (const Edge& e : edges_)
        if (e.from == id) out.push_back(e);
    return out;
}

std::vector<Edge> LabeledGraph::in_edges(NodeId id) const {
    std::vector<Edge> in;
    for (const Edge& e : edges_)
        if (e.to == id) in.push_back(e);
    return in;
}

std::size_t LabeledGraph::out_degree(NodeId id) const {
    std::size_t n = 0;
    for (const Edge& e : edges_)
        if (e.from == id) ++n;
    return n;
}

std::size_t LabeledGraph::in_degree(NodeId id) const {
    std::size_t n = 0;
    for (const Edge& e : edges_)
        if (e.to == id) ++n;
    return n;
}

LabeledGraph build_graph(
    const std::vector<std::pair<NodeId, std::optional<Label>>>& node_specs,
    const std::vector<std::tuple<NodeId, NodeId, std::string>>& edge_specs) {
    LabeledGraph g;
    for (const auto& [id, label] : node_specs) g.add_node_with_id(id, label);
    for (const auto& [from, to, rel] : edge_specs) g.add_edge(from, to, rel);
    return g;
}

namespace {

// Iterated signature refinement.  Colors start from (label, out-degree,
// in-degree) and are refined by the sorted multisets of (relation, neighbor
// color) pairs until the partition stops changing.  Colors are ranks of
// sorted signature strings, so they depend only on graph structure, never on
// node ids: any isomorphism maps refinement classes onto refinement classes
// with equal color.
std::vector<int> refine_colors(const LabeledGraph& g, const std::vector<NodeId>& ids) {
    const std::size_t n = ids.size();
    std::map<NodeId, std::size_t> index;
    for (std::size_t i = 0; i < n; ++i) index[ids[i]] = i;

    struct Arc {
        std::size_t peer;
        std::string rel;
    };
    std::vector<std::vector<Arc>> out(n), in(n);
    for (const Edge& e : g.edges()) {
        out[index[e.from]].push_back({index[e.to], e.rel});
        in[index[e.to]].push_back({index[e.from], e.rel});
    }

    std::vector<std::string> sig(n);
    for (std::size_t i = 0; i < n; ++i) {
        sig[i] = label_text(g.label(ids[i])) + "|" + std::to_string(out[i].size()) + "|" +
                 std::to_string(in[i].size());
    }

    std::vector<int> color(n, 0);
    auto rank = [&]() {
        std::vector<std::string> uniq(sig);
        std::sort(uniq.begin(), uniq.end());
        uniq.erase(std::unique(uniq.begin(), uniq.end()), uniq.end());
        std::map<std::string, int> r;
        for (std::size_t k = 0; k < uniq.size(); ++k) r[uniq[k]] = static_cast<int>(k);
        for (std::size_t i = 0; i < n; ++i) color[i] = r[sig[i]];
        return uniq.size();
    };

    std::size_t classes = rank();
    while (classes < n) {
        for (std::size_t i = 0; i < n; ++i) {
            std::vector<std::string> os, is;
            for (const Arc& a : out[i]) os.push_back(a.rel + ":" + std::to_string(color[a.peer]));
            for (const Arc& a : in[i]) is.push_back(a.rel + ":" + std::to_string(color[a.peer]));
            std::sort(os.begin(), os.end());
            std::sort(is.begin(), is.end());
            std::string s = std::to_string(color[i]) + "|o";
            for (const std::string& t : os) s += t + ",";
            s += "|i";
            for (const std::string& t : is) s += t + ",";
            sig[i] = std::move(s);
        }
        std::size_t next = rank();
        if (next == classes) break; // refinement is monotone: equal count means identical partition
        classes = next;
    }
    return color;
}

std::string serialize_ordering(const LabeledGraph& g, const std::vector<NodeId>& ids,
                               const std::vector<std::size_t>& order) {
    std::vector<std::size_t> pos(order.size());
    for (std::size_t p = 0; p < order.size(); ++p) pos[order[p]] = p;

    std::map<NodeId, std::size_t> index;
    for (std::size_t i = 0; i < ids.size(); ++i) index[ids[i]] = i;

    std::string s = "N" + std::to_string(ids.size()) + "|";
    for (std::size_t p = 0; p < order.size(); ++p) {
        s += label_text(g.label(ids[order[p]]));
        s += ",";
    }
    s += "|";
    std::vector<std::tuple<std::size_t, std::string, std::size_t>> edges;
    for (const Edge& e : g.edges()) {
        edges.emplace_back(pos[index[e.from]], e.rel, pos[index[e.to]]);
    }
    std::sort(edges.begin(), edges.end());
    for (const auto& [f, rel, t] : edges) {
        s += std::to_string(f) + ">" + rel + ">" + std::to_string(t) + ";";
    }
    return s;
}

} // namespace

std::string canonical_form(const LabeledGraph& g) {
    const std::vector<NodeId> ids = g.node_ids();
    const std::size_t n = ids.size();
    if (n == 0) return "N0||";

    const std::vector<int> color = refine_colors(g, ids);
    int classes = 0;
    for (int c : color) classes = std::max(classes, c + 1);

    std::vector<std::vector<std::size_t>> groups(classes);
    for (std::size_t i = 0; i < n; ++i) groups[color[i]].push_back(i);

    // Permutation budget: the product of factorials over class sizes.
    double total = 1.0;
    for (const auto& grp : groups) {
        for (std::size_t k = 2; k <= grp.size(); ++k) total *= static_cast<double>(k);
        if (total > 2e6) {
            throw std::length_error("graph too symmetric for exhaustive canonicalization");
        }
    }

    std::vector<std::size_t> order;
    order.reserve(n);
    std::string best;
    bool first = true;
    while (true) {
        order.clear();
        for (const auto& grp : groups) order.insert(order.end(), grp.begin(), grp.end());
        std::string s = serialize_ordering(g, ids, order);
        if (first || s < best) {
            best = std::move(s);
            first = false;
        }
        // odometer over per-class permutations, last class fastest
        int k = classes - 1;
        while (k >= 0 && !std::next_permutation(groups[k].begin(), groups[k].end())) --k;
        if (k < 0) break;
    }
    return best;
}

LabelPredicate label_equal() {
    return [](const std::optional<Label>& p, const std::optional<Label>& h) { return p == h; };
}

namespace {

struct MatchSearch {
    const LabeledGraph& pattern;
    const LabeledGraph& host;
    const LabelPredicate& label_ok;
    std::vector<NodeId> pattern_order;
    std::vector<NodeId> host_ids;
    Matching current;
    std::set<NodeId> used;
    std::vector<Matching> results;

    bool edges_consistent(NodeId p, NodeId v) const {
        for (const Edge& e : pattern.edges()) {
            if (e.from == p && current.count(e.to)) {
                if (!host.has_edge({v, current.at(e.to), e.rel})) return false;
            }
            if (e.to == p && current.count(e.from)) {
                if (!host.has_edge({current.at(e.from), v, e.rel})) return false;
            }
            if (e.from == p && e.to == p) {
                if (!host.has_edge({v, v, e.rel})) return false;
            }
        }
        return true;
    }

    void search(std::size_t depth) {
        if (depth == pattern_order.size()) {
            results.push_back(current);
            return;
        }
        NodeId p = pattern_order[depth];
        for (NodeId v : host_ids) {
            if (used.count(v)) continue;
            if (!label_ok(pattern.label(p), host.label(v))) continue;
            if (pattern.out_degree(p) > host.out_degree(v)) continue;
            if (pattern.in_degree(p) > host.in_degree(v)) continue;
            if (!edges_consistent(p, v)) continue;
            current[p] = v;
            used.insert(v);
            search(depth + 1);
            used.erase(v);
            current.erase(p);
        }
    }
};

// Pattern nodes in a connectivity-first order so edge checks prune early.
std::vector<NodeId> connected_order(const LabeledGraph& pattern) {
    std::vector<NodeId> ids = pattern.node_ids();
    std::vector<NodeId> order;
    std::set<NodeId> seen;
    for (NodeId seed : ids) {
        if (seen.count(seed)) continue;
        std::vector<NodeId> queue{seed};
        seen.insert(seed);
        while (!queue.empty()) {
            NodeId u = queue.front();
            queue.erase(queue.begin());
            order.push_back(u);
            for (const Edge& e : pattern.edges()) {
                NodeId peer;
                if (e.from == u) peer = e.to;
                else if (e.to == u) peer = e.from;
                else continue;
                if (!seen.count(peer)) {
                    seen.insert(peer);
                    queue.push_back(peer);
                }
            }
        }
    }
    return order;
}

} // namespace

std::vector<Matching> find_matchings(const LabeledGraph& pattern, const LabeledGraph& host,
                                     const LabelPredicate& label_ok) {
    if (pattern.empty()) {
        throw std::invalid_argument("find_matchings: empty pattern");
    }
    MatchSearch s{pattern, host, label_ok, connected_order(pattern), host.node_ids(), {}, {}, {}};
    s.search(0);
    std::sort(s.results.begin(), s.results.end(),
              [](const Matching& a, const Matching& b) {
                  return std::lexicographical_compare(
                      a.begin(), a.end(), b.begin(), b.end(),
                      [](const auto& x, const auto& y) {
                          return std::tie(x.first, x.second) < std::tie(y.first, y.second);
                      });
              });
    return s.results;
}

std::string to_dot(const LabeledGraph& g) {
    std::ostringstream os;
    os << "digraph G {\n";
    for (const auto& [id, label] : g.nodes()) {
        os << "  n" << id.value << " [label=\"" << label_text(label) << "\"];\n";
    }
    for (const Edge& e : g.edges()) {
        os << "  n" << e.from.value << " -> n" << e.to.value << " [label=\"" << e.rel << "\"];\n";
    }
    os << "}\n";
    return os.str();
}

} // namespace icongloss
