#include "icongloss/verbalize.hpp"

#include "icongloss/error.hpp"
#include "text_util.hpp"

#include <algorithm>
#include <set>

namespace icongloss {

namespace {

const std::set<std::string> kSemanticRelations = {"i", "ii", "iii", "attr"};

Label parse_label_or_throw(const std::string& token, int line) {
    try {
        return Label::parse(token);
    } catch (const std::invalid_argument& ex) {
        throw DataError(ex.what(), line);
    }
}

// "key=value" split; the value may be quoted or contain quoted sections.
std::pair<std::string, std::string> split_kv(const std::string& token, int line) {
    std::size_t eq = token.find('=');
    if (eq == std::string::npos) throw DataError("expected key=value, got '" + token + "'", line);
    return {token.substr(0, eq), token.substr(eq + 1)};
}

std::string unquote(const std::string& s, int line) {
    if (s.size() < 2 || s.front() != '"' || s.back() != '"') {
        throw DataError("expected a quoted string, got '" + s + "'", line);
    }
    return s.substr(1, s.size() - 2);
}

} // namespace

const Fragment* Lexicon::fragment_for(const Label& c) const {
    auto it = tr_.find(c);
    return it == tr_.end() ? nullptr : &it->second;
}

const Template* Lexicon::template_for(const Label& sem, const std::string& lang) const {
    auto it = templates_.find({sem, lang});
    return it == templates_.end() ? nullptr : &it->second;
}

std::vector<Label> Lexicon::fragment_semantemes() const {
    std::set<Label> sems;
    for (const auto& [c, frag] : tr_) {
        for (const auto& [id, label] : frag.graph.nodes()) {
            if (label) sems.insert(*label);
        }
    }
    return {sems.begin(), sems.end()};
}

Lexicon load_lexicon(std::string_view document, const Hierarchy& h) {
    using detail::split_on;
    using detail::split_ws;
    using detail::split_ws_quoted;

    Lexicon lex;
    for (const auto& [lineno, line] : detail::content_lines(document)) {
        auto first_ws = line.find_first_of(" \t");
        std::string keyword = line.substr(0, first_ws);

        if (keyword == "language") {
            auto tokens = split_ws(line);
            if (tokens.size() != 2) throw DataError("expected 'language <code>'", lineno);
            if (std::count(lex.languages_.begin(), lex.languages_.end(), tokens[1])) {
                throw DataError("duplicate language '" + tokens[1] + "'", lineno);
            }
            lex.languages_.push_back(tokens[1]);

        } else if (keyword == "tr") {
            std::size_t arrow = line.find("=>");
            if (arrow == std::string::npos) throw DataError("expected '=>'", lineno);
            auto head = split_ws(line.substr(0, arrow));
            if (head.size() != 2) throw DataError("expected 'tr <c:Label> => ...'", lineno);
            Label target = parse_label_or_throw(head[1], lineno);
            if (target.ns != Ns::Concept || !h.has_concept(target)) {
                throw DataError("unknown concept " + head[1], lineno);
            }
            if (lex.tr_.count(target)) {
                throw DataError("duplicate tr entry for " + target.str(), lineno);
            }

            // fragment body: node tokens "s:name[*head]", edge groups "(from rel to)"
            std::string body = line.substr(arrow + 2);
            Fragment frag;
            std::map<Label, NodeId> by_label;
            std::optional<NodeId> head_node;
            std::vector<std::string> edge_groups;
            std::size_t i = 0;
            while (i < body.size()) {
                while (i < body.size() && std::isspace(static_cast<unsigned char>(body[i]))) ++i;
                if (i >= body.size()) break;
                if (body[i] == '(') {
                    std::size_t close = body.find(')', i);
                    if (close == std::string::npos) throw DataError("unclosed '('", lineno);
                    edge_groups.push_back(body.substr(i + 1, close - i - 1));
                    i = close + 1;
                } else {
                    std::size_t end = body.find_first_of(" \t(", i);
                    std::string token = body.substr(i, end == std::string::npos ? end : end - i);
                    i = end == std::string::npos ? body.size() : end;
                    bool is_head = false;
                    if (token.size() > 5 && token.ends_with("*head")) {
                        is_head = true;
                        token.resize(token.size() - 5);
                    }
                    Label sem = parse_label_or_throw(token, lineno);
                    if (sem.ns != Ns::Sem) {
                        throw DataError("fragment node " + sem.str() + " is not a semanteme",
                                        lineno);
                    }
                    if (by_label.count(sem)) {
                        throw DataError("duplicate semanteme " + sem.str() + " in fragment",
                                        lineno);
                    }
                    NodeId id = frag.graph.add_node(sem);
                    by_label.emplace(sem, id);
                    if (is_head) {
                        if (head_node) throw DataError("fragment has two heads", lineno);
                        head_node = id;
                    }
                }
            }
            if (frag.graph.empty()) throw DataError("empty fragment", lineno);
            if (!head_node) throw DataError("fragment head missing (mark one node '*head')", lineno);
            frag.head = *head_node;
            for (const std::string& group : edge_groups) {
                auto words = split_ws(group);
                if (words.size() != 3) {
                    throw DataError("expected '(s:from rel s:to)', got '(" + group + ")'", lineno);
                }
                Label from = parse_label_or_throw(words[0], lineno);
                Label to = parse_label_or_throw(words[2], lineno);
                if (!by_label.count(from) || !by_label.count(to)) {
                    throw DataError("edge references a semanteme outside the fragment", lineno);
                }
                if (!kSemanticRelations.count(words[1])) {
                    throw DataError("fragment edge relation must be one of i/ii/iii/attr", lineno);
                }
                frag.graph.add_edge(by_label.at(from), by_label.at(to), words[1]);
            }
            lex.tr_.emplace(target, std::move(frag));

        } else if (keyword == "lex") {
            auto tokens = split_ws_quoted(line);
            if (tokens.size() < 4) {
                throw DataError("expected 'lex <s:name> <lang> lemma=\"...\" ...'", lineno);
            }
            Label sem = parse_label_or_throw(tokens[1], lineno);
            if (sem.ns != Ns::Sem) throw DataError("lex entry must name a semanteme", lineno);
            const std::string& lang = tokens[2];
            Template tpl;
            bool have_lemma = false;
            for (std::size_t k = 3; k < tokens.size(); ++k) {
                auto [key, value] = split_kv(tokens[k], lineno);
                if (key == "lemma") {
                    tpl.lemma = unquote(value, lineno);
                    have_lemma = true;
                } else if (key == "pre") {
                    for (const std::string& rel : split_on(value, ',')) {
                        if (!kSemanticRelations.count(rel)) {
                            throw DataError("pre slot relation must be one of i/ii/iii/attr",
                                            lineno);
                        }
                        tpl.pre_slots.push_back(rel);
                    }
                } else if (key == "post") {
                    for (const std::string& slot : split_on(value, ',')) {
                        std::size_t colon = slot.find(':');
                        if (colon == std::string::npos) {
                            throw DataError("post slot must be rel:\"connector\"", lineno);
                        }
                        std::string rel = slot.substr(0, colon);
                        if (!kSemanticRelations.count(rel)) {
                            throw DataError("post slot relation must be one of i/ii/iii/attr",
                                            lineno);
                        }
                        tpl.post_slots.emplace_back(rel, unquote(slot.substr(colon + 1), lineno));
                    }
                } else {
                    throw DataError("unknown template key '" + key + "'", lineno);
                }
            }
            if (!have_lemma) throw DataError("template needs lemma=\"...\"", lineno);
            if (!lex.templates_.emplace(std::make_pair(sem, lang), std::move(tpl)).second) {
                throw DataError("duplicate template for " + sem.str() + " / " + lang, lineno);
            }

        } else {
            throw DataError("expected 'language', 'tr' or 'lex', got '" + keyword + "'", lineno);
        }
    }

    // every template's language must be declared
    for (const auto& [key, tpl] : lex.templates_) {
        if (!std::count(lex.languages_.begin(), lex.languages_.end(), key.second)) {
            throw DataError("template for " + key.first.str() + " uses undeclared language '" +
                            key.second + "'");
        }
    }
    // every fragment semanteme must have a template in every declared language
    for (const Label& sem : lex.fragment_semantemes()) {
        for (const std::string& lang : lex.languages_) {
            if (!lex.template_for(sem, lang)) {
                throw DataError("missing template for " + sem.str() + " in language '" + lang +
                                "'");
            }
        }
    }
    return lex;
}

Fragment translate_concept(const Lexicon& lex, const Hierarchy& h, const Label& c) {
    if (c.ns != Ns::Concept) {
        throw std::invalid_argument("translate_concept expects a concept label");
    }
    // entry-bearing ancestors (including c itself), then the minimal ones
    std::vector<Label> bearing;
    if (lex.fragment_for(c)) {
        bearing.push_back(c);
    } else {
        if (!h.has_concept(c)) throw DataError("unknown concept " + c.str());
        for (const Label& b : h.concepts()) {
            if (lex.fragment_for(b) && h.is_subtype(c, b)) bearing.push_back(b);
        }
    }
    std::vector<Label> minimal;
    for (const Label& b : bearing) {
        bool dominated = false;
        for (const Label& other : bearing) {
            if (other != b && h.is_subtype(other, b)) {
                dominated = true;
                break;
            }
        }
        if (!dominated) minimal.push_back(b);
    }
    if (minimal.empty()) {
        throw DataError("no translation entry for " + c.str() + " or any of its ancestors");
    }
    if (minimal.size() > 1) {
        std::string msg = "ambiguous translation for " + c.str() + ": entries for";
        for (const Label& b : minimal) msg += " " + b.str();
        throw DataError(msg);
    }

    const Fragment& stored = *lex.fragment_for(minimal.front());
    Fragment fresh;
    std::map<NodeId, NodeId> remap;
    for (const auto& [id, label] : stored.graph.nodes()) {
        NodeId fresh_id{lex.next_fresh_->fetch_add(1)};
        fresh.graph.add_node_with_id(fresh_id, label);
        remap[id] = fresh_id;
    }
    for (const Edge& e : stored.graph.edges()) {
        fresh.graph.add_edge(remap.at(e.from), remap.at(e.to), e.rel);
    }
    fresh.head = remap.at(stored.head);
    return fresh;
}

namespace {

struct Linearizer {
    const LabeledGraph& g;
    const Lexicon& lex;
    const std::string& lang;
    std::set<NodeId> on_stack;
    std::set<NodeId> visited;

    // reachable subgraph, for deterministic sibling ordering
    std::string subtree_key(NodeId root) const {
        std::set<NodeId> keep{root};
        std::vector<NodeId> queue{root};
        while (!queue.empty()) {
            NodeId u = queue.back();
            queue.pop_back();
            for (const Edge& e : g.out_edges(u)) {
                if (keep.insert(e.to).second) queue.push_back(e.to);
            }
        }
        LabeledGraph sub;
        for (NodeId id : keep) sub.add_node_with_id(id, g.label(id));
        for (const Edge& e : g.edges()) {
            if (keep.count(e.from) && keep.count(e.to)) sub.add_edge(e.from, e.to, e.rel);
        }
        return canonical_form(sub);
    }

    std::vector<NodeId> children(NodeId v, const std::string& rel) const {
        std::vector<NodeId> out;
        for (const Edge& e : g.out_edges(v)) {
            if (e.rel == rel) out.push_back(e.to);
        }
        std::sort(out.begin(), out.end(), [&](NodeId a, NodeId b) {
            std::string ka = subtree_key(a), kb = subtree_key(b);
            return std::tie(ka, a) < std::tie(kb, b);
        });
        return out;
    }

    void realize(NodeId v, std::vector<std::string>& chunks) {
        if (!on_stack.insert(v).second) {
            throw DataError("cycle in semantic graph at " + g.label(v)->str());
        }
        visited.insert(v);
        const Label& sem = *g.label(v);
        const Template* tpl = lex.template_for(sem, lang);
        if (!tpl) {
            throw DataError("missing template for " + sem.str() + " in language '" + lang + "'");
        }
        std::set<std::string> covered;
        for (const std::string& rel : tpl->pre_slots) {
            covered.insert(rel);
            for (NodeId child : children(v, rel)) realize(child, chunks);
        }
        chunks.push_back(tpl->lemma);
        for (const auto& [rel, connector] : tpl->post_slots) {
            covered.insert(rel);
            for (NodeId child : children(v, rel)) {
                if (!connector.empty()) chunks.push_back(connector);
                realize(child, chunks);
            }
        }
        for (const Edge& e : g.out_edges(v)) {
            if (!covered.count(e.rel)) {
                throw DataError("no slot for relation '" + e.rel + "' on " + sem.str() +
                                " in language '" + lang + "'");
            }
        }
        on_stack.erase(v);
    }
};

} // namespace

std::string linearize(const LabeledGraph& g, const Lexicon& lex, const std::string& lang) {
    if (g.empty()) throw std::invalid_argument("linearize: empty graph");
    for (const auto& [id, label] : g.nodes()) {
        if (!label || label->ns != Ns::Sem) {
            throw std::invalid_argument("linearize: graph is not terminal");
        }
    }
    std::vector<NodeId> roots;
    for (NodeId id : g.node_ids()) {
        if (g.in_degree(id) == 0) roots.push_back(id);
    }
    if (roots.size() != 1) {
        throw DataError("semantic graph has " + std::to_string(roots.size()) +
                        " roots, expected exactly one");
    }

    Linearizer lin{g, lex, lang, {}, {}};
    std::vector<std::string> chunks;
    lin.realize(roots.front(), chunks);
    if (lin.visited.size() != g.node_count()) {
        throw std::invalid_argument("linearize: graph is not connected from its root");
    }

    std::string phrase;
    for (const std::string& c : chunks) {
        if (!phrase.empty()) phrase += ' ';
        phrase += c;
    }
    return phrase;
}

} // namespace icongloss
