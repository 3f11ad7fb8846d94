#include "icongloss/ontology.hpp"

#include "icongloss/error.hpp"
#include "text_util.hpp"

#include <algorithm>
#include <deque>

namespace icongloss {

namespace {

const std::set<std::string> kSemanticRelations = {"i", "ii", "iii", "attr"};

Label parse_concept_label(const std::string& token, int line) {
    Label l = [&] {
        try {
            return Label::parse(token);
        } catch (const std::invalid_argument& ex) {
            throw DataError(ex.what(), line);
        }
    }();
    if (l.ns != Ns::Concept) {
        throw DataError("expected a concept label, got '" + token + "'", line);
    }
    return l;
}

} // namespace

bool Hierarchy::has_concept(const Label& c) const {
    return c.ns == Ns::Concept && concepts_.count(c) != 0;
}

const std::vector<Label>& Hierarchy::parents(const Label& c) const {
    static const std::vector<Label> kNone;
    auto it = parents_.find(c);
    return it == parents_.end() ? kNone : it->second;
}

std::set<Label> Hierarchy::ancestors_of(const Label& c) const {
    std::scoped_lock lock(memo_->mutex);
    auto it = memo_->ancestors.find(c);
    if (it != memo_->ancestors.end()) return it->second;

    std::set<Label> anc;
    std::deque<Label> queue{c};
    while (!queue.empty()) {
        Label cur = queue.front();
        queue.pop_front();
        auto pit = parents_.find(cur);
        if (pit == parents_.end()) continue;
        for (const Label& p : pit->second) {
            if (anc.insert(p).second) queue.push_back(p);
        }
    }
    memo_->ancestors.emplace(c, anc);
    return anc;
}

bool Hierarchy::is_subtype(const Label& a, const Label& b) const {
    if (!has_concept(a)) throw DataError("unknown concept " + a.str());
    if (!has_concept(b)) throw DataError("unknown concept " + b.str());
    if (a == b) return true;
    return ancestors_of(a).count(b) != 0;
}

Hierarchy load_ontology(std::string_view document) {
    using detail::split_on;
    using detail::split_ws;

    Hierarchy h;
    const auto lines = detail::content_lines(document);

    // pass 1: declarations
    for (const auto& [lineno, line] : lines) {
        auto tokens = split_ws(line);
        if (tokens[0] == "concept") {
            if (tokens.size() < 2) throw DataError("concept declaration needs a label", lineno);
            Label c = parse_concept_label(tokens[1], lineno);
            if (!h.concepts_.insert(c).second) {
                throw DataError("duplicate concept " + c.str(), lineno);
            }
        } else if (tokens[0] == "relation") {
            if (tokens.size() < 2) throw DataError("relation declaration needs a token", lineno);
            const std::string& rel = tokens[1];
            if (kSemanticRelations.count(rel)) {
                throw DataError("relation token '" + rel + "' is reserved for semantic edges",
                                lineno);
            }
            if (!h.relations_.emplace(rel, RelationSig{rel, {}, {}}).second) {
                throw DataError("duplicate relation '" + rel + "'", lineno);
            }
        } else {
            throw DataError("expected 'concept' or 'relation', got '" + tokens[0] + "'", lineno);
        }
    }

    // pass 2: references
    for (const auto& [lineno, line] : lines) {
        auto tokens = split_ws(line);
        if (tokens[0] == "concept") {
            if (tokens.size() == 2) continue;
            if (tokens[2] != "isa") {
                throw DataError("expected 'isa', got '" + tokens[2] + "'", lineno);
            }
            std::string rest;
            for (std::size_t i = 3; i < tokens.size(); ++i) rest += tokens[i] + " ";
            Label child = parse_concept_label(tokens[1], lineno);
            for (const std::string& part : split_on(rest, ',')) {
                if (part.empty()) throw DataError("empty parent in isa list", lineno);
                Label parent = parse_concept_label(part, lineno);
                if (!h.concepts_.count(parent)) {
                    throw DataError("undeclared concept " + parent.str(), lineno);
                }
                h.parents_[child].push_back(parent);
            }
        } else { // relation
            if (tokens.size() == 2) continue;
            if (tokens.size() != 6 || tokens[2] != "domain" || tokens[4] != "range") {
                throw DataError("expected 'relation <token> domain <c:X> range <c:Y>'", lineno);
            }
            Label dom = parse_concept_label(tokens[3], lineno);
            Label rng = parse_concept_label(tokens[5], lineno);
            if (!h.concepts_.count(dom)) throw DataError("undeclared concept " + dom.str(), lineno);
            if (!h.concepts_.count(rng)) throw DataError("undeclared concept " + rng.str(), lineno);
            auto& sig = h.relations_.at(tokens[1]);
            sig.domain = dom;
            sig.range = rng;
        }
    }

    // cycle check (DFS, reports one cycle)
    std::map<Label, int> state; // 0 new, 1 on stack, 2 done
    std::vector<Label> stack;
    auto dfs = [&](auto&& self, const Label& c) -> void {
        state[c] = 1;
        stack.push_back(c);
        for (const Label& p : h.parents(c)) {
            int s = state.count(p) ? state[p] : 0;
            if (s == 1) {
                std::string msg = "is-a cycle: ";
                auto it = std::find(stack.begin(), stack.end(), p);
                for (; it != stack.end(); ++it) msg += it->str() + " -> ";
                msg += p.str();
                throw DataError(msg);
            }
            if (s == 0) self(self, p);
        }
        stack.pop_back();
        state[c] = 2;
    };
    for (const Label& c : h.concepts_) {
        if (!state.count(c)) dfs(dfs, c);
    }

    // single top concept
    if (!h.concepts_.empty()) {
        std::vector<Label> roots;
        for (const Label& c : h.concepts_) {
            if (h.parents(c).empty()) roots.push_back(c);
        }
        if (roots.size() != 1) {
            std::string msg = "expected exactly one top concept, found " +
                              std::to_string(roots.size()) + ":";
            for (const Label& r : roots) msg += " " + r.str();
            throw DataError(msg);
        }
    }
    return h;
}

LabelPredicate subsumption_predicate(const Hierarchy& h) {
    return [&h](const std::optional<Label>& pattern, const std::optional<Label>& host) {
        if (!pattern || !host) return false;
        if (pattern->ns != Ns::Concept || host->ns != Ns::Concept) return false;
        if (!h.has_concept(*host) || !h.has_concept(*pattern)) return false;
        return h.is_subtype(*host, *pattern);
    };
}

} // namespace icongloss
