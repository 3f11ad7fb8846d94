#include "icongloss/iconparse.hpp"

#include "icongloss/error.hpp"
#include "text_util.hpp"
#include "xml_graph.hpp"

#include <algorithm>

namespace icongloss {

namespace {

bool valid_code_token(std::string_view t) {
    if (t.empty()) return false;
    for (char c : t) {
        bool ok = (c >= 'a' && c <= 'z') || (c >= '0' && c <= '9') || c == '_';
        if (!ok) return false;
    }
    return true;
}

} // namespace

std::string IconCode::str() const {
    std::string s;
    for (std::size_t i = 0; i < fields.size(); ++i) {
        if (i) s += '-';
        s += fields[i];
    }
    return s;
}

IconCode parse_code(std::string_view text) {
    std::vector<std::string> tokens;
    std::size_t i = 0;
    while (i < text.size()) {
        while (i < text.size() && text[i] == '-') ++i; // runs of '-' are one separator
        std::size_t start = i;
        while (i < text.size() && text[i] != '-') ++i;
        if (i > start) tokens.emplace_back(text.substr(start, i - start));
    }
    if (tokens.size() != 7) {
        throw UsageError("icon code '" + std::string(text) + "' has " +
                         std::to_string(tokens.size()) + " fields, expected 7");
    }
    IconCode code;
    for (std::size_t k = 0; k < 7; ++k) {
        if (!valid_code_token(tokens[k])) {
            throw UsageError("field " + std::to_string(k + 1) + " of icon code has illegal token '" +
                             tokens[k] + "'");
        }
        code.fields[k] = std::move(tokens[k]);
    }
    return code;
}

void Dictionary::add(int field, const std::string& token, AssertionBundle bundle) {
    entries_[{field, token}].push_back(std::move(bundle));
}

const std::vector<AssertionBundle>* Dictionary::lookup(int field, const std::string& token) const {
    auto it = entries_.find({field, token});
    return it == entries_.end() ? nullptr : &it->second;
}

std::size_t Dictionary::entry_count() const {
    std::size_t n = 0;
    for (const auto& [key, bundles] : entries_) n += bundles.size();
    return n;
}

Dictionary load_dictionary(std::string_view document, const Hierarchy& h) {
    using detail::split_on;
    using detail::split_ws;
    using detail::trim;

    Dictionary dict;
    for (const auto& [lineno, line] : detail::content_lines(document)) {
        std::size_t arrow = line.find("=>");
        if (arrow == std::string::npos) throw DataError("expected '=>'", lineno);
        auto head = split_ws(line.substr(0, arrow));
        if (head.size() != 3 || head[0] != "map") {
            throw DataError("expected 'map <field#> <token> => ...'", lineno);
        }
        int field = 0;
        try {
            field = std::stoi(head[1]);
        } catch (const std::exception&) {
            throw DataError("bad field number '" + head[1] + "'", lineno);
        }
        if (field < 1 || field > 7) {
            throw DataError("field number " + std::to_string(field) + " out of range 1-7", lineno);
        }
        const std::string& token = head[2];
        if (!valid_code_token(token)) throw DataError("bad token '" + token + "'", lineno);
        if (token == "null") throw DataError("the null token cannot be mapped", lineno);

        AssertionBundle bundle;
        for (const std::string& part : split_on(line.substr(arrow + 2), '&')) {
            auto words = split_ws(part);
            if (words.size() != 2) {
                throw DataError("expected '<relation> <c:Label>' in assertion", lineno);
            }
            if (!h.has_relation(words[0])) {
                throw DataError("undeclared relation '" + words[0] + "'", lineno);
            }
            Label target = [&] {
                try {
                    return Label::parse(words[1]);
                } catch (const std::invalid_argument& ex) {
                    throw DataError(ex.what(), lineno);
                }
            }();
            if (!h.has_concept(target)) {
                throw DataError("undeclared concept " + target.str(), lineno);
            }
            bundle.assertions.emplace_back(words[0], target);
        }
        if (bundle.assertions.empty()) throw DataError("empty assertion bundle", lineno);
        dict.add(field, token, std::move(bundle));
    }
    return dict;
}

std::vector<VetoPattern> load_vetoes(std::string_view document, const Hierarchy& h) {
    auto tree = detail::parse_xml(document);
    auto root = tree.get_child_optional("vetoes");
    if (!root) throw DataError("veto file must have a <vetoes> root");

    std::vector<VetoPattern> vetoes;
    int n = 0;
    for (const auto& [key, elem] : *root) {
        if (key == "<xmlattr>" || key == "<xmlcomment>") continue;
        if (key != "veto") throw DataError("unexpected element <" + key + "> under <vetoes>");
        ++n;
        VetoPattern v;
        v.id = detail::optional_attr(elem, "id").value_or("veto-" + std::to_string(n));
        v.reason = detail::require_attr(elem, "reason", "veto '" + v.id + "'");
        auto parsed = detail::read_graph_elements(elem, "veto '" + v.id + "'", false);
        if (parsed.graph.empty()) throw DataError("veto '" + v.id + "' has an empty pattern");
        for (const auto& [id, label] : parsed.graph.nodes()) {
            if (!label || label->ns != Ns::Concept || !h.has_concept(*label)) {
                throw DataError("veto '" + v.id + "': label " +
                                (label ? label->str() : std::string("_")) +
                                " is not a declared concept");
            }
        }
        for (const Edge& e : parsed.graph.edges()) {
            if (!h.has_relation(e.rel)) {
                throw DataError("veto '" + v.id + "': undeclared relation '" + e.rel + "'");
            }
        }
        v.pattern = std::move(parsed.graph);
        vetoes.push_back(std::move(v));
    }
    return vetoes;
}

std::vector<LabeledGraph> expand(const IconCode& code, const Dictionary& dict) {
    struct FieldChoices {
        int field;
        const std::vector<AssertionBundle>* bundles;
    };
    std::vector<FieldChoices> fields;
    for (std::size_t i = 0; i < 7; ++i) {
        if (code.is_null(i)) continue;
        int field = static_cast<int>(i + 1);
        const auto* bundles = dict.lookup(field, code.fields[i]);
        if (!bundles) {
            throw DataError("no dictionary entry for token '" + code.fields[i] + "' in field " +
                            std::to_string(field));
        }
        fields.push_back({field, bundles});
    }

    std::vector<LabeledGraph> out;
    std::vector<std::size_t> choice(fields.size(), 0);
    while (true) {
        LabeledGraph g;
        NodeId center = g.add_node(Label::concept_label("Medical_state"));
        for (std::size_t k = 0; k < fields.size(); ++k) {
            const AssertionBundle& bundle = (*fields[k].bundles)[choice[k]];
            for (const auto& [rel, target] : bundle.assertions) {
                NodeId leaf = g.add_node(target);
                g.add_edge(center, leaf, rel);
            }
        }
        out.push_back(std::move(g));

        // odometer, last field fastest
        std::size_t k = fields.size();
        while (k > 0) {
            --k;
            if (++choice[k] < fields[k].bundles->size()) break;
            choice[k] = 0;
            if (k == 0) return out;
        }
        if (fields.empty()) return out;
    }
}

std::vector<LabeledGraph> filter_valid(const std::vector<LabeledGraph>& candidates,
                                       const std::vector<VetoPattern>& vetoes,
                                       const Hierarchy& h) {
    const LabelPredicate subsumes = subsumption_predicate(h);
    std::vector<LabeledGraph> kept;
    for (const LabeledGraph& g : candidates) {
        bool vetoed = false;
        for (const VetoPattern& v : vetoes) {
            if (!find_matchings(v.pattern, g, subsumes).empty()) {
                vetoed = true;
                break;
            }
        }
        if (!vetoed) kept.push_back(g);
    }
    return kept;
}

} // namespace icongloss
