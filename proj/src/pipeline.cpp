#include "icongloss/pipeline.hpp"

#include "icongloss/error.hpp"
#include "icongloss/graph_json.hpp"

#include <fstream>
#include <ostream>
#include <set>
#include <sstream>

namespace icongloss {

namespace {

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw DataError(path + ": cannot open");
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

template <typename Fn>
auto with_file_context(const std::string& path, Fn&& fn) {
    try {
        return fn(read_file(path));
    } catch (const DataError& ex) {
        throw DataError(path + ": " + ex.what());
    }
}

std::vector<Label> rule_literal_semantemes(const std::vector<RewriteRule>& rules) {
    std::set<Label> sems;
    for (const RewriteRule& rule : rules) {
        for (const ProductNode& p : rule.product_nodes) {
            if (p.kind == ProductNode::Kind::Literal && p.label) sems.insert(*p.label);
        }
    }
    return {sems.begin(), sems.end()};
}

const char* stage_name(EmitStage stage) {
    switch (stage) {
    case EmitStage::Concept: return "concept";
    case EmitStage::Closure: return "closure";
    case EmitStage::Semantic: return "semantic";
    case EmitStage::Phrase: return "phrase";
    case EmitStage::All: return "all";
    }
    return "?";
}

void print_graph_text(std::ostream& out, const LabeledGraph& g) {
    for (const auto& [id, label] : g.nodes()) {
        out << "  node " << id.value << " " << (label ? label->str() : "_") << "\n";
    }
    for (const Edge& e : g.edges()) {
        out << "  edge " << e.from.value << " -" << e.rel << "-> " << e.to.value << "\n";
    }
}

void emit_stage(std::ostream& out, const RunConfig& config, const std::string& code,
                EmitStage stage, const CodeGloss& result) {
    const std::vector<LabeledGraph>* graphs = nullptr;
    switch (stage) {
    case EmitStage::Concept: graphs = &result.concepts; break;
    case EmitStage::Closure: graphs = &result.closure; break;
    case EmitStage::Semantic: graphs = &result.terminals; break;
    default: break;
    }

    switch (config.format) {
    case OutputFormat::Json: {
        nlohmann::json j;
        j["stage"] = stage_name(stage);
        j["code"] = code;
        if (graphs) {
            nlohmann::json arr = nlohmann::json::array();
            for (const LabeledGraph& g : *graphs) arr.push_back(graph_to_json(g));
            j["graphs"] = std::move(arr);
        } else {
            j["phrases"] = result.phrases;
        }
        out << j.dump(2) << "\n";
        break;
    }
    case OutputFormat::Dot:
        if (graphs) {
            for (std::size_t i = 0; i < graphs->size(); ++i) {
                out << "// " << code << " " << stage_name(stage) << " " << (i + 1) << "/"
                    << graphs->size() << "\n"
                    << to_dot((*graphs)[i]);
            }
            break;
        }
        [[fallthrough]]; // phrases have no dot form
    case OutputFormat::Text:
        if (graphs) {
            out << "== " << stage_name(stage) << " (" << code << "): " << graphs->size()
                << " graph" << (graphs->size() == 1 ? "" : "s") << " ==\n";
            for (std::size_t i = 0; i < graphs->size(); ++i) {
                out << "graph " << (i + 1) << "/" << graphs->size() << ":\n";
                print_graph_text(out, (*graphs)[i]);
            }
        } else {
            out << "== phrase (" << code << "): " << result.phrases.size() << " ==\n";
            for (const std::string& p : result.phrases) out << p << "\n";
        }
        break;
    }
}

} // namespace

DataSet load_data(const RunConfig& config) {
    DataSet data;
    data.hierarchy = with_file_context(config.ontology_path,
                                       [](const std::string& t) { return load_ontology(t); });
    data.dictionary = with_file_context(config.dictionary_path, [&](const std::string& t) {
        return load_dictionary(t, data.hierarchy);
    });
    data.vetoes = with_file_context(config.vetoes_path, [&](const std::string& t) {
        return load_vetoes(t, data.hierarchy);
    });
    data.rules = with_file_context(config.rules_path, [&](const std::string& t) {
        return load_rules(t, data.hierarchy);
    });
    data.lexicon = with_file_context(config.lexicon_path, [&](const std::string& t) {
        return load_lexicon(t, data.hierarchy);
    });

    // rule literals need realizations too; fragments were checked at load
    for (const Label& sem : rule_literal_semantemes(data.rules)) {
        for (const std::string& lang : data.lexicon.languages()) {
            if (!data.lexicon.template_for(sem, lang)) {
                throw DataError(config.lexicon_path + ": missing template for " + sem.str() +
                                " in language '" + lang + "' (used as a rule literal)");
            }
        }
    }
    return data;
}

CodeGloss gloss_code(const DataSet& data, const IconCode& code, std::size_t cap,
                     const std::string& lang) {
    CodeGloss result;
    std::vector<LabeledGraph> candidates = expand(code, data.dictionary);
    result.concepts = filter_valid(candidates, data.vetoes, data.hierarchy);

    RewriteSet all_graphs;
    RewriteSet all_terminals;
    std::set<std::string> phrases;
    for (const LabeledGraph& g0 : result.concepts) {
        RewriteSet closure =
            rewrite_closure(g0, data.rules, data.hierarchy, data.lexicon, {cap, nullptr});
        for (const LabeledGraph& g : closure.graphs()) all_graphs.insert(g);
        for (const LabeledGraph& t : terminal_filter(closure)) {
            if (all_terminals.insert(t)) {
                phrases.insert(linearize(t, data.lexicon, lang));
            }
        }
    }
    result.closure = all_graphs.graphs();
    result.terminals = all_terminals.graphs();
    result.phrases.assign(phrases.begin(), phrases.end());
    return result;
}

int cmd_gloss(const RunConfig& config, const std::vector<std::string>& codes, std::ostream& out,
              std::ostream& err) {
    DataSet data;
    try {
        data = load_data(config);
    } catch (const DataError& ex) {
        err << "error: " << ex.what() << "\n";
        return 2;
    }

    bool any_empty = false;
    for (const std::string& text : codes) {
        IconCode code;
        try {
            code = parse_code(text);
        } catch (const UsageError& ex) {
            err << "error: " << ex.what() << "\n";
            return 1;
        }
        CodeGloss result;
        try {
            result = gloss_code(data, code, config.cap, config.lang);
        } catch (const DataError& ex) {
            err << "error: " << code.str() << ": " << ex.what() << "\n";
            return 2;
        }

        if (config.emit == EmitStage::All) {
            emit_stage(out, config, code.str(), EmitStage::Concept, result);
            emit_stage(out, config, code.str(), EmitStage::Closure, result);
            emit_stage(out, config, code.str(), EmitStage::Semantic, result);
            emit_stage(out, config, code.str(), EmitStage::Phrase, result);
        } else {
            emit_stage(out, config, code.str(), config.emit, result);
        }

        if (result.phrases.empty()) {
            any_empty = true;
            if (result.concepts.empty()) {
                err << code.str() << ": no valid reading (every candidate vetoed)\n";
            } else {
                err << code.str() << ": no terminal graph (grammar cannot express this code)\n";
            }
        }
    }
    return any_empty ? 3 : 0;
}

int cmd_validate(const RunConfig& config, std::ostream& out, std::ostream& err) {
    std::vector<std::string> failures;

    auto try_load = [&](auto&& fn) {
        try {
            fn();
        } catch (const DataError& ex) {
            failures.emplace_back(ex.what());
        }
    };

    Hierarchy h;
    bool have_hierarchy = false;
    try_load([&] {
        h = with_file_context(config.ontology_path,
                              [](const std::string& t) { return load_ontology(t); });
        have_hierarchy = true;
        out << "ontology: " << h.concepts().size() << " concepts, " << h.relations().size()
            << " relations\n";
    });

    Dictionary dict;
    std::vector<VetoPattern> vetoes;
    std::vector<RewriteRule> rules;
    Lexicon lex;
    bool have_rules = false, have_lexicon = false;
    if (have_hierarchy) {
        try_load([&] {
            dict = with_file_context(config.dictionary_path,
                                     [&](const std::string& t) { return load_dictionary(t, h); });
            out << "dictionary: " << dict.entry_count() << " readings for " << dict.token_count()
                << " (field, token) pairs\n";
        });
        try_load([&] {
            vetoes = with_file_context(config.vetoes_path,
                                       [&](const std::string& t) { return load_vetoes(t, h); });
            out << "vetoes: " << vetoes.size() << " patterns\n";
        });
        try_load([&] {
            rules = with_file_context(config.rules_path,
                                      [&](const std::string& t) { return load_rules(t, h); });
            have_rules = true;
            out << "rules: " << rules.size() << " rewrite rules\n";
        });
        try_load([&] {
            lex = with_file_context(config.lexicon_path,
                                    [&](const std::string& t) { return load_lexicon(t, h); });
            have_lexicon = true;
            out << "lexicon: " << lex.translation_count() << " translations, "
                << lex.languages().size() << " languages, " << lex.template_count()
                << " templates\n";
        });
    } else {
        failures.emplace_back("dictionary/vetoes/rules/lexicon not checked (ontology failed)");
    }

    if (have_rules && have_lexicon) {
        for (const Label& sem : rule_literal_semantemes(rules)) {
            for (const std::string& lang : lex.languages()) {
                if (!lex.template_for(sem, lang)) {
                    failures.push_back("missing template for " + sem.str() + " in language '" +
                                       lang + "' (used as a rule literal)");
                }
            }
        }
    }

    if (!failures.empty()) {
        for (const std::string& f : failures) err << "error: " << f << "\n";
        return 2;
    }
    out << "ok\n";
    return 0;
}

} // namespace icongloss
