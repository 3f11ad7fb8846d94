#pragma once

#include "icongloss/iconparse.hpp"
#include "icongloss/ontology.hpp"
#include "icongloss/rewrite.hpp"
#include "icongloss/verbalize.hpp"

#include <cstddef>
#include <iosfwd>
#include <string>
#include <vector>

namespace icongloss {

enum class EmitStage { Concept, Closure, Semantic, Phrase, All };
enum class OutputFormat { Text, Json, Dot };

struct RunConfig {
    std::string ontology_path;
    std::string dictionary_path;
    std::string vetoes_path;
    std::string rules_path;
    std::string lexicon_path;
    std::string lang = "en";
    EmitStage emit = EmitStage::Phrase;
    OutputFormat format = OutputFormat::Text;
    std::size_t cap = 10000;
};

/// All five data files, loaded and cross-validated.
struct DataSet {
    Hierarchy hierarchy;
    Dictionary dictionary;
    std::vector<VetoPattern> vetoes;
    std::vector<RewriteRule> rules;
    Lexicon lexicon;
};

/// Loads and validates everything; DataError messages carry the file path.
/// Also checks that rule literals have templates in every declared language.
DataSet load_data(const RunConfig& config);

/// Everything the pipeline computes for one code.
struct CodeGloss {
    std::vector<LabeledGraph> concepts;  // valid readings, veto-filtered
    std::vector<LabeledGraph> closure;   // union over readings, canonical order
    std::vector<LabeledGraph> terminals; // canonical order
    std::vector<std::string> phrases;    // sorted, duplicate free
};

CodeGloss gloss_code(const DataSet& data, const IconCode& code, std::size_t cap,
                     const std::string& lang);

/// Exit codes: 0 every code produced a phrase, 1 usage error, 2 data error,
/// 3 some code had no valid reading or no terminal graph.
int cmd_gloss(const RunConfig& config, const std::vector<std::string>& codes, std::ostream& out,
              std::ostream& err);

/// Loads all five files, reports counts; exit 0, or 2 listing every failure.
int cmd_validate(const RunConfig& config, std::ostream& out, std::ostream& err);

} // namespace icongloss
