// icongloss: gloss 7-field medical icon codes as natural-language phrases.

#include "icongloss/pipeline.hpp"

#include <CLI11.hpp>

#include <cstdlib>
#include <iostream>
#include <map>
#include <string>
#include <vector>

namespace {

void add_data_flags(CLI::App* cmd, icongloss::RunConfig& config) {
    cmd->add_option("--ontology", config.ontology_path, "concept hierarchy file");
    cmd->add_option("--dictionary", config.dictionary_path, "icon element dictionary file");
    cmd->add_option("--vetoes", config.vetoes_path, "veto pattern file");
    cmd->add_option("--rules", config.rules_path, "rewrite rule file");
    cmd->add_option("--lexicon", config.lexicon_path, "translation/realization lexicon file");
}

// Unset paths fall back to well-known names under $ICONGLOSS_DATA.
bool resolve_paths(icongloss::RunConfig& config, std::ostream& err) {
    const char* dir = std::getenv("ICONGLOSS_DATA");
    auto resolve = [&](std::string& path, const char* flag, const char* name) {
        if (!path.empty()) return true;
        if (dir) {
            path = std::string(dir) + "/" + name;
            return true;
        }
        err << "error: no --" << flag << " file given and ICONGLOSS_DATA is not set\n";
        return false;
    };
    return resolve(config.ontology_path, "ontology", "ontology.txt") &&
           resolve(config.dictionary_path, "dictionary", "dictionary.txt") &&
           resolve(config.vetoes_path, "vetoes", "vetoes.xml") &&
           resolve(config.rules_path, "rules", "rules.xml") &&
           resolve(config.lexicon_path, "lexicon", "lexicon.txt");
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"icon code glosser: icon codes -> concept graphs -> semantic graphs -> phrases"};
    app.require_subcommand(1);

    icongloss::RunConfig config;
    std::vector<std::string> codes;

    std::map<std::string, icongloss::EmitStage> stage_names{
        {"concept", icongloss::EmitStage::Concept}, {"closure", icongloss::EmitStage::Closure},
        {"semantic", icongloss::EmitStage::Semantic}, {"phrase", icongloss::EmitStage::Phrase},
        {"all", icongloss::EmitStage::All}};
    std::map<std::string, icongloss::OutputFormat> format_names{
        {"text", icongloss::OutputFormat::Text},
        {"json", icongloss::OutputFormat::Json},
        {"dot", icongloss::OutputFormat::Dot}};

    CLI::App* gloss = app.add_subcommand("gloss", "gloss icon codes as phrases");
    add_data_flags(gloss, config);
    gloss->add_option("--lang", config.lang, "output language code")->capture_default_str();
    gloss->add_option("--emit", config.emit, "pipeline stage to print")
        ->transform(CLI::CheckedTransformer(stage_names, CLI::ignore_case))
        ->default_str("phrase");
    gloss->add_option("--format", config.format, "output format")
        ->transform(CLI::CheckedTransformer(format_names, CLI::ignore_case))
        ->default_str("text");
    gloss->add_option("--cap", config.cap, "rewrite set size cap")->capture_default_str();
    gloss->add_option("codes", codes, "7-field icon codes, e.g. risk-virus-liver-monitoring-null-null-null")
        ->required();

    CLI::App* validate = app.add_subcommand("validate", "load and check all data files");
    add_data_flags(validate, config);

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 1;
    }

    if (!resolve_paths(config, std::cerr)) return 1;

    if (gloss->parsed()) {
        return icongloss::cmd_gloss(config, codes, std::cout, std::cerr);
    }
    return icongloss::cmd_validate(config, std::cout, std::cerr);
}
