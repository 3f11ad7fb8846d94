#pragma once

#include "icongloss/graph.hpp"
#include "icongloss/ontology.hpp"

#include <atomic>
#include <map>
#include <memory>
#include <string>
#include <string_view>
#include <vector>

namespace icongloss {

/// A small semantic graph with a designated head node; the image of one
/// concept under the translation function.  Usually a single semanteme,
/// sometimes more (c:Viral_infection -> s:infection with an attr s:viral).
struct Fragment {
    LabeledGraph graph;
    NodeId head;
};

/// Per-semanteme, per-language realization: children on pre-slot relations
/// are realized before the lemma, post-slot children after it, each
/// introduced by its connector string.
struct Template {
    std::string lemma;
    std::vector<std::string> pre_slots;
    std::vector<std::pair<std::string, std::string>> post_slots; // (relation, connector)
};

class Lexicon {
public:
    const Fragment* fragment_for(const Label& c) const;
    const Template* template_for(const Label& sem, const std::string& lang) const;
    const std::map<std::pair<Label, std::string>, Template>& templates() const {
        return templates_;
    }
    const std::vector<std::string>& languages() const { return languages_; }
    std::size_t translation_count() const { return tr_.size(); }
    std::size_t template_count() const { return templates_.size(); }
    /// Every semanteme appearing in a tr fragment, sorted.
    std::vector<Label> fragment_semantemes() const;

    friend Lexicon load_lexicon(std::string_view document, const Hierarchy& h);

    /// Fresh node ids on every call; successive fragments never share ids.
    friend Fragment translate_concept(const Lexicon& lex, const Hierarchy& h, const Label& c);

private:
    std::map<Label, Fragment> tr_;
    std::map<std::pair<Label, std::string>, Template> templates_;
    std::vector<std::string> languages_;
    // id source for translate_concept's fresh-copy guarantee
    std::shared_ptr<std::atomic<std::uint32_t>> next_fresh_ =
        std::make_shared<std::atomic<std::uint32_t>>(0);
};

/// Line-oriented lexicon:
///   language <code>
///   tr <c:Label> => s:name[*head] ... [(s:from rel s:to) ...]
///   lex <s:name> <lang> lemma="..." [pre=rel[,rel...]] [post=rel:"conn"[,rel:"conn"...]]
/// Checks that every semanteme used in a fragment has a template for every
/// declared language.
Lexicon load_lexicon(std::string_view document, const Hierarchy& h);

/// The translation function tr.  When the concept itself has no entry, the
/// unique most specific is-a ancestor with one is used; incomparable
/// candidates are an error, as is the absence of any entry.
Fragment translate_concept(const Lexicon& lex, const Hierarchy& h, const Label& c);

/// Renders a terminal semantic graph as a phrase: from the unique root,
/// pre-slot children, lemma, then post-slot children behind their
/// connectors.  Children tied on one relation are ordered by the canonical
/// form of their reachable subgraph.  Deterministic by construction.
std::string linearize(const LabeledGraph& g, const Lexicon& lex, const std::string& lang);

} // namespace icongloss
