#pragma once

#include "icongloss/graph.hpp"
#include "icongloss/ontology.hpp"

#include <array>
#include <map>
#include <string>
#include <string_view>
#include <vector>

namespace icongloss {

/// The 7-positional-field icon descriptor.  "null" marks an absent
/// primitive.  Field semantics (v1 data convention): 1 temporality color,
/// 2 side shape modifier, 3 central pictogram, 4 superscript modifier,
/// 5-7 reserved.
struct IconCode {
    std::array<std::string, 7> fields;

    bool is_null(std::size_t i) const { return fields[i] == "null"; }
    std::string str() const;
};

/// Splits on runs of '-', validates exactly 7 lowercase [a-z0-9_] tokens.
/// Throws UsageError.
IconCode parse_code(std::string_view text);

/// One way of reading a graphical element: the set of (relation, concept)
/// assertions it attaches to the central medical-state node.  Multiple
/// bundles per (field, token) model ambiguous pictograms.
struct AssertionBundle {
    std::vector<std::pair<std::string, Label>> assertions;
};

class Dictionary {
public:
    using Key = std::pair<int, std::string>; // 1-based field index, token

    void add(int field, const std::string& token, AssertionBundle bundle);
    const std::vector<AssertionBundle>* lookup(int field, const std::string& token) const;
    std::size_t entry_count() const;
    std::size_t token_count() const { return entries_.size(); }

private:
    std::map<Key, std::vector<AssertionBundle>> entries_;
};

/// Line-oriented dictionary:
///   map <field#> <token> => <relation> <c:Label> [& <relation> <c:Label>...]
/// Repeated lines for one (field, token) add alternative readings in file
/// order.  All concepts and relations must be declared in the hierarchy.
Dictionary load_dictionary(std::string_view document, const Hierarchy& h);

/// A forbidden concept subgraph; any candidate reading it matches (under
/// subsumption) is discarded.
struct VetoPattern {
    std::string id;
    std::string reason;
    LabeledGraph pattern;
};

/// XML veto file: <vetoes><veto id reason><node ../><edge ../></veto></vetoes>
/// with the same node/edge element syntax as rule filters.
std::vector<VetoPattern> load_vetoes(std::string_view document, const Hierarchy& h);

/// Builds every candidate concept graph for the code: one central
/// c:Medical_state node plus, per non-null field, the assertions of one
/// chosen bundle.  Candidates enumerate the cartesian product of per-field
/// bundle choices, earlier fields varying slowest.  Throws DataError for a
/// (field, token) pair missing from the dictionary.
std::vector<LabeledGraph> expand(const IconCode& code, const Dictionary& dict);

/// Keeps the candidates on which no veto pattern matches; order preserved.
std::vector<LabeledGraph> filter_valid(const std::vector<LabeledGraph>& candidates,
                                       const std::vector<VetoPattern>& vetoes,
                                       const Hierarchy& h);

} // namespace icongloss
