#pragma once

#include "icongloss/graph.hpp"

#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

namespace icongloss {

struct RelationSig {
    std::string name;
    std::optional<Label> domain;
    std::optional<Label> range;
};

/// The concept namespace: declared concepts, the acyclic is-a relation over
/// them, and the declared relation tokens.  Immutable after load; queries
/// are safe for concurrent use (the reachability memo is mutex guarded).
class Hierarchy {
public:
    bool has_concept(const Label& c) const;
    bool has_relation(const std::string& rel) const { return relations_.count(rel) != 0; }

    /// Reflexive-transitive is-a reachability.  Throws DataError when either
    /// argument is not a declared concept.
    bool is_subtype(const Label& a, const Label& b) const;

    const std::set<Label>& concepts() const { return concepts_; }
    const std::map<std::string, RelationSig>& relations() const { return relations_; }
    const std::vector<Label>& parents(const Label& c) const;

    friend Hierarchy load_ontology(std::string_view document);

private:
    // Ancestor sets are computed on first use.  The memo lives behind a
    // shared pointer so Hierarchy stays copyable; since the underlying data
    // never changes after load, copies may share it.
    struct Memo {
        std::mutex mutex;
        std::map<Label, std::set<Label>> ancestors;
    };

    std::set<Label> ancestors_of(const Label& c) const;

    std::set<Label> concepts_;
    std::map<Label, std::vector<Label>> parents_;
    std::map<std::string, RelationSig> relations_;
    std::shared_ptr<Memo> memo_ = std::make_shared<Memo>();
};

/// Line-oriented ontology format:
///   concept c:Name
///   concept c:Name isa c:Parent[, c:Parent...]
///   relation token [domain c:Name range c:Name]
/// '#' starts a comment.  Two-pass, so declaration order does not matter.
/// Validates: every referenced concept declared, is-a edges form a DAG,
/// exactly one parentless concept when non-empty.
Hierarchy load_ontology(std::string_view document);

/// label_ok for rule and veto matching: the host label must be a declared
/// concept that is-a the (concept) pattern label.
LabelPredicate subsumption_predicate(const Hierarchy& h);

} // namespace icongloss
