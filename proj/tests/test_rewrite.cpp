#include "icongloss/rewrite.hpp"
#include "icongloss/error.hpp"

#include "oracles.hpp"

#include <doctest.h>

#include <fstream>
#include <set>
#include <sstream>

using namespace icongloss;

namespace {

std::string read_data_file(const std::string& name) {
    std::ifstream in(std::string(ICONGLOSS_DATA_DIR) + "/" + name, std::ios::binary);
    REQUIRE(in.good());
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

struct Shipped {
    Hierarchy h;
    std::vector<RewriteRule> rules;
    Lexicon lex;
};

const Shipped& shipped() {
    static Shipped s = [] {
        Shipped out;
        out.h = load_ontology(read_data_file("ontology.txt"));
        out.rules = load_rules(read_data_file("rules.xml"), out.h);
        out.lex = load_lexicon(read_data_file("lexicon.txt"), out.h);
        return out;
    }();
    return s;
}

const RewriteRule& rule_by_id(const std::string& id) {
    for (const RewriteRule& r : shipped().rules) {
        if (r.id == id) return r;
    }
    REQUIRE(false);
    throw std::logic_error("unreachable");
}

// the parsed, veto-filtered reading of the worked example icon
LabeledGraph example_concept_graph() {
    LabeledGraph g;
    NodeId st = g.add_node(Label::concept_label("Medical_state"));
    NodeId vi = g.add_node(Label::concept_label("Viral_infection"));
    NodeId lv = g.add_node(Label::concept_label("Liver"));
    NodeId fu = g.add_node(Label::concept_label("Future"));
    NodeId mo = g.add_node(Label::concept_label("Monitoring"));
    g.add_edge(st, vi, "isRelatedTo");
    g.add_edge(st, lv, "hasAnatomy");
    g.add_edge(st, fu, "hasTemporality");
    g.add_edge(st, mo, "hasCare");
    return g;
}

// monitoring -i-> risk -i-> infection(-attr-> viral, -i-> organ), and the
// other nesting with risk outermost
LabeledGraph nested_terminal(const std::string& outer, const std::string& inner) {
    LabeledGraph g;
    NodeId a = g.add_node(Label::sem(outer));
    NodeId b = g.add_node(Label::sem(inner));
    NodeId inf = g.add_node(Label::sem("infection"));
    NodeId vir = g.add_node(Label::sem("viral"));
    NodeId liv = g.add_node(Label::sem("liver"));
    g.add_edge(a, b, "i");
    g.add_edge(b, inf, "i");
    g.add_edge(inf, vir, "attr");
    g.add_edge(inf, liv, "i");
    return g;
}

bool lex_less(const std::pair<std::size_t, std::size_t>& a,
              const std::pair<std::size_t, std::size_t>& b) {
    return a < b;
}

} // namespace

TEST_CASE("load_rules: the shipped grammar has the three expected rules") {
    const auto& rules = shipped().rules;
    REQUIRE(rules.size() == 3);
    CHECK(rules[0].id == "risk-of-state");
    CHECK(rules[1].id == "monitoring-of-state");
    CHECK(rules[2].id == "trouble-of-organ");

    const RewriteRule& risk = rules[0];
    CHECK(risk.filter.node_count() == 2);
    CHECK(risk.filter.edge_count() == 1);
    REQUIRE(risk.product_nodes.size() == 2);
    CHECK(risk.product_nodes[0].kind == ProductNode::Kind::Literal);
    CHECK(risk.product_nodes[0].label == Label::sem("risk"));
    CHECK(risk.product_nodes[0].coindex == 1);
    CHECK(risk.product_nodes[1].kind == ProductNode::Kind::Subst);

    const RewriteRule& trouble = rules[2];
    REQUIRE(trouble.product_nodes.size() == 2);
    CHECK(trouble.product_nodes[0].kind == ProductNode::Kind::Translate);
    CHECK(trouble.product_nodes[1].kind == ProductNode::Kind::Translate);
    REQUIRE(trouble.product_edges.size() == 1);
    CHECK(trouble.product_edges[0].rel == "i");
}

TEST_CASE("load_rules: a rule that re-emits its single node unchanged is refused") {
    const std::string no_op = R"(<rules><rule id="noop">
        <filter><node id="a" label="c:Medical_state" coindex="1"/></filter>
        <product><node id="p" op="subst" arg="a" coindex="1"/></product>
      </rule></rules>)";
    try {
        load_rules(no_op, shipped().h);
        FAIL("expected a termination-guard error");
    } catch (const DataError& ex) {
        std::string msg = ex.what();
        CHECK(msg.find("noop") != std::string::npos);
        CHECK(msg.find("deletes no") != std::string::npos);
    }
}

TEST_CASE("load_rules: schema violations") {
    const Hierarchy& h = shipped().h;
    auto rule_xml = [](const std::string& filter, const std::string& product) {
        return "<rules><rule id=\"r\"><filter>" + filter + "</filter><product>" + product +
               "</product></rule></rules>";
    };
    // empty filter
    CHECK_THROWS_AS(load_rules(rule_xml("", "<node id=\"p\" op=\"literal\" label=\"s:x\"/>"), h),
                    DataError);
    // disconnected filter
    CHECK_THROWS_AS(load_rules(rule_xml("<node id=\"a\" label=\"c:Liver\"/>"
                                        "<node id=\"b\" label=\"c:Heart\"/>",
                                        "<node id=\"p\" op=\"literal\" label=\"s:x\"/>"),
                               h),
                    DataError);
    // unknown concept in filter
    CHECK_THROWS_AS(load_rules(rule_xml("<node id=\"a\" label=\"c:Nope\"/>",
                                        "<node id=\"p\" op=\"literal\" label=\"s:x\"/>"),
                               h),
                    DataError);
    // sem label in filter
    CHECK_THROWS_AS(load_rules(rule_xml("<node id=\"a\" label=\"s:risk\"/>",
                                        "<node id=\"p\" op=\"literal\" label=\"s:x\"/>"),
                               h),
                    DataError);
    // concept literal in product
    CHECK_THROWS_AS(load_rules(rule_xml("<node id=\"a\" label=\"c:Liver\"/>",
                                        "<node id=\"p\" op=\"literal\" label=\"c:Liver\"/>"),
                               h),
                    DataError);
    // dangling translate argument
    CHECK_THROWS_AS(load_rules(rule_xml("<node id=\"a\" label=\"c:Liver\"/>",
                                        "<node id=\"p\" op=\"translate\" arg=\"zz\"/>"),
                               h),
                    DataError);
    // product coindex without filter counterpart
    CHECK_THROWS_AS(
        load_rules(rule_xml("<node id=\"a\" label=\"c:Liver\"/>",
                            "<node id=\"p\" op=\"literal\" label=\"s:x\" coindex=\"4\"/>"),
                   h),
        DataError);
    // duplicate coindex on the filter side
    CHECK_THROWS_AS(
        load_rules(rule_xml("<node id=\"a\" label=\"c:Medical_state\" coindex=\"1\"/>"
                            "<node id=\"b\" label=\"c:Liver\" coindex=\"1\"/>"
                            "<edge from=\"a\" to=\"b\" label=\"hasAnatomy\"/>",
                            "<node id=\"p\" op=\"literal\" label=\"s:x\" coindex=\"1\"/>"),
                   h),
        DataError);
    // product edge outside the semantic relation set
    CHECK_THROWS_AS(
        load_rules(rule_xml("<node id=\"a\" label=\"c:Liver\"/>",
                            "<node id=\"p\" op=\"literal\" label=\"s:x\"/>"
                            "<node id=\"q\" op=\"literal\" label=\"s:y\"/>"
                            "<edge from=\"p\" to=\"q\" label=\"hasAnatomy\"/>"),
                   h),
        DataError);
    // undeclared relation in the filter
    CHECK_THROWS_AS(load_rules(rule_xml("<node id=\"a\" label=\"c:Medical_state\"/>"
                                        "<node id=\"b\" label=\"c:Liver\"/>"
                                        "<edge from=\"a\" to=\"b\" label=\"mysteryRel\"/>",
                                        "<node id=\"p\" op=\"literal\" label=\"s:x\"/>"),
                               h),
                    DataError);
}

TEST_CASE("match_rule: the trouble-of-organ filter finds its one site") {
    const Shipped& s = shipped();
    LabeledGraph g = example_concept_graph();
    auto ms = match_rule(rule_by_id("trouble-of-organ"), g, s.h);
    REQUIRE(ms.size() == 1);
    // state, trouble and anatomy land on the specific matched labels
    const Matching& m = ms[0];
    std::multiset<std::string> images;
    for (const auto& [f, v] : m) images.insert(g.label(v)->str());
    CHECK(images == std::multiset<std::string>{"c:Medical_state", "c:Viral_infection", "c:Liver"});
}

TEST_CASE("match_rule: no concept filter matches an all-sem graph") {
    const Shipped& s = shipped();
    LabeledGraph g;
    NodeId risk = g.add_node(Label::sem("risk"));
    NodeId inf = g.add_node(Label::sem("infection"));
    g.add_edge(risk, inf, "i");
    for (const RewriteRule& rule : s.rules) {
        CHECK(match_rule(rule, g, s.h).empty());
    }
}

TEST_CASE("match_rule: dangling condition excludes matchings that orphan edges") {
    const Shipped& s = shipped();
    // an extra edge hangs off the future node, which the risk rule deletes
    LabeledGraph g = example_concept_graph();
    NodeId extra = g.add_node(Label::concept_label("Present"));
    for (NodeId id : g.node_ids()) {
        if (g.label(id) == Label::concept_label("Future")) g.add_edge(id, extra, "hasTemporality");
    }
    CHECK(match_rule(rule_by_id("risk-of-state"), g, s.h).empty());
    // the monitoring rule is unaffected
    CHECK(match_rule(rule_by_id("monitoring-of-state"), g, s.h).size() == 1);
}

TEST_CASE("match_rule agrees with brute force plus the dangling check") {
    const Shipped& s = shipped();
    std::mt19937 rng(777);
    const std::vector<Label> concepts{
        Label::concept_label("Medical_state"), Label::concept_label("Trouble"),
        Label::concept_label("Viral_infection"), Label::concept_label("Liver"),
        Label::concept_label("Future"),         Label::concept_label("Monitoring")};
    const std::vector<std::string> rels{"isRelatedTo", "hasAnatomy", "hasTemporality", "hasCare"};
    std::uniform_int_distribution<std::size_t> pick_label(0, concepts.size() - 1);
    std::uniform_int_distribution<std::size_t> pick_rel(0, rels.size() - 1);
    std::uniform_int_distribution<int> host_nodes(1, 8);
    std::bernoulli_distribution edge(0.25);

    for (int round = 0; round < 200; ++round) {
        LabeledGraph host;
        std::vector<NodeId> ids;
        int n = host_nodes(rng);
        for (int i = 0; i < n; ++i) ids.push_back(host.add_node(concepts[pick_label(rng)]));
        for (NodeId u : ids) {
            for (NodeId v : ids) {
                if (u != v && edge(rng)) host.add_edge(u, v, rels[pick_rel(rng)]);
            }
        }
        for (const RewriteRule& rule : s.rules) {
            auto got = match_rule(rule, host, s.h);
            auto all = oracle::brute_force_matchings(rule.filter, host, subsumption_predicate(s.h));
            // oracle side: apply the dangling condition by direct definition
            std::vector<Matching> expected;
            for (const Matching& m : all) {
                std::set<Edge> matched;
                for (const Edge& e : rule.filter.edges()) {
                    matched.insert(Edge{m.at(e.from), m.at(e.to), e.rel});
                }
                bool ok = true;
                for (const auto& [f, v] : m) {
                    bool persisted = rule.subst_references(f);
                    bool redirected = rule.filter_coindex.count(f) &&
                                      rule.product_for_coindex(rule.filter_coindex.at(f));
                    if (persisted || redirected) continue;
                    for (const Edge& e : host.edges()) {
                        if ((e.from == v || e.to == v) && !matched.count(e)) ok = false;
                    }
                }
                if (ok) expected.push_back(m);
            }
            CHECK(got == expected);
        }
    }
}

TEST_CASE("apply_rule: risk rule rewrites the future edge into s:risk") {
    const Shipped& s = shipped();
    LabeledGraph g = example_concept_graph();
    auto ms = match_rule(rule_by_id("risk-of-state"), g, s.h);
    REQUIRE(ms.size() == 1);
    LabeledGraph out = apply_rule(rule_by_id("risk-of-state"), g, ms[0], s.h, s.lex);

    LabeledGraph expected;
    NodeId risk = expected.add_node(Label::sem("risk"));
    NodeId st = expected.add_node(Label::concept_label("Medical_state"));
    NodeId vi = expected.add_node(Label::concept_label("Viral_infection"));
    NodeId lv = expected.add_node(Label::concept_label("Liver"));
    NodeId mo = expected.add_node(Label::concept_label("Monitoring"));
    expected.add_edge(risk, st, "i");
    expected.add_edge(st, vi, "isRelatedTo");
    expected.add_edge(st, lv, "hasAnatomy");
    expected.add_edge(st, mo, "hasCare");
    CHECK(canonical_form(out) == canonical_form(expected));
}

TEST_CASE("apply_rule: translation splits one concept into several semantemes") {
    const Shipped& s = shipped();
    // risk applied, then monitoring applied, then the trouble-of-organ step
    LabeledGraph g = example_concept_graph();
    g = apply_rule(rule_by_id("risk-of-state"), g,
                   match_rule(rule_by_id("risk-of-state"), g, s.h).at(0), s.h, s.lex);
    g = apply_rule(rule_by_id("monitoring-of-state"), g,
                   match_rule(rule_by_id("monitoring-of-state"), g, s.h).at(0), s.h, s.lex);
    g = apply_rule(rule_by_id("trouble-of-organ"), g,
                   match_rule(rule_by_id("trouble-of-organ"), g, s.h).at(0), s.h, s.lex);
    CHECK(is_terminal(g));
    CHECK(canonical_form(g) == canonical_form(nested_terminal("risk", "monitoring")));
}

TEST_CASE("apply_rule: the translated head picks up the re-glued incoming edge") {
    const Shipped& s = shipped();
    // three-spoke reading: no care modifier this time
    LabeledGraph g;
    NodeId st = g.add_node(Label::concept_label("Medical_state"));
    NodeId vi = g.add_node(Label::concept_label("Viral_infection"));
    NodeId lv = g.add_node(Label::concept_label("Liver"));
    NodeId fu = g.add_node(Label::concept_label("Future"));
    g.add_edge(st, vi, "isRelatedTo");
    g.add_edge(st, lv, "hasAnatomy");
    g.add_edge(st, fu, "hasTemporality");

    g = apply_rule(rule_by_id("risk-of-state"), g,
                   match_rule(rule_by_id("risk-of-state"), g, s.h).at(0), s.h, s.lex);
    g = apply_rule(rule_by_id("trouble-of-organ"), g,
                   match_rule(rule_by_id("trouble-of-organ"), g, s.h).at(0), s.h, s.lex);

    // risk -i-> infection(-attr-> viral, -i-> liver)
    LabeledGraph expected;
    NodeId risk = expected.add_node(Label::sem("risk"));
    NodeId inf = expected.add_node(Label::sem("infection"));
    NodeId vir = expected.add_node(Label::sem("viral"));
    NodeId liv = expected.add_node(Label::sem("liver"));
    expected.add_edge(risk, inf, "i");
    expected.add_edge(inf, vir, "attr");
    expected.add_edge(inf, liv, "i");
    CHECK(is_terminal(g));
    CHECK(canonical_form(g) == canonical_form(expected));
}

TEST_CASE("apply_rule: whole-graph replacement by a single literal") {
    const Shipped& s = shipped();
    auto rules = load_rules(R"(<rules><rule id="collapse">
        <filter>
          <node id="a" label="c:Medical_state"/>
          <node id="b" label="c:Future"/>
          <edge from="a" to="b" label="hasTemporality"/>
        </filter>
        <product><node id="p" op="literal" label="s:risk"/></product>
      </rule></rules>)",
                            s.h);
    LabeledGraph g;
    NodeId st = g.add_node(Label::concept_label("Medical_state"));
    NodeId fu = g.add_node(Label::concept_label("Future"));
    g.add_edge(st, fu, "hasTemporality");
    auto ms = match_rule(rules[0], g, s.h);
    REQUIRE(ms.size() == 1);
    LabeledGraph out = apply_rule(rules[0], g, ms[0], s.h, s.lex);
    CHECK(out.node_count() == 1);
    CHECK(out.edge_count() == 0);
    CHECK(out.label(out.node_ids()[0]) == Label::sem("risk"));
}

TEST_CASE("apply_rule: output canonical form is stable across host id layouts") {
    const Shipped& s = shipped();
    std::mt19937 rng(271828);
    LabeledGraph g = example_concept_graph();
    LabeledGraph shuffled = oracle::shuffle_node_ids(g, rng);
    const RewriteRule& rule = rule_by_id("risk-of-state");
    LabeledGraph a = apply_rule(rule, g, match_rule(rule, g, s.h).at(0), s.h, s.lex);
    LabeledGraph b =
        apply_rule(rule, shuffled, match_rule(rule, shuffled, s.h).at(0), s.h, s.lex);
    CHECK(canonical_form(a) == canonical_form(b));
}

TEST_CASE("rewrite_closure: the worked example derivation, fully enumerated") {
    const Shipped& s = shipped();
    ClosureTrace trace;
    RewriteSet set = rewrite_closure(example_concept_graph(), s.rules, s.h, s.lex,
                                     {10000, &trace});

    // hand enumeration: initial graph, three first-step results, four
    // second-step results and the two terminal nestings
    CHECK(set.size() == 10);
    CHECK(set.contains(example_concept_graph()));
    CHECK(set.contains(nested_terminal("monitoring", "risk")));
    CHECK(set.contains(nested_terminal("risk", "monitoring")));

    auto terminals = terminal_filter(set);
    REQUIRE(terminals.size() == 2);
    std::set<std::string> canon{canonical_form(terminals[0]), canonical_form(terminals[1])};
    CHECK(canon.count(canonical_form(nested_terminal("monitoring", "risk"))) == 1);
    CHECK(canon.count(canonical_form(nested_terminal("risk", "monitoring"))) == 1);

    // iteration snapshots grow monotonically to the fixpoint
    REQUIRE(trace.iterations.size() >= 2);
    for (std::size_t i = 1; i < trace.iterations.size(); ++i) {
        const auto& prev = trace.iterations[i - 1];
        const auto& cur = trace.iterations[i];
        CHECK(prev.size() <= cur.size());
        for (const std::string& key : prev) {
            CHECK(std::find(cur.begin(), cur.end(), key) != cur.end());
        }
    }
    CHECK(trace.iterations.back().size() == trace.iterations[trace.iterations.size() - 2].size());

    // the termination measure strictly decreases on every application
    CHECK(!trace.applications.empty());
    for (const auto& app : trace.applications) {
        CHECK(lex_less(app.after, app.before));
    }
}

TEST_CASE("rewrite_closure: terminal input and empty rule lists are fixpoints") {
    const Shipped& s = shipped();
    LabeledGraph terminal = nested_terminal("monitoring", "risk");
    RewriteSet a = rewrite_closure(terminal, s.rules, s.h, s.lex);
    CHECK(a.size() == 1);
    RewriteSet b = rewrite_closure(example_concept_graph(), {}, s.h, s.lex);
    CHECK(b.size() == 1);
}

TEST_CASE("rewrite_closure: the resource cap aborts a runaway run") {
    const Shipped& s = shipped();
    CHECK_THROWS_AS(rewrite_closure(example_concept_graph(), s.rules, s.h, s.lex, {3, nullptr}),
                    DataError);
}

TEST_CASE("terminal_filter keeps exactly the all-sem graphs") {
    RewriteSet set;
    LabeledGraph conceptual;
    conceptual.add_node(Label::concept_label("Liver"));
    LabeledGraph term1;
    term1.add_node(Label::sem("risk"));
    LabeledGraph term2 = nested_terminal("monitoring", "risk");
    LabeledGraph mixed;
    NodeId a = mixed.add_node(Label::sem("risk"));
    NodeId b = mixed.add_node(Label::concept_label("Liver"));
    mixed.add_edge(a, b, "i");

    set.insert(conceptual);
    CHECK(terminal_filter(set).empty());
    set.insert(term1);
    set.insert(term2);
    set.insert(mixed);
    auto terminals = terminal_filter(set);
    REQUIRE(terminals.size() == 2);
    // sorted by canonical form
    CHECK(canonical_form(terminals[0]) <= canonical_form(terminals[1]));
}

TEST_CASE("RewriteSet deduplicates by canonical form") {
    std::mt19937 rng(11);
    RewriteSet set;
    LabeledGraph g = oracle::random_graph(rng, 6);
    CHECK(set.insert(g));
    CHECK_FALSE(set.insert(oracle::shuffle_node_ids(g, rng)));
    CHECK(set.size() == 1);
}

TEST_CASE("concept_measure counts concept nodes and concept-relation edges") {
    LabeledGraph g;
    NodeId risk = g.add_node(Label::sem("risk"));
    NodeId st = g.add_node(Label::concept_label("Medical_state"));
    NodeId lv = g.add_node(Label::concept_label("Liver"));
    g.add_edge(risk, st, "i");
    g.add_edge(st, lv, "hasAnatomy");
    CHECK(concept_measure(g) == std::pair<std::size_t, std::size_t>{2, 1});
}

TEST_CASE("glue: a saturated graft fills a blank trunk site") {
    // trunk: s:risk -i-> (blank, bound at 1)
    LabeledGraph trunk;
    NodeId risk = trunk.add_node(Label::sem("risk"));
    NodeId hole = trunk.add_node(std::nullopt);
    trunk.add_edge(risk, hole, "i");

    Graft graft;
    NodeId inf = graft.graph.add_node(Label::sem("infection"));
    NodeId vir = graft.graph.add_node(Label::sem("viral"));
    graft.graph.add_edge(inf, vir, "attr");
    graft.sites[1] = inf;

    LabeledGraph out = glue(trunk, graft, {{1, hole}});
    CHECK(out.node_count() == 3);
    CHECK(out.label(hole) == Label::sem("infection"));
    CHECK(out.has_edge({risk, hole, "i"}));
    bool attr_edge = false;
    for (const Edge& e : out.edges()) {
        if (e.rel == "attr" && e.from == hole) attr_edge = true;
    }
    CHECK(attr_edge);
}

TEST_CASE("glue: blank graft site takes the trunk's filled label") {
    LabeledGraph trunk;
    NodeId st = trunk.add_node(Label::sem("state"));
    Graft graft;
    NodeId hole = graft.graph.add_node(std::nullopt);
    NodeId risk = graft.graph.add_node(Label::sem("risk"));
    graft.graph.add_edge(risk, hole, "i");
    graft.sites[7] = hole;

    LabeledGraph out = glue(trunk, graft, {{7, st}});
    CHECK(out.node_count() == 2);
    CHECK(out.label(st) == Label::sem("state"));
    CHECK(out.edge_count() == 1);
}

TEST_CASE("glue: empty graft with no bindings leaves the trunk unchanged") {
    LabeledGraph trunk;
    trunk.add_node(Label::sem("risk"));
    LabeledGraph out = glue(trunk, Graft{}, {});
    CHECK(out == trunk);
}

TEST_CASE("glue: two filled or two blank nodes at a site are contract errors") {
    LabeledGraph trunk;
    NodeId filled = trunk.add_node(Label::sem("risk"));
    NodeId blank = trunk.add_node(std::nullopt);

    Graft graft;
    graft.sites[1] = graft.graph.add_node(Label::sem("infection"));
    CHECK_THROWS_AS(glue(trunk, graft, {{1, filled}}), std::invalid_argument);

    Graft blank_graft;
    blank_graft.sites[1] = blank_graft.graph.add_node(std::nullopt);
    CHECK_THROWS_AS(glue(trunk, blank_graft, {{1, blank}}), std::invalid_argument);

    CHECK_THROWS_AS(glue(trunk, Graft{}, {{5, filled}}), std::invalid_argument);
}
