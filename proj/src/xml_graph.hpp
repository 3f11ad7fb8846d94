#pragma once

// Shared XML helpers for the rule and veto loaders (boost property_tree).

#include "icongloss/error.hpp"
#include "icongloss/graph.hpp"

#include <boost/property_tree/ptree.hpp>
#include <boost/property_tree/xml_parser.hpp>

#include <map>
#include <optional>
#include <sstream>
#include <string>

namespace icongloss::detail {

inline boost::property_tree::ptree parse_xml(std::string_view document) {
    std::istringstream in{std::string(document)};
    boost::property_tree::ptree tree;
    try {
        boost::property_tree::read_xml(in, tree,
                                       boost::property_tree::xml_parser::trim_whitespace);
    } catch (const boost::property_tree::xml_parser_error& ex) {
        throw DataError("xml: " + ex.message(), static_cast<int>(ex.line()));
    }
    return tree;
}

inline std::string require_attr(const boost::property_tree::ptree& elem, const std::string& name,
                                const std::string& context) {
    auto v = elem.get_optional<std::string>("<xmlattr>." + name);
    if (!v) throw DataError(context + ": missing attribute '" + name + "'");
    return *v;
}

inline std::optional<std::string> optional_attr(const boost::property_tree::ptree& elem,
                                                const std::string& name) {
    auto v = elem.get_optional<std::string>("<xmlattr>." + name);
    if (!v) return std::nullopt;
    return *v;
}

struct XmlGraph {
    LabeledGraph graph;
    std::map<std::string, NodeId> by_xml_id;
    std::map<NodeId, int> coindex;
};

/// Reads <node id label [coindex]/> and <edge from to label/> children of
/// `parent` into a graph.  Coindex attributes are rejected unless allowed.
inline XmlGraph read_graph_elements(const boost::property_tree::ptree& parent,
                                    const std::string& context, bool allow_coindex) {
    XmlGraph out;
    for (const auto& [key, elem] : parent) {
        if (key == "<xmlattr>" || key == "<xmlcomment>") continue;
        if (key == "node") {
            std::string xml_id = require_attr(elem, "id", context + " node");
            if (out.by_xml_id.count(xml_id)) {
                throw DataError(context + ": duplicate node id '" + xml_id + "'");
            }
            std::string label_text = require_attr(elem, "label", context + " node " + xml_id);
            Label label = [&] {
                try {
                    return Label::parse(label_text);
                } catch (const std::invalid_argument& ex) {
                    throw DataError(context + ": " + ex.what());
                }
            }();
            NodeId id = out.graph.add_node(label);
            out.by_xml_id.emplace(xml_id, id);
            if (auto cx = optional_attr(elem, "coindex")) {
                if (!allow_coindex) {
                    throw DataError(context + ": coindex is not allowed here");
                }
                try {
                    out.coindex[id] = std::stoi(*cx);
                } catch (const std::exception&) {
                    throw DataError(context + ": bad coindex '" + *cx + "'");
                }
            }
        } else if (key == "edge") {
            std::string from = require_attr(elem, "from", context + " edge");
            std::string to = require_attr(elem, "to", context + " edge");
            std::string rel = require_attr(elem, "label", context + " edge");
            auto f = out.by_xml_id.find(from);
            auto t = out.by_xml_id.find(to);
            if (f == out.by_xml_id.end() || t == out.by_xml_id.end()) {
                throw DataError(context + ": edge references unknown node '" +
                                (f == out.by_xml_id.end() ? from : to) + "'");
            }
            try {
                out.graph.add_edge(f->second, t->second, rel);
            } catch (const std::invalid_argument& ex) {
                throw DataError(context + ": " + ex.what());
            }
        } else {
            throw DataError(context + ": unexpected element <" + key + ">");
        }
    }
    return out;
}

} // namespace icongloss::detail
