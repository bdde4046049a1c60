#include "searchspace/export.hpp"

#include <cmath>
#include <ostream>

#include <fmt/format.h>
#include <json.hpp>

namespace searchspace {

using nlohmann::json;

namespace {

std::string dot_string(std::string_view s) {
  std::string out = "\"";
  for (const char c : s) {
    if (c == '"' || c == '\\') out += '\\';
    out += c;
  }
  return out + '"';
}

std::string csv_field(std::string_view s) {
  if (s.find_first_of(",\"\n") == std::string_view::npos) return std::string(s);
  std::string out = "\"";
  for (const char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + '"';
}

json number_or_string(double v) {
  if (std::isfinite(v)) return v;
  return format_number(v);
}

json transitivity_json(const std::vector<TransitivityPoint>& points) {
  json arr = json::array();
  for (const auto& pt : points) {
    arr.push_back({{"p", pt.p},
                   {"lhs", number_or_string(pt.lhs)},
                   {"rhs", number_or_string(pt.rhs)},
                   {"holds", pt.holds}});
  }
  return arr;
}

void dump_json(std::ostream& out, const json& doc, const FileHeader& header) {
  header.write(out, "//");
  out << doc.dump(2) << '\n';
}

}  // namespace

void write_dot(std::ostream& out, const NodeTable& nodes, const FuzzyKernel& kernel,
               const FileHeader& header) {
  const auto cg = condense(support_envelope(kernel));
  header.write(out, "//");
  out << "digraph envelope {\n";
  out << "  node [shape=circle, style=filled];\n";
  for (std::size_t i = 0; i < kernel.node_count(); ++i) {
    const bool super = cg.supernode[cg.component_of[i]];
    out << "  n" << i << " [label=" << dot_string(nodes.labels()[i])
        << ", supernode=" << (super ? "true" : "false")
        << ", fillcolor=" << (super ? "\"#2ca02c\"" : "\"#d62728\"") << "];\n";
  }
  for (const auto& e : kernel.edges()) {
    const auto alpha = static_cast<int>(std::lround(255.0 * e.mu));
    out << "  n" << e.from.value << " -> n" << e.to.value << " [mu=" << format_number(e.mu)
        << ", color=\"#ff0000" << fmt::format("{:02x}", alpha) << "\"];\n";
  }
  out << "}\n";
}

void write_condensed_dot(std::ostream& out, const NodeTable& nodes, const CondensedGraph& condensed,
                         const FileHeader& header) {
  header.write(out, "//");
  out << "digraph condensed {\n";
  out << "  node [style=filled];\n";
  for (std::size_t c = 0; c < condensed.components.size(); ++c) {
    const auto& comp = condensed.components[c];
    const bool super = condensed.supernode[c];
    std::string label;
    if (comp.size() == 1) {
      label = nodes.label(comp[0]);
    } else {
      label = fmt::format("{} nodes", comp.size());
    }
    out << "  c" << c << " [label=" << dot_string(label) << ", size=" << comp.size()
        << ", supernode=" << (super ? "true" : "false")
        << ", shape=" << (super ? "doublecircle" : "circle")
        << ", fillcolor=" << (super ? "\"#2ca02c\"" : "\"#d62728\"") << "];\n";
  }
  for (const auto& [a, b] : condensed.dag_edges) out << "  c" << a << " -> c" << b << ";\n";
  out << "}\n";
}

void write_eta_csv(std::ostream& out, const std::vector<EtaPoint>& points,
                   const FileHeader& header) {
  header.write(out, "#");
  out << "p0,eta,supernode_count,nodes_in_supernodes,total_nodes\n";
  for (const auto& pt : points) {
    out << format_number(pt.p0) << ',' << format_number(pt.eta) << ',' << pt.supernode_count << ','
        << pt.nodes_in_supernodes << ',' << pt.total_nodes << '\n';
  }
}

void write_coverage_csv(std::ostream& out, const NodeTable& nodes,
                        const std::vector<CoverageReport>& reports, const FileHeader& header) {
  header.write(out, "#");
  out << "f_label,g_label,d0,n_shortest,p_c,r_c,method\n";
  for (const auto& r : reports) {
    out << csv_field(nodes.label(r.f)) << ',' << csv_field(nodes.label(r.g)) << ','
        << (r.d0 ? std::to_string(*r.d0) : std::string("unreachable")) << ','
        << r.n_shortest.str() << ',' << format_number(r.p_c) << ',' << format_number(r.r_c) << ','
        << r.method << '\n';
  }
}

void write_scc_json(std::ostream& out, const NodeTable& nodes, const CondensedGraph& condensed,
                    const FileHeader& header) {
  json comps = json::array();
  for (std::size_t c = 0; c < condensed.components.size(); ++c) {
    json members = json::array();
    for (const auto id : condensed.components[c]) members.push_back(nodes.label(id));
    comps.push_back({{"id", c},
                     {"supernode", static_cast<bool>(condensed.supernode[c])},
                     {"size", condensed.components[c].size()},
                     {"nodes", std::move(members)}});
  }
  json edges = json::array();
  for (const auto& [a, b] : condensed.dag_edges) edges.push_back({a, b});
  const auto total = nodes.size();
  const auto in_super = condensed.nodes_in_supernodes();
  json doc = {{"node_count", total},
              {"component_count", condensed.components.size()},
              {"supernode_count", condensed.supernode_count()},
              {"nodes_in_supernodes", in_super},
              {"components", std::move(comps)},
              {"dag_edges", std::move(edges)}};
  dump_json(out, doc, header);
}

void write_waypoints_json(std::ostream& out, const NodeTable& nodes,
                          const std::vector<WaypointExport>& rankings, const FileHeader& header) {
  json arr = json::array();
  for (const auto& ex : rankings) {
    const auto& r = ex.ranking;
    json entries = json::array();
    for (std::size_t i = 0; i < r.entries.size(); ++i) {
      const auto& e = r.entries[i];
      json item = {{"h", nodes.label(e.h)},
                   {"bound", e.bound},
                   {"r_c_fh", e.r_c_fh},
                   {"r_c_hg", e.r_c_hg},
                   {"is_intermediate", e.is_intermediate}};
      if (i < ex.transitivity.size()) item["transitivity"] = transitivity_json(ex.transitivity[i]);
      entries.push_back(std::move(item));
    }
    arr.push_back({{"f", nodes.label(r.f)},
                   {"g", nodes.label(r.g)},
                   {"r_c_fg", r.r_c_fg},
                   {"entries", std::move(entries)}});
  }
  dump_json(out, json{{"rankings", std::move(arr)}}, header);
}

void write_transitivity_json(std::ostream& out, const NodeTable& nodes, NodeId f, NodeId h, NodeId g,
                             const std::vector<TransitivityPoint>& points,
                             const FileHeader& header) {
  std::size_t violations = 0;
  for (const auto& pt : points) violations += pt.holds ? 0 : 1;
  json doc = {{"f", nodes.label(f)},
              {"h", nodes.label(h)},
              {"g", nodes.label(g)},
              {"violations", violations},
              {"points", transitivity_json(points)}};
  dump_json(out, doc, header);
}

}  // namespace searchspace
