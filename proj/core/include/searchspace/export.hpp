#pragma once

#include <iosfwd>
#include <vector>

#include "searchspace/coverage.hpp"
#include "searchspace/geometry.hpp"
#include "searchspace/io.hpp"
#include "searchspace/relation.hpp"

namespace searchspace {

/// DOT digraph of a kernel or envelope. Nodes carry supernode=true|false
/// (red ordinary, green supernode); edge alpha is proportional to mu.
void write_dot(std::ostream& out, const NodeTable& nodes, const FuzzyKernel& kernel,
               const FileHeader& header = {});

/// DOT digraph of the condensation: one node per component.
void write_condensed_dot(std::ostream& out, const NodeTable& nodes, const CondensedGraph& condensed,
                         const FileHeader& header = {});

/// Columns: p0, eta, supernode_count, nodes_in_supernodes, total_nodes.
void write_eta_csv(std::ostream& out, const std::vector<EtaPoint>& points,
                   const FileHeader& header = {});

/// Columns: f_label, g_label, d0, n_shortest, p_c, r_c, method.
void write_coverage_csv(std::ostream& out, const NodeTable& nodes,
                        const std::vector<CoverageReport>& reports, const FileHeader& header = {});

void write_scc_json(std::ostream& out, const NodeTable& nodes, const CondensedGraph& condensed,
                    const FileHeader& header = {});

struct WaypointExport {
  WaypointRanking ranking;
  /// Optional per-entry transitivity sweeps, parallel to ranking.entries.
  std::vector<std::vector<TransitivityPoint>> transitivity;
};

void write_waypoints_json(std::ostream& out, const NodeTable& nodes,
                          const std::vector<WaypointExport>& rankings, const FileHeader& header = {});

void write_transitivity_json(std::ostream& out, const NodeTable& nodes, NodeId f, NodeId h, NodeId g,
                             const std::vector<TransitivityPoint>& points,
                             const FileHeader& header = {});

}  // namespace searchspace
