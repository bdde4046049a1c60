#include <doctest.h>

#include <limits>
#include <sstream>

#include <json.hpp>

#include "helpers.hpp"
#include "searchspace/error.hpp"
#include "searchspace/export.hpp"
#include "searchspace/grid.hpp"
#include "searchspace/io.hpp"

using namespace searchspace;
using searchspace::test::envelope;
using searchspace::test::id;

namespace {

NodeTable labels(std::initializer_list<const char*> names) {
  NodeTable t;
  for (const auto* n : names) t.intern(n);
  return t;
}

}  // namespace

TEST_CASE("kernel JSON round trip") {
  KernelBuilder b(3);
  b.add(id(0), id(1), 0.25).add(id(1), id(2), 1.0).add(id(2), id(0), 1.0 / 3.0);
  const auto k = std::move(b).build();
  const auto nodes = labels({"a", "b \"quoted\"", "(1,2)"});
  std::ostringstream out;
  write_kernel_json(out, nodes, k, FileHeader{{"made by a test"}});
  CHECK(out.str().rfind("// made by a test\n{", 0) == 0);
  const auto doc = parse_kernel_json(out.str());
  CHECK(doc.nodes.label(id(1)) == "b \"quoted\"");
  REQUIRE(doc.kernel.edge_count() == 3);
  CHECK(doc.kernel.mu(id(2), id(0)) == 1.0 / 3.0);  // shortest round-trip digits
  std::ostringstream again;
  write_kernel_json(again, doc.nodes, doc.kernel, FileHeader{{"made by a test"}});
  CHECK(again.str() == out.str());
}

TEST_CASE("kernel JSON schema violations") {
  CHECK_THROWS_AS(parse_kernel_json("not json"), SchemaError);
  CHECK_THROWS_AS(parse_kernel_json(R"({"edges": []})"), SchemaError);
  CHECK_THROWS_AS(parse_kernel_json(R"({"nodes": ["a"]})"), SchemaError);
  CHECK_THROWS_AS(parse_kernel_json(R"({"nodes": ["a", "a"], "edges": []})"), SchemaError);
  CHECK_THROWS_AS(parse_kernel_json(R"({"nodes": [""], "edges": []})"), SchemaError);
  CHECK_THROWS_AS(parse_kernel_json(R"({"nodes": ["a"], "edges": [[0, 1, 0.5]]})"), SchemaError);
  CHECK_THROWS_AS(parse_kernel_json(R"({"nodes": ["a", "b"], "edges": [[0, 1, 0]]})"), SchemaError);
  CHECK_THROWS_AS(parse_kernel_json(R"({"nodes": ["a", "b"], "edges": [[0, 1, 1.5]]})"), SchemaError);
  CHECK_THROWS_AS(parse_kernel_json(R"({"nodes": ["a", "b"], "edges": [[0, 1]]})"), SchemaError);
  CHECK_THROWS_AS(parse_kernel_json(R"({"nodes": ["a", "b"], "edges": [[0, 1, 0.5], [0, 1, 0.4]]})"), SchemaError);
  try {
    parse_kernel_json(R"({"nodes": ["a", "b"], "edges": [[0, 1, 0.5], [1, 7, 0.5]]})");
    FAIL("expected a schema error");
  } catch (const SchemaError& e) {
    CHECK(std::string(e.what()).find("edges[1]") != std::string::npos);
  }
  const auto ok = parse_kernel_json("// header\n{\"nodes\": [\"a\", \"b\"], /* c */ \"edges\": [[0, 1, 0.5]]}");
  CHECK(ok.kernel.mu(id(0), id(1)) == 0.5);
}

TEST_CASE("envelope files require unit weights") {
  std::istringstream good(R"({"nodes": ["a", "b"], "edges": [[0, 1, 1]]})");
  CHECK(read_envelope_json(good).envelope == envelope(2, {{0, 1}}));
  std::istringstream bad(R"({"nodes": ["a", "b"], "edges": [[0, 1, 0.5]]})");
  CHECK_THROWS_AS(read_envelope_json(bad), SchemaError);

  const GridSpec spec{5, {3, 4}};
  std::ostringstream out;
  write_envelope_json(out, grid_nodes(spec), monotone_lattice_envelope(spec));
  std::istringstream in(out.str());
  CHECK(read_envelope_json(in).envelope == monotone_lattice_envelope(spec));
}

TEST_CASE("number formatting") {
  CHECK(format_number(0.25) == "0.25");
  CHECK(format_number(1.0) == "1");
  CHECK(format_number(0.1 + 0.2) == "0.30000000000000004");
  CHECK(format_number(std::numeric_limits<double>::infinity()) == "inf");
}

TEST_CASE("DOT export marks supernodes and weights") {
  KernelBuilder b(3);
  b.add(id(0), id(1), 1.0).add(id(1), id(0), 0.5).add(id(1), id(2), 0.25);
  const auto nodes = labels({"x", "y", "z"});
  std::ostringstream out;
  write_dot(out, nodes, std::move(b).build(), FileHeader{{"h"}});
  const auto s = out.str();
  CHECK(s.rfind("// h\ndigraph", 0) == 0);
  CHECK(s.find("n0 [label=\"x\", supernode=true") != std::string::npos);
  CHECK(s.find("n2 [label=\"z\", supernode=false") != std::string::npos);
  CHECK(s.find("n0 -> n1 [mu=1, color=\"#ff0000ff\"]") != std::string::npos);
  CHECK(s.find("n1 -> n2 [mu=0.25") != std::string::npos);

  std::ostringstream cond;
  write_condensed_dot(cond, nodes, condense(envelope(3, {{0, 1}, {1, 0}, {1, 2}})));
  CHECK(cond.str().find("doublecircle") != std::string::npos);
  CHECK(cond.str().find("c0 -> c1;") != std::string::npos);
}

TEST_CASE("CSV writers") {
  std::ostringstream eta;
  write_eta_csv(eta, {{0.1, 0.25, 1, 2, 8}}, FileHeader{{"h"}});
  CHECK(eta.str() == "# h\np0,eta,supernode_count,nodes_in_supernodes,total_nodes\n0.1,0.25,1,2,8\n");

  const auto nodes = labels({"(0,0)", "(0,1)"});
  CoverageReport unreachable{id(1), id(0), std::nullopt, 0, 1.0, 0.0, "unreachable"};
  CoverageReport direct{id(0), id(1), 1, 1, 1.0, 0.0, "crisp:dag_exact+bisection"};
  std::ostringstream cov;
  write_coverage_csv(cov, nodes, {unreachable, direct});
  CHECK(cov.str() ==
        "f_label,g_label,d0,n_shortest,p_c,r_c,method\n"
        "\"(0,1)\",\"(0,0)\",unreachable,0,1,0,unreachable\n"
        "\"(0,0)\",\"(0,1)\",1,1,1,0,crisp:dag_exact+bisection\n");
}

TEST_CASE("JSON writers") {
  const auto nodes = labels({"a", "b", "c"});
  std::ostringstream scc;
  write_scc_json(scc, nodes, condense(envelope(3, {{0, 1}, {1, 0}, {1, 2}})), FileHeader{{"h"}});
  const auto doc = nlohmann::json::parse(scc.str(), nullptr, true, true);
  CHECK(doc["supernode_count"] == 1);
  CHECK(doc["nodes_in_supernodes"] == 2);
  CHECK(doc["components"].size() == 2);

  std::ostringstream tr;
  const double inf = std::numeric_limits<double>::infinity();
  write_transitivity_json(tr, nodes, id(0), id(0), id(0), {{0.5, 2.0, 4.0, false}, {1.0, inf, inf, false}});
  const auto t = nlohmann::json::parse(tr.str(), nullptr, true, true);
  CHECK(t["violations"] == 2);
  CHECK(t["points"][1]["lhs"] == "inf");

  std::ostringstream wp;
  WaypointExport ex{{id(0), id(2), 0.0, {{id(1), 0.0, 0.0, 0.0, true}}}, {}};
  write_waypoints_json(wp, nodes, {ex});
  const auto w = nlohmann::json::parse(wp.str(), nullptr, true, true);
  CHECK(w["rankings"][0]["entries"][0]["h"] == "b");
  CHECK(w["rankings"][0]["entries"][0]["is_intermediate"] == true);
}
