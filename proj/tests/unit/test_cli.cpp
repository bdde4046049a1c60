#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "cli.hpp"
#include "helpers.hpp"

using searchspace::test::fixture;
namespace fs = std::filesystem;
namespace cli = searchspace::cli;

namespace {

struct Run {
  int status;
  std::string out;
  std::string err;
};

Run run(const std::vector<std::string>& args) {
  std::ostringstream out, err;
  const int status = cli::run_cli(args, out, err);
  return {status, out.str(), err.str()};
}

std::vector<std::string> data_lines(const std::string& text) {
  std::vector<std::string> lines;
  std::istringstream in(text);
  for (std::string line; std::getline(in, line);) {
    if (!line.empty() && line[0] != '#') lines.push_back(line);
  }
  return lines;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), {}};
}

struct TempDir {
  fs::path path = fs::temp_directory_path() / ("searchspace-cli-" + std::to_string(std::rand()));
  TempDir() { fs::create_directories(path); }
  ~TempDir() { fs::remove_all(path); }
  std::string operator/(const std::string& name) const { return (path / name).string(); }
};

}  // namespace

TEST_CASE("measure on the lattice fixture") {
  const auto r = run({"measure", "--input", fixture("lattice_n5_t34.json"), "--pairs", "(0,0)->(3,4); (3,4) -> (3,4)"});
  REQUIRE(r.status == 0);
  CHECK(r.out.rfind("# searchspace 0.1.0 command=measure config_hash=", 0) == 0);
  const auto lines = data_lines(r.out);
  REQUIRE(lines.size() == 3);
  CHECK(lines[0] == "f_label,g_label,d0,n_shortest,p_c,r_c,method");
  CHECK(lines[1].rfind("\"(0,0)\",\"(3,4)\",7,35,0.60175381", 0) == 0);
  CHECK(lines[2] == "\"(3,4)\",\"(3,4)\",0,1,0,1,identity");
}

TEST_CASE("pairs from a file") {
  TempDir dir;
  std::ofstream(dir / "pairs.txt") << "# start -> target\n(0,0) -> (3,4)\n\n(4,0) -> (3,4)\n";
  const auto r = run({"measure", "--input", fixture("lattice_n5_t34.json"), "--pairs", dir / "pairs.txt"});
  REQUIRE(r.status == 0);
  CHECK(data_lines(r.out).size() == 3);
}

TEST_CASE("eta-sweep on a DAG log is all zero") {
  const auto r = run({"eta-sweep", "--input", fixture("dag_log.jsonl")});
  REQUIRE(r.status == 0);
  const auto lines = data_lines(r.out);
  REQUIRE(lines.size() == 21);
  CHECK(lines[0] == "p0,eta,supernode_count,nodes_in_supernodes,total_nodes");
  CHECK(lines[4].rfind("0.15,0,0,0,", 0) == 0);
  for (std::size_t i = 1; i < lines.size(); ++i) CHECK(lines[i].find(",0,0,0,") != std::string::npos);
}

TEST_CASE("eta-sweep on planted cycles") {
  const auto r = run({"eta-sweep", "--input", fixture("cycle_log.jsonl"), "--thresholds", "0,0.1,0.3"});
  REQUIRE(r.status == 0);
  const auto lines = data_lines(r.out);
  REQUIRE(lines.size() == 4);
  CHECK(lines[1] == "0,0.7142857142857143,2,5,7");
  CHECK(lines[2] == "0.1,0.2857142857142857,1,2,7");
  CHECK(lines[3].rfind("0.3,0,0,0,", 0) == 0);
}

TEST_CASE("simulate-grid is byte-deterministic") {
  TempDir dir;
  const std::vector<std::string> base{"simulate-grid", "--n", "5", "--target", "3,4", "--seed", "7"};
  auto a = base, b = base;
  std::vector<std::string> c{"simulate-grid", "--n", "5", "--target", "3,4"};
  a.insert(a.end(), {"--output", dir / "a.json", "--transcript", dir / "a.jsonl"});
  b.insert(b.end(), {"--output", dir / "b.json", "--transcript", dir / "b.jsonl"});
  c.insert(c.end(), {"--seed", "8", "--noise", "0.3", "--output", dir / "c.json"});
  REQUIRE(run(a).status == 0);
  REQUIRE(run(b).status == 0);
  REQUIRE(run(c).status == 0);
  CHECK(slurp(dir / "a.json") == slurp(dir / "b.json"));
  CHECK(slurp(dir / "a.jsonl") == slurp(dir / "b.jsonl"));
  CHECK(slurp(dir / "a.json") != slurp(dir / "c.json"));

  // The transcript feeds back through ingest to the same kernel.
  const auto back = run({"ingest", "--transcript", dir / "a.jsonl", "--samples", "5", "--n", "5", "--target", "3,4"});
  REQUIRE(back.status == 0);
  auto body = [](const std::string& s) { return s.substr(s.find("\n{") + 1); };
  CHECK(body(back.out) == body(slurp(dir / "a.json")));
}

TEST_CASE("graph commands run on kernels and logs") {
  const auto lattice = fixture("lattice_n5_t34.json");
  CHECK(run({"scc", "--input", lattice}).out.find("\"supernode_count\": 0") != std::string::npos);
  CHECK(run({"scc", "--input", fixture("cycle_log.jsonl"), "--format", "dot"}).out.find("doublecircle") !=
        std::string::npos);
  CHECK(run({"export-dot", "--input", lattice}).out.find("digraph envelope") != std::string::npos);
  CHECK(run({"export-dot", "--input", lattice, "--condensed"}).out.find("digraph condensed") != std::string::npos);

  const auto ep = run({"epochs", "--input", lattice, "--start", "(0,0)", "--epochs", "7"});
  REQUIRE(ep.status == 0);
  const auto lines = data_lines(ep.out);
  CHECK(lines.back() == "7,(3,4)");
  CHECK(lines.size() == 1 + 20);  // the 4x5 rectangle from (0,0) to (3,4)

  const auto wp = run({"waypoints", "--input", lattice, "--pairs", "(2,3)->(3,4)", "--p-grid", "0.1:0.9:0.4"});
  REQUIRE(wp.status == 0);
  CHECK(wp.out.find("\"h\": \"(2,4)\"") != std::string::npos);
  CHECK(wp.out.find("\"transitivity\"") != std::string::npos);

  const auto bin = run({"binarize", "--input", fixture("cycle_log.jsonl"), "--p0", "0.1"});
  REQUIRE(bin.status == 0);
  CHECK(bin.out.find("\"b1\"") != std::string::npos);
  CHECK(run({"ingest", "--input", fixture("cycle_log.jsonl")}).out.find("0.1]") != std::string::npos);
}

TEST_CASE("headers record the resolved configuration") {
  const auto a = run({"scc", "--input", fixture("lattice_n5_t34.json")});
  const auto b = run({"scc", "--input", fixture("lattice_n5_t34.json"), "--format", "json"});
  const auto c = run({"scc", "--input", fixture("lattice_n5_t34.json"), "--p0", "0.2"});
  auto first_line = [](const std::string& s) { return s.substr(0, s.find('\n')); };
  CHECK(first_line(a.out) == first_line(b.out));  // defaults are resolved before hashing
  CHECK(first_line(a.out) != first_line(c.out));
  CHECK(a.out.find("// config: {\"command\":\"scc\"") != std::string::npos);
}

TEST_CASE("exit statuses") {
  CHECK(run({}).status == cli::kUsage);
  CHECK(run({"frobnicate"}).status == cli::kUsage);
  CHECK(run({"measure", "--input", fixture("lattice_n5_t34.json")}).status == cli::kUsage);
  CHECK(run({"binarize", "--input", fixture("dag_log.jsonl"), "--p0", "2"}).status == cli::kUsage);
  CHECK(run({"--help"}).status == cli::kOk);

  const auto missing = run({"scc", "--input", "/nonexistent/graph.json"});
  CHECK(missing.status == cli::kIoError);
  CHECK(missing.err.find("/nonexistent/graph.json") != std::string::npos);

  const auto label = run({"measure", "--input", fixture("lattice_n5_t34.json"), "--pairs", "(9,9)->(3,4)"});
  CHECK(label.status == cli::kInputError);
  CHECK(label.err.find("(9,9)") != std::string::npos);
  CHECK(run({"binarize", "--input", fixture("dag_log.jsonl"), "--p0", "1"}).status == cli::kInputError);
  CHECK(run({"simulate-grid", "--n", "4"}).status == cli::kInputError);

  TempDir dir;
  std::ofstream(dir / "bad.json") << R"({"nodes": ["a"], "edges": [[0, 3, 1]]})";
  const auto schema = run({"scc", "--input", dir / "bad.json"});
  CHECK(schema.status == cli::kSchemaError);
  CHECK(schema.err.find("edges[0]") != std::string::npos);

  std::ofstream(dir / "short.jsonl") << R"x({"model": "m", "state": "(0,0)", "target": "(1,1)", "sample": 0, "decision": "up"})x"
                                     << "\n";
  const auto structural = run({"ingest", "--transcript", dir / "short.jsonl", "--samples", "3"});
  CHECK(structural.status == cli::kStructuralError);
  CHECK(structural.err.find("(0,0)") != std::string::npos);

  const auto contract = run({"waypoints", "--input", fixture("lattice_n5_t34.json"), "--pairs", "(0,0)->(3,4)", "--p", "1.5"});
  CHECK(contract.status == cli::kContractError);

  CHECK(run({"scc", "--input", fixture("lattice_n5_t34.json"), "--output", "/nonexistent/dir/out.json"}).status ==
        cli::kIoError);
}

TEST_CASE("verify flags a corrupted lattice") {
  TempDir dir;
  const auto r = run({"verify", "--quick", "--input", fixture("lattice_n5_t34_corrupt.json"), "--output", dir / "v.txt"});
  CHECK(r.status == cli::kVerifyFailed);
  const auto report = slurp(dir / "v.txt");
  CHECK(report.find("[FAIL]  2  grid geometry") != std::string::npos);
  CHECK(report.find("n_shortest") != std::string::npos);
}
