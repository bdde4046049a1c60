#include "cli.hpp"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

#include <CLI11.hpp>
#include <fmt/format.h>
#include <json.hpp>

#include "acceptance.hpp"
#include "searchspace/coverage.hpp"
#include "searchspace/error.hpp"
#include "searchspace/export.hpp"
#include "searchspace/geometry.hpp"
#include "searchspace/grid.hpp"
#include "searchspace/ingest.hpp"
#include "searchspace/io.hpp"

#ifndef SEARCHSPACE_VERSION
#define SEARCHSPACE_VERSION "0.0.0"
#endif

namespace searchspace::cli {

namespace {

using nlohmann::json;

class IoFailure : public Error {
 public:
  using Error::Error;
};

struct RunConfig {
  std::string command;
  std::string input;
  std::string output;
  double p0 = 0.0;
  std::optional<double> p;
  std::string p_grid;
  std::string thresholds = "0:0.95:0.05";
  std::string pairs;
  int n = 5;
  std::string target;
  std::size_t models = 8;
  std::uint32_t samples = 5;
  std::uint64_t seed = 0;
  std::string eta_denominator = "active";
  bool fuzzy = false;
  bool quick = false;
  double noise = 0.0;
  std::string transcript;
  std::string start;
  std::size_t epochs = 0;
  bool condensed = false;
  std::string format = "json";
};

// Resolved configuration as recorded in output headers. The output path is
// left out so that a run is reproducible wherever it writes.
json config_json(const RunConfig& c) {
  json j{{"command", c.command}, {"seed", c.seed}};
  auto put = [&](const char* key, const auto& value) { j[key] = value; };
  if (!c.input.empty()) put("input", c.input);
  const auto& cmd = c.command;
  if (cmd == "ingest" && !c.transcript.empty()) {
    put("transcript", c.transcript);
    put("samples", c.samples);
    if (!c.target.empty()) {
      put("n", c.n);
      put("target", c.target);
    }
  }
  if (cmd == "binarize" || cmd == "scc" || cmd == "export-dot" || cmd == "measure" || cmd == "waypoints" ||
      cmd == "epochs") {
    put("p0", c.p0);
  }
  if (cmd == "eta-sweep") {
    put("thresholds", c.thresholds);
    put("eta_denominator", c.eta_denominator);
  }
  if (cmd == "measure" || cmd == "waypoints") put("pairs", c.pairs);
  if (cmd == "measure") put("fuzzy", c.fuzzy);
  if (cmd == "waypoints") {
    put("p_grid", c.p_grid);
    if (c.p) put("p", *c.p);
  }
  if (cmd == "simulate-grid") {
    put("n", c.n);
    put("target", c.target);
    put("models", c.models);
    put("samples", c.samples);
    put("noise", c.noise);
  }
  if (cmd == "epochs") {
    put("start", c.start);
    put("epochs", c.epochs);
  }
  if (cmd == "export-dot") put("condensed", c.condensed);
  if (cmd == "scc") put("format", c.format);
  if (cmd == "verify") put("quick", c.quick);
  return j;
}

std::uint64_t fnv1a(std::string_view text) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (const unsigned char ch : text) {
    h ^= ch;
    h *= 0x100000001b3ULL;
  }
  return h;
}

FileHeader make_header(const RunConfig& c) {
  const auto config = config_json(c).dump();
  return {{fmt::format("searchspace {} command={} config_hash={:016x}", SEARCHSPACE_VERSION, c.command,
                       fnv1a(config)),
           "config: " + config}};
}

/// Buffers a result and writes it in one go, to the --output file or `out`.
void emit(const RunConfig& c, const std::string& text, std::ostream& out) {
  if (c.output.empty()) {
    out << text;
    return;
  }
  std::ofstream file(c.output, std::ios::binary | std::ios::trunc);
  if (!file) throw IoFailure(fmt::format("cannot open output file '{}'", c.output));
  file << text;
  if (!file.flush()) throw IoFailure(fmt::format("failed writing '{}'", c.output));
}

std::ifstream open_input(const std::string& path) {
  if (path.empty()) throw InputError("--input is required");
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoFailure(fmt::format("cannot open input file '{}'", path));
  return in;
}

bool is_log_path(const std::string& path) { return std::filesystem::path(path).extension() == ".jsonl"; }

AggregatedLog load_log(const RunConfig& c, std::ostream& err) {
  auto in = open_input(c.input);
  auto result = aggregate_log(in);
  for (const auto& e : result.errors) err << fmt::format("warning: {}:{}: {}\n", c.input, e.line, e.message);
  if (result.records == 0) throw InputError(fmt::format("'{}' holds no valid transition records", c.input));
  return std::move(result.log);
}

/// Graph inputs: a kernel/envelope JSON file, or a transition log (.jsonl)
/// binarized at --p0.
KernelDocument load_graph(const RunConfig& c, std::ostream& err) {
  if (is_log_path(c.input)) {
    auto log = load_log(c, err);
    const auto env = binarize_threshold(log, c.p0);
    return {std::move(log.nodes), env.as_kernel()};
  }
  auto in = open_input(c.input);
  return read_kernel_json(in);
}

/// "a:b:step", a single number, or a comma-separated list.
std::vector<double> parse_grid(const std::string& text, const char* flag) {
  auto number = [&](const std::string& s) {
    try {
      std::size_t used = 0;
      const double v = std::stod(s, &used);
      if (used != s.size()) throw std::invalid_argument(s);
      return v;
    } catch (const std::exception&) {
      throw InputError(fmt::format("{}: '{}' is not a number", flag, s));
    }
  };
  std::vector<double> out;
  if (text.find(':') != std::string::npos) {
    std::vector<std::string> parts;
    std::stringstream ss(text);
    for (std::string part; std::getline(ss, part, ':');) parts.emplace_back(trim_label(part));
    if (parts.size() != 3) throw InputError(fmt::format("{}: expected a:b:step, got '{}'", flag, text));
    const double a = number(parts[0]), b = number(parts[1]), step = number(parts[2]);
    if (!(step > 0.0) || b < a) throw InputError(fmt::format("{}: empty or invalid range '{}'", flag, text));
    const auto count = static_cast<std::size_t>(std::floor((b - a) / step + 1e-9)) + 1;
    for (std::size_t i = 0; i < count; ++i) {
      // Snap to a 1e-12 grid so 0.05 * 3 prints as 0.15.
      out.push_back(std::round((a + static_cast<double>(i) * step) * 1e12) / 1e12);
    }
    return out;
  }
  std::stringstream ss(text);
  for (std::string part; std::getline(ss, part, ',');) out.push_back(number(std::string(trim_label(part))));
  if (out.empty()) throw InputError(fmt::format("{}: no values", flag));
  return out;
}

/// Inline "f->g;f2->g2" or a file with one "f -> g" per line.
std::vector<NodePair> parse_pairs(const std::string& spec, const NodeTable& nodes) {
  if (spec.empty()) throw InputError("--pairs is required");
  std::vector<std::string> items;
  if (std::filesystem::is_regular_file(spec)) {
    std::ifstream in(spec);
    for (std::string line; std::getline(in, line);) {
      const auto t = trim_label(line);
      if (!t.empty() && t.front() != '#') items.emplace_back(t);
    }
  } else {
    std::stringstream ss(spec);
    for (std::string item; std::getline(ss, item, ';');) {
      if (!trim_label(item).empty()) items.push_back(item);
    }
  }
  std::vector<NodePair> out;
  for (const auto& item : items) {
    const auto arrow = item.find("->");
    if (arrow == std::string::npos) throw InputError(fmt::format("pair '{}' is missing '->'", item));
    out.emplace_back(nodes.at(trim_label(item.substr(0, arrow))), nodes.at(trim_label(item.substr(arrow + 2))));
  }
  if (out.empty()) throw InputError("--pairs names no pairs");
  return out;
}

GridSpec resolve_grid(RunConfig& c) {
  GridSpec spec{c.n, {}};
  if (c.target.empty()) {
    const auto it = std::find_if(kStandardGrids.begin(), kStandardGrids.end(),
                                 [&](const GridSpec& g) { return g.n == c.n; });
    if (it == kStandardGrids.end()) {
      throw InputError(fmt::format("--target is required for N={} (standard boards: 3, 5, 8)", c.n));
    }
    spec.target = it->target;
  } else {
    const auto cell = parse_cell(c.target);
    if (!cell) throw InputError(fmt::format("--target: cannot parse '{}'", c.target));
    spec.target = *cell;
  }
  spec.validate();
  c.target = fmt::format("{},{}", spec.target.x, spec.target.y);
  return spec;
}

// --- commands ---------------------------------------------------------------

/// Majority-vote kernel from externally collected transcripts.
int cmd_ingest_transcripts(RunConfig& c, bool on_grid, std::ostream& out, std::ostream& err) {
  std::ifstream in(c.transcript, std::ios::binary);
  if (!in) throw IoFailure(fmt::format("cannot open transcript file '{}'", c.transcript));
  const auto read = read_transcripts(in);
  for (const auto& e : read.errors) err << fmt::format("warning: {}:{}: {}\n", c.transcript, e.line, e.message);
  if (read.records.empty()) throw InputError(fmt::format("'{}' holds no valid transcript records", c.transcript));
  std::optional<GridSpec> grid;
  if (on_grid) grid = resolve_grid(c);
  const auto t = kernel_from_transcripts(read.records, c.samples, grid ? &*grid : nullptr);
  for (const auto& w : t.warnings) err << "warning: " << w << '\n';
  for (const auto& v : t.violations) {
    err << fmt::format("violation: model {} state {} sample {} decision '{}' is not a legal unit step\n", v.model,
                       v.state, v.sample_index, v.decision);
  }
  std::ostringstream text;
  write_kernel_json(text, t.nodes, t.kernel, make_header(c));
  emit(c, text.str(), out);
  return kOk;
}

int cmd_ingest(RunConfig& c, std::ostream& out, std::ostream& err) {
  const auto log = load_log(c, err);
  std::ostringstream text;
  write_kernel_json(text, log.nodes, kernel_from_log(log), make_header(c));
  emit(c, text.str(), out);
  return kOk;
}

int cmd_binarize(RunConfig& c, std::ostream& out, std::ostream& err) {
  const auto log = load_log(c, err);
  std::ostringstream text;
  write_envelope_json(text, log.nodes, binarize_threshold(log, c.p0), make_header(c));
  emit(c, text.str(), out);
  return kOk;
}

int cmd_simulate_grid(RunConfig& c, std::ostream& out, std::ostream& err) {
  const auto spec = resolve_grid(c);
  if (c.models == 0) throw InputError("--models must be positive");
  if (c.samples == 0) throw InputError("--samples must be positive");
  const auto sim = simulate_grid_policies(spec, default_roster(c.models, c.noise), c.samples, c.seed);
  for (const auto& w : sim.result.warnings) err << "warning: " << w << '\n';
  if (!sim.result.violations.empty()) {
    err << fmt::format("note: {} sampled decisions were illegal moves\n", sim.result.violations.size());
  }
  if (!c.transcript.empty()) {
    std::ostringstream t;
    write_transcripts(t, sim.transcript);
    std::ofstream file(c.transcript, std::ios::binary | std::ios::trunc);
    if (!file || !(file << t.str())) throw IoFailure(fmt::format("cannot write transcript '{}'", c.transcript));
  }
  std::ostringstream text;
  write_kernel_json(text, sim.result.nodes, sim.result.kernel, make_header(c));
  emit(c, text.str(), out);
  return kOk;
}

int cmd_measure(RunConfig& c, std::ostream& out, std::ostream& err) {
  const auto doc = load_graph(c, err);
  const auto pairs = parse_pairs(c.pairs, doc.nodes);
  std::ostringstream text;
  write_coverage_csv(text, doc.nodes, coverage_report(doc.kernel, pairs, c.fuzzy), make_header(c));
  emit(c, text.str(), out);
  return kOk;
}

int cmd_scc(RunConfig& c, std::ostream& out, std::ostream& err) {
  const auto doc = load_graph(c, err);
  const auto condensed = condense(support_envelope(doc.kernel));
  std::ostringstream text;
  if (c.format == "json") {
    write_scc_json(text, doc.nodes, condensed, make_header(c));
  } else if (c.format == "dot") {
    write_condensed_dot(text, doc.nodes, condensed, make_header(c));
  } else {
    throw InputError(fmt::format("--format: expected json or dot, got '{}'", c.format));
  }
  emit(c, text.str(), out);
  return kOk;
}

int cmd_eta_sweep(RunConfig& c, std::ostream& out, std::ostream& err) {
  EtaDenominator denom;
  if (c.eta_denominator == "active") {
    denom = EtaDenominator::active;
  } else if (c.eta_denominator == "all") {
    denom = EtaDenominator::all;
  } else {
    throw InputError(fmt::format("--eta-denominator: expected active or all, got '{}'", c.eta_denominator));
  }
  const auto thresholds = parse_grid(c.thresholds, "--thresholds");
  const auto log = load_log(c, err);
  std::ostringstream text;
  write_eta_csv(text, eta_sweep(log, thresholds, denom), make_header(c));
  emit(c, text.str(), out);
  return kOk;
}

int cmd_waypoints(RunConfig& c, std::ostream& out, std::ostream& err) {
  const auto doc = load_graph(c, err);
  const auto env = support_envelope(doc.kernel);
  const auto pairs = parse_pairs(c.pairs, doc.nodes);
  std::vector<double> grid;
  if (!c.p_grid.empty()) grid = parse_grid(c.p_grid, "--p-grid");
  if (c.p) grid.push_back(*c.p);
  std::vector<WaypointExport> exports;
  for (const auto& [f, g] : pairs) {
    WaypointExport e{rank_waypoints(env, f, g), {}};
    if (!grid.empty()) {
      for (const auto& entry : e.ranking.entries) e.transitivity.push_back(transitivity_check(env, f, entry.h, g, grid));
    }
    exports.push_back(std::move(e));
  }
  std::ostringstream text;
  write_waypoints_json(text, doc.nodes, exports, make_header(c));
  emit(c, text.str(), out);
  return kOk;
}

int cmd_epochs(RunConfig& c, std::ostream& out, std::ostream& err) {
  const auto doc = load_graph(c, err);
  const auto env = support_envelope(doc.kernel);
  if (c.start.empty()) throw InputError("--start is required");
  const auto start = doc.nodes.at(c.start);
  std::ostringstream text;
  make_header(c).write(text, "#");
  text << "epoch,label\n";
  std::vector<bool> seen(env.node_count(), false);
  for (std::size_t e = 0; e <= c.epochs; ++e) {
    for (const auto id : epoch_expansion(env, start, e)) {
      if (seen[id.index()]) continue;
      seen[id.index()] = true;
      text << e << ',' << doc.nodes.label(id) << '\n';
    }
  }
  emit(c, text.str(), out);
  return kOk;
}

int cmd_export_dot(RunConfig& c, std::ostream& out, std::ostream& err) {
  const auto doc = load_graph(c, err);
  std::ostringstream text;
  if (c.condensed) {
    write_condensed_dot(text, doc.nodes, condense(support_envelope(doc.kernel)), make_header(c));
  } else {
    write_dot(text, doc.nodes, doc.kernel, make_header(c));
  }
  emit(c, text.str(), out);
  return kOk;
}

int cmd_verify(RunConfig& c, std::ostream& out, std::ostream&) {
  acceptance::Options options;
  options.quick = c.quick;
  options.seed = c.seed;
  if (!c.input.empty()) {
    auto in = open_input(c.input);
    options.lattice_override = read_envelope_json(in);
  }
  options.cli = [](const std::vector<std::string>& args) {
    std::ostringstream sink_out, sink_err;
    return run_cli(args, sink_out, sink_err);
  };
  std::ostringstream text;
  make_header(c).write(text, "#");
  int passed = 0;
  for (int i = 1; i <= acceptance::kCriterionCount; ++i) {
    const auto r = acceptance::run_criterion(i, options);
    passed += r.passed ? 1 : 0;
    text << acceptance::format_result(r) << '\n';
  }
  text << fmt::format("{}/{} checks passed\n", passed, acceptance::kCriterionCount);
  emit(c, text.str(), out);
  return passed == acceptance::kCriterionCount ? kOk : kVerifyFailed;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  RunConfig c;
  CLI::App app{"Search-space geometry and coverage tools", "searchspace"};
  app.require_subcommand(1);
  app.set_version_flag("--version", SEARCHSPACE_VERSION);

  auto input = [&](CLI::App* s, const char* what) { s->add_option("--input", c.input, what)->required(); };
  auto output = [&](CLI::App* s) { s->add_option("--output", c.output, "Output file (default: stdout)"); };
  auto seed = [&](CLI::App* s) { s->add_option("--seed", c.seed, "Root random seed"); };
  auto p0 = [&](CLI::App* s) {
    s->add_option("--p0", c.p0, "Binarization threshold when --input is a .jsonl log")->check(CLI::Range(0.0, 1.0));
  };

  auto* ingest = app.add_subcommand("ingest", "Fuzzy kernel from a transition log or from transcripts");
  auto* ingest_input = ingest->add_option("--input", c.input, "Transition log (JSONL)");
  auto* ingest_transcript = ingest->add_option("--transcript", c.transcript, "Transcript (JSONL) to majority-vote");
  ingest_input->excludes(ingest_transcript);
  ingest->add_option("--samples", c.samples, "Samples m per (model, state) in the transcript");
  auto* ingest_n = ingest->add_option("--n", c.n, "Check decisions against an N x N board");
  ingest->add_option("--target", c.target, "Board target x,y");
  output(ingest);

  auto* binarize = app.add_subcommand("binarize", "Frequency-threshold envelope of a transition log");
  input(binarize, "Transition log (JSONL)");
  binarize->add_option("--p0", c.p0, "Threshold p0 in [0,1)")->required()->check(CLI::Range(0.0, 1.0));
  output(binarize);

  auto* simulate = app.add_subcommand("simulate-grid", "Majority-vote kernel from synthetic grid policies");
  simulate->add_option("--n", c.n, "Board size N");
  simulate->add_option("--target", c.target, "Target cell x,y (default from the standard boards)");
  simulate->add_option("--models", c.models, "Number of policies");
  simulate->add_option("--samples", c.samples, "Samples m per (policy, cell)");
  simulate->add_option("--noise", c.noise, "Probability of a uniformly random legal move")->check(CLI::Range(0.0, 1.0));
  simulate->add_option("--transcript", c.transcript, "Also write the sampled transcript (JSONL)");
  seed(simulate);
  output(simulate);

  auto* measure = app.add_subcommand("measure", "d0, N_d0 and critical parameter per pair (CSV)");
  input(measure, "Kernel JSON or transition log");
  measure->add_option("--pairs", c.pairs, "\"f->g;...\" or a file with one pair per line")->required();
  measure->add_flag("--fuzzy", c.fuzzy, "Critical parameter of the weighted kernel, not its support");
  p0(measure);
  output(measure);

  auto* scc = app.add_subcommand("scc", "Strongly connected components and condensation");
  input(scc, "Kernel JSON or transition log");
  scc->add_option("--format", c.format, "json or dot");
  p0(scc);
  output(scc);

  auto* eta = app.add_subcommand("eta-sweep", "Supernode share eta over a threshold grid (CSV)");
  input(eta, "Transition log (JSONL)");
  eta->add_option("--thresholds", c.thresholds, "a:b:step or a comma list");
  eta->add_option("--eta-denominator", c.eta_denominator, "active or all");
  output(eta);

  auto* waypoints = app.add_subcommand("waypoints", "Rank waypoints by the transitivity lower bound");
  input(waypoints, "Kernel JSON or transition log");
  waypoints->add_option("--pairs", c.pairs, "\"f->g;...\" or a file with one pair per line")->required();
  waypoints->add_option("--p-grid", c.p_grid, "Also sweep transitivity on a:b:step");
  waypoints->add_option("--p", c.p, "Also check transitivity at this p");
  p0(waypoints);
  output(waypoints);

  auto* epochs = app.add_subcommand("epochs", "First epoch at which each node is reached (CSV)");
  input(epochs, "Kernel JSON or transition log");
  epochs->add_option("--start", c.start, "Start node label")->required();
  epochs->add_option("--epochs", c.epochs, "Number of expansion rounds")->required();
  p0(epochs);
  output(epochs);

  auto* dot = app.add_subcommand("export-dot", "Graphviz export");
  input(dot, "Kernel JSON or transition log");
  dot->add_flag("--condensed", c.condensed, "Export the SCC condensation");
  p0(dot);
  output(dot);

  auto* verify = app.add_subcommand("verify", "Run the acceptance checks");
  verify->add_flag("--quick", c.quick, "Smaller random fixtures");
  verify->add_option("--input", c.input, "Replacement N=5 lattice envelope");
  seed(verify);
  output(verify);

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help(app.get_subcommands().empty() ? "" : app.get_subcommands().front()->get_name());
    return kOk;
  } catch (const CLI::CallForVersion&) {
    out << SEARCHSPACE_VERSION << '\n';
    return kOk;
  } catch (const CLI::ParseError& e) {
    err << "usage error: " << e.what() << '\n';
    return kUsage;
  }

  const auto* sub = app.get_subcommands().front();
  c.command = sub->get_name();
  try {
    if (sub == ingest) {
      if (c.transcript.empty()) return cmd_ingest(c, out, err);
      return cmd_ingest_transcripts(c, ingest_n->count() > 0 || !c.target.empty(), out, err);
    }
    if (sub == binarize) return cmd_binarize(c, out, err);
    if (sub == simulate) return cmd_simulate_grid(c, out, err);
    if (sub == measure) return cmd_measure(c, out, err);
    if (sub == scc) return cmd_scc(c, out, err);
    if (sub == eta) return cmd_eta_sweep(c, out, err);
    if (sub == waypoints) return cmd_waypoints(c, out, err);
    if (sub == epochs) return cmd_epochs(c, out, err);
    if (sub == dot) return cmd_export_dot(c, out, err);
    return cmd_verify(c, out, err);
  } catch (const SchemaError& e) {
    err << "schema error: " << e.what() << '\n';
    return kSchemaError;
  } catch (const StructuralError& e) {
    err << "structural error: " << e.what() << '\n';
    return kStructuralError;
  } catch (const ContractError& e) {
    err << "contract error: " << e.what() << '\n';
    return kContractError;
  } catch (const InputError& e) {
    err << "input error: " << e.what() << '\n';
    return kInputError;
  } catch (const IoFailure& e) {
    err << "i/o error: " << e.what() << '\n';
    return kIoError;
  }
}

}  // namespace searchspace::cli
