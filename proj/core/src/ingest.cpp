#include "searchspace/ingest.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <ostream>
#include <set>

#include <boost/multiprecision/cpp_int.hpp>
#include <fmt/format.h>
#include <json.hpp>

#include "searchspace/error.hpp"
#include "searchspace/grid.hpp"

namespace searchspace {

using nlohmann::json;

std::uint64_t AggregatedLog::pair_count(NodeId f, NodeId g) const {
  const auto it = n_pair.find({f, g});
  return it == n_pair.end() ? 0 : it->second;
}

double AggregatedLog::relative_frequency(NodeId f, NodeId g) const {
  const auto in = inputs(f);
  return in == 0 ? 0.0 : static_cast<double>(pair_count(f, g)) / static_cast<double>(in);
}

void LogAggregator::add(std::string_view from, std::string_view to, std::uint64_t weight) {
  if (weight == 0) throw InputError("transition weight must be positive");
  const auto f = log_.nodes.intern(from);
  const auto g = log_.nodes.intern(to);
  log_.n_in.resize(log_.nodes.size(), 0);
  log_.n_in[f.index()] += weight;
  log_.n_pair[{f, g}] += weight;
  log_.total_pairs += weight;
}

namespace {

std::string require_string(const json& obj, const char* key) {
  const auto it = obj.find(key);
  if (it == obj.end()) throw SchemaError(fmt::format("missing field \"{}\"", key));
  if (!it->is_string()) throw SchemaError(fmt::format("field \"{}\" must be a string", key));
  auto s = it->get<std::string>();
  if (trim_label(s).empty()) throw SchemaError(fmt::format("field \"{}\" is empty", key));
  return s;
}

bool blank(std::string_view line) { return trim_label(line).empty(); }

}  // namespace

LogIngestResult aggregate_log(std::istream& in) {
  LogIngestResult result;
  LogAggregator agg;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (blank(line)) continue;
    try {
      const auto obj = json::parse(line);
      if (!obj.is_object()) throw SchemaError("record is not a JSON object");
      const auto from = require_string(obj, "from");
      const auto to = require_string(obj, "to");
      std::uint64_t weight = 1;
      if (const auto it = obj.find("weight"); it != obj.end()) {
        if (!it->is_number_integer() || it->get<std::int64_t>() <= 0) {
          throw SchemaError("field \"weight\" must be a positive integer");
        }
        weight = it->get<std::uint64_t>();
      }
      if (const auto it = obj.find("run"); it != obj.end() && !it->is_string() && !it->is_number()) {
        throw SchemaError("field \"run\" must be a string or number");
      }
      agg.add(from, to, weight);
      ++result.records;
    } catch (const json::exception& e) {
      result.errors.push_back({lineno, fmt::format("invalid JSON: {}", e.what())});
    } catch (const Error& e) {
      result.errors.push_back({lineno, e.what()});
    }
  }
  result.log = std::move(agg).take();
  result.log.n_in.resize(result.log.nodes.size(), 0);
  return result;
}

AggregatedLog aggregate_pairs(const std::vector<std::pair<std::string, std::string>>& pairs) {
  LogAggregator agg;
  for (const auto& [f, g] : pairs) agg.add(f, g);
  return std::move(agg).take();
}

CrispEnvelope binarize_threshold(const AggregatedLog& log, double p0) {
  if (!(p0 >= 0.0 && p0 < 1.0)) {
    throw InputError(fmt::format("threshold p0 = {} outside [0,1)", p0));
  }
  using boost::multiprecision::uint128_t;
  constexpr std::uint64_t kGrid = 1'000'000'000;
  const auto p0_scaled = static_cast<std::uint64_t>(std::llround(p0 * static_cast<double>(kGrid)));
  std::vector<NodePair> kept;
  for (const auto& [pair, count] : log.n_pair) {
    const auto in = log.inputs(pair.first);
    if (in <= 1) continue;
    // r > p0  <=>  n_pair * grid > p0_scaled * n_in
    if (uint128_t(count) * kGrid > uint128_t(p0_scaled) * in) kept.push_back(pair);
  }
  return CrispEnvelope(log.nodes.size(), kept);
}

FuzzyKernel kernel_from_log(const AggregatedLog& log) {
  KernelBuilder b(log.nodes.size());
  for (const auto& [pair, count] : log.n_pair) {
    const auto in = log.inputs(pair.first);
    if (in <= 1) continue;
    b.add(pair.first, pair.second, static_cast<double>(count) / static_cast<double>(in));
  }
  return std::move(b).build();
}

// ---------------------------------------------------------------------------

namespace {

struct NormalizedDecision {
  std::string label;
  bool legal = false;
};

NormalizedDecision normalize_decision(std::string_view state, std::string_view decision,
                                      const GridSpec* grid) {
  const auto from = parse_cell(state);
  std::optional<Cell> to;
  if (const auto move = parse_move(decision)) {
    if (from) to = apply(*from, *move);
  } else {
    to = parse_cell(decision);
  }
  if (!to) return {std::string(trim_label(decision)), false};
  bool legal = from.has_value() && manhattan(*from, *to) == 1;
  if (grid) {
    legal = legal && grid->contains(*from) && grid->contains(*to);
  } else {
    legal = legal && to->x >= 0 && to->y >= 0;
  }
  return {cell_label(*to), legal};
}

}  // namespace

TranscriptKernel kernel_from_transcripts(const std::vector<TranscriptRecord>& records,
                                         std::uint32_t m, const GridSpec* grid) {
  if (m == 0) throw InputError("samples per group m must be positive");
  TranscriptKernel out;
  if (grid) {
    grid->validate();
    out.nodes = grid_nodes(*grid);
  }
  if (m % 2 == 0) {
    out.warnings.push_back(fmt::format(
        "m = {} is even; a strict majority needs at least {} matching samples", m, m / 2 + 1));
  }

  struct Sample {
    std::uint32_t index;
    NodeId decision;
  };
  std::map<std::pair<std::string, NodeId>, std::vector<Sample>> groups;
  std::set<std::string> models;
  std::optional<std::string> target;

  for (const auto& r : records) {
    const std::string model(trim_label(r.model));
    if (model.empty()) throw InputError("transcript record with empty model id");
    const std::string t(trim_label(r.target));
    if (!target) {
      target = t;
    } else if (*target != t) {
      throw StructuralError(fmt::format("transcript mixes targets '{}' and '{}'", *target, t));
    }
    const auto state = out.nodes.intern(r.state);
    const auto norm = normalize_decision(r.state, r.decision, grid);
    const auto decision = out.nodes.intern(norm.label);
    if (!norm.legal) {
      out.violations.push_back({model, out.nodes.label(state), r.sample_index,
                                std::string(trim_label(r.decision))});
    }
    models.insert(model);
    groups[{model, state}].push_back({r.sample_index, decision});
  }

  out.model_count = models.size();
  std::map<NodePair, std::uint32_t> votes;
  for (auto& [key, samples] : groups) {
    const auto& [model, state] = key;
    if (samples.size() != m) {
      throw StructuralError(fmt::format("group (model '{}', state '{}') has {} samples, expected {}",
                                        model, out.nodes.label(state), samples.size(), m));
    }
    std::vector<bool> seen(m, false);
    for (const auto& s : samples) {
      if (s.index >= m || seen[s.index]) {
        throw StructuralError(fmt::format(
            "group (model '{}', state '{}') has invalid or repeated sample index {}", model,
            out.nodes.label(state), s.index));
      }
      seen[s.index] = true;
    }
    std::map<NodeId, std::uint32_t> counts;
    for (const auto& s : samples) counts[s.decision]++;
    const auto mode = std::max_element(counts.begin(), counts.end(),
                                       [](const auto& a, const auto& b) { return a.second < b.second; });
    if (2 * mode->second > m) votes[{state, mode->first}]++;
  }

  KernelBuilder b(out.nodes.size());
  const auto n = static_cast<double>(out.model_count);
  for (const auto& [pair, count] : votes) b.add(pair.first, pair.second, count / n);
  out.kernel = std::move(b).build();
  return out;
}

TranscriptReadResult read_transcripts(std::istream& in) {
  TranscriptReadResult result;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (blank(line)) continue;
    try {
      const auto obj = json::parse(line);
      if (!obj.is_object()) throw SchemaError("record is not a JSON object");
      TranscriptRecord r;
      r.model = require_string(obj, "model");
      r.state = require_string(obj, "state");
      r.target = require_string(obj, "target");
      r.decision = require_string(obj, "decision");
      const auto it = obj.find("sample");
      if (it == obj.end() || !it->is_number_integer() || it->get<std::int64_t>() < 0) {
        throw SchemaError("field \"sample\" must be a non-negative integer");
      }
      r.sample_index = it->get<std::uint32_t>();
      result.records.push_back(std::move(r));
    } catch (const json::exception& e) {
      result.errors.push_back({lineno, fmt::format("invalid JSON: {}", e.what())});
    } catch (const Error& e) {
      result.errors.push_back({lineno, e.what()});
    }
  }
  return result;
}

void write_transcripts(std::ostream& out, const std::vector<TranscriptRecord>& records) {
  for (const auto& r : records) {
    json obj = {{"model", r.model},
                {"state", r.state},
                {"target", r.target},
                {"sample", r.sample_index},
                {"decision", r.decision}};
    out << obj.dump() << '\n';
  }
}

}  // namespace searchspace
