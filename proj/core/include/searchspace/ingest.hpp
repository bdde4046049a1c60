#pragma once

#include <cstdint>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "searchspace/relation.hpp"

namespace searchspace {

/// Raw transition statistics before binarization.
struct AggregatedLog {
  NodeTable nodes;
  std::vector<std::uint64_t> n_in;                 // indexed by NodeId
  std::map<NodePair, std::uint64_t> n_pair;        // ordered for deterministic output
  std::uint64_t total_pairs = 0;

  std::uint64_t inputs(NodeId f) const { return f.index() < n_in.size() ? n_in[f.index()] : 0; }
  std::uint64_t pair_count(NodeId f, NodeId g) const;
  /// r(f,g) = n_pair(f,g) / n_in(f); 0 when f never appears as an input.
  double relative_frequency(NodeId f, NodeId g) const;
};

/// Sequential fold of weighted transition pairs into an AggregatedLog.
class LogAggregator {
 public:
  void add(std::string_view from, std::string_view to, std::uint64_t weight = 1);
  const AggregatedLog& log() const { return log_; }
  AggregatedLog take() && { return std::move(log_); }

 private:
  AggregatedLog log_;
};

struct LineError {
  std::size_t line = 0;  // 1-based
  std::string message;
};

struct LogIngestResult {
  AggregatedLog log;
  std::vector<LineError> errors;
  std::size_t records = 0;
};

/// Reads a transition log, one JSON object per line:
/// {"from": label, "to": label, "weight": int (optional, default 1), "run": id (optional)}.
/// Malformed lines are recorded and skipped; blank lines are ignored.
LogIngestResult aggregate_log(std::istream& in);

/// Convenience overload for in-memory pairs of unit weight.
AggregatedLog aggregate_pairs(const std::vector<std::pair<std::string, std::string>>& pairs);

/// Frequency-threshold envelope: (f,g) kept iff n_in(f) >= 2 and r(f,g) > p0.
/// The comparison is exact on a 1e-9 grid for p0. Throws InputError unless
/// 0 <= p0 < 1.
CrispEnvelope binarize_threshold(const AggregatedLog& log, double p0);

/// mu(f,g) = r(f,g) on rows with n_in(f) >= 2; other rows are empty.
FuzzyKernel kernel_from_log(const AggregatedLog& log);

// --- transcripts -----------------------------------------------------------

struct TranscriptRecord {
  std::string model;
  std::string state;
  std::string target;
  std::uint32_t sample_index = 0;
  std::string decision;
};

struct GridSpec;

struct MoveViolation {
  std::string model;
  std::string state;
  std::uint32_t sample_index = 0;
  std::string decision;
};

struct TranscriptKernel {
  NodeTable nodes;
  FuzzyKernel kernel;
  std::size_t model_count = 0;
  std::vector<MoveViolation> violations;  // decisions that are not legal unit steps
  std::vector<std::string> warnings;
};

/// Majority-vote aggregation of externally recorded samples. Every
/// (model, state) group must hold exactly m samples with distinct indices in
/// [0, m); otherwise StructuralError names the group. A model contributes an
/// edge state -> mode when the mode's count exceeds m/2, and the kernel weight
/// is the fraction of models voting for that edge.
///
/// Decisions may be direction words (up/down/left/right) or coordinate labels.
/// When `grid` is given, its cells are interned first (ids x*N + y) and
/// legality is checked against the board; without it only unit adjacency is
/// checked.
TranscriptKernel kernel_from_transcripts(const std::vector<TranscriptRecord>& records,
                                         std::uint32_t m, const GridSpec* grid = nullptr);

struct TranscriptReadResult {
  std::vector<TranscriptRecord> records;
  std::vector<LineError> errors;
};

/// Reads transcript JSONL:
/// {"model": id, "state": label, "target": label, "sample": int, "decision": label}.
TranscriptReadResult read_transcripts(std::istream& in);
void write_transcripts(std::ostream& out, const std::vector<TranscriptRecord>& records);

}  // namespace searchspace
