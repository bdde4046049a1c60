#pragma once

#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

#include "searchspace/relation.hpp"

namespace searchspace {

/// Comment lines written at the top of every output file.
struct FileHeader {
  std::vector<std::string> lines;

  /// Writes each line as `<prefix> line`. No-op when empty.
  void write(std::ostream& out, std::string_view prefix) const;
};

struct KernelDocument {
  NodeTable nodes;
  FuzzyKernel kernel;
};

struct EnvelopeDocument {
  NodeTable nodes;
  CrispEnvelope envelope;
};

/// Kernel files: {"nodes": [labels in id order], "edges": [[from, to, mu], ...]}.
/// `//` and `/* */` comments are accepted. Violations throw SchemaError.
KernelDocument read_kernel_json(std::istream& in);
KernelDocument parse_kernel_json(std::string_view text);
/// Same schema with every mu equal to 1.
EnvelopeDocument read_envelope_json(std::istream& in);

void write_kernel_json(std::ostream& out, const NodeTable& nodes, const FuzzyKernel& kernel,
                       const FileHeader& header = {});
void write_envelope_json(std::ostream& out, const NodeTable& nodes, const CrispEnvelope& envelope,
                         const FileHeader& header = {});

/// Shortest round-trip decimal rendering used by every writer.
std::string format_number(double value);

}  // namespace searchspace
