#include "searchspace/io.hpp"

#include <cmath>
#include <istream>
#include <iterator>
#include <ostream>

#include <fmt/format.h>
#include <json.hpp>

#include "searchspace/error.hpp"

namespace searchspace {

using nlohmann::json;

void FileHeader::write(std::ostream& out, std::string_view prefix) const {
  for (const auto& line : lines) out << prefix << ' ' << line << '\n';
}

std::string format_number(double value) {
  if (std::isinf(value)) return value > 0 ? "inf" : "-inf";
  if (std::isnan(value)) return "nan";
  return fmt::format("{}", value);
}

namespace {

struct RawDocument {
  NodeTable nodes;
  std::vector<EdgeTriplet> edges;
};

RawDocument parse_document(std::string_view text) {
  json doc;
  try {
    doc = json::parse(text.begin(), text.end(), nullptr, true, /*ignore_comments=*/true);
  } catch (const json::exception& e) {
    throw SchemaError(fmt::format("kernel file is not valid JSON: {}", e.what()));
  }
  if (!doc.is_object()) throw SchemaError("kernel file must be a JSON object");
  const auto nodes = doc.find("nodes");
  const auto edges = doc.find("edges");
  if (nodes == doc.end() || !nodes->is_array()) throw SchemaError("\"nodes\" must be an array");
  if (edges == doc.end() || !edges->is_array()) throw SchemaError("\"edges\" must be an array");

  RawDocument raw;
  for (std::size_t i = 0; i < nodes->size(); ++i) {
    const auto& label = (*nodes)[i];
    if (!label.is_string()) throw SchemaError(fmt::format("nodes[{}] is not a string", i));
    try {
      const auto id = raw.nodes.intern(label.get<std::string>());
      if (id.index() != i) {
        throw SchemaError(fmt::format("nodes[{}] duplicates label '{}'", i, label.get<std::string>()));
      }
    } catch (const InputError& e) {
      throw SchemaError(fmt::format("nodes[{}]: {}", i, e.what()));
    }
  }
  const auto n = raw.nodes.size();
  for (std::size_t i = 0; i < edges->size(); ++i) {
    const auto& e = (*edges)[i];
    if (!e.is_array() || e.size() != 3 || !e[0].is_number_unsigned() || !e[1].is_number_unsigned() ||
        !e[2].is_number()) {
      throw SchemaError(fmt::format("edges[{}] must be [from_id, to_id, mu]", i));
    }
    const auto from = e[0].get<std::uint64_t>();
    const auto to = e[1].get<std::uint64_t>();
    const auto mu = e[2].get<double>();
    if (from >= n || to >= n) throw SchemaError(fmt::format("edges[{}] references an unknown node", i));
    if (!(mu > 0.0 && mu <= 1.0)) throw SchemaError(fmt::format("edges[{}] has mu {} outside (0,1]", i, mu));
    raw.edges.push_back({NodeId{static_cast<std::uint32_t>(from)}, NodeId{static_cast<std::uint32_t>(to)}, mu});
  }
  return raw;
}

std::string slurp(std::istream& in) {
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

void write_nodes(std::ostream& out, const NodeTable& nodes) {
  out << "  \"nodes\": [";
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    out << (i == 0 ? "\n    " : ",\n    ") << json(nodes.labels()[i]).dump();
  }
  out << (nodes.size() == 0 ? "],\n" : "\n  ],\n");
}

template <typename Rows>
void write_edges(std::ostream& out, const Rows& rows) {
  out << "  \"edges\": [";
  bool first = true;
  for (const auto& [f, g, mu] : rows) {
    out << (first ? "\n    " : ",\n    ") << '[' << f.value << ", " << g.value << ", "
        << format_number(mu) << ']';
    first = false;
  }
  out << (first ? "]\n" : "\n  ]\n");
}

}  // namespace

KernelDocument parse_kernel_json(std::string_view text) {
  auto raw = parse_document(text);
  KernelBuilder b(raw.nodes.size());
  try {
    for (const auto& e : raw.edges) b.add(e.from, e.to, e.mu);
  } catch (const Error& e) {
    throw SchemaError(e.what());
  }
  return {std::move(raw.nodes), std::move(b).build()};
}

KernelDocument read_kernel_json(std::istream& in) { return parse_kernel_json(slurp(in)); }

EnvelopeDocument read_envelope_json(std::istream& in) {
  auto raw = parse_document(slurp(in));
  std::vector<NodePair> pairs;
  for (const auto& e : raw.edges) {
    if (e.mu != 1.0) {
      throw SchemaError(fmt::format("envelope edge ({},{}) has mu {} instead of 1", e.from.value,
                                    e.to.value, e.mu));
    }
    pairs.emplace_back(e.from, e.to);
  }
  const auto n = raw.nodes.size();
  return {std::move(raw.nodes), CrispEnvelope(n, pairs)};
}

void write_kernel_json(std::ostream& out, const NodeTable& nodes, const FuzzyKernel& kernel,
                       const FileHeader& header) {
  if (nodes.size() != kernel.node_count()) {
    throw StructuralError("node table and kernel disagree on node count");
  }
  header.write(out, "//");
  out << "{\n";
  write_nodes(out, nodes);
  std::vector<std::tuple<NodeId, NodeId, double>> rows;
  for (const auto& e : kernel.edges()) rows.emplace_back(e.from, e.to, e.mu);
  write_edges(out, rows);
  out << "}\n";
}

void write_envelope_json(std::ostream& out, const NodeTable& nodes, const CrispEnvelope& envelope,
                         const FileHeader& header) {
  if (nodes.size() != envelope.node_count()) {
    throw StructuralError("node table and envelope disagree on node count");
  }
  header.write(out, "//");
  out << "{\n";
  write_nodes(out, nodes);
  std::vector<std::tuple<NodeId, NodeId, double>> rows;
  for (const auto& [f, g] : envelope.edges()) rows.emplace_back(f, g, 1.0);
  write_edges(out, rows);
  out << "}\n";
}

}  // namespace searchspace
