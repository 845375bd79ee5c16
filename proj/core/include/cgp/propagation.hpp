#pragma once

#include "cgp/cayley.hpp"
#include "cgp/graph.hpp"

#include <nlohmann/json.hpp>

#include <filesystem>
#include <memory>
#include <optional>
#include <string_view>
#include <vector>

namespace cgp {

enum class Scheme {
  Base,        // input graph in every layer
  MasterNode,  // one extra node joined to every input node, every layer
  FALast,      // input graph, final layer fully adjacent
  EGP,         // alternate input graph / BFS-truncated Cayley graph
  CGP,         // alternate extended input graph / complete Cayley graph
  CGPLast,     // extended input graph, complete Cayley graph in the final layer only
  CGPEvery,    // complete Cayley graph in every layer
};

Scheme parse_scheme(std::string_view name);
std::string_view to_string(Scheme scheme);

enum class LayerGraph { InputExtended, Cayley, FullyAdjacent };

struct VirtualInit {
  enum class Kind { Zeros, Gaussian } kind = Kind::Zeros;
  std::uint64_t seed = 0;  // Gaussian only
};

/// The per-layer graph schedule for one input graph under one scheme.
///
/// All template graphs have `extended_count` nodes. Rows 0..original_count-1
/// are the input nodes; the remainder are virtual (or the master node).
struct PropagationPlan {
  Scheme scheme = Scheme::Base;
  std::size_t original_count = 0;
  std::size_t extended_count = 0;
  std::optional<std::uint32_t> modulus;  // Cayley schemes only
  std::vector<LayerGraph> schedule;
  std::shared_ptr<const UGraph> input_extended;
  std::shared_ptr<const UGraph> cayley;          // null unless scheduled
  std::shared_ptr<const UGraph> fully_adjacent;  // null unless scheduled
  VirtualInit virtual_init;

  std::size_t num_layers() const { return schedule.size(); }
  std::size_t virtual_count() const { return extended_count - original_count; }
  const UGraph& layer_graph(std::size_t layer) const;
};

/// Pads X to m rows. Rows beyond X.rows() are zeros or i.i.d. N(0, 1) draws.
FeatureMatrix extend_features(const FeatureMatrix& x, std::size_t m, const VirtualInit& init = {});

/// Keeps g's edges on nodes 0..|V|-1 and gives each node |V|..m-1 one flagged
/// self-loop and nothing else.
UGraph extend_input_adjacency(const UGraph& g, std::size_t m);

/// Builds the template graphs and layer schedule. CGP alternates starting on
/// the extended input graph, so odd layer counts end on it.
PropagationPlan build_plan(const UGraph& g, Scheme scheme, std::size_t num_layers,
                           CayleyCache& cache = CayleyCache::global(), VirtualInit init = {});

/// Writes input_extended.edgelist (+ cayley.edgelist, features.csv when
/// available) into `dir` and returns the manifest, also saved as template.json:
/// {scheme, n, num_nodes, extended_count, files, virtual_node_range}.
nlohmann::json export_template(const PropagationPlan& plan, const std::filesystem::path& dir,
                               const FeatureMatrix* features = nullptr);

}  // namespace cgp
