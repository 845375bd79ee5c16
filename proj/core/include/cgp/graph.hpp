#pragma once

#include <Eigen/Dense>

#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

namespace cgp {

using NodeId = std::uint32_t;
using Edge = std::pair<NodeId, NodeId>;

/// Node feature matrix: one row per node, one column per channel.
using FeatureMatrix = Eigen::MatrixXd;

/// Raised for malformed user-supplied data (edge lists, CSV, manifests).
class InputError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Simple undirected graph with an optional set of flagged self-loops.
///
/// Ordinary edges are stored once as (u, v) with u < v, in the order given.
/// Self-loops never appear among ordinary edges; they live in a separate
/// sorted set so diagnostics can ignore them. Immutable once constructed.
class UGraph {
 public:
  UGraph() = default;
  explicit UGraph(std::size_t node_count);
  /// Throws std::invalid_argument on out-of-range ids, u == v, or duplicates.
  UGraph(std::size_t node_count, std::vector<Edge> edges, std::vector<NodeId> self_loops = {});

  std::size_t node_count() const { return adjacency_.size(); }
  std::size_t edge_count() const { return edges_.size(); }
  const std::vector<Edge>& edges() const { return edges_; }
  /// Sorted ascending; excludes self-loops.
  std::span<const NodeId> neighbors(NodeId u) const { return adjacency_[u]; }
  std::size_t degree(NodeId u) const { return adjacency_[u].size(); }
  const std::vector<NodeId>& self_loops() const { return self_loops_; }
  bool has_self_loop(NodeId u) const;
  bool has_edge(NodeId u, NodeId v) const;

  /// Same edges in canonical (sorted) order.
  UGraph canonical() const;
  /// Graph with node u renamed to perm[u].
  UGraph relabeled(std::span<const NodeId> perm) const;

  friend bool operator==(const UGraph& x, const UGraph& y);

 private:
  std::vector<Edge> edges_;
  std::vector<std::vector<NodeId>> adjacency_;
  std::vector<NodeId> self_loops_;
};

/// Complete graph on n nodes (every pair adjacent, no self-loops).
UGraph complete_graph(std::size_t n);

/// Number of connected components; self-loops are ignored.
std::size_t connected_components(const UGraph& g);

// ---------------------------------------------------------------------------
// Edge-list text format
//
//   [N]          optional first line: node count (else max id + 1)
//   u v          one undirected edge per line, 0-based ids, u != v
//   loop u       flagged self-loop on node u
//
// Blank lines and lines starting with '#' are ignored.

UGraph parse_edge_list(std::string_view text);
std::string emit_edge_list(const UGraph& g);
UGraph read_edge_list_file(const std::string& path);

// ---------------------------------------------------------------------------
// Random and structured generators

enum class GraphKind { ErdosRenyi, Star, BarabasiAlbert, Empty };

struct GraphParams {
  std::size_t node_count = 20;
  double edge_probability = 0.5;  // ErdosRenyi
  std::size_t attachments = 2;    // BarabasiAlbert
};

/// Seed-deterministic graph generator.
///
/// ErdosRenyi samples each pair independently with probability p (geometric
/// skipping, so sparse graphs cost O(n + |E|)). Star joins node 0 to every
/// other node. BarabasiAlbert seeds a clique on `attachments` nodes and joins
/// each new node to that many distinct existing nodes, sampled proportionally
/// to degree without replacement.
UGraph gen_graph(GraphKind kind, const GraphParams& params, std::uint64_t seed);

GraphKind parse_graph_kind(std::string_view name);
std::string_view to_string(GraphKind kind);

// ---------------------------------------------------------------------------
// d-patterns

/// Interns recursive neighbourhood descriptors so ids are comparable across
/// every graph refined through the same table.
class DPatternTable {
 public:
  /// One refinement step: maps per-node ids at depth `depth - 1` to ids at `depth`.
  std::vector<int> refine(const UGraph& g, std::span<const int> previous, int depth);

  std::size_t size(int depth) const;

 private:
  struct Key {
    int own;
    std::vector<int> children;  // sorted multiset
    friend bool operator==(const Key&, const Key&) = default;
  };
  struct KeyHash {
    std::size_t operator()(const Key& k) const noexcept;
  };
  std::vector<std::unordered_map<Key, int, KeyHash>> levels_;
};

/// Pattern ids at depth d. Depth 0 returns the labels verbatim. A flagged
/// self-loop counts the node once among its own neighbours.
std::vector<int> d_patterns(const UGraph& g, std::span<const int> labels, int depth,
                            DPatternTable& table);
std::vector<int> d_patterns(const UGraph& g, std::span<const int> labels, int depth);

// ---------------------------------------------------------------------------
// Feature CSV (one row per node, comma separated, no header)

FeatureMatrix parse_feature_csv(std::string_view text);
std::string emit_feature_csv(const FeatureMatrix& x);

}  // namespace cgp
