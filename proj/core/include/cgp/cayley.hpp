#pragma once

#include "cgp/graph.hpp"
#include "cgp/modgroup.hpp"

#include <filesystem>
#include <map>
#include <memory>
#include <optional>
#include <shared_mutex>

namespace cgp {

/// Cay(SL(2, Z_n); S_n) with vertices in breadth-first discovery order.
struct CayleyGraph {
  std::uint32_t modulus = 0;
  std::vector<Mat2Z> vertices;  // vertices[0] is the identity
  UGraph graph;
  std::size_t degree = 0;  // 4, or 2 when n == 2
};

/// Default ceiling on |V| for build_cayley.
inline constexpr std::uint64_t kDefaultCayleyBudget = std::uint64_t{1} << 24;

/// BFS from the identity, expanding each element g to g*s for s in generators(n)
/// in their listed order. Throws std::length_error naming the required |V| if
/// sl2_order(n) exceeds `max_vertices`.
CayleyGraph build_cayley(std::uint32_t n, std::uint64_t max_vertices = kDefaultCayleyBudget);

/// Least n >= 2 with sl2_order(n) >= v.
std::uint32_t smallest_modulus(std::uint64_t v);

/// Induced subgraph on BFS vertices 0..v-1.
UGraph truncate_bfs(const CayleyGraph& cg, std::size_t v);

/// Cache file name for modulus n: "cayley_n<n>_v<|V|>.edgelist".
std::string cayley_cache_filename(std::uint32_t n);

/// Thread-safe cache of Cayley adjacency graphs keyed by modulus.
///
/// Lookups hit memory first, then `directory` (when set) in the edge-list
/// format, and finally build and persist. Returned graphs are immutable and
/// safe to share.
class CayleyCache {
 public:
  explicit CayleyCache(std::optional<std::filesystem::path> directory = std::nullopt,
                       std::uint64_t max_vertices = kDefaultCayleyBudget);

  std::shared_ptr<const UGraph> graph(std::uint32_t n);

  const std::optional<std::filesystem::path>& directory() const { return directory_; }
  std::size_t builds() const;  // number of cold constructions so far
  void clear_memory();

  /// Process-wide instance; directory taken from $CGP_CACHE_DIR when set.
  static CayleyCache& global();

 private:
  std::optional<std::filesystem::path> directory_;
  std::uint64_t max_vertices_;
  mutable std::shared_mutex mutex_;
  std::map<std::uint32_t, std::shared_ptr<const UGraph>> graphs_;
  std::size_t builds_ = 0;
};

}  // namespace cgp
