#include "cgp/cayley.hpp"

#include "cgp/io.hpp"

#include <algorithm>
#include <cstdlib>
#include <mutex>
#include <stdexcept>
#include <unordered_map>

namespace cgp {

CayleyGraph build_cayley(std::uint32_t n, std::uint64_t max_vertices) {
  if (n < 2) throw std::invalid_argument("build_cayley: modulus must be at least 2");
  const std::uint64_t order = sl2_order(n);
  if (order > max_vertices) {
    throw std::length_error("build_cayley: Cay(SL(2,Z_" + std::to_string(n) + ")) needs " +
                            std::to_string(order) + " vertices, budget is " +
                            std::to_string(max_vertices));
  }
  const auto gens = generators(n);

  CayleyGraph cg;
  cg.modulus = n;
  cg.degree = gens.size();
  cg.vertices.reserve(order);
  std::unordered_map<std::uint64_t, NodeId> index;
  index.reserve(order);

  const Mat2Z id = Mat2Z::identity(n);
  cg.vertices.push_back(id);
  index.emplace(id.key(), 0);

  std::vector<Edge> edges;
  edges.reserve(order * gens.size() / 2);
  for (std::size_t head = 0; head < cg.vertices.size(); ++head) {
    const auto u = static_cast<NodeId>(head);
    for (const auto& s : gens) {
      const Mat2Z next = mat_mul(cg.vertices[head], s);
      const auto [it, inserted] = index.try_emplace(next.key(), static_cast<NodeId>(cg.vertices.size()));
      if (inserted) cg.vertices.push_back(next);
      const NodeId v = it->second;
      // Each undirected edge is seen from both endpoints; keep it at the lower id.
      // Inverse-closure of S_n guarantees the other direction is generated too.
      if (u < v) edges.emplace_back(u, v);
    }
  }
  if (cg.vertices.size() != order) {
    throw std::logic_error("build_cayley: BFS reached " + std::to_string(cg.vertices.size()) +
                           " of " + std::to_string(order) + " elements");
  }
  std::sort(edges.begin(), edges.end());
  edges.erase(std::unique(edges.begin(), edges.end()), edges.end());
  cg.graph = UGraph(order, std::move(edges));
  return cg;
}

std::uint32_t smallest_modulus(std::uint64_t v) {
  if (v == 0) throw std::invalid_argument("smallest_modulus: v must be positive");
  std::uint32_t n = 2;
  while (sl2_order(n) < v) ++n;
  return n;
}

UGraph truncate_bfs(const CayleyGraph& cg, std::size_t v) {
  const std::size_t total = cg.graph.node_count();
  if (v < 1 || v > total) {
    throw std::out_of_range("truncate_bfs: v=" + std::to_string(v) + " outside [1, " +
                            std::to_string(total) + "]");
  }
  std::vector<Edge> kept;
  for (const auto& [a, b] : cg.graph.edges()) {
    if (a < v && b < v) kept.emplace_back(a, b);
  }
  return UGraph(v, std::move(kept));
}

std::string cayley_cache_filename(std::uint32_t n) {
  return "cayley_n" + std::to_string(n) + "_v" + std::to_string(sl2_order(n)) + ".edgelist";
}

CayleyCache::CayleyCache(std::optional<std::filesystem::path> directory, std::uint64_t max_vertices)
    : directory_(std::move(directory)), max_vertices_(max_vertices) {}

std::shared_ptr<const UGraph> CayleyCache::graph(std::uint32_t n) {
  {
    std::shared_lock lock(mutex_);
    if (auto it = graphs_.find(n); it != graphs_.end()) return it->second;
  }
  std::unique_lock lock(mutex_);
  if (auto it = graphs_.find(n); it != graphs_.end()) return it->second;

  std::shared_ptr<const UGraph> g;
  if (directory_) {
    const auto path = *directory_ / cayley_cache_filename(n);
    if (std::filesystem::exists(path)) {
      auto loaded = read_edge_list_file(path.string());
      if (loaded.node_count() == sl2_order(n)) g = std::make_shared<const UGraph>(std::move(loaded));
    }
  }
  if (!g) {
    if (sl2_order(n) > max_vertices_) {
      throw std::length_error("CayleyCache: modulus " + std::to_string(n) + " needs " +
                              std::to_string(sl2_order(n)) + " vertices, budget is " +
                              std::to_string(max_vertices_));
    }
    g = std::make_shared<const UGraph>(build_cayley(n, max_vertices_).graph);
    ++builds_;
    if (directory_) {
      std::filesystem::create_directories(*directory_);
      write_file_atomic(*directory_ / cayley_cache_filename(n), emit_edge_list(*g));
    }
  }
  graphs_.emplace(n, g);
  return g;
}

std::size_t CayleyCache::builds() const {
  std::shared_lock lock(mutex_);
  return builds_;
}

void CayleyCache::clear_memory() {
  std::unique_lock lock(mutex_);
  graphs_.clear();
}

CayleyCache& CayleyCache::global() {
  static CayleyCache instance = [] {
    const char* dir = std::getenv("CGP_CACHE_DIR");
    return CayleyCache(dir && *dir ? std::optional<std::filesystem::path>(dir) : std::nullopt);
  }();
  return instance;
}

}  // namespace cgp
