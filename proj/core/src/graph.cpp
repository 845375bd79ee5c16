#include "cgp/graph.hpp"

#include "cgp/random.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <queue>
#include <sstream>
#include <unordered_set>

namespace cgp {

// ---------------------------------------------------------------------------
// UGraph

UGraph::UGraph(std::size_t node_count) : adjacency_(node_count) {}

UGraph::UGraph(std::size_t node_count, std::vector<Edge> edges, std::vector<NodeId> self_loops)
    : edges_(std::move(edges)), adjacency_(node_count), self_loops_(std::move(self_loops)) {
  for (auto& [u, v] : edges_) {
    if (u >= node_count || v >= node_count) {
      throw std::invalid_argument("UGraph: edge (" + std::to_string(u) + "," + std::to_string(v) +
                                  ") out of range for " + std::to_string(node_count) + " nodes");
    }
    if (u == v) {
      throw std::invalid_argument("UGraph: ordinary self-edge on node " + std::to_string(u));
    }
    if (u > v) std::swap(u, v);
    adjacency_[u].push_back(v);
    adjacency_[v].push_back(u);
  }
  for (NodeId u = 0; u < node_count; ++u) {
    auto& adj = adjacency_[u];
    std::sort(adj.begin(), adj.end());
    if (std::adjacent_find(adj.begin(), adj.end()) != adj.end()) {
      throw std::invalid_argument("UGraph: duplicate edge at node " + std::to_string(u));
    }
  }
  std::sort(self_loops_.begin(), self_loops_.end());
  self_loops_.erase(std::unique(self_loops_.begin(), self_loops_.end()), self_loops_.end());
  if (!self_loops_.empty() && self_loops_.back() >= node_count) {
    throw std::invalid_argument("UGraph: self-loop node out of range");
  }
}

bool UGraph::has_self_loop(NodeId u) const {
  return std::binary_search(self_loops_.begin(), self_loops_.end(), u);
}

bool UGraph::has_edge(NodeId u, NodeId v) const {
  if (u >= node_count() || v >= node_count()) return false;
  const auto& adj = adjacency_[u];
  return std::binary_search(adj.begin(), adj.end(), v);
}

UGraph UGraph::canonical() const {
  std::vector<Edge> sorted = edges_;
  std::sort(sorted.begin(), sorted.end());
  return UGraph(node_count(), std::move(sorted), self_loops_);
}

UGraph UGraph::relabeled(std::span<const NodeId> perm) const {
  if (perm.size() != node_count()) {
    throw std::invalid_argument("UGraph::relabeled: permutation size mismatch");
  }
  std::vector<Edge> mapped;
  mapped.reserve(edges_.size());
  for (const auto& [u, v] : edges_) mapped.emplace_back(perm[u], perm[v]);
  std::vector<NodeId> loops;
  for (NodeId u : self_loops_) loops.push_back(perm[u]);
  return UGraph(node_count(), std::move(mapped), std::move(loops));
}

bool operator==(const UGraph& x, const UGraph& y) {
  if (x.node_count() != y.node_count() || x.edge_count() != y.edge_count() ||
      x.self_loops_ != y.self_loops_) {
    return false;
  }
  return x.adjacency_ == y.adjacency_;
}

UGraph complete_graph(std::size_t n) {
  std::vector<Edge> edges;
  edges.reserve(n * (n > 0 ? n - 1 : 0) / 2);
  for (NodeId u = 0; u < n; ++u)
    for (NodeId v = u + 1; v < n; ++v) edges.emplace_back(u, v);
  return UGraph(n, std::move(edges));
}

std::size_t connected_components(const UGraph& g) {
  std::vector<bool> seen(g.node_count(), false);
  std::size_t components = 0;
  std::vector<NodeId> stack;
  for (NodeId s = 0; s < g.node_count(); ++s) {
    if (seen[s]) continue;
    ++components;
    seen[s] = true;
    stack.push_back(s);
    while (!stack.empty()) {
      const NodeId u = stack.back();
      stack.pop_back();
      for (NodeId v : g.neighbors(u)) {
        if (!seen[v]) {
          seen[v] = true;
          stack.push_back(v);
        }
      }
    }
  }
  return components;
}

// ---------------------------------------------------------------------------
// Edge-list format

namespace {

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

std::vector<std::string_view> split_ws(std::string_view s) {
  std::vector<std::string_view> out;
  std::size_t i = 0;
  while (i < s.size()) {
    while (i < s.size() && (s[i] == ' ' || s[i] == '\t')) ++i;
    if (i >= s.size()) break;
    std::size_t j = i;
    while (j < s.size() && s[j] != ' ' && s[j] != '\t') ++j;
    out.push_back(s.substr(i, j - i));
    i = j;
  }
  return out;
}

std::optional<std::uint64_t> parse_uint(std::string_view s) {
  std::uint64_t value = 0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
  if (ec != std::errc{} || ptr != s.data() + s.size()) return std::nullopt;
  return value;
}

[[noreturn]] void fail_line(std::size_t line, const std::string& what) {
  throw InputError("edge list line " + std::to_string(line) + ": " + what);
}

}  // namespace

UGraph parse_edge_list(std::string_view text) {
  std::optional<std::uint64_t> declared;
  std::vector<Edge> edges;
  std::vector<NodeId> loops;
  std::unordered_set<std::uint64_t> seen;
  std::vector<std::size_t> edge_lines;
  std::uint64_t max_id = 0;
  bool any_id = false;
  bool first_data_line = true;

  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const auto end = std::min(text.find('\n', pos), text.size());
    const std::string_view line = trim(text.substr(pos, end - pos));
    pos = end + 1;
    ++line_no;
    if (line.empty() || line.front() == '#') continue;
    const auto tokens = split_ws(line);
    const bool was_first = std::exchange(first_data_line, false);

    if (tokens.size() == 1) {
      if (!was_first) fail_line(line_no, "expected 'u v', got '" + std::string(line) + "'");
      declared = parse_uint(tokens[0]);
      if (!declared) fail_line(line_no, "invalid node count '" + std::string(tokens[0]) + "'");
      continue;
    }
    if (tokens.size() != 2) fail_line(line_no, "expected 'u v', got '" + std::string(line) + "'");

    if (tokens[0] == "loop") {
      const auto u = parse_uint(tokens[1]);
      if (!u) fail_line(line_no, "invalid node id '" + std::string(tokens[1]) + "'");
      if (declared && *u >= *declared) fail_line(line_no, "node id exceeds node count");
      if (std::find(loops.begin(), loops.end(), *u) != loops.end()) {
        fail_line(line_no, "duplicate self-loop on node " + std::to_string(*u));
      }
      loops.push_back(static_cast<NodeId>(*u));
      max_id = std::max(max_id, *u);
      any_id = true;
      continue;
    }

    const auto u = parse_uint(tokens[0]);
    const auto v = parse_uint(tokens[1]);
    if (!u || !v) fail_line(line_no, "invalid node id in '" + std::string(line) + "'");
    if (*u == *v) fail_line(line_no, "self-loop " + std::string(line) + " is not an ordinary edge");
    if (declared && (*u >= *declared || *v >= *declared)) {
      fail_line(line_no, "node id exceeds node count " + std::to_string(*declared));
    }
    if (*u > 0xffffffffULL || *v > 0xffffffffULL) fail_line(line_no, "node id too large");
    const std::uint64_t lo = std::min(*u, *v);
    const std::uint64_t hi = std::max(*u, *v);
    if (!seen.insert((lo << 32) | hi).second) {
      fail_line(line_no, "duplicate edge " + std::to_string(lo) + " " + std::to_string(hi));
    }
    edges.emplace_back(static_cast<NodeId>(*u), static_cast<NodeId>(*v));
    max_id = std::max(max_id, hi);
    any_id = true;
  }
  const std::size_t n = declared ? *declared : (any_id ? max_id + 1 : 0);
  return UGraph(n, std::move(edges), std::move(loops));
}

std::string emit_edge_list(const UGraph& g) {
  std::vector<Edge> sorted = g.edges();
  std::sort(sorted.begin(), sorted.end());
  std::string out;
  out.reserve(16 * (sorted.size() + 1));
  out += std::to_string(g.node_count());
  out += '\n';
  for (const auto& [u, v] : sorted) {
    out += std::to_string(u);
    out += ' ';
    out += std::to_string(v);
    out += '\n';
  }
  for (NodeId u : g.self_loops()) {
    out += "loop ";
    out += std::to_string(u);
    out += '\n';
  }
  return out;
}

UGraph read_edge_list_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot open edge list '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  try {
    return parse_edge_list(buf.str());
  } catch (const InputError& e) {
    throw InputError(path + ": " + e.what());
  }
}

// ---------------------------------------------------------------------------
// Generators

GraphKind parse_graph_kind(std::string_view name) {
  if (name == "ER" || name == "GNP") return GraphKind::ErdosRenyi;
  if (name == "Star") return GraphKind::Star;
  if (name == "BA") return GraphKind::BarabasiAlbert;
  if (name == "Empty") return GraphKind::Empty;
  throw std::invalid_argument("unknown graph kind '" + std::string(name) + "'");
}

std::string_view to_string(GraphKind kind) {
  switch (kind) {
    case GraphKind::ErdosRenyi: return "ER";
    case GraphKind::Star: return "Star";
    case GraphKind::BarabasiAlbert: return "BA";
    case GraphKind::Empty: return "Empty";
  }
  return "?";
}

namespace {

UGraph gen_erdos_renyi(std::size_t n, double p, Rng& rng) {
  std::vector<Edge> edges;
  if (p <= 0.0 || n < 2) return UGraph(n);
  if (p >= 1.0) return complete_graph(n);
  // Batagelj & Brandes: skip over non-edges with geometric jumps.
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  const double log_q = std::log1p(-p);
  std::int64_t v = 1;
  std::int64_t w = -1;
  const auto nn = static_cast<std::int64_t>(n);
  while (v < nn) {
    const double r = unif(rng);
    w += 1 + static_cast<std::int64_t>(std::floor(std::log1p(-r) / log_q));
    while (w >= v && v < nn) {
      w -= v;
      ++v;
    }
    if (v < nn) edges.emplace_back(static_cast<NodeId>(w), static_cast<NodeId>(v));
  }
  return UGraph(n, std::move(edges));
}

UGraph gen_barabasi_albert(std::size_t n, std::size_t m, Rng& rng) {
  std::vector<Edge> edges;
  std::vector<std::size_t> degree(n, 0);
  for (NodeId u = 0; u < m; ++u)
    for (NodeId v = u + 1; v < m; ++v) {
      edges.emplace_back(u, v);
      ++degree[u];
      ++degree[v];
    }
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  std::vector<bool> chosen(n, false);
  std::vector<NodeId> targets;
  for (std::size_t t = m; t < n; ++t) {
    targets.clear();
    for (std::size_t k = 0; k < m; ++k) {
      std::size_t total = 0;
      std::size_t candidates = 0;
      for (std::size_t u = 0; u < t; ++u) {
        if (chosen[u]) continue;
        total += degree[u];
        ++candidates;
      }
      const bool uniform = total == 0;
      const double r = unif(rng) * static_cast<double>(uniform ? candidates : total);
      double acc = 0.0;
      std::size_t pick = t;
      for (std::size_t u = 0; u < t; ++u) {
        if (chosen[u]) continue;
        pick = u;
        acc += uniform ? 1.0 : static_cast<double>(degree[u]);
        if (r < acc) break;
      }
      chosen[pick] = true;
      targets.push_back(static_cast<NodeId>(pick));
    }
    for (NodeId u : targets) {
      chosen[u] = false;
      edges.emplace_back(u, static_cast<NodeId>(t));
      ++degree[u];
      ++degree[t];
    }
  }
  return UGraph(n, std::move(edges));
}

}  // namespace

UGraph gen_graph(GraphKind kind, const GraphParams& params, std::uint64_t seed) {
  const std::size_t n = params.node_count;
  if (n < 1) throw std::invalid_argument("gen_graph: node_count must be at least 1");
  Rng rng(seed);
  switch (kind) {
    case GraphKind::Empty:
      return UGraph(n);
    case GraphKind::Star: {
      std::vector<Edge> edges;
      for (NodeId v = 1; v < n; ++v) edges.emplace_back(0, v);
      return UGraph(n, std::move(edges));
    }
    case GraphKind::ErdosRenyi:
      if (!(params.edge_probability >= 0.0 && params.edge_probability <= 1.0)) {
        throw std::invalid_argument("gen_graph: ER probability must lie in [0, 1]");
      }
      return gen_erdos_renyi(n, params.edge_probability, rng);
    case GraphKind::BarabasiAlbert:
      if (params.attachments < 1 || params.attachments > n) {
        throw std::invalid_argument("gen_graph: BA attachments must lie in [1, node_count]");
      }
      return gen_barabasi_albert(n, params.attachments, rng);
  }
  throw std::invalid_argument("gen_graph: unsupported kind");
}

// ---------------------------------------------------------------------------
// d-patterns

std::size_t DPatternTable::KeyHash::operator()(const Key& k) const noexcept {
  std::size_t h = std::hash<int>{}(k.own);
  for (int c : k.children) h ^= std::hash<int>{}(c) + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
  return h;
}

std::vector<int> DPatternTable::refine(const UGraph& g, std::span<const int> previous, int depth) {
  if (depth < 1) throw std::invalid_argument("DPatternTable::refine: depth must be >= 1");
  if (previous.size() != g.node_count()) {
    throw std::invalid_argument("DPatternTable::refine: label count does not match graph");
  }
  if (levels_.size() < static_cast<std::size_t>(depth)) levels_.resize(depth);
  auto& level = levels_[depth - 1];
  std::vector<int> out(g.node_count());
  Key key;
  for (NodeId u = 0; u < g.node_count(); ++u) {
    key.own = previous[u];
    key.children.clear();
    for (NodeId v : g.neighbors(u)) key.children.push_back(previous[v]);
    if (g.has_self_loop(u)) key.children.push_back(previous[u]);
    std::sort(key.children.begin(), key.children.end());
    const auto [it, inserted] = level.try_emplace(key, static_cast<int>(level.size()));
    out[u] = it->second;
  }
  return out;
}

std::size_t DPatternTable::size(int depth) const {
  return depth >= 1 && static_cast<std::size_t>(depth) <= levels_.size() ? levels_[depth - 1].size()
                                                                          : 0;
}

std::vector<int> d_patterns(const UGraph& g, std::span<const int> labels, int depth,
                            DPatternTable& table) {
  if (depth < 0) throw std::invalid_argument("d_patterns: depth must be non-negative");
  if (labels.size() != g.node_count()) {
    throw std::invalid_argument("d_patterns: label count does not match graph");
  }
  std::vector<int> ids(labels.begin(), labels.end());
  for (int d = 1; d <= depth; ++d) ids = table.refine(g, ids, d);
  return ids;
}

std::vector<int> d_patterns(const UGraph& g, std::span<const int> labels, int depth) {
  DPatternTable table;
  return d_patterns(g, labels, depth, table);
}

// ---------------------------------------------------------------------------
// Feature CSV

FeatureMatrix parse_feature_csv(std::string_view text) {
  std::vector<std::vector<double>> rows;
  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const auto end = std::min(text.find('\n', pos), text.size());
    const std::string_view line = trim(text.substr(pos, end - pos));
    pos = end + 1;
    ++line_no;
    if (line.empty() || line.front() == '#') continue;
    std::vector<double> row;
    std::size_t i = 0;
    while (i <= line.size()) {
      const auto comma = std::min(line.find(',', i), line.size());
      const std::string cell(trim(line.substr(i, comma - i)));
      std::size_t used = 0;
      double value = 0.0;
      try {
        value = std::stod(cell, &used);
      } catch (const std::exception&) {
        used = 0;
      }
      if (cell.empty() || used != cell.size()) {
        throw InputError("feature csv line " + std::to_string(line_no) + ": invalid number '" +
                         cell + "'");
      }
      row.push_back(value);
      i = comma + 1;
    }
    if (!rows.empty() && row.size() != rows.front().size()) {
      throw InputError("feature csv line " + std::to_string(line_no) + ": expected " +
                       std::to_string(rows.front().size()) + " columns");
    }
    rows.push_back(std::move(row));
  }
  FeatureMatrix x(rows.size(), rows.empty() ? 0 : rows.front().size());
  for (Eigen::Index r = 0; r < x.rows(); ++r)
    for (Eigen::Index c = 0; c < x.cols(); ++c) x(r, c) = rows[r][c];
  return x;
}

std::string emit_feature_csv(const FeatureMatrix& x) {
  std::ostringstream os;
  os.precision(17);
  for (Eigen::Index r = 0; r < x.rows(); ++r) {
    for (Eigen::Index c = 0; c < x.cols(); ++c) {
      if (c) os << ',';
      os << x(r, c);
    }
    os << '\n';
  }
  return os.str();
}

}  // namespace cgp
