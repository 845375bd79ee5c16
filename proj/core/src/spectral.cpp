#include "cgp/spectral.hpp"

#include "cgp/cayley.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <queue>
#include <sstream>
#include <stdexcept>
#include <thread>

namespace cgp {

Eigen::MatrixXd laplacian(const UGraph& g, LaplacianKind kind) {
  const auto n = static_cast<Eigen::Index>(g.node_count());
  Eigen::MatrixXd l = Eigen::MatrixXd::Zero(n, n);
  if (kind == LaplacianKind::Combinatorial) {
    for (const auto& [u, v] : g.edges()) {
      l(u, v) -= 1.0;
      l(v, u) -= 1.0;
      l(u, u) += 1.0;
      l(v, v) += 1.0;
    }
    return l;
  }
  Eigen::VectorXd inv_sqrt(n);
  for (Eigen::Index u = 0; u < n; ++u) {
    const auto d = static_cast<double>(g.degree(static_cast<NodeId>(u)));
    inv_sqrt(u) = d > 0 ? 1.0 / std::sqrt(d) : 0.0;
    l(u, u) = d > 0 ? 1.0 : 0.0;
  }
  for (const auto& [u, v] : g.edges()) {
    const double w = -inv_sqrt(u) * inv_sqrt(v);
    l(u, v) = w;
    l(v, u) = w;
  }
  return l;
}

SymmetricEigen eig_sym_full(const Eigen::MatrixXd& m, double tol) {
  if (m.rows() != m.cols()) throw std::invalid_argument("eig_sym: matrix is not square");
  const double scale = std::max(1.0, m.size() ? m.cwiseAbs().maxCoeff() : 0.0);
  if (m.size() && (m - m.transpose()).cwiseAbs().maxCoeff() > tol * scale) {
    throw std::invalid_argument("eig_sym: matrix is not symmetric");
  }
  if (m.size() == 0) return {};
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(m);
  if (solver.info() != Eigen::Success) throw std::runtime_error("eig_sym: solver did not converge");
  return {solver.eigenvalues(), solver.eigenvectors()};
}

Eigen::VectorXd eig_sym(const Eigen::MatrixXd& m, double tol) { return eig_sym_full(m, tol).values; }

namespace {

// Hop distances from s; SIZE_MAX marks unreachable nodes.
std::size_t bfs_eccentricity(const UGraph& g, NodeId s, std::vector<std::size_t>& dist,
                             std::vector<NodeId>& queue, bool& reached_all) {
  std::fill(dist.begin(), dist.end(), std::numeric_limits<std::size_t>::max());
  queue.clear();
  dist[s] = 0;
  queue.push_back(s);
  std::size_t far = 0;
  for (std::size_t head = 0; head < queue.size(); ++head) {
    const NodeId u = queue[head];
    far = dist[u];
    for (NodeId v : g.neighbors(u)) {
      if (dist[v] == std::numeric_limits<std::size_t>::max()) {
        dist[v] = dist[u] + 1;
        queue.push_back(v);
      }
    }
  }
  reached_all = queue.size() == g.node_count();
  return far;
}

double clamp_zero(double x) { return std::abs(x) < kZeroEigenvalue ? 0.0 : x; }

}  // namespace

std::optional<std::size_t> diameter(const UGraph& g) {
  std::vector<std::size_t> dist(g.node_count());
  std::vector<NodeId> queue;
  queue.reserve(g.node_count());
  std::size_t best = 0;
  for (NodeId s = 0; s < g.node_count(); ++s) {
    bool all = false;
    best = std::max(best, bfs_eccentricity(g, s, dist, queue, all));
    if (!all) return std::nullopt;
  }
  return best;
}

SpectralReport analyze(const UGraph& g) {
  SpectralReport r;
  r.node_count = g.node_count();
  r.edge_count = g.edge_count();
  r.components = connected_components(g);
  for (NodeId u = 0; u < g.node_count(); ++u) r.has_isolated = r.has_isolated || g.degree(u) == 0;
  if (g.node_count() == 0) return r;

  const Eigen::VectorXd normalized = eig_sym(laplacian(g, LaplacianKind::Normalized));
  r.eigenvalues.reserve(normalized.size());
  for (double x : normalized) r.eigenvalues.push_back(clamp_zero(x));
  const Eigen::VectorXd combinatorial = eig_sym(laplacian(g, LaplacianKind::Combinatorial));

  r.diameter = diameter(g);
  const bool connected = r.components == 1;
  if (connected && g.node_count() > 1) {
    r.spectral_gap = r.eigenvalues[1];
    r.algebraic_connectivity = clamp_zero(combinatorial(1));
  }
  r.cheeger_lower = r.spectral_gap / 2.0;
  r.cheeger_upper = std::sqrt(2.0 * r.spectral_gap);

  if (!connected) {
    r.r_tot = std::numeric_limits<double>::infinity();
  } else {
    double sum = 0.0;
    for (Eigen::Index i = 1; i < combinatorial.size(); ++i) sum += 1.0 / combinatorial(i);
    r.r_tot = static_cast<double>(g.node_count()) * sum;
  }
  return r;
}

Eigen::MatrixXd laplacian_pseudoinverse(const UGraph& g) {
  const auto n = static_cast<Eigen::Index>(g.node_count());
  if (n == 0) return {};
  if (connected_components(g) != 1) {
    throw std::domain_error("laplacian_pseudoinverse: graph is disconnected");
  }
  const Eigen::MatrixXd j = Eigen::MatrixXd::Constant(n, n, 1.0 / static_cast<double>(n));
  const Eigen::MatrixXd shifted = laplacian(g, LaplacianKind::Combinatorial) + j;
  const Eigen::MatrixXd inv = shifted.ldlt().solve(Eigen::MatrixXd::Identity(n, n));
  return inv - j;
}

double effective_resistance_pair(const UGraph& g, NodeId u, NodeId v) {
  if (u >= g.node_count() || v >= g.node_count()) {
    throw std::out_of_range("effective_resistance_pair: node out of range");
  }
  if (u == v) throw std::invalid_argument("effective_resistance_pair: u == v");
  const Eigen::MatrixXd lp = laplacian_pseudoinverse(g);
  return lp(u, u) + lp(v, v) - 2.0 * lp(u, v);
}

double total_effective_resistance(const UGraph& g) {
  if (g.node_count() <= 1) return 0.0;
  if (connected_components(g) != 1) return std::numeric_limits<double>::infinity();
  const Eigen::VectorXd mu = eig_sym(laplacian(g, LaplacianKind::Combinatorial));
  double sum = 0.0;
  for (Eigen::Index i = 1; i < mu.size(); ++i) sum += 1.0 / mu(i);
  return static_cast<double>(g.node_count()) * sum;
}

double total_effective_resistance_pairwise(const UGraph& g) {
  if (g.node_count() <= 1) return 0.0;
  const Eigen::MatrixXd lp = laplacian_pseudoinverse(g);
  double sum = 0.0;
  for (Eigen::Index u = 0; u < lp.rows(); ++u)
    for (Eigen::Index v = 0; v < u; ++v) sum += lp(u, u) + lp(v, v) - 2.0 * lp(u, v);
  return sum;
}

double dirichlet_energy(const UGraph& g, const FeatureMatrix& x) {
  if (static_cast<std::size_t>(x.rows()) != g.node_count()) {
    throw std::invalid_argument("dirichlet_energy: feature rows (" + std::to_string(x.rows()) +
                                ") != node count (" + std::to_string(g.node_count()) + ")");
  }
  if (g.node_count() == 0) return 0.0;
  const Eigen::MatrixXd l = laplacian(g, LaplacianKind::Normalized);
  const double trace = (x.transpose() * l * x).trace();
  return std::max(0.0, trace) / static_cast<double>(g.node_count());
}

std::vector<SweepRow> expansion_sweep(std::size_t v_min, std::size_t v_max, unsigned threads) {
  if (v_min < 2) throw std::invalid_argument("expansion_sweep: v_min must be at least 2");
  if (v_min > v_max) return {};

  std::map<std::uint32_t, CayleyGraph> cayley;
  for (std::uint32_t n = smallest_modulus(v_min); n <= smallest_modulus(v_max); ++n) {
    cayley.emplace(n, build_cayley(n));
  }

  std::vector<SweepRow> rows(v_max - v_min + 1);
  auto work = [&](std::size_t begin, std::size_t stride) {
    for (std::size_t i = begin; i < rows.size(); i += stride) {
      const std::size_t v = v_min + i;
      const std::uint32_t n = smallest_modulus(v);
      const auto& cg = cayley.at(n);
      const SpectralReport rep = analyze(truncate_bfs(cg, v));
      SweepRow& row = rows[i];
      row.v = v;
      row.modulus = n;
      row.is_complete = v == cg.graph.node_count();
      row.spectral_gap = rep.spectral_gap;
      row.cheeger_lower = rep.cheeger_lower;
      row.cheeger_upper = rep.cheeger_upper;
      row.diameter = rep.diameter;
      row.r_tot = rep.r_tot;
    }
  };
  if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
  threads = static_cast<unsigned>(std::min<std::size_t>(threads, rows.size()));
  if (threads <= 1) {
    work(0, 1);
  } else {
    std::vector<std::jthread> pool;
    for (unsigned t = 0; t < threads; ++t) pool.emplace_back(work, t, threads);
  }
  return rows;
}

std::string sweep_csv(const std::vector<SweepRow>& rows) {
  std::ostringstream os;
  os.precision(12);
  os << "v,modulus,is_complete,spectral_gap,cheeger_lower,cheeger_upper,diameter,r_tot\n";
  for (const auto& r : rows) {
    os << r.v << ',' << r.modulus << ',' << (r.is_complete ? 1 : 0) << ',' << r.spectral_gap << ','
       << r.cheeger_lower << ',' << r.cheeger_upper << ',';
    if (r.diameter) {
      os << *r.diameter;
    } else {
      os << "disconnected";
    }
    os << ',';
    if (std::isfinite(r.r_tot)) {
      os << r.r_tot;
    } else {
      os << "inf";
    }
    os << '\n';
  }
  return os.str();
}

}  // namespace cgp
