#pragma once

#include "cgp/graph.hpp"

#include <Eigen/Dense>

#include <optional>
#include <string>
#include <vector>

namespace cgp {

enum class LaplacianKind {
  Normalized,     // D^{-1/2} (D - A) D^{-1/2}; isolated rows and columns are zero
  Combinatorial,  // D - A
};

/// Dense Laplacian. Flagged self-loops are ignored.
Eigen::MatrixXd laplacian(const UGraph& g, LaplacianKind kind);

struct SymmetricEigen {
  Eigen::VectorXd values;   // ascending
  Eigen::MatrixXd vectors;  // column i pairs with values(i)
};

inline constexpr double kEigenTolerance = 1e-10;
/// Eigenvalues with magnitude below this are treated as exact zeros.
inline constexpr double kZeroEigenvalue = 1e-8;

/// Full symmetric eigendecomposition. Throws std::invalid_argument when M is
/// not square or not symmetric within tol * max(1, max|M_ij|).
SymmetricEigen eig_sym_full(const Eigen::MatrixXd& m, double tol = kEigenTolerance);
Eigen::VectorXd eig_sym(const Eigen::MatrixXd& m, double tol = kEigenTolerance);

/// Longest shortest path in hops, or nullopt when disconnected.
std::optional<std::size_t> diameter(const UGraph& g);

struct SpectralReport {
  std::size_t node_count = 0;
  std::size_t edge_count = 0;
  std::vector<double> eigenvalues;  // normalized Laplacian, ascending
  double spectral_gap = 0.0;        // lambda_1 of the normalized Laplacian
  double cheeger_lower = 0.0;       // lambda_1 / 2
  double cheeger_upper = 0.0;       // sqrt(2 lambda_1)
  /// lambda_1 of the combinatorial Laplacian D - A (algebraic connectivity).
  double algebraic_connectivity = 0.0;
  std::optional<std::size_t> diameter;  // nullopt: disconnected
  std::size_t components = 0;
  double r_tot = 0.0;  // +inf when disconnected
  bool has_isolated = false;
};

/// All bottleneck diagnostics for one graph. Never throws on degenerate input:
/// disconnected graphs report a zero gap, no diameter and infinite r_tot.
SpectralReport analyze(const UGraph& g);

/// L^+ of the combinatorial Laplacian via (L + J/n)^{-1} - J/n. Requires a connected graph.
Eigen::MatrixXd laplacian_pseudoinverse(const UGraph& g);

/// (1_u - 1_v)^T L^+ (1_u - 1_v). Throws std::domain_error when g is disconnected.
double effective_resistance_pair(const UGraph& g, NodeId u, NodeId v);

/// n * sum_{i >= 1} 1 / mu_i over the combinatorial spectrum; +inf when disconnected.
double total_effective_resistance(const UGraph& g);

/// Sum of effective_resistance_pair over all u > v (quadratic in |V|; oracle use).
double total_effective_resistance_pairwise(const UGraph& g);

/// trace(X^T L X) / |V| with the normalized Laplacian.
double dirichlet_energy(const UGraph& g, const FeatureMatrix& x);

struct SweepRow {
  std::size_t v = 0;
  std::uint32_t modulus = 0;
  bool is_complete = false;
  double spectral_gap = 0.0;
  double cheeger_lower = 0.0;
  double cheeger_upper = 0.0;
  std::optional<std::size_t> diameter;
  double r_tot = 0.0;
};

/// For each v in [v_min, v_max]: truncate the smallest-modulus Cayley graph
/// covering v to its first v BFS vertices and analyse it. Rows are ordered by
/// v; `threads == 0` uses the hardware concurrency. An empty range yields no rows.
std::vector<SweepRow> expansion_sweep(std::size_t v_min, std::size_t v_max, unsigned threads = 0);

/// CSV with header v,modulus,is_complete,spectral_gap,cheeger_lower,cheeger_upper,diameter,r_tot.
/// Disconnected rows print "disconnected" and "inf".
std::string sweep_csv(const std::vector<SweepRow>& rows);

}  // namespace cgp
