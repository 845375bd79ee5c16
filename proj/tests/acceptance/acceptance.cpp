// Acceptance suite: one PASS/FAIL line per criterion.
//
//   acceptance                  run every criterion
//   acceptance --criterion 5    run one criterion; exit status reflects it

#include "cgp/cayley.hpp"
#include "cgp/graph.hpp"
#include "cgp/io.hpp"
#include "cgp/modgroup.hpp"
#include "cgp/nn.hpp"
#include "cgp/propagation.hpp"
#include "cgp/spectral.hpp"

#include "oracles.hpp"

#include <CLI11.hpp>

#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iomanip>
#include <iostream>
#include <map>
#include <numeric>
#include <random>
#include <set>
#include <sstream>
#include <thread>

namespace {

using cgp::Scheme;
using cgp::UGraph;
using Clock = std::chrono::steady_clock;

struct Outcome {
  bool pass = false;
  std::string summary;
  std::vector<std::string> notes;
};

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

std::string fmt(double x, int precision = 6) {
  std::ostringstream os;
  os << std::setprecision(precision) << x;
  return os.str();
}

cgp::CayleyCache& cache() {
  static cgp::CayleyCache c;
  return c;
}

Eigen::MatrixXd random_matrix(Eigen::Index r, Eigen::Index c, std::mt19937_64& rng) {
  std::normal_distribution<double> nd;
  Eigen::MatrixXd m(r, c);
  for (Eigen::Index i = 0; i < m.size(); ++i) m.data()[i] = nd(rng);
  return m;
}

std::vector<cgp::NodeId> random_permutation(std::size_t n, std::mt19937_64& rng) {
  std::vector<cgp::NodeId> p(n);
  std::iota(p.begin(), p.end(), 0);
  std::shuffle(p.begin(), p.end(), rng);
  return p;
}

Eigen::MatrixXd permute_rows(const Eigen::MatrixXd& x, std::span<const cgp::NodeId> perm) {
  Eigen::MatrixXd out(x.rows(), x.cols());
  for (std::size_t u = 0; u < perm.size(); ++u) out.row(perm[u]) = x.row(static_cast<Eigen::Index>(u));
  return out;
}

// ---------------------------------------------------------------------------

Outcome criterion_1() {
  const auto t0 = Clock::now();
  std::vector<std::string> bad;
  for (std::uint32_t n = 2; n <= 12; ++n) {
    const auto count = cgp::enumerate_sl2_bruteforce(n).size();
    if (count != cgp::sl2_order(n)) {
      bad.push_back("n=" + std::to_string(n) + ": " + std::to_string(count) + " vs " +
                    std::to_string(cgp::sl2_order(n)));
    }
  }
  const bool n3 = cgp::sl2_order(3) == 24;
  const double secs = seconds_since(t0);
  Outcome o;
  o.pass = bad.empty() && n3 && secs < 30.0;
  o.summary = "group order equals brute-force count for n=2..12, |SL(2,Z_3)|=" +
              std::to_string(cgp::sl2_order(3)) + " (" + fmt(secs, 3) + " s)";
  for (const auto& b : bad) o.notes.push_back("mismatch " + b);
  return o;
}

Outcome criterion_2() {
  const auto cg = cgp::build_cayley(3);
  const auto r = cgp::analyze(cg.graph);
  bool regular = true;
  for (cgp::NodeId u = 0; u < cg.graph.node_count(); ++u) regular &= cg.graph.degree(u) == 4;
  const double target = 1.2679;
  const bool gap_ok = std::abs(r.algebraic_connectivity - target) < 1e-3;
  Outcome o;
  o.pass = cg.graph.node_count() == 24 && cg.graph.edge_count() == 48 && regular &&
           r.diameter == std::optional<std::size_t>(4) && gap_ok;
  o.summary = "Cay(SL(2,Z_3)): |V|=" + std::to_string(cg.graph.node_count()) +
              " |E|=" + std::to_string(cg.graph.edge_count()) +
              " 4-regular=" + (regular ? "yes" : "no") +
              " diameter=" + (r.diameter ? std::to_string(*r.diameter) : "inf") +
              " gap=" + fmt(r.algebraic_connectivity) + " (target 1.2679 +- 1e-3)";
  o.notes.push_back("deviation: the matching gap is lambda_1 of the combinatorial Laplacian D - A; "
                    "the normalized Laplacian gives lambda_1 = " + fmt(r.spectral_gap) +
                    " = " + fmt(r.algebraic_connectivity) + " / 4 on this 4-regular graph");
  return o;
}

Outcome criterion_3() {
  std::mt19937_64 rng(2024);
  std::size_t violations = 0;
  double tightest = std::numeric_limits<double>::infinity();
  for (int i = 0; i < 50; ++i) {
    const std::size_t n = 3 + static_cast<std::size_t>(rng() % 10);
    const UGraph g = cgp::oracle::random_connected_graph(n, 0.2 + 0.6 * (rng() % 100) / 100.0, rng);
    const auto r = cgp::analyze(g);
    const double h = cgp::oracle::cheeger_bruteforce(g);
    if (!(r.cheeger_lower <= h && h <= r.cheeger_upper)) ++violations;
    tightest = std::min({tightest, h - r.cheeger_lower, r.cheeger_upper - h});
  }
  Outcome o;
  o.pass = violations == 0;
  o.summary = "Cheeger sandwich on 50 random connected graphs (3..12 nodes): " +
              std::to_string(violations) + " violations, smallest slack " + fmt(tightest);
  return o;
}

Outcome criterion_4() {
  std::mt19937_64 rng(4048);
  double worst = 0.0;
  for (int i = 0; i < 50; ++i) {
    const std::size_t n = 2 + static_cast<std::size_t>(rng() % 29);
    const UGraph g = cgp::oracle::random_connected_graph(n, 0.15 + 0.5 * (rng() % 100) / 100.0, rng);
    const double a = cgp::total_effective_resistance(g);
    const double b = cgp::total_effective_resistance_pairwise(g);
    worst = std::max(worst, std::abs(a - b) / std::max(1.0, std::abs(b)));
  }
  const UGraph tri(3, {{0, 1}, {1, 2}, {0, 2}});
  const double t = cgp::total_effective_resistance(tri);
  Outcome o;
  o.pass = worst < 1e-8 && std::abs(t - 2.0) < 1e-10;
  o.summary = "R_tot eigen formula vs pairwise pseudoinverse on 50 graphs (<= 30 nodes): max rel err " +
              fmt(worst, 3) + "; triangle R_tot=" + fmt(t, 15);
  return o;
}

Outcome criterion_5() {
  const auto t0 = Clock::now();
  const std::size_t lo = 6, hi = 360;
  const auto rows = cgp::expansion_sweep(lo, hi);
  auto at = [&](std::size_t v) -> const cgp::SweepRow& { return rows[v - lo]; };

  std::vector<std::size_t> complete;
  for (std::uint32_t n = 2; cgp::sl2_order(n) <= hi; ++n)
    if (cgp::sl2_order(n) >= lo) complete.push_back(cgp::sl2_order(n));

  Outcome o;
  bool maxima_ok = true, minima_ok = true, diam_ok = true;

  // Local maxima of cheeger_lower: each complete size beats its in-range neighbours
  // and is the maximum of every segment between consecutive complete sizes it bounds.
  for (std::size_t c : complete) {
    const double x = at(c).cheeger_lower;
    if ((c > lo && !(x > at(c - 1).cheeger_lower)) || (c < hi && !(x > at(c + 1).cheeger_lower))) {
      maxima_ok = false;
      o.notes.push_back("complete size " + std::to_string(c) + " is not a strict local maximum");
    }
  }
  for (std::size_t k = 0; k + 1 < complete.size(); ++k) {
    const std::size_t a = complete[k], b = complete[k + 1];
    for (std::size_t v = a + 1; v < b; ++v) {
      if (at(v).cheeger_lower >= std::max(at(a).cheeger_lower, at(b).cheeger_lower)) {
        maxima_ok = false;
        o.notes.push_back("v=" + std::to_string(v) + " reaches the segment maximum of [" +
                          std::to_string(a) + "," + std::to_string(b) + "]");
      }
    }
  }
  std::size_t ripples = 0;
  for (std::size_t v = lo + 1; v < hi; ++v) {
    const double x = at(v).cheeger_lower;
    ripples += !at(v).is_complete && x > at(v - 1).cheeger_lower && x > at(v + 1).cheeger_lower;
  }
  o.notes.push_back("info: " + std::to_string(ripples) +
                    " truncated sizes are strict local maxima below their segment maximum");

  // Interval minima in the first third of each open interval between complete sizes.
  for (std::size_t k = 0; k + 1 < complete.size(); ++k) {
    const std::size_t a = complete[k], b = complete[k + 1];
    std::size_t argmin = a + 1;
    for (std::size_t v = a + 1; v < b; ++v)
      if (at(v).cheeger_lower < at(argmin).cheeger_lower) argmin = v;
    const double limit = static_cast<double>(a) + static_cast<double>(b - a) / 3.0;
    const bool ok = static_cast<double>(argmin) <= limit;
    minima_ok &= ok;
    o.notes.push_back("interval (" + std::to_string(a) + "," + std::to_string(b) + "): min at v=" +
                      std::to_string(argmin) + ", first third ends at " + fmt(limit, 4) +
                      (ok ? " ok" : " VIOLATION"));
  }

  // Diameter local minima (non-strict) at complete sizes.
  for (std::size_t c : complete) {
    const auto d = at(c).diameter;
    auto le = [&](std::size_t v) {
      const auto dv = at(v).diameter;
      return d && (!dv || *d <= *dv);
    };
    const bool ok = (c == lo || le(c - 1)) && (c == hi || le(c + 1));
    if (!ok) {
      diam_ok = false;
      o.notes.push_back("diameter at complete size " + std::to_string(c) + " is not a local minimum");
    }
  }
  const double secs = seconds_since(t0);
  o.pass = maxima_ok && minima_ok && diam_ok && secs < 600.0;
  o.summary = std::string("sweep v=6..360: cheeger_lower maxima at complete sizes ") +
              (maxima_ok ? "yes" : "no") + ", interval minima in first third " +
              (minima_ok ? "yes" : "no") + ", diameter minima at complete sizes " +
              (diam_ok ? "yes" : "no") + " (" + fmt(secs, 3) + " s)";
  return o;
}

Outcome criterion_6() {
  Outcome o;
  cgp::DPatternTable table;
  std::vector<std::vector<int>> sequences;
  bool uniform = true;
  for (std::uint32_t n : {3u, 4u, 5u}) {
    const auto g = cache().graph(n);
    std::vector<int> ids(g->node_count(), 0);
    std::vector<int> seq = {ids[0]};
    for (int d = 1; d <= 5; ++d) {
      ids = table.refine(*g, ids, d);
      if (std::set<int>(ids.begin(), ids.end()).size() != 1) {
        uniform = false;
        o.notes.push_back("n=" + std::to_string(n) + " has distinct ids at d=" + std::to_string(d));
      }
      seq.push_back(ids[0]);
    }
    sequences.push_back(seq);
  }
  const bool shared = sequences[0] == sequences[1] && sequences[1] == sequences[2];

  std::size_t checked = 0;
  std::map<std::uint32_t, std::vector<std::size_t>> regular_prefixes;
  for (std::uint32_t n : {3u, 4u, 5u}) {
    const auto cg = cgp::build_cayley(n);
    for (std::size_t v = 1; v < cg.graph.node_count(); ++v) {
      const UGraph t = cgp::truncate_bfs(cg, v);
      const auto ids = cgp::d_patterns(t, std::vector<int>(v, 0), 1);
      ++checked;
      if (std::set<int>(ids.begin(), ids.end()).size() < 2) regular_prefixes[n].push_back(v);
    }
  }
  for (const auto& [n, vs] : regular_prefixes) {
    std::string list;
    for (auto v : vs) list += (list.empty() ? "" : ",") + std::to_string(v);
    o.notes.push_back("n=" + std::to_string(n) + ": truncation with a single d=1 id at v=" + list +
                      " (these prefixes are regular graphs)");
  }
  std::size_t failures = 0;
  for (const auto& [n, vs] : regular_prefixes) failures += vs.size();
  o.pass = uniform && shared && failures == 0;
  o.summary = std::string("complete Cayley graphs n=3,4,5 share one d-pattern sequence for d<=5: ") +
              (uniform && shared ? "yes" : "no") + "; truncations with >= 2 ids at d=1: " +
              std::to_string(checked - failures) + "/" + std::to_string(checked);
  return o;
}

Outcome criterion_7() {
  struct Config {
    cgp::LayerKind kind;
    Scheme scheme;
    std::size_t layers;
    std::size_t nodes;
    cgp::Task task;
    bool gaussian;
  };
  const std::vector<Config> configs = {
      {cgp::LayerKind::GIN, Scheme::CGP, 2, 10, cgp::Task::Classification, false},
      {cgp::LayerKind::GIN, Scheme::CGP, 3, 20, cgp::Task::Classification, true},
      {cgp::LayerKind::GIN, Scheme::CGP, 4, 7, cgp::Task::Regression, true},
      {cgp::LayerKind::GCN, Scheme::CGP, 2, 12, cgp::Task::Classification, true},
      {cgp::LayerKind::GIN, Scheme::Base, 2, 9, cgp::Task::Classification, false},
      {cgp::LayerKind::GCN, Scheme::Base, 3, 8, cgp::Task::Regression, false},
      {cgp::LayerKind::GIN, Scheme::EGP, 3, 11, cgp::Task::Classification, false},
      {cgp::LayerKind::GIN, Scheme::MasterNode, 2, 9, cgp::Task::Classification, false},
      {cgp::LayerKind::GCN, Scheme::FALast, 2, 6, cgp::Task::Classification, false},
      {cgp::LayerKind::GIN, Scheme::CGPEvery, 2, 5, cgp::Task::Regression, true},
  };
  std::mt19937_64 rng(77);
  double worst = 0.0;
  Outcome o;
  for (const auto& c : configs) {
    const UGraph g = cgp::oracle::random_connected_graph(c.nodes, 0.35, rng);
    const cgp::VirtualInit init{c.gaussian ? cgp::VirtualInit::Kind::Gaussian : cgp::VirtualInit::Kind::Zeros,
                                rng()};
    const auto plan = cgp::build_plan(g, c.scheme, c.layers, cache(), init);
    auto params = cgp::init_params(c.kind, 4, 5, c.layers, rng());
    for (auto& l : params.layers)
      if (l.eps.size()) l.eps(0, 0) = 0.25;
    const auto x = random_matrix(static_cast<Eigen::Index>(c.nodes), 4, rng);
    const double label = c.task == cgp::Task::Classification ? 1.0 : -3.0;
    const cgp::Sample s{&plan, &x, label};
    const auto analytic = cgp::flatten(cgp::sample_gradients(s, params, c.task).grads);
    auto loss = [&](const std::vector<double>& theta) {
      auto p = params;
      cgp::unflatten(p, theta);
      return cgp::sample_loss(cgp::model_forward(plan, p, x).prediction, label, c.task);
    };
    const auto numeric = cgp::oracle::finite_differences(loss, cgp::flatten(params), 1e-6);
    const double err = cgp::oracle::max_relative_error(analytic, numeric, 1e-4);
    worst = std::max(worst, err);
    o.notes.push_back(std::string(cgp::to_string(c.kind)) + "/" + std::string(cgp::to_string(c.scheme)) +
                      " layers=" + std::to_string(c.layers) + " |V|=" + std::to_string(c.nodes) +
                      " virtual=" + std::to_string(plan.virtual_count()) + " rel err " + fmt(err, 3));
  }
  o.pass = worst < 1e-5;
  o.summary = "analytic vs central-difference gradients over 10 configurations: max rel err " +
              fmt(worst, 3) + " (bound 1e-5)";
  return o;
}

Outcome criterion_8() {
  std::mt19937_64 rng(88);
  Outcome o;

  // (a) CGP == EGP when |V| equals the group order.
  bool a_ok = true;
  for (std::size_t layers : {1u, 2u, 3u, 4u}) {
    for (std::size_t v : {6u, 24u, 48u}) {
      const UGraph g = cgp::oracle::random_connected_graph(v, 6.0 / static_cast<double>(v), rng);
      const auto cgp_plan = cgp::build_plan(g, Scheme::CGP, layers, cache());
      const auto egp_plan = cgp::build_plan(g, Scheme::EGP, layers, cache());
      for (auto kind : {cgp::LayerKind::GIN, cgp::LayerKind::GCN}) {
        const auto params = cgp::init_params(kind, 3, 6, layers, rng());
        const auto x = random_matrix(static_cast<Eigen::Index>(v), 3, rng);
        const auto f1 = cgp::model_forward(cgp_plan, params, x);
        const auto f2 = cgp::model_forward(egp_plan, params, x);
        a_ok &= f1.prediction == f2.prediction && f1.embeddings == f2.embeddings;
      }
    }
  }

  // (b) Perturbing virtual rows of the final embeddings leaves the prediction unchanged.
  bool b_ok = true;
  for (int trial = 0; trial < 20; ++trial) {
    const std::size_t v = 7 + static_cast<std::size_t>(rng() % 40);
    const UGraph g = cgp::oracle::random_connected_graph(v, 0.2, rng);
    const auto plan = cgp::build_plan(g, Scheme::CGP, 2, cache());
    const auto params = cgp::init_params(cgp::LayerKind::GIN, 3, 5, 2, rng());
    const auto x = random_matrix(static_cast<Eigen::Index>(v), 3, rng);
    const auto f = cgp::model_forward(plan, params, x);
    Eigen::MatrixXd h = f.embeddings;
    const auto virt = static_cast<Eigen::Index>(plan.virtual_count());
    h.bottomRows(virt) += 1e6 * random_matrix(virt, h.cols(), rng);
    b_ok &= cgp::readout(plan, params, h) == f.prediction;
  }

  // (c) Permutation equivariance.
  double base_err = 0.0, joint_err = 0.0, auto_err = 0.0, input_only = 0.0;
  for (int trial = 0; trial < 10; ++trial) {
    const std::size_t v = 8 + static_cast<std::size_t>(rng() % 30);
    const UGraph g = cgp::oracle::random_connected_graph(v, 0.25, rng);
    const auto x = random_matrix(static_cast<Eigen::Index>(v), 3, rng);
    const auto perm = random_permutation(v, rng);
    const UGraph gp = g.relabeled(perm);
    const auto xp = permute_rows(x, perm);
    const auto params = cgp::init_params(cgp::LayerKind::GIN, 3, 5, 2, rng());

    // Base: input-only relabelling permutes embeddings and fixes the prediction.
    const auto b1 = cgp::model_forward(cgp::build_plan(g, Scheme::Base, 2, cache()), params, x);
    const auto b2 = cgp::model_forward(cgp::build_plan(gp, Scheme::Base, 2, cache()), params, xp);
    base_err = std::max({base_err, (permute_rows(b1.embeddings, perm) - b2.embeddings).cwiseAbs().maxCoeff(),
                         std::abs(b1.prediction - b2.prediction) / std::max(1.0, std::abs(b1.prediction))});

    // CGP: relabel every template graph jointly; virtual nodes keep their positions.
    const auto plan = cgp::build_plan(g, Scheme::CGP, 2, cache());
    std::vector<cgp::NodeId> ext(plan.extended_count);
    std::iota(ext.begin(), ext.end(), 0);
    std::copy(perm.begin(), perm.end(), ext.begin());
    auto relabelled = plan;
    relabelled.input_extended = std::make_shared<const UGraph>(plan.input_extended->relabeled(ext));
    relabelled.cayley = std::make_shared<const UGraph>(plan.cayley->relabeled(ext));
    const auto c1 = cgp::model_forward(plan, params, x);
    const auto c2 = cgp::model_forward(relabelled, params, xp);
    joint_err = std::max({joint_err, (permute_rows(c1.embeddings, ext) - c2.embeddings).cwiseAbs().maxCoeff(),
                          std::abs(c1.prediction - c2.prediction) / std::max(1.0, std::abs(c1.prediction))});

    // Arbitrary input-only relabelling under CGP (reported, not asserted).
    const auto c3 = cgp::model_forward(cgp::build_plan(gp, Scheme::CGP, 2, cache()), params, xp);
    input_only = std::max(input_only, std::abs(c1.prediction - c3.prediction) / std::max(1.0, std::abs(c1.prediction)));
  }

  // CGP with |V| = group order: relabelling the input by a left translation
  // x -> h x is an automorphism of the Cayley graph, so the plan is unchanged.
  for (std::uint32_t n : {3u, 4u}) {
    const auto cg = cgp::build_cayley(n);
    std::map<cgp::Mat2Z, cgp::NodeId> index;
    for (cgp::NodeId i = 0; i < cg.vertices.size(); ++i) index[cg.vertices[i]] = i;
    const std::size_t v = cg.vertices.size();
    for (int trial = 0; trial < 5; ++trial) {
      const auto& h = cg.vertices[rng() % v];
      std::vector<cgp::NodeId> perm(v);
      for (cgp::NodeId i = 0; i < v; ++i) perm[i] = index.at(cgp::mat_mul(h, cg.vertices[i]));
      const UGraph g = cgp::oracle::random_connected_graph(v, 4.0 / static_cast<double>(v), rng);
      const auto x = random_matrix(static_cast<Eigen::Index>(v), 3, rng);
      const auto params = cgp::init_params(cgp::LayerKind::GIN, 3, 5, 3, rng());
      const auto f1 = cgp::model_forward(cgp::build_plan(g, Scheme::CGP, 3, cache()), params, x);
      const auto f2 = cgp::model_forward(cgp::build_plan(g.relabeled(perm), Scheme::CGP, 3, cache()), params,
                                         permute_rows(x, perm));
      auto_err = std::max({auto_err, (permute_rows(f1.embeddings, perm) - f2.embeddings).cwiseAbs().maxCoeff(),
                           std::abs(f1.prediction - f2.prediction) / std::max(1.0, std::abs(f1.prediction))});
    }
  }
  const double tol = 1e-10;
  const bool c_ok = base_err < tol && joint_err < tol && auto_err < tol;
  o.notes.push_back("(c) Base input relabelling: max err " + fmt(base_err, 3));
  o.notes.push_back("(c) CGP joint template relabelling: max err " + fmt(joint_err, 3));
  o.notes.push_back("(c) CGP relabelling by Cayley automorphism (|V| = group order): max err " + fmt(auto_err, 3));
  o.notes.push_back("(c) info: CGP with arbitrary input-only relabelling changes predictions by up to " +
                    fmt(input_only, 3) + " (the Cayley template is positional)");
  o.pass = a_ok && b_ok && c_ok;
  o.summary = std::string("(a) CGP==EGP bit-for-bit at |V|=group order: ") + (a_ok ? "yes" : "no") +
              "; (b) virtual rows ignored by readout: " + (b_ok ? "yes" : "no") +
              "; (c) permutation equivariance: " + (c_ok ? "yes" : "no");
  return o;
}

std::filesystem::path data_dir() {
#ifdef CGP_TEST_DATA_DIR
  return CGP_TEST_DATA_DIR;
#else
  return "tests/data";
#endif
}

Outcome criterion_9() {
  const auto t0 = Clock::now();
  const std::vector<cgp::SumStructure> structures = {cgp::SumStructure::Empty, cgp::SumStructure::Cayley24,
                                                     cgp::SumStructure::Star, cgp::SumStructure::BA};
  const std::vector<std::uint64_t> seeds = {0, 1, 2, 3, 4};
  const std::size_t test_size = 1000;
  // Epochs per train size: the small set gets more passes so both see a comparable step count.
  const std::vector<std::pair<std::size_t, std::size_t>> sizes = {{100, 300}, {1000, 100}};
  const unsigned threads = std::max(1u, std::thread::hardware_concurrency());

  std::vector<cgp::CurveRow> all;
  std::map<std::pair<std::string, std::size_t>, double> mean;
  for (auto s : structures) {
    const auto data = cgp::gen_sum_task(s, sizes.back().first + test_size, 0);
    auto builder = [](const UGraph& g) { return cgp::build_plan(g, Scheme::Base, 1, cache()); };
    for (const auto& [size, epochs] : sizes) {
      cgp::TrainConfig cfg;
      cfg.epochs = epochs;
      cfg.hidden_dim = 64;
      const std::vector<std::size_t> one = {size};
      const auto rows = cgp::train(builder, data, cfg, one, seeds, test_size, threads);
      double total = 0.0;
      for (const auto& r : rows) total += r.test_error;
      mean[{std::string(cgp::to_string(s)), size}] = total / static_cast<double>(rows.size());
      all.insert(all.end(), rows.begin(), rows.end());
    }
  }
  const double secs = seconds_since(t0);
  auto m = [&](const char* s, std::size_t n) { return mean.at({s, n}); };

  const double approx = 0.03;
  const bool small_close = std::abs(m("Empty", 100) - m("Cayley24", 100)) <= approx;
  const double best_small = std::max(m("Empty", 100), m("Cayley24", 100));
  const bool small_below = best_small < m("Star", 100) && best_small < m("BA", 100);
  const bool large_close = std::abs(m("Cayley24", 1000) - m("Empty", 1000)) <= approx;

  Outcome o;
  for (const auto& [size, epochs] : sizes) {
    std::string line = "train_size=" + std::to_string(size) + " (" + std::to_string(epochs) + " epochs) mean test error:";
    for (auto s : structures) line += " " + std::string(cgp::to_string(s)) + "=" + fmt(m(std::string(cgp::to_string(s)).c_str(), size), 4);
    o.notes.push_back(line);
  }

  const auto baseline = data_dir() / "sum_task_baseline.csv";
  const std::string csv = cgp::curve_csv(all);
  bool regression_ok = true;
  if (std::filesystem::exists(baseline)) {
    std::ifstream in(baseline);
    std::stringstream buf;
    buf << in.rdbuf();
    regression_ok = buf.str() == csv;
    o.notes.push_back(std::string("regression baseline ") + baseline.string() +
                      (regression_ok ? ": identical" : ": DIFFERS"));
  } else {
    std::filesystem::create_directories(baseline.parent_path());
    cgp::write_file_atomic(baseline, csv);
    o.notes.push_back("regression baseline recorded at " + baseline.string());
  }
  o.pass = small_close && small_below && large_close && regression_ok && secs < 1800.0;
  o.summary = std::string("Sum task, 5 seeds, hidden 64: Empty~Cayley24 at 100 ") + (small_close ? "yes" : "no") +
              ", both below Star and BA at 100 " + (small_below ? "yes" : "no") +
              ", Cayley24 within 3pp of Empty at 1000 " + (large_close ? "yes" : "no") + " (" +
              fmt(secs, 4) + " s)";
  return o;
}

Outcome criterion_10() {
  const std::size_t n = 10000;
  cgp::GraphParams p;
  p.node_count = n;
  p.edge_probability = 5.0 * std::log(static_cast<double>(n)) / static_cast<double>(n);
  const UGraph g = cgp::gen_graph(cgp::GraphKind::ErdosRenyi, p, 10);
  cgp::CayleyCache cold;
  const auto t0 = Clock::now();
  const auto plan = cgp::build_plan(g, Scheme::CGP, 2, cold);
  const double secs = seconds_since(t0);
  Outcome o;
  o.pass = secs < 5.0 && plan.extended_count >= n;
  o.summary = "CGP template for ER n=10000 (|E|=" + std::to_string(g.edge_count()) + ", modulus " +
              std::to_string(plan.modulus.value_or(0)) + ", m=" + std::to_string(plan.extended_count) +
              ", cold cache): " + fmt(secs, 3) + " s (bound 5 s)";
  return o;
}

const std::vector<std::function<Outcome()>>& criteria() {
  static const std::vector<std::function<Outcome()>> all = {
      criterion_1, criterion_2, criterion_3, criterion_4, criterion_5,
      criterion_6, criterion_7, criterion_8, criterion_9, criterion_10};
  return all;
}

bool run(std::size_t k, bool verbose) {
  Outcome o;
  try {
    o = criteria()[k - 1]();
  } catch (const std::exception& e) {
    o.pass = false;
    o.summary = std::string("exception: ") + e.what();
  }
  std::cout << "criterion " << k << ": " << (o.pass ? "PASS" : "FAIL") << "  " << o.summary << std::endl;
  if (verbose)
    for (const auto& note : o.notes) std::cout << "    " << note << "\n";
  return o.pass;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"acceptance criteria"};
  std::size_t only = 0;
  bool quiet = false;
  app.add_option("--criterion", only, "run a single criterion (1-10)")->check(CLI::Range(1, 10));
  app.add_flag("--quiet", quiet, "omit per-criterion detail lines");
  CLI11_PARSE(app, argc, argv);

  if (only) return run(only, !quiet) ? 0 : 1;
  std::size_t failed = 0;
  for (std::size_t k = 1; k <= criteria().size(); ++k) failed += !run(k, !quiet);
  std::cout << (criteria().size() - failed) << "/" << criteria().size() << " criteria passed\n";
  return failed ? 1 : 0;
}
