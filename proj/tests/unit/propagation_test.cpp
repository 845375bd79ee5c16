#include "cgp/nn.hpp"
#include "cgp/propagation.hpp"

#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>

using cgp::LayerGraph;
using cgp::Scheme;
using cgp::UGraph;

namespace {

UGraph path_graph(std::size_t n) {
  std::vector<cgp::Edge> e;
  for (cgp::NodeId u = 0; u + 1 < n; ++u) e.emplace_back(u, u + 1);
  return UGraph(n, e);
}

cgp::CayleyCache& cache() {
  static cgp::CayleyCache c;
  return c;
}

}  // namespace

TEST(Scheme, ParseAndPrint) {
  for (auto s : {Scheme::Base, Scheme::MasterNode, Scheme::FALast, Scheme::EGP, Scheme::CGP,
                 Scheme::CGPLast, Scheme::CGPEvery}) {
    EXPECT_EQ(cgp::parse_scheme(cgp::to_string(s)), s);
  }
  EXPECT_EQ(cgp::parse_scheme("FA"), Scheme::FALast);
  EXPECT_THROW(cgp::parse_scheme("cgp"), std::invalid_argument);
}

TEST(ExtendFeatures, ZeroAndGaussianPadding) {
  const Eigen::MatrixXd x = Eigen::MatrixXd::Constant(3, 2, 1.5);
  const auto z = cgp::extend_features(x, 5);
  EXPECT_EQ(z.rows(), 5);
  EXPECT_EQ(z.topRows(3), x);
  EXPECT_EQ(z.bottomRows(2).cwiseAbs().sum(), 0.0);
  const cgp::VirtualInit g{cgp::VirtualInit::Kind::Gaussian, 9};
  const auto a = cgp::extend_features(x, 5, g);
  EXPECT_EQ(a, cgp::extend_features(x, 5, g));
  EXPECT_GT(a.bottomRows(2).cwiseAbs().sum(), 0.0);
  EXPECT_THROW(cgp::extend_features(x, 2), std::invalid_argument);
}

TEST(ExtendInputAdjacency, VirtualNodesCarryOnlyLoops) {
  const UGraph g = path_graph(4);
  const UGraph e = cgp::extend_input_adjacency(g, 7);
  EXPECT_EQ(e.node_count(), 7u);
  EXPECT_EQ(e.edges(), g.edges());
  EXPECT_EQ(e.self_loops(), (std::vector<cgp::NodeId>{4, 5, 6}));
  for (cgp::NodeId u = 4; u < 7; ++u) EXPECT_EQ(e.degree(u), 0u);
  EXPECT_THROW(cgp::extend_input_adjacency(g, 3), std::invalid_argument);
}

TEST(BuildPlan, CgpPathExample) {
  const auto plan = cgp::build_plan(path_graph(10), Scheme::CGP, 4, cache());
  EXPECT_EQ(plan.modulus, std::optional<std::uint32_t>(3));
  EXPECT_EQ(plan.extended_count, 24u);
  EXPECT_EQ(plan.virtual_count(), 14u);
  EXPECT_EQ(plan.schedule, (std::vector<LayerGraph>{LayerGraph::InputExtended, LayerGraph::Cayley,
                                                     LayerGraph::InputExtended, LayerGraph::Cayley}));
  EXPECT_EQ(plan.input_extended->self_loops().size(), 14u);
  EXPECT_EQ(plan.input_extended->edge_count(), 9u);
  EXPECT_EQ(*plan.cayley, cgp::build_cayley(3).graph);
  EXPECT_EQ(plan.layer_graph(1).node_count(), 24u);
}

TEST(BuildPlan, ExactOrderNeedsNoVirtualNodes) {
  const auto plan = cgp::build_plan(path_graph(24), Scheme::CGP, 2, cache());
  EXPECT_EQ(plan.extended_count, 24u);
  EXPECT_EQ(plan.virtual_count(), 0u);
  EXPECT_TRUE(plan.input_extended->self_loops().empty());
}

TEST(BuildPlan, SingleNodeUsesModulusTwo) {
  const auto plan = cgp::build_plan(UGraph(1), Scheme::CGP, 2, cache());
  EXPECT_EQ(plan.modulus, std::optional<std::uint32_t>(2));
  EXPECT_EQ(plan.extended_count, 6u);
}

TEST(BuildPlan, EgpTruncates) {
  const auto plan = cgp::build_plan(path_graph(10), Scheme::EGP, 3, cache());
  EXPECT_EQ(plan.extended_count, 10u);
  EXPECT_EQ(plan.cayley->node_count(), 10u);
  EXPECT_EQ(*plan.cayley, cgp::truncate_bfs(cgp::build_cayley(3), 10));
  EXPECT_EQ(plan.schedule[1], LayerGraph::Cayley);
  EXPECT_EQ(plan.schedule[2], LayerGraph::InputExtended);
}

TEST(BuildPlan, BaselineSchemes) {
  const UGraph g = path_graph(5);
  const auto base = cgp::build_plan(g, Scheme::Base, 3, cache());
  EXPECT_EQ(base.extended_count, 5u);
  EXPECT_FALSE(base.cayley);
  for (auto l : base.schedule) EXPECT_EQ(l, LayerGraph::InputExtended);

  const auto master = cgp::build_plan(g, Scheme::MasterNode, 2, cache());
  EXPECT_EQ(master.extended_count, 6u);
  EXPECT_EQ(master.input_extended->degree(5), 5u);

  const auto fa = cgp::build_plan(g, Scheme::FALast, 2, cache());
  EXPECT_EQ(fa.schedule.back(), LayerGraph::FullyAdjacent);
  EXPECT_EQ(fa.fully_adjacent->edge_count(), 10u);

  const auto last = cgp::build_plan(g, Scheme::CGPLast, 3, cache());
  EXPECT_EQ(last.schedule, (std::vector<LayerGraph>{LayerGraph::InputExtended,
                                                     LayerGraph::InputExtended, LayerGraph::Cayley}));
  const auto every = cgp::build_plan(g, Scheme::CGPEvery, 2, cache());
  for (auto l : every.schedule) EXPECT_EQ(l, LayerGraph::Cayley);

  EXPECT_THROW(cgp::build_plan(g, Scheme::CGP, 0, cache()), std::invalid_argument);
  EXPECT_THROW(cgp::build_plan(UGraph(0), Scheme::CGP, 1, cache()), std::invalid_argument);
}

TEST(BuildPlan, SharesCachedCayleyGraph) {
  const auto a = cgp::build_plan(path_graph(8), Scheme::CGP, 2, cache());
  const auto b = cgp::build_plan(path_graph(20), Scheme::CGP, 2, cache());
  EXPECT_EQ(a.cayley.get(), b.cayley.get());
}

TEST(VirtualNodes, ZeroRowsStayOutOfReadoutAfterInputLayer) {
  // A GIN layer on the extended input graph maps each zero virtual row to phi(0),
  // independent of the input nodes; the readout then ignores those rows.
  const UGraph g = path_graph(5);
  const auto plan = cgp::build_plan(g, Scheme::CGP, 1, cache());
  ASSERT_EQ(plan.extended_count, 6u);
  const auto params = cgp::init_params(cgp::LayerKind::GIN, 3, 4, 1, 2);
  Eigen::MatrixXd x = Eigen::MatrixXd::Random(5, 3);
  const auto out = cgp::model_forward(plan, params, x).embeddings;
  const Eigen::MatrixXd phi0 = cgp::gin_layer(Eigen::MatrixXd::Zero(1, 3), UGraph(1), params.layers[0]);
  for (Eigen::Index r = 5; r < out.rows(); ++r)
    EXPECT_LT((out.row(r) - phi0.row(0)).cwiseAbs().maxCoeff(), 1e-12);
  x(0, 0) += 1.0;
  const auto moved = cgp::model_forward(plan, params, x).embeddings;
  EXPECT_EQ(moved.bottomRows(1), out.bottomRows(1));
}

TEST(ExportTemplate, WritesFilesAndManifest) {
  const auto dir = std::filesystem::temp_directory_path() / "cgp_export_test";
  std::filesystem::remove_all(dir);
  const auto plan = cgp::build_plan(path_graph(10), Scheme::CGP, 2, cache());
  const Eigen::MatrixXd x = Eigen::MatrixXd::Ones(10, 2);
  const auto doc = cgp::export_template(plan, dir, &x);
  EXPECT_EQ(doc["scheme"], "CGP");
  EXPECT_EQ(doc["n"], 3);
  EXPECT_EQ(doc["num_nodes"], 10);
  EXPECT_EQ(doc["virtual_node_range"], nlohmann::json::array({10, 24}));
  EXPECT_EQ(cgp::read_edge_list_file((dir / "cayley.edgelist").string()), *plan.cayley);
  EXPECT_EQ(cgp::read_edge_list_file((dir / "input_extended.edgelist").string()), *plan.input_extended);
  std::ifstream in(dir / "features.csv");
  std::stringstream buf;
  buf << in.rdbuf();
  const auto f = cgp::parse_feature_csv(buf.str());
  EXPECT_EQ(f.rows(), 24);
  EXPECT_EQ(f.bottomRows(14).sum(), 0.0);
  EXPECT_TRUE(std::filesystem::exists(dir / "template.json"));
  std::filesystem::remove_all(dir);
}
