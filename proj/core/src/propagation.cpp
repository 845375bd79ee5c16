#include "cgp/propagation.hpp"

#include "cgp/io.hpp"
#include "cgp/random.hpp"

#include <stdexcept>
#include <string>

namespace cgp {

Scheme parse_scheme(std::string_view name) {
  if (name == "Base") return Scheme::Base;
  if (name == "MasterNode" || name == "Master") return Scheme::MasterNode;
  if (name == "FALast" || name == "FA") return Scheme::FALast;
  if (name == "EGP") return Scheme::EGP;
  if (name == "CGP") return Scheme::CGP;
  if (name == "CGPLast") return Scheme::CGPLast;
  if (name == "CGPEvery") return Scheme::CGPEvery;
  throw std::invalid_argument("unsupported scheme '" + std::string(name) + "'");
}

std::string_view to_string(Scheme scheme) {
  switch (scheme) {
    case Scheme::Base: return "Base";
    case Scheme::MasterNode: return "MasterNode";
    case Scheme::FALast: return "FALast";
    case Scheme::EGP: return "EGP";
    case Scheme::CGP: return "CGP";
    case Scheme::CGPLast: return "CGPLast";
    case Scheme::CGPEvery: return "CGPEvery";
  }
  return "?";
}

const UGraph& PropagationPlan::layer_graph(std::size_t layer) const {
  switch (schedule.at(layer)) {
    case LayerGraph::InputExtended: return *input_extended;
    case LayerGraph::Cayley: return *cayley;
    case LayerGraph::FullyAdjacent: return *fully_adjacent;
  }
  throw std::logic_error("PropagationPlan: bad layer graph");
}

FeatureMatrix extend_features(const FeatureMatrix& x, std::size_t m, const VirtualInit& init) {
  const auto rows = static_cast<std::size_t>(x.rows());
  if (m < rows) {
    throw std::invalid_argument("extend_features: m=" + std::to_string(m) + " < rows=" +
                                std::to_string(rows));
  }
  FeatureMatrix out(static_cast<Eigen::Index>(m), x.cols());
  out.topRows(x.rows()) = x;
  const auto pad = static_cast<Eigen::Index>(m - rows);
  if (init.kind == VirtualInit::Kind::Zeros) {
    out.bottomRows(pad).setZero();
  } else {
    Rng rng(init.seed);
    std::normal_distribution<double> normal(0.0, 1.0);
    for (Eigen::Index r = x.rows(); r < out.rows(); ++r)
      for (Eigen::Index c = 0; c < out.cols(); ++c) out(r, c) = normal(rng);
  }
  return out;
}

UGraph extend_input_adjacency(const UGraph& g, std::size_t m) {
  if (m < g.node_count()) {
    throw std::invalid_argument("extend_input_adjacency: m=" + std::to_string(m) +
                                " < node count " + std::to_string(g.node_count()));
  }
  std::vector<NodeId> loops(g.self_loops());
  for (std::size_t u = g.node_count(); u < m; ++u) loops.push_back(static_cast<NodeId>(u));
  return UGraph(m, g.edges(), std::move(loops));
}

namespace {

UGraph with_master_node(const UGraph& g) {
  std::vector<Edge> edges(g.edges());
  const auto master = static_cast<NodeId>(g.node_count());
  for (NodeId u = 0; u < master; ++u) edges.emplace_back(u, master);
  return UGraph(g.node_count() + 1, std::move(edges), g.self_loops());
}

UGraph induced_prefix(const UGraph& g, std::size_t v) {
  std::vector<Edge> kept;
  for (const auto& [a, b] : g.edges()) {
    if (a < v && b < v) kept.emplace_back(a, b);
  }
  return UGraph(v, std::move(kept));
}

}  // namespace

PropagationPlan build_plan(const UGraph& g, Scheme scheme, std::size_t num_layers,
                           CayleyCache& cache, VirtualInit init) {
  if (num_layers < 1) throw std::invalid_argument("build_plan: num_layers must be at least 1");
  if (g.node_count() < 1) throw std::invalid_argument("build_plan: input graph is empty");

  PropagationPlan plan;
  plan.scheme = scheme;
  plan.original_count = g.node_count();
  plan.virtual_init = init;
  plan.schedule.assign(num_layers, LayerGraph::InputExtended);
  const std::size_t v = g.node_count();

  switch (scheme) {
    case Scheme::Base:
      plan.extended_count = v;
      plan.input_extended = std::make_shared<const UGraph>(g);
      break;
    case Scheme::MasterNode:
      plan.extended_count = v + 1;
      plan.input_extended = std::make_shared<const UGraph>(with_master_node(g));
      plan.virtual_init = {};
      break;
    case Scheme::FALast:
      plan.extended_count = v;
      plan.input_extended = std::make_shared<const UGraph>(g);
      plan.fully_adjacent = std::make_shared<const UGraph>(complete_graph(v));
      plan.schedule.back() = LayerGraph::FullyAdjacent;
      break;
    case Scheme::EGP: {
      const std::uint32_t n = smallest_modulus(v);
      const auto full = cache.graph(n);
      plan.modulus = n;
      plan.extended_count = v;
      plan.input_extended = std::make_shared<const UGraph>(g);
      plan.cayley = full->node_count() == v ? full
                                             : std::make_shared<const UGraph>(induced_prefix(*full, v));
      for (std::size_t l = 1; l < num_layers; l += 2) plan.schedule[l] = LayerGraph::Cayley;
      break;
    }
    case Scheme::CGP:
    case Scheme::CGPLast:
    case Scheme::CGPEvery: {
      const std::uint32_t n = smallest_modulus(v);
      plan.modulus = n;
      plan.cayley = cache.graph(n);
      plan.extended_count = plan.cayley->node_count();
      plan.input_extended = plan.extended_count == v && g.self_loops().empty()
                                ? std::make_shared<const UGraph>(g)
                                : std::make_shared<const UGraph>(
                                      extend_input_adjacency(g, plan.extended_count));
      if (scheme == Scheme::CGP) {
        for (std::size_t l = 1; l < num_layers; l += 2) plan.schedule[l] = LayerGraph::Cayley;
      } else if (scheme == Scheme::CGPLast) {
        plan.schedule.back() = LayerGraph::Cayley;
      } else {
        plan.schedule.assign(num_layers, LayerGraph::Cayley);
      }
      break;
    }
  }
  return plan;
}

nlohmann::json export_template(const PropagationPlan& plan, const std::filesystem::path& dir,
                               const FeatureMatrix* features) {
  std::filesystem::create_directories(dir);
  nlohmann::json files;
  write_file_atomic(dir / "input_extended.edgelist", emit_edge_list(*plan.input_extended));
  files["input_extended"] = "input_extended.edgelist";
  if (plan.cayley) {
    write_file_atomic(dir / "cayley.edgelist", emit_edge_list(*plan.cayley));
    files["cayley"] = "cayley.edgelist";
  } else {
    files["cayley"] = nullptr;
  }
  if (features) {
    write_file_atomic(dir / "features.csv",
                      emit_feature_csv(extend_features(*features, plan.extended_count,
                                                       plan.virtual_init)));
    files["features"] = "features.csv";
  }
  nlohmann::json schedule = nlohmann::json::array();
  for (auto layer : plan.schedule) {
    schedule.push_back(layer == LayerGraph::InputExtended ? "input_extended"
                       : layer == LayerGraph::Cayley      ? "cayley"
                                                          : "fully_adjacent");
  }
  nlohmann::json doc = {
      {"scheme", std::string(to_string(plan.scheme))},
      {"n", plan.modulus ? nlohmann::json(*plan.modulus) : nlohmann::json(nullptr)},
      {"num_nodes", plan.original_count},
      {"extended_count", plan.extended_count},
      {"files", files},
      {"virtual_node_range", {plan.original_count, plan.extended_count}},
      {"schedule", schedule},
  };
  write_file_atomic(dir / "template.json", doc.dump(2) + "\n");
  return doc;
}

}  // namespace cgp
