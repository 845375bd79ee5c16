// cgp: command-line front end for Cayley graph construction, bottleneck
// diagnostics, template export, the Sum task and preprocessing benchmarks.
//
// Exit codes: 0 success, 1 usage, 2 input error, 3 runtime failure.

#include "svg_plot.hpp"

#include "cgp/cayley.hpp"
#include "cgp/graph.hpp"
#include "cgp/io.hpp"
#include "cgp/nn.hpp"
#include "cgp/propagation.hpp"
#include "cgp/random.hpp"
#include "cgp/spectral.hpp"

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <iomanip>
#include <iostream>
#include <map>
#include <sstream>
#include <thread>

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitInput = 2;
constexpr int kExitRuntime = 3;

constexpr std::size_t kBenchCeiling = 200000;

class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

std::string fnv1a_hex(std::string_view bytes) {
  std::uint64_t h = 0xcbf29ce484222325ull;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ull;
  }
  std::ostringstream os;
  os << std::hex << std::setw(16) << std::setfill('0') << h;
  return os.str();
}

std::string join(const std::vector<std::string>& parts, const std::string& sep) {
  std::string out;
  for (std::size_t i = 0; i < parts.size(); ++i) out += (i ? sep : "") + parts[i];
  return out;
}

/// Everything needed to describe and reproduce one invocation.
struct RunManifest {
  std::string command;
  std::vector<std::string> argv;
  json config = json::object();
  json seeds = json::array();
  json inputs = json::array();
  json outputs = json::array();
  json timings = json::object();
  std::optional<fs::path> path;

  void input(const fs::path& p) {
    inputs.push_back({{"path", p.string()}, {"fnv1a", fnv1a_hex(cgp::read_file(p))}});
  }

  void output(const fs::path& p, std::string_view contents, bool deterministic = true) {
    cgp::write_file_atomic(p, contents);
    outputs.push_back({{"path", p.string()}, {"fnv1a", fnv1a_hex(contents)}, {"deterministic", deterministic}});
  }

  void write(double total_seconds) {
    timings["total_seconds"] = total_seconds;
    const json doc = {{"command", command}, {"argv", argv},       {"config", config},
                      {"seeds", seeds},     {"inputs", inputs},   {"outputs", outputs},
                      {"timings", timings}, {"version", CGP_VERSION}};
    const fs::path where = path ? *path : fs::path(command + ".manifest.json");
    cgp::write_file_atomic(where, doc.dump(2) + "\n");
  }
};

fs::path default_manifest(const fs::path& primary) { return fs::path(primary.string() + ".manifest.json"); }

// ---------------------------------------------------------------------------
// build-cayley

struct BuildCayleyArgs {
  std::optional<std::uint32_t> n;
  std::optional<std::uint64_t> nodes;
  std::string out_dir;
  std::uint64_t max_vertices = cgp::kDefaultCayleyBudget;
};

void cmd_build_cayley(const BuildCayleyArgs& a, RunManifest& m) {
  if (a.n.has_value() == a.nodes.has_value()) throw UsageError("build-cayley: give exactly one of --n or --nodes");
  if (a.nodes && *a.nodes == 0) throw UsageError("build-cayley: --nodes must be positive");
  if (a.n && *a.n < 2) throw UsageError("build-cayley: --n must be at least 2");
  const std::uint32_t n = a.n ? *a.n : cgp::smallest_modulus(*a.nodes);

  fs::path dir = a.out_dir;
  if (dir.empty()) {
    const char* env = std::getenv("CGP_CACHE_DIR");
    dir = env && *env ? fs::path(env) : fs::current_path();
  }
  fs::create_directories(dir);
  const auto t0 = Clock::now();
  const auto cg = cgp::build_cayley(n, a.max_vertices);
  m.timings["build_seconds"] = seconds_since(t0);
  const fs::path file = dir / cgp::cayley_cache_filename(n);
  m.config = {{"n", n}, {"nodes", a.nodes ? json(*a.nodes) : json(nullptr)}, {"out_dir", dir.string()},
              {"max_vertices", a.max_vertices}};
  m.output(file, cgp::emit_edge_list(cg.graph));
  if (!m.path) m.path = default_manifest(file);

  std::cout << "modulus " << n << "\n"
            << "nodes " << cg.graph.node_count() << "\n"
            << "edges " << cg.graph.edge_count() << "\n"
            << "degree " << cg.degree << "\n"
            << "file " << file.string() << "\n";
}

// ---------------------------------------------------------------------------
// analyze

struct AnalyzeArgs {
  std::string graph_file;
  std::optional<std::uint32_t> cayley;
  std::optional<std::size_t> truncate;
  std::string out;
};

json report_json(const cgp::SpectralReport& r) {
  const bool connected = r.components == 1;
  return {
      {"node_count", r.node_count},
      {"edge_count", r.edge_count},
      {"connected", connected},
      {"components", r.components},
      {"has_isolated", r.has_isolated},
      {"spectral_gap", r.spectral_gap},
      {"cheeger_lower", r.cheeger_lower},
      {"cheeger_upper", r.cheeger_upper},
      {"algebraic_connectivity", r.algebraic_connectivity},
      {"diameter", r.diameter ? json(*r.diameter) : json(nullptr)},
      {"r_tot", std::isfinite(r.r_tot) ? json(r.r_tot) : json(nullptr)},
      {"eigenvalues", r.eigenvalues},
  };
}

void cmd_analyze(const AnalyzeArgs& a, RunManifest& m) {
  if (a.graph_file.empty() == !a.cayley.has_value()) {
    throw UsageError("analyze: give exactly one of a graph file or --cayley");
  }
  if (a.truncate && !a.cayley) throw UsageError("analyze: --truncate requires --cayley");
  cgp::UGraph g;
  json source;
  if (a.cayley) {
    if (*a.cayley < 2) throw UsageError("analyze: --cayley must be at least 2");
    const auto cg = cgp::build_cayley(*a.cayley);
    if (a.truncate) {
      if (*a.truncate < 1 || *a.truncate > cg.graph.node_count()) {
        throw UsageError("analyze: --truncate must be in [1, " + std::to_string(cg.graph.node_count()) + "]");
      }
      g = cgp::truncate_bfs(cg, *a.truncate);
    } else {
      g = cg.graph;
    }
    source = {{"cayley", *a.cayley}, {"truncate", a.truncate ? json(*a.truncate) : json(nullptr)}};
  } else {
    m.input(a.graph_file);
    g = cgp::parse_edge_list(cgp::read_file(a.graph_file));
    source = {{"file", a.graph_file}};
  }
  const auto t0 = Clock::now();
  json doc = report_json(cgp::analyze(g));
  m.timings["analyze_seconds"] = seconds_since(t0);
  doc["source"] = source;
  m.config = source;
  m.config["out"] = a.out;
  const std::string text = doc.dump(2) + "\n";
  if (a.out.empty()) {
    std::cout << text;
  } else {
    m.output(a.out, text);
    if (!m.path) m.path = default_manifest(a.out);
  }
}

// ---------------------------------------------------------------------------
// sweep

struct SweepArgs {
  std::size_t v_min = 6;
  std::size_t v_max = 360;
  std::string out;
  std::string plot;
  unsigned threads = 0;
};

void cmd_sweep(const SweepArgs& a, RunManifest& m) {
  if (a.v_min < 2) throw UsageError("sweep: --v-min must be at least 2");
  m.config = {{"v_min", a.v_min}, {"v_max", a.v_max}, {"out", a.out}, {"plot", a.plot}, {"threads", a.threads}};
  const auto t0 = Clock::now();
  const auto rows = cgp::expansion_sweep(a.v_min, a.v_max, a.threads);
  m.timings["sweep_seconds"] = seconds_since(t0);
  m.output(a.out, cgp::sweep_csv(rows));
  if (!m.path) m.path = default_manifest(a.out);

  if (!a.plot.empty()) {
    cgp::tools::Series lower{"cheeger_lower", {}, {}}, upper{"cheeger_upper", {}, {}};
    cgp::tools::PlotSpec spec{"Truncated Cayley graph expansion", "nodes", "Cheeger bound", false, {}};
    for (const auto& r : rows) {
      lower.x.push_back(static_cast<double>(r.v));
      lower.y.push_back(r.cheeger_lower);
      upper.x.push_back(static_cast<double>(r.v));
      upper.y.push_back(r.cheeger_upper);
      if (r.is_complete) spec.markers.push_back(static_cast<double>(r.v));
    }
    m.output(a.plot, cgp::tools::line_chart(spec, {lower, upper}));
  }
  std::size_t complete = 0;
  for (const auto& r : rows) complete += r.is_complete;
  std::cout << rows.size() << " rows, " << complete << " complete sizes, written to " << a.out << "\n";
}

// ---------------------------------------------------------------------------
// rewire

struct RewireArgs {
  std::string dataset;
  std::string scheme = "CGP";
  std::size_t layers = 2;
  std::string out_dir;
  std::string init = "zeros";
  std::uint64_t seed = 0;
};

/// Dataset manifest: {"graphs": [{"name": ..., "edgelist": ..., "features": optional}]},
/// paths relative to the manifest file.
int cmd_rewire(const RewireArgs& a, RunManifest& m) {
  cgp::Scheme scheme;
  try {
    scheme = cgp::parse_scheme(a.scheme);
  } catch (const std::invalid_argument& e) {
    throw UsageError(e.what());
  }
  if (a.layers < 1) throw UsageError("rewire: --layers must be at least 1");
  if (a.init != "zeros" && a.init != "gaussian") throw UsageError("rewire: --init must be zeros or gaussian");
  m.config = {{"dataset", a.dataset}, {"scheme", a.scheme}, {"layers", a.layers},
              {"out_dir", a.out_dir}, {"init", a.init}};
  m.seeds = {a.seed};
  m.input(a.dataset);

  json dataset;
  try {
    dataset = json::parse(cgp::read_file(a.dataset));
  } catch (const json::parse_error& e) {
    throw cgp::InputError("dataset manifest '" + a.dataset + "': " + e.what());
  }
  if (!dataset.is_object() || !dataset.contains("graphs") || !dataset["graphs"].is_array()) {
    throw cgp::InputError("dataset manifest '" + a.dataset + "': expected an object with a \"graphs\" array");
  }
  const fs::path base = fs::path(a.dataset).parent_path();
  const fs::path out_dir = a.out_dir;
  fs::create_directories(out_dir);

  json summary = json::array();
  std::size_t failed = 0, input_failures = 0;
  const auto t0 = Clock::now();
  std::size_t index = 0;
  for (const auto& entry : dataset["graphs"]) {
    const std::string name = entry.value("name", "graph" + std::to_string(index));
    json row = {{"name", name}};
    try {
      if (!entry.contains("edgelist")) throw cgp::InputError("missing \"edgelist\"");
      const fs::path edges = base / entry["edgelist"].get<std::string>();
      m.input(edges);
      const cgp::UGraph g = cgp::parse_edge_list(cgp::read_file(edges));
      std::optional<cgp::FeatureMatrix> x;
      if (entry.contains("features")) {
        const fs::path fpath = base / entry["features"].get<std::string>();
        m.input(fpath);
        x = cgp::parse_feature_csv(cgp::read_file(fpath));
        if (static_cast<std::size_t>(x->rows()) != g.node_count()) {
          throw cgp::InputError("features have " + std::to_string(x->rows()) + " rows for " +
                                std::to_string(g.node_count()) + " nodes");
        }
      }
      cgp::VirtualInit init;
      if (a.init == "gaussian") init = {cgp::VirtualInit::Kind::Gaussian, cgp::derive_seed(a.seed, index)};
      const auto plan = cgp::build_plan(g, scheme, a.layers, cgp::CayleyCache::global(), init);
      const fs::path dir = out_dir / name;
      const json doc = cgp::export_template(plan, dir, x ? &*x : nullptr);
      for (const auto& [key, file] : doc["files"].items()) {
        if (file.is_null()) continue;
        const fs::path p = dir / file.get<std::string>();
        m.outputs.push_back({{"path", p.string()}, {"fnv1a", fnv1a_hex(cgp::read_file(p))}, {"deterministic", true}});
      }
      const fs::path tj = dir / "template.json";
      m.outputs.push_back({{"path", tj.string()}, {"fnv1a", fnv1a_hex(cgp::read_file(tj))}, {"deterministic", true}});
      row["status"] = "ok";
      row["num_nodes"] = plan.original_count;
      row["extended_count"] = plan.extended_count;
      row["virtual_nodes"] = plan.virtual_count();
      row["n"] = plan.modulus ? json(*plan.modulus) : json(nullptr);
    } catch (const cgp::InputError& e) {
      ++failed;
      ++input_failures;
      row["status"] = "failed";
      row["error"] = e.what();
    } catch (const std::exception& e) {
      ++failed;
      row["status"] = "failed";
      row["error"] = e.what();
    }
    summary.push_back(row);
    ++index;
  }
  m.timings["rewire_seconds"] = seconds_since(t0);
  m.output(out_dir / "summary.json", json({{"scheme", a.scheme}, {"graphs", summary}}).dump(2) + "\n");
  if (!m.path) m.path = out_dir / "run.manifest.json";

  std::cout << std::left << std::setw(24) << "name" << std::setw(8) << "nodes" << std::setw(10) << "extended"
            << "virtual\n";
  for (const auto& row : summary) {
    if (row["status"] == "ok") {
      std::cout << std::setw(24) << row["name"].get<std::string>() << std::setw(8) << row["num_nodes"].get<std::size_t>()
                << std::setw(10) << row["extended_count"].get<std::size_t>() << row["virtual_nodes"].get<std::size_t>()
                << "\n";
    } else {
      std::cout << std::setw(24) << row["name"].get<std::string>() << "FAILED: " << row["error"].get<std::string>()
                << "\n";
    }
  }
  if (failed == 0) return kExitOk;
  std::cerr << failed << " of " << summary.size() << " graphs failed\n";
  return failed == input_failures ? kExitInput : kExitRuntime;
}

// ---------------------------------------------------------------------------
// train

struct TrainArgs {
  std::vector<std::string> structures = {"Empty", "Cayley24", "Star", "BA"};
  std::vector<std::size_t> train_sizes = {20, 40, 60, 100, 200, 300, 400, 500, 1000, 2000, 4000};
  std::size_t runs = 5;
  std::size_t test_size = 1000;
  std::size_t epochs = 100;
  std::size_t batch_size = 32;
  double lr = 1e-3;
  std::size_t hidden = 64;
  std::size_t layers = 1;
  std::string scheme = "Base";
  std::string layer = "GIN";
  std::size_t nodes = 20;
  std::size_t feature_dim = 128;
  std::uint64_t seed = 0;
  unsigned threads = 0;
  std::string out;
  std::string summary;
  std::string plot;
};

std::string summary_csv(const std::vector<cgp::CurveRow>& rows) {
  std::map<std::pair<std::string, std::size_t>, std::vector<const cgp::CurveRow*>> groups;
  std::vector<std::pair<std::string, std::size_t>> order;
  for (const auto& r : rows) {
    auto key = std::make_pair(r.structure, r.train_size);
    if (!groups.count(key)) order.push_back(key);
    groups[key].push_back(&r);
  }
  std::ostringstream os;
  os << std::setprecision(17);
  os << "structure,train_size,runs,failed,mean_train_error,std_train_error,mean_test_error,std_test_error\n";
  for (const auto& key : order) {
    std::vector<double> tr, te;
    std::size_t failed = 0;
    for (const auto* r : groups[key]) {
      if (r->failed) {
        ++failed;
        continue;
      }
      tr.push_back(r->train_error);
      te.push_back(r->test_error);
    }
    auto stats = [](const std::vector<double>& v) -> std::pair<double, double> {
      if (v.empty()) return {std::nan(""), std::nan("")};
      double mean = 0;
      for (double x : v) mean += x;
      mean /= static_cast<double>(v.size());
      double ss = 0;
      for (double x : v) ss += (x - mean) * (x - mean);
      return {mean, v.size() > 1 ? std::sqrt(ss / static_cast<double>(v.size() - 1)) : 0.0};
    };
    const auto [mtr, str] = stats(tr);
    const auto [mte, ste] = stats(te);
    os << key.first << "," << key.second << "," << groups[key].size() << "," << failed << "," << mtr << ","
       << str << "," << mte << "," << ste << "\n";
  }
  return os.str();
}

void cmd_train(const TrainArgs& a, RunManifest& m) {
  if (a.train_sizes.empty() || a.structures.empty() || a.runs == 0) {
    throw UsageError("train: need at least one structure, train size and run");
  }
  if (a.test_size == 0 || a.epochs == 0 || a.batch_size == 0 || a.hidden == 0 || a.layers == 0 ||
      !(a.lr > 0.0)) {
    throw UsageError("train: sizes, epochs, batch size, hidden dim, layers and lr must be positive");
  }
  std::vector<cgp::SumStructure> structures;
  cgp::Scheme scheme;
  cgp::LayerKind layer;
  try {
    for (const auto& s : a.structures) structures.push_back(cgp::parse_sum_structure(s));
    scheme = cgp::parse_scheme(a.scheme);
    layer = cgp::parse_layer_kind(a.layer);
  } catch (const std::invalid_argument& e) {
    throw UsageError(e.what());
  }
  std::vector<std::uint64_t> seeds(a.runs);
  for (std::size_t i = 0; i < a.runs; ++i) seeds[i] = a.seed + i;
  const std::size_t max_train = *std::max_element(a.train_sizes.begin(), a.train_sizes.end());

  m.config = {{"structures", a.structures}, {"train_sizes", a.train_sizes}, {"runs", a.runs},
              {"test_size", a.test_size},   {"epochs", a.epochs},           {"batch_size", a.batch_size},
              {"lr", a.lr},                 {"hidden", a.hidden},           {"layers", a.layers},
              {"scheme", a.scheme},         {"layer", a.layer},             {"nodes", a.nodes},
              {"feature_dim", a.feature_dim}, {"threads", a.threads}};
  m.seeds = {{"data", a.seed}, {"runs", seeds}};

  cgp::TrainConfig cfg;
  cfg.lr = a.lr;
  cfg.epochs = a.epochs;
  cfg.batch_size = a.batch_size;
  cfg.hidden_dim = a.hidden;
  cfg.num_layers = a.layers;
  cfg.scheme = scheme;
  cfg.layer = layer;
  const unsigned threads = a.threads ? a.threads : std::max(1u, std::thread::hardware_concurrency());

  cgp::SumTaskOptions opts;
  opts.node_count = a.nodes;
  opts.feature_dim = a.feature_dim;
  const std::size_t layers = a.layers;
  auto builder = [scheme, layers](const cgp::UGraph& g) {
    return cgp::build_plan(g, scheme, layers, cgp::CayleyCache::global());
  };

  std::vector<cgp::CurveRow> all;
  const auto t0 = Clock::now();
  for (auto s : structures) {
    const auto ts = Clock::now();
    const auto data = cgp::gen_sum_task(s, max_train + a.test_size, a.seed, opts);
    const auto rows = cgp::train(builder, data, cfg, a.train_sizes, seeds, a.test_size, threads);
    m.timings[std::string(cgp::to_string(s)) + "_seconds"] = seconds_since(ts);
    all.insert(all.end(), rows.begin(), rows.end());
    std::cerr << cgp::to_string(s) << " done (" << rows.size() << " runs)\n";
  }
  m.timings["train_seconds"] = seconds_since(t0);

  m.output(a.out, cgp::curve_csv(all));
  const std::string summary_path =
      a.summary.empty() ? (fs::path(a.out).replace_extension("").string() + "_summary.csv") : a.summary;
  const std::string summary = summary_csv(all);
  m.output(summary_path, summary);
  if (!m.path) m.path = default_manifest(a.out);

  std::size_t failed = 0;
  for (const auto& r : all) failed += r.failed;
  if (failed) std::cerr << failed << " runs diverged and are recorded as failed\n";

  if (!a.plot.empty()) {
    std::map<std::string, cgp::tools::Series> by_structure;
    std::istringstream in(summary);
    std::string line;
    std::getline(in, line);
    while (std::getline(in, line)) {
      std::vector<std::string> f;
      std::stringstream ls(line);
      for (std::string cell; std::getline(ls, cell, ',');) f.push_back(cell);
      auto& s = by_structure[f[0]];
      s.label = f[0];
      s.x.push_back(std::stod(f[1]));
      s.y.push_back(std::stod(f[6]));
    }
    std::vector<cgp::tools::Series> series;
    for (const auto& name : a.structures)
      if (by_structure.count(name)) series.push_back(by_structure[name]);
    cgp::tools::PlotSpec spec{"Sum task learning curves", "train size", "mean test error", true, {}};
    m.output(a.plot, cgp::tools::line_chart(spec, series));
  }
  std::cout << summary;
}

// ---------------------------------------------------------------------------
// bench

struct BenchArgs {
  std::size_t n_max = 10000;
  std::vector<std::size_t> sizes;
  std::size_t layers = 2;
  std::uint64_t seed = 0;
  std::string out;
};

void cmd_bench(const BenchArgs& a, RunManifest& m) {
  if (a.n_max < 2 || a.n_max > kBenchCeiling) {
    throw UsageError("bench: --n-max must be in [2, " + std::to_string(kBenchCeiling) + "]");
  }
  std::vector<std::size_t> sizes = a.sizes;
  if (sizes.empty()) {
    for (std::size_t n : {100, 200, 500, 1000, 2000, 5000, 10000, 20000, 50000, 100000, 200000})
      if (n <= a.n_max) sizes.push_back(n);
    if (sizes.empty() || sizes.back() != a.n_max) sizes.push_back(a.n_max);
  }
  for (auto n : sizes)
    if (n < 2 || n > a.n_max) throw UsageError("bench: sizes must lie in [2, --n-max]");

  m.config = {{"n_max", a.n_max}, {"sizes", sizes}, {"layers", a.layers}, {"out", a.out}};
  m.seeds = {a.seed};

  std::ostringstream csv;
  csv << std::setprecision(9) << "n,seconds\n";
  json cold_times = json::object(), warm_times = json::object();
  std::cout << std::left << std::setw(10) << "n" << std::setw(14) << "cold_s" << "cached_s\n";
  for (std::size_t n : sizes) {
    cgp::GraphParams p;
    p.node_count = n;
    p.edge_probability = std::min(1.0, 5.0 * std::log(static_cast<double>(n)) / static_cast<double>(n));
    const auto g = cgp::gen_graph(cgp::GraphKind::ErdosRenyi, p, cgp::derive_seed(a.seed, n));
    cgp::CayleyCache cache;
    auto t0 = Clock::now();
    cgp::build_plan(g, cgp::Scheme::CGP, a.layers, cache);
    const double cold = seconds_since(t0);
    t0 = Clock::now();
    cgp::build_plan(g, cgp::Scheme::CGP, a.layers, cache);
    const double warm = seconds_since(t0);
    csv << n << "," << warm << "\n";
    cold_times[std::to_string(n)] = cold;
    warm_times[std::to_string(n)] = warm;
    std::cout << std::setw(10) << n << std::setw(14) << cold << warm << "\n";
  }
  m.timings["cold_seconds"] = cold_times;
  m.timings["cached_seconds"] = warm_times;
  m.output(a.out, csv.str(), false);
  if (!m.path) m.path = default_manifest(a.out);
}

// ---------------------------------------------------------------------------

int run_cli(std::vector<std::string> args);

int cmd_replay(const std::string& manifest_path) {
  json doc;
  try {
    doc = json::parse(cgp::read_file(manifest_path));
  } catch (const json::parse_error& e) {
    throw cgp::InputError("manifest '" + manifest_path + "': " + e.what());
  }
  if (!doc.contains("argv") || !doc["argv"].is_array()) throw cgp::InputError("manifest has no argv");
  const auto argv = doc["argv"].get<std::vector<std::string>>();
  if (!argv.empty() && argv.front() == "replay") throw UsageError("replay: refusing to replay a replay");
  std::cerr << "replaying: cgp " << join(argv, " ") << "\n";
  const int code = run_cli(argv);
  if (code != kExitOk) return code;

  std::size_t identical = 0, differ = 0;
  for (const auto& out : doc.value("outputs", json::array())) {
    const std::string path = out["path"];
    const bool deterministic = out.value("deterministic", true);
    const std::string now = fs::exists(path) ? fnv1a_hex(cgp::read_file(path)) : "missing";
    const bool same = now == out["fnv1a"];
    if (!deterministic) {
      std::cout << "timing  " << path << "\n";
    } else if (same) {
      ++identical;
      std::cout << "same    " << path << "\n";
    } else {
      ++differ;
      std::cout << "DIFFERS " << path << "\n";
    }
  }
  std::cout << identical << " outputs identical, " << differ << " differ\n";
  return differ ? kExitRuntime : kExitOk;
}

int run_cli(std::vector<std::string> args) {
  CLI::App app{"Cayley graph propagation toolkit"};
  app.set_version_flag("--version", CGP_VERSION);
  app.require_subcommand(1);

  std::string manifest_path;
  std::uint64_t seed = 0;
  auto common = [&](CLI::App* sub) {
    sub->add_option("--manifest", manifest_path, "where to write the run manifest");
    sub->add_option("--seed", seed, "64-bit seed for every random stream");
  };

  BuildCayleyArgs bc;
  auto* build = app.add_subcommand("build-cayley", "build Cay(SL(2,Z_n)) and write its edge list");
  build->add_option("--n", bc.n, "modulus");
  build->add_option("--nodes", bc.nodes, "pick the smallest modulus whose group has at least this many elements");
  build->add_option("--out-dir", bc.out_dir, "output directory (default $CGP_CACHE_DIR or .)");
  build->add_option("--max-vertices", bc.max_vertices, "refuse groups larger than this");
  common(build);

  AnalyzeArgs an;
  auto* analyze = app.add_subcommand("analyze", "spectral and bottleneck report as JSON");
  analyze->add_option("graph", an.graph_file, "edge-list file");
  analyze->add_option("--cayley", an.cayley, "analyse Cay(SL(2,Z_n)) instead of a file");
  analyze->add_option("--truncate", an.truncate, "keep the first v BFS vertices of the Cayley graph");
  analyze->add_option("--out", an.out, "write JSON here instead of stdout");
  common(analyze);

  SweepArgs sw;
  auto* sweep = app.add_subcommand("sweep", "expansion of truncated Cayley graphs over a node range");
  sweep->add_option("--v-min", sw.v_min, "smallest node count")->capture_default_str();
  sweep->add_option("--v-max", sw.v_max, "largest node count")->capture_default_str();
  sweep->add_option("--out", sw.out, "CSV output")->required();
  sweep->add_option("--plot", sw.plot, "optional SVG chart");
  sweep->add_option("--threads", sw.threads, "worker threads (0: all cores)");
  common(sweep);

  RewireArgs rw;
  auto* rewire = app.add_subcommand("rewire", "export per-graph propagation templates for a dataset");
  rewire->add_option("dataset", rw.dataset, "dataset manifest JSON")->required();
  rewire->add_option("--scheme", rw.scheme, "Base, MasterNode, FALast, EGP, CGP, CGPLast, CGPEvery")->capture_default_str();
  rewire->add_option("--layers", rw.layers, "number of message-passing layers")->capture_default_str();
  rewire->add_option("--out-dir", rw.out_dir, "output directory")->required();
  rewire->add_option("--init", rw.init, "virtual node features: zeros or gaussian")->capture_default_str();
  common(rewire);

  TrainArgs tr;
  auto* train = app.add_subcommand("train", "Sum task learning curves");
  train->add_option("--structures", tr.structures, "Empty, Cayley24, Star, BA, GNP")->delimiter(',')->capture_default_str();
  train->add_option("--train-sizes", tr.train_sizes, "training set sizes")->delimiter(',')->capture_default_str();
  train->add_option("--runs,--seeds", tr.runs, "runs per size; run i uses seed + i")->capture_default_str();
  train->add_option("--test-size", tr.test_size)->capture_default_str();
  train->add_option("--epochs", tr.epochs)->capture_default_str();
  train->add_option("--batch-size", tr.batch_size)->capture_default_str();
  train->add_option("--lr", tr.lr)->capture_default_str();
  train->add_option("--hidden", tr.hidden)->capture_default_str();
  train->add_option("--layers", tr.layers)->capture_default_str();
  train->add_option("--scheme", tr.scheme)->capture_default_str();
  train->add_option("--layer", tr.layer, "GIN or GCN")->capture_default_str();
  train->add_option("--nodes", tr.nodes, "nodes per graph (Cayley24 always has 24)")->capture_default_str();
  train->add_option("--feature-dim", tr.feature_dim)->capture_default_str();
  train->add_option("--threads", tr.threads, "worker threads (0: all cores)");
  train->add_option("--out", tr.out, "learning-curve CSV")->required();
  train->add_option("--summary", tr.summary, "mean/std CSV (default <out>_summary.csv)");
  train->add_option("--plot", tr.plot, "optional SVG chart");
  common(train);

  BenchArgs be;
  auto* bench = app.add_subcommand("bench", "CGP template construction time on Erdos-Renyi graphs");
  bench->add_option("--n-max", be.n_max, "largest graph")->capture_default_str();
  bench->add_option("--sizes", be.sizes, "explicit sizes")->delimiter(',');
  bench->add_option("--layers", be.layers)->capture_default_str();
  bench->add_option("--out", be.out, "CSV output")->required();
  common(bench);

  std::string replay_path;
  auto* replay = app.add_subcommand("replay", "re-run a manifest and compare outputs");
  replay->add_option("manifest", replay_path)->required();

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitUsage;
  }

  RunManifest manifest;
  manifest.argv = args;
  if (!manifest_path.empty()) manifest.path = manifest_path;
  const auto t0 = Clock::now();
  int code = kExitOk;
  try {
    if (*replay) return cmd_replay(replay_path);
    if (*build) {
      manifest.command = "build-cayley";
      cmd_build_cayley(bc, manifest);
    } else if (*analyze) {
      manifest.command = "analyze";
      cmd_analyze(an, manifest);
    } else if (*sweep) {
      manifest.command = "sweep";
      cmd_sweep(sw, manifest);
    } else if (*rewire) {
      manifest.command = "rewire";
      rw.seed = seed;
      code = cmd_rewire(rw, manifest);
    } else if (*train) {
      manifest.command = "train";
      tr.seed = seed;
      cmd_train(tr, manifest);
    } else if (*bench) {
      manifest.command = "bench";
      be.seed = seed;
      cmd_bench(be, manifest);
    }
    if (manifest.seeds.empty()) manifest.seeds = {seed};
    manifest.write(seconds_since(t0));
  } catch (const UsageError& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const cgp::InputError& e) {
    std::cerr << "input error: " << e.what() << "\n";
    return kExitInput;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitRuntime;
  }
  return code;
}

}  // namespace

int main(int argc, char** argv) {
  return run_cli(std::vector<std::string>(argv + 1, argv + argc));
}
