#include "wps/cli.hpp"

#include <algorithm>
#include <atomic>
#include <cctype>
#include <chrono>
#include <optional>
#include <sstream>

#include <CLI11.hpp>

#include "format.hpp"
#include "wps/cluster.hpp"
#include "wps/datasets.hpp"
#include "wps/error.hpp"
#include "wps/finsler.hpp"
#include "wps/io.hpp"
#include "wps/preprocess.hpp"
#include "wps/scaling_metrics.hpp"

#ifndef WPS_VERSION
#define WPS_VERSION "0.0.0"
#endif

namespace wps::cli {
namespace {

constexpr const char* kTool = "wps";

// Bad flag values detected before any work starts; maps to exit code 2.
class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

template <class F>
void check(F&& validate) {
  try {
    validate();
  } catch (const InvalidArgument& e) {
    throw UsageError(e.what());
  }
}

Weights parse_space(const std::string& text) {
  std::vector<int> q;
  std::string token;
  for (char c : text + ",") {
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '-') {
      token += c;
    } else if (!token.empty()) {
      q.push_back(std::stoi(token));
      token.clear();
    }
  }
  try {
    return Weights(std::move(q));
  } catch (const Error& e) {
    throw UsageError("--space: " + std::string(e.what()));
  }
}

std::vector<std::string> split_list(const std::string& text) {
  std::vector<std::string> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

struct Context {
  std::string command;
  Json config = Json::object();
  std::ostream& out;
  std::ostream& err;

  Json meta() const { return {{"tool", kTool}, {"version", WPS_VERSION}, {"command", command}, {"config", config}}; }

  std::vector<std::string> comments() const {
    return {std::string("tool: ") + kTool + " " + WPS_VERSION, "command: " + command, "config: " + config.dump()};
  }

  void log_config(unsigned threads) const {
    err << kTool << " " << command << ": config " << config.dump() << " threads=" << threads << "\n";
  }

  void emit(const std::string& path, const std::string& content) const {
    if (path.empty()) {
      out << content;
    } else {
      write_file_atomic(path, content);
    }
  }
};

const std::vector<std::string> kMetrics = {"chord", "dissimilarity", "finsler", "rational-dissimilarity",
                                           "rational-finsler"};

bool rational_metric(const std::string& m) { return m.starts_with("rational-"); }

struct MetricFlags {
  std::string metric = "finsler";
  GeodesicOptions geo;
  DissimilarityOptions dis;
  bool raw = false;
  bool one_sided = false;
  RationalScanOptions rat;
  bool positive_only = false;

  void add(CLI::App* app, const std::string& seed_flag, bool with_metric = true) {
    if (with_metric) app->add_option("--metric", metric, "distance")->check(CLI::IsMember(kMetrics))->capture_default_str();
    app->add_option("--segments", geo.segments, "path segments M")->capture_default_str();
    app->add_option("--iters", geo.max_iters, "descent iterations per start")->capture_default_str();
    app->add_option("--step", geo.step, "initial descent step")->capture_default_str();
    app->add_option("--tol", geo.tol, "energy tolerance")->capture_default_str();
    app->add_option("--multistarts", geo.multistarts, "optimizer starts")->capture_default_str();
    app->add_option(seed_flag, geo.seed, "optimizer perturbation seed")->capture_default_str();
    app->add_option("--r-min", dis.r_min, "dissimilarity radial grid lower bound")->capture_default_str();
    app->add_option("--r-max", dis.r_max, "dissimilarity radial grid upper bound")->capture_default_str();
    app->add_option("--r-count", dis.r_count, "dissimilarity radial grid size")->capture_default_str();
    app->add_option("--angles", dis.angle_grid_count, "dissimilarity angle grid size")->capture_default_str();
    app->add_option("--refine-iters", dis.refine_iters, "Nelder-Mead iterations")->capture_default_str();
    app->add_flag("--raw", raw, "dissimilarity on raw representatives");
    app->add_flag("--one-sided", one_sided, "dissimilarity without symmetrization");
    app->add_option("--height-bound", rat.height_bound, "rational scan height bound H")->capture_default_str();
    app->add_flag("--positive-only", positive_only, "rational scan without negative scalars");
  }

  void finalize() {
    dis.normalize_inputs = !raw;
    dis.symmetric = !one_sided;
    rat.include_negative = !positive_only;
    check([&] {
      geo.validate();
      dis.validate();
      rat.validate();
    });
  }

  Json config() const {
    Json j{{"metric", metric}};
    if (metric == "finsler" || metric == "rational-finsler") {
      j["segments"] = geo.segments;
      j["iters"] = geo.max_iters;
      j["step"] = geo.step;
      j["tol"] = geo.tol;
      j["multistarts"] = geo.multistarts;
      j["optimizer_seed"] = geo.seed;
    } else if (metric == "dissimilarity") {
      j["normalize_inputs"] = dis.normalize_inputs;
      j["symmetric"] = dis.symmetric;
      j["r_min"] = dis.r_min;
      j["r_max"] = dis.r_max;
      j["r_count"] = dis.r_count;
      j["angles"] = dis.angle_grid_count;
      j["refine_iters"] = dis.refine_iters;
    } else if (metric == "rational-dissimilarity") {
      j["height_bound"] = rat.height_bound;
      j["include_negative"] = rat.include_negative;
    }
    return j;
  }

  // The returned oracle references `set`.
  PairDistance oracle(const PointSet& set, const std::string& name) const {
    if (rational_metric(name) != set.rational())
      throw PreconditionError("metric '" + name + "' needs " + (rational_metric(name) ? "rational" : "complex") +
                              " points");
    if (name == "chord") {
      const auto& p = set.complex_points();
      return [&p](std::size_t i, std::size_t j) { return chord_distance(p[i], p[j]); };
    }
    if (name == "dissimilarity") {
      const auto& p = set.complex_points();
      return [&p, o = dis](std::size_t i, std::size_t j) { return dissimilarity(p[i], p[j], o); };
    }
    if (name == "finsler") {
      const auto& p = set.complex_points();
      return [&p, o = geo](std::size_t i, std::size_t j) { return geodesic_distance(p[i], p[j], o).distance; };
    }
    const auto& p = set.rational_points();
    if (name == "rational-dissimilarity")
      return [&p, o = rat](std::size_t i, std::size_t j) { return dissimilarity_rational(p[i], p[j], o); };
    return [&p, o = geo](std::size_t i, std::size_t j) { return geodesic_distance_rational(p[i], p[j], o).distance; };
  }
};

void require_index(std::size_t i, const PointSet& set, const char* flag) {
  if (i >= set.size())
    throw InvalidArgument(std::string(flag) + " = " + std::to_string(i) + " is out of range for " +
                          std::to_string(set.size()) + " points");
}

// ---- gen ----------------------------------------------------------------

struct GenFlags {
  std::string kind = "synthetic";
  std::string space = "2,4,6,10";
  SyntheticOptions syn;
  ModuliOptions mod;
  std::string format;
  std::string out_path;
};

void run_gen(Context& ctx, GenFlags& f) {
  const bool synthetic = f.kind == "synthetic";
  const Weights q = synthetic ? parse_space(f.space) : Weights{2, 4, 6, 10};
  check([&] { synthetic ? f.syn.validate() : f.mod.validate(); });
  const bool csv = f.format.empty() ? format_for(f.out_path) == FileFormat::csv : f.format == "csv";

  ctx.config = {{"kind", f.kind}, {"space", q.values()}, {"format", csv ? "csv" : "json"}, {"out", f.out_path}};
  if (synthetic) {
    ctx.config.update({{"clusters", f.syn.n_clusters},
                       {"per_cluster", f.syn.per_cluster},
                       {"spread", f.syn.spread},
                       {"min_separation", f.syn.min_separation},
                       {"seed", f.syn.seed}});
  } else {
    ctx.config.update({{"count", f.mod.count}, {"height_bound", f.mod.height_bound}, {"seed", f.mod.seed}});
  }
  ctx.log_config(1);

  PointSet set;
  set.weights = q;
  Json gen_meta;
  if (synthetic) {
    auto ds = gen_synthetic_clusters(q, f.syn);
    set.points = std::move(ds.points);
    set.labels = std::move(ds.labels);
    gen_meta = ds.meta;
  } else {
    auto ds = gen_moduli_points(f.mod);
    set.points = std::move(ds.points);
    set.labels = std::move(ds.labels);
    gen_meta = ds.meta;
    if (ds.meta["exhausted"] == "true")
      ctx.err << "gen: only " << set.size() << " distinct classes found within the height bound\n";
  }
  Json meta = ctx.meta();
  meta["generator"] = gen_meta;
  if (csv) {
    auto comments = ctx.comments();
    comments.push_back("generator: " + gen_meta.dump());
    ctx.emit(f.out_path, points_to_csv(set, comments));
  } else {
    ctx.emit(f.out_path, points_to_json(set, meta));
  }
}

// ---- normalize ----------------------------------------------------------

void run_normalize(Context& ctx, const std::string& in, std::string mode, const std::string& out_path) {
  PointSet set = read_points(in);
  if (mode.empty()) mode = set.rational() ? "rational" : "geometric";
  ctx.config = {{"in", in}, {"mode", mode}, {"out", out_path}};
  ctx.log_config(1);
  const NormalizeMode m = mode == "rational" ? NormalizeMode::rational : NormalizeMode::geometric;
  if (set.rational()) {
    set.points = normalize_dataset(set.rational_points(), m);
  } else {
    set.points = normalize_dataset(set.complex_points(), m);
  }
  if (format_for(out_path) == FileFormat::csv) {
    ctx.emit(out_path, points_to_csv(set, ctx.comments()));
  } else {
    ctx.emit(out_path, points_to_json(set, ctx.meta()));
  }
}

// ---- height -------------------------------------------------------------

void run_height(Context& ctx, const std::string& in, const std::string& out_path) {
  const PointSet set = read_points(in);
  ctx.config = {{"in", in}, {"out", out_path}};
  ctx.log_config(1);
  std::string csv;
  for (const auto& c : ctx.comments()) csv += "# " + c + "\n";
  csv += "index,wgcd,height\n";
  const auto& pts = set.rational_points();
  for (std::size_t i = 0; i < pts.size(); ++i) {
    csv += std::to_string(i) + "," + wgcd(pts[i].coords(), pts[i].weights()).str() + "," +
           detail::format_double(weighted_height(pts[i])) + "\n";
  }
  ctx.emit(out_path, csv);
}

// ---- dist ---------------------------------------------------------------

void run_dist(Context& ctx, const std::string& in, MetricFlags& mf, std::size_t i, std::size_t j,
              const std::string& out_path) {
  mf.finalize();
  const PointSet set = read_points(in);
  ctx.config = mf.config();
  ctx.config.update({{"in", in}, {"i", i}, {"j", j}, {"out", out_path}});
  ctx.log_config(1);
  require_index(i, set, "--i");
  require_index(j, set, "--j");

  Json doc{{"meta", ctx.meta()}, {"metric", mf.metric}, {"i", i}, {"j", j}};
  if (mf.metric == "finsler" || mf.metric == "rational-finsler") {
    const GeodesicResult r = mf.metric == "finsler"
                                 ? geodesic_distance(set.complex_points()[i], set.complex_points()[j], mf.geo)
                                 : geodesic_distance_rational(set.rational_points()[i], set.rational_points()[j], mf.geo);
    doc["distance"] = r.distance;
    doc["geodesic"] = to_json(r);
  } else {
    doc["distance"] = mf.oracle(set, mf.metric)(i, j);
  }
  ctx.emit(out_path, doc.dump(1) + "\n");
}

// ---- matrix -------------------------------------------------------------

void run_matrix(Context& ctx, const std::string& in, MetricFlags& mf, unsigned threads, std::size_t pca_k,
                const std::string& out_path) {
  mf.finalize();
  if (threads < 1) throw UsageError("--threads must be >= 1");
  const PointSet set = read_points(in);
  ctx.config = mf.config();
  ctx.config.update({{"in", in}, {"out", out_path}});
  if (pca_k > 0) ctx.config["pca_k"] = pca_k;
  ctx.log_config(threads);

  Json doc{{"meta", ctx.meta()}, {"metric", mf.metric}};
  if (pca_k == 0) {
    doc.update(to_json(distance_matrix(set.size(), mf.oracle(set, mf.metric), threads)));
  } else {
    // distances on the rank-k reconstructions, next to the original ones
    const WeightedPCAResult pca = weighted_pca(set.complex_points(), pca_k);
    PointSet reduced;
    reduced.weights = set.weights;
    std::vector<ProjPoint> pts;
    for (std::size_t i = 0; i < set.size(); ++i) pts.emplace_back(set.weights, pca_reconstruct(pca, i));
    reduced.points = std::move(pts);
    doc.update(to_json(distance_matrix(reduced.size(), mf.oracle(reduced, mf.metric), threads)));
    doc["original_entries"] = to_json(distance_matrix(set.size(), mf.oracle(set, mf.metric), threads))["entries"];
  }
  ctx.emit(out_path, doc.dump(1) + "\n");
}

// ---- cluster / cut ------------------------------------------------------

struct CutFlags {
  std::optional<std::size_t> k;
  std::optional<double> height;

  Json config() const {
    Json j = Json::object();
    if (k) j["cut_k"] = *k;
    if (height) j["cut_height"] = *height;
    return j;
  }
  Partition apply(const Dendrogram& d) const { return k ? cut_k(d, *k) : cut_height(d, *height); }
};

void run_cluster(Context& ctx, const std::string& in, const std::string& linkage_name, const CutFlags& cut,
                 const std::string& newick, const std::string& partition_path, const std::string& out_path) {
  if ((cut.k || cut.height) && partition_path.empty()) throw UsageError("a cut needs --partition FILE");
  if (!partition_path.empty() && !cut.k && !cut.height) throw UsageError("--partition needs --cut-k or --cut-height");
  const Linkage linkage = parse_linkage(linkage_name);
  ctx.config = {{"in", in}, {"linkage", linkage_name}, {"newick", newick}, {"partition", partition_path},
                {"out", out_path}};
  ctx.config.update(cut.config());
  ctx.log_config(1);

  const Json src = parse_json(read_file(in), in);
  const DistanceMatrix m = matrix_from_json(src);
  const Dendrogram d = agglomerate(m, linkage);
  Json doc{{"meta", ctx.meta()}, {"linkage", linkage_name}};
  doc.update(to_json(d));
  if (cut.k || cut.height) ctx.emit(partition_path, partition_to_csv(cut.apply(d), ctx.comments()));
  if (!newick.empty()) ctx.emit(newick, to_newick(d) + "\n");
  ctx.emit(out_path, doc.dump(1) + "\n");
}

void run_cut(Context& ctx, const std::string& in, const CutFlags& cut, const std::string& out_path) {
  if (!cut.k && !cut.height) throw UsageError("cut needs --k or --height");
  ctx.config = {{"in", in}, {"out", out_path}};
  ctx.config.update(cut.config());
  ctx.log_config(1);
  const Dendrogram d = dendrogram_from_json(parse_json(read_file(in), in));
  ctx.emit(out_path, partition_to_csv(cut.apply(d), ctx.comments()));
}

// ---- pca ----------------------------------------------------------------

void run_pca(Context& ctx, const std::string& in, std::size_t k, bool no_center, const std::string& out_path) {
  const PointSet set = read_points(in);
  ctx.config = {{"in", in}, {"k", k}, {"center", !no_center}, {"out", out_path}};
  ctx.log_config(1);
  Json doc{{"meta", ctx.meta()}, {"weights", set.weights.values()}};
  doc.update(to_json(weighted_pca(set.complex_points(), k, !no_center)));
  ctx.emit(out_path, doc.dump(1) + "\n");
}

// ---- scan-triangle ------------------------------------------------------

void run_scan(Context& ctx, const std::string& in, MetricFlags& mf, std::size_t trials, std::uint64_t seed,
              double tol, unsigned threads, bool with_paths, const std::string& out_path) {
  mf.finalize();
  if (threads < 1) throw UsageError("--threads must be >= 1");
  if (trials < 1) throw UsageError("--trials must be >= 1");
  const PointSet set = read_points(in);
  ctx.config = mf.config();
  ctx.config.update({{"in", in}, {"trials", trials}, {"seed", seed}, {"scan_tol", tol}, {"with_paths", with_paths},
                     {"out", out_path}});
  ctx.log_config(threads);

  const ViolationReport r = triangle_violation_scan(set.size(), mf.oracle(set, mf.metric), trials, seed, tol, threads);
  Json doc{{"meta", ctx.meta()}, {"metric", mf.metric}};
  doc.update(to_json(r));
  if (with_paths && (mf.metric == "finsler" || mf.metric == "rational-finsler")) {
    auto geodesic = [&](std::size_t a, std::size_t b) {
      return to_json(mf.metric == "finsler"
                         ? geodesic_distance(set.complex_points()[a], set.complex_points()[b], mf.geo)
                         : geodesic_distance_rational(set.rational_points()[a], set.rational_points()[b], mf.geo));
    };
    for (std::size_t v = 0; v < r.violations.size(); ++v) {
      const auto& t = r.violations[v];
      doc["violations"][v]["paths"] = {{"uw", geodesic(t.i, t.k)}, {"uv", geodesic(t.i, t.j)}, {"vw", geodesic(t.j, t.k)}};
    }
  }
  ctx.emit(out_path, doc.dump(1) + "\n");
}

// ---- bench --------------------------------------------------------------

void run_bench(Context& ctx, MetricFlags& mf, const std::string& metrics_list, std::size_t n, const std::string& space,
               std::size_t clusters, double spread, std::uint64_t seed, const std::string& linkage_name,
               unsigned threads, const std::string& out_path) {
  mf.finalize();
  if (threads < 1) throw UsageError("--threads must be >= 1");
  if (n < 2) throw UsageError("--n must be >= 2");
  const std::vector<std::string> metrics = split_list(metrics_list);
  if (metrics.empty()) throw UsageError("--metrics is empty");
  for (const auto& m : metrics) {
    if (std::find(kMetrics.begin(), kMetrics.end(), m) == kMetrics.end() || rational_metric(m))
      throw UsageError("bench supports chord, dissimilarity and finsler, got '" + m + "'");
  }
  const Weights q = parse_space(space);
  const Linkage linkage = parse_linkage(linkage_name);
  SyntheticOptions syn;
  syn.n_clusters = clusters;
  syn.per_cluster = (n + clusters - 1) / std::max<std::size_t>(clusters, 1);
  syn.spread = spread;
  syn.seed = seed;
  check([&] { syn.validate(); });
  if (clusters > n) throw UsageError("--clusters must not exceed --n");

  ctx.config = {{"metrics", metrics}, {"n", n}, {"space", q.values()}, {"clusters", clusters}, {"spread", spread},
                {"seed", seed}, {"linkage", linkage_name}, {"out", out_path}};
  for (const auto& m : metrics) ctx.config["metric_options"][m] = [&] {
    MetricFlags copy = mf;
    copy.metric = m;
    return copy.config();
  }();
  ctx.log_config(threads);

  auto ds = gen_synthetic_clusters(q, syn);
  ds.points.resize(n);
  ds.labels.resize(n);
  PointSet set;
  set.weights = q;
  set.points = ds.points;

  Json results = Json::array();
  std::vector<Partition> partitions;
  for (const auto& m : metrics) {
    std::atomic<std::size_t> calls{0};
    const PairDistance base = mf.oracle(set, m);
    const auto start = std::chrono::steady_clock::now();
    const DistanceMatrix dm = distance_matrix(
        n,
        [&](std::size_t i, std::size_t j) {
          ++calls;
          return base(i, j);
        },
        threads);
    const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    const Partition p = cut_k(agglomerate(dm, linkage), clusters);
    partitions.push_back(p);
    results.push_back({{"metric", m},
                       {"wall_seconds", seconds},
                       {"evaluations", calls.load()},
                       {"adjusted_rand_vs_truth", adjusted_rand_index(p, ds.labels)}});
  }
  Json agreement = Json::array();
  for (std::size_t a = 0; a < metrics.size(); ++a)
    for (std::size_t b = a + 1; b < metrics.size(); ++b)
      agreement.push_back(
          {{"metrics", {metrics[a], metrics[b]}}, {"rand_index", rand_index(partitions[a], partitions[b])}});

  Json doc{{"meta", ctx.meta()}, {"n", n}, {"results", std::move(results)}, {"agreement", std::move(agreement)}};
  ctx.emit(out_path, doc.dump(1) + "\n");
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Distances and hierarchical clustering on weighted projective spaces", kTool};
  app.set_version_flag("--version", WPS_VERSION);
  app.require_subcommand(1);

  std::string in, out_path, mode, linkage = "single", newick, partition_path;
  unsigned threads = 1;

  GenFlags gen;
  auto* gen_cmd = app.add_subcommand("gen", "generate a labeled synthetic point set");
  gen_cmd->add_option("--kind", gen.kind, "synthetic | moduli")->check(CLI::IsMember({"synthetic", "moduli"}))->capture_default_str();
  gen_cmd->add_option("--space", gen.space, "weights, e.g. 2,4,6,10")->capture_default_str();
  gen_cmd->add_option("--clusters", gen.syn.n_clusters, "number of clusters")->capture_default_str();
  gen_cmd->add_option("--per-cluster", gen.syn.per_cluster, "points per cluster")->capture_default_str();
  gen_cmd->add_option("--spread", gen.syn.spread, "Gaussian perturbation scale")->capture_default_str();
  gen_cmd->add_option("--min-separation", gen.syn.min_separation, "minimum chord distance of centers")->capture_default_str();
  gen_cmd->add_option("--count", gen.mod.count, "moduli points to draw")->capture_default_str();
  gen_cmd->add_option("--height-bound", gen.mod.height_bound, "moduli height bound H")->capture_default_str();
  std::uint64_t gen_seed = 0;
  gen_cmd->add_option("--seed", gen_seed, "generator seed")->capture_default_str();
  gen_cmd->add_option("--format", gen.format, "json | csv (default: from --out)")->check(CLI::IsMember({"json", "csv"}));
  gen_cmd->add_option("--out", gen.out_path, "output file");

  auto* norm_cmd = app.add_subcommand("normalize", "normalize every point of a point set");
  norm_cmd->add_option("--in", in, "input point set")->required();
  norm_cmd->add_option("--mode", mode, "geometric | rational (default: by point kind)")
      ->check(CLI::IsMember({"geometric", "rational"}));
  norm_cmd->add_option("--out", out_path, "output file");

  auto* height_cmd = app.add_subcommand("height", "wgcd and weighted height of rational points");
  height_cmd->add_option("--in", in, "input point set")->required();
  height_cmd->add_option("--out", out_path, "output CSV");

  MetricFlags dist_mf;
  std::size_t di = 0, dj = 1;
  auto* dist_cmd = app.add_subcommand("dist", "distance between two points of a point set");
  dist_cmd->add_option("--in", in, "input point set")->required();
  dist_mf.add(dist_cmd, "--seed");
  dist_cmd->add_option("--i", di, "first point index")->capture_default_str();
  dist_cmd->add_option("--j", dj, "second point index")->capture_default_str();
  dist_cmd->add_option("--out", out_path, "output JSON");

  MetricFlags matrix_mf;
  std::size_t pca_k = 0;
  auto* matrix_cmd = app.add_subcommand("matrix", "pairwise distance matrix");
  matrix_cmd->add_option("--in", in, "input point set")->required();
  matrix_mf.add(matrix_cmd, "--seed");
  matrix_cmd->add_option("--threads", threads, "worker threads")->capture_default_str();
  matrix_cmd->add_option("--pca-k", pca_k, "also compute distances on rank-k PCA reconstructions");
  matrix_cmd->add_option("--out", out_path, "output JSON");

  CutFlags cluster_cut;
  auto* cluster_cmd = app.add_subcommand("cluster", "agglomerative clustering of a distance matrix");
  cluster_cmd->add_option("--in", in, "distance matrix JSON")->required();
  cluster_cmd->add_option("--linkage", linkage, "single | complete | average")
      ->check(CLI::IsMember({"single", "complete", "average"}))
      ->capture_default_str();
  auto* ck = cluster_cmd->add_option("--cut-k", cluster_cut.k, "cut into k clusters");
  auto* ch = cluster_cmd->add_option("--cut-height", cluster_cut.height, "cut at a merge height");
  ck->excludes(ch);
  cluster_cmd->add_option("--newick", newick, "Newick output file");
  cluster_cmd->add_option("--partition", partition_path, "partition CSV for the cut");
  cluster_cmd->add_option("--out", out_path, "dendrogram JSON");

  CutFlags cut_flags;
  auto* cut_cmd = app.add_subcommand("cut", "cut a dendrogram");
  cut_cmd->add_option("--in", in, "dendrogram JSON")->required();
  auto* kk = cut_cmd->add_option("--k", cut_flags.k, "number of clusters");
  auto* hh = cut_cmd->add_option("--height", cut_flags.height, "height threshold");
  kk->excludes(hh);
  cut_cmd->add_option("--out", out_path, "partition CSV");

  std::size_t pca_components = 1;
  bool no_center = false;
  auto* pca_cmd = app.add_subcommand("pca", "weighted PCA of a complex point set");
  pca_cmd->add_option("--in", in, "input point set")->required();
  pca_cmd->add_option("--k", pca_components, "components to keep")->capture_default_str();
  pca_cmd->add_flag("--no-center", no_center, "skip centering");
  pca_cmd->add_option("--out", out_path, "output JSON");

  MetricFlags scan_mf;
  std::size_t trials = 1000;
  std::uint64_t scan_seed = 0;
  double scan_tol = 1e-9;
  bool with_paths = false;
  auto* scan_cmd = app.add_subcommand("scan-triangle", "sample triples and report triangle-inequality violations");
  scan_cmd->add_option("--in", in, "input point set")->required();
  scan_mf.add(scan_cmd, "--opt-seed");
  scan_cmd->add_option("--trials", trials, "triples to sample")->capture_default_str();
  scan_cmd->add_option("--seed", scan_seed, "triple sampling seed")->capture_default_str();
  scan_cmd->add_option("--scan-tol", scan_tol, "ratio tolerance above 1")->capture_default_str();
  scan_cmd->add_option("--threads", threads, "worker threads")->capture_default_str();
  scan_cmd->add_flag("--with-paths", with_paths, "attach geodesic paths to Finsler violations");
  scan_cmd->add_option("--out", out_path, "output JSON");

  MetricFlags bench_mf;
  std::string bench_metrics = "chord,dissimilarity,finsler", bench_space = "2,4,6,10";
  std::size_t bench_n = 50, bench_clusters = 3;
  double bench_spread = 0.01;
  std::uint64_t bench_seed = 0;
  auto* bench_cmd = app.add_subcommand("bench", "time metrics on synthetic clusters and compare their cuts");
  bench_cmd->add_option("--metrics", bench_metrics, "comma-separated metrics")->capture_default_str();
  bench_cmd->add_option("--n", bench_n, "number of points")->capture_default_str();
  bench_cmd->add_option("--space", bench_space, "weights")->capture_default_str();
  bench_cmd->add_option("--clusters", bench_clusters, "clusters generated and cut")->capture_default_str();
  bench_cmd->add_option("--spread", bench_spread, "cluster spread")->capture_default_str();
  bench_cmd->add_option("--seed", bench_seed, "data seed")->capture_default_str();
  bench_cmd->add_option("--linkage", linkage, "linkage")->check(CLI::IsMember({"single", "complete", "average"}))->capture_default_str();
  bench_cmd->add_option("--threads", threads, "worker threads")->capture_default_str();
  bench_mf.add(bench_cmd, "--opt-seed", false);
  bench_cmd->add_option("--out", out_path, "output JSON");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? 0 : 2;
  }

  auto* sub = app.get_subcommands().front();
  Context ctx{sub->get_name(), Json::object(), out, err};
  try {
    if (sub == gen_cmd) {
      gen.syn.seed = gen.mod.seed = gen_seed;
      run_gen(ctx, gen);
    } else if (sub == norm_cmd) {
      run_normalize(ctx, in, mode, out_path);
    } else if (sub == height_cmd) {
      run_height(ctx, in, out_path);
    } else if (sub == dist_cmd) {
      run_dist(ctx, in, dist_mf, di, dj, out_path);
    } else if (sub == matrix_cmd) {
      run_matrix(ctx, in, matrix_mf, threads, pca_k, out_path);
    } else if (sub == cluster_cmd) {
      run_cluster(ctx, in, linkage, cluster_cut, newick, partition_path, out_path);
    } else if (sub == cut_cmd) {
      run_cut(ctx, in, cut_flags, out_path);
    } else if (sub == pca_cmd) {
      run_pca(ctx, in, pca_components, no_center, out_path);
    } else if (sub == scan_cmd) {
      run_scan(ctx, in, scan_mf, trials, scan_seed, scan_tol, threads, with_paths, out_path);
    } else if (sub == bench_cmd) {
      run_bench(ctx, bench_mf, bench_metrics, bench_n, bench_space, bench_clusters, bench_spread, bench_seed, linkage,
                threads, out_path);
    }
  } catch (const UsageError& e) {
    err << kTool << " " << ctx.command << ": usage error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    err << kTool << " " << ctx.command << ": error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}

}  // namespace wps::cli
