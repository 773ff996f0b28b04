#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <sstream>

#include "wps/cli.hpp"
#include "wps/io.hpp"

using namespace wps;
namespace fs = std::filesystem;

namespace {

struct Run {
  int code;
  std::string out, err;
};

Run wps_run(std::vector<std::string> args) {
  args.insert(args.begin(), "wps");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  const int code = cli::run(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

fs::path tmp_dir() {
  const char* env = std::getenv("WPS_TEST_TMP");
  const fs::path dir = env ? fs::path(env) : fs::temp_directory_path() / "wps_cli_tmp";
  fs::create_directories(dir);
  return dir;
}

std::string path(const std::string& name) { return (tmp_dir() / name).string(); }

bool contains(const std::string& s, std::string_view part) { return s.find(part) != std::string::npos; }

}  // namespace

TEST_CASE("exit codes") {
  CHECK(wps_run({}).code == 2);
  CHECK(wps_run({"frobnicate"}).code == 2);
  CHECK(wps_run({"gen", "--no-such-flag"}).code == 2);
  CHECK(wps_run({"dist"}).code == 2);
  CHECK(wps_run({"matrix", "--in", "x.json", "--metric", "euclid"}).code == 2);
  CHECK(wps_run({"--help"}).code == 0);
  CHECK(wps_run({"--version"}).code == 0);

  const Run missing = wps_run({"normalize", "--in", path("does_not_exist.json")});
  CHECK(missing.code == 1);
  CHECK(contains(missing.err, "does_not_exist.json"));

  write_file_atomic(path("bad.csv"), "# weights: 2 1\n1,0\n1,zz\n");
  const Run bad = wps_run({"normalize", "--in", path("bad.csv")});
  CHECK(bad.code == 1);
  CHECK(contains(bad.err, "line 3, field 2"));

  write_file_atomic(path("rat.csv"), "# weights: 2 3\n4,8\n12,8\n1,-1\n");
  const Run kind = wps_run({"dist", "--in", path("rat.csv"), "--metric", "finsler"});
  CHECK(kind.code == 1);
  CHECK(contains(kind.err, "complex"));

  CHECK(wps_run({"cluster", "--in", path("m.json"), "--cut-k", "2"}).code == 2);
  CHECK(wps_run({"cut", "--in", path("d.json")}).code == 2);
}

TEST_CASE("height and normalize on rational input") {
  write_file_atomic(path("rat.csv"), "# weights: 2 3\n4,8\n12,8\n1,-1\n");
  const Run h = wps_run({"height", "--in", path("rat.csv")});
  REQUIRE(h.code == 0);
  CHECK(contains(h.out, "index,wgcd,height\n0,2,1\n1,2,1.7320508075688772\n2,1,1\n"));
  CHECK(contains(h.out, "# "));

  REQUIRE(wps_run({"normalize", "--in", path("rat.csv"), "--out", path("rat_norm.json")}).code == 0);
  const PointSet n = read_points(path("rat_norm.json"));
  CHECK(n.rational_points()[0].coords() == make_rational({2, 3}, {1, 1}).coords());
  CHECK(n.rational_points()[1].coords() == make_rational({2, 3}, {3, 1}).coords());
}

TEST_CASE("dist on a repeated point is zero") {
  write_file_atomic(path("same.csv"), "# weights: 2 1\n0.3,0.1,-0.7,0.2\n0.3,0.1,-0.7,0.2\n");
  for (const char* metric : {"finsler", "dissimilarity", "chord"}) {
    const Run r = wps_run({"dist", "--in", path("same.csv"), "--metric", metric, "--i", "0", "--j", "1"});
    REQUIRE(r.code == 0);
    const Json doc = Json::parse(r.out);
    CHECK(doc.at("distance").get<double>() <= 1e-8);
    CHECK(doc.at("meta").at("tool") == "wps");
  }
  CHECK(wps_run({"dist", "--in", path("same.csv"), "--i", "0", "--j", "2"}).code == 1);
}

TEST_CASE("gen, matrix, cluster end to end") {
  REQUIRE(wps_run({"gen", "--space", "2,1", "--clusters", "3", "--per-cluster", "30", "--spread", "0.01", "--seed",
                   "4", "--out", path("pts.json")})
              .code == 0);
  const PointSet pts = read_points(path("pts.json"));
  REQUIRE(pts.size() == 90);

  REQUIRE(wps_run({"matrix", "--in", path("pts.json"), "--metric", "chord", "--out", path("m.json")}).code == 0);
  REQUIRE(wps_run({"cluster", "--in", path("m.json"), "--linkage", "single", "--cut-k", "3", "--partition",
                   path("part.csv"), "--newick", path("tree.nwk"), "--out", path("dend.json")})
              .code == 0);
  const Partition p = parse_partition_csv(read_file(path("part.csv")));
  CHECK(canonical_labels(p) == canonical_labels(pts.labels));
  CHECK(read_file(path("tree.nwk")).back() == '\n');

  REQUIRE(wps_run({"cut", "--in", path("dend.json"), "--k", "3", "--out", path("part2.csv")}).code == 0);
  CHECK(parse_partition_csv(read_file(path("part2.csv"))) == p);

  const Json dend = parse_json(read_file(path("dend.json")), "dend");
  CHECK(dend.at("meta").at("command") == "cluster");
  CHECK(dend.at("meta").at("config").at("linkage") == "single");
  CHECK(dend.at("meta").contains("version"));

  REQUIRE(wps_run({"pca", "--in", path("pts.json"), "--k", "1", "--out", path("pca.json")}).code == 0);
  CHECK(parse_json(read_file(path("pca.json")), "pca").at("eigenvalues").size() == 2);

  REQUIRE(wps_run({"gen", "--kind", "moduli", "--count", "20", "--height-bound", "2", "--out", path("mod.csv")}).code ==
          0);
  CHECK(read_points(path("mod.csv")).rational());
}

TEST_CASE("outputs do not depend on the thread count") {
  REQUIRE(wps_run({"gen", "--space", "2,1", "--clusters", "2", "--per-cluster", "5", "--seed", "8", "--out",
                   path("small.json")})
              .code == 0);
  // identical invocations apart from --threads, written to stdout
  for (const char* metric : {"finsler", "dissimilarity"}) {
    const Run t1 = wps_run({"matrix", "--in", path("small.json"), "--metric", metric, "--iters", "30", "--threads", "1"});
    const Run t4 = wps_run({"matrix", "--in", path("small.json"), "--metric", metric, "--iters", "30", "--threads", "4"});
    REQUIRE(t1.code == 0);
    REQUIRE(t4.code == 0);
    CHECK(t1.out == t4.out);
    CHECK(contains(t4.err, "threads=4"));
    CHECK(!contains(t4.out, "threads"));
  }
  const Run s1 = wps_run({"scan-triangle", "--in", path("small.json"), "--metric", "chord", "--trials", "50"});
  const Run s3 =
      wps_run({"scan-triangle", "--in", path("small.json"), "--metric", "chord", "--trials", "50", "--threads", "3"});
  REQUIRE(s1.code == 0);
  CHECK(s1.out == s3.out);

  // the same holds for files
  REQUIRE(wps_run({"matrix", "--in", path("small.json"), "--metric", "chord", "--out", path("t.json")}).code == 0);
  const std::string first = read_file(path("t.json"));
  REQUIRE(wps_run({"matrix", "--in", path("small.json"), "--metric", "chord", "--threads", "2", "--out", path("t.json")})
              .code == 0);
  CHECK(read_file(path("t.json")) == first);
}

TEST_CASE("bench counts every pair once per metric") {
  const Run r = wps_run({"bench", "--metrics", "chord,finsler", "--n", "50", "--space", "2,1", "--iters", "5",
                         "--multistarts", "1"});
  REQUIRE(r.code == 0);
  const Json doc = Json::parse(r.out);
  REQUIRE(doc.at("results").size() == 2);
  for (const auto& res : doc.at("results")) {
    CHECK(res.at("evaluations") == 1225);
    CHECK(res.at("wall_seconds").get<double>() >= 0.0);
  }
  CHECK(doc.at("agreement").size() == 1);
  CHECK(wps_run({"bench", "--metrics", "rational-finsler"}).code == 2);
}
