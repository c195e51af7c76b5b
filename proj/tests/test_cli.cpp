#include <filesystem>
#include <fstream>
#include <sstream>

#include "cli.hpp"
#include "doctest.h"
#include "holo/io.hpp"

using holo::Json;

namespace {

struct Result {
  int code = 0;
  std::string out;
  std::string err;
};

Result run(std::vector<std::string> args) {
  args.insert(args.begin(), "holo");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  const int code = holo::cli::run(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

std::string write(const std::string& name, const std::string& text) {
  const auto dir = std::filesystem::temp_directory_path() / "holo_cli_tests";
  std::filesystem::create_directories(dir);
  const auto path = (dir / name).string();
  std::ofstream(path) << text;
  return path;
}

const char* kHalfHalfMinus3 =
    R"({"genus":0,"cone_points":[{"z":[0,0],"order":[0.5,0]},{"z":[1,0],"order":[0.5,0]},{"z":[0.4,1.2],"order":[-3,0]}]})";
const char* kFivePoint =
    R"({"genus":0,"cone_points":[{"z":[0,0],"order":[0.5,0]},{"z":[1,0],"order":[0.5,0]},{"z":[0.3,1.1],"order":[1,0]},)"
    R"({"z":[-0.8,0.6],"order":[-2,0]},{"z":[0.5,-0.9],"order":[-2,0]}]})";

}  // namespace

TEST_CASE("cli: holonomy and dims examples") {
  const auto s = write("s.json", kHalfHalfMinus3);
  const auto l = write("l.json", R"({"kind":"circle","center":[1,0],"radius":0.1,"orientation":1})");
  const auto r = run({"holonomy", "--surface", s, "--loop", l});
  REQUIRE(r.code == 0);
  const auto j = holo::parse_json(r.out);
  CHECK(std::abs(holo::cplx_from_json(j["chi"]) - holo::cplx(-1.0, 0.0)) < 1e-10);
  CHECK(std::abs(holo::cplx_from_json(j["tau"]) - holo::cplx(1.5, 0.0)) < 1e-10);

  const auto d = run({"dims", "--genus", "1", "--n", "1"});
  REQUIRE(d.code == 0);
  const auto dj = holo::parse_json(d.out);
  CHECK(dj["dim_H1_L"] == 2);
  CHECK(dj["dim_moduli"] == 2);
  CHECK(run({"dims", "--genus", "0", "--n", "2"}).code == 1);
}

TEST_CASE("cli: exit codes") {
  const auto bad = write("bad.json", R"({"genus":0,"cone_points":[{"z":[0,0],"order":[1,0]},{"z":[1,0],"order":[-1,0]}]})");
  const auto v = run({"validate", "--surface", bad});
  CHECK(v.code == 1);
  CHECK(holo::parse_json(v.err)["error"] == "GaussBonnetViolation");

  CHECK(run({"validate", "--surface", write("mal.json", "{\"genus\":0,")}).code == 2);
  CHECK(run({"validate", "--surface", write("unk.json", R"({"genus":0,"cone_points":[],"x":1})")}).code == 2);
  CHECK(run({"validate", "--surface", "/nonexistent.json"}).code == 2);
  CHECK(run({"validate"}).code == 2);
  CHECK(run({}).code == 2);
  CHECK(run({"frobnicate"}).code == 2);
  CHECK(run({"validate", "--surface", bad, "--tol", "-1"}).code == 2);
  CHECK(run({"validate", "--surface", bad, "--format", "xml"}).code == 2);
  CHECK(run({"node-check", "--orders", "[[1,0]"}).code == 2);
  CHECK(run({"--help"}).code == 0);
}

TEST_CASE("cli: every report re-reads") {
  const auto s = write("five.json", kFivePoint);
  const auto res = run({"residues", "--surface", s});
  REQUIRE(res.code == 0);
  const auto rj = holo::parse_json(res.out);
  const auto spec = holo::spec_from_json(holo::read_json_file(s));
  const auto tree = holo::validated_tree(spec, holo::tree_from_json(rj["tree"]));
  CHECK(rj["poles"] == Json::array({3, 4}));
  const auto t = write("tree.json", holo::dump(holo::to_json(tree)));
  CHECK(run({"residues", "--surface", s, "--tree", t}).out == res.out);

  const auto hol = holo::parse_json(run({"holonomy", "--surface", s}).out);
  for (const auto& l : hol["loops"]) CHECK_NOTHROW(holo::loop_from_json(l["loop"]));

  const auto walk = run({"leaf-walk", "--surface", s, "--steps", "3"});
  REQUIRE(walk.code == 0);
  const auto wj = holo::parse_json(walk.out);
  REQUIRE(wj["steps"].size() == 3);
  for (const auto& step : wj["steps"]) CHECK(holo::validate(holo::spec_from_json(step["surface"])).ok());
  CHECK(wj["hol_drift"].get<double>() < 1e-7);
  CHECK(wj["res_drift"].get<double>() < 1e-7);

  const auto tr = holo::parse_json(run({"trans-dims", "--surface", s}).out);
  CHECK(tr["h1"] == 1);
  CHECK(tr["euler_defect"] == 0);

  const auto ch = write("chi.json", R"({"generators":{"d0":[0,1],"d1":[0,1],"d2":[0,-1]}})");
  const auto tw = holo::parse_json(run({"twisted", "--genus", "0", "--boundaries", "4", "--character", ch}).out);
  CHECK(tw["compact"]["h1"] == 2);
  const auto pr = run({"pairing", "--genus", "0", "--boundaries", "4", "--character", ch});
  REQUIRE(pr.code == 0);
  CHECK(holo::parse_json(pr.out)["dim"] == 2);
}

TEST_CASE("cli: determinism and jobs") {
  const auto f = write("family.json", std::string(R"({"genus":0,"cone_points":)") +
                                          holo::parse_json(kFivePoint)["cone_points"].dump() +
                                          R"(,"directions":[{"kind":"move_point","index":3},{"kind":"move_point","index":4},)"
                                          R"({"kind":"order_pair","plus":0,"minus":2}]})");
  const auto a = run({"rank", "--family", f, "--map", "hol-res"});
  REQUIRE(a.code == 0);
  CHECK(run({"rank", "--family", f, "--map", "hol-res"}).out == a.out);
  CHECK(run({"rank", "--family", f, "--map", "hol-res", "--jobs", "4"}).out == a.out);
  const auto csv = run({"rank", "--family", f, "--format", "csv"});
  CHECK(csv.code == 0);
  CHECK(csv.out.starts_with("key,value\nrows.0,\"c0\"\n"));

  const auto out = (std::filesystem::temp_directory_path() / "holo_cli_tests" / "rank.json").string();
  REQUIRE(run({"rank", "--family", f, "--map", "hol-res", "--out", out}).code == 0);
  std::ifstream in(out);
  std::stringstream ss;
  ss << in.rdbuf();
  CHECK(ss.str() == a.out);
}
