#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <unistd.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "oracle.hpp"
#include "shortck/cli.hpp"

namespace fs = std::filesystem;
using json = nlohmann::json;

namespace {

struct Result {
  int code = 0;
  std::string out, err;
};

Result run(std::vector<std::string> args) {
  std::ostringstream out, err;
  Result r;
  r.code = shortck::cli::run(args, out, err);
  r.out = out.str();
  r.err = err.str();
  return r;
}

struct Scratch {
  fs::path dir = fs::temp_directory_path() / ("shortck_cli_" + std::to_string(::getpid()));
  Scratch() { fs::create_directories(dir); }
  ~Scratch() {
    std::error_code ec;
    fs::remove_all(dir, ec);
  }
};

const fs::path& scratch() {
  static const Scratch s;
  return s.dir;
}

std::string write_config(const std::string& name, const std::string& text) {
  const fs::path p = scratch() / (name + ".json");
  std::ofstream(p) << text;
  return p.string();
}

std::string slurp(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  return {std::istreambuf_iterator<char>(f), std::istreambuf_iterator<char>()};
}

Result run_cfg(const std::string& cmd, const std::string& text, std::vector<std::string> extra = {}) {
  std::vector<std::string> args;
  std::istringstream words(cmd);
  for (std::string w; words >> w;) args.push_back(w);
  args.push_back("--config");
  args.push_back(write_config("cfg", text));
  args.insert(args.end(), extra.begin(), extra.end());
  return run(args);
}

const std::string kMap = R"("map":{"kind":"henon","d":2,"delta":0.5})";
const std::string kShortSeq =
    R"("sequence":{"type":"scheduled","schedule":{"regime":"short","c":0.5,"N":60,"eps_const":0.5}})";

struct Case {
  const char* cmd;
  std::string cfg;
};

// One valid config per subcommand; each randomized one carries a seed.
std::vector<Case> valid_cases() {
  const std::string fam = R"("family":{"variant":"quadratic","a":0.01,"r":0.1})";
  return {
      {"green", "{" + kMap + R"(,"point":[[3,0],[1,0]]})"},
      {"classify", "{" + kMap + R"(,"points":[[0,0],[10,0]]})"},
      {"sublevel", "{" + kMap + R"(,"r":0.5,"point":[0,0]})"},
      {"render", "{" + kMap + R"(,"nx":4,"ny":3})"},
      {"loewner-certify monotone", "{" + fam + R"(,"t":0.3,"s":0.6,"seed":1})"},
      {"loewner-certify union", "{" + fam + R"(,"t":0.5,"target":[0,0]})"},
      {"loewner-certify intersection", "{" + fam + R"(,"t":0.4,"target":[0.001,0.0003],"t_steps":[0.5,0.45]})"},
      {"loewner-certify chain", "{" + kShortSeq + R"(,"n":3,"t_grid":[0,0.5,1],"samples":50,"seed":1})"},
      {"decompose", "{" + kMap + R"(,"r":1,"N":3,"delta":0.9,"c":0.5,"nesting":{"samples":200},"seed":3})"},
      {"schedule gen-short", R"({"c":0.5,"eps_const":0.5,"N":10})"},
      {"schedule gen-fb", R"({"c":0.5,"N":10})"},
      {"schedule validate", R"({"schedule":{"regime":"fb","c":0.5,"N":50}})"},
      {"schedule claim-tl", R"({"t":1.9,"l_max":50})"},
      {"schedule inclusion",
       R"({"schedule":{"regime":"short","c":0.5,"N":80,"eps_const":0.5},"r":0.5,"r_prime":0.4,"n":1,"l_max":20,"find_minimal":true})"},
      {"schedule growth", R"({"schedule":{"regime":"fb","c":0.5,"N":200},"n_max":40})"},
      {"envelope", "{" + kShortSeq + R"(,"point":[10,0],"n":8})"},
      {"fb-verify fb1", R"({"c":0.5,"t":1.5,"b":0.5,"n_range":[1,20],"k_max":20,"K_radius":0.05})"},
      {"fb-verify fb3",
       R"({"schedule":{"regime":"fb","c":0.5,"N":200},"b":0.5,"n_range":[1,100],"k_max":20,"K_radius":0.05})"},
      {"volume-probe", "{" + kMap + R"(,"r":1,"R_list":[2,4],"samples":2000,"seed":9})"},
      {"kobayashi", "{" + kShortSeq + R"(,"point":[0,0],"direction":[1,0],"n_list":[1,2,3],"samples_per_n":5,"seed":5})"},
  };
}

}  // namespace

TEST_CASE("help and usage errors") {
  const auto h = run({"--help"});
  CHECK(h.code == 0);
  CHECK(h.out.find("volume-probe") != std::string::npos);
  CHECK(run({}).code == 2);
  CHECK(run({"no-such-command"}).code == 2);
  CHECK(run({"schedule"}).code == 2);
  CHECK(run({"green", "--threads", "many"}).code == 2);

  const auto bad = run({"green", "--config", write_config("bad", "{\"map\": [1, 2")});
  CHECK(bad.code == 2);
  CHECK_FALSE(bad.err.empty());
  CHECK(run({"green", "--config", (scratch() / "missing.json").string()}).code == 2);
  CHECK(run_cfg("green", "[1, 2]").code == 2);
}

TEST_CASE("every subcommand succeeds on a valid config and rejects an empty one") {
  for (const auto& c : valid_cases()) {
    CAPTURE(c.cmd);
    const auto ok = run_cfg(c.cmd, c.cfg, {"--threads", "2"});
    REQUIRE_MESSAGE(ok.code == 0, ok.err);
    const json rep = json::parse(ok.out);
    CHECK(rep.at("version") == "0.1.0");
    CHECK(rep.at("command") == c.cmd);
    CHECK(rep.at("config") == json::parse(c.cfg));
    CHECK(rep.contains("result"));
    CHECK(run_cfg(c.cmd, "{}").code == 2);
  }
}

TEST_CASE("computational failures exit 1") {
  CHECK(run_cfg("fb-verify fb1", R"({"c":0.5,"t":1.5,"b":0.5,"n_range":[1,2],"k_max":20,"K_radius":0.05})").code == 1);
  CHECK(run_cfg("fb-verify fb3",
                R"({"schedule":{"regime":"fb","c":0.5,"N":200},"b":0.5,"n_range":[1,2],"k_max":20,"K_radius":0.05})")
            .code == 1);
  CHECK(run_cfg("loewner-certify union", R"({"family":{"variant":"quadratic","a":0.01,"r":0.1},"t":0.5,"target":[0,1]})")
            .code == 1);
}

TEST_CASE("randomized subcommands require a seed") {
  for (const auto& c : valid_cases()) {
    json j = json::parse(c.cfg);
    if (!j.contains("seed")) continue;
    CAPTURE(c.cmd);
    j.erase("seed");
    CHECK(run_cfg(c.cmd, j.dump()).code == 2);
    CHECK(run_cfg(c.cmd, j.dump(), {"--seed", "4"}).code == 0);
  }
}

TEST_CASE("green report matches the oracle") {
  const auto r = run_cfg("green", "{" + kMap + R"(,"point":[[3,0],[1,0]]})");
  REQUIRE(r.code == 0);
  const json rep = json::parse(r.out);
  const double want = static_cast<double>(oracle::green_henon(2, {}, 0.5L, {3.0L, 1.0L}));
  CHECK(std::abs(rep["result"]["value"].get<double>() - want) <= 1e-9 * (1 + want));
  CHECK(rep["result"]["status"] == "stabilized");
  // Keys come out sorted.
  std::vector<std::string> keys;
  for (auto it = rep.begin(); it != rep.end(); ++it) keys.push_back(it.key());
  CHECK(std::is_sorted(keys.begin(), keys.end()));
}

TEST_CASE("render of a single pixel at the origin") {
  const std::string pgm = (scratch() / "one.pgm").string();
  const auto r = run_cfg("render", "{" + kMap + R"(,"nx":1,"ny":1,"window":{"width":1e-3,"height":1e-3}})",
                         {"--out", pgm});
  REQUIRE(r.code == 0);
  CHECK(slurp(pgm) == std::string("P5\n1 1\n255\n") + std::string(1, '\0'));
  const std::string csv = slurp((scratch() / "one.csv").string());
  CHECK(csv.rfind("i,j,re,im,value,code\n", 0) == 0);
  CHECK(csv.find("\n0,0,0,0,0,0\n") != std::string::npos);
  CHECK(run_cfg("render", "{" + kMap + R"(,"nx":0})").code == 2);
  CHECK(run_cfg("render", "{" + kMap + R"(,"window":{"width":-1}})").code == 2);
  CHECK(run_cfg("render", "{" + kMap + R"(,"quantity":"colour"})").code == 2);
}

TEST_CASE("golden render is byte-identical across thread counts") {
  const std::string dir = SHORTCK_TEST_DIR "/golden/";
  const std::string golden = slurp(dir + "render_default.pgm");
  REQUIRE(golden.size() == 13 + 64 * 64);
  for (const char* threads : {"1", "8"}) {
    const std::string pgm = (scratch() / (std::string("golden_") + threads + ".pgm")).string();
    const auto r = run({"render", "--config", dir + "render_default.json", "--out", pgm, "--threads", threads});
    REQUIRE(r.code == 0);
    CHECK(slurp(pgm) == golden);
  }
  CHECK(slurp((scratch() / "golden_1.csv").string()) == slurp((scratch() / "golden_8.csv").string()));
}

TEST_CASE("seeded reports are byte-identical across runs and thread counts") {
  for (const auto& c : valid_cases()) {
    CAPTURE(c.cmd);
    const auto a = run_cfg(c.cmd, c.cfg, {"--threads", "1"});
    const auto b = run_cfg(c.cmd, c.cfg, {"--threads", "1"});
    const auto d = run_cfg(c.cmd, c.cfg, {"--threads", "8"});
    REQUIRE(a.code == 0);
    CHECK(a.out == b.out);
    CHECK(a.out == d.out);
  }
}

TEST_CASE("report written to --out") {
  const std::string path = (scratch() / "claim.json").string();
  const auto r = run_cfg("schedule claim-tl", R"({"t":1.01,"l_max":50})", {"--out", path, "--quiet"});
  REQUIRE(r.code == 0);
  CHECK(r.out.empty());
  CHECK(r.err.empty());
  const json rep = json::parse(slurp(path));
  CHECK(rep["result"]["first_failure"] == 2);
  CHECK(rep["result"]["pass"] == false);
}
