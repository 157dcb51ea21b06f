#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "satmodel/errors.hpp"
#include "satmodel/runner.hpp"

using namespace satmodel;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / ("satmodel_test_cli_" + name);
  fs::remove_all(dir);
  return dir;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

std::vector<nlohmann::json> records(const fs::path& p) {
  std::vector<nlohmann::json> out;
  std::ifstream in(p);
  for (std::string line; std::getline(in, line);) out.push_back(nlohmann::json::parse(line));
  return out;
}

std::vector<std::string> errors_of(const std::string& text) {
  try {
    parse_config(text);
  } catch (const ValidationError& e) {
    return e.messages().empty() ? std::vector<std::string>{e.what()} : e.messages();
  }
  return {};
}

bool mentions(const std::vector<std::string>& errs, const std::string& needle) {
  for (const auto& e : errs)
    if (e.find(needle) != std::string::npos) return true;
  return false;
}

const char* kCriterion = R"({
  "command": "criterion",
  "params": {"C": 2, "generator": {"kind": "tower", "q0": 3, "p": 1}},
  "precision": 256,
  "horizon": 5,
  "criterion": {"candidate": {"kind": "center", "delta": 0.5}}
})";

}  // namespace

TEST_CASE("explicit fractions parse and default the horizon") {
  JobConfig c = parse_config(R"({"command": "render", "params": {"C": 3.2, "fractions": ["1/28", [1, 39670]]}})");
  CHECK(c.fractions.size() == 2);
  CHECK(c.fractions[1] == std::pair<std::uint64_t, std::uint64_t>{1, 39670});
  CHECK(c.horizon == 1);
  CHECK_NOTHROW(validate(c));
}

TEST_CASE("C must exceed 1") {
  JobConfig c = parse_config(R"({"command": "criterion", "params": {"C": 0.5, "fractions": ["1/3", "1/2"]}})");
  CHECK_THROWS_WITH_AS(validate(c), doctest::Contains("C must exceed 1"), ValidationError);
}

TEST_CASE("tower generator expands 3, 8, 256") {
  JobConfig c = parse_config(
      R"({"command": "centers", "params": {"C": 2, "generator": {"kind": "tower", "q0": 3}}, "precision": 128})");
  CHECK(c.horizon == 6);
  const ModelParams params = validate(c);
  CHECK(*params.level(0).q.exact == 3);
  CHECK(*params.level(1).q.exact == 8);
  CHECK(*params.level(2).q.exact == 256);
}

TEST_CASE("all errors are reported together, unknown keys included") {
  const auto errs = errors_of(R"({"command": "render", "params": {"C": 2, "fractions": ["2/4"], "colour": 1},
                                  "precision": -3, "bogus": true})");
  CHECK(errs.size() >= 3);
  CHECK(mentions(errs, "colour"));
  CHECK(mentions(errs, "bogus"));
  CHECK(mentions(errs, "precision"));
  CHECK(mentions(errors_of("not json"), "JSON"));
}

TEST_CASE("flags override the environment, which overrides the file") {
  JobConfig c = parse_config(kCriterion);
  apply_overrides(c, overrides_from_env({{"SATMODEL_PRECISION", "512"}, {"SATMODEL_HORIZON", "3"},
                                         {"SATMODEL_OUT", "/tmp/x"}, {"OTHER", "1"}}));
  CHECK(c.precision == 512);
  CHECK(c.horizon == 3);
  CHECK(c.out_dir == "/tmp/x");
  Overrides flags;
  flags.precision = "auto";
  flags.horizon = 4;
  apply_overrides(c, flags);
  CHECK(c.auto_precision);
  CHECK(c.horizon == 4);
  CHECK(c.out_dir == "/tmp/x");
  CHECK_THROWS_AS(overrides_from_env({{"SATMODEL_HORIZON", "many"}}), ValidationError);
}

TEST_CASE("auto precision grows with the scale") {
  const RotationSequence tower(GeneratorRule{GeneratorRule::Kind::kTower, 3, 1});
  CHECK(auto_precision(tower, 0) == 64);
  CHECK(auto_precision(tower, 3) >= 64 + 1 + 3 + 8);
  CHECK(auto_precision(tower, 8) == 8192);
}

TEST_CASE("criterion run writes a header, centers and a verdict") {
  JobConfig c = parse_config(kCriterion);
  const fs::path dir = scratch("criterion");
  c.out_dir = dir.string();
  const RunResult r = run(c);
  REQUIRE(r.status == kExitOk);
  const auto recs = records(dir / "criterion.jsonl");
  REQUIRE(recs.size() > 2);
  CHECK(recs.front()["record"] == "header");
  CHECK(recs.front()["schema"] == kReportSchema);
  const auto& verdict = recs.back();
  CHECK(verdict["record"] == "verdict");
  CHECK(verdict["semi_decision"] == true);
  CHECK(verdict["verdict"] == "holds-to-horizon");
  std::size_t centers = 0;
  for (const auto& rec : recs) centers += rec["record"] == "center";
  CHECK(centers == 6);
}

TEST_CASE("levin run on an affine sequence is not satisfied") {
  JobConfig c = parse_config(R"({"command": "levin",
      "params": {"C": 1.5, "generator": {"kind": "affine", "q0": 2, "a": 1, "b": 1}},
      "precision": 128, "levin": {"first": 0, "last": 10000}})");
  const fs::path dir = scratch("levin");
  c.out_dir = dir.string();
  REQUIRE(run(c).status == kExitOk);
  const auto recs = records(dir / "levin.jsonl");
  CHECK(recs.back()["record"] == "levin");
  CHECK(recs.back()["satisfied"] == false);
}

TEST_CASE("verify run emits five checks") {
  JobConfig c = parse_config(R"({"command": "verify",
      "params": {"C": 4, "generator": {"kind": "geometric", "q0": 8, "ratio": 2}},
      "precision": 256, "horizon": 3, "verify": {"samples": 50, "seed": 3, "c_prime": 2}})");
  const fs::path dir = scratch("verify");
  c.out_dir = dir.string();
  REQUIRE(run(c).status == kExitOk);
  std::size_t checks = 0;
  for (const auto& rec : records(dir / "verify.jsonl")) {
    if (rec["record"] != "check") continue;
    ++checks;
    INFO(rec.dump());
    CHECK(rec.contains("pass"));
  }
  CHECK(checks == 5);
}

TEST_CASE("reports are byte-identical across reruns") {
  JobConfig c = parse_config(kCriterion);
  const fs::path a = scratch("rerun_a"), b = scratch("rerun_b");
  c.out_dir = a.string();
  REQUIRE(run(c).status == kExitOk);
  c.out_dir = b.string();
  REQUIRE(run(c).status == kExitOk);
  // The header holds the out directory, so compare everything after it too.
  std::string ra = slurp(a / "criterion.jsonl"), rb = slurp(b / "criterion.jsonl");
  ra = ra.substr(ra.find('\n'));
  rb = rb.substr(rb.find('\n'));
  CHECK(ra == rb);
  c.out_dir = a.string();
  const std::string before = slurp(a / "criterion.jsonl");
  REQUIRE(run(c).status == kExitOk);
  CHECK(slurp(a / "criterion.jsonl") == before);
}

TEST_CASE("render writes an image and component records") {
  JobConfig c = parse_config(R"({"command": "render", "params": {"C": 1.5, "fractions": ["1/3", "1/2", "1/3"]},
      "horizon": 2, "precision": 128,
      "render": {"window": {"x_min": -0.2, "x_max": 1.05, "y_min": -0.65, "y_max": 0.65, "width": 256, "height": 256}}})");
  const fs::path dir = scratch("render");
  c.out_dir = dir.string();
  const RunResult r = run(c);
  REQUIRE(r.status == kExitOk);
  CHECK(r.artifacts.size() == 2);
  const std::string img = slurp(dir / "render.pgm");
  CHECK(img.rfind("P5 256 256 255\n", 0) == 0);
  CHECK(img.size() == 15 + 256 * 256);
  std::vector<std::uint64_t> counts;
  for (const auto& rec : records(dir / "render.jsonl"))
    if (rec["record"] == "components") counts.push_back(rec["count"]);
  REQUIRE(counts.size() == 3);
  CHECK(counts[0] == 1);
  CHECK(counts[1] == 3);
}

TEST_CASE("an invalid config creates no files and exits with status 1") {
  JobConfig c = parse_config(R"({"command": "criterion", "params": {"C": 0.5, "fractions": ["1/3", "1/2"]}})");
  const fs::path dir = scratch("invalid");
  c.out_dir = dir.string();
  const RunResult r = run(c);
  CHECK(r.status == kExitValidation);
  CHECK(r.artifacts.empty());
  CHECK_FALSE(r.errors.empty());
  CHECK_FALSE(fs::exists(dir));
}

TEST_CASE("a theorem candidate outside (0, 1) is rejected before any output") {
  JobConfig c = parse_config(R"({"command": "criterion", "params": {"C": 2, "generator": {"kind": "tower", "q0": 3}},
      "criterion": {"candidate": {"kind": "theorem", "alpha": 0.5, "beta": 1.5}}})");
  const fs::path dir = scratch("theorem");
  c.out_dir = dir.string();
  const RunResult r = run(c);
  CHECK(r.status == kExitValidation);
  CHECK(mentions(r.errors, "not in (0,1)"));
  CHECK_FALSE(fs::exists(dir));
}

TEST_CASE("address run reports digits") {
  JobConfig c = parse_config(R"({"command": "address", "params": {"C": 1.5, "fractions": ["1/3", "1/2", "1/3"]},
      "precision": 256, "address": {"re": "1", "im": "0"}})");
  const fs::path dir = scratch("address");
  c.out_dir = dir.string();
  REQUIRE(run(c).status == kExitOk);
  const auto recs = records(dir / "address.jsonl");
  CHECK(recs.back()["record"] == "address");
  CHECK(recs.back()["digits"] == nlohmann::json::array({0, 0, 0}));
}
