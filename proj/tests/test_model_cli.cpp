#include <cstdlib>
#include <sstream>

#include "doctest.h"
#include "rulemine/cli.hpp"
#include "rulemine/csv.hpp"
#include "rulemine/errors.hpp"
#include "rulemine/evaluation.hpp"
#include "rulemine/model.hpp"
#include "rulemine/synth.hpp"
#include "support.hpp"

using namespace rulemine;
namespace fs = std::filesystem;

namespace {

struct Run {
  int code;
  std::string out;
  std::string err;
};

Run run(std::vector<std::string> args) {
  std::ostringstream out, err;
  const int code = cli::run(args, out, err);
  return {code, out.str(), err.str()};
}

// Writes <dir>/<name>.csv and <dir>/<name>.schema.json via the synth command.
std::string synth_files(const fs::path& dir, const std::string& profile, int rows, int seed,
                        const std::string& name) {
  const auto prefix = (dir / name).string();
  const auto r = run({"synth", "--profile", profile, "--rows", std::to_string(rows), "--seed",
                      std::to_string(seed), "--out", prefix});
  REQUIRE(r.code == cli::kOk);
  return prefix;
}

std::vector<std::string> lines(const std::string& text) {
  std::vector<std::string> out;
  std::istringstream in(text);
  for (std::string line; std::getline(in, line);) out.push_back(line);
  return out;
}

}  // namespace

TEST_CASE("train on the separable toy") {
  const auto dir = testing::temp_dir("cli_train");
  const auto prefix = synth_files(dir, "separable", 200, 1, "toy");
  const auto model = (dir / "toy.model.json").string();
  const auto r = run({"train", "--data", prefix + ".csv", "--schema", prefix + ".schema.json", "--out",
                      model, "--seed", "7", "--test-fraction", "0.25"});
  REQUIRE(r.code == cli::kOk);
  CHECK(r.out.find("DEFAULT label =") != std::string::npos);
  CHECK(r.out.find("LVQ+PSO") != std::string::npos);
  CHECK(fs::exists(dir / "toy.model.report.json"));

  const auto loaded = load_model(model);
  CHECK(loaded.rules.rules.size() <= 2);
  CHECK(loaded.seed == 7);
  REQUIRE(loaded.split.has_value());
  CHECK(loaded.split->test_fraction == 0.25);

  const auto report = nlohmann::json::parse(testing::slurp(dir / "toy.model.report.json"));
  CHECK(report["support_reference"] == "uncovered");

  SUBCASE("the same seed gives byte-identical models") {
    const auto again = (dir / "again.json").string();
    REQUIRE(run({"train", "--data", prefix + ".csv", "--schema", prefix + ".schema.json", "--out", again,
                 "--seed", "7", "--test-fraction", "0.25"})
                .code == cli::kOk);
    CHECK(testing::slurp(model) == testing::slurp(again));
  }

  SUBCASE("evaluate reproduces the held-out numbers") {
    const auto plain = run({"evaluate", "--model", model, "--data", prefix + ".csv"});
    REQUIRE(plain.code == cli::kOk);
    // train prints the rule list, a blank line, then the same table.
    CHECK(r.out.substr(r.out.find("\n\n") + 2) == plain.out);

    const auto e = run({"evaluate", "--model", model, "--data", prefix + ".csv", "--baseline", "--out",
                        (dir / "eval.json").string()});
    REQUIRE(e.code == cli::kOk);
    const auto doc = nlohmann::json::parse(testing::slurp(dir / "eval.json"));
    CHECK(doc["lvq_pso"]["accuracy"].get<double>() >= 0.95);
    CHECK(doc["lvq_pso"]["total"] == 50.0);
    CHECK(doc.contains("baseline"));
    CHECK(e.out.find("Greedy") != std::string::npos);

    const auto all = run({"evaluate", "--model", model, "--data", prefix + ".csv", "--all-rows", "--out",
                          (dir / "all.json").string()});
    REQUIRE(all.code == cli::kOk);
    CHECK(nlohmann::json::parse(testing::slurp(dir / "all.json"))["lvq_pso"]["total"] == 200.0);
  }

  SUBCASE("rules prints the stored list") {
    const auto rr = run({"rules", "--model", model});
    CHECK(rr.code == cli::kOk);
    CHECK(rr.out == render(loaded.rules, *loaded.encoding()));
  }
}

TEST_CASE("model round trip preserves evaluation") {
  const auto dir = testing::temp_dir("model_roundtrip");
  const auto raw = synth::generate(synth::Profile::credit3, 800, 3);
  const auto train = encode(raw);
  MinerConfig cfg;
  cfg.set_seed(3);
  cfg.pso.max_iterations = 80;
  const auto result = mine(train, cfg);
  ModelArtifact model{ModelArtifact::kFormatVersion, raw.schema, train.encoding().ranges(), result.network,
                      result.rules, cfg, 3, SplitSpec{0.3, 3}};
  const auto path = dir / "m.json";
  save_model(model, path);
  const auto back = load_model(path);

  CHECK(back.rules == model.rules);
  CHECK(back.schema == model.schema);
  CHECK(back.ranges == model.ranges);
  CHECK(back.network.centroids.size() == model.network.centroids.size());
  CHECK(back.network.centroids[0].position == model.network.centroids[0].position);
  CHECK(back.network.stop == model.network.stop);
  CHECK(config_to_json(back.config) == config_to_json(model.config));

  const auto test = encode(synth::generate(synth::Profile::credit3, 300, 9), model.encoding());
  const auto test_back = encode(synth::generate(synth::Profile::credit3, 300, 9), back.encoding());
  const auto a = evaluate(model.rules, test);
  const auto b = evaluate(back.rules, test_back);
  CHECK(to_json(a) == to_json(b));

  // Saving the loaded model reproduces the file.
  save_model(back, dir / "m2.json");
  CHECK(testing::slurp(path) == testing::slurp(dir / "m2.json"));

  auto doc = nlohmann::json::parse(testing::slurp(path));
  doc["format_version"] = 99;
  CHECK_THROWS_AS(model_from_json(doc), SchemaError);
  doc = nlohmann::json::parse(testing::slurp(path));
  doc.erase("rules");
  CHECK_THROWS_AS(model_from_json(doc), SchemaError);
}

TEST_CASE("config overrides") {
  MinerConfig c;
  apply_overrides(c, nlohmann::json::parse(
                         R"({"miner": {"min_confidence": 0.8}, "pso": {"swarm_size": 12, "veloc2": [-3, 3],
                             "weights": {"confidence": 0.5, "support": 0.4, "length": 0.1}}, "lvq": {"centroid_count": 8}})"));
  CHECK(c.min_confidence == 0.8);
  CHECK(c.pso.swarm_size == 12);
  CHECK(c.pso.veloc2.lower == -3.0);
  CHECK(c.pso.weights.support == 0.4);
  CHECK(c.lvq.centroid_count == 8);
  CHECK(c.support_factor == 0.1);

  CHECK_THROWS_AS(apply_overrides(c, nlohmann::json::parse(R"({"miner": {"bogus": 1}})")), ConfigError);
  CHECK_THROWS_AS(apply_overrides(c, nlohmann::json::parse(R"({"extra": {}})")), ConfigError);
  CHECK_THROWS_AS(apply_overrides(c, nlohmann::json::parse(R"({"pso": {"swarm_size": "big"}})")), ConfigError);
  CHECK_THROWS_AS(apply_overrides(c, nlohmann::json::parse(R"({"pso": {"swarm_size": -3}})")), ConfigError);
}

TEST_CASE("exit codes") {
  const auto dir = testing::temp_dir("cli_codes");
  const auto prefix = synth_files(dir, "separable", 100, 2, "d");
  const auto csv = prefix + ".csv";
  const auto schema = prefix + ".schema.json";
  const auto out = (dir / "m.json").string();

  SUBCASE("schema missing class_labels names the key") {
    auto doc = nlohmann::json::parse(testing::slurp(schema));
    doc.erase("class_labels");
    testing::spit(dir / "bad.schema.json", doc.dump());
    const auto r = run({"train", "--data", csv, "--schema", (dir / "bad.schema.json").string(), "--out", out});
    CHECK(r.code == cli::kInputError);
    CHECK(r.err.find("class_labels") != std::string::npos);
  }
  SUBCASE("bad value in the data") {
    auto text = testing::slurp(csv);
    text.replace(text.find('\n') + 1, 1, "z");
    testing::spit(dir / "bad.csv", text);
    const auto r = run({"train", "--data", (dir / "bad.csv").string(), "--schema", schema, "--out", out});
    CHECK(r.code == cli::kInputError);
    CHECK(r.err.find("row 1") != std::string::npos);
  }
  SUBCASE("config problems") {
    testing::spit(dir / "cfg.json", R"({"pso": {"swarm_size": 1}})");
    CHECK(run({"train", "--data", csv, "--schema", schema, "--out", out, "--config", (dir / "cfg.json").string()})
              .code == cli::kConfigError);
    CHECK(run({"train", "--data", csv, "--schema", schema, "--out", out, "--test-fraction", "1.5"}).code ==
          cli::kConfigError);
    CHECK(run({"train", "--data", csv}).code == cli::kConfigError);
    CHECK(run({"frobnicate"}).code == cli::kConfigError);
    CHECK(run({"synth", "--profile", "separable", "--rows", "10", "--out", (dir / "x").string()}).code ==
          cli::kConfigError);
    CHECK(run({"synth", "--profile", "nope", "--rows", "100", "--out", (dir / "x").string()}).code ==
          cli::kConfigError);
  }
  SUBCASE("zero rules still writes a model") {
    // No class has 1000 examples, so no class is ever targeted.
    testing::spit(dir / "strict.json", R"({"miner": {"min_covered": 1000}})");
    const auto r = run({"train", "--data", csv, "--schema", schema, "--out", out, "--config",
                        (dir / "strict.json").string()});
    CHECK(r.code == cli::kNoRules);
    const auto m = load_model(out);
    CHECK(m.rules.rules.empty());
    CHECK(r.out.find("DEFAULT") != std::string::npos);
  }
  SUBCASE("RULEMINE_SEED is the fallback seed") {
    ::setenv("RULEMINE_SEED", "5", 1);
    REQUIRE(run({"train", "--data", csv, "--schema", schema, "--out", out}).code == cli::kOk);
    ::unsetenv("RULEMINE_SEED");
    CHECK(load_model(out).seed == 5);
  }
}

TEST_CASE("predict") {
  const auto dir = testing::temp_dir("cli_predict");
  const auto prefix = synth_files(dir, "separable", 200, 1, "toy");
  const auto model = (dir / "m.json").string();
  REQUIRE(run({"train", "--data", prefix + ".csv", "--schema", prefix + ".schema.json", "--out", model,
               "--seed", "1"})
              .code == cli::kOk);
  const auto loaded = load_model(model);
  REQUIRE(loaded.rules.rules.size() == 1);
  const auto& rule_text = render(loaded.rules.rules[0], *loaded.encoding());
  const auto& first_label = loaded.schema.class_labels()[loaded.rules.rules[0].consequent];
  const auto& default_label = loaded.schema.class_labels()[loaded.rules.default_class];

  // One row per side of the boundary, one unparsable row; no class column.
  testing::spit(dir / "in.csv", "x2,x1\n0.5,0.1\n0.5,0.9\n0.5,abc\n");
  const auto r = run({"predict", "--model", model, "--input", (dir / "in.csv").string()});
  CHECK(r.code == cli::kOk);
  const auto out = lines(r.out);
  REQUIRE(out.size() == 4);
  CHECK(out[0] == "prediction,rule,detail");
  const auto matched = first_label == "low" ? out[1] : out[2];
  const auto fallback = first_label == "low" ? out[2] : out[1];
  CHECK(matched == first_label + ",1," + csv::quote(rule_text));
  CHECK(fallback == default_label + ",default,-");
  CHECK(out[3].rfind("error,-,", 0) == 0);
  CHECK(r.err.find("row 3") != std::string::npos);

  SUBCASE("--out writes the same rows") {
    const auto path = dir / "pred.csv";
    REQUIRE(run({"predict", "--model", model, "--input", (dir / "in.csv").string(), "--out", path.string()})
                .code == cli::kOk);
    CHECK(testing::slurp(path) == r.out);
  }
  SUBCASE("empty input or nothing scored") {
    testing::spit(dir / "empty.csv", "");
    CHECK(run({"predict", "--model", model, "--input", (dir / "empty.csv").string()}).code == cli::kInputError);
    testing::spit(dir / "header.csv", "x1,x2\n");
    CHECK(run({"predict", "--model", model, "--input", (dir / "header.csv").string()}).code == cli::kInputError);
    testing::spit(dir / "bad.csv", "x1,x2\nq,r\n");
    CHECK(run({"predict", "--model", model, "--input", (dir / "bad.csv").string()}).code == cli::kInputError);
  }
}
