#include "rulemine/cli.hpp"

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <optional>
#include <ostream>
#include <sstream>

#include <fmt/format.h>

#include "CLI11.hpp"
#include "rulemine/csv.hpp"
#include "rulemine/errors.hpp"
#include "rulemine/evaluation.hpp"
#include "rulemine/miner.hpp"
#include "rulemine/model.hpp"
#include "rulemine/synth.hpp"

namespace rulemine::cli {
namespace {

namespace fs = std::filesystem;

struct TrainFlags {
  std::string data, schema, out, config;
  std::optional<std::uint64_t> seed;
  std::optional<double> test_fraction;
};

struct PredictFlags {
  std::string model, input, out;
};

struct EvaluateFlags {
  std::string model, data, out, positive;
  bool baseline = false;
  bool all_rows = false;
};

struct SynthFlags {
  std::size_t rows = 0;
  std::optional<std::uint64_t> seed;
  std::string profile, out;
};

std::uint64_t resolve_seed(const std::optional<std::uint64_t>& flag) {
  if (flag) return *flag;
  if (const char* env = std::getenv("RULEMINE_SEED"); env && *env) {
    char* end = nullptr;
    const auto v = std::strtoull(env, &end, 10);
    if (*end != '\0') throw ConfigError("RULEMINE_SEED must be an unsigned integer");
    return v;
  }
  return 0;
}

nlohmann::json read_json(const std::string& path, bool config) {
  std::ifstream in(path);
  if (!in) {
    const auto msg = "cannot open " + path;
    if (config) throw ConfigError(msg);
    throw SchemaError(msg);
  }
  try {
    return nlohmann::json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    const auto msg = path + " is not valid JSON: " + e.what();
    if (config) throw ConfigError(msg);
    throw SchemaError(msg);
  }
}

RawDataset read_data(const std::string& path, const AttributeSchema& schema, ParseOptions options = {}) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw SchemaError("cannot open " + path);
  return parse_csv(in, schema, options);
}

void write_json(const fs::path& path, const nlohmann::ordered_json& doc) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write " + path.string());
  out << doc.dump(2) << '\n';
}

fs::path sibling(const fs::path& path, const std::string& suffix) {
  auto p = path;
  p.replace_extension(suffix);
  return p;
}

std::size_t resolve_positive(const AttributeSchema& schema, const std::string& label) {
  if (label.empty()) return 1;
  const auto idx = schema.class_index(label);
  if (!idx) throw ConfigError("positive class \"" + label + "\" is not a declared label");
  return *idx;
}

int cmd_train(const TrainFlags& f, std::ostream& out) {
  const auto schema = AttributeSchema::from_json(read_json(f.schema, false));
  const auto raw = read_data(f.data, schema);
  if (raw.size() == 0) throw DataError("training data has no rows");

  MinerConfig config;
  if (!f.config.empty()) apply_overrides(config, read_json(f.config, true));
  const auto seed = resolve_seed(f.seed);
  config.set_seed(seed);
  if (f.test_fraction && !(*f.test_fraction > 0.0 && *f.test_fraction < 1.0)) {
    throw ConfigError("--test-fraction must lie strictly between 0 and 1");
  }

  RawDataset raw_train = raw;
  std::optional<RawDataset> raw_test;
  if (f.test_fraction) {
    const auto split = stratified_split_indices(raw.labels, schema.class_count(), *f.test_fraction, seed);
    raw_train = raw.subset(split.train);
    raw_test = raw.subset(split.test);
  }
  const auto train = encode(raw_train);
  const auto result = mine(train, config);

  ModelArtifact model{ModelArtifact::kFormatVersion,
                      schema,
                      train.encoding().ranges(),
                      result.network,
                      result.rules,
                      config,
                      seed,
                      std::nullopt};
  if (f.test_fraction) model.split = SplitSpec{*f.test_fraction, seed};
  save_model(model, f.out);
  write_json(sibling(f.out, ".report.json"), to_json(result.report, train.encoding()));

  out << render(result.rules, train.encoding());
  if (raw_test) {
    const auto test = encode(*raw_test, train.encoding_ptr());
    out << '\n' << render_table({{"LVQ+PSO", evaluate(result.rules, test)}});
  }
  return result.rules.rules.empty() ? kNoRules : kOk;
}

int cmd_predict(const PredictFlags& f, std::ostream& out, std::ostream& err) {
  const auto model = load_model(f.model);
  const auto encoding = model.encoding();
  const auto& schema = model.schema;

  std::ifstream in(f.input, std::ios::binary);
  if (!in) throw SchemaError("cannot open " + f.input);
  const auto table = csv::read(in);
  if (table.rows.empty()) throw DataError("input has no rows to score");

  std::vector<std::size_t> column_of(schema.attribute_count(), SIZE_MAX);
  for (std::size_t c = 0; c < table.header.size(); ++c) {
    const auto& name = table.header[c];
    if (name == schema.class_attribute()) continue;
    const auto a = schema.attribute_index(name);
    if (!a) throw SchemaError("unexpected column \"" + name + "\"");
    column_of[*a] = c;
  }
  for (std::size_t a = 0; a < column_of.size(); ++a) {
    if (column_of[a] == SIZE_MAX) throw SchemaError("missing column \"" + schema.attribute(a).name + "\"");
  }

  std::ofstream file;
  if (!f.out.empty()) {
    file.open(f.out, std::ios::binary);
    if (!file) throw Error("cannot write " + f.out);
  }
  std::ostream& sink = f.out.empty() ? out : file;
  csv::write_row(sink, {"prediction", "rule", "detail"});

  std::size_t scored = 0;
  for (std::size_t r = 0; r < table.rows.size(); ++r) {
    const auto& fields = table.rows[r];
    try {
      if (fields.size() != table.header.size()) {
        throw ValueError(r + 1, fmt::format("expected {} fields, found {}", table.header.size(), fields.size()));
      }
      Record record;
      for (std::size_t a = 0; a < schema.attribute_count(); ++a) {
        record.push_back(parse_value(schema.attribute(a), fields[column_of[a]], r + 1));
      }
      const auto x = encoding->encode(record);
      const auto c = classify(model.rules, x, *encoding);
      const auto& label = schema.class_labels().at(c.label);
      if (c.fired) {
        csv::write_row(sink, {label, std::to_string(*c.fired + 1), render(model.rules.rules[*c.fired], *encoding)});
      } else {
        csv::write_row(sink, {label, "default", "-"});
      }
      ++scored;
    } catch (const ValueError& e) {
      csv::write_row(sink, {"error", "-", e.what()});
      err << "warning: " << e.what() << '\n';
    }
  }
  return scored > 0 ? kOk : kInputError;
}

int cmd_evaluate(const EvaluateFlags& f, std::ostream& out) {
  const auto model = load_model(f.model);
  const auto raw = read_data(f.data, model.schema);
  if (raw.size() == 0) throw DataError("evaluation data has no rows");
  const auto positive = resolve_positive(model.schema, f.positive);

  RawDataset raw_test = raw;
  RawDataset raw_train = raw;
  if (model.split && !f.all_rows) {
    const auto split = stratified_split_indices(raw.labels, model.schema.class_count(),
                                                model.split->test_fraction, model.split->seed);
    raw_test = raw.subset(split.test);
    raw_train = raw.subset(split.train);
  }

  const auto test = encode(raw_test, model.encoding());
  std::vector<std::pair<std::string, EvalReport>> reports{{"LVQ+PSO", evaluate(model.rules, test, positive)}};
  nlohmann::ordered_json doc;
  doc["lvq_pso"] = to_json(reports.front().second);
  if (f.baseline) {
    const auto train = encode(raw_train);
    const auto baseline = mine_greedy_baseline(train, model.config.min_confidence);
    const auto baseline_test = encode(raw_test, train.encoding_ptr());
    reports.emplace_back("Greedy", evaluate(baseline, baseline_test, positive));
    doc["baseline"] = to_json(reports.back().second);
  }
  out << render_table(reports);
  if (!f.out.empty()) write_json(f.out, doc);
  return kOk;
}

int cmd_synth(const SynthFlags& f, std::ostream& out) {
  const auto profile = synth::profile_from_string(f.profile);
  const auto data = synth::generate(profile, f.rows, resolve_seed(f.seed));
  const fs::path prefix(f.out);
  const auto csv_path = fs::path(prefix.string() + ".csv");
  const auto schema_path = fs::path(prefix.string() + ".schema.json");
  {
    std::ofstream csv_out(csv_path, std::ios::binary);
    if (!csv_out) throw Error("cannot write " + csv_path.string());
    synth::write_csv(data, csv_out);
  }
  write_json(schema_path, data.schema.to_json());
  out << "wrote " << csv_path.string() << " (" << data.size() << " rows) and " << schema_path.string()
      << '\n';
  return kOk;
}

int cmd_rules(const std::string& model_path, std::ostream& out) {
  const auto model = load_model(model_path);
  out << render(model.rules, *model.encoding());
  return kOk;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Rule mining with LVQ-seeded binary PSO"};
  app.require_subcommand(1);

  TrainFlags train;
  auto* train_cmd = app.add_subcommand("train", "Mine a rule list and write a model");
  train_cmd->add_option("--data", train.data, "Labelled CSV")->required();
  train_cmd->add_option("--schema", train.schema, "Schema JSON")->required();
  train_cmd->add_option("--out", train.out, "Model JSON to write")->required();
  train_cmd->add_option("--seed", train.seed, "Random seed (falls back to RULEMINE_SEED)");
  train_cmd->add_option("--config", train.config, "JSON overrides for miner/lvq/pso settings");
  train_cmd->add_option("--test-fraction", train.test_fraction, "Hold out a stratified test split");

  PredictFlags predict;
  auto* predict_cmd = app.add_subcommand("predict", "Score applications with a model");
  predict_cmd->add_option("--model", predict.model)->required();
  predict_cmd->add_option("--input", predict.input, "CSV, class column optional")->required();
  predict_cmd->add_option("--out", predict.out, "CSV output (default stdout)");

  EvaluateFlags evaluate_flags;
  auto* evaluate_cmd = app.add_subcommand("evaluate", "Evaluate a model on labelled data");
  evaluate_cmd->add_option("--model", evaluate_flags.model)->required();
  evaluate_cmd->add_option("--data", evaluate_flags.data)->required();
  evaluate_cmd->add_option("--out", evaluate_flags.out, "JSON report to write");
  evaluate_cmd->add_flag("--baseline", evaluate_flags.baseline, "Also train and score the greedy baseline");
  evaluate_cmd->add_flag("--all-rows", evaluate_flags.all_rows, "Score every row even if the model recorded a split");
  evaluate_cmd->add_option("--positive-class", evaluate_flags.positive, "Label whose misses count as Type I error");

  SynthFlags synth_flags;
  auto* synth_cmd = app.add_subcommand("synth", "Generate a synthetic dataset and schema");
  synth_cmd->add_option("--rows", synth_flags.rows)->required();
  synth_cmd->add_option("--seed", synth_flags.seed);
  synth_cmd->add_option("--profile", synth_flags.profile, "separable | credit3 | fragmented")->required();
  synth_cmd->add_option("--out", synth_flags.out, "Output prefix (<prefix>.csv, <prefix>.schema.json)")->required();

  std::string rules_model;
  auto* rules_cmd = app.add_subcommand("rules", "Print a model's rule list");
  rules_cmd->add_option("--model", rules_model)->required();

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    app.exit(e, out, err);
    return kConfigError;
  }

  try {
    if (*train_cmd) return cmd_train(train, out);
    if (*predict_cmd) return cmd_predict(predict, out, err);
    if (*evaluate_cmd) return cmd_evaluate(evaluate_flags, out);
    if (*synth_cmd) return cmd_synth(synth_flags, out);
    if (*rules_cmd) return cmd_rules(rules_model, out);
  } catch (const ConfigError& e) {
    err << "config error: " << e.what() << '\n';
    return kConfigError;
  } catch (const SchemaError& e) {
    err << "schema error: " << e.what() << '\n';
    return kInputError;
  } catch (const ValueError& e) {
    err << "value error: " << e.what() << '\n';
    return kInputError;
  } catch (const SplitError& e) {
    err << "split error: " << e.what() << '\n';
    return kInputError;
  } catch (const DataError& e) {
    err << "data error: " << e.what() << '\n';
    return kInputError;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kInputError;
  }
  return kConfigError;
}

}  // namespace rulemine::cli
