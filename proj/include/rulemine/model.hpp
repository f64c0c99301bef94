#ifndef RULEMINE_MODEL_HPP
#define RULEMINE_MODEL_HPP

#include <cstdint>
#include <filesystem>
#include <memory>
#include <optional>
#include <vector>

#include "json.hpp"
#include "rulemine/dataset.hpp"
#include "rulemine/lvq.hpp"
#include "rulemine/miner.hpp"
#include "rulemine/rules.hpp"

namespace rulemine {

/// Held-out split used at training time, so evaluation can reproduce it.
struct SplitSpec {
  double test_fraction = 0.0;
  std::uint64_t seed = 0;
};

/// Everything needed to score new applications without the training data.
struct ModelArtifact {
  static constexpr int kFormatVersion = 1;

  int format_version = kFormatVersion;
  AttributeSchema schema;
  std::vector<NumericRange> ranges;  // per attribute; nominal entries unused
  LvqNetwork network;
  RuleList rules;
  MinerConfig config;
  std::uint64_t seed = 0;
  std::optional<SplitSpec> split;

  std::shared_ptr<const Encoding> encoding() const;
};

nlohmann::ordered_json to_json(const ModelArtifact& model);
/// Throws SchemaError on malformed or unsupported documents.
ModelArtifact model_from_json(const nlohmann::json& doc);

void save_model(const ModelArtifact& model, const std::filesystem::path& path);
ModelArtifact load_model(const std::filesystem::path& path);

nlohmann::ordered_json rule_to_json(const Rule& rule, const Encoding& encoding);
Rule rule_from_json(const nlohmann::json& node, const Encoding& encoding);

nlohmann::ordered_json config_to_json(const MinerConfig& config);
/// Applies a partial {"miner":{..},"lvq":{..},"pso":{..}} document.
/// Unknown keys or ill-typed values throw ConfigError.
void apply_overrides(MinerConfig& config, const nlohmann::json& doc);

nlohmann::ordered_json to_json(const MiningReport& report, const Encoding& encoding);

}  // namespace rulemine

#endif
