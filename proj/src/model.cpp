#include "rulemine/model.hpp"

#include <fstream>
#include <functional>
#include <map>

#include "rulemine/errors.hpp"

namespace rulemine {
namespace {

using ojson = nlohmann::ordered_json;
using json = nlohmann::json;

const json& field(const json& node, const char* key) {
  if (!node.is_object() || !node.contains(key)) {
    throw SchemaError(std::string("model document is missing \"") + key + "\"");
  }
  return node.at(key);
}

template <typename T>
T get(const json& node, const char* key) {
  try {
    return field(node, key).get<T>();
  } catch (const json::exception& e) {
    throw SchemaError(std::string("model field \"") + key + "\" has the wrong type");
  }
}

// ---- configuration --------------------------------------------------------

using Setter = std::function<void(const json&)>;

template <typename T>
Setter set(T& target, const std::string& key) {
  return [&target, key](const json& v) {
    if constexpr (std::is_same_v<T, std::size_t> || std::is_same_v<T, std::uint64_t>) {
      if (!v.is_number_unsigned()) throw ConfigError("\"" + key + "\" must be a non-negative integer");
    } else {
      if (!v.is_number()) throw ConfigError("\"" + key + "\" must be a number");
    }
    target = v.get<T>();
  };
}

Setter set_bounds(VelocityBounds& target, const std::string& key) {
  return [&target, key](const json& v) {
    if (!v.is_array() || v.size() != 2 || !v[0].is_number() || !v[1].is_number()) {
      throw ConfigError("\"" + key + "\" must be a [lower, upper] pair");
    }
    target = {v[0].get<double>(), v[1].get<double>()};
  };
}

void apply_section(const json& section, const std::string& name,
                   const std::map<std::string, Setter>& setters) {
  if (!section.is_object()) throw ConfigError("config section \"" + name + "\" must be an object");
  for (const auto& [key, value] : section.items()) {
    const auto it = setters.find(key);
    if (it == setters.end()) throw ConfigError("unknown config key \"" + name + "." + key + "\"");
    it->second(value);
  }
}

// ---- LVQ ------------------------------------------------------------------

ojson network_to_json(const LvqNetwork& net) {
  ojson doc;
  doc["allocation"] = net.allocation;
  doc["stop"] = to_string(net.stop);
  doc["movement_trace"] = net.movement_trace;
  auto centroids = ojson::array();
  for (const auto& c : net.centroids) {
    ojson node;
    node["class"] = c.label;
    node["represented_count"] = c.represented_count;
    node["position"] = c.position;
    node["deviation"] = c.deviation;
    centroids.push_back(node);
  }
  doc["centroids"] = centroids;
  return doc;
}

LvqNetwork network_from_json(const json& doc, std::size_t dimension, std::size_t classes) {
  LvqNetwork net;
  net.allocation = get<std::vector<std::size_t>>(doc, "allocation");
  net.stop = lvq_stop_from_string(get<std::string>(doc, "stop"));
  net.movement_trace = get<std::vector<double>>(doc, "movement_trace");
  for (const auto& node : field(doc, "centroids")) {
    Centroid c;
    c.label = get<std::size_t>(node, "class");
    c.represented_count = get<std::size_t>(node, "represented_count");
    c.position = get<std::vector<double>>(node, "position");
    c.deviation = get<std::vector<double>>(node, "deviation");
    if (c.label >= classes || c.position.size() != dimension || c.deviation.size() != dimension) {
      throw SchemaError("centroid does not match the model schema");
    }
    net.centroids.push_back(std::move(c));
  }
  return net;
}

}  // namespace

std::shared_ptr<const Encoding> ModelArtifact::encoding() const {
  return std::make_shared<const Encoding>(schema, ranges);
}

ojson rule_to_json(const Rule& rule, const Encoding& encoding) {
  const auto& schema = encoding.schema();
  ojson node;
  node["consequent"] = schema.class_labels().at(rule.consequent);
  auto conditions = ojson::array();
  for (const auto& c : rule.antecedent) {
    const auto& attr = schema.attribute(c.attribute);
    ojson cond;
    cond["attribute"] = attr.name;
    if (const auto* m = std::get_if<NominalMembership>(&c.test)) {
      auto values = ojson::array();
      for (auto v : m->values) values.push_back(attr.values.at(v));
      cond["in"] = values;
    } else {
      const auto& iv = std::get<NumericInterval>(c.test);
      cond["lo"] = iv.lo;
      cond["hi"] = iv.hi;
    }
    conditions.push_back(cond);
  }
  node["antecedent"] = conditions;
  node["provenance"] = {{"order", rule.provenance.order},
                        {"support", rule.provenance.support},
                        {"confidence", rule.provenance.confidence}};
  node["text"] = render(rule, encoding);
  return node;
}

Rule rule_from_json(const json& node, const Encoding& encoding) {
  const auto& schema = encoding.schema();
  Rule rule;
  const auto consequent = schema.class_index(get<std::string>(node, "consequent"));
  if (!consequent) throw SchemaError("rule consequent is not a declared class label");
  rule.consequent = *consequent;
  for (const auto& cond : field(node, "antecedent")) {
    const auto a = schema.attribute_index(get<std::string>(cond, "attribute"));
    if (!a) throw SchemaError("rule references an undeclared attribute");
    const auto& attr = schema.attribute(*a);
    if (cond.contains("in")) {
      NominalMembership m;
      for (const auto& v : cond.at("in")) {
        if (!v.is_string()) throw SchemaError("membership values must be strings");
        const auto idx = attr.value_index(v.get<std::string>());
        if (!idx) throw SchemaError("rule uses an undeclared value of \"" + attr.name + "\"");
        m.values.push_back(*idx);
      }
      std::sort(m.values.begin(), m.values.end());
      rule.antecedent.push_back({*a, std::move(m)});
    } else {
      rule.antecedent.push_back({*a, NumericInterval{get<double>(cond, "lo"), get<double>(cond, "hi")}});
    }
  }
  const auto& prov = field(node, "provenance");
  rule.provenance = {get<std::size_t>(prov, "order"), get<double>(prov, "support"),
                     get<double>(prov, "confidence")};
  validate(rule, schema);
  return rule;
}

ojson config_to_json(const MinerConfig& c) {
  ojson doc;
  doc["miner"] = {{"support_factor", c.support_factor},
                  {"min_confidence", c.min_confidence},
                  {"max_attempts", c.max_attempts},
                  {"min_represented", c.min_represented},
                  {"min_covered", c.min_covered}};
  doc["lvq"] = {{"centroid_count", c.lvq.centroid_count},
                {"learning_rate", c.lvq.learning_rate},
                {"max_epochs", c.lvq.max_epochs},
                {"stability_threshold", c.lvq.stability_threshold},
                {"repulsion_ratio", c.lvq.repulsion_ratio},
                {"seed", c.lvq.seed}};
  const auto& p = c.pso;
  doc["pso"] = {{"swarm_size", p.swarm_size},
                {"max_iterations", p.max_iterations},
                {"inertia", p.inertia},
                {"cognitive", p.cognitive},
                {"social", p.social},
                {"veloc1", {p.veloc1.lower, p.veloc1.upper}},
                {"veloc2", {p.veloc2.lower, p.veloc2.upper}},
                {"weights",
                 {{"confidence", p.weights.confidence},
                  {"support", p.weights.support},
                  {"length", p.weights.length}}},
                {"interval_velocity_max", p.interval_velocity_max},
                {"stagnation_limit", p.stagnation_limit},
                {"seed", p.seed}};
  return doc;
}

void apply_overrides(MinerConfig& c, const json& doc) {
  if (!doc.is_object()) throw ConfigError("config document must be a JSON object");
  auto& p = c.pso;
  const std::map<std::string, std::function<void(const json&)>> sections{
      {"miner",
       [&](const json& s) {
         apply_section(s, "miner",
                       {{"support_factor", set(c.support_factor, "support_factor")},
                        {"min_confidence", set(c.min_confidence, "min_confidence")},
                        {"max_attempts", set(c.max_attempts, "max_attempts")},
                        {"min_represented", set(c.min_represented, "min_represented")},
                        {"min_covered", set(c.min_covered, "min_covered")}});
       }},
      {"lvq",
       [&](const json& s) {
         apply_section(s, "lvq",
                       {{"centroid_count", set(c.lvq.centroid_count, "centroid_count")},
                        {"learning_rate", set(c.lvq.learning_rate, "learning_rate")},
                        {"max_epochs", set(c.lvq.max_epochs, "max_epochs")},
                        {"stability_threshold", set(c.lvq.stability_threshold, "stability_threshold")},
                        {"repulsion_ratio", set(c.lvq.repulsion_ratio, "repulsion_ratio")},
                        {"seed", set(c.lvq.seed, "seed")}});
       }},
      {"pso", [&](const json& s) {
         apply_section(
             s, "pso",
             {{"swarm_size", set(p.swarm_size, "swarm_size")},
              {"max_iterations", set(p.max_iterations, "max_iterations")},
              {"inertia", set(p.inertia, "inertia")},
              {"cognitive", set(p.cognitive, "cognitive")},
              {"social", set(p.social, "social")},
              {"veloc1", set_bounds(p.veloc1, "veloc1")},
              {"veloc2", set_bounds(p.veloc2, "veloc2")},
              {"weights",
               [&](const json& w) {
                 apply_section(w, "pso.weights",
                               {{"confidence", set(p.weights.confidence, "confidence")},
                                {"support", set(p.weights.support, "support")},
                                {"length", set(p.weights.length, "length")}});
               }},
              {"interval_velocity_max", set(p.interval_velocity_max, "interval_velocity_max")},
              {"stagnation_limit", set(p.stagnation_limit, "stagnation_limit")},
              {"seed", set(p.seed, "seed")}});
       }}};
  for (const auto& [key, value] : doc.items()) {
    const auto it = sections.find(key);
    if (it == sections.end()) throw ConfigError("unknown config section \"" + key + "\"");
    it->second(value);
  }
}

ojson to_json(const ModelArtifact& model) {
  const auto encoding = model.encoding();
  ojson doc;
  doc["format_version"] = model.format_version;
  doc["schema"] = model.schema.to_json();
  auto ranges = ojson::object();
  for (std::size_t a = 0; a < model.schema.attribute_count(); ++a) {
    if (model.schema.attribute(a).is_nominal()) continue;
    ranges[model.schema.attribute(a).name] = {model.ranges[a].min, model.ranges[a].max};
  }
  doc["numeric_ranges"] = ranges;
  doc["seed"] = model.seed;
  if (model.split) {
    doc["split"] = {{"test_fraction", model.split->test_fraction}, {"seed", model.split->seed}};
  } else {
    doc["split"] = nullptr;
  }
  doc["config"] = config_to_json(model.config);
  auto rules = ojson::array();
  for (const auto& r : model.rules.rules) rules.push_back(rule_to_json(r, *encoding));
  doc["rules"] = {{"default_class", model.schema.class_labels().at(model.rules.default_class)},
                  {"list", rules}};
  doc["lvq"] = network_to_json(model.network);
  return doc;
}

ModelArtifact model_from_json(const json& doc) {
  const int version = get<int>(doc, "format_version");
  if (version != ModelArtifact::kFormatVersion) {
    throw SchemaError("unsupported model format_version " + std::to_string(version));
  }
  auto schema = AttributeSchema::from_json(field(doc, "schema"));
  std::vector<NumericRange> ranges(schema.attribute_count());
  const auto& range_doc = field(doc, "numeric_ranges");
  for (std::size_t a = 0; a < schema.attribute_count(); ++a) {
    const auto& attr = schema.attribute(a);
    if (attr.is_nominal()) continue;
    const auto pair = get<std::vector<double>>(range_doc, attr.name.c_str());
    if (pair.size() != 2) throw SchemaError("numeric range of \"" + attr.name + "\" must be a pair");
    ranges[a] = {pair[0], pair[1]};
  }

  MinerConfig config;
  try {
    apply_overrides(config, field(doc, "config"));
  } catch (const ConfigError& e) {
    throw SchemaError(std::string("model config: ") + e.what());
  }

  ModelArtifact model{version, schema, ranges, {}, {}, config, get<std::uint64_t>(doc, "seed"), std::nullopt};
  const auto& split = field(doc, "split");
  if (!split.is_null()) {
    model.split = SplitSpec{get<double>(split, "test_fraction"), get<std::uint64_t>(split, "seed")};
  }

  const auto encoding = model.encoding();
  const auto& rules = field(doc, "rules");
  const auto def = schema.class_index(get<std::string>(rules, "default_class"));
  if (!def) throw SchemaError("default class is not a declared class label");
  model.rules.default_class = *def;
  for (const auto& node : field(rules, "list")) {
    model.rules.rules.push_back(rule_from_json(node, *encoding));
  }
  model.network = network_from_json(field(doc, "lvq"), encoding->dimension(), schema.class_count());
  return model;
}

void save_model(const ModelArtifact& model, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write model file " + path.string());
  out << to_json(model).dump(2) << '\n';
}

ModelArtifact load_model(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw SchemaError("cannot open model file " + path.string());
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::exception& e) {
    throw SchemaError("model file is not valid JSON: " + std::string(e.what()));
  }
  return model_from_json(doc);
}

ojson to_json(const MiningReport& report, const Encoding& encoding) {
  const auto& labels = encoding.schema().class_labels();
  ojson doc;
  doc["support_reference"] = "uncovered";
  doc["training_size"] = report.training_size;
  doc["stop_reason"] = to_string(report.stop);
  doc["iterations"] = report.iterations;
  auto residue = ojson::object();
  auto attempts = ojson::object();
  for (std::size_t c = 0; c < labels.size(); ++c) {
    residue[labels[c]] = report.uncovered_residue.empty() ? 0 : report.uncovered_residue[c];
    attempts[labels[c]] = report.attempts.empty() ? 0 : report.attempts[c];
  }
  doc["uncovered_residue"] = residue;
  doc["attempts"] = attempts;
  doc["uncovered_final"] = report.uncovered_final;

  auto records = ojson::array();
  for (const auto& r : report.records) {
    ojson node;
    node["iteration"] = r.iteration;
    node["class"] = labels.at(r.label);
    node["support"] = r.support;
    node["confidence"] = r.confidence;
    node["min_support"] = r.min_support;
    node["covered"] = r.covered;
    node["rule"] = rule_to_json(r.rule, encoding);
    node["uncovered_before"] = r.uncovered_before;
    records.push_back(node);
  }
  doc["rules"] = records;

  auto swarms = ojson::array();
  for (const auto& s : report.swarms) {
    ojson node;
    node["iteration"] = s.iteration;
    node["class"] = labels.at(s.label);
    node["attempt"] = s.attempt;
    node["seeded_from"] = to_string(s.source);
    node["accepted"] = s.accepted;
    node["support"] = s.support;
    node["confidence"] = s.confidence;
    node["gbest_trace"] = s.gbest_trace;
    swarms.push_back(node);
  }
  doc["swarms"] = swarms;
  return doc;
}

}  // namespace rulemine
