#include "rulemine/rules.hpp"

#include <algorithm>
#include <set>

#include <fmt/format.h>

#include "rulemine/errors.hpp"

namespace rulemine {
namespace {

void check_attributes(const Rule& rule, std::size_t attribute_count) {
  for (const auto& c : rule.antecedent) {
    if (c.attribute >= attribute_count) {
      throw SchemaError("rule references attribute " + std::to_string(c.attribute) +
                        " outside the schema");
    }
  }
}

}  // namespace

bool NominalMembership::contains(std::size_t v) const {
  return std::binary_search(values.begin(), values.end(), v);
}

bool Condition::holds(double value) const {
  if (const auto* m = std::get_if<NominalMembership>(&test)) {
    return m->contains(static_cast<std::size_t>(value));
  }
  const auto& iv = std::get<NumericInterval>(test);
  return iv.lo <= value && value <= iv.hi;
}

void validate(const Rule& rule, const AttributeSchema& schema) {
  if (rule.consequent >= schema.class_count()) {
    throw SchemaError("rule consequent " + std::to_string(rule.consequent) + " is not a class");
  }
  check_attributes(rule, schema.attribute_count());
  std::set<std::size_t> seen;
  for (const auto& c : rule.antecedent) {
    const auto& attr = schema.attribute(c.attribute);
    if (!seen.insert(c.attribute).second) {
      throw SchemaError("rule uses attribute \"" + attr.name + "\" twice");
    }
    if (const auto* m = std::get_if<NominalMembership>(&c.test)) {
      if (!attr.is_nominal()) throw SchemaError("membership test on numeric \"" + attr.name + "\"");
      if (m->values.empty() || m->values.size() >= attr.values.size()) {
        throw SchemaError("membership on \"" + attr.name + "\" must be a proper nonempty subset");
      }
      if (!std::is_sorted(m->values.begin(), m->values.end()) ||
          std::adjacent_find(m->values.begin(), m->values.end()) != m->values.end() ||
          m->values.back() >= attr.values.size()) {
        throw SchemaError("membership on \"" + attr.name + "\" has invalid value indices");
      }
    } else {
      const auto& iv = std::get<NumericInterval>(c.test);
      if (attr.is_nominal()) throw SchemaError("interval test on nominal \"" + attr.name + "\"");
      if (!(0.0 <= iv.lo && iv.lo <= iv.hi && iv.hi <= 1.0)) {
        throw SchemaError("interval on \"" + attr.name + "\" must satisfy 0 <= lo <= hi <= 1");
      }
    }
  }
}

bool matches(const Rule& rule, std::span<const double> example, const Encoding& encoding) {
  if (example.size() != encoding.dimension()) {
    throw SchemaError("example width " + std::to_string(example.size()) +
                      " does not match encoding dimension " +
                      std::to_string(encoding.dimension()));
  }
  check_attributes(rule, encoding.schema().attribute_count());
  return std::all_of(rule.antecedent.begin(), rule.antecedent.end(), [&](const Condition& c) {
    return c.holds(encoding.attribute_value(example, c.attribute));
  });
}

bool matches(const Rule& rule, const EncodedDataset& data, std::size_t i) {
  for (const auto& c : rule.antecedent) {
    if (!c.holds(data.attribute_value(i, c.attribute))) return false;
  }
  return true;
}

RuleStats measure(const Rule& rule, const EncodedDataset& data) {
  if (data.empty()) throw DataError("cannot measure a rule on an empty dataset");
  check_attributes(rule, data.schema().attribute_count());
  RuleStats stats;
  stats.total = data.size();
  for (std::size_t i = 0; i < data.size(); ++i) {
    if (!matches(rule, data, i)) continue;
    ++stats.matched;
    if (data.label(i) == rule.consequent) ++stats.correct;
  }
  return stats;
}

double support(const Rule& rule, const EncodedDataset& data) { return measure(rule, data).support(); }

double confidence(const Rule& rule, const EncodedDataset& data) {
  return measure(rule, data).confidence();
}

Classification classify(const RuleList& list, std::span<const double> example,
                        const Encoding& encoding) {
  for (std::size_t r = 0; r < list.rules.size(); ++r) {
    if (matches(list.rules[r], example, encoding)) return {list.rules[r].consequent, r};
  }
  return {list.default_class, std::nullopt};
}

Classification classify(const RuleList& list, const EncodedDataset& data, std::size_t i) {
  for (std::size_t r = 0; r < list.rules.size(); ++r) {
    if (matches(list.rules[r], data, i)) return {list.rules[r].consequent, r};
  }
  return {list.default_class, std::nullopt};
}

std::string render(const Rule& rule, const Encoding& encoding) {
  const auto& schema = encoding.schema();
  std::string out = "IF ";
  if (rule.antecedent.empty()) out += "TRUE";
  for (std::size_t k = 0; k < rule.antecedent.size(); ++k) {
    const auto& c = rule.antecedent[k];
    const auto& attr = schema.attribute(c.attribute);
    if (k) out += " AND ";
    if (const auto* m = std::get_if<NominalMembership>(&c.test)) {
      out += attr.name + " IN {";
      for (std::size_t v = 0; v < m->values.size(); ++v) {
        if (v) out += ", ";
        out += attr.values.at(m->values[v]);
      }
      out += "}";
    } else {
      const auto& iv = std::get<NumericInterval>(c.test);
      out += fmt::format("{} IN [{:.2f}, {:.2f}]", attr.name, encoding.unscale(c.attribute, iv.lo),
                         encoding.unscale(c.attribute, iv.hi));
    }
  }
  out += " THEN " + schema.class_attribute() + " = " + schema.class_labels().at(rule.consequent);
  return out;
}

std::string render(const RuleList& list, const Encoding& encoding) {
  std::string out;
  for (std::size_t r = 0; r < list.rules.size(); ++r) {
    out += fmt::format("{:>3}. {}\n", r + 1, render(list.rules[r], encoding));
  }
  out += fmt::format("  *. DEFAULT {} = {}\n", encoding.schema().class_attribute(),
                     encoding.schema().class_labels().at(list.default_class));
  return out;
}

}  // namespace rulemine
