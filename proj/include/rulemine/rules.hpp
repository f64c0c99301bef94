#ifndef RULEMINE_RULES_HPP
#define RULEMINE_RULES_HPP

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "rulemine/dataset.hpp"

namespace rulemine {

/// attribute IN {values}; values are sorted declared-value indices.
struct NominalMembership {
  std::vector<std::size_t> values;

  bool contains(std::size_t v) const;
  bool operator==(const NominalMembership&) const = default;
};

/// lo <= scaled value <= hi, both ends closed.
struct NumericInterval {
  double lo = 0.0;
  double hi = 1.0;

  bool operator==(const NumericInterval&) const = default;
};

struct Condition {
  std::size_t attribute = 0;
  std::variant<NominalMembership, NumericInterval> test;

  /// `value` is the attribute-level value (see Encoding::attribute_value).
  bool holds(double value) const;
  bool operator==(const Condition&) const = default;
};

struct Provenance {
  std::size_t order = 0;
  double support = 0.0;
  double confidence = 0.0;

  bool operator==(const Provenance&) const = default;
};

struct Rule {
  std::vector<Condition> antecedent;
  std::size_t consequent = 0;
  Provenance provenance;

  bool operator==(const Rule&) const = default;
};

struct RuleList {
  std::vector<Rule> rules;
  std::size_t default_class = 0;

  bool operator==(const RuleList&) const = default;
};

struct Classification {
  std::size_t label = 0;
  std::optional<std::size_t> fired;  // 0-based rule index; empty when the default class applied
};

/// Throws SchemaError when the rule breaks structural invariants under `schema`.
void validate(const Rule& rule, const AttributeSchema& schema);

bool matches(const Rule& rule, std::span<const double> example, const Encoding& encoding);
bool matches(const Rule& rule, const EncodedDataset& data, std::size_t i);

struct RuleStats {
  std::size_t matched = 0;
  std::size_t correct = 0;  // matched and of the consequent class
  std::size_t total = 0;

  double support() const { return total ? static_cast<double>(correct) / total : 0.0; }
  double confidence() const { return matched ? static_cast<double>(correct) / matched : 0.0; }
};

/// Throws DataError on an empty dataset.
RuleStats measure(const Rule& rule, const EncodedDataset& data);
double support(const Rule& rule, const EncodedDataset& data);
double confidence(const Rule& rule, const EncodedDataset& data);

Classification classify(const RuleList& list, std::span<const double> example,
                        const Encoding& encoding);
Classification classify(const RuleList& list, const EncodedDataset& data, std::size_t i);

/// `IF salary IN [1200.00, 3400.00] AND marital_status IN {married} THEN status = Accept`
std::string render(const Rule& rule, const Encoding& encoding);
std::string render(const RuleList& list, const Encoding& encoding);

}  // namespace rulemine

#endif
