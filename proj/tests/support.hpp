#ifndef RULEMINE_TESTS_SUPPORT_HPP
#define RULEMINE_TESTS_SUPPORT_HPP

#include <algorithm>
#include <cstddef>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "rulemine/dataset.hpp"
#include "rulemine/random.hpp"
#include "rulemine/rules.hpp"

namespace testing {

using namespace rulemine;

inline Attribute nominal(std::string name, std::vector<std::string> values) {
  return {std::move(name), AttributeKind::nominal, std::move(values)};
}

inline Attribute numeric(std::string name) { return {std::move(name), AttributeKind::numeric, {}}; }

// marital_status {single, married, divorced}, salary; class status {Deny, Accept}.
inline AttributeSchema credit_schema() {
  return AttributeSchema({nominal("marital_status", {"single", "married", "divorced"}), numeric("salary")},
                         "status", {"Deny", "Accept"});
}

inline RawDataset raw_from(const AttributeSchema& schema, std::vector<Record> rows,
                           std::vector<std::size_t> labels) {
  return RawDataset{schema, std::move(rows), std::move(labels)};
}

inline EncodedDataset encoded_from(const AttributeSchema& schema, std::vector<Record> rows,
                                   std::vector<std::size_t> labels) {
  return encode(raw_from(schema, std::move(rows), std::move(labels)));
}

/// Random schema: 1..5 attributes, nominal cardinality 2..5, 2..4 classes.
inline AttributeSchema random_schema(Rng& rng) {
  const std::size_t n_attr = 1 + rng.below(5);
  std::vector<Attribute> attrs;
  for (std::size_t a = 0; a < n_attr; ++a) {
    const std::string name = "a" + std::to_string(a);
    if (rng.bernoulli(0.5)) {
      std::vector<std::string> values;
      const std::size_t k = 2 + rng.below(4);
      for (std::size_t v = 0; v < k; ++v) values.push_back("v" + std::to_string(v));
      attrs.push_back(nominal(name, values));
    } else {
      attrs.push_back(numeric(name));
    }
  }
  std::vector<std::string> labels;
  const std::size_t classes = 2 + rng.below(3);
  for (std::size_t c = 0; c < classes; ++c) labels.push_back("c" + std::to_string(c));
  return AttributeSchema(attrs, "class", labels);
}

/// Random rows; numeric values drawn from a small grid so ties and boundaries occur.
inline RawDataset random_raw(const AttributeSchema& schema, std::size_t rows, Rng& rng) {
  RawDataset raw{schema, {}, {}};
  for (std::size_t r = 0; r < rows; ++r) {
    Record rec;
    for (const auto& attr : schema.attributes()) {
      if (attr.is_nominal()) {
        rec.emplace_back(rng.below(attr.values.size()));
      } else {
        rec.emplace_back(static_cast<double>(rng.below(21)) * 5.0 - 20.0);
      }
    }
    raw.rows.push_back(std::move(rec));
    raw.labels.push_back(rng.below(schema.class_count()));
  }
  // Make sure at least two classes are present.
  raw.labels[0] = 0;
  if (rows > 1) raw.labels[1] = 1;
  return raw;
}

/// Random structurally valid rule over `schema`.
inline Rule random_rule(const AttributeSchema& schema, Rng& rng) {
  Rule rule;
  rule.consequent = rng.below(schema.class_count());
  for (std::size_t a = 0; a < schema.attribute_count(); ++a) {
    if (!rng.bernoulli(0.5)) continue;
    const auto& attr = schema.attribute(a);
    if (attr.is_nominal()) {
      NominalMembership m;
      for (std::size_t v = 0; v < attr.values.size(); ++v) {
        if (rng.bernoulli(0.5)) m.values.push_back(v);
      }
      if (m.values.empty() || m.values.size() == attr.values.size()) continue;
      rule.antecedent.push_back({a, m});
    } else {
      double lo = static_cast<double>(rng.below(11)) / 10.0;
      double hi = static_cast<double>(rng.below(11)) / 10.0;
      if (lo > hi) std::swap(lo, hi);
      rule.antecedent.push_back({a, NumericInterval{lo, hi}});
    }
  }
  return rule;
}

struct OracleCounts {
  std::size_t matched = 0;
  std::size_t correct = 0;
};

/// Naive double loop over raw records: each row against each condition.
/// Numeric values are scaled by hand from the min/max of `ranges_from`
/// (default: `raw` itself).
inline OracleCounts brute_force(const Rule& rule, const RawDataset& raw,
                                const RawDataset* ranges_from = nullptr) {
  const auto& schema = raw.schema;
  const auto& ref = ranges_from ? *ranges_from : raw;
  std::vector<double> lo(schema.attribute_count(), 0.0), hi(schema.attribute_count(), 0.0);
  for (std::size_t a = 0; a < schema.attribute_count(); ++a) {
    if (schema.attribute(a).is_nominal() || ref.rows.empty()) continue;
    lo[a] = hi[a] = std::get<double>(ref.rows[0][a]);
    for (const auto& row : ref.rows) {
      lo[a] = std::min(lo[a], std::get<double>(row[a]));
      hi[a] = std::max(hi[a], std::get<double>(row[a]));
    }
  }
  OracleCounts out;
  for (std::size_t r = 0; r < raw.rows.size(); ++r) {
    bool all = true;
    for (const auto& c : rule.antecedent) {
      const auto& cell = raw.rows[r][c.attribute];
      bool ok = false;
      if (const auto* m = std::get_if<NominalMembership>(&c.test)) {
        for (auto v : m->values) ok = ok || v == std::get<std::size_t>(cell);
      } else {
        const auto& iv = std::get<NumericInterval>(c.test);
        const double x = std::get<double>(cell);
        double s = hi[c.attribute] > lo[c.attribute]
                       ? (x - lo[c.attribute]) / (hi[c.attribute] - lo[c.attribute])
                       : 0.0;
        s = std::clamp(s, 0.0, 1.0);
        ok = iv.lo <= s && s <= iv.hi;
      }
      all = all && ok;
    }
    if (all) {
      ++out.matched;
      if (raw.labels[r] == rule.consequent) ++out.correct;
    }
  }
  return out;
}

inline std::filesystem::path temp_dir(const std::string& name) {
  auto dir = std::filesystem::path(RULEMINE_TEST_TMP) / name;
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  return dir;
}

inline std::string slurp(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline void spit(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  out << text;
}

}  // namespace testing

#endif
