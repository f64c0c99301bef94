#include "rulemine/synth.hpp"

#include <cmath>
#include <ostream>

#include <fmt/format.h>

#include "rulemine/csv.hpp"
#include "rulemine/errors.hpp"
#include "rulemine/random.hpp"

namespace rulemine::synth {
namespace {

Attribute numeric(std::string name) { return {std::move(name), AttributeKind::numeric, {}}; }

Attribute nominal(std::string name, std::vector<std::string> values) {
  return {std::move(name), AttributeKind::nominal, std::move(values)};
}

double rounded(double x, int decimals) {
  const double scale = std::pow(10.0, decimals);
  return std::round(x * scale) / scale;
}

// Attribute positions within each profile's schema.
namespace credit3 {
constexpr std::size_t age = 0, income = 1, loan_amount = 2, debt_ratio = 3, years_employed = 4,
                      savings = 5, marital_status = 6, housing = 7, employment = 8, purpose = 9;
constexpr std::size_t own = 0, family = 2;
constexpr std::size_t permanent = 0, self_employed = 2;
}  // namespace credit3

constexpr std::size_t kDeny = 0, kAccept = 1;

bool in_pocket(std::size_t branch) {
  // b01 b03 b06 b08 b09 b12 b14 b15
  constexpr unsigned mask = 0b0110'1001'1010'0101;
  return (mask >> branch) & 1U;
}

double num(const Record& r, std::size_t a) { return std::get<double>(r[a]); }
std::size_t cat(const Record& r, std::size_t a) { return std::get<std::size_t>(r[a]); }

}  // namespace

Profile profile_from_string(const std::string& name) {
  if (name == "separable") return Profile::separable;
  if (name == "credit3") return Profile::credit3;
  if (name == "fragmented") return Profile::fragmented;
  throw ConfigError("unknown profile \"" + name + "\" (expected separable, credit3 or fragmented)");
}

std::string to_string(Profile profile) {
  switch (profile) {
    case Profile::separable: return "separable";
    case Profile::credit3: return "credit3";
    case Profile::fragmented: return "fragmented";
  }
  return "separable";
}

AttributeSchema schema_for(Profile profile) {
  switch (profile) {
    case Profile::separable:
      return AttributeSchema({numeric("x1"), numeric("x2")}, "label", {"low", "high"});
    case Profile::credit3:
      return AttributeSchema(
          {numeric("age"), numeric("income"), numeric("loan_amount"), numeric("debt_ratio"),
           numeric("years_employed"), numeric("savings"),
           nominal("marital_status", {"single", "married", "divorced", "widowed"}),
           nominal("housing", {"own", "rent", "family"}),
           nominal("employment", {"permanent", "temporary", "self_employed", "unemployed"}),
           nominal("purpose", {"car", "appliance", "education", "travel", "business"})},
          "status", {"Deny", "Accept"});
    case Profile::fragmented: {
      std::vector<std::string> branches;
      for (int b = 1; b <= 16; ++b) branches.push_back(fmt::format("b{:02}", b));
      return AttributeSchema({nominal("branch", branches), nominal("channel", {"online", "agent", "store"}),
                              numeric("amount"), numeric("tenure")},
                             "status", {"Deny", "Accept"});
    }
  }
  throw ConfigError("unknown profile");
}

std::size_t ground_truth(Profile profile, const Record& r) {
  switch (profile) {
    case Profile::separable:
      return num(r, 0) > 0.5 ? 1 : 0;
    case Profile::credit3: {
      using namespace credit3;
      if (num(r, debt_ratio) > 0.6) return kDeny;
      const auto h = cat(r, housing);
      if (num(r, income) > 3000.0 && (h == own || h == family)) return kAccept;
      const auto e = cat(r, employment);
      if ((e == permanent || e == self_employed) && num(r, years_employed) > 5.0) return kAccept;
      return kDeny;
    }
    case Profile::fragmented:
      return in_pocket(cat(r, 0)) ? kAccept : kDeny;
  }
  return 0;
}

RawDataset generate(Profile profile, std::size_t rows, std::uint64_t seed) {
  if (rows < kMinRows) {
    throw ConfigError("synthetic datasets need at least " + std::to_string(kMinRows) + " rows");
  }
  RawDataset data{schema_for(profile), {}, {}};
  Rng rng(seed);
  for (std::size_t i = 0; i < rows; ++i) {
    Record r;
    switch (profile) {
      case Profile::separable:
        r = {rounded(rng.uniform(), 4), rounded(rng.uniform(), 4)};
        break;
      case Profile::credit3:
        r = {rounded(rng.uniform(18.0, 75.0), 0),
             rounded(rng.uniform(300.0, 8000.0), 2),
             rounded(rng.uniform(500.0, 20000.0), 2),
             rounded(rng.uniform(), 3),
             rounded(rng.uniform(0.0, 40.0), 1),
             rounded(rng.uniform(0.0, 50000.0), 2),
             rng.below(4),
             rng.below(3),
             rng.below(4),
             rng.below(5)};
        break;
      case Profile::fragmented:
        r = {rng.below(16), rng.below(3), rounded(rng.uniform(100.0, 10000.0), 2),
             rounded(rng.uniform(0.0, 30.0), 1)};
        break;
    }
    auto label = ground_truth(profile, r);
    if (profile == Profile::credit3 && rng.bernoulli(kCredit3Noise)) label = 1 - label;
    data.rows.push_back(std::move(r));
    data.labels.push_back(label);
  }
  return data;
}

void write_csv(const RawDataset& data, std::ostream& out) {
  const auto& schema = data.schema;
  csv::Fields header;
  for (const auto& a : schema.attributes()) header.push_back(a.name);
  header.push_back(schema.class_attribute());
  csv::write_row(out, header);
  for (std::size_t i = 0; i < data.size(); ++i) {
    csv::Fields fields;
    for (std::size_t a = 0; a < schema.attribute_count(); ++a) {
      const auto& v = data.rows[i][a];
      if (schema.attribute(a).is_nominal()) {
        fields.push_back(schema.attribute(a).values.at(std::get<std::size_t>(v)));
      } else {
        fields.push_back(fmt::format("{}", std::get<double>(v)));
      }
    }
    fields.push_back(schema.class_labels().at(data.labels.at(i)));
    csv::write_row(out, fields);
  }
}

}  // namespace rulemine::synth
