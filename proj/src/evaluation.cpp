#include "rulemine/evaluation.hpp"

#include <algorithm>
#include <numeric>
#include <optional>

#include <fmt/format.h>

#include "rulemine/errors.hpp"
#include "rulemine/miner.hpp"

namespace rulemine {

ConfusionMatrix::ConfusionMatrix(std::vector<std::string> labels)
    : labels_(std::move(labels)), cells_(labels_.size() * labels_.size(), 0.0) {}

ConfusionMatrix::ConfusionMatrix(std::vector<std::string> labels,
                                 std::vector<std::vector<double>> rows)
    : ConfusionMatrix(std::move(labels)) {
  if (rows.size() != size()) throw DataError("confusion matrix row count does not match labels");
  for (std::size_t p = 0; p < size(); ++p) {
    if (rows[p].size() != size()) throw DataError("confusion matrix must be square");
    for (std::size_t a = 0; a < size(); ++a) {
      if (rows[p][a] < 0.0) throw DataError("confusion matrix entries must be non-negative");
      cells_[p * size() + a] = rows[p][a];
    }
  }
}

double ConfusionMatrix::at(std::size_t predicted, std::size_t actual) const {
  return cells_.at(predicted * size() + actual);
}

void ConfusionMatrix::add(std::size_t predicted, std::size_t actual, double weight) {
  cells_.at(predicted * size() + actual) += weight;
}

double ConfusionMatrix::total() const { return std::accumulate(cells_.begin(), cells_.end(), 0.0); }

double ConfusionMatrix::trace() const {
  double t = 0.0;
  for (std::size_t c = 0; c < size(); ++c) t += at(c, c);
  return t;
}

double accuracy(const ConfusionMatrix& m) {
  const double total = m.total();
  return total > 0.0 ? m.trace() / total : 0.0;
}

double type_i_error(const ConfusionMatrix& m, std::size_t positive_class) {
  if (positive_class >= m.size()) throw ConfigError("positive class is outside the label set");
  const double total = m.total();
  if (total <= 0.0) return 0.0;
  double missed = 0.0;
  for (std::size_t p = 0; p < m.size(); ++p) {
    if (p != positive_class) missed += m.at(p, positive_class);
  }
  return missed / total;
}

double mean_antecedent_length(const RuleList& list) {
  if (list.rules.empty()) return 0.0;
  double sum = 0.0;
  for (const auto& r : list.rules) sum += static_cast<double>(r.antecedent.size());
  return sum / static_cast<double>(list.rules.size());
}

EvalReport evaluate(const RuleList& list, const EncodedDataset& test, std::size_t positive_class) {
  if (test.empty()) throw DataError("cannot evaluate on an empty test set");
  for (const auto& r : list.rules) validate(r, test.schema());
  if (list.default_class >= test.class_count()) throw SchemaError("default class outside schema");

  EvalReport report;
  report.confusion = ConfusionMatrix(test.schema().class_labels());
  report.positive_class = positive_class;
  report.rule_count = list.rules.size();
  report.mean_antecedent_length = mean_antecedent_length(list);
  report.fire_counts.assign(list.rules.size(), 0);
  for (std::size_t i = 0; i < test.size(); ++i) {
    const auto c = classify(list, test, i);
    report.confusion.add(c.label, test.label(i));
    if (c.fired) {
      ++report.fire_counts[*c.fired];
    } else {
      ++report.default_count;
    }
  }
  report.accuracy = accuracy(report.confusion);
  report.type_i_error = type_i_error(report.confusion, positive_class);
  return report;
}

namespace {

struct Counts {
  std::size_t matched = 0;
  std::size_t correct = 0;
};

// Higher confidence first, then higher support. Exact integer comparison.
bool better(const Counts& a, const Counts& b) {
  const auto lhs = a.correct * b.matched;
  const auto rhs = b.correct * a.matched;
  if (lhs != rhs) return lhs > rhs;
  return a.correct > b.correct;
}

struct Candidate {
  Counts counts;
  Condition condition;
};

class RuleGrower {
 public:
  RuleGrower(const EncodedDataset& pool, std::size_t target) : pool_(pool), target_(target) {
    matched_.resize(pool.size());
    std::iota(matched_.begin(), matched_.end(), 0);
  }

  Rule grow(double min_confidence) {
    std::vector<std::optional<Condition>> conditions(pool_.schema().attribute_count());
    Counts current = count(matched_);
    while (confidence(current) < min_confidence) {
      const auto best = best_candidate(conditions);
      if (!best || !(best->counts.correct * current.matched > current.correct * best->counts.matched)) {
        break;
      }
      conditions[best->condition.attribute] = best->condition;
      std::vector<std::size_t> next;
      for (auto i : matched_) {
        if (best->condition.holds(pool_.attribute_value(i, best->condition.attribute))) next.push_back(i);
      }
      matched_ = std::move(next);
      current = best->counts;
    }
    Rule rule;
    rule.consequent = target_;
    for (auto& c : conditions) {
      if (c) rule.antecedent.push_back(*c);
    }
    return rule;
  }

 private:
  static double confidence(const Counts& c) {
    return c.matched ? static_cast<double>(c.correct) / static_cast<double>(c.matched) : 0.0;
  }

  Counts count(const std::vector<std::size_t>& idx) const {
    Counts c;
    c.matched = idx.size();
    for (auto i : idx) c.correct += pool_.label(i) == target_ ? 1 : 0;
    return c;
  }

  std::optional<Candidate> best_candidate(const std::vector<std::optional<Condition>>& used) const {
    const auto& schema = pool_.schema();
    std::optional<Candidate> best;
    auto offer = [&](Counts counts, Condition condition) {
      if (counts.correct == 0) return;
      if (!best || better(counts, best->counts)) best = Candidate{counts, std::move(condition)};
    };

    for (std::size_t a = 0; a < schema.attribute_count(); ++a) {
      const auto& attr = schema.attribute(a);
      if (attr.is_nominal()) {
        if (used[a]) continue;
        std::vector<Counts> per_value(attr.values.size());
        for (auto i : matched_) {
          auto& c = per_value[static_cast<std::size_t>(pool_.attribute_value(i, a))];
          ++c.matched;
          if (pool_.label(i) == target_) ++c.correct;
        }
        for (std::size_t v = 0; v < per_value.size(); ++v) {
          offer(per_value[v], Condition{a, NominalMembership{{v}}});
        }
        continue;
      }

      NumericInterval range{0.0, 1.0};
      if (used[a]) range = std::get<NumericInterval>(used[a]->test);
      std::vector<std::pair<double, bool>> points;
      points.reserve(matched_.size());
      for (auto i : matched_) points.emplace_back(pool_.attribute_value(i, a), pool_.label(i) == target_);
      std::sort(points.begin(), points.end());
      std::size_t total_correct = 0;
      for (const auto& p : points) total_correct += p.second ? 1 : 0;
      std::size_t prefix = 0;
      for (std::size_t k = 1; k < points.size(); ++k) {
        prefix += points[k - 1].second ? 1 : 0;
        if (!(points[k - 1].first < points[k].first)) continue;
        const double cut = 0.5 * (points[k - 1].first + points[k].first);
        offer({k, prefix}, Condition{a, NumericInterval{range.lo, cut}});
        offer({points.size() - k, total_correct - prefix}, Condition{a, NumericInterval{cut, range.hi}});
      }
    }
    return best;
  }

  const EncodedDataset& pool_;
  std::size_t target_;
  std::vector<std::size_t> matched_;
};

}  // namespace

RuleList mine_greedy_baseline(const EncodedDataset& train, double min_confidence) {
  if (train.empty()) throw DataError("cannot mine rules from an empty training set");
  const auto counts = train.class_counts();
  if (std::count_if(counts.begin(), counts.end(), [](std::size_t n) { return n > 0; }) < 2) {
    throw ConfigError("rule mining needs at least two classes present in the training set");
  }
  if (!(min_confidence > 0.0 && min_confidence <= 1.0)) {
    throw ConfigError("min_confidence must lie in (0, 1]");
  }

  RuleList list;
  std::vector<std::size_t> uncovered(train.size());
  std::iota(uncovered.begin(), uncovered.end(), 0);
  std::vector<bool> retired(train.class_count(), false);

  while (!uncovered.empty()) {
    std::vector<std::size_t> left(train.class_count(), 0);
    for (auto i : uncovered) ++left[train.label(i)];
    if (std::count_if(left.begin(), left.end(), [](std::size_t n) { return n > 0; }) < 2) break;

    std::size_t target = SIZE_MAX;
    for (std::size_t c = 0; c < left.size(); ++c) {
      if (left[c] == 0 || retired[c]) continue;
      if (target == SIZE_MAX || left[c] > left[target]) target = c;
    }
    if (target == SIZE_MAX) break;

    const auto pool = train.subset(uncovered);
    Rule rule = RuleGrower(pool, target).grow(min_confidence);
    const auto stats = measure(rule, pool);
    if (stats.correct == 0 || stats.confidence() < min_confidence) {
      retired[target] = true;
      continue;
    }
    rule.provenance = {list.rules.size(), stats.support(), stats.confidence()};
    std::vector<std::size_t> remaining;
    for (std::size_t k = 0; k < pool.size(); ++k) {
      if (!(pool.label(k) == target && matches(rule, pool, k))) remaining.push_back(uncovered[k]);
    }
    uncovered = std::move(remaining);
    std::fill(retired.begin(), retired.end(), false);
    list.rules.push_back(std::move(rule));
  }
  list.default_class = default_class(train, uncovered);
  return list;
}

nlohmann::ordered_json to_json(const EvalReport& report) {
  nlohmann::ordered_json doc;
  const auto& m = report.confusion;
  doc["labels"] = m.labels();
  auto rows = nlohmann::ordered_json::array();
  for (std::size_t p = 0; p < m.size(); ++p) {
    auto row = nlohmann::ordered_json::array();
    for (std::size_t a = 0; a < m.size(); ++a) row.push_back(m.at(p, a));
    rows.push_back(row);
  }
  doc["confusion_rows_predicted_cols_actual"] = rows;
  doc["total"] = m.total();
  doc["accuracy"] = report.accuracy;
  doc["precision_percent"] = report.precision_percent();
  doc["positive_class"] = m.labels().at(report.positive_class);
  doc["type_i_error"] = report.type_i_error;
  doc["rule_count"] = report.rule_count;
  doc["mean_antecedent_length"] = report.mean_antecedent_length;
  doc["fire_counts"] = report.fire_counts;
  doc["default_count"] = report.default_count;
  return doc;
}

std::string render_table(const std::vector<std::pair<std::string, EvalReport>>& reports) {
  if (reports.empty()) return {};
  const auto& labels = reports.front().second.confusion.labels();
  std::size_t name_w = 6;
  for (const auto& [name, _] : reports) name_w = std::max(name_w, name.size());
  std::size_t label_w = 10;
  for (const auto& l : labels) label_w = std::max(label_w, l.size());

  std::string out = fmt::format("{:<{}}  {:<{}}", "Method", name_w, "Prediction", label_w);
  for (const auto& l : labels) out += fmt::format("  {:>10}", l);
  out += fmt::format("  {:>12}  {:>9}  {:>7}  {:>10}\n", "Type I error", "Precision", "# rules",
                     "Antecedent");
  for (const auto& [name, r] : reports) {
    for (std::size_t p = 0; p < r.confusion.size(); ++p) {
      out += fmt::format("{:<{}}  {:<{}}", p == 0 ? name : "", name_w, r.confusion.labels()[p], label_w);
      for (std::size_t a = 0; a < r.confusion.size(); ++a) {
        out += fmt::format("  {:>10.2f}", r.confusion.at(p, a));
      }
      if (p == 0) {
        out += fmt::format("  {:>12.2f}  {:>9.2f}  {:>7}  {:>10.2f}", r.type_i_error,
                           r.precision_percent(), r.rule_count, r.mean_antecedent_length);
      }
      out += "\n";
    }
  }
  return out;
}

}  // namespace rulemine
