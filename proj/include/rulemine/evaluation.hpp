#ifndef RULEMINE_EVALUATION_HPP
#define RULEMINE_EVALUATION_HPP

#include <cstddef>
#include <string>
#include <utility>
#include <vector>

#include "json.hpp"
#include "rulemine/dataset.hpp"
#include "rulemine/rules.hpp"

namespace rulemine {

/// Rows are predicted classes, columns actual classes. Cells are real-valued
/// so averaged matrices can be represented.
class ConfusionMatrix {
 public:
  explicit ConfusionMatrix(std::vector<std::string> labels);
  ConfusionMatrix(std::vector<std::string> labels, std::vector<std::vector<double>> rows);

  std::size_t size() const noexcept { return labels_.size(); }
  const std::vector<std::string>& labels() const noexcept { return labels_; }
  double at(std::size_t predicted, std::size_t actual) const;
  void add(std::size_t predicted, std::size_t actual, double weight = 1.0);
  double total() const;
  double trace() const;

 private:
  std::vector<std::string> labels_;
  std::vector<double> cells_;
};

/// Trace over total, in [0, 1]. Reported multiplied by 100 as "precision".
double accuracy(const ConfusionMatrix& m);

/// Mass of the positive class predicted as anything else, over the total.
/// For two classes this is the single (negative-row, positive-column) cell.
double type_i_error(const ConfusionMatrix& m, std::size_t positive_class);

struct EvalReport {
  ConfusionMatrix confusion{{}};
  double accuracy = 0.0;
  double type_i_error = 0.0;
  std::size_t positive_class = 1;
  std::size_t rule_count = 0;
  double mean_antecedent_length = 0.0;
  std::vector<std::size_t> fire_counts;  // per rule
  std::size_t default_count = 0;

  double precision_percent() const { return 100.0 * accuracy; }
};

/// Throws DataError on an empty test set, SchemaError on an incompatible one.
EvalReport evaluate(const RuleList& list, const EncodedDataset& test, std::size_t positive_class = 1);

double mean_antecedent_length(const RuleList& list);

/// Deterministic separate-and-conquer baseline. Each rule is grown one
/// condition at a time (single nominal value, or a numeric cut at a midpoint
/// between adjacent example values), picking the highest confidence and then
/// the highest support, until it reaches `min_confidence` or stops improving.
RuleList mine_greedy_baseline(const EncodedDataset& train, double min_confidence);

nlohmann::ordered_json to_json(const EvalReport& report);

/// Aligned text table; one block per (method name, report).
std::string render_table(const std::vector<std::pair<std::string, EvalReport>>& reports);

}  // namespace rulemine

#endif
