#include "rulemine/miner.hpp"

#include <algorithm>
#include <numeric>

#include "rulemine/errors.hpp"
#include "rulemine/random.hpp"

namespace rulemine {

void MinerConfig::validate(std::size_t class_count) const {
  if (!(support_factor > 0.0 && support_factor <= 1.0)) {
    throw ConfigError("support_factor must lie in (0, 1]");
  }
  if (!(min_confidence > 0.0 && min_confidence <= 1.0)) {
    throw ConfigError("min_confidence must lie in (0, 1]");
  }
  if (max_attempts < 1) throw ConfigError("max_attempts must be at least 1");
  if (min_covered < 1) throw ConfigError("min_covered must be at least 1");
  lvq.validate(class_count);
  pso.validate();
}

void MinerConfig::set_seed(std::uint64_t seed) {
  lvq.seed = seed;
  pso.seed = seed;
}

double min_support(std::size_t uncovered_count, std::size_t total_train, double support_factor) {
  if (total_train == 0) throw DataError("training set size must be positive");
  return support_factor * static_cast<double>(uncovered_count) / static_cast<double>(total_train);
}

std::string to_string(MiningStop stop) {
  switch (stop) {
    case MiningStop::all_covered: return "all_covered";
    case MiningStop::single_class_left: return "single_class_left";
    case MiningStop::no_eligible_class: return "no_eligible_class";
  }
  return "no_eligible_class";
}

std::string to_string(SeedSource source) {
  switch (source) {
    case SeedSource::eligible_centroids: return "eligible_centroids";
    case SeedSource::class_centroids: return "class_centroids";
    case SeedSource::random: return "random";
  }
  return "random";
}

std::size_t default_class(const EncodedDataset& train, const std::vector<std::size_t>& uncovered) {
  const auto global = train.class_counts();
  std::vector<std::size_t> left(train.class_count(), 0);
  for (auto i : uncovered) ++left[train.label(i)];
  std::size_t best = 0;
  for (std::size_t c = 1; c < left.size(); ++c) {
    if (left[c] > left[best] || (left[c] == left[best] && global[c] > global[best])) best = c;
  }
  return best;
}

MiningResult mine(const EncodedDataset& train, const MinerConfig& config) {
  if (train.empty()) throw DataError("cannot mine rules from an empty training set");
  const std::size_t classes = train.class_count();
  const auto counts = train.class_counts();
  if (std::count_if(counts.begin(), counts.end(), [](std::size_t n) { return n > 0; }) < 2) {
    throw ConfigError("rule mining needs at least two classes present in the training set");
  }
  config.validate(classes);

  MiningResult result;
  auto& report = result.report;
  report.training_size = train.size();
  report.attempts.assign(classes, 0);

  result.network = init_network(train, config.lvq);
  rulemine::train(result.network, train, config.lvq);

  std::vector<std::size_t> uncovered(train.size());
  std::iota(uncovered.begin(), uncovered.end(), 0);
  const std::size_t n_total = train.size();

  auto floor_for = [&](std::size_t left) {
    return min_support(left, n_total, config.support_factor);
  };

  for (std::size_t iteration = 0;; ++iteration) {
    std::vector<std::size_t> left(classes, 0);
    for (auto i : uncovered) ++left[train.label(i)];
    const auto present = std::count_if(left.begin(), left.end(), [](std::size_t n) { return n > 0; });
    if (uncovered.empty()) {
      report.stop = MiningStop::all_covered;
      break;
    }
    if (present == 1) {
      report.stop = MiningStop::single_class_left;
      break;
    }

    // The best any rule for class c can reach on the uncovered set is left[c] / |uncovered|.
    const double pool = static_cast<double>(uncovered.size());
    std::size_t target = SIZE_MAX;
    for (std::size_t c = 0; c < classes; ++c) {
      if (left[c] < config.min_covered || report.attempts[c] >= config.max_attempts) continue;
      if (static_cast<double>(left[c]) / pool < floor_for(left[c])) continue;
      if (target == SIZE_MAX || left[c] > left[target]) target = c;
    }
    if (target == SIZE_MAX) {
      report.stop = MiningStop::no_eligible_class;
      break;
    }

    const auto pool_data = train.subset(uncovered);
    PsoConfig pso = config.pso;
    pso.seed = mix_seed(config.pso.seed, iteration);
    auto swarm = seed_swarm(result.network, target, config.min_represented, pool_data, pso);
    evolve(swarm, pool_data, pso);
    Rule rule = best_rule(swarm, pool_data.encoding());
    const auto stats = measure(rule, pool_data);
    const double threshold = floor_for(left[target]);
    const bool accepted = stats.correct >= config.min_covered && stats.support() >= threshold &&
                          stats.confidence() >= config.min_confidence;

    report.swarms.push_back({iteration, target, report.attempts[target] + 1, swarm.source, accepted,
                             stats.support(), stats.confidence(), swarm.trace});
    report.iterations = iteration + 1;

    if (!accepted) {
      ++report.attempts[target];
      continue;
    }

    rule.provenance = {result.rules.rules.size(), stats.support(), stats.confidence()};
    RuleRecord record;
    record.rule = rule;
    record.label = target;
    record.support = stats.support();
    record.confidence = stats.confidence();
    record.min_support = threshold;
    record.covered = stats.correct;
    record.iteration = iteration;
    record.uncovered_before = uncovered;

    std::vector<std::size_t> remaining;
    remaining.reserve(uncovered.size() - stats.correct);
    for (std::size_t k = 0; k < uncovered.size(); ++k) {
      const bool covered = pool_data.label(k) == target && matches(rule, pool_data, k);
      if (!covered) remaining.push_back(uncovered[k]);
    }
    uncovered = std::move(remaining);
    report.attempts[target] = 0;
    report.records.push_back(std::move(record));
    result.rules.rules.push_back(std::move(rule));
  }

  report.uncovered_residue.assign(classes, 0);
  for (auto i : uncovered) ++report.uncovered_residue[train.label(i)];
  report.uncovered_final = uncovered;
  result.rules.default_class = default_class(train, uncovered);
  return result;
}

}  // namespace rulemine
