#ifndef RULEMINE_MINER_HPP
#define RULEMINE_MINER_HPP

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "rulemine/dataset.hpp"
#include "rulemine/lvq.hpp"
#include "rulemine/pso.hpp"
#include "rulemine/rules.hpp"

namespace rulemine {

struct MinerConfig {
  double support_factor = 0.1;  // rho in min_support
  double min_confidence = 0.6;
  std::size_t max_attempts = 5;  // consecutive failed swarms before a class retires
  std::size_t min_represented = 2;
  std::size_t min_covered = 1;  // examples a rule must cover; smaller classes are never targeted
  LvqConfig lvq;
  PsoConfig pso;

  /// Throws ConfigError.
  void validate(std::size_t class_count) const;
  /// Sets the LVQ and PSO seeds.
  void set_seed(std::uint64_t seed);
};

/// rho * uncovered_count / total_train.
double min_support(std::size_t uncovered_count, std::size_t total_train, double support_factor);

struct RuleRecord {
  Rule rule;
  std::size_t label = 0;
  double support = 0.0;       // measured on the uncovered set at emission
  double confidence = 0.0;
  double min_support = 0.0;   // threshold in force at emission
  std::size_t covered = 0;    // examples removed (matched and correctly classified)
  std::size_t iteration = 0;
  std::vector<std::size_t> uncovered_before;  // training positions uncovered at emission
};

struct SwarmLog {
  std::size_t iteration = 0;
  std::size_t label = 0;
  std::size_t attempt = 0;
  SeedSource source = SeedSource::random;
  bool accepted = false;
  double support = 0.0;
  double confidence = 0.0;
  std::vector<double> gbest_trace;
};

enum class MiningStop { all_covered, single_class_left, no_eligible_class };

std::string to_string(MiningStop stop);
std::string to_string(SeedSource source);

struct MiningReport {
  std::size_t training_size = 0;
  std::vector<RuleRecord> records;
  std::vector<SwarmLog> swarms;
  std::vector<std::size_t> attempts;           // failed attempts per class since last success
  std::vector<std::size_t> uncovered_residue;  // per class when mining stopped
  std::vector<std::size_t> uncovered_final;    // training positions left uncovered
  MiningStop stop = MiningStop::no_eligible_class;
  std::size_t iterations = 0;
};

struct MiningResult {
  RuleList rules;
  MiningReport report;
  LvqNetwork network;
};

/// Majority class of `uncovered`; ties fall to the globally most frequent
/// class, then to the lowest index.
std::size_t default_class(const EncodedDataset& train, const std::vector<std::size_t>& uncovered);

MiningResult mine(const EncodedDataset& train, const MinerConfig& config);

}  // namespace rulemine

#endif
