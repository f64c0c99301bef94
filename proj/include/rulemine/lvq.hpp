#ifndef RULEMINE_LVQ_HPP
#define RULEMINE_LVQ_HPP

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "rulemine/dataset.hpp"

namespace rulemine {

struct LvqConfig {
  std::size_t centroid_count = 30;
  double learning_rate = 0.05;       // initial adaptation rate, decays linearly to 0
  std::size_t max_epochs = 100;
  double stability_threshold = 1e-4; // stop when mean centroid displacement falls below
  double repulsion_ratio = 1.2;      // second-nearest repelled if closer than ratio * first
  std::uint64_t seed = 0;

  /// Throws ConfigError.
  void validate(std::size_t class_count) const;
};

struct Centroid {
  std::vector<double> position;
  std::size_t label = 0;
  std::size_t represented_count = 0;
  std::vector<double> deviation;  // population std-dev of represented examples
};

struct Neighbor {
  std::size_t index = 0;
  double distance = 0.0;
};

enum class LvqStop { not_trained, stable_movement, stable_assignments, max_epochs };

std::string to_string(LvqStop stop);
LvqStop lvq_stop_from_string(const std::string& s);

struct LvqNetwork {
  std::vector<Centroid> centroids;
  std::vector<std::size_t> allocation;  // centroids per class
  std::vector<double> movement_trace;   // mean centroid displacement per epoch
  LvqStop stop = LvqStop::not_trained;

  std::size_t dimension() const { return centroids.empty() ? 0 : centroids.front().position.size(); }

  /// Nearest and second-nearest centroids; ties go to the lower index.
  /// Throws ConfigError when fewer than two centroids exist.
  std::pair<Neighbor, Neighbor> nearest_two(std::span<const double> point) const;
  Neighbor nearest(std::span<const double> point) const;
};

/// Proportional centroid allocation with a one-per-class minimum, corrected
/// to sum to `total` by largest remainders.
std::vector<std::size_t> allocate_per_class(std::span<const std::size_t> class_counts,
                                            std::size_t total);

LvqNetwork init_network(const EncodedDataset& train, const LvqConfig& config);

/// LVQ1 step toward the example: c += alpha * (x - c). No clamping.
void attract(std::span<double> centroid, std::span<const double> example, double alpha);
/// LVQ1 step away from the example: c -= alpha * (x - c). No clamping.
void repel(std::span<double> centroid, std::span<const double> example, double alpha);

/// Trains in place, then recomputes represented counts and deviations.
void train(LvqNetwork& network, const EncodedDataset& train, const LvqConfig& config);

/// Recomputes represented_count and deviation from nearest-centroid assignment.
void summarize(LvqNetwork& network, const EncodedDataset& data);

}  // namespace rulemine

#endif
