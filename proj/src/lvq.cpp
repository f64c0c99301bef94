#include "rulemine/lvq.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "rulemine/errors.hpp"
#include "rulemine/random.hpp"

namespace rulemine {
namespace {

double squared_distance(std::span<const double> a, std::span<const double> b) {
  double sum = 0.0;
  for (std::size_t j = 0; j < a.size(); ++j) {
    const double diff = a[j] - b[j];
    sum += diff * diff;
  }
  return sum;
}

void clamp_unit(std::span<double> v) {
  for (auto& x : v) x = std::clamp(x, 0.0, 1.0);
}

}  // namespace

void LvqConfig::validate(std::size_t class_count) const {
  if (centroid_count < class_count) {
    throw ConfigError("LVQ needs at least one centroid per class (" +
                      std::to_string(centroid_count) + " < " + std::to_string(class_count) + ")");
  }
  if (centroid_count < 2) throw ConfigError("LVQ needs at least two centroids");
  if (!(learning_rate > 0.0 && learning_rate < 1.0)) {
    throw ConfigError("LVQ learning rate must lie in (0, 1)");
  }
  if (max_epochs == 0) throw ConfigError("LVQ max_epochs must be positive");
  if (!(stability_threshold >= 0.0)) throw ConfigError("LVQ stability threshold must be >= 0");
  if (!(repulsion_ratio > 1.0)) throw ConfigError("LVQ repulsion ratio must exceed 1");
}

std::string to_string(LvqStop stop) {
  switch (stop) {
    case LvqStop::not_trained: return "not_trained";
    case LvqStop::stable_movement: return "stable_movement";
    case LvqStop::stable_assignments: return "stable_assignments";
    case LvqStop::max_epochs: return "max_epochs";
  }
  return "not_trained";
}

LvqStop lvq_stop_from_string(const std::string& s) {
  for (auto stop : {LvqStop::not_trained, LvqStop::stable_movement, LvqStop::stable_assignments,
                    LvqStop::max_epochs}) {
    if (to_string(stop) == s) return stop;
  }
  throw SchemaError("unknown LVQ stop reason \"" + s + "\"");
}

std::pair<Neighbor, Neighbor> LvqNetwork::nearest_two(std::span<const double> point) const {
  if (centroids.size() < 2) throw ConfigError("nearest_two needs at least two centroids");
  std::size_t first = SIZE_MAX, second = SIZE_MAX;
  double d1 = 0.0, d2 = 0.0;
  for (std::size_t k = 0; k < centroids.size(); ++k) {
    const double d = squared_distance(centroids[k].position, point);
    if (first == SIZE_MAX || d < d1) {
      second = first;
      d2 = d1;
      first = k;
      d1 = d;
    } else if (second == SIZE_MAX || d < d2) {
      second = k;
      d2 = d;
    }
  }
  return {{first, std::sqrt(d1)}, {second, std::sqrt(d2)}};
}

Neighbor LvqNetwork::nearest(std::span<const double> point) const {
  if (centroids.empty()) throw ConfigError("network has no centroids");
  Neighbor best{0, squared_distance(centroids[0].position, point)};
  for (std::size_t k = 1; k < centroids.size(); ++k) {
    const double d = squared_distance(centroids[k].position, point);
    if (d < best.distance) best = {k, d};
  }
  best.distance = std::sqrt(best.distance);
  return best;
}

std::vector<std::size_t> allocate_per_class(std::span<const std::size_t> class_counts,
                                            std::size_t total) {
  const std::size_t classes = class_counts.size();
  if (total < classes) {
    throw ConfigError("cannot allocate " + std::to_string(total) + " centroids over " +
                      std::to_string(classes) + " classes");
  }
  const double n = static_cast<double>(std::accumulate(class_counts.begin(), class_counts.end(),
                                                       std::size_t{0}));
  if (n <= 0.0 || std::find(class_counts.begin(), class_counts.end(), 0) != class_counts.end()) {
    throw DataError("every class needs at least one example for centroid allocation");
  }

  std::vector<double> quota(classes);
  std::vector<std::size_t> alloc(classes);
  for (std::size_t c = 0; c < classes; ++c) {
    quota[c] = static_cast<double>(total) * static_cast<double>(class_counts[c]) / n;
    alloc[c] = std::max<std::size_t>(1, static_cast<std::size_t>(std::floor(quota[c])));
  }
  auto assigned = std::accumulate(alloc.begin(), alloc.end(), std::size_t{0});

  std::vector<std::size_t> order(classes);
  std::iota(order.begin(), order.end(), 0);
  if (assigned < total) {
    // Largest remainder first; ties to the lower class index.
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
      return quota[a] - alloc[a] > quota[b] - alloc[b];
    });
    for (std::size_t i = 0; assigned < total; i = (i + 1) % classes, ++assigned) ++alloc[order[i]];
  }
  while (assigned > total) {
    // Take back from the most over-allocated class that can spare one.
    std::size_t pick = SIZE_MAX;
    for (std::size_t c = 0; c < classes; ++c) {
      if (alloc[c] <= 1) continue;
      if (pick == SIZE_MAX || quota[c] - alloc[c] < quota[pick] - alloc[pick]) pick = c;
    }
    --alloc[pick];
    --assigned;
  }
  return alloc;
}

LvqNetwork init_network(const EncodedDataset& train, const LvqConfig& config) {
  if (train.empty()) throw DataError("cannot initialize LVQ on an empty training set");
  config.validate(train.class_count());

  std::vector<std::vector<std::size_t>> members(train.class_count());
  for (std::size_t i = 0; i < train.size(); ++i) members[train.label(i)].push_back(i);

  // Classes absent from the data get no centroids; allocation is over the present ones.
  std::vector<std::size_t> present, present_counts;
  for (std::size_t c = 0; c < members.size(); ++c) {
    if (!members[c].empty()) {
      present.push_back(c);
      present_counts.push_back(members[c].size());
    }
  }
  const auto alloc_present = allocate_per_class(present_counts, config.centroid_count);

  LvqNetwork net;
  net.allocation.assign(train.class_count(), 0);
  Rng rng(config.seed);
  for (std::size_t p = 0; p < present.size(); ++p) {
    const std::size_t c = present[p];
    const std::size_t want = alloc_present[p];
    net.allocation[c] = want;
    auto pool = members[c];
    for (std::size_t k = 0; k < want; ++k) {
      std::size_t pick;
      if (pool.size() >= want) {
        // Partial Fisher-Yates: distinct examples.
        const std::size_t j = k + rng.below(pool.size() - k);
        std::swap(pool[k], pool[j]);
        pick = pool[k];
      } else {
        pick = pool[rng.below(pool.size())];
      }
      const auto row = train.row(pick);
      net.centroids.push_back({std::vector<double>(row.begin(), row.end()), c, 0,
                               std::vector<double>(row.size(), 0.0)});
    }
  }
  return net;
}

void attract(std::span<double> centroid, std::span<const double> example, double alpha) {
  for (std::size_t j = 0; j < centroid.size(); ++j) centroid[j] += alpha * (example[j] - centroid[j]);
}

void repel(std::span<double> centroid, std::span<const double> example, double alpha) {
  for (std::size_t j = 0; j < centroid.size(); ++j) centroid[j] -= alpha * (example[j] - centroid[j]);
}

void train(LvqNetwork& network, const EncodedDataset& data, const LvqConfig& config) {
  if (data.empty()) throw DataError("cannot train LVQ on an empty training set");
  config.validate(data.class_count());
  if (network.centroids.size() < 2) throw ConfigError("LVQ training needs at least two centroids");

  const std::size_t n = data.size();
  const std::size_t k_count = network.centroids.size();
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::vector<std::size_t> assignment(n, SIZE_MAX), previous;
  std::vector<std::vector<double>> epoch_start(k_count);

  Rng rng(mix_seed(config.seed, 1));
  network.movement_trace.clear();
  network.stop = LvqStop::max_epochs;

  for (std::size_t epoch = 0; epoch < config.max_epochs; ++epoch) {
    const double alpha = config.learning_rate *
                         (1.0 - static_cast<double>(epoch) / static_cast<double>(config.max_epochs));
    for (std::size_t k = 0; k < k_count; ++k) epoch_start[k] = network.centroids[k].position;
    rng.shuffle(order.begin(), order.end());

    for (auto i : order) {
      const auto x = data.row(i);
      const auto label = data.label(i);
      const auto [first, second] = network.nearest_two(x);
      assignment[i] = first.index;

      auto& winner = network.centroids[first.index];
      if (winner.label == label) {
        attract(winner.position, x, alpha);
      } else {
        repel(winner.position, x, alpha);
      }
      clamp_unit(winner.position);

      auto& runner_up = network.centroids[second.index];
      if (runner_up.label != label && second.distance < config.repulsion_ratio * first.distance) {
        repel(runner_up.position, x, alpha);
        clamp_unit(runner_up.position);
      }
    }

    double movement = 0.0;
    for (std::size_t k = 0; k < k_count; ++k) {
      movement += std::sqrt(squared_distance(network.centroids[k].position, epoch_start[k]));
    }
    movement /= static_cast<double>(k_count);
    network.movement_trace.push_back(movement);

    if (movement < config.stability_threshold) {
      network.stop = LvqStop::stable_movement;
      break;
    }
    if (assignment == previous) {
      network.stop = LvqStop::stable_assignments;
      break;
    }
    previous = assignment;
  }
  summarize(network, data);
}

void summarize(LvqNetwork& network, const EncodedDataset& data) {
  const std::size_t d = data.dimension();
  const std::size_t k_count = network.centroids.size();
  std::vector<std::size_t> owner(data.size());
  std::vector<std::vector<double>> mean(k_count, std::vector<double>(d, 0.0));
  std::vector<std::size_t> count(k_count, 0);
  for (std::size_t i = 0; i < data.size(); ++i) {
    const auto x = data.row(i);
    const auto k = owner[i] = network.nearest(x).index;
    ++count[k];
    for (std::size_t j = 0; j < d; ++j) mean[k][j] += x[j];
  }
  for (std::size_t k = 0; k < k_count; ++k) {
    if (count[k] == 0) continue;
    for (auto& m : mean[k]) m /= static_cast<double>(count[k]);
  }
  for (auto& c : network.centroids) c.deviation.assign(d, 0.0);
  for (std::size_t i = 0; i < data.size(); ++i) {
    const auto x = data.row(i);
    auto& dev = network.centroids[owner[i]].deviation;
    const auto& m = mean[owner[i]];
    for (std::size_t j = 0; j < d; ++j) dev[j] += (x[j] - m[j]) * (x[j] - m[j]);
  }
  for (std::size_t k = 0; k < k_count; ++k) {
    auto& c = network.centroids[k];
    c.represented_count = count[k];
    if (count[k] == 0) continue;
    for (auto& v : c.deviation) v = std::sqrt(v / static_cast<double>(count[k]));
  }
}

}  // namespace rulemine
