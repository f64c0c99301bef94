#ifndef RULEMINE_PSO_HPP
#define RULEMINE_PSO_HPP

#include <cstddef>
#include <cstdint>
#include <vector>

#include "rulemine/dataset.hpp"
#include "rulemine/lvq.hpp"
#include "rulemine/random.hpp"
#include "rulemine/rules.hpp"

namespace rulemine {

struct VelocityBounds {
  double lower = -1.0;
  double upper = 1.0;

  double clamp(double v) const { return v < lower ? lower : (v > upper ? upper : v); }
  /// Maps u in [0,1] linearly onto [lower, upper].
  double rescale(double u) const { return lower + u * (upper - lower); }
};

/// Convex combination weights of the rule fitness.
struct FitnessWeights {
  double confidence = 0.6;
  double support = 0.3;
  double length = 0.1;
};

struct PsoConfig {
  std::size_t swarm_size = 40;
  std::size_t max_iterations = 200;
  double inertia = 0.7;
  double cognitive = 1.4;
  double social = 1.4;
  VelocityBounds veloc1{-1.0, 1.0};
  VelocityBounds veloc2{-4.0, 4.0};
  FitnessWeights weights;
  double interval_velocity_max = 0.1;  // |velocity| cap for the (lo, hi) genes
  std::size_t stagnation_limit = 30;   // iterations without gbest improvement before stopping
  std::uint64_t seed = 0;

  /// Throws ConfigError.
  void validate() const;
};

struct IntervalGene {
  double lo = 0.0;
  double hi = 1.0;

  bool operator==(const IntervalGene&) const = default;
};

struct ParticleMemory {
  std::vector<std::uint8_t> position;
  std::vector<IntervalGene> genes;
  double fitness = 0.0;
};

/// One candidate antecedent. `position` holds one participation bit per
/// encoded column; `genes` holds an interval per attribute, meaningful only
/// for numeric attributes.
struct Particle {
  std::vector<std::uint8_t> position;
  std::vector<double> veloc1;
  std::vector<double> veloc2;
  std::vector<IntervalGene> genes;
  std::vector<IntervalGene> gene_velocity;
  double fitness = 0.0;
  ParticleMemory best;
};

enum class SeedSource { eligible_centroids, class_centroids, random };

struct Swarm {
  std::vector<Particle> particles;
  ParticleMemory global_best;
  std::size_t consequent = 0;
  std::size_t iteration = 0;
  std::size_t stagnant_iterations = 0;
  SeedSource source = SeedSource::random;
  std::vector<double> trace;  // gbest fitness after seeding and after every step
  Rng rng{0};
};

double sigmoid(double v);

/// Bit = 1 with probability sigmoid(veloc2).
bool binarize(double veloc2, Rng& rng);

/// Participation of a numeric column: clamp(1 - 1.5 * deviation, 0, 1).
double numeric_participation(double deviation);

/// Lo/hi repair: clamp to [0,1], swap if inverted.
IntervalGene repair(IntervalGene gene);

double fitness(const Rule& rule, const EncodedDataset& data, const FitnessWeights& weights);

Rule decode(const std::vector<std::uint8_t>& position, const std::vector<IntervalGene>& genes,
            const Encoding& encoding, std::size_t consequent);
Rule decode(const Particle& particle, const Encoding& encoding, std::size_t consequent);

/// Fitness of the rule the particle decodes to.
double fitness(const Particle& particle, std::size_t consequent, const EncodedDataset& data,
               const PsoConfig& config);

Swarm seed_swarm(const LvqNetwork& network, std::size_t consequent, std::size_t min_represented,
                 const EncodedDataset& uncovered, const PsoConfig& config);

void step(Swarm& swarm, const EncodedDataset& uncovered, const PsoConfig& config);

/// Steps until max_iterations or stagnation_limit is reached.
void evolve(Swarm& swarm, const EncodedDataset& uncovered, const PsoConfig& config);

Rule best_rule(const Swarm& swarm, const Encoding& encoding);

}  // namespace rulemine

#endif
