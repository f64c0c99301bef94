#include "rulemine/pso.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "rulemine/errors.hpp"

namespace rulemine {
namespace {

constexpr double kDeviationSpan = 1.5;

Particle blank_particle(std::size_t dimension, std::size_t attributes) {
  Particle p;
  p.position.assign(dimension, 0);
  p.veloc1.assign(dimension, 0.0);
  p.veloc2.assign(dimension, 0.0);
  p.genes.assign(attributes, IntervalGene{});
  p.gene_velocity.assign(attributes, IntervalGene{0.0, 0.0});
  return p;
}

void randomize_veloc1(Particle& p, const PsoConfig& config, Rng& rng) {
  for (auto& v : p.veloc1) v = rng.uniform(config.veloc1.lower, config.veloc1.upper);
}

void randomize_gene_velocity(Particle& p, const PsoConfig& config, Rng& rng) {
  const double vmax = config.interval_velocity_max;
  for (auto& v : p.gene_velocity) v = {rng.uniform(-vmax, vmax), rng.uniform(-vmax, vmax)};
}

Particle from_centroid(const Centroid& centroid, const Encoding& encoding,
                       const PsoConfig& config, Rng& rng) {
  const auto& schema = encoding.schema();
  Particle p = blank_particle(encoding.dimension(), schema.attribute_count());
  for (std::size_t j = 0; j < encoding.dimension(); ++j) {
    const auto& col = encoding.columns()[j];
    const double unit = col.value ? std::clamp(centroid.position[j], 0.0, 1.0)
                                  : numeric_participation(centroid.deviation[j]);
    p.veloc2[j] = config.veloc2.clamp(config.veloc2.rescale(unit));
  }
  for (std::size_t a = 0; a < schema.attribute_count(); ++a) {
    if (schema.attribute(a).is_nominal()) continue;
    const std::size_t j = encoding.block(a).first_column;
    const double spread = kDeviationSpan * centroid.deviation[j];
    p.genes[a] = repair({centroid.position[j] - spread, centroid.position[j] + spread});
  }
  randomize_veloc1(p, config, rng);
  randomize_gene_velocity(p, config, rng);
  return p;
}

Particle perturbed_copy(const Particle& base, const Encoding& encoding, const PsoConfig& config,
                        Rng& rng) {
  Particle p = base;
  const double sd = (config.veloc2.upper - config.veloc2.lower) / 8.0;
  for (auto& v : p.veloc2) v = config.veloc2.clamp(v + sd * rng.normal());
  for (std::size_t a = 0; a < p.genes.size(); ++a) {
    if (encoding.schema().attribute(a).is_nominal()) continue;
    p.genes[a] = repair({p.genes[a].lo + rng.uniform(-0.1, 0.1), p.genes[a].hi + rng.uniform(-0.1, 0.1)});
  }
  randomize_veloc1(p, config, rng);
  randomize_gene_velocity(p, config, rng);
  return p;
}

Particle random_particle(const Encoding& encoding, const PsoConfig& config, Rng& rng) {
  Particle p = blank_particle(encoding.dimension(), encoding.schema().attribute_count());
  for (auto& v : p.veloc2) v = rng.uniform(config.veloc2.lower, config.veloc2.upper);
  for (std::size_t a = 0; a < p.genes.size(); ++a) {
    if (encoding.schema().attribute(a).is_nominal()) continue;
    p.genes[a] = repair({rng.uniform(), rng.uniform()});
  }
  randomize_veloc1(p, config, rng);
  randomize_gene_velocity(p, config, rng);
  return p;
}

void sample_position(Particle& p, Rng& rng) {
  for (std::size_t j = 0; j < p.position.size(); ++j) {
    p.position[j] = binarize(p.veloc2[j], rng) ? 1 : 0;
  }
}

void remember(Particle& p) { p.best = {p.position, p.genes, p.fitness}; }

// Strict improvement only; scanning in particle order keeps ties on the lowest index.
bool refresh_global_best(Swarm& swarm) {
  bool improved = false;
  for (const auto& p : swarm.particles) {
    if (p.best.fitness > swarm.global_best.fitness) {
      swarm.global_best = p.best;
      improved = true;
    }
  }
  return improved;
}

}  // namespace

void PsoConfig::validate() const {
  if (swarm_size < 2) throw ConfigError("swarm_size must be at least 2");
  if (max_iterations == 0) throw ConfigError("max_iterations must be positive");
  if (!(veloc1.lower < veloc1.upper) || !(veloc2.lower < veloc2.upper)) {
    throw ConfigError("velocity bounds must satisfy lower < upper");
  }
  if (weights.confidence < 0 || weights.support < 0 || weights.length < 0) {
    throw ConfigError("fitness weights must be non-negative");
  }
  if (std::abs(weights.confidence + weights.support + weights.length - 1.0) > 1e-9) {
    throw ConfigError("fitness weights must sum to 1");
  }
  if (!(inertia >= 0.0) || !(cognitive >= 0.0) || !(social >= 0.0)) {
    throw ConfigError("inertia and acceleration coefficients must be non-negative");
  }
  if (!(interval_velocity_max > 0.0)) throw ConfigError("interval_velocity_max must be positive");
}

double sigmoid(double v) { return 1.0 / (1.0 + std::exp(-v)); }

bool binarize(double veloc2, Rng& rng) { return rng.uniform() < sigmoid(veloc2); }

double numeric_participation(double deviation) {
  return std::clamp(1.0 - kDeviationSpan * deviation, 0.0, 1.0);
}

IntervalGene repair(IntervalGene gene) {
  gene.lo = std::clamp(gene.lo, 0.0, 1.0);
  gene.hi = std::clamp(gene.hi, 0.0, 1.0);
  if (gene.lo > gene.hi) std::swap(gene.lo, gene.hi);
  return gene;
}

double fitness(const Rule& rule, const EncodedDataset& data, const FitnessWeights& weights) {
  const auto stats = measure(rule, data);
  const double total = static_cast<double>(data.schema().attribute_count());
  const double brevity = 1.0 - static_cast<double>(rule.antecedent.size()) / total;
  return weights.confidence * stats.confidence() + weights.support * stats.support() +
         weights.length * brevity;
}

Rule decode(const std::vector<std::uint8_t>& position, const std::vector<IntervalGene>& genes,
            const Encoding& encoding, std::size_t consequent) {
  const auto& schema = encoding.schema();
  Rule rule;
  rule.consequent = consequent;
  for (std::size_t a = 0; a < schema.attribute_count(); ++a) {
    const auto& block = encoding.block(a);
    if (schema.attribute(a).is_nominal()) {
      NominalMembership m;
      for (std::size_t v = 0; v < block.width; ++v) {
        if (position[block.first_column + v]) m.values.push_back(v);
      }
      if (m.values.empty() || m.values.size() == block.width) continue;
      rule.antecedent.push_back({a, std::move(m)});
    } else if (position[block.first_column]) {
      const auto g = repair(genes[a]);
      // [0,1] holds for every clamped value, so it restricts nothing.
      if (g.lo <= 0.0 && g.hi >= 1.0) continue;
      rule.antecedent.push_back({a, NumericInterval{g.lo, g.hi}});
    }
  }
  return rule;
}

Rule decode(const Particle& particle, const Encoding& encoding, std::size_t consequent) {
  return decode(particle.position, particle.genes, encoding, consequent);
}

double fitness(const Particle& particle, std::size_t consequent, const EncodedDataset& data,
               const PsoConfig& config) {
  return fitness(decode(particle, data.encoding(), consequent), data, config.weights);
}

Swarm seed_swarm(const LvqNetwork& network, std::size_t consequent, std::size_t min_represented,
                 const EncodedDataset& uncovered, const PsoConfig& config) {
  if (uncovered.empty()) throw DataError("cannot seed a swarm on an empty uncovered set");
  config.validate();
  const auto& encoding = uncovered.encoding();

  Swarm swarm;
  swarm.consequent = consequent;
  swarm.rng = Rng(config.seed);

  std::vector<std::size_t> seeds;
  for (std::size_t k = 0; k < network.centroids.size(); ++k) {
    const auto& c = network.centroids[k];
    if (c.label == consequent && c.represented_count >= min_represented) seeds.push_back(k);
  }
  swarm.source = SeedSource::eligible_centroids;
  if (seeds.empty()) {
    for (std::size_t k = 0; k < network.centroids.size(); ++k) {
      if (network.centroids[k].label == consequent) seeds.push_back(k);
    }
    swarm.source = SeedSource::class_centroids;
  }
  if (seeds.empty()) swarm.source = SeedSource::random;
  if (!seeds.empty() && network.dimension() != encoding.dimension()) {
    throw SchemaError("LVQ network dimension does not match the dataset");
  }

  // Keep the most representative centroids when there are more than particles.
  std::stable_sort(seeds.begin(), seeds.end(), [&](std::size_t a, std::size_t b) {
    return network.centroids[a].represented_count > network.centroids[b].represented_count;
  });
  if (seeds.size() > config.swarm_size) seeds.resize(config.swarm_size);

  auto& rng = swarm.rng;
  for (auto k : seeds) swarm.particles.push_back(from_centroid(network.centroids[k], encoding, config, rng));
  const std::size_t seeded = swarm.particles.size();
  while (swarm.particles.size() < config.swarm_size) {
    if (seeded == 0) {
      swarm.particles.push_back(random_particle(encoding, config, rng));
    } else {
      const auto& base = swarm.particles[swarm.particles.size() % seeded];
      swarm.particles.push_back(perturbed_copy(base, encoding, config, rng));
    }
  }

  swarm.global_best.fitness = -1.0;
  for (auto& p : swarm.particles) {
    sample_position(p, rng);
    p.fitness = fitness(p, consequent, uncovered, config);
    remember(p);
  }
  refresh_global_best(swarm);
  swarm.trace.push_back(swarm.global_best.fitness);
  return swarm;
}

void step(Swarm& swarm, const EncodedDataset& uncovered, const PsoConfig& config) {
  auto& rng = swarm.rng;
  const auto gbest = swarm.global_best;
  const auto& schema = uncovered.schema();
  const double vmax = config.interval_velocity_max;

  for (auto& p : swarm.particles) {
    for (std::size_t j = 0; j < p.position.size(); ++j) {
      const double x = p.position[j];
      const double r1 = rng.uniform();
      const double r2 = rng.uniform();
      const double v1 = config.inertia * p.veloc1[j] +
                        config.cognitive * r1 * (p.best.position[j] - x) +
                        config.social * r2 * (gbest.position[j] - x);
      p.veloc1[j] = config.veloc1.clamp(v1);
      p.veloc2[j] = config.veloc2.clamp(p.veloc2[j] + p.veloc1[j]);
      p.position[j] = binarize(p.veloc2[j], rng) ? 1 : 0;
    }

    for (std::size_t a = 0; a < p.genes.size(); ++a) {
      if (schema.attribute(a).is_nominal()) continue;
      auto update = [&](double g, double v, double pb, double gb) {
        const double r1 = rng.uniform();
        const double r2 = rng.uniform();
        const double nv = config.inertia * v + config.cognitive * r1 * (pb - g) +
                          config.social * r2 * (gb - g);
        return std::clamp(nv, -vmax, vmax);
      };
      auto& gene = p.genes[a];
      auto& vel = p.gene_velocity[a];
      vel.lo = update(gene.lo, vel.lo, p.best.genes[a].lo, gbest.genes[a].lo);
      vel.hi = update(gene.hi, vel.hi, p.best.genes[a].hi, gbest.genes[a].hi);
      const IntervalGene moved{gene.lo + vel.lo, gene.hi + vel.hi};
      gene = repair(moved);
      if (std::clamp(moved.lo, 0.0, 1.0) > std::clamp(moved.hi, 0.0, 1.0)) std::swap(vel.lo, vel.hi);
    }

    p.fitness = fitness(p, swarm.consequent, uncovered, config);
    if (p.fitness > p.best.fitness) remember(p);
  }

  ++swarm.iteration;
  if (refresh_global_best(swarm)) {
    swarm.stagnant_iterations = 0;
  } else {
    ++swarm.stagnant_iterations;
  }
  swarm.trace.push_back(swarm.global_best.fitness);
}

void evolve(Swarm& swarm, const EncodedDataset& uncovered, const PsoConfig& config) {
  while (swarm.iteration < config.max_iterations &&
         swarm.stagnant_iterations < config.stagnation_limit) {
    step(swarm, uncovered, config);
  }
}

Rule best_rule(const Swarm& swarm, const Encoding& encoding) {
  return decode(swarm.global_best.position, swarm.global_best.genes, encoding, swarm.consequent);
}

}  // namespace rulemine
