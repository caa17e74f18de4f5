#pragma once

// ev-MOGA: main population P, box archive A and auxiliary population GA.
//
// Each iteration draws nind_ga / 2 parent pairs (one from P, one from A),
// produces two offspring per pair by extended linear recombination or
// Gaussian mutation, offers the offspring to the archive and lets each one
// replace a random member of P that it dominates.

#include "evmoga/epsilon_archive.hpp"
#include "evmoga/portfolio.hpp"

#include <cstdint>
#include <functional>
#include <utility>
#include <vector>

namespace evmoga {

struct EvMogaConfig {
    int nind_p = 10000;
    int nind_ga = 500;
    long long k_max = 100000;
    /// A uniform draw u > p_cm selects crossover, u <= p_cm mutation, so this
    /// is effectively the mutation probability.
    double p_cm = 0.2;
    int n_box = 300;
    std::uint64_t seed = 1;
    /// Recombination factor alpha is drawn from [-d, 1 + d].
    double recomb_extension = 0.25;
    /// Mutation standard deviation as a fraction of each weight's bound range.
    double mutation_scale = 0.1;
    /// Report progress every this many iterations; 0 disables checkpoints.
    long long checkpoint_every = 0;

    /// Throws std::invalid_argument on out-of-range values.
    void validate() const;
};

struct Checkpoint {
    long long iteration = 0;
    std::size_t archive_size = 0;
    std::array<Vec3, kNumObjectives> anchors{};
    /// Hypervolume of the archive with the grid's f_max as reference point.
    double hypervolume = 0.0;
};

struct RunResult {
    EpsArchive archive;
    long long iterations_done = 0;
    long long evaluations = 0;
    std::vector<Checkpoint> checkpoints;
    double wall_seconds = 0.0;
};

/// Called at each checkpoint with the live archive (valid only during the call).
using ProgressSink = std::function<void(const Checkpoint&, const EpsArchive&)>;

/// Children x1 + alpha (x2 - x1) for the two given factors, repaired.
std::pair<Portfolio, Portfolio> recombine(const Portfolio& x1, const Portfolio& x2, double alpha1, double alpha2,
                                          const Bounds& bounds);

/// Extended linear recombination with independent alphas ~ U[-d, 1 + d].
std::pair<Portfolio, Portfolio> crossover(const Portfolio& x1, const Portfolio& x2, double d, const Bounds& bounds,
                                          Rng& rng);

/// repair(x + noise), noise_i ~ N(0, (scale * (upper_i - lower_i))^2).
Portfolio mutate(const Portfolio& x, double scale, const Bounds& bounds, Rng& rng);

RunResult run(const AssetUniverse& universe, const Bounds& bounds, const EvMogaConfig& config,
              const ProgressSink& progress = {});

/// Checkpoint summary of the archive's current state.
Checkpoint summarize(const EpsArchive& archive, long long iteration);

}  // namespace evmoga
