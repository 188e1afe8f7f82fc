#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <utility>
#include <vector>

namespace cyclosense {

/// Objective minimized by the swarm; maps a threshold to a cost.
using FitnessFn = std::function<double(double)>;

struct PsoConfig {
    struct RMode {
        enum class Kind { kFixed, kRandom };
        Kind kind = Kind::kFixed;
        double r1 = 0.3811;
        double r2 = 0.1895;
        std::uint64_t seed = 0;  // kRandom only

        static RMode fixed(double r1, double r2) { return {Kind::kFixed, r1, r2, 0}; }
        static RMode random(std::uint64_t seed) { return {Kind::kRandom, 0.0, 0.0, seed}; }
    };

    double c0 = 0.0;
    double c1 = 1.0;
    double c2 = 1.0;
    RMode r_mode;
    std::size_t max_iters = 50;
    std::optional<double> tolerance_zeta;
    /// When set, the first velocity term is c0 * V(n) (textbook inertia)
    /// instead of c0 * lambda(n).
    bool standard_inertia = false;
};

/// Throws ConfigError on a violated invariant.
void validate(const PsoConfig& cfg);

struct Particle {
    double lambda_current = 0.0;
    double pbest = 0.0;
    double pbest_fitness = 0.0;
    double velocity = 0.0;  // last V, read only in standard_inertia mode
};

struct Swarm {
    std::vector<Particle> particles;
    double gbest = 0.0;
    double gbest_fitness = 0.0;
    std::size_t iteration = 0;
};

/// Every particle starts at its initial threshold, which is also its pbest.
Swarm make_swarm(std::span<const double> initial_thresholds, const FitnessFn& fitness);

/// The (r1, r2) pair particle `index` uses at `iteration`.
std::pair<double, double> draw_r(const PsoConfig& cfg, std::size_t iteration, std::size_t index);

/// One synchronous update:
///   V = c0*lambda + c1*r1*(pbest - lambda) + c2*r2*(gbest - lambda)
///   lambda' = max(0, lambda + V)
/// then pbest on strict improvement, then gbest = lowest fitness among the
/// previous gbest and all pbests, equal fitness going to the lower threshold.
Swarm pso_step(const Swarm& swarm, const PsoConfig& cfg, const FitnessFn& fitness);

struct PsoResult {
    double gbest = 0.0;
    double gbest_fitness = 0.0;
    std::vector<double> history;          // gbest after each iteration
    std::vector<double> fitness_history;  // gbest_fitness after each iteration
    Swarm swarm;
};

/// Iterates pso_step until |history[i] - history[i-1]| < zeta (when zeta is
/// set) or max_iters iterations have run.
PsoResult pso_run(std::span<const double> initial_thresholds, const PsoConfig& cfg, const FitnessFn& fitness);

}  // namespace cyclosense
