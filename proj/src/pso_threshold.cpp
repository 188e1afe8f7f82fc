#include "cyclosense/pso_threshold.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <string>

#include "cyclosense/error.hpp"
#include "cyclosense/seeding.hpp"

namespace cyclosense {

namespace {

double evaluate(const FitnessFn& fitness, double lambda, std::size_t index) {
    const double f = fitness(lambda);
    if (!std::isfinite(f)) {
        throw RunError("pso: fitness returned a non-finite value for particle " + std::to_string(index));
    }
    return f;
}

bool better(double fit_a, double lambda_a, double fit_b, double lambda_b) {
    return fit_a < fit_b || (fit_a == fit_b && lambda_a < lambda_b);
}

double unit_uniform(std::mt19937_64& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

}  // namespace

void validate(const PsoConfig& cfg) {
    if (!std::isfinite(cfg.c0) || !std::isfinite(cfg.c1) || !std::isfinite(cfg.c2)) {
        throw ConfigError("pso: coefficients must be finite");
    }
    if (cfg.max_iters < 1) throw ConfigError("pso: max_iters must be at least 1");
    if (cfg.r_mode.kind == PsoConfig::RMode::Kind::kFixed) {
        const auto in_unit = [](double r) { return r >= 0.0 && r <= 1.0; };
        if (!in_unit(cfg.r_mode.r1) || !in_unit(cfg.r_mode.r2)) {
            throw ConfigError("pso: fixed r1 and r2 must lie in [0, 1]");
        }
    }
    if (cfg.tolerance_zeta && !(*cfg.tolerance_zeta >= 0.0)) {
        throw ConfigError("pso: tolerance zeta must be >= 0");
    }
}

Swarm make_swarm(std::span<const double> initial_thresholds, const FitnessFn& fitness) {
    if (initial_thresholds.empty()) throw ArgumentError("pso: need at least one initial threshold");
    Swarm swarm;
    for (std::size_t i = 0; i < initial_thresholds.size(); ++i) {
        const double t = initial_thresholds[i];
        if (!(t >= 0.0) || !std::isfinite(t)) {
            throw ArgumentError("pso: initial threshold " + std::to_string(i) + " must be finite and >= 0");
        }
        swarm.particles.push_back({t, t, evaluate(fitness, t, i), 0.0});
    }
    swarm.gbest = swarm.particles.front().pbest;
    swarm.gbest_fitness = swarm.particles.front().pbest_fitness;
    for (const Particle& p : swarm.particles) {
        if (better(p.pbest_fitness, p.pbest, swarm.gbest_fitness, swarm.gbest)) {
            swarm.gbest = p.pbest;
            swarm.gbest_fitness = p.pbest_fitness;
        }
    }
    return swarm;
}

std::pair<double, double> draw_r(const PsoConfig& cfg, std::size_t iteration, std::size_t index) {
    if (cfg.r_mode.kind == PsoConfig::RMode::Kind::kFixed) return {cfg.r_mode.r1, cfg.r_mode.r2};
    std::mt19937_64 rng(derive_seed(cfg.r_mode.seed, {iteration, index}));
    const double r1 = unit_uniform(rng);
    const double r2 = unit_uniform(rng);
    return {r1, r2};
}

Swarm pso_step(const Swarm& swarm, const PsoConfig& cfg, const FitnessFn& fitness) {
    validate(cfg);
    if (swarm.particles.empty()) throw ArgumentError("pso: swarm has no particles");

    Swarm next = swarm;
    for (std::size_t i = 0; i < next.particles.size(); ++i) {
        Particle& p = next.particles[i];
        const auto [r1, r2] = draw_r(cfg, swarm.iteration, i);
        const double first = cfg.standard_inertia ? cfg.c0 * p.velocity : cfg.c0 * p.lambda_current;
        const double v = first + cfg.c1 * r1 * (p.pbest - p.lambda_current) +
                         cfg.c2 * r2 * (swarm.gbest - p.lambda_current);
        p.velocity = v;
        p.lambda_current = std::max(0.0, p.lambda_current + v);
        const double f = evaluate(fitness, p.lambda_current, i);
        if (f < p.pbest_fitness) {
            p.pbest = p.lambda_current;
            p.pbest_fitness = f;
        }
    }
    // Fold in particle order so the result does not depend on evaluation order.
    for (const Particle& p : next.particles) {
        if (better(p.pbest_fitness, p.pbest, next.gbest_fitness, next.gbest)) {
            next.gbest = p.pbest;
            next.gbest_fitness = p.pbest_fitness;
        }
    }
    ++next.iteration;
    return next;
}

PsoResult pso_run(std::span<const double> initial_thresholds, const PsoConfig& cfg, const FitnessFn& fitness) {
    validate(cfg);
    PsoResult result;
    result.swarm = make_swarm(initial_thresholds, fitness);
    for (std::size_t it = 0; it < cfg.max_iters; ++it) {
        result.swarm = pso_step(result.swarm, cfg, fitness);
        result.history.push_back(result.swarm.gbest);
        result.fitness_history.push_back(result.swarm.gbest_fitness);
        const std::size_t h = result.history.size();
        if (cfg.tolerance_zeta && h >= 2 &&
            std::abs(result.history[h - 1] - result.history[h - 2]) < *cfg.tolerance_zeta) {
            break;
        }
    }
    result.gbest = result.swarm.gbest;
    result.gbest_fitness = result.swarm.gbest_fitness;
    return result;
}

}  // namespace cyclosense
