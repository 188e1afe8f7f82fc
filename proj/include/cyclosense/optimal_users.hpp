#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

namespace cyclosense {

// Naming inside this module: k_users is the total number of cooperating
// users and n is the vote threshold. fusion_probability(p, n, k) uses the
// opposite letters; error_total(pf, pd, k_users, n) equals
// fusion_probability(pf, k_users, n) + 1 - fusion_probability(pd, k_users, n).

struct UserCountResult {
    std::size_t n_opt = 1;
    double alpha_ratio = 0.0;   // ln(pf/(1-pm)) / ln(pm/(1-pf)); unrelated to cyclic frequency
    double error_at_opt = 0.0;  // error_total at n_opt
};

/// Fused false-alarm plus miss probability for an n-out-of-k_users rule.
double error_total(double pf, double pd, std::size_t k_users, std::size_t n);

/// Closed-form error-minimizing vote threshold min(k, ceil(k/(1+alpha))),
/// clamped to >= 1. Requires pf < 1 - pm; throws DomainError otherwise.
UserCountResult optimal_n(double pf, double pm, std::size_t k_users);

/// argmin over n in 1..k_users of error_total, ties to the smaller n.
std::size_t brute_force_optimal_n(double pf, double pd, std::size_t k_users);

struct OptimalNRow {
    double pf = 0.0;
    bool valid = false;
    UserCountResult result;
    std::string error;  // why the row is out of domain, empty when valid
};

/// One row per grid entry; rows outside the closed form's domain are kept
/// and marked invalid.
std::vector<OptimalNRow> optimal_n_curve(double pm, std::size_t k_users, std::span<const double> pf_grid);

}  // namespace cyclosense
