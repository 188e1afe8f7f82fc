#include "cyclosense/optimal_users.hpp"

#include <algorithm>
#include <cmath>

#include "cyclosense/error.hpp"

namespace cyclosense {

namespace {

bool open_unit(double p) { return p > 0.0 && p < 1.0; }

// Relative slack when comparing error values that are equal in exact
// arithmetic (e.g. symmetric pf/pm) but differ in the last bits.
constexpr double kTieTolerance = 1e-12;

}  // namespace

double error_total(double pf, double pd, std::size_t k_users, std::size_t n) {
    if (!open_unit(pf) || !open_unit(pd)) throw ArgumentError("error_total: pf and pd must lie in (0, 1)");
    if (n < 1 || n > k_users) throw ArgumentError("error_total: need 1 <= n <= k_users");

    const double k = static_cast<double>(k_users);
    double sum = 0.0;
    for (std::size_t l = n; l <= k_users; ++l) {
        const double dl = static_cast<double>(l);
        const double binom = std::exp(std::lgamma(k + 1.0) - std::lgamma(dl + 1.0) - std::lgamma(k - dl + 1.0));
        sum += binom * (std::pow(pf, dl) * std::pow(1.0 - pf, k - dl) - std::pow(pd, dl) * std::pow(1.0 - pd, k - dl));
    }
    return 1.0 + sum;
}

UserCountResult optimal_n(double pf, double pm, std::size_t k_users) {
    if (!open_unit(pf) || !open_unit(pm)) throw ArgumentError("optimal_n: pf and pm must lie in (0, 1)");
    if (k_users < 1) throw ArgumentError("optimal_n: k_users must be at least 1");
    if (!(pf < 1.0 - pm)) {
        throw DomainError("optimal_n: detector not better than chance (pf >= 1 - pm); formula logs change sign");
    }

    UserCountResult r;
    r.alpha_ratio = std::log(pf / (1.0 - pm)) / std::log(pm / (1.0 - pf));
    const double k = static_cast<double>(k_users);
    // Shave rounding noise so exact integers (alpha = 1, even k) do not ceil upward.
    const double raw = std::ceil(k / (1.0 + r.alpha_ratio) - 1e-9);
    r.n_opt = static_cast<std::size_t>(std::clamp(raw, 1.0, k));
    r.error_at_opt = error_total(pf, 1.0 - pm, k_users, r.n_opt);
    return r;
}

std::size_t brute_force_optimal_n(double pf, double pd, std::size_t k_users) {
    if (k_users < 1) throw ArgumentError("brute_force_optimal_n: k_users must be at least 1");
    std::size_t best_n = 1;
    double best = error_total(pf, pd, k_users, 1);
    for (std::size_t n = 2; n <= k_users; ++n) {
        const double e = error_total(pf, pd, k_users, n);
        if (e < best - kTieTolerance * std::max(1.0, std::abs(best))) {
            best = e;
            best_n = n;
        }
    }
    return best_n;
}

std::vector<OptimalNRow> optimal_n_curve(double pm, std::size_t k_users, std::span<const double> pf_grid) {
    std::vector<OptimalNRow> rows;
    rows.reserve(pf_grid.size());
    for (double pf : pf_grid) {
        OptimalNRow row;
        row.pf = pf;
        try {
            row.result = optimal_n(pf, pm, k_users);
            row.valid = true;
        } catch (const ConfigError& e) {
            row.error = e.what();
        }
        rows.push_back(std::move(row));
    }
    return rows;
}

}  // namespace cyclosense
