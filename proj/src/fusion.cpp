#include "cyclosense/fusion.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdint>

#include "cyclosense/error.hpp"

namespace cyclosense {


FusionRule FusionRule::parse(const std::string& text) {
    std::string s;
    for (char c : text) s.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(c))));
    if (s == "and") return and_rule();
    if (s == "or") return or_rule();
    if (s == "majority" || s == "maj") return majority();
    if (s.rfind("k:", 0) == 0 || s.rfind("k=", 0) == 0) {
        const std::string digits = s.substr(2);
        if (!digits.empty() && std::all_of(digits.begin(), digits.end(), [](char c) { return std::isdigit(c); })) {
            const std::size_t k = std::stoul(digits);
            if (k < 1) throw ConfigError("fusion rule '" + text + "': k must be at least 1");
            return k_out_of_n(k);
        }
    }
    throw ConfigError("unknown fusion rule '" + text + "' (expected and, or, majority or k:<k>)");
}

std::string FusionRule::name() const {
    switch (kind) {
        case Kind::kAnd: return "AND";
        case Kind::kOr: return "OR";
        case Kind::kMajority: return "MAJORITY";
        case Kind::kKOutOfN: return "K" + std::to_string(k);
    }
    return "?";
}

std::size_t rule_to_k(const FusionRule& rule, std::size_t n) {
    if (n == 0) throw ConfigError("fusion: number of users must be at least 1");
    switch (rule.kind) {
        case FusionRule::Kind::kAnd: return n;
        case FusionRule::Kind::kOr: return 1;
        case FusionRule::Kind::kMajority: return (n + 1) / 2;
        case FusionRule::Kind::kKOutOfN:
            if (rule.k < 1 || rule.k > n) {
                throw ConfigError("fusion: k=" + std::to_string(rule.k) + " outside [1, " + std::to_string(n) + "]");
            }
            return rule.k;
    }
    throw ConfigError("fusion: unknown rule");
}

Hypothesis fuse_votes(std::size_t h1_votes, std::size_t n, const FusionRule& rule) {
    return h1_votes >= rule_to_k(rule, n) ? Hypothesis::kH1 : Hypothesis::kH0;
}

Hypothesis fuse_decisions(std::span<const Decision> decisions, const FusionRule& rule) {
    if (decisions.empty()) throw ArgumentError("fuse_decisions: no decisions to fuse");
    const auto votes = static_cast<std::size_t>(std::count_if(
        decisions.begin(), decisions.end(), [](const Decision& d) { return d.hypothesis == Hypothesis::kH1; }));
    return fuse_votes(votes, decisions.size(), rule);
}

namespace {

constexpr std::size_t kExactBinomialLimit = 60;

// sum_{i=lo..hi} C(n, i) p^i (1-p)^(n-i), for 0 < p < 1.
double binomial_range(double p, std::size_t n, std::size_t lo, std::size_t hi) {
    const double q = 1.0 - p;
    double sum = 0.0;
    if (n <= kExactBinomialLimit) {
        // C(n, i) * (n - i) stays below 2^64 for n <= 60, so the binomial is exact.
        std::uint64_t binom = 1;
        for (std::size_t i = 0; i < lo; ++i) binom = binom * (n - i) / (i + 1);
        for (std::size_t i = lo; i <= hi; ++i) {
            sum += static_cast<double>(binom) * std::pow(p, static_cast<double>(i)) *
                   std::pow(q, static_cast<double>(n - i));
            binom = binom * (n - i) / (i + 1);
        }
        return sum;
    }
    const double lp = std::log(p);
    const double lq = std::log1p(-p);
    const double dn = static_cast<double>(n);
    const double ln_fact_n = std::lgamma(dn + 1.0);
    for (std::size_t i = lo; i <= hi; ++i) {
        const double di = static_cast<double>(i);
        const double log_binom = ln_fact_n - std::lgamma(di + 1.0) - std::lgamma(dn - di + 1.0);
        sum += std::exp(log_binom + di * lp + (dn - di) * lq);
    }
    return sum;
}

}  // namespace

double fusion_probability(double p, std::size_t n, std::size_t k) {
    if (!(p >= 0.0 && p <= 1.0)) throw ArgumentError("fusion_probability: p must lie in [0, 1]");
    if (k < 1 || k > n) throw ArgumentError("fusion_probability: need 1 <= k <= n");
    if (p == 0.0) return 0.0;
    if (p == 1.0) return 1.0;

    // Sum whichever tail is lighter; near 1 the complement keeps full precision.
    const bool upper = static_cast<double>(k) > static_cast<double>(n) * p;
    const std::size_t lo = upper ? k : 0;
    const std::size_t hi = upper ? n : k - 1;
    const double tail = binomial_range(p, n, lo, hi);
    return std::clamp(upper ? tail : 1.0 - tail, 0.0, 1.0);
}

}  // namespace cyclosense
