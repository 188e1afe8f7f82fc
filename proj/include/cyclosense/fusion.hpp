#pragma once

#include <cstddef>
#include <span>
#include <string>

#include "cyclosense/detectors.hpp"

namespace cyclosense {

/// k-out-of-n vote combiner at the fusion centre.
struct FusionRule {
    enum class Kind { kAnd, kOr, kMajority, kKOutOfN };

    Kind kind = Kind::kOr;
    std::size_t k = 0;  // only read for kKOutOfN

    static FusionRule and_rule() { return {Kind::kAnd, 0}; }
    static FusionRule or_rule() { return {Kind::kOr, 0}; }
    static FusionRule majority() { return {Kind::kMajority, 0}; }
    static FusionRule k_out_of_n(std::size_t k) { return {Kind::kKOutOfN, k}; }

    /// Accepts "and", "or", "majority" and "k:<k>" (case-insensitive).
    static FusionRule parse(const std::string& text);

    std::string name() const;

    friend bool operator==(const FusionRule&, const FusionRule&) = default;
};

/// AND -> n, OR -> 1, MAJORITY -> ceil(n/2), K_OUT_OF_N(k) -> k.
/// Throws ConfigError when n == 0 or k is outside [1, n].
std::size_t rule_to_k(const FusionRule& rule, std::size_t n);

/// H1 iff at least rule_to_k(rule, n) of the n votes are H1.
Hypothesis fuse_decisions(std::span<const Decision> decisions, const FusionRule& rule);

/// Same rule over a plain vote count.
Hypothesis fuse_votes(std::size_t h1_votes, std::size_t n, const FusionRule& rule);

/// Binomial upper tail sum_{i=k}^{n} C(n,i) p^i (1-p)^(n-i).
double fusion_probability(double p, std::size_t n, std::size_t k);

}  // namespace cyclosense
