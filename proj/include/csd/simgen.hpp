#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "csd/expression.hpp"
#include "csd/partition.hpp"
#include "csd/rng.hpp"

namespace csd {

enum class Scenario { S1, S2, S3, S4, S5, S6 };

Scenario parse_scenario(const std::string& name);  ///< "S1".."S6" or "S-1".."S-6"
std::string scenario_name(Scenario s);

struct ScenarioConfig {
    Scenario scenario = Scenario::S1;
    std::size_t samples = 100;
    std::size_t communities = 5;
    std::vector<std::size_t> size_choices{50, 100};
    std::uint64_t seed = 0;
    std::size_t replicates = 1;

    void validate() const;
};

struct CorrelationRange {
    double r_min;
    double r_max;
};

inline constexpr CorrelationRange kDenseCommunity{0.5, 1.0};
inline constexpr CorrelationRange kSparseCommunity{0.4, 0.7};

/// Target correlation with the leader of follower j (2 <= j <= n_C): r_min + (r_max-r_min)(1 - j/n_C).
double follower_correlation(std::size_t j, std::size_t community_size, CorrelationRange range);

struct Community {
    /// samples x size, column 0 is the leader.
    ExpressionMatrix profiles;
    std::size_t hub = 0;
};

/// Leader ~ N(0,1) per sample; follower j = leader + sqrt(1/r_j^2 - 1) * eps, so its population
/// correlation with the leader is exactly r_j. `leader` overrides the drawn leader profile.
Community generate_community(std::size_t samples, std::size_t size, CorrelationRange range, Rng& rng,
                             const std::vector<double>* leader = nullptr);

/// Profile whose population correlation with `base` (unit variance entries) is `r`.
std::vector<double> correlated_profile(const std::vector<double>& base, double r, Rng& rng);

struct LabeledDataset {
    ExpressionMatrix x;
    /// Community label per variable (1..K), kUnclustered marking irrelevant variables.
    std::vector<Label> labels;
    /// Variable index of each community's leader.
    std::vector<std::size_t> hubs;
    /// Scenario draws, for the record (ranges, leader correlation, noise sd).
    std::vector<CorrelationRange> ranges;
    double leader_correlation = 0.0;
    double noise_sd = 0.0;

    std::size_t relevant_count() const;
    Partition truth() const { return Partition::from_labels(labels); }
};

/// Replicate `replicate` of the scenario, drawn from the stream derived from (seed, replicate).
LabeledDataset generate_scenario(const ScenarioConfig& config, std::size_t replicate = 0);

std::vector<LabeledDataset> replicate_suite(const ScenarioConfig& config, std::size_t jobs = 1);

/// `variable_id  community_id  is_hub` with header; irrelevant variables carry community 0.
std::string format_labels(const LabeledDataset& data);

} // namespace csd
