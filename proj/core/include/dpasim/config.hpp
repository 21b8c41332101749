#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace dpasim {

// Baseline scenario parameters (two-level fading, Bernoulli arrivals).
inline constexpr double kDefaultPLow = 1.0;
inline constexpr double kDefaultPHigh = 2.0;
inline constexpr double kDefaultBadChannelProb = 0.6;
inline constexpr double kDefaultArrivalProb = 0.4;
inline constexpr double kDefaultPowerBudget = 0.6;
inline constexpr int kDefaultDeadline = 5;
inline constexpr double kDefaultPenaltyWeight = 60.0;
inline constexpr std::int64_t kDefaultHorizon = 100000;

// Full description of one simulated scenario. Per-user vectors all have
// n_users entries.
struct SystemConfig {
    int n_users = 1;
    double p_low = kDefaultPLow;    // transmit power on a Good channel
    double p_high = kDefaultPHigh;  // transmit power on a Bad channel
    std::vector<double> arrival_prob;
    std::vector<int> deadline;           // max slots a packet may wait (m_i)
    std::vector<double> power_budget;    // allowed time-average power (gamma_i)
    std::vector<double> bad_channel_prob;
    double penalty_weight = kDefaultPenaltyWeight;  // drop-cost weight (V)
    std::int64_t horizon = kDefaultHorizon;         // slots per run
    std::uint64_t seed = 1;
};

// Config with every per-user parameter set to the baseline defaults.
SystemConfig uniform_config(int n_users);

// Returns one message per violated constraint, each naming the offending
// field; empty means the config is usable.
std::vector<std::string> validate_config(const SystemConfig& config);

// Throws std::invalid_argument with the joined messages if invalid.
void require_valid(const SystemConfig& config);

}  // namespace dpasim
