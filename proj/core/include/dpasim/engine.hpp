#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "dpasim/model.hpp"
#include "dpasim/policies.hpp"
#include "dpasim/rng.hpp"

namespace dpasim {

// Pre-recorded channel and arrival sequences, indexed [slot][user]. When
// supplied, sampling is bypassed entirely and no RNG draws are consumed, so a
// replay is exactly deterministic.
struct ForcedTraces {
    std::vector<ChannelStateVector> channels;
    std::vector<std::vector<std::uint8_t>> arrivals;
};

struct RunOptions {
    const ForcedTraces* traces = nullptr;
    // Queues the run starts from; empty means every queue starts empty.
    std::vector<UserQueue> initial_queues;
    // Slots between logged records; 0 picks every slot up to 10^4 total
    // records and strides horizon/10^4 beyond that. The final slot is always
    // logged. Averages are kept from full-resolution counters regardless.
    std::int64_t log_stride = 0;
};

struct UserCounters {
    std::int64_t arrivals = 0;
    std::int64_t served = 0;
    std::int64_t dropped = 0;
    std::int64_t transmissions = 0;  // slots with nonzero power
    std::int64_t initial_backlog = 0;
    double power_sum = 0.0;
    double cost_sum = 0.0;
};

struct SimState {
    std::int64_t t = 0;
    std::vector<UserQueue> queues;
    VirtualQueues x;
    std::vector<UserCounters> counters;
    Rng rng;
    // Running health checks, asserted by tests and the verify command.
    std::size_t conservation_violations = 0;
    double max_budget_gap = 0.0;  // max over slots of p_bar - gamma - X/t
};

SimState make_initial_state(const SystemConfig& config);

struct SlotRecord {
    std::int64_t t = 0;
    ChannelStateVector channels;
    PowerAllocation allocation;
    std::vector<std::optional<int>> head_deadline;  // observed at decision time
    std::vector<SlotOutcome> outcomes;
    std::vector<double> x_after;
    // Running averages over slots 0..t inclusive.
    std::vector<double> drop_rate;
    std::vector<double> avg_power;
    std::vector<double> avg_cost;
};

struct UserSummary {
    double drop_rate = 0.0;
    double avg_power = 0.0;       // power summed over all slots / horizon
    double avg_cost = 0.0;
    double x_over_t = 0.0;
    double x_final = 0.0;
    double avg_power_per_tx = 0.0;  // power summed / transmitting slots
    std::int64_t arrivals = 0;
    std::int64_t served = 0;
    std::int64_t dropped = 0;
    std::int64_t transmissions = 0;
};

struct RunResult {
    SystemConfig config;
    std::string policy_name;
    std::string rng_contract;
    std::vector<UserSummary> users;
    std::vector<SlotRecord> records;
    std::int64_t log_stride = 1;
    std::size_t conservation_violations = 0;
    double max_budget_gap = 0.0;
    double wall_ms = 0.0;
};

// One slot: observe channels, decide, serve, drop expired heads, tick
// countdowns, admit arrivals, then update counters and virtual queues.
// Sampling order per slot is channels for users 1..N then arrivals for users
// 1..N; this order is part of the reproducibility contract. Throws if the
// policy returns an infeasible allocation.
SlotRecord step(SimState& state, const Policy& policy, const SystemConfig& config,
                const ForcedTraces* traces = nullptr);

// horizon sequential steps. Queues, virtual queues, and counters start empty
// unless options override the queues. Identical (config, policy, options)
// give a bit-identical result apart from wall_ms.
RunResult run(const SystemConfig& config, const Policy& policy, const RunOptions& options = {});

ChannelStateVector sample_channels(Rng& rng, const SystemConfig& config);
std::vector<std::uint8_t> sample_arrivals(Rng& rng, const SystemConfig& config);

}  // namespace dpasim
