#include "dpasim/engine.hpp"

#include <algorithm>
#include <chrono>
#include <stdexcept>

#include "dpasim/rng.hpp"

namespace dpasim {

ChannelStateVector sample_channels(Rng& rng, const SystemConfig& config) {
    ChannelStateVector channels(config.n_users);
    for (int i = 0; i < config.n_users; ++i)
        channels[i] = rng.bernoulli(config.bad_channel_prob[i]) ? ChannelState::Bad
                                                                : ChannelState::Good;
    return channels;
}

std::vector<std::uint8_t> sample_arrivals(Rng& rng, const SystemConfig& config) {
    std::vector<std::uint8_t> arrivals(config.n_users);
    for (int i = 0; i < config.n_users; ++i)
        arrivals[i] = rng.bernoulli(config.arrival_prob[i]) ? 1 : 0;
    return arrivals;
}

SimState make_initial_state(const SystemConfig& config) {
    SimState state{.t = 0,
                   .queues = std::vector<UserQueue>(config.n_users),
                   .x = VirtualQueues(config.n_users, 0.0),
                   .counters = std::vector<UserCounters>(config.n_users),
                   .rng = Rng(config.seed)};
    return state;
}

SlotRecord step(SimState& state, const Policy& policy, const SystemConfig& config,
                const ForcedTraces* traces) {
    const int n = config.n_users;
    const std::int64_t t = state.t;

    ChannelStateVector channels;
    std::vector<std::uint8_t> arrivals;
    if (traces) {
        channels = traces->channels.at(static_cast<std::size_t>(t));
        arrivals = traces->arrivals.at(static_cast<std::size_t>(t));
        if (channels.size() != static_cast<std::size_t>(n) ||
            arrivals.size() != static_cast<std::size_t>(n))
            throw std::invalid_argument("forced trace row width does not match n_users");
    } else {
        channels = sample_channels(state.rng, config);
        arrivals = sample_arrivals(state.rng, config);
    }

    SlotView view = view_of(config, t, channels, state.queues);
    PolicyDecision decision = policy.decide(view, state.x);
    if (decision.allocation.power.size() != static_cast<std::size_t>(n))
        throw std::runtime_error("policy '" + std::string(policy.name()) +
                                 "' returned an allocation of the wrong width");
    if (auto violation = validate_allocation(decision.allocation, channels, config))
        throw std::runtime_error("policy '" + std::string(policy.name()) +
                                 "' returned an infeasible allocation at slot " +
                                 std::to_string(t) + ": " + describe(*violation));

    SlotRecord record;
    record.t = t;
    record.channels = channels;
    record.allocation = decision.allocation;
    record.head_deadline = view.head_deadline;
    record.outcomes.resize(n);
    record.x_after.resize(n);
    record.drop_rate.resize(n);
    record.avg_power.resize(n);
    record.avg_cost.resize(n);

    for (int i = 0; i < n; ++i) {
        const double p = decision.allocation.power[i];
        const bool served = p > 0.0 && !state.queues[i].empty();
        const double cost = surrogate_cost(config.deadline[i], view.head_deadline[i], served);

        auto advanced = advance_queue(std::move(state.queues[i]), served, arrivals[i] != 0,
                                      config.deadline[i]);
        state.queues[i] = std::move(advanced.queue);

        SlotOutcome& outcome = record.outcomes[i];
        outcome.served = served;
        outcome.dropped = advanced.dropped;
        outcome.arrival = arrivals[i] != 0;
        outcome.cost = cost;

        UserCounters& c = state.counters[i];
        c.arrivals += outcome.arrival ? 1 : 0;
        c.served += served ? 1 : 0;
        c.dropped += advanced.dropped ? 1 : 0;
        c.transmissions += p > 0.0 ? 1 : 0;
        c.power_sum += p;
        c.cost_sum += cost;

        // exact integer identity: everything admitted is served, dropped, or waiting
        if (c.arrivals + c.initial_backlog !=
            c.served + c.dropped + static_cast<std::int64_t>(state.queues[i].size()))
            ++state.conservation_violations;
    }

    state.x = virtual_queue_update(state.x, decision.allocation, config);
    state.t = t + 1;

    const double elapsed = static_cast<double>(state.t);
    for (int i = 0; i < n; ++i) {
        const UserCounters& c = state.counters[i];
        record.x_after[i] = state.x[i];
        record.drop_rate[i] = static_cast<double>(c.dropped) / elapsed;
        record.avg_power[i] = c.power_sum / elapsed;
        record.avg_cost[i] = c.cost_sum / elapsed;
        const double gap = record.avg_power[i] - config.power_budget[i] - state.x[i] / elapsed;
        state.max_budget_gap = std::max(state.max_budget_gap, gap);
    }
    return record;
}

namespace {

std::int64_t auto_stride(std::int64_t horizon) {
    constexpr std::int64_t kMaxRecords = 10000;
    return horizon <= kMaxRecords ? 1 : horizon / kMaxRecords;
}

}  // namespace

RunResult run(const SystemConfig& config, const Policy& policy, const RunOptions& options) {
    require_valid(config);
    const std::int64_t horizon = config.horizon;
    if (options.traces) {
        if (static_cast<std::int64_t>(options.traces->channels.size()) < horizon ||
            static_cast<std::int64_t>(options.traces->arrivals.size()) < horizon)
            throw std::invalid_argument("forced traces shorter than the horizon");
    }
    if (!options.initial_queues.empty() &&
        options.initial_queues.size() != static_cast<std::size_t>(config.n_users))
        throw std::invalid_argument("initial_queues must have one queue per user");

    const auto start = std::chrono::steady_clock::now();

    SimState state = make_initial_state(config);
    if (!options.initial_queues.empty()) {
        state.queues = options.initial_queues;
        for (int i = 0; i < config.n_users; ++i)
            state.counters[i].initial_backlog = static_cast<std::int64_t>(state.queues[i].size());
    }

    RunResult result;
    result.config = config;
    result.policy_name = std::string(policy.name());
    result.rng_contract = std::string(Rng::kContract);
    result.log_stride = options.log_stride > 0 ? options.log_stride : auto_stride(horizon);

    for (std::int64_t t = 0; t < horizon; ++t) {
        SlotRecord record = step(state, policy, config, options.traces);
        if ((t + 1) % result.log_stride == 0 || t == horizon - 1)
            result.records.push_back(std::move(record));
    }

    result.users.resize(config.n_users);
    for (int i = 0; i < config.n_users; ++i) {
        const UserCounters& c = state.counters[i];
        UserSummary& u = result.users[i];
        u.arrivals = c.arrivals;
        u.served = c.served;
        u.dropped = c.dropped;
        u.transmissions = c.transmissions;
        u.x_final = state.x[i];
        if (horizon > 0) {
            u.drop_rate = static_cast<double>(c.dropped) / static_cast<double>(horizon);
            u.avg_power = c.power_sum / static_cast<double>(horizon);
            u.avg_cost = c.cost_sum / static_cast<double>(horizon);
            u.x_over_t = state.x[i] / static_cast<double>(horizon);
        }
        if (c.transmissions > 0)
            u.avg_power_per_tx = c.power_sum / static_cast<double>(c.transmissions);
    }
    result.conservation_violations = state.conservation_violations;
    result.max_budget_gap = state.max_budget_gap;

    const auto end = std::chrono::steady_clock::now();
    result.wall_ms = std::chrono::duration<double, std::milli>(end - start).count();
    return result;
}

}  // namespace dpasim
