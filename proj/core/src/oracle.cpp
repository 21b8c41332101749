#include "dpasim/oracle.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace dpasim {

namespace {

// Objective recomputed from the view, independent of dpa_objective. The
// accumulation order (ascending users, one fused term each) matches the
// policy's so equal candidates score bit-identically.
double enumerated_objective(const std::vector<double>& power, const SlotView& view,
                            const VirtualQueues& x) {
    const SystemConfig& cfg = *view.config;
    double obj = 0.0;
    for (int j = 0; j < cfg.n_users; ++j) {
        double f = 0.0;
        const bool transmitting = power[j] > 0.0;
        const bool has_packet = view.queue_length[j] > 0;
        if (has_packet && !transmitting) {
            const int m = cfg.deadline[j];
            const int d = *view.head_deadline[j];
            f = static_cast<double>(m - (d - 1)) / static_cast<double>(m);
        }
        obj += cfg.penalty_weight * f + x[j] * (power[j] - cfg.power_budget[j]);
    }
    return obj;
}

}  // namespace

std::pair<PowerAllocation, double> bruteforce_slot_min(const SlotView& view,
                                                       const VirtualQueues& x) {
    const SystemConfig& cfg = *view.config;
    PowerAllocation best = PowerAllocation::idle(cfg.n_users);
    double best_obj = enumerated_objective(best.power, view, x);
    for (int i = 0; i < cfg.n_users; ++i) {
        PowerAllocation candidate =
            PowerAllocation::single(cfg.n_users, i, transmit_level(view.channels[i], cfg));
        const double obj = enumerated_objective(candidate.power, view, x);
        if (obj < best_obj) {
            best = std::move(candidate);
            best_obj = obj;
        }
    }
    return {std::move(best), best_obj};
}

namespace {

struct SequenceOutcome {
    std::int64_t drops = 0;
    std::vector<double> power_sum;
};

// Deterministic rollout of one action sequence through the model dynamics.
SequenceOutcome simulate_sequence(const TinyInstance& instance, const std::vector<int>& actions) {
    const SystemConfig& cfg = instance.config;
    const int n = cfg.n_users;
    std::vector<UserQueue> queues =
        instance.initial_queues.empty() ? std::vector<UserQueue>(n) : instance.initial_queues;

    SequenceOutcome outcome;
    outcome.power_sum.assign(n, 0.0);
    for (std::size_t t = 0; t < actions.size(); ++t) {
        const int actor = actions[t];
        for (int i = 0; i < n; ++i) {
            double p = 0.0;
            if (i == actor) p = transmit_level(instance.traces.channels[t][i], cfg);
            const bool served = p > 0.0 && !queues[i].empty();
            auto advanced = advance_queue(std::move(queues[i]), served,
                                          instance.traces.arrivals[t][i] != 0, cfg.deadline[i]);
            queues[i] = std::move(advanced.queue);
            outcome.drops += advanced.dropped ? 1 : 0;
            outcome.power_sum[i] += p;
        }
    }
    return outcome;
}

}  // namespace

OfflineOptimum offline_optimal_drops(const TinyInstance& instance, bool enforce_budget) {
    const SystemConfig& cfg = instance.config;
    const int n = cfg.n_users;
    const std::int64_t horizon = cfg.horizon;
    if (static_cast<std::int64_t>(instance.traces.channels.size()) != horizon ||
        static_cast<std::int64_t>(instance.traces.arrivals.size()) != horizon)
        throw std::invalid_argument("instance traces must be exactly horizon long");

    constexpr double kMaxSequences = 4.0e5;
    const double total = std::pow(static_cast<double>(n + 1), static_cast<double>(horizon));
    if (total > kMaxSequences)
        throw std::invalid_argument("instance too large to enumerate: " +
                                    std::to_string(static_cast<std::int64_t>(total)) +
                                    " sequences");

    const std::int64_t count = static_cast<std::int64_t>(total);
    OfflineOptimum best;
    best.min_drops = -1;
    std::vector<int> actions(static_cast<std::size_t>(horizon), kIdleAction);

    for (std::int64_t code = 0; code < count; ++code) {
        // decode base-(n+1), slot 0 as the most significant digit; digit 0 is
        // idle so earlier sequences idle earlier
        std::int64_t rest = code;
        for (std::int64_t t = horizon - 1; t >= 0; --t) {
            const int digit = static_cast<int>(rest % (n + 1));
            actions[static_cast<std::size_t>(t)] = digit - 1;
            rest /= (n + 1);
        }

        const SequenceOutcome outcome = simulate_sequence(instance, actions);
        if (enforce_budget) {
            bool feasible = true;
            for (int i = 0; i < n; ++i) {
                if (outcome.power_sum[i] >
                    cfg.power_budget[i] * static_cast<double>(horizon) + 1e-9) {
                    feasible = false;
                    break;
                }
            }
            if (!feasible) continue;
        }
        if (best.min_drops < 0 || outcome.drops < best.min_drops) {
            best.min_drops = outcome.drops;
            best.actions = actions;
            if (best.min_drops == 0) break;  // nothing can beat zero drops
        }
    }
    return best;
}

RunResult run_on_instance(const TinyInstance& instance, const Policy& policy) {
    RunOptions options;
    options.traces = &instance.traces;
    options.initial_queues = instance.initial_queues;
    return run(instance.config, policy, options);
}

}  // namespace dpasim
