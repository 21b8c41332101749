#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "dpasim/engine.hpp"
#include "dpasim/model.hpp"
#include "dpasim/policies.hpp"

namespace dpasim {

// A fully explicit instance small enough for exhaustive policy enumeration:
// the horizon equals the trace length and (n_users + 1)^horizon sequences
// must stay enumerable.
struct TinyInstance {
    SystemConfig config;  // horizon must equal traces length
    ForcedTraces traces;
    std::vector<UserQueue> initial_queues;  // empty = all queues start empty
};

// Minimizes the per-slot objective by enumerating the whole feasible set:
// idle plus one serve candidate per user, including users with empty queues.
// Same tie rule as dpa_decide (idle first, ascending index, strict
// improvement); the objective is recomputed here from the view rather than
// through dpa_objective.
std::pair<PowerAllocation, double> bruteforce_slot_min(const SlotView& view,
                                                       const VirtualQueues& x);

// Offline action sequence: actions[t] is kIdleAction or the served user.
inline constexpr int kIdleAction = -1;

struct OfflineOptimum {
    std::int64_t min_drops = 0;
    std::vector<int> actions;  // one witness achieving min_drops
};

// Clairvoyant exhaustive search over every action sequence, simulated through
// the same queue dynamics as the engine. With enforce_budget, sequences whose
// per-user power sum exceeds gamma_i * horizon are discarded (the
// finite-horizon reading of the time-average cap); idle-always is always
// feasible. Throws std::invalid_argument when the enumeration would exceed
// ~4e5 sequences.
OfflineOptimum offline_optimal_drops(const TinyInstance& instance, bool enforce_budget);

// Runs a policy on the instance's forced traces and initial queues.
RunResult run_on_instance(const TinyInstance& instance, const Policy& policy);

}  // namespace dpasim
