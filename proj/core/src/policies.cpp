#include "dpasim/policies.hpp"

#include <algorithm>
#include <cassert>
#include <stdexcept>

namespace dpasim {

SlotView view_of(const SystemConfig& config, std::int64_t t,
                 const ChannelStateVector& channels,
                 const std::vector<UserQueue>& queues) {
    SlotView view;
    view.t = t;
    view.config = &config;
    view.channels = channels;
    view.head_deadline.reserve(queues.size());
    view.queue_length.reserve(queues.size());
    for (const auto& q : queues) {
        view.head_deadline.push_back(head_deadline(q));
        view.queue_length.push_back(static_cast<int>(q.size()));
    }
    return view;
}

double dpa_objective(const PowerAllocation& candidate, const SlotView& view,
                     const VirtualQueues& x) {
    const SystemConfig& cfg = *view.config;
    double obj = 0.0;
    for (int j = 0; j < cfg.n_users; ++j) {
        const bool served = candidate.power[j] > 0.0 && view.queue_length[j] > 0;
        const double f = surrogate_cost(cfg.deadline[j], view.head_deadline[j], served);
        // one fused term per user, ascending; keep in sync with the oracle
        obj += cfg.penalty_weight * f + x[j] * (candidate.power[j] - cfg.power_budget[j]);
    }
    return obj;
}

PolicyDecision dpa_decide(const SlotView& view, const VirtualQueues& x) {
    const SystemConfig& cfg = *view.config;
    PowerAllocation best = PowerAllocation::idle(cfg.n_users);
    double best_obj = dpa_objective(best, view, x);
    for (int i = 0; i < cfg.n_users; ++i) {
        if (view.queue_length[i] == 0) continue;  // serving an empty queue never wins
        PowerAllocation candidate =
            PowerAllocation::single(cfg.n_users, i, transmit_level(view.channels[i], cfg));
        const double obj = dpa_objective(candidate, view, x);
        if (obj < best_obj) {
            best = std::move(candidate);
            best_obj = obj;
        }
    }
    return {std::move(best), best_obj};
}

VirtualQueues virtual_queue_update(const VirtualQueues& x, const PowerAllocation& alloc,
                                   const SystemConfig& config) {
    VirtualQueues next(x.size());
    for (std::size_t i = 0; i < x.size(); ++i)
        next[i] = std::max(x[i] - config.power_budget[i], 0.0) + alloc.power[i];
    return next;
}

PolicyDecision edf_decide(const SlotView& view) {
    const SystemConfig& cfg = *view.config;
    int chosen = -1;
    int best_d = 0;
    for (int i = 0; i < cfg.n_users; ++i) {
        if (!view.head_deadline[i]) continue;
        const int d = *view.head_deadline[i];
        if (chosen < 0 || d < best_d) {
            chosen = i;
            best_d = d;
        }
    }
    if (chosen < 0) return {PowerAllocation::idle(cfg.n_users), std::nullopt};
    return {PowerAllocation::single(cfg.n_users, chosen,
                                    transmit_level(view.channels[chosen], cfg)),
            std::nullopt};
}

PolicyDecision fixed_trace_decide(const SlotView& view,
                                  const std::vector<PowerAllocation>& trace) {
    if (view.t < 0 || static_cast<std::size_t>(view.t) >= trace.size())
        throw std::out_of_range("fixed trace has no entry for slot " + std::to_string(view.t));
    return {trace[static_cast<std::size_t>(view.t)], std::nullopt};
}

PolicyDecision DpaPolicy::decide(const SlotView& view, const VirtualQueues& x) const {
    return dpa_decide(view, x);
}

PolicyDecision EdfPolicy::decide(const SlotView& view, const VirtualQueues&) const {
    return edf_decide(view);
}

PolicyDecision FixedTracePolicy::decide(const SlotView& view, const VirtualQueues&) const {
    return fixed_trace_decide(view, trace_);
}

}  // namespace dpasim
