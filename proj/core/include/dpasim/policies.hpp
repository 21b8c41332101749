#pragma once

#include <cstdint>
#include <optional>
#include <string_view>
#include <vector>

#include "dpasim/model.hpp"

namespace dpasim {

// Everything a policy may observe at decision time. head_deadline is present
// iff the matching queue_length is positive.
struct SlotView {
    std::int64_t t = 0;
    const SystemConfig* config = nullptr;
    ChannelStateVector channels;
    std::vector<std::optional<int>> head_deadline;
    std::vector<int> queue_length;
};

SlotView view_of(const SystemConfig& config, std::int64_t t,
                 const ChannelStateVector& channels,
                 const std::vector<UserQueue>& queues);

// Nonnegative per-user backlogs that accumulate power spent above budget;
// keeping them rate-stable is what enforces the time-average power caps.
using VirtualQueues = std::vector<double>;

struct PolicyDecision {
    PowerAllocation allocation;
    std::optional<double> objective;  // populated by the drift policy only
};

// Per-slot score a candidate allocation is judged by:
//   sum over users of  V * f_j  +  X_j * (p_j - gamma_j)
// where f_j is the surrogate cost with served = (p_j > 0 and queue nonempty).
// Accumulated in ascending user order, one fused term per user; the oracle
// reproduces this order so objective comparisons are exact.
double dpa_objective(const PowerAllocation& candidate, const SlotView& view,
                     const VirtualQueues& x);

// Minimizes dpa_objective over {idle} then {serve user i : queue nonempty} in
// ascending user order. The incumbent is replaced only on strict improvement,
// so idle wins exact ties and lower indices win among serve candidates.
PolicyDecision dpa_decide(const SlotView& view, const VirtualQueues& x);

// max(X_i - gamma_i, 0) + p_i per user.
VirtualQueues virtual_queue_update(const VirtualQueues& x, const PowerAllocation& alloc,
                                   const SystemConfig& config);

// Serves the user whose head packet is closest to expiry (ties to the lowest
// index) at the channel-conditioned level; idles when all queues are empty.
// Ignores budgets, backlogs, and the penalty weight entirely.
PolicyDecision edf_decide(const SlotView& view);

// Replays a pre-scripted allocation sequence. Throws std::out_of_range when
// the slot index is beyond the trace.
PolicyDecision fixed_trace_decide(const SlotView& view,
                                  const std::vector<PowerAllocation>& trace);

class Policy {
  public:
    virtual ~Policy() = default;
    virtual PolicyDecision decide(const SlotView& view, const VirtualQueues& x) const = 0;
    virtual std::string_view name() const = 0;
};

class DpaPolicy final : public Policy {
  public:
    PolicyDecision decide(const SlotView& view, const VirtualQueues& x) const override;
    std::string_view name() const override { return "dpa"; }
};

class EdfPolicy final : public Policy {
  public:
    PolicyDecision decide(const SlotView& view, const VirtualQueues& x) const override;
    std::string_view name() const override { return "edf"; }
};

class FixedTracePolicy final : public Policy {
  public:
    explicit FixedTracePolicy(std::vector<PowerAllocation> trace) : trace_(std::move(trace)) {}
    PolicyDecision decide(const SlotView& view, const VirtualQueues& x) const override;
    std::string_view name() const override { return "fixed"; }
    const std::vector<PowerAllocation>& trace() const { return trace_; }

  private:
    std::vector<PowerAllocation> trace_;
};

}  // namespace dpasim
