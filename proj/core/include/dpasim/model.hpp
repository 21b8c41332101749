#pragma once

#include <array>
#include <cstdint>
#include <deque>
#include <optional>
#include <string>
#include <vector>

#include "dpasim/config.hpp"

namespace dpasim {

enum class ChannelState : std::uint8_t { Bad, Good };

using ChannelStateVector = std::vector<ChannelState>;

// FIFO of per-packet countdowns, head = oldest packet. The head value is the
// number of slots left before that packet expires; the length is the queue
// backlog. Countdowns strictly increase head to tail (one arrival per slot,
// uniform deadline per queue).
using UserQueue = std::deque<int>;

// Per-slot power vector. At most one entry is nonzero, and a nonzero entry
// must equal the channel-conditioned level (p_high on Bad, p_low on Good).
struct PowerAllocation {
    std::vector<double> power;

    static PowerAllocation idle(int n_users);
    static PowerAllocation single(int n_users, int user, double level);

    // Index of the transmitting user, if any.
    std::optional<int> transmitter() const;
    bool serving(int user) const { return power[user] > 0.0; }
};

struct SlotOutcome {
    bool served = false;
    bool dropped = false;
    bool arrival = false;
    double cost = 0.0;  // in [0,1]; 0 when served or queue empty, 1 at a drop
};

enum class AllocationRule { MultipleTransmitters, WrongLevelForChannel };

struct AllocationViolation {
    int user = 0;
    AllocationRule rule = AllocationRule::MultipleTransmitters;
};

std::string describe(const AllocationViolation& violation);

// The two selectable power levels for a channel state: {0, p_high} on Bad,
// {0, p_low} on Good.
std::array<double, 2> selectable_powers(ChannelState state, const SystemConfig& config);

// The nonzero selectable level for a channel state.
double transmit_level(ChannelState state, const SystemConfig& config);

// nullopt when the allocation is feasible for these channels; otherwise the
// first offending user and the rule broken.
std::optional<AllocationViolation> validate_allocation(const PowerAllocation& alloc,
                                                       const ChannelStateVector& channels,
                                                       const SystemConfig& config);

// Deadline-urgency cost. 0 when served or when the queue is empty (head_d
// absent); otherwise (m - (head_d - 1)) / m, which reaches 1 exactly when an
// unserved head packet is about to expire.
double surrogate_cost(int deadline, std::optional<int> head_d, bool served);

std::optional<int> head_deadline(const UserQueue& queue);

struct QueueAdvance {
    UserQueue queue;
    bool dropped = false;
};

// One slot of queue dynamics, in order: serve the head if served; otherwise
// drop the head if its countdown is 1; tick every remaining countdown down by
// one; admit an arrival with a fresh countdown of `deadline`.
QueueAdvance advance_queue(UserQueue queue, bool served, bool arrival, int deadline);

}  // namespace dpasim
