#include "dpasim/model.hpp"

#include <cassert>
#include <sstream>

namespace dpasim {

PowerAllocation PowerAllocation::idle(int n_users) {
    PowerAllocation alloc;
    alloc.power.assign(n_users, 0.0);
    return alloc;
}

PowerAllocation PowerAllocation::single(int n_users, int user, double level) {
    PowerAllocation alloc = idle(n_users);
    alloc.power[user] = level;
    return alloc;
}

std::optional<int> PowerAllocation::transmitter() const {
    for (std::size_t i = 0; i < power.size(); ++i)
        if (power[i] > 0.0) return static_cast<int>(i);
    return std::nullopt;
}

std::string describe(const AllocationViolation& violation) {
    std::ostringstream msg;
    msg << "user " << violation.user << ": ";
    switch (violation.rule) {
        case AllocationRule::MultipleTransmitters:
            msg << "multiple transmitters in one slot";
            break;
        case AllocationRule::WrongLevelForChannel:
            msg << "power level does not match the channel state";
            break;
    }
    return msg.str();
}

std::array<double, 2> selectable_powers(ChannelState state, const SystemConfig& config) {
    return {0.0, transmit_level(state, config)};
}

double transmit_level(ChannelState state, const SystemConfig& config) {
    return state == ChannelState::Bad ? config.p_high : config.p_low;
}

std::optional<AllocationViolation> validate_allocation(const PowerAllocation& alloc,
                                                       const ChannelStateVector& channels,
                                                       const SystemConfig& config) {
    assert(alloc.power.size() == static_cast<std::size_t>(config.n_users));
    int transmitters = 0;
    for (int i = 0; i < config.n_users; ++i) {
        const double p = alloc.power[i];
        if (p <= 0.0) continue;
        ++transmitters;
        if (transmitters > 1) return AllocationViolation{i, AllocationRule::MultipleTransmitters};
        if (p != transmit_level(channels[i], config))
            return AllocationViolation{i, AllocationRule::WrongLevelForChannel};
    }
    return std::nullopt;
}

double surrogate_cost(int deadline, std::optional<int> head_d, bool served) {
    if (served || !head_d) return 0.0;
    assert(*head_d >= 1 && *head_d <= deadline);
    return static_cast<double>(deadline - (*head_d - 1)) / static_cast<double>(deadline);
}

std::optional<int> head_deadline(const UserQueue& queue) {
    if (queue.empty()) return std::nullopt;
    return queue.front();
}

QueueAdvance advance_queue(UserQueue queue, bool served, bool arrival, int deadline) {
    bool dropped = false;
    if (served) {
        assert(!queue.empty());
        queue.pop_front();
    } else if (!queue.empty() && queue.front() == 1) {
        queue.pop_front();
        dropped = true;
    }
    for (int& d : queue) --d;
    if (arrival) queue.push_back(deadline);
    return {std::move(queue), dropped};
}

}  // namespace dpasim
