#include <doctest.h>

#include <cmath>
#include <stdexcept>
#include <vector>

#include "dpasim/policies.hpp"
#include "dpasim/rng.hpp"
#include "dpasim/verify.hpp"

using namespace dpasim;

TEST_SUITE_BEGIN("policies");

namespace {

// single user, deadline 5, budget 0.6, V 60, holding one packet with head d
struct SingleUserScenario {
    SystemConfig config;
    SlotView view;

    SingleUserScenario(std::optional<int> head_d, ChannelState channel) {
        config = uniform_config(1);
        view.t = 0;
        view.config = &config;
        view.channels = {channel};
        view.head_deadline = {head_d};
        view.queue_length = {head_d ? 1 : 0};
    }
};

}  // namespace

TEST_CASE("objective trades drop cost against budget pressure") {
    SingleUserScenario s(1, ChannelState::Good);
    const PowerAllocation idle = PowerAllocation::idle(1);
    const PowerAllocation serve = PowerAllocation::single(1, 0, 1.0);

    CHECK(dpa_objective(idle, s.view, {0.0}) == 60.0);
    CHECK(dpa_objective(serve, s.view, {0.0}) == 0.0);

    CHECK(dpa_objective(idle, s.view, {100.0}) == 0.0);   // 60 - 100*0.6
    CHECK(dpa_objective(serve, s.view, {100.0}) == 40.0); // 100*(1-0.6)
}

TEST_CASE("objective with all queues empty is the idle baseline") {
    SingleUserScenario s(std::nullopt, ChannelState::Good);
    const PowerAllocation idle = PowerAllocation::idle(1);
    CHECK(dpa_objective(idle, s.view, {7.5}) == 7.5 * (0.0 - 0.6));
}

TEST_CASE("decision picks serve under slack and idles under pressure") {
    SingleUserScenario s(1, ChannelState::Good);

    const PolicyDecision relaxed = dpa_decide(s.view, {0.0});
    CHECK(relaxed.allocation.power == std::vector<double>{1.0});
    CHECK(relaxed.objective == 0.0);

    // a loaded virtual queue makes deliberately dropping the packet optimal
    const PolicyDecision pressured = dpa_decide(s.view, {100.0});
    CHECK(pressured.allocation.power == std::vector<double>{0.0});
    CHECK(pressured.objective == 0.0);
}

TEST_CASE("decision on an empty system idles at the backlog baseline") {
    SingleUserScenario s(std::nullopt, ChannelState::Bad);
    const PolicyDecision d = dpa_decide(s.view, {4.0});
    CHECK(d.allocation.power == std::vector<double>{0.0});
    CHECK(d.objective == -4.0 * 0.6);
}

TEST_CASE("virtual queue update") {
    SystemConfig cfg = uniform_config(1);
    CHECK(virtual_queue_update({2.0}, PowerAllocation::idle(1), cfg)[0] ==
          doctest::Approx(1.4).epsilon(1e-12));
    CHECK(virtual_queue_update({0.0}, PowerAllocation::single(1, 0, 2.0), cfg)[0] == 2.0);
    CHECK(virtual_queue_update({0.3}, PowerAllocation::idle(1), cfg)[0] == 0.0);
}

TEST_CASE("virtual queue update never goes negative") {
    Rng rng(99);
    SystemConfig cfg = uniform_config(1);
    for (int trial = 0; trial < 1000; ++trial) {
        cfg.power_budget[0] = 2.0 * rng.next_unit();
        const VirtualQueues x{5.0 * rng.next_unit()};
        const double p = rng.bernoulli(0.5) ? 0.0 : (rng.bernoulli(0.5) ? 1.0 : 2.0);
        PowerAllocation alloc{{p}};
        CHECK(virtual_queue_update(x, alloc, cfg)[0] >= 0.0);
    }
}

namespace {

SlotView three_user_view(const SystemConfig& cfg, std::vector<std::optional<int>> heads,
                         ChannelStateVector channels) {
    SlotView view;
    view.t = 0;
    view.config = &cfg;
    view.channels = std::move(channels);
    view.head_deadline = std::move(heads);
    view.queue_length.clear();
    for (const auto& h : view.head_deadline) view.queue_length.push_back(h ? 1 : 0);
    return view;
}

}  // namespace

TEST_CASE("earliest deadline first picks the most urgent head") {
    SystemConfig cfg = uniform_config(3);
    const SlotView view = three_user_view(
        cfg, {3, 1, 2}, {ChannelState::Good, ChannelState::Bad, ChannelState::Good});
    const PolicyDecision d = edf_decide(view);
    CHECK(d.allocation.power == std::vector<double>{0.0, 2.0, 0.0});
    CHECK_FALSE(d.objective.has_value());
}

TEST_CASE("earliest deadline first breaks ties to the lowest index") {
    SystemConfig cfg = uniform_config(2);
    const SlotView view = three_user_view(cfg, {2, 2}, {ChannelState::Good, ChannelState::Good});
    CHECK(edf_decide(view).allocation.power == std::vector<double>{1.0, 0.0});
}

TEST_CASE("earliest deadline first idles on an empty system") {
    SystemConfig cfg = uniform_config(2);
    const SlotView view =
        three_user_view(cfg, {std::nullopt, std::nullopt}, {ChannelState::Bad, ChannelState::Bad});
    CHECK(edf_decide(view).allocation.power == std::vector<double>{0.0, 0.0});
}

TEST_CASE("earliest deadline first ignores weights, backlogs, and budgets") {
    SystemConfig a = uniform_config(2);
    SystemConfig b = uniform_config(2);
    b.penalty_weight = 1.0;
    b.power_budget = {0.0, 2.0};
    Rng rng(7);
    for (int trial = 0; trial < 200; ++trial) {
        std::vector<std::optional<int>> heads(2);
        ChannelStateVector channels(2);
        for (int i = 0; i < 2; ++i) {
            if (rng.bernoulli(0.7)) heads[i] = 1 + rng.below(5);
            channels[i] = rng.bernoulli(0.5) ? ChannelState::Bad : ChannelState::Good;
        }
        const SlotView va = three_user_view(a, heads, channels);
        const SlotView vb = three_user_view(b, heads, channels);
        CHECK(edf_decide(va).allocation.power == edf_decide(vb).allocation.power);
    }
}

TEST_CASE("fixed trace replays and rejects out-of-range slots") {
    const std::vector<PowerAllocation> omega2 = {{{2.0}}, {{0.0}}, {{1.0}}};
    SingleUserScenario s(1, ChannelState::Bad);
    s.view.t = 0;
    CHECK(fixed_trace_decide(s.view, omega2).allocation.power == std::vector<double>{2.0});
    s.view.t = 2;
    CHECK(fixed_trace_decide(s.view, omega2).allocation.power == std::vector<double>{1.0});
    s.view.t = 3;
    CHECK_THROWS_AS(fixed_trace_decide(s.view, omega2), std::out_of_range);
    CHECK_THROWS_AS(fixed_trace_decide(s.view, {}), std::out_of_range);
}

TEST_CASE("decision is always feasible and never powers an empty queue") {
    Rng rng(31);
    for (int n = 1; n <= 4; ++n) {
        SystemConfig cfg = uniform_config(n);
        for (int trial = 0; trial < 500; ++trial) {
            const ViewSample sample = random_view_sample(rng, cfg);
            const PolicyDecision d = dpa_decide(sample.view, sample.x);
            CHECK_FALSE(validate_allocation(d.allocation, sample.view.channels, cfg).has_value());
            if (const auto tx = d.allocation.transmitter())
                CHECK(sample.view.queue_length[*tx] > 0);
        }
    }
}

// serving an empty queue only adds X*p >= 0 to the idle objective, so the
// restricted candidate set loses nothing
TEST_CASE("serving an empty queue never beats idling") {
    Rng rng(32);
    for (int trial = 0; trial < 2000; ++trial) {
        const int n = 1 + rng.below(4);
        SystemConfig cfg = uniform_config(n);
        const ViewSample sample = random_view_sample(rng, cfg);
        const PowerAllocation idle = PowerAllocation::idle(n);
        const double idle_obj = dpa_objective(idle, sample.view, sample.x);
        for (int i = 0; i < n; ++i) {
            if (sample.view.queue_length[i] > 0) continue;
            const PowerAllocation cand =
                PowerAllocation::single(n, i, transmit_level(sample.view.channels[i], cfg));
            CHECK(dpa_objective(cand, sample.view, sample.x) >= idle_obj);
        }
    }
}

// dropping the constant -sum X_j*gamma_j term from every candidate must not
// change the chosen allocation
TEST_CASE("argmin is invariant to the idle baseline shift") {
    Rng rng(33);
    for (int trial = 0; trial < 2000; ++trial) {
        const int n = 1 + rng.below(4);
        SystemConfig cfg = uniform_config(n);
        const ViewSample sample = random_view_sample(rng, cfg);
        const PolicyDecision reference = dpa_decide(sample.view, sample.x);

        auto shifted_objective = [&](const PowerAllocation& cand) {
            double obj = 0.0;
            for (int j = 0; j < n; ++j) {
                const bool served = cand.power[j] > 0.0 && sample.view.queue_length[j] > 0;
                obj += cfg.penalty_weight *
                           surrogate_cost(cfg.deadline[j], sample.view.head_deadline[j], served) +
                       sample.x[j] * cand.power[j];
            }
            return obj;
        };

        PowerAllocation best = PowerAllocation::idle(n);
        double best_obj = shifted_objective(best);
        for (int i = 0; i < n; ++i) {
            if (sample.view.queue_length[i] == 0) continue;
            PowerAllocation cand =
                PowerAllocation::single(n, i, transmit_level(sample.view.channels[i], cfg));
            const double obj = shifted_objective(cand);
            if (obj < best_obj) {
                best = cand;
                best_obj = obj;
            }
        }
        CHECK(best.power == reference.allocation.power);
    }
}

TEST_SUITE_END();
