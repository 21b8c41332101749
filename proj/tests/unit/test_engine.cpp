#include <doctest.h>

#include <cmath>
#include <numeric>

#include "dpasim/engine.hpp"
#include "dpasim/experiment.hpp"

using namespace dpasim;

TEST_SUITE_BEGIN("engine");

TEST_CASE("degenerate probabilities pin the samples") {
    SystemConfig cfg = uniform_config(2);
    Rng rng(1);

    cfg.bad_channel_prob = {1.0, 1.0};
    for (auto s : sample_channels(rng, cfg)) CHECK(s == ChannelState::Bad);
    cfg.bad_channel_prob = {0.0, 0.0};
    for (auto s : sample_channels(rng, cfg)) CHECK(s == ChannelState::Good);

    cfg.arrival_prob = {0.0, 0.0};
    for (auto a : sample_arrivals(rng, cfg)) CHECK(a == 0);
    cfg.arrival_prob = {1.0, 1.0};
    for (auto a : sample_arrivals(rng, cfg)) CHECK(a == 1);
}

TEST_CASE("empirical frequencies match the probabilities") {
    SystemConfig cfg = uniform_config(1);
    Rng rng(42);
    long long bad = 0, arrived = 0;
    const int draws = 1000000;
    for (int i = 0; i < draws; ++i) {
        if (sample_channels(rng, cfg)[0] == ChannelState::Bad) ++bad;
        if (sample_arrivals(rng, cfg)[0]) ++arrived;
    }
    CHECK(std::abs(static_cast<double>(bad) / draws - 0.6) < 0.002);
    CHECK(std::abs(static_cast<double>(arrived) / draws - 0.4) < 0.002);
}

TEST_CASE("a slot on an empty system does nothing but decay the backlog") {
    SystemConfig cfg = uniform_config(2);
    cfg.arrival_prob = {0.0, 0.0};
    SimState state = make_initial_state(cfg);
    state.x = {2.0, 0.3};

    const DpaPolicy policy;
    const SlotRecord record = step(state, policy, cfg);
    for (const auto& outcome : record.outcomes) {
        CHECK_FALSE(outcome.served);
        CHECK_FALSE(outcome.dropped);
        CHECK_FALSE(outcome.arrival);
        CHECK(outcome.cost == 0.0);
    }
    CHECK(state.x[0] == doctest::Approx(1.4).epsilon(1e-12));
    CHECK(state.x[1] == 0.0);
}

TEST_CASE("zero horizon yields an empty result") {
    SystemConfig cfg = uniform_config(2);
    cfg.horizon = 0;
    const RunResult result = run(cfg, DpaPolicy{});
    CHECK(result.records.empty());
    for (const auto& user : result.users) {
        CHECK(user.drop_rate == 0.0);
        CHECK(user.avg_power == 0.0);
        CHECK(user.x_over_t == 0.0);
    }
}

TEST_CASE("runs are bit-identical for identical inputs") {
    SystemConfig cfg = uniform_config(2);
    cfg.horizon = 2000;
    cfg.seed = 77;
    const RunResult a = run(cfg, DpaPolicy{});
    const RunResult b = run(cfg, DpaPolicy{});

    REQUIRE(a.records.size() == b.records.size());
    for (std::size_t i = 0; i < a.records.size(); ++i) {
        CHECK(a.records[i].allocation.power == b.records[i].allocation.power);
        CHECK(a.records[i].x_after == b.records[i].x_after);
        CHECK(a.records[i].channels == b.records[i].channels);
    }
    for (int u = 0; u < cfg.n_users; ++u) {
        CHECK(a.users[u].avg_power == b.users[u].avg_power);
        CHECK(a.users[u].drop_rate == b.users[u].drop_rate);
        CHECK(a.users[u].x_final == b.users[u].x_final);
    }
}

TEST_CASE("different seeds diverge") {
    SystemConfig cfg = uniform_config(2);
    cfg.horizon = 2000;
    cfg.seed = 1;
    const RunResult a = run(cfg, DpaPolicy{});
    cfg.seed = 2;
    const RunResult b = run(cfg, DpaPolicy{});
    bool any_difference = false;
    for (int u = 0; u < cfg.n_users; ++u)
        any_difference |= a.users[u].avg_power != b.users[u].avg_power;
    CHECK(any_difference);
}

TEST_CASE("forced traces shorter than the horizon are rejected") {
    SystemConfig cfg = uniform_config(1);
    cfg.horizon = 5;
    ForcedTraces traces;
    traces.channels.assign(3, {ChannelState::Good});
    traces.arrivals.assign(3, {0});
    RunOptions options;
    options.traces = &traces;
    CHECK_THROWS_AS(run(cfg, EdfPolicy{}, options), std::invalid_argument);
}

TEST_CASE("running checks hold over a long run for every policy") {
    SystemConfig cfg = uniform_config(2);
    cfg.horizon = 20000;
    cfg.seed = 5;
    const DpaPolicy dpa;
    const EdfPolicy edf;
    for (const Policy* policy : std::initializer_list<const Policy*>{&dpa, &edf}) {
        const RunResult result = run(cfg, *policy);
        CHECK(result.conservation_violations == 0);
        CHECK(result.max_budget_gap <= 1e-9);
    }
}

// the incrementally reported average must match a recomputation from the
// full-resolution power series
TEST_CASE("running averages agree with their definitions") {
    SystemConfig cfg = uniform_config(2);
    cfg.horizon = 3000;
    cfg.seed = 11;
    RunOptions options;
    options.log_stride = 1;
    const RunResult result = run(cfg, DpaPolicy{}, options);
    REQUIRE(result.records.size() == 3000);

    std::vector<double> power_sum(cfg.n_users, 0.0);
    std::vector<long long> drops(cfg.n_users, 0);
    for (const auto& record : result.records) {
        const double elapsed = static_cast<double>(record.t + 1);
        for (int u = 0; u < cfg.n_users; ++u) {
            power_sum[u] += record.allocation.power[u];
            drops[u] += record.outcomes[u].dropped ? 1 : 0;
            CHECK(record.avg_power[u] == doctest::Approx(power_sum[u] / elapsed).epsilon(1e-12));
            CHECK(record.drop_rate[u] ==
                  doctest::Approx(static_cast<double>(drops[u]) / elapsed).epsilon(1e-12));
            CHECK(record.avg_power[u] >= 0.0);
            CHECK(record.avg_power[u] <= cfg.p_high);
            CHECK(record.drop_rate[u] >= 0.0);
            CHECK(record.drop_rate[u] <= 1.0);
            CHECK(record.avg_cost[u] >= 0.0);
            CHECK(record.avg_cost[u] <= 1.0);
        }
    }
    for (int u = 0; u < cfg.n_users; ++u)
        CHECK(result.users[u].avg_power == power_sum[u] / 3000.0);
}

TEST_CASE("long horizons are decimated but keep the final slot") {
    SystemConfig cfg = uniform_config(1);
    cfg.horizon = 50000;
    const RunResult result = run(cfg, EdfPolicy{});
    CHECK(result.log_stride == 5);
    CHECK(result.records.size() == 10000);
    CHECK(result.records.back().t == cfg.horizon - 1);
}

TEST_CASE("golden replay of the two-policy power example") {
    const Table1Replay replay = run_table1_replay();

    CHECK(replay.omega1.d_row ==
          std::vector<std::optional<int>>{1, 2, std::nullopt});
    CHECK(replay.omega2.d_row == std::vector<std::optional<int>>{1, 2, 1});

    CHECK(replay.omega1.drops == 1);
    CHECK(replay.omega2.drops == 0);

    CHECK(replay.omega1.avg_power == 1.0 / 3.0);
    CHECK(replay.omega2.avg_power == 1.0);
    CHECK(replay.omega1.avg_power_per_tx == 1.0);
    CHECK(replay.omega2.avg_power_per_tx == 1.5);

    // slot-level outcomes at the first slot: the cautious policy drops the
    // expiring packet, the bold one spends p_high and serves it
    CHECK(replay.omega1.result.records[0].outcomes[0].dropped);
    CHECK_FALSE(replay.omega1.result.records[0].outcomes[0].served);
    CHECK(replay.omega1.result.records[0].outcomes[0].cost == 1.0);
    CHECK(replay.omega2.result.records[0].outcomes[0].served);
    CHECK_FALSE(replay.omega2.result.records[0].outcomes[0].dropped);

    // replay consumes no random draws, so results repeat exactly
    const Table1Replay again = run_table1_replay();
    CHECK(again.omega1.result.users[0].avg_power == replay.omega1.result.users[0].avg_power);
}

TEST_SUITE_END();
