#include "dpasim/experiment.hpp"

#include <algorithm>
#include <atomic>
#include <cctype>
#include <cstdio>
#include <fstream>
#include <memory>
#include <mutex>
#include <ostream>
#include <sstream>
#include <thread>

namespace dpasim {

namespace {

std::string trim(const std::string& s) {
    std::size_t a = 0;
    std::size_t b = s.size();
    while (a < b && std::isspace(static_cast<unsigned char>(s[a]))) ++a;
    while (b > a && std::isspace(static_cast<unsigned char>(s[b - 1]))) --b;
    return s.substr(a, b - a);
}

std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> parts;
    std::string item;
    std::istringstream in(s);
    while (std::getline(in, item, sep)) parts.push_back(trim(item));
    return parts;
}

double parse_double(const std::string& key, const std::string& value) {
    try {
        std::size_t used = 0;
        const double v = std::stod(value, &used);
        if (used != value.size()) throw std::invalid_argument(value);
        return v;
    } catch (const std::exception&) {
        throw SpecError(key + ": cannot parse '" + value + "' as a number");
    }
}

std::int64_t parse_int(const std::string& key, const std::string& value) {
    try {
        std::size_t used = 0;
        const long long v = std::stoll(value, &used);
        if (used != value.size()) throw std::invalid_argument(value);
        return v;
    } catch (const std::exception&) {
        throw SpecError(key + ": cannot parse '" + value + "' as an integer");
    }
}

std::vector<double> parse_double_list(const std::string& key, const std::string& value) {
    std::vector<double> values;
    for (const auto& part : split(value, ','))
        if (!part.empty()) values.push_back(parse_double(key, part));
    if (values.empty()) throw SpecError(key + ": empty list");
    return values;
}

// "a..b" inclusive range or a comma list.
std::vector<std::uint64_t> parse_seed_list(const std::string& key, const std::string& value) {
    std::vector<std::uint64_t> seeds;
    const auto dots = value.find("..");
    if (dots != std::string::npos) {
        const std::int64_t lo = parse_int(key, trim(value.substr(0, dots)));
        const std::int64_t hi = parse_int(key, trim(value.substr(dots + 2)));
        if (lo > hi) throw SpecError(key + ": range start exceeds end");
        for (std::int64_t s = lo; s <= hi; ++s) seeds.push_back(static_cast<std::uint64_t>(s));
        return seeds;
    }
    for (const auto& part : split(value, ','))
        if (!part.empty()) seeds.push_back(static_cast<std::uint64_t>(parse_int(key, part)));
    return seeds;
}

// "p0,p1,...; p0,p1,...": one row per slot, one power per user.
std::vector<PowerAllocation> parse_trace(const std::string& value, int n_users) {
    std::vector<PowerAllocation> trace;
    for (const auto& row : split(value, ';')) {
        if (row.empty()) continue;
        const auto powers = parse_double_list("trace", row);
        if (static_cast<int>(powers.size()) != n_users)
            throw SpecError("trace: row has " + std::to_string(powers.size()) +
                            " entries, expected " + std::to_string(n_users));
        PowerAllocation alloc;
        alloc.power = powers;
        trace.push_back(std::move(alloc));
    }
    if (trace.empty()) throw SpecError("trace: empty");
    return trace;
}

void assign_per_user(std::vector<double>& field, const std::string& key,
                     const std::string& value, int n_users) {
    auto values = parse_double_list(key, value);
    if (values.size() == 1) {
        field.assign(n_users, values[0]);
    } else if (static_cast<int>(values.size()) == n_users) {
        field = std::move(values);
    } else {
        throw SpecError(key + ": expected 1 or " + std::to_string(n_users) + " values");
    }
}

}  // namespace

ExperimentSpec parse_spec(const std::string& text) {
    // collect raw key/value pairs first so n_users is known before the
    // per-user fields are expanded
    std::vector<std::pair<std::string, std::string>> entries;
    std::istringstream in(text);
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line = line.substr(0, hash);
        line = trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw SpecError("line " + std::to_string(line_no) + ": expected key = value");
        entries.emplace_back(trim(line.substr(0, eq)), trim(line.substr(eq + 1)));
    }

    int n_users = 2;
    for (const auto& [key, value] : entries)
        if (key == "n_users") n_users = static_cast<int>(parse_int(key, value));
    if (n_users < 1) throw SpecError("n_users: must be at least 1");

    ExperimentSpec spec;
    spec.base = uniform_config(n_users);
    spec.seeds.clear();
    std::string trace_text;

    for (const auto& [key, value] : entries) {
        if (key == "n_users") {
            // handled above
        } else if (key == "policy") {
            spec.policy = value;
        } else if (key == "horizon") {
            spec.base.horizon = parse_int(key, value);
        } else if (key == "p_low") {
            spec.base.p_low = parse_double(key, value);
        } else if (key == "p_high") {
            spec.base.p_high = parse_double(key, value);
        } else if (key == "penalty_weight") {
            spec.base.penalty_weight = parse_double(key, value);
        } else if (key == "arrival_prob") {
            assign_per_user(spec.base.arrival_prob, key, value, n_users);
        } else if (key == "power_budget") {
            assign_per_user(spec.base.power_budget, key, value, n_users);
        } else if (key == "bad_channel_prob") {
            assign_per_user(spec.base.bad_channel_prob, key, value, n_users);
        } else if (key == "deadline") {
            const auto values = parse_double_list(key, value);
            if (values.size() == 1) {
                spec.base.deadline.assign(n_users, static_cast<int>(values[0]));
            } else if (static_cast<int>(values.size()) == n_users) {
                spec.base.deadline.clear();
                for (double v : values) spec.base.deadline.push_back(static_cast<int>(v));
            } else {
                throw SpecError("deadline: expected 1 or " + std::to_string(n_users) + " values");
            }
        } else if (key == "seeds") {
            spec.seeds = parse_seed_list(key, value);
            if (spec.seeds.empty()) throw SpecError("seeds: empty list");
        } else if (key == "stride") {
            spec.log_stride = parse_int(key, value);
        } else if (key == "series") {
            if (value == "none")
                spec.series = SeriesMode::None;
            else if (value == "first_seed")
                spec.series = SeriesMode::FirstSeed;
            else if (value == "all")
                spec.series = SeriesMode::All;
            else
                throw SpecError("series: expected none, first_seed, or all");
        } else if (key == "trace") {
            trace_text = value;
        } else if (key == "sweep_penalty_weight") {
            spec.axes.push_back({SweepParameter::PenaltyWeight, parse_double_list(key, value)});
        } else if (key == "sweep_arrival_prob") {
            spec.axes.push_back({SweepParameter::ArrivalProb, parse_double_list(key, value)});
        } else if (key == "sweep_power_budget") {
            spec.axes.push_back({SweepParameter::PowerBudget, parse_double_list(key, value)});
        } else {
            throw SpecError("unknown key '" + key + "'");
        }
    }

    if (spec.seeds.empty()) {
        for (std::uint64_t s = 1; s <= 10; ++s) spec.seeds.push_back(s);
    }
    if (spec.policy != "dpa" && spec.policy != "edf" && spec.policy != "fixed")
        throw SpecError("policy: expected dpa, edf, or fixed, got '" + spec.policy + "'");
    if (spec.policy == "fixed") {
        if (trace_text.empty()) throw SpecError("trace: required when policy = fixed");
        spec.trace = parse_trace(trace_text, n_users);
        if (static_cast<std::int64_t>(spec.trace.size()) < spec.base.horizon)
            throw SpecError("trace: " + std::to_string(spec.trace.size()) +
                            " slots but horizon is " + std::to_string(spec.base.horizon));
    } else if (!trace_text.empty()) {
        throw SpecError("trace: only meaningful when policy = fixed");
    }

    const auto problems = validate_config(spec.base);
    if (!problems.empty()) {
        std::ostringstream msg;
        for (std::size_t i = 0; i < problems.size(); ++i)
            msg << (i ? "; " : "") << problems[i];
        throw SpecError(msg.str());
    }
    return spec;
}

ExperimentSpec parse_spec_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw SpecError("cannot open spec file: " + path);
    std::ostringstream text;
    text << in.rdbuf();
    return parse_spec(text.str());
}

namespace {

SystemConfig config_for_point(const ExperimentSpec& spec, const std::vector<std::size_t>& index) {
    SystemConfig cfg = spec.base;
    for (std::size_t a = 0; a < spec.axes.size(); ++a) {
        const double v = spec.axes[a].values[index[a]];
        switch (spec.axes[a].parameter) {
            case SweepParameter::PenaltyWeight:
                cfg.penalty_weight = v;
                break;
            case SweepParameter::ArrivalProb:
                cfg.arrival_prob.assign(cfg.n_users, v);
                break;
            case SweepParameter::PowerBudget:
                cfg.power_budget.assign(cfg.n_users, v);
                break;
        }
    }
    return cfg;
}

std::unique_ptr<Policy> make_policy(const ExperimentSpec& spec) {
    if (spec.policy == "dpa") return std::make_unique<DpaPolicy>();
    if (spec.policy == "edf") return std::make_unique<EdfPolicy>();
    return std::make_unique<FixedTracePolicy>(spec.trace);
}

std::string series_label(const ExperimentSpec& spec, const SystemConfig& cfg,
                         std::uint64_t seed) {
    std::ostringstream label;
    label << spec.policy;
    for (const auto& axis : spec.axes) {
        switch (axis.parameter) {
            case SweepParameter::PenaltyWeight:
                label << "_V" << cfg.penalty_weight;
                break;
            case SweepParameter::ArrivalProb:
                label << "_lambda" << cfg.arrival_prob[0];
                break;
            case SweepParameter::PowerBudget:
                label << "_gamma" << cfg.power_budget[0];
                break;
        }
    }
    label << "_seed" << seed;
    return label.str();
}

}  // namespace

ExperimentOutput run_experiment(const ExperimentSpec& spec, int workers) {
    if (spec.seeds.empty()) throw SpecError("seeds: empty list");
    for (const auto& axis : spec.axes)
        if (axis.values.empty()) throw SpecError("sweep axis: empty list");

    // enumerate sweep points in declaration order, last axis fastest
    std::vector<std::vector<std::size_t>> points;
    std::vector<std::size_t> index(spec.axes.size(), 0);
    bool done = false;
    while (!done) {
        points.push_back(index);
        done = true;
        for (std::size_t a = spec.axes.size(); a-- > 0;) {
            if (++index[a] < spec.axes[a].values.size()) {
                done = false;
                break;
            }
            index[a] = 0;
        }
    }

    std::vector<std::uint64_t> seeds = spec.seeds;
    std::sort(seeds.begin(), seeds.end());

    struct Task {
        SystemConfig config;
        std::uint64_t seed;
        bool keep_series;
    };
    std::vector<Task> tasks;
    for (const auto& pt : points) {
        SystemConfig cfg = config_for_point(spec, pt);
        for (std::size_t s = 0; s < seeds.size(); ++s) {
            const bool keep = spec.series == SeriesMode::All ||
                              (spec.series == SeriesMode::FirstSeed && s == 0);
            tasks.push_back({cfg, seeds[s], keep});
        }
    }

    auto policy = make_policy(spec);
    std::vector<RunResult> results(tasks.size());
    std::atomic<std::size_t> next{0};
    std::atomic<bool> failed{false};
    std::string failure;
    std::mutex failure_mutex;

    auto worker_loop = [&]() {
        while (!failed.load()) {
            const std::size_t i = next.fetch_add(1);
            if (i >= tasks.size()) return;
            try {
                SystemConfig cfg = tasks[i].config;
                cfg.seed = tasks[i].seed;
                RunOptions options;
                options.log_stride = spec.log_stride;
                results[i] = run(cfg, *policy, options);
            } catch (const std::exception& e) {
                std::lock_guard<std::mutex> lock(failure_mutex);
                failure = e.what();
                failed.store(true);
            }
        }
    };

    const int thread_count = std::max(1, std::min<int>(workers, static_cast<int>(tasks.size())));
    if (thread_count == 1) {
        worker_loop();
    } else {
        std::vector<std::thread> pool;
        pool.reserve(thread_count);
        for (int w = 0; w < thread_count; ++w) pool.emplace_back(worker_loop);
        for (auto& th : pool) th.join();
    }
    if (failed.load()) throw std::runtime_error("experiment run failed: " + failure);

    ExperimentOutput output;
    for (std::size_t i = 0; i < tasks.size(); ++i) {
        const RunResult& res = results[i];
        for (int u = 0; u < res.config.n_users; ++u) {
            const UserSummary& user = res.users[u];
            // emission-time re-check of the budget inequality
            if (user.avg_power > res.config.power_budget[u] + user.x_over_t + 1e-9)
                throw std::logic_error("budget inequality violated at emission for user " +
                                       std::to_string(u));
            ResultRow row;
            row.policy = spec.policy;
            row.penalty_weight = res.config.penalty_weight;
            row.arrival_prob = res.config.arrival_prob[u];
            row.power_budget = res.config.power_budget[u];
            row.seed = tasks[i].seed;
            row.user = u;
            row.drop_rate = user.drop_rate;
            row.avg_power = user.avg_power;
            row.avg_f = user.avg_cost;
            row.x_over_t = user.x_over_t;
            row.slots = res.config.horizon;
            row.wall_ms = res.wall_ms;
            output.rows.push_back(std::move(row));
        }
        if (tasks[i].keep_series) {
            output.series.push_back(
                {series_label(spec, res.config, tasks[i].seed), std::move(results[i])});
        }
    }
    return output;
}

namespace {

std::string fmt(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.12g", v);
    return buf;
}

}  // namespace

void write_results_csv(std::ostream& out, const std::vector<ResultRow>& rows) {
    out << "policy,V,arrival_prob,power_budget,seed,user,drop_rate,avg_power,avg_f,"
           "x_over_t,slots,wall_ms\n";
    for (const auto& r : rows) {
        out << r.policy << ',' << fmt(r.penalty_weight) << ',' << fmt(r.arrival_prob) << ','
            << fmt(r.power_budget) << ',' << r.seed << ',' << r.user << ',' << fmt(r.drop_rate)
            << ',' << fmt(r.avg_power) << ',' << fmt(r.avg_f) << ',' << fmt(r.x_over_t) << ','
            << r.slots << ',' << fmt(r.wall_ms) << '\n';
    }
}

void write_series_csv(std::ostream& out, const RunResult& result) {
    out << "t,user,p_bar,d_bar,x\n";
    for (const auto& rec : result.records) {
        for (int u = 0; u < result.config.n_users; ++u) {
            out << rec.t << ',' << u << ',' << fmt(rec.avg_power[u]) << ','
                << fmt(rec.drop_rate[u]) << ',' << fmt(rec.x_after[u]) << '\n';
        }
    }
}

ExperimentSpec preset_fig1() {
    ExperimentSpec spec;
    spec.base = uniform_config(2);
    spec.base.arrival_prob.assign(2, 0.4);
    spec.base.power_budget.assign(2, 0.6);
    spec.policy = "dpa";
    spec.axes.push_back({SweepParameter::PenaltyWeight, {1, 5, 10, 20, 40, 60}});
    for (std::uint64_t s = 1; s <= 10; ++s) spec.seeds.push_back(s);
    spec.series = SeriesMode::FirstSeed;
    return spec;
}

std::vector<ExperimentSpec> preset_fig45() {
    std::vector<ExperimentSpec> specs;
    for (const char* policy : {"dpa", "edf"}) {
        ExperimentSpec spec;
        spec.base = uniform_config(2);
        spec.base.penalty_weight = 60.0;
        spec.policy = policy;
        spec.axes.push_back({SweepParameter::PowerBudget, {0.7, 0.8}});
        spec.axes.push_back(
            {SweepParameter::ArrivalProb, {0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9}});
        for (std::uint64_t s = 1; s <= 10; ++s) spec.seeds.push_back(s);
        specs.push_back(std::move(spec));
    }
    return specs;
}

namespace {

Table1Replay::Variant replay_variant(const TinyInstance& instance, const std::string& label,
                                     const std::vector<PowerAllocation>& trace) {
    FixedTracePolicy policy(trace);
    Table1Replay::Variant variant;
    variant.label = label;
    variant.result = run_on_instance(instance, policy);
    for (const auto& rec : variant.result.records) {
        variant.d_row.push_back(rec.head_deadline[0]);
        variant.p_row.push_back(rec.allocation.power[0]);
    }
    const UserSummary& user = variant.result.users[0];
    variant.drops = user.dropped;
    variant.avg_power = user.avg_power;
    variant.avg_power_per_tx = user.avg_power_per_tx;
    return variant;
}

}  // namespace

Table1Replay run_table1_replay() {
    // One user, deadline 2 slots, budget 1.5. A packet one slot from expiry
    // already waits in the queue; a second packet arrives during the first
    // slot. Channel runs Bad, Good, Good.
    Table1Replay replay;
    TinyInstance& inst = replay.instance;
    inst.config = uniform_config(1);
    inst.config.deadline = {2};
    inst.config.power_budget = {1.5};
    inst.config.horizon = 3;
    inst.traces.channels = {{ChannelState::Bad}, {ChannelState::Good}, {ChannelState::Good}};
    inst.traces.arrivals = {{1}, {0}, {0}};
    inst.initial_queues = {UserQueue{1}};

    const auto alloc = [](double p) { return PowerAllocation{{p}}; };
    replay.omega1 = replay_variant(inst, "omega1", {alloc(0), alloc(1), alloc(0)});
    replay.omega2 = replay_variant(inst, "omega2", {alloc(2), alloc(0), alloc(1)});
    return replay;
}

}  // namespace dpasim
