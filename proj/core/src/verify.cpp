#include "dpasim/verify.hpp"

#include <cmath>
#include <sstream>

#include "dpasim/oracle.hpp"

namespace dpasim {

ViewSample random_view_sample(Rng& rng, const SystemConfig& config) {
    ViewSample sample;
    SlotView& view = sample.view;
    view.t = 0;
    view.config = &config;
    view.channels.resize(config.n_users);
    view.head_deadline.resize(config.n_users);
    view.queue_length.resize(config.n_users);
    sample.x.resize(config.n_users);
    for (int i = 0; i < config.n_users; ++i) {
        view.channels[i] = rng.bernoulli(0.5) ? ChannelState::Bad : ChannelState::Good;
        view.queue_length[i] = rng.below(6);
        if (view.queue_length[i] > 0)
            view.head_deadline[i] = 1 + rng.below(config.deadline[i]);
        // point mass at zero: backlogs start there in every run, and exact
        // zeros are what produce the objective ties the tie rule is for
        sample.x[i] = rng.bernoulli(0.25) ? 0.0 : 100.0 * rng.next_unit();
    }
    return sample;
}

namespace {

CheckResult check_oracle_equivalence(const VerifyOptions& options, const DecideFn& decide) {
    Rng rng(options.seed);
    // configs must outlive the views sampled from them
    std::vector<SystemConfig> configs;
    for (int n = 1; n <= options.max_users; ++n) {
        for (double v : {1.0, 60.0}) {
            SystemConfig cfg = uniform_config(n);
            cfg.penalty_weight = v;
            configs.push_back(std::move(cfg));
        }
    }

    int objective_mismatches = 0;
    int allocation_mismatches = 0;
    for (int trial = 0; trial < options.views; ++trial) {
        const SystemConfig& cfg = configs[rng.below(static_cast<int>(configs.size()))];
        const ViewSample sample = random_view_sample(rng, cfg);
        const PolicyDecision fast = decide(sample.view, sample.x);
        const auto [slow_alloc, slow_obj] = bruteforce_slot_min(sample.view, sample.x);
        if (!fast.objective || *fast.objective != slow_obj) ++objective_mismatches;
        if (fast.allocation.power != slow_alloc.power) ++allocation_mismatches;
    }

    CheckResult result;
    result.name = "oracle_equivalence";
    result.passed = objective_mismatches == 0 && allocation_mismatches == 0;
    std::ostringstream detail;
    detail << options.views << " views, " << objective_mismatches << " objective and "
           << allocation_mismatches << " allocation mismatches";
    result.detail = detail.str();
    return result;
}

std::vector<RunResult> reference_runs(const VerifyOptions& options) {
    std::vector<RunResult> results;
    const DpaPolicy dpa;
    const EdfPolicy edf;
    for (int n : {1, 2, options.max_users}) {
        SystemConfig cfg = uniform_config(n);
        cfg.horizon = options.slots;
        cfg.seed = options.seed;
        results.push_back(run(cfg, dpa));
        results.push_back(run(cfg, edf));
    }
    return results;
}

CheckResult check_conservation(const std::vector<RunResult>& runs) {
    std::size_t violations = 0;
    for (const auto& r : runs) violations += r.conservation_violations;
    CheckResult result;
    result.name = "conservation";
    result.passed = violations == 0;
    std::ostringstream detail;
    detail << runs.size() << " runs, " << violations << " violations of the arrival identity";
    result.detail = detail.str();
    return result;
}

CheckResult check_budget_inequality(const std::vector<RunResult>& runs) {
    double worst_gap = 0.0;
    for (const auto& r : runs) worst_gap = std::max(worst_gap, r.max_budget_gap);
    CheckResult result;
    result.name = "budget_inequality";
    result.passed = worst_gap <= 1e-9;
    std::ostringstream detail;
    detail << runs.size() << " runs, max of p_bar - gamma - X/t = " << worst_gap;
    result.detail = detail.str();
    return result;
}

}  // namespace

std::vector<CheckResult> run_verification(const VerifyOptions& options, DecideFn decide) {
    if (!decide) decide = [](const SlotView& v, const VirtualQueues& x) { return dpa_decide(v, x); };
    std::vector<CheckResult> checks;
    checks.push_back(check_oracle_equivalence(options, decide));
    const std::vector<RunResult> runs = reference_runs(options);
    checks.push_back(check_conservation(runs));
    checks.push_back(check_budget_inequality(runs));
    return checks;
}

bool all_passed(const std::vector<CheckResult>& checks) {
    for (const auto& c : checks)
        if (!c.passed) return false;
    return true;
}

}  // namespace dpasim
