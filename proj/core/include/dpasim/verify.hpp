#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "dpasim/engine.hpp"
#include "dpasim/policies.hpp"
#include "dpasim/rng.hpp"

namespace dpasim {

struct CheckResult {
    std::string name;
    bool passed = false;
    std::string detail;
};

struct VerifyOptions {
    int views = 10000;          // randomized views for the oracle equivalence check
    std::int64_t slots = 10000; // horizon for the run-level checks
    std::uint64_t seed = 12345;
    int max_users = 4;
};

// A randomized decision-time snapshot plus backlogs, for equivalence and
// soundness checks. The config the view points into must outlive the sample.
struct ViewSample {
    SlotView view;
    VirtualQueues x;
};

// Random queues (lengths 0..5, feasible head countdowns), random channels,
// X uniform in [0, 100].
ViewSample random_view_sample(Rng& rng, const SystemConfig& config);

using DecideFn = std::function<PolicyDecision(const SlotView&, const VirtualQueues&)>;

// The on-demand health suite: per-slot minimizer vs exhaustive enumeration,
// packet conservation, and the budget inequality. `decide` defaults to
// dpa_decide; injecting a broken one is how the suite itself is tested.
std::vector<CheckResult> run_verification(const VerifyOptions& options, DecideFn decide = {});

bool all_passed(const std::vector<CheckResult>& checks);

}  // namespace dpasim
