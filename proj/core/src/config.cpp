#include "dpasim/config.hpp"

#include <sstream>
#include <stdexcept>

namespace dpasim {

SystemConfig uniform_config(int n_users) {
    SystemConfig cfg;
    cfg.n_users = n_users;
    cfg.arrival_prob.assign(n_users, kDefaultArrivalProb);
    cfg.deadline.assign(n_users, kDefaultDeadline);
    cfg.power_budget.assign(n_users, kDefaultPowerBudget);
    cfg.bad_channel_prob.assign(n_users, kDefaultBadChannelProb);
    return cfg;
}

namespace {

void check_size(std::vector<std::string>& problems, const char* field, std::size_t got,
                int n_users) {
    if (got != static_cast<std::size_t>(n_users)) {
        std::ostringstream msg;
        msg << field << ": expected " << n_users << " entries, got " << got;
        problems.push_back(msg.str());
    }
}

}  // namespace

std::vector<std::string> validate_config(const SystemConfig& config) {
    std::vector<std::string> problems;
    if (config.n_users < 1) problems.push_back("n_users: must be at least 1");
    if (!(config.p_low > 0.0)) problems.push_back("p_low: must be positive");
    if (!(config.p_low < config.p_high))
        problems.push_back("p_high: must exceed p_low");
    if (!(config.penalty_weight > 0.0))
        problems.push_back("penalty_weight: must be positive");
    if (config.horizon < 0) problems.push_back("horizon: must be nonnegative");

    if (config.n_users < 1) return problems;
    const int n = config.n_users;
    check_size(problems, "arrival_prob", config.arrival_prob.size(), n);
    check_size(problems, "deadline", config.deadline.size(), n);
    check_size(problems, "power_budget", config.power_budget.size(), n);
    check_size(problems, "bad_channel_prob", config.bad_channel_prob.size(), n);
    if (!problems.empty()) return problems;

    for (int i = 0; i < n; ++i) {
        std::ostringstream msg;
        if (config.arrival_prob[i] < 0.0 || config.arrival_prob[i] > 1.0) {
            msg << "arrival_prob[" << i << "]: must lie in [0,1]";
            problems.push_back(msg.str());
        } else if (config.deadline[i] < 1) {
            msg << "deadline[" << i << "]: must be at least 1";
            problems.push_back(msg.str());
        } else if (config.power_budget[i] < 0.0 || config.power_budget[i] > config.p_high) {
            msg << "power_budget[" << i << "]: must lie in [0, p_high]";
            problems.push_back(msg.str());
        } else if (config.bad_channel_prob[i] < 0.0 || config.bad_channel_prob[i] > 1.0) {
            msg << "bad_channel_prob[" << i << "]: must lie in [0,1]";
            problems.push_back(msg.str());
        }
    }
    return problems;
}

void require_valid(const SystemConfig& config) {
    const auto problems = validate_config(config);
    if (problems.empty()) return;
    std::ostringstream msg;
    msg << "invalid config:";
    for (const auto& p : problems) msg << ' ' << p << ';';
    throw std::invalid_argument(msg.str());
}

}  // namespace dpasim
