#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "dpasim/engine.hpp"
#include "dpasim/oracle.hpp"

namespace dpasim {

// Raised for malformed or invalid experiment specs; the message names the
// offending field.
class SpecError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

enum class SweepParameter { PenaltyWeight, ArrivalProb, PowerBudget };

struct SweepAxis {
    SweepParameter parameter;
    std::vector<double> values;
};

enum class SeriesMode { None, FirstSeed, All };

struct ExperimentSpec {
    SystemConfig base;
    std::string policy = "dpa";  // dpa | edf | fixed
    std::vector<SweepAxis> axes;  // in declaration order; may be empty
    std::vector<std::uint64_t> seeds;
    std::int64_t log_stride = 0;
    SeriesMode series = SeriesMode::None;
    std::vector<PowerAllocation> trace;  // required when policy == fixed
};

// One output row per (sweep point x seed x user). arrival_prob and
// power_budget carry this user's values for the run.
struct ResultRow {
    std::string policy;
    double penalty_weight = 0.0;
    double arrival_prob = 0.0;
    double power_budget = 0.0;
    std::uint64_t seed = 0;
    int user = 0;
    double drop_rate = 0.0;
    double avg_power = 0.0;
    double avg_f = 0.0;
    double x_over_t = 0.0;
    std::int64_t slots = 0;
    double wall_ms = 0.0;
};

// Per-run time series kept for plot output, one entry per sweep point that
// requested it.
struct SeriesRecord {
    std::string label;  // e.g. "dpa_V60_seed1"
    RunResult result;
};

struct ExperimentOutput {
    std::vector<ResultRow> rows;      // canonical order: sweep points, then seeds
    std::vector<SeriesRecord> series;
};

// Flat key=value text, one setting per line, '#' comments. Lists are
// comma-separated; seeds also accept "a..b" ranges. Defaults fill every
// field the text omits. Throws SpecError on malformed text or on configs
// violating their constraints.
ExperimentSpec parse_spec(const std::string& text);
ExperimentSpec parse_spec_file(const std::string& path);

// Simulates the full Cartesian product of sweep axes x seeds, up to `workers`
// runs in flight at once. Row order is deterministic regardless of worker
// count. Re-checks the budget inequality on every emitted row and throws
// std::logic_error if any run breaks it.
ExperimentOutput run_experiment(const ExperimentSpec& spec, int workers = 1);

// results.csv schema (fixed): one header row then one line per ResultRow.
void write_results_csv(std::ostream& out, const std::vector<ResultRow>& rows);
// Time-series schema (fixed): t,user,p_bar,d_bar,x.
void write_series_csv(std::ostream& out, const RunResult& result);

// Canned experiments.
ExperimentSpec preset_fig1();
std::vector<ExperimentSpec> preset_fig45();  // one spec per policy

// Single-user two-packet replay of the power-selection example: policy a
// stays under the budget every slot, policy b front-loads power and saves the
// packet the cautious policy drops.
struct Table1Replay {
    struct Variant {
        std::string label;
        std::vector<std::optional<int>> d_row;  // head countdown per slot
        std::vector<double> p_row;              // allocated power per slot
        std::int64_t drops = 0;
        double avg_power = 0.0;         // power sum / horizon
        double avg_power_per_tx = 0.0;  // power sum / transmitting slots
        RunResult result;
    };
    Variant omega1;
    Variant omega2;
    TinyInstance instance;  // same scenario, for oracle cross-checks
};

Table1Replay run_table1_replay();

}  // namespace dpasim
