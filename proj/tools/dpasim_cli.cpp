// Experiment runner for the deadline-constrained power-allocation simulator.
// Subcommands: run (spec file -> CSV), preset (canned studies), verify
// (self-checks), version. Exit codes: 0 ok, 1 invalid spec/input, 2 check
// failure, 3 I/O error.

#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "dpasim/experiment.hpp"
#include "dpasim/verify.hpp"
#include "dpasim/version.hpp"

namespace fs = std::filesystem;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitInvalidSpec = 1;
constexpr int kExitCheckFailure = 2;
constexpr int kExitIoError = 3;

void write_file(const fs::path& path, const std::string& contents) {
    std::ofstream out(path);
    if (!out) throw std::ios_base::failure("cannot open " + path.string() + " for writing");
    out << contents;
    if (!out) throw std::ios_base::failure("write to " + path.string() + " failed");
}

void write_run_info(const fs::path& dir, const dpasim::ExperimentSpec& spec) {
    std::ostringstream info;
    info << "dpasim " << dpasim::kVersion << '\n'
         << "rng: " << dpasim::Rng::kContract << '\n'
         << "schema: " << dpasim::kResultsCsvSchema << '\n'
         << "policy: " << spec.policy << '\n'
         << "horizon: " << spec.base.horizon << '\n'
         << "seeds: " << spec.seeds.size() << '\n';
    write_file(dir / "run_info.txt", info.str());
}

void emit_output(const fs::path& dir, const dpasim::ExperimentOutput& output,
                 const dpasim::ExperimentSpec& spec, bool append_rows) {
    fs::create_directories(dir);
    const fs::path results = dir / "results.csv";
    std::ofstream out(results, append_rows ? std::ios::app : std::ios::trunc);
    if (!out) throw std::ios_base::failure("cannot open " + results.string());
    if (!append_rows) {
        dpasim::write_results_csv(out, output.rows);
    } else {
        // append without repeating the header
        std::ostringstream buf;
        dpasim::write_results_csv(buf, output.rows);
        const std::string text = buf.str();
        out << text.substr(text.find('\n') + 1);
    }
    if (!out) throw std::ios_base::failure("write to " + results.string() + " failed");

    for (const auto& series : output.series) {
        std::ofstream sout(dir / ("series_" + series.label + ".csv"));
        if (!sout) throw std::ios_base::failure("cannot open series file");
        dpasim::write_series_csv(sout, series.result);
    }
    write_run_info(dir, spec);
}

int cmd_run(const std::string& spec_path, const std::string& out_dir, int workers) {
    const dpasim::ExperimentSpec spec = dpasim::parse_spec_file(spec_path);
    const dpasim::ExperimentOutput output = dpasim::run_experiment(spec, workers);
    emit_output(out_dir, output, spec, /*append_rows=*/false);
    std::cout << "wrote " << output.rows.size() << " rows to " << out_dir << "/results.csv\n";
    return kExitOk;
}

std::string channel_name(dpasim::ChannelState s) {
    return s == dpasim::ChannelState::Bad ? "B" : "G";
}

void print_table1_variant(std::ostream& out, const dpasim::Table1Replay::Variant& v) {
    out << v.label << ": d(t) =";
    for (const auto& d : v.d_row) {
        if (d)
            out << ' ' << *d;
        else
            out << " -";
    }
    out << ", p(t) =";
    for (double p : v.p_row) out << ' ' << p;
    out << ", drops = " << v.drops << ", avg power = " << v.avg_power
        << ", avg power per transmission = " << v.avg_power_per_tx << '\n';
}

int cmd_preset(const std::string& name, const std::string& out_dir, int workers,
               std::int64_t horizon_override) {
    fs::create_directories(out_dir);
    if (name == "table1") {
        const dpasim::Table1Replay replay = dpasim::run_table1_replay();
        std::ostringstream report;
        report << "policy,slot,channel,head_deadline,power\n";
        for (const auto* v : {&replay.omega1, &replay.omega2}) {
            for (std::size_t t = 0; t < v->p_row.size(); ++t) {
                report << v->label << ',' << t + 1 << ','
                       << channel_name(replay.instance.traces.channels[t][0]) << ','
                       << (v->d_row[t] ? std::to_string(*v->d_row[t]) : "-") << ',' << v->p_row[t]
                       << '\n';
            }
        }
        report << "\npolicy,drops,avg_power,avg_power_per_tx\n";
        for (const auto* v : {&replay.omega1, &replay.omega2}) {
            report << v->label << ',' << v->drops << ',' << v->avg_power << ','
                   << v->avg_power_per_tx << '\n';
        }
        write_file(fs::path(out_dir) / "table1_replay.csv", report.str());
        print_table1_variant(std::cout, replay.omega1);
        print_table1_variant(std::cout, replay.omega2);
        std::cout << "wrote " << out_dir << "/table1_replay.csv\n";
        return kExitOk;
    }
    if (name == "fig1") {
        dpasim::ExperimentSpec spec = dpasim::preset_fig1();
        if (horizon_override > 0) spec.base.horizon = horizon_override;
        const dpasim::ExperimentOutput output = dpasim::run_experiment(spec, workers);
        emit_output(out_dir, output, spec, /*append_rows=*/false);
        std::cout << "wrote " << output.rows.size() << " rows and " << output.series.size()
                  << " series files to " << out_dir << '\n';
        return kExitOk;
    }
    if (name == "fig45") {
        bool first = true;
        std::size_t total = 0;
        for (dpasim::ExperimentSpec spec : dpasim::preset_fig45()) {
            if (horizon_override > 0) spec.base.horizon = horizon_override;
            const dpasim::ExperimentOutput output = dpasim::run_experiment(spec, workers);
            emit_output(out_dir, output, spec, /*append_rows=*/!first);
            total += output.rows.size();
            first = false;
        }
        std::cout << "wrote " << total << " rows to " << out_dir << "/results.csv\n";
        return kExitOk;
    }
    std::cerr << "unknown preset '" << name << "' (expected fig1, fig45, or table1)\n";
    return kExitInvalidSpec;
}

int cmd_verify(int views, std::int64_t slots, std::uint64_t seed) {
    dpasim::VerifyOptions options;
    options.views = views;
    options.slots = slots;
    options.seed = seed;
    const auto checks = dpasim::run_verification(options);
    for (const auto& check : checks)
        std::cout << (check.passed ? "PASS" : "FAIL") << ' ' << check.name << ": " << check.detail
                  << '\n';
    return dpasim::all_passed(checks) ? kExitOk : kExitCheckFailure;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"deadline-constrained power allocation simulator"};
    app.require_subcommand(1);

    auto* run_cmd = app.add_subcommand("run", "run an experiment spec file");
    std::string spec_path;
    std::string out_dir = "results";
    int workers = 1;
    run_cmd->add_option("--spec", spec_path, "experiment spec file")->required();
    run_cmd->add_option("--out", out_dir, "output directory");
    run_cmd->add_option("--workers", workers, "concurrent runs");

    auto* preset_cmd = app.add_subcommand("preset", "run a canned study");
    std::string preset_name;
    std::string preset_out;
    std::int64_t horizon_override = 0;
    preset_cmd->add_option("name", preset_name, "fig1 | fig45 | table1")->required();
    preset_cmd->add_option("--out", preset_out, "output directory");
    preset_cmd->add_option("--workers", workers, "concurrent runs");
    preset_cmd->add_option("--horizon", horizon_override, "override slots per run");

    auto* verify_cmd = app.add_subcommand("verify", "run the self-check suite");
    int views = 10000;
    std::int64_t slots = 10000;
    std::uint64_t seed = 12345;
    verify_cmd->add_option("--views", views, "randomized views for the equivalence check");
    verify_cmd->add_option("--slots", slots, "horizon for the run-level checks");
    verify_cmd->add_option("--seed", seed, "seed for the check suite");

    auto* version_cmd = app.add_subcommand("version", "print version and RNG contract");

    CLI11_PARSE(app, argc, argv);

    try {
        if (run_cmd->parsed()) return cmd_run(spec_path, out_dir, workers);
        if (preset_cmd->parsed()) {
            if (preset_out.empty()) preset_out = "results/" + preset_name;
            return cmd_preset(preset_name, preset_out, workers, horizon_override);
        }
        if (verify_cmd->parsed()) return cmd_verify(views, slots, seed);
        if (version_cmd->parsed()) {
            std::cout << "dpasim " << dpasim::kVersion << " (rng " << dpasim::Rng::kContract
                      << ", schema " << dpasim::kResultsCsvSchema << ")\n";
            return kExitOk;
        }
    } catch (const dpasim::SpecError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitInvalidSpec;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitInvalidSpec;
    } catch (const std::ios_base::failure& e) {
        std::cerr << "I/O error: " << e.what() << '\n';
        return kExitIoError;
    } catch (const fs::filesystem_error& e) {
        std::cerr << "I/O error: " << e.what() << '\n';
        return kExitIoError;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitCheckFailure;
    }
    return kExitOk;
}
