// Command-line front end: simulate, sweep, validate-theory, report.
#include <algorithm>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "leoaoi/config.hpp"
#include "leoaoi/engine.hpp"
#include "leoaoi/export.hpp"
#include "leoaoi/sweep.hpp"
#include "leoaoi/theory.hpp"

namespace fs = std::filesystem;
using namespace leoaoi;

namespace {

ScenarioConfig load_with_overrides(const std::string& path, const std::vector<std::string>& sets) {
    ScenarioConfig cfg = path.empty() ? ScenarioConfig{} : load_config(path);
    for (const auto& s : sets) {
        const auto eq = s.find('=');
        if (eq == std::string::npos) throw ContractViolation("--set expects key=value, got '" + s + "'");
        apply_setting(cfg, s.substr(0, eq), s.substr(eq + 1));
    }
    cfg.validate();
    return cfg;
}

void write_text(const fs::path& p, const std::string& text) {
    std::ofstream out(p, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot write " + p.string());
    out << text;
}

nlohmann::json details_json(const RunResult& r) {
    nlohmann::json j;
    j["policy"] = r.policy;
    j["seed"] = r.seed;
    j["slots"] = r.slots;
    j["ticks_per_slot"] = r.ticks_per_slot;
    j["weighted_aoi"] = r.weighted_aoi;
    j["mean_power_w"] = r.mean_power_w;
    j["forced_ho"] = r.forced_ho;
    j["disc_ho"] = r.disc_ho;
    j["blackout_slots"] = r.blackout_slots;
    j["rate_shortfalls"] = r.rate_shortfalls;
    j["mean_outage_ticks"] = r.mean_outage_ticks;
    for (int m = 0; m < kClasses; ++m) {
        const auto& c = r.classes[m];
        const auto& p = r.phases[m];
        j["compliance"].push_back({{"class", m + 1},
                                   {"rate", c.violation_rate},
                                   {"epsilon", c.epsilon},
                                   {"compliant", c.compliant},
                                   {"z_slope", c.z_slope}});
        j["phase_decomposition"].push_back({{"class", m + 1},
                                            {"conn_fraction", p.conn_fraction},
                                            {"conn_mean", p.conn_mean},
                                            {"ho_fraction", p.ho_fraction},
                                            {"ho_mean", p.ho_mean},
                                            {"total_mean", p.total_mean}});
    }
    for (const auto& g : r.e2e)
        j["e2e_aoi"].push_back({{"gap_m", g.gap_m},
                                {"followers", g.followers},
                                {"pl_aoi", g.pl_aoi},
                                {"mean_delay", g.mean_delay},
                                {"e2e_aoi", g.e2e_aoi}});
    for (const auto& e : r.pingpong)
        j["pingpong"].push_back({{"vehicle", e.vehicle}, {"start_slot", e.slots.front()}, {"length", e.length},
                                 {"satellites", e.satellites}});
    for (const auto& q : r.queue_trace)
        j["queue_trace"].push_back({{"slot", q.slot}, {"q_power", q.q_power}, {"q_handover", q.q_handover},
                                    {"mean_z", q.mean_z}});
    return j;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"AoI-driven LEO satellite scheduling simulator"};
    app.require_subcommand(1);

    std::string config_path, out_dir = ".", in_dir = ".", axis, values_text, seeds_text = "1,2,3,4,5", experiment;
    std::uint64_t seed = 1;
    std::vector<std::string> sets;
    int mc_slots = 100000;

    auto* sim = app.add_subcommand("simulate", "run one episode");
    sim->add_option("--config", config_path, "scenario file")->check(CLI::ExistingFile);
    sim->add_option("--seed", seed, "episode seed");
    sim->add_option("--out", out_dir, "output directory");
    sim->add_option("--set", sets, "override, key=value (repeatable)");

    auto* sw = app.add_subcommand("sweep", "run a parameter sweep");
    sw->add_option("--config", config_path, "scenario file")->check(CLI::ExistingFile);
    sw->add_option("--axis", axis, "ticks_per_slot | ho_mean_ms | ho_period_s | dpp_V")->required();
    sw->add_option("--values", values_text, "comma-separated axis values")->required();
    sw->add_option("--seeds", seeds_text, "comma-separated seeds");
    sw->add_option("--out", out_dir, "output directory");
    sw->add_option("--experiment", experiment, "label for the exported rows");
    sw->add_option("--set", sets, "override, key=value (repeatable)");

    auto* th = app.add_subcommand("validate-theory", "check closed forms against oracles");
    th->add_option("--out", out_dir, "output directory");
    th->add_option("--config", config_path, "scenario file")->check(CLI::ExistingFile);
    th->add_option("--mc-slots", mc_slots, "Monte-Carlo handover slots per point");

    auto* rep = app.add_subcommand("report", "print compliance tables from exported CSV files");
    rep->add_option("--in", in_dir, "directory with CSV exports");

    CLI11_PARSE(app, argc, argv);

    try {
        if (*sim) {
            const auto cfg = load_with_overrides(config_path, sets);
            fs::create_directories(out_dir);
            const auto r = run_episode(cfg, seed);
            const std::string stem = r.policy + "_seed" + std::to_string(seed);
            const auto rows = rows_for(r, r.policy);
            export_results(rows, ExportFormat::csv, fs::path(out_dir) / (stem + ".csv"));
            export_results(rows, ExportFormat::json, fs::path(out_dir) / (stem + ".json"));
            write_text(fs::path(out_dir) / (stem + "_details.json"), details_json(r).dump(2) + "\n");
            std::cout << format_compliance_table(rows);
            std::cout << "mean power " << format_number(r.mean_power_w) << " W, handovers forced "
                      << r.forced_ho << " / discretionary " << r.disc_ho << ", ping-pong events "
                      << r.pingpong.size() << "\n";
            return 0;
        }
        if (*sw) {
            SweepSpec spec;
            spec.base = load_with_overrides(config_path, sets);
            spec.axis = parse_axis(axis);
            spec.values = parse_number_list(values_text);
            for (double s : parse_number_list(seeds_text)) spec.seeds.push_back(static_cast<std::uint64_t>(s));
            spec.experiment = experiment.empty() ? sched::policy_name(spec.base.policy.kind) : experiment;
            const auto points = run_sweep(spec);
            std::vector<ResultRow> rows;
            int failures = 0;
            for (const auto& p : points) {
                if (!p.result) {
                    ++failures;
                    std::cerr << "point " << axis << "=" << format_number(p.axis_value) << " seed " << p.seed
                              << " failed: " << p.error << "\n";
                    continue;
                }
                auto rr = rows_for(*p.result, spec.experiment, axis, format_number(p.axis_value));
                rows.insert(rows.end(), rr.begin(), rr.end());
            }
            if (!rows.empty()) {
                fs::create_directories(out_dir);
                const std::string stem = "sweep_" + spec.experiment + "_" + axis;
                export_results(rows, ExportFormat::csv, fs::path(out_dir) / (stem + ".csv"));
                export_results(rows, ExportFormat::json, fs::path(out_dir) / (stem + ".json"));
                std::cout << format_compliance_table(rows);
            }
            return failures == 0 ? 0 : 1;
        }
        if (*th) {
            const auto cfg = load_with_overrides(config_path, {});
            TheoryOptions opt;
            opt.mc_slots = mc_slots;
            const auto checks = run_theory_checks(cfg, opt);
            fs::create_directories(out_dir);
            write_text(fs::path(out_dir) / "theory.csv", theory_table_csv(checks));
            bool all = true;
            for (const auto& c : checks) {
                std::cout << (c.pass ? "PASS " : "FAIL ") << c.name << ": expected " << c.expected << ", observed "
                          << c.observed << "\n";
                all = all && c.pass;
            }
            return all ? 0 : 1;
        }
        if (*rep) {
            std::vector<fs::path> files;
            for (const auto& e : fs::directory_iterator(in_dir))
                if (e.path().extension() == ".csv" && e.path().filename() != "theory.csv") files.push_back(e.path());
            std::sort(files.begin(), files.end());
            std::vector<ResultRow> rows;
            for (const auto& f : files) {
                auto r = read_csv(f);
                rows.insert(rows.end(), r.begin(), r.end());
            }
            if (rows.empty()) {
                std::cerr << "no result CSV files in " << in_dir << "\n";
                return 1;
            }
            std::cout << "Empirical safety violation rates (mean ± 95% CI over seeds)\n";
            std::cout << format_compliance_table(rows);
            return 0;
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 0;
}
