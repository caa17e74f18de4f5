// evmoga: ingest return data, approximate the risk / return / carbon front
// and analyse it for investor profiles.

#include "evmoga/commands.hpp"
#include "evmoga/service.hpp"

#include <CLI11.hpp>

#include <csignal>
#include <iostream>

namespace {

evmoga::HttpFrontServer* g_server = nullptr;

void on_signal(int) {
    if (g_server) g_server->stop();
}

evmoga::ProfileConfig load_profiles(const std::string& path) {
    evmoga::ProfileConfig profiles;
    if (!path.empty()) profiles = evmoga::apply_profile_settings(profiles, evmoga::load_key_values(path));
    return profiles;
}

evmoga::RunSettings load_settings(const std::string& config_path, const std::vector<std::string>& overrides,
                                  const std::optional<std::uint64_t>& seed) {
    evmoga::RunSettings settings;
    if (!config_path.empty()) settings = evmoga::apply_run_settings(settings, evmoga::load_key_values(config_path));
    std::string text;
    for (const auto& kv : overrides) text += kv + "\n";
    settings = evmoga::apply_run_settings(settings, evmoga::parse_key_values(text));
    if (seed) settings.config.seed = *seed;
    return settings;
}

void add_selection(CLI::App* cmd, evmoga::SelectionOptions& sel, std::string& profiles_path) {
    cmd->add_option("front", sel.front, "Front file written by 'optimize'")->required()->check(CLI::ExistingFile);
    cmd->add_option("--green", sel.green_label, "Green profile label (weak, moderate, strong)");
    cmd->add_option("--risk", sel.risk_label, "Risk profile label (conservative, cautious, aggressive)");
    cmd->add_option("--p-g", sel.p_g, "Raw carbon aspiration (upper bound)");
    cmd->add_option("--p-r", sel.p_r, "Raw risk aspiration (upper bound)");
    cmd->add_option("--profiles", profiles_path, "Profile file (green.<label> = percentile, risk.<label> = ...)");
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Mean-variance-carbon portfolio fronts with ev-MOGA"};
    app.require_subcommand(1);

    evmoga::IngestOptions ingest;
    auto* c_ingest = app.add_subcommand("ingest", "Estimate an instance file from return and carbon CSVs");
    c_ingest->add_option("returns", ingest.returns_csv, "Returns CSV (header = asset ids)")->required()->check(CLI::ExistingFile);
    c_ingest->add_option("carbon", ingest.carbon_csv, "Carbon CSV (asset_id, carbon_score)")->required()->check(CLI::ExistingFile);
    c_ingest->add_option("-o,--out", ingest.out_instance, "Instance file to write")->required();
    c_ingest->add_option("--carbon-min", ingest.carbon_range.lo, "Lowest valid carbon score")->capture_default_str();
    c_ingest->add_option("--carbon-max", ingest.carbon_range.hi, "Highest valid carbon score")->capture_default_str();
    c_ingest->add_option("--period", ingest.period_label, "Period label of the returns")->capture_default_str();

    evmoga::OptimizeOptions optimize;
    std::string opt_config;
    std::vector<std::string> opt_overrides;
    std::optional<std::uint64_t> opt_seed;
    auto* c_opt = app.add_subcommand("optimize", "Run ev-MOGA on an instance and write the front");
    c_opt->add_option("instance", optimize.instance, "Instance file")->required()->check(CLI::ExistingFile);
    c_opt->add_option("-o,--out", optimize.out_front, "Front file to write")->required();
    c_opt->add_option("-c,--config", opt_config, "Run configuration (key = value)")->check(CLI::ExistingFile);
    c_opt->add_option("--set", opt_overrides, "Override a configuration key (key=value)");
    c_opt->add_option("--seed", opt_seed, "Random seed");
    c_opt->add_flag("-q,--quiet", optimize.quiet, "No progress output");

    evmoga::SelectionOptions filter;
    std::string filter_profiles;
    auto* c_filter = app.add_subcommand("filter", "Print the region of interest for a profile or thresholds");
    add_selection(c_filter, filter, filter_profiles);

    evmoga::ReportOptions report;
    std::string report_profiles;
    auto* c_report = app.add_subcommand("report", "Representative portfolios and plot data for a profile");
    add_selection(c_report, report.selection, report_profiles);
    c_report->add_option("-o,--out", report.out_table, "Table file (default: stdout)");
    c_report->add_option("--scatter", report.out_scatter, "Scatter CSV with region membership");
    c_report->add_option("--json", report.out_json, "Representatives as JSON");

    std::string serve_front;
    std::string serve_instance;
    std::string serve_config;
    std::vector<std::string> serve_overrides;
    std::optional<std::uint64_t> serve_seed;
    std::string serve_profiles;
    std::string host = "127.0.0.1";
    int port = 8080;
    auto* c_serve = app.add_subcommand("serve", "Serve a front over HTTP (or run live on an instance)");
    auto* o_front = c_serve->add_option("--front", serve_front, "Front file")->check(CLI::ExistingFile);
    auto* o_inst = c_serve->add_option("--instance", serve_instance, "Instance file (live mode)")->check(CLI::ExistingFile);
    o_front->excludes(o_inst);
    c_serve->add_option("-c,--config", serve_config, "Run configuration for live mode")->check(CLI::ExistingFile);
    c_serve->add_option("--set", serve_overrides, "Override a configuration key (key=value)");
    c_serve->add_option("--seed", serve_seed, "Random seed for live mode");
    c_serve->add_option("--profiles", serve_profiles, "Profile file");
    c_serve->add_option("--host", host)->capture_default_str();
    c_serve->add_option("--port", port)->capture_default_str();

    CLI11_PARSE(app, argc, argv);

    try {
        if (*c_ingest) return evmoga::cmd_ingest(ingest, std::cout, std::cerr);
        if (*c_opt) {
            optimize.settings = load_settings(opt_config, opt_overrides, opt_seed);
            return evmoga::cmd_optimize(optimize, std::cout, std::cerr);
        }
        if (*c_filter) {
            filter.profiles = load_profiles(filter_profiles);
            return evmoga::cmd_filter(filter, std::cout, std::cerr);
        }
        if (*c_report) {
            report.selection.profiles = load_profiles(report_profiles);
            return evmoga::cmd_report(report, std::cout, std::cerr);
        }
        if (*c_serve) {
            if (serve_front.empty() == serve_instance.empty()) {
                std::cerr << "serve: pass exactly one of --front or --instance\n";
                return evmoga::kExitFailure;
            }
            const auto profiles = load_profiles(serve_profiles);
            std::unique_ptr<evmoga::FrontService> service;
            if (!serve_front.empty()) {
                service = std::make_unique<evmoga::FrontService>(evmoga::load_front(serve_front), profiles);
            } else {
                service = std::make_unique<evmoga::FrontService>(evmoga::load_instance(serve_instance),
                                                                 load_settings(serve_config, serve_overrides, serve_seed),
                                                                 profiles);
            }
            evmoga::HttpFrontServer server(*service);
            g_server = &server;
            std::signal(SIGINT, on_signal);
            std::signal(SIGTERM, on_signal);
            std::cout << "serving on http://" << host << ':' << port << std::endl;
            server.listen_blocking(host, port);
            g_server = nullptr;
            return evmoga::kExitOk;
        }
    } catch (const std::exception& e) {
        std::cerr << "evmoga: " << e.what() << '\n';
        return evmoga::kExitFailure;
    }
    return evmoga::kExitOk;
}
