#include "evmoga/commands.hpp"

#include "evmoga/engine.hpp"
#include "evmoga/report.hpp"

#include <fstream>
#include <iostream>
#include <stdexcept>

namespace evmoga {

namespace {

void write_text(const std::filesystem::path& path, const std::string& text) {
    std::ofstream f(path);
    if (!f) throw DataError("cannot write '" + path.string() + "'");
    f << text;
}

void print_vec3(std::ostream& os, const Vec3& g) {
    const auto f = from_minimized(g);
    os << "risk " << format_fixed(f.risk, 3) << ", ret " << format_fixed(f.ret, 3) << ", emiss "
       << format_fixed(f.carbon, 3);
}

}  // namespace

int cmd_ingest(const IngestOptions& opts, std::ostream& out, std::ostream& err) {
    try {
        const auto returns = load_returns(opts.returns_csv, opts.period_label);
        const auto scores = load_carbon_scores(opts.carbon_csv);
        const auto carbon = align_carbon(returns.asset_ids, scores);
        const auto universe = estimate_moments(returns, carbon, opts.carbon_range);
        save_instance(universe, opts.out_instance);
        out << "instance: " << universe.size() << " assets, " << returns.num_periods() << ' ' << returns.period_label
            << " observations -> " << opts.out_instance.string() << '\n';
        return kExitOk;
    } catch (const std::exception& e) {
        err << "ingest: " << e.what() << '\n';
        return kExitFailure;
    }
}

int cmd_optimize(const OptimizeOptions& opts, std::ostream& out, std::ostream& err) {
    try {
        const auto universe = load_instance(opts.instance);
        const auto bounds = opts.settings.bounds(universe.size());
        ProgressSink sink;
        if (!opts.quiet) {
            sink = [&err](const Checkpoint& cp, const EpsArchive&) {
                err << "iteration " << cp.iteration << ": archive " << cp.archive_size << ", hypervolume "
                    << cp.hypervolume << '\n';
            };
        }
        const auto result = run(universe, bounds, opts.settings.config, sink);
        const auto front = FrontExport::from_run(result, universe, opts.settings);
        save_front(front, opts.out_front);

        out << "archive: " << result.archive.size() << " entries after " << result.iterations_done << " iterations ("
            << result.evaluations << " evaluations)\n";
        static const char* names[] = {"min risk", "max ret", "min emiss"};
        for (std::size_t k = 0; k < kNumObjectives; ++k) {
            out << "anchor " << names[k] << ": ";
            print_vec3(out, result.archive.anchor(k).minimized);
            out << '\n';
        }
        out << "front -> " << opts.out_front.string() << '\n';
        return kExitOk;
    } catch (const std::exception& e) {
        err << "optimize: " << e.what() << '\n';
        return kExitFailure;
    }
}

ProfileSelection resolve_selection(const FrontExport& front, const SelectionOptions& opts) {
    const bool labels = opts.green_label || opts.risk_label;
    const bool raw = opts.p_g || opts.p_r;
    if (labels == raw) throw std::invalid_argument("select either --green/--risk labels or --p-g/--p-r thresholds");
    ProfileSelection sel;
    if (labels) {
        if (!opts.green_label || !opts.risk_label) throw std::invalid_argument("both --green and --risk are required");
        if (front.entries.empty()) throw std::invalid_argument("front has no entries");
        sel.green_label = *opts.green_label;
        sel.risk_label = *opts.risk_label;
        sel.filter = resolve_profile(front.entries, opts.profiles, sel.green_label, sel.risk_label);
    } else {
        if (!opts.p_g || !opts.p_r) throw std::invalid_argument("both --p-g and --p-r are required");
        sel.green_label = "custom";
        sel.risk_label = "custom";
        sel.filter = {*opts.p_g, *opts.p_r};
    }
    return sel;
}

int cmd_filter(const SelectionOptions& opts, std::ostream& out, std::ostream& err) {
    try {
        const auto front = load_front(opts.front);
        const auto sel = resolve_selection(front, opts);
        const auto region = filter_region(front.entries, sel.filter);
        nlohmann::json doc = {
            {"status", region.empty() ? "empty_region" : "ok"},
            {"p_g", sel.filter.p_g},
            {"p_r", sel.filter.p_r},
            {"ids", region.ids},
        };
        out << doc.dump() << '\n';
        if (region.empty()) {
            err << "filter: aspirations infeasible on this front (empty region of interest)\n";
            return kExitEmptyRegion;
        }
        return kExitOk;
    } catch (const std::exception& e) {
        err << "filter: " << e.what() << '\n';
        return kExitFailure;
    }
}

int cmd_report(const ReportOptions& opts, std::ostream& out, std::ostream& err) {
    try {
        const auto front = load_front(opts.selection.front);
        const auto sel = resolve_selection(front, opts.selection);
        const auto region = filter_region(front.entries, sel.filter);
        if (region.empty()) {
            if (!opts.out_scatter.empty()) write_text(opts.out_scatter, render_scatter_csv(front.entries, region, nullptr));
            err << "report: aspirations infeasible on this front (empty region of interest)\n";
            return kExitEmptyRegion;
        }
        const auto reps = representatives(region);
        const auto table = render_table(front.asset_ids, reps, sel, region.entries.size(), front.entries.size());
        if (opts.out_table.empty())
            out << table;
        else
            write_text(opts.out_table, table);
        if (!opts.out_scatter.empty()) write_text(opts.out_scatter, render_scatter_csv(front.entries, region, &reps));
        if (!opts.out_json.empty()) write_text(opts.out_json, representatives_to_json(reps).dump(2) + "\n");
        return kExitOk;
    } catch (const std::exception& e) {
        err << "report: " << e.what() << '\n';
        return kExitFailure;
    }
}

}  // namespace evmoga
