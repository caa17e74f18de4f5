#pragma once

// Subcommand implementations behind the evmoga CLI. Each returns a process
// exit code and writes human-readable output to `out` and diagnostics to
// `err`.

#include "evmoga/front_io.hpp"
#include "evmoga/kv_config.hpp"
#include "evmoga/preferences.hpp"
#include "evmoga/report.hpp"

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>

namespace evmoga {

inline constexpr int kExitOk = 0;
inline constexpr int kExitFailure = 1;
/// The aspirations select nothing on this front. Not a failure.
inline constexpr int kExitEmptyRegion = 3;

struct IngestOptions {
    std::filesystem::path returns_csv;
    std::filesystem::path carbon_csv;
    std::filesystem::path out_instance;
    CarbonRange carbon_range;
    std::string period_label = "monthly";
};

struct OptimizeOptions {
    std::filesystem::path instance;
    std::filesystem::path out_front;
    RunSettings settings;
    bool quiet = false;
};

/// Either both labels or both raw thresholds.
struct SelectionOptions {
    std::filesystem::path front;
    std::optional<std::string> green_label;
    std::optional<std::string> risk_label;
    std::optional<double> p_g;
    std::optional<double> p_r;
    ProfileConfig profiles;
};

struct ReportOptions {
    SelectionOptions selection;
    /// Table destination; stdout when empty.
    std::filesystem::path out_table;
    /// Scatter CSV destination; skipped when empty.
    std::filesystem::path out_scatter;
    /// Representatives as JSON; skipped when empty.
    std::filesystem::path out_json;
};

int cmd_ingest(const IngestOptions& opts, std::ostream& out, std::ostream& err);
int cmd_optimize(const OptimizeOptions& opts, std::ostream& out, std::ostream& err);
/// Prints {"status", "p_g", "p_r", "ids"} as JSON.
int cmd_filter(const SelectionOptions& opts, std::ostream& out, std::ostream& err);
int cmd_report(const ReportOptions& opts, std::ostream& out, std::ostream& err);

/// Resolves a selection against a loaded front (labels -> percentiles).
ProfileSelection resolve_selection(const FrontExport& front, const SelectionOptions& opts);

}  // namespace evmoga
