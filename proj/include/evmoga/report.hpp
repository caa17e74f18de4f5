#pragma once

// Human-readable and plot-ready renderings of a filtered front.

#include "evmoga/front_io.hpp"
#include "evmoga/preferences.hpp"

#include <json.hpp>

#include <string>
#include <vector>

namespace evmoga {

struct ProfileSelection {
    std::string green_label;
    std::string risk_label;
    PreferenceFilter filter;
};

/// Composition table: one row per representative (opt, min var, min emi,
/// max ret). Weights in percent with one decimal, objectives with three.
/// Only assets with a non-zero rendered weight in some row get a column.
std::string render_table(const std::vector<std::string>& asset_ids, const Representatives& reps,
                         const ProfileSelection& selection, std::size_t region_size, std::size_t front_size);

/// One CSV line per front entry: id, risk, ret, carbon, in_region, role.
/// `role` names the representative(s) the entry is, joined with '|'.
std::string render_scatter_csv(const std::vector<ArchiveEntry>& front, const RegionOfInterest& region,
                               const Representatives* reps);

nlohmann::json representatives_to_json(const Representatives& reps);

/// Fixed-point rendering used throughout the tables ("-0.0" never appears).
std::string format_fixed(double value, int decimals);

}  // namespace evmoga
