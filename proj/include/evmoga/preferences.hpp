#pragma once

// A-posteriori preference articulation over a computed front.
//
// Green (carbon) and loss-aversion (risk) profiles map to percentiles of the
// front's carbon and risk values. The resulting thresholds are upper bounds:
// the region of interest is every front entry with carbon <= p_g and
// risk <= p_r.

#include "evmoga/epsilon_archive.hpp"

#include <array>
#include <map>
#include <span>
#include <string>
#include <vector>

namespace evmoga {

/// Label -> percentile maps for the two preference dimensions.
/// Defaults: weak 25, moderate 55, strong 75; conservative 50, cautious 75,
/// aggressive 100.
struct ProfileConfig {
    std::map<std::string, double> green{{"weak", 25.0}, {"moderate", 55.0}, {"strong", 75.0}};
    std::map<std::string, double> risk{{"conservative", 50.0}, {"cautious", 75.0}, {"aggressive", 100.0}};

    static const std::array<std::string, 3>& green_labels();
    static const std::array<std::string, 3>& risk_labels();

    /// Throws std::invalid_argument for unknown labels.
    double green_percentile(const std::string& label) const;
    double risk_percentile(const std::string& label) const;

    /// Every percentile must lie in (0, 100].
    void validate() const;
};

struct PreferenceFilter {
    double p_g = 0.0;  // carbon aspiration (upper bound)
    double p_r = 0.0;  // risk aspiration (upper bound)
};

struct RegionOfInterest {
    /// Positions of the members in the front they were filtered from.
    std::vector<std::size_t> ids;
    std::vector<ArchiveEntry> entries;
    PreferenceFilter filter;

    bool empty() const { return entries.empty(); }
};

struct Representatives {
    ArchiveEntry opt;
    ArchiveEntry min_var;
    ArchiveEntry min_emi;
    ArchiveEntry max_ret;
    /// Positions within the front (same id space as RegionOfInterest::ids).
    std::size_t opt_id = 0;
    std::size_t min_var_id = 0;
    std::size_t min_emi_id = 0;
    std::size_t max_ret_id = 0;
};

/// Linear-interpolation percentile on the sorted values: position
/// h = (q / 100)(n - 1), interpolated between its floor and ceiling.
double percentile(std::vector<double> values, double q);

struct ReferenceVectors {
    std::array<double, 3> p_g{};
    std::array<double, 3> p_r{};
};

ReferenceVectors reference_vectors(std::span<const ArchiveEntry> front, const std::array<double, 3>& green_percentiles,
                                   const std::array<double, 3>& risk_percentiles);
ReferenceVectors reference_vectors(std::span<const ArchiveEntry> front, const ProfileConfig& profiles = {});

/// Thresholds for one (green label, risk label) pair.
PreferenceFilter resolve_profile(std::span<const ArchiveEntry> front, const ProfileConfig& profiles,
                                 const std::string& green_label, const std::string& risk_label);

RegionOfInterest filter_region(std::span<const ArchiveEntry> front, const PreferenceFilter& filter);

/// min_var / min_emi / max_ret by scan; opt minimizes the Chebyshev distance
/// to the region's ideal point, normalized by the ideal-nadir range (axes
/// with zero range are ignored). Ties, in every case, fall back to lowest
/// risk, then lowest carbon, then highest return, then lexicographic weights.
/// Throws std::invalid_argument for an empty region.
Representatives representatives(const RegionOfInterest& region);

}  // namespace evmoga
