#include "evmoga/preferences.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace evmoga {

const std::array<std::string, 3>& ProfileConfig::green_labels() {
    static const std::array<std::string, 3> labels{"weak", "moderate", "strong"};
    return labels;
}

const std::array<std::string, 3>& ProfileConfig::risk_labels() {
    static const std::array<std::string, 3> labels{"conservative", "cautious", "aggressive"};
    return labels;
}

double ProfileConfig::green_percentile(const std::string& label) const {
    auto it = green.find(label);
    if (it == green.end()) throw std::invalid_argument("unknown green profile '" + label + "'");
    return it->second;
}

double ProfileConfig::risk_percentile(const std::string& label) const {
    auto it = risk.find(label);
    if (it == risk.end()) throw std::invalid_argument("unknown risk profile '" + label + "'");
    return it->second;
}

void ProfileConfig::validate() const {
    for (const auto* m : {&green, &risk})
        for (const auto& [label, q] : *m)
            if (!(q > 0.0 && q <= 100.0))
                throw std::invalid_argument("profile '" + label + "': percentile must lie in (0, 100]");
}

double percentile(std::vector<double> values, double q) {
    if (values.empty()) throw std::invalid_argument("percentile: empty list");
    if (!(q > 0.0 && q <= 100.0)) throw std::invalid_argument("percentile: q must lie in (0, 100]");
    for (double v : values)
        if (!std::isfinite(v)) throw std::invalid_argument("percentile: non-finite value");
    std::sort(values.begin(), values.end());
    if (q == 100.0) return values.back();
    const double h = (q / 100.0) * static_cast<double>(values.size() - 1);
    const auto lo = static_cast<std::size_t>(std::floor(h));
    const auto hi = static_cast<std::size_t>(std::ceil(h));
    return values[lo] + (h - static_cast<double>(lo)) * (values[hi] - values[lo]);
}

ReferenceVectors reference_vectors(std::span<const ArchiveEntry> front, const std::array<double, 3>& green_percentiles,
                                   const std::array<double, 3>& risk_percentiles) {
    if (front.empty()) throw std::invalid_argument("reference_vectors: empty front");
    std::vector<double> carbon;
    std::vector<double> risk;
    carbon.reserve(front.size());
    risk.reserve(front.size());
    for (const auto& e : front) {
        carbon.push_back(e.objectives.carbon);
        risk.push_back(e.objectives.risk);
    }
    ReferenceVectors out;
    for (std::size_t i = 0; i < 3; ++i) {
        out.p_g[i] = percentile(carbon, green_percentiles[i]);
        out.p_r[i] = percentile(risk, risk_percentiles[i]);
    }
    return out;
}

ReferenceVectors reference_vectors(std::span<const ArchiveEntry> front, const ProfileConfig& profiles) {
    std::array<double, 3> g{};
    std::array<double, 3> r{};
    for (std::size_t i = 0; i < 3; ++i) {
        g[i] = profiles.green_percentile(ProfileConfig::green_labels()[i]);
        r[i] = profiles.risk_percentile(ProfileConfig::risk_labels()[i]);
    }
    return reference_vectors(front, g, r);
}

PreferenceFilter resolve_profile(std::span<const ArchiveEntry> front, const ProfileConfig& profiles,
                                 const std::string& green_label, const std::string& risk_label) {
    if (front.empty()) throw std::invalid_argument("resolve_profile: empty front");
    std::vector<double> carbon;
    std::vector<double> risk;
    for (const auto& e : front) {
        carbon.push_back(e.objectives.carbon);
        risk.push_back(e.objectives.risk);
    }
    return {percentile(carbon, profiles.green_percentile(green_label)),
            percentile(risk, profiles.risk_percentile(risk_label))};
}

RegionOfInterest filter_region(std::span<const ArchiveEntry> front, const PreferenceFilter& filter) {
    RegionOfInterest region;
    region.filter = filter;
    for (std::size_t i = 0; i < front.size(); ++i) {
        const auto& f = front[i].objectives;
        if (f.carbon <= filter.p_g && f.risk <= filter.p_r) {
            region.ids.push_back(i);
            region.entries.push_back(front[i]);
        }
    }
    return region;
}

namespace {

// Shared fallback order: lowest risk, lowest carbon, highest return, then
// lexicographically smallest weights.
bool tie_break_less(const ArchiveEntry& a, const ArchiveEntry& b) {
    if (a.objectives.risk != b.objectives.risk) return a.objectives.risk < b.objectives.risk;
    if (a.objectives.carbon != b.objectives.carbon) return a.objectives.carbon < b.objectives.carbon;
    if (a.objectives.ret != b.objectives.ret) return a.objectives.ret > b.objectives.ret;
    return std::lexicographical_compare(a.portfolio.weights.data(), a.portfolio.weights.data() + a.portfolio.size(),
                                        b.portfolio.weights.data(), b.portfolio.weights.data() + b.portfolio.size());
}

// Distances closer than this are treated as ties.
constexpr double kDistanceTieTolerance = 1e-12;

template <typename Key>
std::size_t argmin_by(const std::vector<ArchiveEntry>& entries, Key key) {
    std::size_t best = 0;
    for (std::size_t i = 1; i < entries.size(); ++i) {
        const double ki = key(entries[i]);
        const double kb = key(entries[best]);
        if (ki < kb || (ki == kb && tie_break_less(entries[i], entries[best]))) best = i;
    }
    return best;
}

}  // namespace

Representatives representatives(const RegionOfInterest& region) {
    if (region.empty()) throw std::invalid_argument("representatives: empty region of interest");
    const auto& es = region.entries;

    const auto i_var = argmin_by(es, [](const ArchiveEntry& e) { return e.objectives.risk; });
    const auto i_emi = argmin_by(es, [](const ArchiveEntry& e) { return e.objectives.carbon; });
    const auto i_ret = argmin_by(es, [](const ArchiveEntry& e) { return -e.objectives.ret; });

    Vec3 ideal = es.front().minimized;
    Vec3 nadir = es.front().minimized;
    for (const auto& e : es) {
        for (std::size_t k = 0; k < kNumObjectives; ++k) {
            ideal[k] = std::min(ideal[k], e.minimized[k]);
            nadir[k] = std::max(nadir[k], e.minimized[k]);
        }
    }
    auto chebyshev = [&](const ArchiveEntry& e) {
        double d = 0.0;
        for (std::size_t k = 0; k < kNumObjectives; ++k) {
            const double range = nadir[k] - ideal[k];
            if (range > 0.0) d = std::max(d, (e.minimized[k] - ideal[k]) / range);
        }
        return d;
    };
    std::size_t i_opt = 0;
    double d_opt = chebyshev(es[0]);
    for (std::size_t i = 1; i < es.size(); ++i) {
        const double d = chebyshev(es[i]);
        if (d < d_opt - kDistanceTieTolerance ||
            (std::abs(d - d_opt) <= kDistanceTieTolerance && tie_break_less(es[i], es[i_opt]))) {
            i_opt = i;
            d_opt = d;
        }
    }

    auto id_of = [&](std::size_t i) { return region.ids.empty() ? i : region.ids[i]; };
    return Representatives{es[i_opt], es[i_var], es[i_emi], es[i_ret], id_of(i_opt), id_of(i_var), id_of(i_emi), id_of(i_ret)};
}

}  // namespace evmoga
