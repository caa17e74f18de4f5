#pragma once

// Box-grid archive of mutually non-dominated solutions.
//
// Objective space (risk, -return, carbon), all minimized, is cut into
// n_box boxes per axis between the observed minima and maxima. The archive
// keeps at most one solution per box and no solution whose box is dominated
// by another stored box. The per-axis best solutions ("anchors") are kept
// when boxes merge after the grid widens.

#include "evmoga/portfolio.hpp"

#include <array>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace evmoga {

inline constexpr std::size_t kNumObjectives = 3;
using Vec3 = std::array<double, kNumObjectives>;
using BoxIndex = std::array<std::int64_t, kNumObjectives>;

/// Box width used on axes whose observed range is (numerically) zero.
inline constexpr double kEpsFloor = 1e-12;

/// (risk, -ret, carbon): every coordinate is minimized.
Vec3 to_minimized(const ObjectiveVector& f);
ObjectiveVector from_minimized(const Vec3& g);

/// Pareto dominance: a <= b componentwise, strictly in at least one axis.
bool dominates(const Vec3& a, const Vec3& b);
/// a <= b componentwise (includes equality).
bool weakly_dominates(const Vec3& a, const Vec3& b);

/// Multiplicative epsilon-dominance, (1 + eps) * a_i <= b_i for every axis.
/// Only defined for strictly positive vectors; throws std::domain_error
/// otherwise. The archive itself works on additive grid boxes.
bool eps_dominates(const Vec3& a, const Vec3& b, double eps);

bool box_dominates(const BoxIndex& a, const BoxIndex& b);

struct Grid {
    Vec3 f_min{};
    Vec3 f_max{};
    int n_box = 1;
    Vec3 eps{kEpsFloor, kEpsFloor, kEpsFloor};

    /// Degenerate grid holding the single point `g`.
    static Grid at(const Vec3& g, int n_box);

    /// eps_i = (f_max_i - f_min_i) / n_box, floored at kEpsFloor.
    void recompute_eps();
    bool contains(const Vec3& g) const;
    /// Distance from `g` to the center of `box`, measured in box widths.
    double center_distance(const Vec3& g, const BoxIndex& box) const;

    bool operator==(const Grid&) const = default;
};

/// floor((g_i - f_min_i) / eps_i), clamped to [0, n_box - 1].
BoxIndex box_index(const Vec3& g, const Grid& grid);

struct ArchiveEntry {
    Portfolio portfolio;
    ObjectiveVector objectives;
    Vec3 minimized{};
    BoxIndex box{};

    static ArchiveEntry make(Portfolio p, const ObjectiveVector& f);
};

class EpsArchive {
public:
    explicit EpsArchive(int n_box);

    /// Rebuilds an archive from stored entries (e.g. a front file). Boxes are
    /// recomputed under `grid`; throws std::invalid_argument if the entries
    /// violate the archive invariants.
    static EpsArchive restore(const Grid& grid, std::vector<ArchiveEntry> entries);

    /// Offers a candidate. Returns true if it was stored. The grid is widened
    /// first when a candidate outside it is not dominated by a stored entry.
    bool try_insert(ArchiveEntry candidate);

    /// Widens the grid to cover `g` and re-buckets the stored entries. No-op
    /// when `g` is already covered. Never shrinks.
    void extend_grid(const Vec3& g);

    int n_box() const { return n_box_; }
    bool has_grid() const { return grid_.has_value(); }
    /// Precondition: has_grid().
    const Grid& grid() const { return *grid_; }

    bool empty() const { return entries_.empty(); }
    std::size_t size() const { return entries_.size(); }
    /// Storage order (insertion history dependent).
    std::span<const ArchiveEntry> entries() const { return entries_; }
    /// Entries sorted by box index; the order used for export and entry ids.
    std::vector<ArchiveEntry> sorted_entries() const;

    /// Index into entries() of the minimizer of each minimized objective.
    /// Precondition: !empty().
    const std::array<std::size_t, kNumObjectives>& anchor_indices() const { return anchors_; }
    const ArchiveEntry& anchor(std::size_t axis) const { return entries_[anchors_[axis]]; }
    bool is_anchor(std::size_t index) const;

    /// Empty when every archive invariant holds; otherwise one message per
    /// violation. O(n^2).
    std::vector<std::string> check_invariants() const;

private:
    void recompute_anchors();
    std::array<std::size_t, kNumObjectives> anchors_with(const Vec3& extra) const;
    void erase_marked(const std::vector<bool>& drop);

    int n_box_;
    std::optional<Grid> grid_;
    std::vector<ArchiveEntry> entries_;
    std::array<std::size_t, kNumObjectives> anchors_{};
};

}  // namespace evmoga
