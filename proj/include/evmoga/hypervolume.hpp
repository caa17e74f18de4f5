#pragma once

#include "evmoga/epsilon_archive.hpp"

#include <span>

namespace evmoga {

/// Volume of the region weakly dominated by `points` and bounded above by
/// `reference` (all objectives minimized). Points that do not strictly
/// dominate the reference on every axis contribute nothing.
/// Sweep over the third axis with an incremental 2-D staircase, O(n log n).
double hypervolume(std::span<const Vec3> points, const Vec3& reference);

/// Hypervolume of the archive's minimized vectors.
double hypervolume(const EpsArchive& archive, const Vec3& reference);

}  // namespace evmoga
