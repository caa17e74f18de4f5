#include "evmoga/epsilon_archive.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

namespace evmoga {

Vec3 to_minimized(const ObjectiveVector& f) { return {f.risk, -f.ret, f.carbon}; }

ObjectiveVector from_minimized(const Vec3& g) { return {g[0], -g[1], g[2]}; }

bool dominates(const Vec3& a, const Vec3& b) {
    bool strict = false;
    for (std::size_t i = 0; i < kNumObjectives; ++i) {
        if (a[i] > b[i]) return false;
        if (a[i] < b[i]) strict = true;
    }
    return strict;
}

bool weakly_dominates(const Vec3& a, const Vec3& b) {
    for (std::size_t i = 0; i < kNumObjectives; ++i)
        if (a[i] > b[i]) return false;
    return true;
}

bool eps_dominates(const Vec3& a, const Vec3& b, double eps) {
    if (!(eps > 0.0)) throw std::domain_error("eps_dominates: eps must be positive");
    for (std::size_t i = 0; i < kNumObjectives; ++i) {
        if (!(a[i] > 0.0) || !(b[i] > 0.0))
            throw std::domain_error("eps_dominates: objective vectors must be strictly positive");
    }
    for (std::size_t i = 0; i < kNumObjectives; ++i)
        if ((1.0 + eps) * a[i] > b[i]) return false;
    return true;
}

bool box_dominates(const BoxIndex& a, const BoxIndex& b) {
    bool strict = false;
    for (std::size_t i = 0; i < kNumObjectives; ++i) {
        if (a[i] > b[i]) return false;
        if (a[i] < b[i]) strict = true;
    }
    return strict;
}

Grid Grid::at(const Vec3& g, int n_box) {
    if (n_box < 1) throw std::invalid_argument("grid: n_box must be positive");
    Grid grid;
    grid.f_min = g;
    grid.f_max = g;
    grid.n_box = n_box;
    grid.recompute_eps();
    return grid;
}

void Grid::recompute_eps() {
    for (std::size_t i = 0; i < kNumObjectives; ++i)
        eps[i] = std::max((f_max[i] - f_min[i]) / static_cast<double>(n_box), kEpsFloor);
}

bool Grid::contains(const Vec3& g) const {
    for (std::size_t i = 0; i < kNumObjectives; ++i)
        if (g[i] < f_min[i] || g[i] > f_max[i]) return false;
    return true;
}

double Grid::center_distance(const Vec3& g, const BoxIndex& box) const {
    double sq = 0.0;
    for (std::size_t i = 0; i < kNumObjectives; ++i) {
        const double d = (g[i] - f_min[i]) / eps[i] - (static_cast<double>(box[i]) + 0.5);
        sq += d * d;
    }
    return std::sqrt(sq);
}

BoxIndex box_index(const Vec3& g, const Grid& grid) {
    BoxIndex idx{};
    const auto top = static_cast<std::int64_t>(grid.n_box) - 1;
    for (std::size_t i = 0; i < kNumObjectives; ++i) {
        const double pos = std::floor((g[i] - grid.f_min[i]) / grid.eps[i]);
        if (pos <= 0.0)
            idx[i] = 0;
        else if (pos >= static_cast<double>(top))
            idx[i] = top;
        else
            idx[i] = static_cast<std::int64_t>(pos);
    }
    return idx;
}

ArchiveEntry ArchiveEntry::make(Portfolio p, const ObjectiveVector& f) {
    ArchiveEntry e;
    e.portfolio = std::move(p);
    e.objectives = f;
    e.minimized = to_minimized(f);
    return e;
}

EpsArchive::EpsArchive(int n_box) : n_box_(n_box) {
    if (n_box < 1) throw std::invalid_argument("archive: n_box must be positive");
}

EpsArchive EpsArchive::restore(const Grid& grid, std::vector<ArchiveEntry> entries) {
    EpsArchive arch(grid.n_box);
    arch.grid_ = grid;
    for (auto& e : entries) {
        e.minimized = to_minimized(e.objectives);
        if (!grid.contains(e.minimized)) throw std::invalid_argument("archive: stored entry lies outside the grid");
        e.box = box_index(e.minimized, grid);
    }
    arch.entries_ = std::move(entries);
    if (!arch.entries_.empty()) arch.recompute_anchors();
    auto problems = arch.check_invariants();
    if (!problems.empty()) throw std::invalid_argument("archive: " + problems.front());
    return arch;
}

bool EpsArchive::is_anchor(std::size_t index) const {
    if (entries_.empty()) return false;
    return std::find(anchors_.begin(), anchors_.end(), index) != anchors_.end();
}

std::array<std::size_t, kNumObjectives> EpsArchive::anchors_with(const Vec3& extra) const {
    // Ties keep the earliest stored entry; `extra` (reported as index size())
    // only takes a role by strict improvement.
    auto best = anchors_;
    for (std::size_t k = 0; k < kNumObjectives; ++k)
        if (extra[k] < entries_[best[k]].minimized[k]) best[k] = entries_.size();
    return best;
}

void EpsArchive::recompute_anchors() {
    for (std::size_t k = 0; k < kNumObjectives; ++k) {
        std::size_t arg = 0;
        for (std::size_t i = 1; i < entries_.size(); ++i)
            if (entries_[i].minimized[k] < entries_[arg].minimized[k]) arg = i;
        anchors_[k] = arg;
    }
}

void EpsArchive::erase_marked(const std::vector<bool>& drop) {
    std::size_t out = 0;
    for (std::size_t i = 0; i < entries_.size(); ++i) {
        if (drop[i]) continue;
        if (out != i) entries_[out] = std::move(entries_[i]);
        ++out;
    }
    entries_.resize(out);
}

bool EpsArchive::try_insert(ArchiveEntry c) {
    for (double v : c.minimized)
        if (!std::isfinite(v)) throw std::invalid_argument("archive: candidate objectives must be finite");

    if (entries_.empty()) {
        if (!grid_)
            grid_ = Grid::at(c.minimized, n_box_);
        else if (!grid_->contains(c.minimized))
            extend_grid(c.minimized);
        c.box = box_index(c.minimized, *grid_);
        entries_.push_back(std::move(c));
        anchors_ = {0, 0, 0};
        return true;
    }

    if (!grid_->contains(c.minimized)) {
        for (const auto& e : entries_)
            if (weakly_dominates(e.minimized, c.minimized)) return false;
        extend_grid(c.minimized);
    }
    c.box = box_index(c.minimized, *grid_);

    // A candidate that improves the best value of some objective is never
    // rejected on box dominance, so the anchors track the running optimum.
    bool improves_extreme = false;
    for (std::size_t k = 0; k < kNumObjectives; ++k)
        if (c.minimized[k] < entries_[anchors_[k]].minimized[k]) improves_extreme = true;

    std::size_t same = entries_.size();
    for (std::size_t i = 0; i < entries_.size(); ++i) {
        const auto& e = entries_[i];
        if (e.box == c.box) {
            same = i;
            continue;
        }
        if (!improves_extreme && box_dominates(e.box, c.box)) return false;
    }

    if (same != entries_.size()) {
        const auto& inc = entries_[same];
        if (weakly_dominates(inc.minimized, c.minimized)) return false;
        if (!dominates(c.minimized, inc.minimized)) {
            const auto roles = anchors_with(c.minimized);
            const bool inc_anchor = std::find(roles.begin(), roles.end(), same) != roles.end();
            const bool cand_anchor = std::find(roles.begin(), roles.end(), entries_.size()) != roles.end();
            if (inc_anchor && !cand_anchor) return false;
            if (inc_anchor == cand_anchor &&
                !(grid_->center_distance(c.minimized, c.box) < grid_->center_distance(inc.minimized, inc.box)))
                return false;
        }
    }

    // Accepted. Drop the same-box loser and everything c dominates, then the
    // non-anchor entries whose boxes c dominates.
    std::array<Vec3, kNumObjectives> old_anchors{};
    for (std::size_t k = 0; k < kNumObjectives; ++k) old_anchors[k] = entries_[anchors_[k]].minimized;

    std::vector<bool> drop(entries_.size(), false);
    for (std::size_t i = 0; i < entries_.size(); ++i)
        drop[i] = (i == same) || dominates(c.minimized, entries_[i].minimized);
    erase_marked(drop);

    const BoxIndex cbox = c.box;
    entries_.push_back(std::move(c));
    recompute_anchors();
    drop.assign(entries_.size(), false);
    bool any = false;
    for (std::size_t i = 0; i + 1 < entries_.size(); ++i) {
        if (is_anchor(i)) continue;
        if (box_dominates(cbox, entries_[i].box)) {
            drop[i] = true;
            any = true;
            continue;
        }
        // A former anchor that lost its role is no longer protected.
        if (std::find(old_anchors.begin(), old_anchors.end(), entries_[i].minimized) == old_anchors.end()) continue;
        for (std::size_t j = 0; j < entries_.size(); ++j) {
            if (j != i && box_dominates(entries_[j].box, entries_[i].box)) {
                drop[i] = true;
                any = true;
                break;
            }
        }
    }
    if (any) {
        erase_marked(drop);
        recompute_anchors();
    }
    return true;
}

void EpsArchive::extend_grid(const Vec3& g) {
    for (double v : g)
        if (!std::isfinite(v)) throw std::invalid_argument("archive: grid point must be finite");
    if (!grid_) {
        grid_ = Grid::at(g, n_box_);
        return;
    }
    if (grid_->contains(g)) return;

    for (std::size_t i = 0; i < kNumObjectives; ++i) {
        grid_->f_min[i] = std::min(grid_->f_min[i], g[i]);
        grid_->f_max[i] = std::max(grid_->f_max[i], g[i]);
    }
    grid_->recompute_eps();
    if (entries_.empty()) return;

    for (auto& e : entries_) e.box = box_index(e.minimized, *grid_);

    // Resolve boxes that now hold several entries: anchors first, then the
    // entry closest to the box center, then the earliest stored.
    const auto n = entries_.size();
    std::vector<std::size_t> order(n);
    for (std::size_t i = 0; i < n; ++i) order[i] = i;
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return entries_[a].box < entries_[b].box; });
    std::vector<bool> drop(n, false);
    for (std::size_t lo = 0; lo < n;) {
        std::size_t hi = lo + 1;
        while (hi < n && entries_[order[hi]].box == entries_[order[lo]].box) ++hi;
        if (hi - lo > 1) {
            std::size_t keep = order[lo];
            auto better = [&](std::size_t a, std::size_t b) {
                const bool aa = is_anchor(a);
                const bool ab = is_anchor(b);
                if (aa != ab) return aa;
                const double da = grid_->center_distance(entries_[a].minimized, entries_[a].box);
                const double db = grid_->center_distance(entries_[b].minimized, entries_[b].box);
                if (da != db) return da < db;
                return a < b;
            };
            for (std::size_t k = lo + 1; k < hi; ++k)
                if (better(order[k], keep)) keep = order[k];
            for (std::size_t k = lo; k < hi; ++k)
                if (order[k] != keep) drop[order[k]] = true;
        }
        lo = hi;
    }

    // Non-anchor entries whose box is dominated by a surviving box.
    for (std::size_t i = 0; i < n; ++i) {
        if (drop[i] || is_anchor(i)) continue;
        for (std::size_t j = 0; j < n; ++j) {
            if (j == i || drop[j]) continue;
            if (box_dominates(entries_[j].box, entries_[i].box)) {
                drop[i] = true;
                break;
            }
        }
    }
    // Box dominance is transitive, so a dominated entry marked above always
    // has an undominated (kept) dominator; removal order does not matter.
    erase_marked(drop);
    recompute_anchors();
}

std::vector<ArchiveEntry> EpsArchive::sorted_entries() const {
    std::vector<ArchiveEntry> out(entries_.begin(), entries_.end());
    std::sort(out.begin(), out.end(), [](const ArchiveEntry& a, const ArchiveEntry& b) { return a.box < b.box; });
    return out;
}

std::vector<std::string> EpsArchive::check_invariants() const {
    std::vector<std::string> problems;
    if (entries_.empty()) return problems;
    if (!grid_) {
        problems.emplace_back("non-empty archive without grid");
        return problems;
    }
    const auto& grid = *grid_;
    for (std::size_t i = 0; i < kNumObjectives; ++i) {
        if (grid.f_min[i] > grid.f_max[i]) problems.emplace_back("grid f_min > f_max");
        if (!(grid.eps[i] > 0.0)) problems.emplace_back("grid eps not positive");
    }
    const auto limit = static_cast<std::size_t>(grid.n_box) * static_cast<std::size_t>(grid.n_box);
    if (entries_.size() > limit) problems.emplace_back("more than n_box^2 entries");

    for (std::size_t i = 0; i < entries_.size(); ++i) {
        const auto& a = entries_[i];
        if (a.box != box_index(a.minimized, grid)) {
            std::ostringstream os;
            os << "entry " << i << " has a stale box index";
            problems.push_back(os.str());
        }
        if (!grid.contains(a.minimized)) {
            std::ostringstream os;
            os << "entry " << i << " lies outside the grid";
            problems.push_back(os.str());
        }
        for (std::size_t j = i + 1; j < entries_.size(); ++j) {
            const auto& b = entries_[j];
            if (a.box == b.box) {
                std::ostringstream os;
                os << "entries " << i << " and " << j << " share a box";
                problems.push_back(os.str());
            }
            if ((!is_anchor(j) && box_dominates(a.box, b.box)) || (!is_anchor(i) && box_dominates(b.box, a.box))) {
                std::ostringstream os;
                os << "entries " << i << " and " << j << " are box-comparable";
                problems.push_back(os.str());
            }
            if (dominates(a.minimized, b.minimized) || dominates(b.minimized, a.minimized)) {
                std::ostringstream os;
                os << "entries " << i << " and " << j << " are Pareto-comparable";
                problems.push_back(os.str());
            }
        }
    }
    for (std::size_t k = 0; k < kNumObjectives; ++k) {
        if (anchors_[k] >= entries_.size()) {
            problems.emplace_back("anchor index out of range");
            continue;
        }
        double lo = entries_.front().minimized[k];
        for (const auto& e : entries_) lo = std::min(lo, e.minimized[k]);
        if (entries_[anchors_[k]].minimized[k] != lo) {
            std::ostringstream os;
            os << "anchor of objective " << k << " is not the minimum";
            problems.push_back(os.str());
        }
    }
    return problems;
}

}  // namespace evmoga
