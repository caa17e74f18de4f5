#include "evmoga/hypervolume.hpp"

#include <algorithm>
#include <iterator>
#include <map>
#include <vector>

namespace evmoga {

namespace {

// Non-dominated 2-D staircase: x ascending, y strictly descending. Tracks
// the area it dominates inside [.., rx] x [.., ry].
class Staircase {
public:
    Staircase(double rx, double ry) : rx_(rx), ry_(ry) {}

    void insert(double x, double y) {
        auto it = steps_.upper_bound(x);
        if (it != steps_.begin() && std::prev(it)->second <= y) return;  // dominated

        auto first = steps_.lower_bound(x);
        const bool has_pred = first != steps_.begin();
        const auto pred = has_pred ? std::prev(first) : steps_.end();
        // The predecessor's right edge moves to x; re-add it afterwards.
        if (has_pred) area_ -= contribution(pred);
        while (first != steps_.end() && first->second >= y) {
            area_ -= contribution(first);
            first = steps_.erase(first);
        }
        auto pos = steps_.emplace(x, y).first;
        area_ += contribution(pos);
        if (has_pred) area_ += contribution(pred);
    }

    double area() const { return area_; }

private:
    double contribution(std::map<double, double>::iterator it) const {
        auto nx = std::next(it);
        const double right = nx == steps_.end() ? rx_ : nx->first;
        return (right - it->first) * (ry_ - it->second);
    }

    double rx_;
    double ry_;
    std::map<double, double> steps_;
    double area_ = 0.0;
};

}  // namespace

double hypervolume(std::span<const Vec3> points, const Vec3& ref) {
    std::vector<Vec3> pts;
    pts.reserve(points.size());
    for (const auto& p : points)
        if (p[0] < ref[0] && p[1] < ref[1] && p[2] < ref[2]) pts.push_back(p);
    if (pts.empty()) return 0.0;
    std::sort(pts.begin(), pts.end(), [](const Vec3& a, const Vec3& b) { return a[2] < b[2]; });

    Staircase stairs(ref[0], ref[1]);
    double volume = 0.0;
    for (std::size_t i = 0; i < pts.size(); ++i) {
        stairs.insert(pts[i][0], pts[i][1]);
        const double next_z = i + 1 < pts.size() ? pts[i + 1][2] : ref[2];
        volume += stairs.area() * (next_z - pts[i][2]);
    }
    return volume;
}

double hypervolume(const EpsArchive& archive, const Vec3& reference) {
    std::vector<Vec3> pts;
    pts.reserve(archive.size());
    for (const auto& e : archive.entries()) pts.push_back(e.minimized);
    return hypervolume(pts, reference);
}

}  // namespace evmoga
