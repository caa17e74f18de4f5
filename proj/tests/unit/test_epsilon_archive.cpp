#include "evmoga/epsilon_archive.hpp"

#include <doctest.h>

#include <algorithm>
#include <random>

using namespace evmoga;

namespace {

// Entry whose minimized vector is exactly g (ret is stored negated).
ArchiveEntry point(double risk, double neg_ret, double carbon) {
    return ArchiveEntry::make(Portfolio{Eigen::VectorXd::Ones(1)}, from_minimized({risk, neg_ret, carbon}));
}

bool holds(const EpsArchive& a, const Vec3& g) {
    return std::any_of(a.entries().begin(), a.entries().end(), [&](const ArchiveEntry& e) { return e.minimized == g; });
}

}  // namespace

TEST_CASE("dominance relations") {
    CHECK(dominates({1, 2, 3}, {1, 2, 4}));
    CHECK_FALSE(dominates({1, 2, 3}, {1, 2, 3}));
    CHECK_FALSE(dominates({1, 2, 5}, {2, 3, 4}));
    CHECK(weakly_dominates({1, 2, 3}, {1, 2, 3}));
    CHECK_FALSE(weakly_dominates({1, 2, 3.5}, {1, 2, 3}));
    CHECK(box_dominates({0, 1, 1}, {0, 1, 2}));
    CHECK_FALSE(box_dominates({0, 1, 1}, {0, 1, 1}));
}

TEST_CASE("multiplicative epsilon dominance") {
    CHECK(eps_dominates({1, 1, 1}, {1.2, 1.2, 1.2}, 0.1));
    CHECK_FALSE(eps_dominates({2, 3, 4}, {2.3, 3.2, 4.5}, 0.1));
    CHECK(eps_dominates({2, 3, 4}, {2.3, 3.31, 4.5}, 0.1));
    CHECK_THROWS_AS((void)eps_dominates({0, 1, 1}, {1, 1, 1}, 0.1), std::domain_error);
    CHECK_THROWS_AS((void)eps_dominates({1, 1, 1}, {1, -1, 1}, 0.1), std::domain_error);
    CHECK_THROWS_AS((void)eps_dominates({1, 1, 1}, {2, 2, 2}, 0.0), std::domain_error);
}

TEST_CASE("box_index") {
    Grid g;
    g.f_min = {0, 0, 0};
    g.f_max = {10, 10, 10};
    g.n_box = 10;
    g.recompute_eps();
    CHECK(g.eps == Vec3{1, 1, 1});
    CHECK(box_index({2.5, 3.0, 9.99}, g) == BoxIndex{2, 3, 9});
    CHECK(box_index({0, 0, 0}, g) == BoxIndex{0, 0, 0});
    CHECK(box_index({10, 10, 10}, g) == BoxIndex{9, 9, 9});
    CHECK(box_index({-1, 5, 11}, g) == BoxIndex{0, 5, 9});

    const auto d = Grid::at({1, 2, 3}, 50);
    CHECK(d.eps == Vec3{kEpsFloor, kEpsFloor, kEpsFloor});
    CHECK(box_index({1, 2, 3}, d) == BoxIndex{0, 0, 0});
}

TEST_CASE("first insertion and duplicates") {
    EpsArchive a(5);
    CHECK(a.try_insert(point(1, -2, 3)));
    CHECK(a.size() == 1);
    CHECK(a.grid().f_min == Vec3{1, -2, 3});
    CHECK(a.grid().f_max == Vec3{1, -2, 3});
    CHECK_FALSE(a.try_insert(point(1, -2, 3)));
    CHECK(a.size() == 1);
    CHECK_FALSE(a.try_insert(point(2, -1, 4)));
    CHECK(a.check_invariants().empty());
}

TEST_CASE("insertion rules step by step") {
    EpsArchive a(4);

    REQUIRE(a.try_insert(point(0, 0, 4)));

    // Outside the grid and not dominated: the grid widens to [0,4] x {0} x [0,4].
    REQUIRE(a.try_insert(point(4, 0, 0)));
    CHECK(a.grid().eps[0] == 1.0);
    CHECK(a.grid().eps[1] == kEpsFloor);
    CHECK(a.grid().eps[2] == 1.0);
    CHECK(a.entries()[0].box == BoxIndex{0, 0, 3});
    CHECK(a.entries()[1].box == BoxIndex{3, 0, 0});

    REQUIRE(a.try_insert(point(2, 0, 2)));
    CHECK(a.size() == 3);

    // Same box as (2,0,2), which dominates it.
    CHECK_FALSE(a.try_insert(point(2.5, 0, 2.5)));
    CHECK(a.size() == 3);

    // Box (1,0,1) dominates box (2,0,2); the dominated entry goes.
    REQUIRE(a.try_insert(point(1, 0, 1)));
    CHECK(a.size() == 3);
    CHECK_FALSE(holds(a, {2, 0, 2}));
    CHECK(holds(a, {1, 0, 1}));

    // Same box as (0,0,4) and dominates it: replaces it.
    REQUIRE(a.try_insert(point(0, 0, 3.5)));
    CHECK(a.size() == 3);
    CHECK_FALSE(holds(a, {0, 0, 4}));
    CHECK(a.anchor(0).minimized == Vec3{0, 0, 3.5});
    CHECK(a.anchor(2).minimized == Vec3{4, 0, 0});

    // Box dominated by (1,0,1)'s box.
    CHECK_FALSE(a.try_insert(point(2.2, 0, 1.8)));
    CHECK(a.check_invariants().empty());
}

TEST_CASE("same-box contest goes to the point nearer the box center") {
    EpsArchive a(2);
    REQUIRE(a.try_insert(point(0, 0, 4)));
    REQUIRE(a.try_insert(point(4, 0, 0)));
    // eps = 2. (3.9,0,0.1) is not dominated but lands in the box of the
    // carbon anchor (4,0,0), which keeps it.
    REQUIRE_FALSE(a.try_insert(point(3.9, 0, 0.1)));
    CHECK(a.size() == 2);

    EpsArchive b(4);
    REQUIRE(b.try_insert(point(0, 0, 8)));
    REQUIRE(b.try_insert(point(8, 0, 0)));
    // eps = 2. Box (1,0,1) spans [2,4) x [2,4).
    REQUIRE(b.try_insert(point(2.1, 0, 3.9)));
    // Nearer the center (3, 3): wins.
    REQUIRE(b.try_insert(point(3.0, 0, 3.1)));
    CHECK_FALSE(holds(b, {2.1, 0, 3.9}));
    // Farther from the center: loses.
    CHECK_FALSE(b.try_insert(point(2.05, 0, 3.99)));
    CHECK(holds(b, {3.0, 0, 3.1}));
    CHECK(b.check_invariants().empty());
}

TEST_CASE("extend_grid widens and never shrinks") {
    EpsArchive a(4);
    REQUIRE(a.try_insert(point(0, 0, 4)));
    REQUIRE(a.try_insert(point(4, 0, 0)));
    a.extend_grid({8, 0, 0});
    CHECK(a.grid().f_max == Vec3{8, 0, 4});
    CHECK(a.grid().eps == Vec3{2.0, kEpsFloor, 1.0});
    CHECK(a.entries()[1].box == BoxIndex{2, 0, 0});

    const Grid before = a.grid();
    a.extend_grid({1, 0, 1});
    CHECK(a.grid() == before);
    CHECK(a.check_invariants().empty());
}

TEST_CASE("anchors survive box merges") {
    EpsArchive a(3);
    REQUIRE(a.try_insert(point(0, 0, 3)));
    REQUIRE(a.try_insert(point(3, 0, 0)));
    // Its box (0,0,1) dominates (0,0,2), but (0,0,3) is the risk anchor.
    REQUIRE(a.try_insert(point(0.9, 0, 1.9)));
    CHECK(a.size() == 3);
    CHECK(a.check_invariants().empty());

    // eps_carbon becomes 4 and (0,0,3) shares box (0,0,0) with the point
    // nearer the center; the anchor is kept.
    a.extend_grid({0, 0, 12});
    CHECK(a.size() == 2);
    CHECK(holds(a, {0, 0, 3}));
    CHECK(holds(a, {3, 0, 0}));
    CHECK_FALSE(holds(a, {0.9, 0, 1.9}));
    CHECK(a.check_invariants().empty());
}

TEST_CASE("dominated candidates outside the grid do not widen it") {
    EpsArchive a(10);
    REQUIRE(a.try_insert(point(1, 1, 1)));
    REQUIRE(a.try_insert(point(2, 0, 2)));
    const Grid before = a.grid();
    CHECK_FALSE(a.try_insert(point(5, 5, 5)));
    CHECK(a.grid() == before);
}

TEST_CASE("random insertion streams keep the invariants") {
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int run = 0; run < 20; ++run) {
        EpsArchive a(5 + run);
        for (int k = 0; k < 500; ++k) {
            const double x = u(rng);
            const double y = u(rng);
            const double s = 1.0 + 3.0 * (k < 50 ? u(rng) : 0.0);
            a.try_insert(point(s * x, s * (1.0 - x) * y, s * (1.0 - x) * (1.0 - y) + 0.1 * u(rng)));
            if (k % 7 == 0) a.extend_grid({3.0 * u(rng), 3.0 * u(rng), 5.0 * u(rng)});
        }
        const auto problems = a.check_invariants();
        INFO(run);
        CHECK(problems.empty());
        for (std::size_t k = 0; k < kNumObjectives; ++k) {
            for (const auto& e : a.entries()) CHECK(a.anchor(k).minimized[k] <= e.minimized[k]);
        }
    }
}

TEST_CASE("the best value per objective never gets worse") {
    std::mt19937_64 rng(5);
    std::normal_distribution<double> n(0.0, 1.0);
    EpsArchive a(20);
    Vec3 best{1e300, 1e300, 1e300};
    for (int k = 0; k < 3000; ++k) {
        const Vec3 g{n(rng), n(rng), n(rng)};
        a.try_insert(point(g[0], g[1], g[2]));
        for (std::size_t i = 0; i < kNumObjectives; ++i) {
            best[i] = std::min(best[i], g[i]);
            CHECK(a.anchor(i).minimized[i] == best[i]);
        }
    }
}

TEST_CASE("restore rejects inconsistent entries") {
    EpsArchive a(4);
    REQUIRE(a.try_insert(point(0, 0, 4)));
    REQUIRE(a.try_insert(point(4, 0, 0)));
    std::vector<ArchiveEntry> entries(a.entries().begin(), a.entries().end());
    CHECK(EpsArchive::restore(a.grid(), entries).size() == 2);
    entries.push_back(point(4, 0, 4));
    CHECK_THROWS_AS((void)EpsArchive::restore(a.grid(), entries), std::invalid_argument);
    entries.back() = point(9, 0, 0);
    CHECK_THROWS_AS((void)EpsArchive::restore(a.grid(), entries), std::invalid_argument);
}
