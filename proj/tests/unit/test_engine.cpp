#include "evmoga/engine.hpp"

#include "support/synthetic.hpp"

#include <doctest.h>

#include <cmath>

using namespace evmoga;

namespace {

Eigen::VectorXd clip_and_normalize(const Eigen::VectorXd& raw) {
    Eigen::VectorXd x = raw.cwiseMax(0.0).cwiseMin(1.0);
    const double s = x.sum();
    if (s == 0.0) return Eigen::VectorXd::Constant(raw.size(), 1.0 / static_cast<double>(raw.size()));
    return x / s;
}

EvMogaConfig small_config(std::uint64_t seed = 1) {
    EvMogaConfig c;
    c.nind_p = 60;
    c.nind_ga = 20;
    c.k_max = 150;
    c.n_box = 15;
    c.seed = seed;
    return c;
}

}  // namespace

TEST_CASE("recombine interpolates and extrapolates along the parent segment") {
    const auto b = Bounds::uniform(3);
    const Portfolio x1{Eigen::Vector3d(0.2, 0.3, 0.5)};
    const Portfolio x2{Eigen::Vector3d(0.6, 0.2, 0.2)};
    const auto [c0, c1] = recombine(x1, x2, 0.0, 1.0, b);
    CHECK(c0.weights == x1.weights);
    CHECK((c1.weights - x2.weights).cwiseAbs().maxCoeff() <= 1e-15);
    const auto [m, e] = recombine(x1, x2, 0.5, 1.25, b);
    CHECK((m.weights - Eigen::Vector3d(0.4, 0.25, 0.35)).cwiseAbs().maxCoeff() <= 1e-15);
    CHECK((e.weights - Eigen::Vector3d(0.7, 0.175, 0.125)).cwiseAbs().maxCoeff() <= 1e-15);
}

TEST_CASE("crossover replays from the same seed") {
    const auto b = Bounds::uniform(4);
    const Portfolio x1{Eigen::Vector4d(0.7, 0.1, 0.1, 0.1)};
    const Portfolio x2{Eigen::Vector4d(0.0, 0.0, 0.5, 0.5)};
    Rng rng(123);
    Rng replay(123);
    const double d = 0.25;
    for (int k = 0; k < 200; ++k) {
        const auto [c1, c2] = crossover(x1, x2, d, b, rng);
        std::uniform_real_distribution<double> alpha(-d, 1.0 + d);
        const double a1 = alpha(replay);
        const double a2 = alpha(replay);
        REQUIRE(a1 >= -d);
        REQUIRE(a2 <= 1.0 + d);
        const Eigen::VectorXd e1 = clip_and_normalize(x1.weights + a1 * (x2.weights - x1.weights));
        const Eigen::VectorXd e2 = clip_and_normalize(x1.weights + a2 * (x2.weights - x1.weights));
        CHECK((c1.weights - e1).cwiseAbs().maxCoeff() <= 1e-12);
        CHECK((c2.weights - e2).cwiseAbs().maxCoeff() <= 1e-12);
    }
}

TEST_CASE("mutate replays from the same seed") {
    const auto b = Bounds::uniform(5);
    const Portfolio x{Eigen::VectorXd::Constant(5, 0.2)};
    Rng rng(9);
    Rng replay(9);
    for (int k = 0; k < 200; ++k) {
        const auto y = mutate(x, 0.1, b, rng);
        std::normal_distribution<double> normal(0.0, 1.0);
        Eigen::VectorXd raw = x.weights;
        for (int i = 0; i < 5; ++i) raw(i) += 0.1 * normal(replay);
        CHECK((y.weights - clip_and_normalize(raw)).cwiseAbs().maxCoeff() <= 1e-12);
        CHECK(is_feasible(y.weights, b));
    }
}

TEST_CASE("config validation") {
    EvMogaConfig c;
    CHECK_NOTHROW(c.validate());
    c.nind_ga = 7;
    CHECK_THROWS_AS(c.validate(), std::invalid_argument);
    c = {};
    c.p_cm = 1.5;
    CHECK_THROWS_AS(c.validate(), std::invalid_argument);
    c = {};
    c.n_box = 0;
    CHECK_THROWS_AS(c.validate(), std::invalid_argument);
    c = {};
    c.nind_p = 0;
    CHECK_THROWS_AS(c.validate(), std::invalid_argument);
}

TEST_CASE("identical assets collapse to a single archive entry") {
    AssetUniverse u;
    u.asset_ids = {"A", "B", "C", "D"};
    u.mu = Eigen::Vector4d::Constant(0.8);
    u.sigma = Eigen::Matrix4d::Constant(3.0);
    u.carbon = Eigen::Vector4d::Constant(5.0);
    const auto r = run(u, Bounds::uniform(4), small_config());
    CHECK(r.archive.size() == 1);
    CHECK(r.archive.check_invariants().empty());
}

TEST_CASE("a run is deterministic for a seed") {
    const auto u = evmoga::testing::synthetic_universe(5, 60, 4);
    const auto a = run(u, Bounds::uniform(5), small_config(3));
    const auto b = run(u, Bounds::uniform(5), small_config(3));
    const auto ea = a.archive.sorted_entries();
    const auto eb = b.archive.sorted_entries();
    REQUIRE(ea.size() == eb.size());
    for (std::size_t i = 0; i < ea.size(); ++i) {
        CHECK(ea[i].portfolio == eb[i].portfolio);
        CHECK(ea[i].objectives == eb[i].objectives);
    }
    const auto c = run(u, Bounds::uniform(5), small_config(4));
    bool differs = c.archive.size() != a.archive.size();
    const auto ec = c.archive.sorted_entries();
    for (std::size_t i = 0; !differs && i < ec.size(); ++i) differs = !(ec[i].portfolio == ea[i].portfolio);
    CHECK(differs);
}

TEST_CASE("archive entries are feasible and evaluate to their stored objectives") {
    const auto u = evmoga::testing::synthetic_universe(6, 60, 8);
    Bounds b = Bounds::uniform(6, 0.02, 0.4);
    const auto r = run(u, b, small_config());
    REQUIRE_FALSE(r.archive.empty());
    for (const auto& e : r.archive.entries()) {
        CHECK(is_feasible(e.portfolio.weights, b));
        CHECK(evaluate(e.portfolio, u) == e.objectives);
    }
    CHECK(r.archive.check_invariants().empty());
}

TEST_CASE("evaluation count and checkpoints") {
    const auto u = evmoga::testing::synthetic_universe(4, 60, 1);
    auto cfg = small_config();
    cfg.checkpoint_every = 40;
    std::vector<long long> seen;
    const auto r = run(u, Bounds::uniform(4), cfg, [&](const Checkpoint& cp, const EpsArchive& a) {
        CHECK(cp.archive_size == a.size());
        seen.push_back(cp.iteration);
    });
    CHECK(r.iterations_done == cfg.k_max);
    CHECK(r.evaluations == cfg.nind_p + cfg.k_max * cfg.nind_ga);
    CHECK(seen == std::vector<long long>{40, 80, 120, 150});
    REQUIRE(r.checkpoints.size() == 4);
    for (std::size_t i = 1; i < r.checkpoints.size(); ++i)
        for (std::size_t k = 0; k < kNumObjectives; ++k)
            CHECK(r.checkpoints[i].anchors[k][k] <= r.checkpoints[i - 1].anchors[k][k]);
}

TEST_CASE("zero iterations keep only the initial population's archive") {
    const auto u = evmoga::testing::synthetic_universe(3, 60, 2);
    auto cfg = small_config();
    cfg.k_max = 0;
    const auto r = run(u, Bounds::uniform(3), cfg);
    CHECK(r.iterations_done == 0);
    CHECK(r.evaluations == cfg.nind_p);
    CHECK_FALSE(r.archive.empty());
}

TEST_CASE("equal carbon scores reduce to a two-objective front") {
    auto u = evmoga::testing::synthetic_universe(4, 80, 12);
    u.carbon = Eigen::VectorXd::Constant(4, 3.0);
    const auto r = run(u, Bounds::uniform(4), small_config(5));
    const auto es = r.archive.sorted_entries();
    REQUIRE(es.size() > 1);
    for (const auto& e : es) CHECK(e.objectives.carbon == 3.0);
    for (std::size_t i = 0; i < es.size(); ++i)
        for (std::size_t j = 0; j < es.size(); ++j) {
            if (i == j) continue;
            const bool dom2 = es[i].objectives.risk <= es[j].objectives.risk && es[i].objectives.ret >= es[j].objectives.ret &&
                              (es[i].objectives.risk < es[j].objectives.risk || es[i].objectives.ret > es[j].objectives.ret);
            CHECK_FALSE(dom2);
        }
}

TEST_CASE("run rejects mismatched bounds") {
    const auto u = evmoga::testing::synthetic_universe(3, 60, 2);
    CHECK_THROWS_AS((void)run(u, Bounds::uniform(4), small_config()), std::invalid_argument);
}
