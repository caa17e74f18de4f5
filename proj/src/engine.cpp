#include "evmoga/engine.hpp"

#include "evmoga/hypervolume.hpp"

#include <chrono>
#include <sstream>
#include <stdexcept>

namespace evmoga {

void EvMogaConfig::validate() const {
    auto fail = [](const std::string& msg) { throw std::invalid_argument("config: " + msg); };
    if (nind_p < 1) fail("nind_p must be >= 1");
    if (nind_ga < 2 || nind_ga % 2 != 0) fail("nind_ga must be a positive even number");
    if (k_max < 0) fail("k_max must be >= 0");
    if (!(p_cm >= 0.0 && p_cm <= 1.0)) fail("p_cm must lie in [0, 1]");
    if (n_box < 1) fail("n_box must be >= 1");
    if (!(recomb_extension >= 0.0)) fail("recomb_extension must be >= 0");
    if (!(mutation_scale > 0.0)) fail("mutation_scale must be > 0");
    if (checkpoint_every < 0) fail("checkpoint_every must be >= 0");
}

std::pair<Portfolio, Portfolio> recombine(const Portfolio& x1, const Portfolio& x2, double alpha1, double alpha2,
                                          const Bounds& bounds) {
    if (x1.size() != x2.size()) throw std::invalid_argument("recombine: parent dimensions differ");
    const Eigen::VectorXd diff = x2.weights - x1.weights;
    return {repair(x1.weights + alpha1 * diff, bounds), repair(x1.weights + alpha2 * diff, bounds)};
}

std::pair<Portfolio, Portfolio> crossover(const Portfolio& x1, const Portfolio& x2, double d, const Bounds& bounds,
                                          Rng& rng) {
    std::uniform_real_distribution<double> alpha(-d, 1.0 + d);
    const double a1 = alpha(rng);
    const double a2 = alpha(rng);
    return recombine(x1, x2, a1, a2, bounds);
}

Portfolio mutate(const Portfolio& x, double scale, const Bounds& bounds, Rng& rng) {
    std::normal_distribution<double> normal(0.0, 1.0);
    Eigen::VectorXd y = x.weights;
    for (Eigen::Index i = 0; i < y.size(); ++i) y(i) += scale * (bounds.upper(i) - bounds.lower(i)) * normal(rng);
    return repair(y, bounds);
}

Checkpoint summarize(const EpsArchive& archive, long long iteration) {
    Checkpoint cp;
    cp.iteration = iteration;
    cp.archive_size = archive.size();
    if (!archive.empty()) {
        for (std::size_t k = 0; k < kNumObjectives; ++k) cp.anchors[k] = archive.anchor(k).minimized;
        cp.hypervolume = hypervolume(archive, archive.grid().f_max);
    }
    return cp;
}

namespace {

ObjectiveVector evaluate_checked(const Portfolio& p, const AssetUniverse& u, long long iteration) {
    try {
        return evaluate(p, u);
    } catch (const std::runtime_error& e) {
        std::ostringstream os;
        os << "ev-MOGA aborted at iteration " << iteration << ": " << e.what();
        throw std::runtime_error(os.str());
    }
}

}  // namespace

RunResult run(const AssetUniverse& universe, const Bounds& bounds, const EvMogaConfig& config,
              const ProgressSink& progress) {
    config.validate();
    bounds.validate();
    if (static_cast<std::size_t>(bounds.size()) != universe.size())
        throw std::invalid_argument("run: bounds dimension does not match the instance");

    const auto start = std::chrono::steady_clock::now();
    Rng rng(config.seed);

    RunResult result{EpsArchive(config.n_box), 0, 0, {}, 0.0};
    auto& archive = result.archive;

    const auto pop_size = static_cast<std::size_t>(config.nind_p);
    std::vector<Portfolio> population;
    std::vector<Vec3> population_g;
    population.reserve(pop_size);
    population_g.reserve(pop_size);
    for (std::size_t i = 0; i < pop_size; ++i) {
        population.push_back(random_portfolio(bounds, rng));
        const auto f = evaluate_checked(population.back(), universe, 0);
        population_g.push_back(to_minimized(f));
        archive.try_insert(ArchiveEntry::make(population.back(), f));
    }
    result.evaluations = config.nind_p;

    std::uniform_int_distribution<std::size_t> pick_p(0, pop_size - 1);
    std::uniform_real_distribution<double> unit(0.0, 1.0);

    const auto pairs = static_cast<std::size_t>(config.nind_ga / 2);
    std::vector<Portfolio> children;
    std::vector<ObjectiveVector> child_f;
    std::vector<std::pair<std::size_t, std::size_t>> replacements;
    children.reserve(2 * pairs);
    child_f.reserve(2 * pairs);

    for (long long k = 0; k < config.k_max; ++k) {
        children.clear();
        for (std::size_t j = 0; j < pairs; ++j) {
            const Portfolio& xp = population[pick_p(rng)];
            const Portfolio* xa = nullptr;
            if (archive.empty()) {
                xa = &population[pick_p(rng)];
            } else {
                std::uniform_int_distribution<std::size_t> pick_a(0, archive.size() - 1);
                xa = &archive.entries()[pick_a(rng)].portfolio;
            }
            const double u = unit(rng);
            if (u > config.p_cm) {
                auto [c1, c2] = crossover(xp, *xa, config.recomb_extension, bounds, rng);
                children.push_back(std::move(c1));
                children.push_back(std::move(c2));
            } else {
                children.push_back(mutate(xp, config.mutation_scale, bounds, rng));
                children.push_back(mutate(*xa, config.mutation_scale, bounds, rng));
            }
        }

        child_f.clear();
        for (const auto& c : children) child_f.push_back(evaluate_checked(c, universe, k + 1));

        for (std::size_t i = 0; i < children.size(); ++i) archive.try_insert(ArchiveEntry::make(children[i], child_f[i]));

        // Every child is compared against a random member of the current
        // population; replacements are applied together afterwards.
        replacements.clear();
        for (std::size_t i = 0; i < children.size(); ++i) {
            const auto target = pick_p(rng);
            if (dominates(to_minimized(child_f[i]), population_g[target])) replacements.emplace_back(target, i);
        }
        for (const auto& [target, i] : replacements) {
            population[target] = children[i];
            population_g[target] = to_minimized(child_f[i]);
        }

        result.evaluations += config.nind_ga;
        result.iterations_done = k + 1;

        if (config.checkpoint_every > 0 &&
            (result.iterations_done % config.checkpoint_every == 0 || result.iterations_done == config.k_max)) {
            result.checkpoints.push_back(summarize(archive, result.iterations_done));
            if (progress) progress(result.checkpoints.back(), archive);
        }
    }

    result.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return result;
}

}  // namespace evmoga
