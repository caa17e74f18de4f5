#pragma once

#include "evmoga/market_data.hpp"

#include <Eigen/Dense>

#include <random>

namespace evmoga {

using Rng = std::mt19937_64;

/// Per-asset weight bounds. Long-only [0, 1] unless configured otherwise.
struct Bounds {
    Eigen::VectorXd lower;
    Eigen::VectorXd upper;

    static Bounds uniform(Eigen::Index n, double lo = 0.0, double hi = 1.0);

    Eigen::Index size() const { return lower.size(); }

    /// Throws std::invalid_argument unless 0 <= lower <= upper <= 1 and
    /// sum(lower) <= 1 <= sum(upper).
    void validate() const;
};

struct Portfolio {
    Eigen::VectorXd weights;

    Eigen::Index size() const { return weights.size(); }
    bool operator==(const Portfolio& other) const { return weights == other.weights; }
};

/// Image of a portfolio: variance (percent^2), expected return (percent) and
/// weighted carbon score.
struct ObjectiveVector {
    double risk = 0.0;
    double ret = 0.0;
    double carbon = 0.0;

    bool operator==(const ObjectiveVector&) const = default;
};

inline constexpr double kSumTolerance = 1e-9;
inline constexpr double kBoundTolerance = 1e-12;

bool is_feasible(const Eigen::VectorXd& weights, const Bounds& bounds, double sum_tol = kSumTolerance,
                 double bound_tol = kBoundTolerance);

/// risk = w' Sigma w, ret = w' mu, carbon = w' c.
ObjectiveVector evaluate(const Portfolio& p, const AssetUniverse& universe);

/// Clips `raw` to the bounds and redistributes the residual of (1 - sum)
/// proportionally over the coordinates that can still move, iterating until
/// the sum is one. Feasible input comes back unchanged.
Portfolio repair(const Eigen::VectorXd& raw, const Bounds& bounds);

/// Uniform draw on the simplex (flat Dirichlet), shifted onto the lower
/// bounds and repaired against the upper bounds.
Portfolio random_portfolio(const Bounds& bounds, Rng& rng);

}  // namespace evmoga
