#include "evmoga/portfolio.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

namespace evmoga {

namespace {

// Tolerance under which repair treats the sum as exactly one.
constexpr double kRepairSumTolerance = 1e-13;

}  // namespace

Bounds Bounds::uniform(Eigen::Index n, double lo, double hi) {
    Bounds b;
    b.lower = Eigen::VectorXd::Constant(n, lo);
    b.upper = Eigen::VectorXd::Constant(n, hi);
    return b;
}

void Bounds::validate() const {
    if (lower.size() != upper.size() || lower.size() == 0)
        throw std::invalid_argument("bounds: lower and upper must be non-empty and of equal length");
    for (Eigen::Index i = 0; i < lower.size(); ++i) {
        if (!(lower(i) >= 0.0 && upper(i) <= 1.0 && lower(i) <= upper(i))) {
            std::ostringstream os;
            os << "bounds: asset " << i << " has invalid interval [" << lower(i) << ", " << upper(i) << "]";
            throw std::invalid_argument(os.str());
        }
    }
    if (lower.sum() > 1.0 + kBoundTolerance) throw std::invalid_argument("bounds: infeasible, sum of lower bounds > 1");
    if (upper.sum() < 1.0 - kBoundTolerance) throw std::invalid_argument("bounds: infeasible, sum of upper bounds < 1");
}

bool is_feasible(const Eigen::VectorXd& w, const Bounds& b, double sum_tol, double bound_tol) {
    if (w.size() != b.size() || !w.allFinite()) return false;
    if (std::abs(w.sum() - 1.0) > sum_tol) return false;
    for (Eigen::Index i = 0; i < w.size(); ++i) {
        if (w(i) < b.lower(i) - bound_tol || w(i) > b.upper(i) + bound_tol) return false;
    }
    return true;
}

ObjectiveVector evaluate(const Portfolio& p, const AssetUniverse& u) {
    const auto n = static_cast<Eigen::Index>(u.size());
    if (p.size() != n) {
        std::ostringstream os;
        os << "evaluate: portfolio has " << p.size() << " weights, instance has " << n << " assets";
        throw std::invalid_argument(os.str());
    }
    const auto& w = p.weights;
    ObjectiveVector f;
    f.risk = w.dot(u.sigma * w);
    // Linear terms are centered on the first asset; with sum(w) = 1 this is
    // w'mu (resp. w'c) and assets with equal values evaluate exactly.
    const double mu0 = u.mu(0);
    const double c0 = u.carbon(0);
    double ret = 0.0;
    double carbon = 0.0;
    for (Eigen::Index i = 1; i < n; ++i) {
        ret += w(i) * (u.mu(i) - mu0);
        carbon += w(i) * (u.carbon(i) - c0);
    }
    f.ret = mu0 + ret;
    f.carbon = c0 + carbon;
    if (!std::isfinite(f.risk) || !std::isfinite(f.ret) || !std::isfinite(f.carbon))
        throw std::runtime_error("evaluate: non-finite objective value (corrupt instance?)");
    if (f.risk < 0.0) {
        // Quadratic-form rounding on a singular covariance.
        const double scale = u.sigma.cwiseAbs().maxCoeff();
        if (f.risk < -1e-12 * (1.0 + scale)) throw std::runtime_error("evaluate: negative variance (covariance not PSD)");
        f.risk = 0.0;
    }
    return f;
}

Portfolio repair(const Eigen::VectorXd& raw, const Bounds& b) {
    if (raw.size() != b.size()) throw std::invalid_argument("repair: dimension mismatch");
    if (!raw.allFinite()) throw std::invalid_argument("repair: non-finite weight");
    b.validate();

    if (is_feasible(raw, b, kRepairSumTolerance, 0.0)) return Portfolio{raw};

    const auto n = raw.size();
    Eigen::VectorXd x = raw.cwiseMax(b.lower).cwiseMin(b.upper);

    for (int iter = 0; iter < 4 * static_cast<int>(n) + 8; ++iter) {
        const double residual = 1.0 - x.sum();
        if (std::abs(residual) <= kRepairSumTolerance) break;
        if (residual < 0.0) {
            double excess = 0.0;
            for (Eigen::Index i = 0; i < n; ++i) excess += x(i) - b.lower(i);
            const double factor = 1.0 + residual / excess;
            for (Eigen::Index i = 0; i < n; ++i) x(i) = b.lower(i) + (x(i) - b.lower(i)) * factor;
        } else {
            double mass = 0.0;
            Eigen::Index free_count = 0;
            for (Eigen::Index i = 0; i < n; ++i) {
                if (x(i) < b.upper(i)) {
                    mass += x(i);
                    ++free_count;
                }
            }
            if (free_count == 0) break;  // unreachable for validated bounds
            if (mass > 0.0) {
                const double factor = 1.0 + residual / mass;
                for (Eigen::Index i = 0; i < n; ++i)
                    if (x(i) < b.upper(i)) x(i) *= factor;
            } else {
                const double share = residual / static_cast<double>(free_count);
                for (Eigen::Index i = 0; i < n; ++i)
                    if (x(i) < b.upper(i)) x(i) += share;
            }
        }
        x = x.cwiseMax(b.lower).cwiseMin(b.upper);
    }

    // Absorb the last few ulps of residual in the coordinate with most room.
    const double residual = 1.0 - x.sum();
    if (residual != 0.0) {
        Eigen::Index best = 0;
        double room = -1.0;
        for (Eigen::Index i = 0; i < n; ++i) {
            const double r = residual > 0.0 ? b.upper(i) - x(i) : x(i) - b.lower(i);
            if (r > room) {
                room = r;
                best = i;
            }
        }
        if (room >= std::abs(residual)) x(best) += residual;
    }
    if (!is_feasible(x, b)) throw std::runtime_error("repair: failed to reach a feasible portfolio");
    return Portfolio{x};
}

Portfolio random_portfolio(const Bounds& b, Rng& rng) {
    b.validate();
    const auto n = b.size();
    std::exponential_distribution<double> expo(1.0);
    Eigen::VectorXd draw(n);
    for (Eigen::Index i = 0; i < n; ++i) draw(i) = expo(rng);
    draw /= draw.sum();
    const double free_mass = 1.0 - b.lower.sum();
    return repair(b.lower + free_mass * draw, b);
}

}  // namespace evmoga
