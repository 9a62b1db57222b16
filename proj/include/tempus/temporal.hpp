/*
 * temporal.hpp — uniform time grids, temporal probability densities, and
 * density moments.
 *
 * A TemporalDistribution holds samples Pi(t_k) >= 0 of a clock or arrival
 * density on a uniform window. Integrals are trapezoid sums; the window is
 * adequate when it holds the required fraction of the unit mass, and every
 * moment is taken with respect to the held mass.
 */
#pragma once

#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "errors.hpp"

namespace tempus {

enum class TimeKind { clock, arrival };

class TemporalGrid {
  public:
    TemporalGrid(double t_min, double dt, std::size_t n) : t_min_(t_min), dt_(dt), n_(n) {
        if (!(dt_ > 0.0)) throw std::invalid_argument("TemporalGrid: dt must be > 0");
        if (n_ < 2) throw std::invalid_argument("TemporalGrid: need >= 2 samples");
    }

    std::size_t size() const { return n_; }
    double dt() const { return dt_; }
    double t_min() const { return t_min_; }
    double t_max() const { return t_min_ + dt_ * static_cast<double>(n_ - 1); }
    double node(std::size_t k) const { return t_min_ + dt_ * static_cast<double>(k); }

  private:
    double t_min_, dt_;
    std::size_t n_;
};

// Window [t_min, t_max] sampled at spacing dt (t_max rounded to the grid).
inline TemporalGrid make_time_window(double t_min, double t_max, double dt) {
    if (!(t_max > t_min)) throw std::invalid_argument("make_time_window: empty window");
    const auto n = static_cast<std::size_t>(std::llround((t_max - t_min) / dt)) + 1;
    return TemporalGrid(t_min, dt, n < 2 ? 2 : n);
}

class TemporalDistribution {
  public:
    TemporalDistribution(TemporalGrid grid, std::vector<double> density, TimeKind kind)
        : grid_(std::move(grid)), density_(std::move(density)), kind_(kind) {
        if (density_.size() != grid_.size())
            throw std::invalid_argument("TemporalDistribution: density size != grid size");
        for (double p : density_)
            if (!(p >= 0.0))
                throw std::invalid_argument("TemporalDistribution: negative or non-finite density");
        mass_ = 0.0;
        for (std::size_t k = 0; k + 1 < density_.size(); ++k)
            mass_ += 0.5 * grid_.dt() * (density_[k] + density_[k + 1]);
        if (mass_ > 1.0 + 1e-6)
            throw std::invalid_argument("TemporalDistribution: window mass " +
                                        std::to_string(mass_) + " exceeds 1");
    }

    const TemporalGrid& grid() const { return grid_; }
    const std::vector<double>& density() const { return density_; }
    TimeKind kind() const { return kind_; }
    double mass() const { return mass_; }

    // Trapezoid cumulative from the left edge; back() equals mass().
    std::vector<double> cumulative() const {
        std::vector<double> c(density_.size(), 0.0);
        for (std::size_t k = 1; k < density_.size(); ++k)
            c[k] = c[k - 1] + 0.5 * grid_.dt() * (density_[k - 1] + density_[k]);
        return c;
    }

    // Time at which the cumulative reaches fraction q of the held mass.
    double quantile(double q) const {
        if (!(q > 0.0) || !(q < 1.0))
            throw std::invalid_argument("TemporalDistribution::quantile: need 0 < q < 1");
        const double target = q * mass_;
        const auto cum = cumulative();
        for (std::size_t k = 1; k < cum.size(); ++k) {
            if (cum[k] >= target) {
                const double seg = cum[k] - cum[k - 1];
                const double f = seg > 0.0 ? (target - cum[k - 1]) / seg : 0.0;
                return grid_.node(k - 1) + f * grid_.dt();
            }
        }
        return grid_.t_max();
    }

  private:
    TemporalGrid grid_;
    std::vector<double> density_;
    TimeKind kind_;
    double mass_;
};

// ── moments ──────────────────────────────────────────────────────────────

enum class MomentSource { spectral, distribution };

struct MomentReport {
    double mean;           // first moment, units of time
    double second_moment;  // units of time^2
    double variance;       // second_moment - mean^2
    MomentSource source;
};

// Trapezoid moments of the window, normalized by the held mass. Throws when
// the window holds less than min_mass of the distribution.
inline MomentReport moments_distribution(const TemporalDistribution& dist,
                                         double min_mass = 0.999) {
    if (dist.mass() < min_mass)
        throw WindowMassError("moments_distribution: window holds " +
                              std::to_string(dist.mass()) + " < " + std::to_string(min_mass));
    const auto& p = dist.density();
    const double dt = dist.grid().dt();
    double m1 = 0.0, m2 = 0.0;
    for (std::size_t k = 0; k + 1 < p.size(); ++k) {
        const double ta = dist.grid().node(k), tb = dist.grid().node(k + 1);
        m1 += 0.5 * dt * (ta * p[k] + tb * p[k + 1]);
        m2 += 0.5 * dt * (ta * ta * p[k] + tb * tb * p[k + 1]);
    }
    m1 /= dist.mass();
    m2 /= dist.mass();
    return {m1, m2, m2 - m1 * m1, MomentSource::distribution};
}

}  // namespace tempus
