/*
 * energy_grid.hpp — quadrature grids over a band [E_min, E_max] of a
 * continuous spectrum, hbar = m = 1.
 *
 * Two schemes:
 *   gauss_panels : composite Gauss-Legendre panels whose widths grow
 *                  geometrically from E_min with a fixed dynamic range
 *                  (finest panels at the low edge, where 1/sqrt(k)
 *                  factors and slow oscillations need resolution).
 *   trapezoid    : uniform nodes including both endpoints, half-weights
 *                  at the ends.
 *
 * Invariants enforced at construction: nodes strictly increasing and
 * nonnegative, weights positive, sum of weights = E_max - E_min.
 */
#pragma once

#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "detail/gauss_legendre.hpp"
#include "errors.hpp"

namespace tempus {

enum class QuadratureScheme { gauss_panels, trapezoid };

class EnergyGrid {
  public:
    EnergyGrid(std::vector<double> nodes, std::vector<double> weights,
               double e_min, double e_max, QuadratureScheme scheme)
        : nodes_(std::move(nodes)), weights_(std::move(weights)),
          e_min_(e_min), e_max_(e_max), scheme_(scheme) {
        if (nodes_.empty() || nodes_.size() != weights_.size())
            throw std::invalid_argument("EnergyGrid: node/weight size mismatch");
        if (!(e_min_ >= 0.0) || !(e_max_ > e_min_))
            throw std::invalid_argument("EnergyGrid: need 0 <= E_min < E_max");
        double sum = 0.0;
        for (std::size_t j = 0; j < nodes_.size(); ++j) {
            if (!(nodes_[j] >= 0.0))
                throw std::invalid_argument("EnergyGrid: negative node");
            if (j > 0 && !(nodes_[j] > nodes_[j - 1]))
                throw std::invalid_argument("EnergyGrid: nodes not strictly increasing");
            if (!(weights_[j] > 0.0))
                throw std::invalid_argument("EnergyGrid: nonpositive weight");
            sum += weights_[j];
        }
        const double range = e_max_ - e_min_;
        if (std::abs(sum - range) > 1e-12 * std::max(1.0, range))
            throw std::invalid_argument("EnergyGrid: weights do not integrate 1 to E_max - E_min");
    }

    std::size_t size() const { return nodes_.size(); }
    const std::vector<double>& nodes() const { return nodes_; }
    const std::vector<double>& weights() const { return weights_; }
    double node(std::size_t j) const { return nodes_[j]; }
    double weight(std::size_t j) const { return weights_[j]; }
    double e_min() const { return e_min_; }
    double e_max() const { return e_max_; }
    QuadratureScheme scheme() const { return scheme_; }

    // Quadrature of sampled values: sum_j w_j f_j.
    template <typename F>
    double integrate(F&& f) const {
        double acc = 0.0;
        for (std::size_t j = 0; j < nodes_.size(); ++j) acc += weights_[j] * f(nodes_[j]);
        return acc;
    }

  private:
    std::vector<double> nodes_, weights_;
    double e_min_, e_max_;
    QuadratureScheme scheme_;
};

// Grids compare equal when their nodes match exactly; states, gauges and
// profiles refuse to mix across different grids.
inline bool same_grid(const EnergyGrid& a, const EnergyGrid& b) {
    return a.nodes() == b.nodes() && a.weights() == b.weights();
}

inline double wavenumber(double energy) { return std::sqrt(2.0 * energy); }

// Composite Gauss-Legendre grid on [0, E_max]. Panel widths follow a
// geometric progression with total dynamic range 64 (widest/narrowest),
// so refinement near E = 0 scales with the panel count instead of
// collapsing the interior.
inline EnergyGrid build_energy_grid(double e_max, int n_panels, int nodes_per_panel) {
    if (!(e_max > 0.0)) throw std::invalid_argument("build_energy_grid: E_max must be > 0");
    if (n_panels < 1 || nodes_per_panel < 1)
        throw std::invalid_argument("build_energy_grid: counts must be >= 1");
    constexpr double kappa = 64.0;  // widest/narrowest panel ratio
    const int p = n_panels;
    std::vector<double> widths(static_cast<std::size_t>(p));
    if (p == 1) {
        widths[0] = e_max;
    } else {
        const double ratio = std::pow(kappa, 1.0 / (p - 1));
        double sum = 0.0, w = 1.0;
        for (int i = 0; i < p; ++i) { widths[static_cast<std::size_t>(i)] = w; sum += w; w *= ratio; }
        for (auto& x : widths) x *= e_max / sum;
    }
    const auto [xg, wg] = detail::gauss_legendre(nodes_per_panel);
    std::vector<double> nodes, weights;
    nodes.reserve(static_cast<std::size_t>(p * nodes_per_panel));
    weights.reserve(static_cast<std::size_t>(p * nodes_per_panel));
    double lo = 0.0;
    for (int i = 0; i < p; ++i) {
        const double hi = lo + widths[static_cast<std::size_t>(i)];
        const double mid = 0.5 * (lo + hi), half = 0.5 * (hi - lo);
        for (int j = 0; j < nodes_per_panel; ++j) {
            nodes.push_back(mid + half * xg[static_cast<std::size_t>(j)]);
            weights.push_back(half * wg[static_cast<std::size_t>(j)]);
        }
        lo = hi;
    }
    return EnergyGrid(std::move(nodes), std::move(weights), 0.0, e_max,
                      QuadratureScheme::gauss_panels);
}

// Uniform trapezoid grid on [0, E_max] including both endpoints.
inline EnergyGrid build_trapezoid_grid(double e_max, int n_nodes) {
    if (!(e_max > 0.0)) throw std::invalid_argument("build_trapezoid_grid: E_max must be > 0");
    if (n_nodes < 2) throw std::invalid_argument("build_trapezoid_grid: need at least 2 nodes");
    const double h = e_max / (n_nodes - 1);
    std::vector<double> nodes(static_cast<std::size_t>(n_nodes)),
        weights(static_cast<std::size_t>(n_nodes), h);
    for (int j = 0; j < n_nodes; ++j) nodes[static_cast<std::size_t>(j)] = j * h;
    nodes.back() = e_max;
    weights.front() = 0.5 * h;
    weights.back() = 0.5 * h;
    return EnergyGrid(std::move(nodes), std::move(weights), 0.0, e_max,
                      QuadratureScheme::trapezoid);
}

}  // namespace tempus
