/*
 * gauge.hpp — families of gauge functions b_i(E_j, alpha) defining a
 * covariant density kernel.
 *
 * A family with members i = 1..m over C channels is admissible when
 *     sum_i b_i(E, a) conj(b_i(E, a')) = delta_{aa'}   at every node,
 * which makes the associated temporal density integrate to 1 for every
 * normalized state. Construction validates shape and finiteness only;
 * completeness is checked by check_gauge_normalization and enforced by the
 * operations that require it, so deliberately broken families can still be
 * built and diagnosed.
 */
#pragma once

#include <cmath>
#include <complex>
#include <cstddef>
#include <stdexcept>
#include <utility>
#include <vector>

#include "energy_grid.hpp"
#include "errors.hpp"
#include "spectral_state.hpp"

namespace tempus {

class GaugeFamily {
  public:
    // members[i] holds b_i node-major: value at (E_j, alpha) is members[i][j*C + alpha].
    GaugeFamily(EnergyGrid grid, std::size_t channels, std::vector<std::vector<cplx>> members)
        : grid_(std::move(grid)), channels_(channels), members_(std::move(members)) {
        if (channels_ < 1) throw std::invalid_argument("GaugeFamily: need >= 1 channel");
        if (members_.empty()) throw std::invalid_argument("GaugeFamily: need >= 1 member");
        for (const auto& m : members_) {
            if (m.size() != grid_.size() * channels_)
                throw std::invalid_argument("GaugeFamily: member size != nodes * channels");
            for (const auto& z : m)
                if (!std::isfinite(z.real()) || !std::isfinite(z.imag()))
                    throw std::invalid_argument("GaugeFamily: non-finite member value");
        }
    }

    const EnergyGrid& grid() const { return grid_; }
    std::size_t channels() const { return channels_; }
    std::size_t size() const { return members_.size(); }
    const std::vector<cplx>& member(std::size_t i) const { return members_[i]; }
    cplx value(std::size_t i, std::size_t j, std::size_t alpha) const {
        return members_[i][j * channels_ + alpha];
    }

  private:
    EnergyGrid grid_;
    std::size_t channels_;
    std::vector<std::vector<cplx>> members_;
};

// ── constructors ─────────────────────────────────────────────────────────

// C members with b_i(E, a) = delta_{ia}; for one channel this is b = 1.
inline GaugeFamily identity_gauge(const EnergyGrid& grid, std::size_t channels = 1) {
    std::vector<std::vector<cplx>> members(channels,
                                           std::vector<cplx>(grid.size() * channels, 0.0));
    for (std::size_t i = 0; i < channels; ++i)
        for (std::size_t j = 0; j < grid.size(); ++j) members[i][j * channels + i] = 1.0;
    return GaugeFamily(grid, channels, std::move(members));
}

// Diagonal pure-phase family b_i(E, a) = delta_{ia} e^{i phi(E)}.
template <typename F>
inline GaugeFamily phase_gauge(const EnergyGrid& grid, std::size_t channels, F&& phi) {
    std::vector<std::vector<cplx>> members(channels,
                                           std::vector<cplx>(grid.size() * channels, 0.0));
    for (std::size_t j = 0; j < grid.size(); ++j) {
        const cplx ph = std::polar(1.0, static_cast<double>(phi(grid.node(j))));
        for (std::size_t i = 0; i < channels; ++i) members[i][j * channels + i] = ph;
    }
    return GaugeFamily(grid, channels, std::move(members));
}

// b = e^{i lambda E}: shifts the clock mean by lambda, leaves the variance alone.
inline GaugeFamily linear_phase_gauge(const EnergyGrid& grid, std::size_t channels,
                                      double lambda) {
    return phase_gauge(grid, channels, [lambda](double e) { return lambda * e; });
}

// b = e^{i k a}, k = sqrt(2E): moves the arrival reference point to x = a.
inline GaugeFamily arrival_plane_gauge(const EnergyGrid& grid, std::size_t channels, double a) {
    return phase_gauge(grid, channels, [a](double e) { return wavenumber(e) * a; });
}

// ── normalization check ──────────────────────────────────────────────────

struct GaugeNormalizationReport {
    double max_deviation;  // max over nodes of max-abs entry of sum_i b_i b_i^† - 1
    bool pass;             // max_deviation < 1e-10
};

inline GaugeNormalizationReport check_gauge_normalization(const GaugeFamily& g) {
    const std::size_t c = g.channels();
    double worst = 0.0;
    for (std::size_t j = 0; j < g.grid().size(); ++j) {
        for (std::size_t a = 0; a < c; ++a) {
            for (std::size_t ap = 0; ap < c; ++ap) {
                cplx s = 0.0;
                for (std::size_t i = 0; i < g.size(); ++i)
                    s += g.value(i, j, a) * std::conj(g.value(i, j, ap));
                if (a == ap) s -= 1.0;
                worst = std::max(worst, std::abs(s));
            }
        }
    }
    return {worst, worst < 1e-10};
}

namespace detail {

inline void require_normalized(const GaugeFamily& g, const char* where) {
    const auto rep = check_gauge_normalization(g);
    if (!rep.pass)
        throw std::invalid_argument(std::string(where) +
                                    ": gauge family not normalized (deviation " +
                                    std::to_string(rep.max_deviation) + ")");
}

inline void require_compatible(const GaugeFamily& g, const SpectralState& s, const char* where) {
    if (!same_grid(g.grid(), s.grid()) || g.channels() != s.channels())
        throw IncompatibleGridError(std::string(where) + ": state and gauge on different grids");
}

}  // namespace detail

}  // namespace tempus
