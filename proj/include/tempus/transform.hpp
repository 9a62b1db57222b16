/*
 * transform.hpp — oscillatory energy→time transforms and temporal densities.
 *
 * For a state psi and one gauge member b_i the time amplitude is
 *     eta_i(t) = (2 pi)^{-1/2} sum_j w_j e^{∓ i E_j t} g_i(E_j),
 *     g_i(E_j) = sum_a conj(psi(E_j,a)) b_i(E_j,a),
 * with the minus sign for clock readings and the plus sign for arrivals; the
 * density is Pi(t) = sum_i |eta_i(t)|^2. Sums run over j ascending in a
 * fixed serial order, so results are bitwise reproducible.
 *
 * The time step must satisfy dt <= pi / E_max: coarser sampling aliases the
 * fastest spectral oscillation in the window.
 */
#pragma once

#include <cmath>
#include <complex>
#include <cstddef>
#include <stdexcept>
#include <vector>

#include "energy_grid.hpp"
#include "errors.hpp"
#include "gauge.hpp"
#include "spectral_state.hpp"
#include "temporal.hpp"

namespace tempus {

// g_i(E_j): the state projected onto one gauge member, channel sum done.
inline std::vector<cplx> gauge_projection(const SpectralState& state, const GaugeFamily& gauge,
                                          std::size_t member) {
    detail::require_compatible(gauge, state, "gauge_projection");
    if (member >= gauge.size())
        throw std::invalid_argument("gauge_projection: member index out of range");
    const std::size_t c = state.channels();
    std::vector<cplx> g(state.grid().size(), 0.0);
    for (std::size_t j = 0; j < g.size(); ++j) {
        cplx acc = 0.0;
        for (std::size_t a = 0; a < c; ++a)
            acc += std::conj(state.amp(j, a)) * gauge.value(member, j, a);
        g[j] = acc;
    }
    return g;
}

namespace detail {

inline void require_nyquist(const EnergyGrid& grid, const TemporalGrid& tgrid,
                            const char* where) {
    const double bound = M_PI / grid.e_max();
    if (tgrid.dt() > bound * (1.0 + 1e-12))
        throw std::invalid_argument(std::string(where) + ": dt " + std::to_string(tgrid.dt()) +
                                    " exceeds the Nyquist bound pi/E_max = " +
                                    std::to_string(bound));
}

// eta(t_k) from precomputed g(E_j); sgn = -1 clock, +1 arrival.
inline std::vector<cplx> oscillatory_sum(const EnergyGrid& grid, const std::vector<cplx>& g,
                                         const TemporalGrid& tgrid, double sgn) {
    static const double pref = 1.0 / std::sqrt(2.0 * M_PI);
    std::vector<cplx> eta(tgrid.size());
    for (std::size_t k = 0; k < tgrid.size(); ++k) {
        const double t = tgrid.node(k);
        cplx acc = 0.0;
        for (std::size_t j = 0; j < g.size(); ++j)
            acc += grid.weight(j) * std::polar(1.0, sgn * grid.node(j) * t) * g[j];
        eta[k] = pref * acc;
    }
    return eta;
}

}  // namespace detail

// Complex time amplitude eta_i(t_k) for one gauge member.
inline std::vector<cplx> energy_time_amplitude(const SpectralState& state,
                                               const GaugeFamily& gauge, std::size_t member,
                                               const TemporalGrid& tgrid, TimeKind kind) {
    detail::require_nyquist(state.grid(), tgrid, "energy_time_amplitude");
    const auto g = gauge_projection(state, gauge, member);
    return detail::oscillatory_sum(state.grid(), g, tgrid, kind == TimeKind::clock ? -1.0 : 1.0);
}

// Pi(t_k) = sum_i |eta_i(t_k)|^2. Throws a window-mass error when the window
// holds less than mass_gate of the density.
inline TemporalDistribution temporal_distribution(const SpectralState& state,
                                                  const GaugeFamily& gauge,
                                                  const TemporalGrid& tgrid, TimeKind kind,
                                                  double mass_gate = 0.999) {
    detail::require_compatible(gauge, state, "temporal_distribution");
    detail::require_normalized(gauge, "temporal_distribution");
    detail::require_nyquist(state.grid(), tgrid, "temporal_distribution");
    std::vector<double> density(tgrid.size(), 0.0);
    const double sgn = kind == TimeKind::clock ? -1.0 : 1.0;
    for (std::size_t i = 0; i < gauge.size(); ++i) {
        const auto g = gauge_projection(state, gauge, i);
        const auto eta = detail::oscillatory_sum(state.grid(), g, tgrid, sgn);
        for (std::size_t k = 0; k < density.size(); ++k) density[k] += std::norm(eta[k]);
    }
    TemporalDistribution dist(tgrid, std::move(density), kind);
    if (dist.mass() < mass_gate)
        throw WindowMassError("temporal_distribution: window holds " +
                              std::to_string(dist.mass()) + " < " + std::to_string(mass_gate));
    return dist;
}

}  // namespace tempus
