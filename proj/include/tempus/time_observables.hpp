/*
 * time_observables.hpp — spectral moments, |tau> vectors, and the
 * variance-over-gauges scan.
 *
 * Moments come from the energy representation: with g_i(E) the projection of
 * the state onto member i and ' = d/dE,
 *     mean   = ± sum_i ∫ dE  Im[ conj(g_i) g_i' ]      (+ clock, - arrival)
 *     m2     =   sum_i ∫ dE  |g_i'|^2
 * normalized by sum_i ∫|g_i|^2. The derivative sign is pinned by covariance:
 * evolving the state forward by t0 moves clock readings by +t0 and arrivals
 * by -t0. The second moment is the density's second moment, not an operator
 * square, so variance = m2 - mean^2 directly.
 *
 * For a state with real amplitudes, every pure-phase gauge b = e^{i phi(E)}
 * gives  variance = ∫|psi'|^2 dE + Var(phi'), so the scan over a phase
 * family reports that floor and the family member attaining it.
 */
#pragma once

#include <cmath>
#include <complex>
#include <cstddef>
#include <functional>
#include <stdexcept>
#include <vector>

#include "detail/fornberg.hpp"
#include "energy_grid.hpp"
#include "errors.hpp"
#include "gauge.hpp"
#include "spectral_state.hpp"
#include "temporal.hpp"
#include "transform.hpp"

namespace tempus {

inline MomentReport moments_spectral(const SpectralState& state, const GaugeFamily& gauge,
                                     TimeKind kind) {
    detail::require_compatible(gauge, state, "moments_spectral");
    detail::require_normalized(gauge, "moments_spectral");
    const auto& grid = state.grid();
    detail::FirstDerivative ddE(grid.nodes());
    double mean_acc = 0.0, m2_acc = 0.0, total = 0.0;
    for (std::size_t i = 0; i < gauge.size(); ++i) {
        const auto g = gauge_projection(state, gauge, i);
        const auto dg = ddE.apply(g);
        for (std::size_t j = 0; j < g.size(); ++j) {
            const double w = grid.weight(j);
            mean_acc += w * std::imag(std::conj(g[j]) * dg[j]);
            m2_acc += w * std::norm(dg[j]);
            total += w * std::norm(g[j]);
        }
    }
    if (!(total > 1e-28)) throw DegenerateStateError("moments_spectral: zero state");
    const double sgn = kind == TimeKind::clock ? 1.0 : -1.0;
    const double mean = sgn * mean_acc / total;
    const double m2 = m2_acc / total;
    return {mean, m2, m2 - mean * mean, MomentSource::spectral};
}

// ── |tau> vectors ────────────────────────────────────────────────────────

// Components (2 pi)^{-1/2} e^{-i E_j tau}. Not normalizable: use only inside
// quadratures. |<tau|psi>|^2 equals the b = 1 clock density at t = tau.
inline std::vector<cplx> tau_state(const EnergyGrid& grid, double tau) {
    static const double pref = 1.0 / std::sqrt(2.0 * M_PI);
    std::vector<cplx> v(grid.size());
    for (std::size_t j = 0; j < grid.size(); ++j)
        v[j] = pref * std::polar(1.0, -grid.node(j) * tau);
    return v;
}

inline cplx tau_overlap(const EnergyGrid& grid, const std::vector<cplx>& tau,
                        const SpectralState& state) {
    if (state.channels() != 1)
        throw std::invalid_argument("tau_overlap: single-channel states only");
    if (!same_grid(grid, state.grid()) || tau.size() != grid.size())
        throw IncompatibleGridError("tau_overlap: mismatched grids");
    cplx acc = 0.0;
    for (std::size_t j = 0; j < grid.size(); ++j)
        acc += grid.weight(j) * std::conj(tau[j]) * state.amp(j, 0);
    return acc;
}

// ── variance scan over pure-phase gauges ─────────────────────────────────

struct VarianceScanTable {
    std::vector<double> params;
    std::vector<double> variances;
    double floor;  // ∫ |psi'|^2 dE of the real-amplitude state
    std::size_t min_index;
    double min_param;
    double min_variance;
};

// Scans b = e^{i phi(E; p)} over p in params for a state with real
// amplitudes. An optional state_phase phi0 re-phases the state to
// e^{i phi0(E)} psi first; the minimum then tracks the gauge matching phi0.
template <typename Phi>
inline VarianceScanTable variance_gauge_scan(const SpectralState& state, Phi&& phi,
                                             const std::vector<double>& params,
                                             std::function<double(double)> state_phase = {}) {
    if (params.empty()) throw std::invalid_argument("variance_gauge_scan: empty parameter list");
    double amp_scale = 0.0, worst_im = 0.0;
    for (const auto& z : state.amplitudes()) {
        amp_scale = std::max(amp_scale, std::abs(z));
        worst_im = std::max(worst_im, std::abs(z.imag()));
    }
    if (worst_im > 1e-12 * std::max(1.0, amp_scale))
        throw std::invalid_argument("variance_gauge_scan: state amplitudes must be real");

    const auto& grid = state.grid();
    const std::size_t c = state.channels();
    detail::FirstDerivative ddE(grid.nodes());

    // floor = ∫ |psi'|^2 dE, per channel, on the real amplitudes
    std::vector<double> re(state.amplitudes().size());
    for (std::size_t idx = 0; idx < re.size(); ++idx) re[idx] = state.amplitudes()[idx].real();
    double norm2 = 0.0, floor = 0.0;
    for (std::size_t a = 0; a < c; ++a) {
        const auto dpsi = ddE.apply_strided(re, c, a);
        for (std::size_t j = 0; j < grid.size(); ++j) {
            floor += grid.weight(j) * dpsi[j] * dpsi[j];
            norm2 += grid.weight(j) * re[j * c + a] * re[j * c + a];
        }
    }
    floor /= norm2;

    SpectralState effective = state;
    if (state_phase) {
        std::vector<cplx> a = state.amplitudes();
        for (std::size_t j = 0; j < grid.size(); ++j) {
            const cplx ph = std::polar(1.0, state_phase(grid.node(j)));
            for (std::size_t al = 0; al < c; ++al) a[j * c + al] *= ph;
        }
        effective = SpectralState(grid, c, std::move(a));
    }

    VarianceScanTable table;
    table.params = params;
    table.variances.reserve(params.size());
    table.floor = floor;
    for (const double p : params) {
        const auto gauge = phase_gauge(grid, c, [&](double e) { return phi(e, p); });
        table.variances.push_back(moments_spectral(effective, gauge, TimeKind::clock).variance);
    }
    table.min_index = 0;
    for (std::size_t k = 1; k < table.variances.size(); ++k)
        if (table.variances[k] < table.variances[table.min_index]) table.min_index = k;
    table.min_param = table.params[table.min_index];
    table.min_variance = table.variances[table.min_index];
    return table;
}

}  // namespace tempus
