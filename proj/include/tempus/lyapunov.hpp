/*
 * lyapunov.hpp — monotone accumulation curves, the resolvent-regularized
 * kernel expectation, the time-reversal identity, and the negativity
 * certificate.
 *
 * The curve is <psi_t|L|psi_t> = 1 - ∫_{-infty}^t Pi_arr, built directly
 * from the cumulative arrival density, so its increments are the negated
 * trapezoid panels and monotonicity holds in exact floating point.
 *
 * The kernel (i/2pi)(E - E' + i eps)^{-1} equals (1/2pi)∫_0^∞ ds
 * e^{is(E-E')} e^{-eps s}, so its expectation in the evolved state resums to
 *     <psi_t|L_S|psi_t> = ∫_0^∞ ds e^{-eps s} Pi_arr(t + s),
 * evaluated here by an exact piecewise-linear suffix recurrence over an
 * extended window. Summing pairwise over nodes instead would pick up the
 * spurious recurrences of the discretized spectrum at t = 2pi/spacing; the
 * resummed form never sees them.
 *
 * Conjugating L by Theta gives 1 - L (anti-unitarity plus completeness of
 * the arrival density), so the identity under time reversal reads
 *     <(Theta psi)_t| L |(Theta psi)_t> = 1 - <psi_{-t}| L |psi_{-t}>,
 * and a nonzero kernel can never satisfy Theta K Theta = K with both sides
 * positive: the certificate exhibits the negative diagonal direction.
 */
#pragma once

#include <cmath>
#include <complex>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "energy_grid.hpp"
#include "errors.hpp"
#include "gauge.hpp"
#include "kernel.hpp"
#include "spectral_state.hpp"
#include "temporal.hpp"
#include "transform.hpp"

namespace tempus {

class LyapunovCurve {
  public:
    LyapunovCurve(TemporalGrid grid, std::vector<double> values)
        : grid_(std::move(grid)), values_(std::move(values)) {
        if (values_.size() != grid_.size())
            throw std::invalid_argument("LyapunovCurve: value count != grid size");
        for (double v : values_)
            if (!(v >= -1e-3) || !(v <= 1.0 + 1e-3))
                throw std::invalid_argument("LyapunovCurve: value outside [0, 1] margin");
    }

    const TemporalGrid& grid() const { return grid_; }
    const std::vector<double>& values() const { return values_; }
    double front() const { return values_.front(); }
    double back() const { return values_.back(); }

    // Largest consecutive increase; <= 0 for exactly monotone curves.
    double max_increment() const {
        double worst = -1.0 / 0.0;
        for (std::size_t k = 0; k + 1 < values_.size(); ++k)
            worst = std::max(worst, values_[k + 1] - values_[k]);
        return worst;
    }

  private:
    TemporalGrid grid_;
    std::vector<double> values_;
};

// 1 - cumulative arrival density: starts at 1, decreases to 1 - mass.
inline LyapunovCurve lyapunov_curve(const SpectralState& state, const GaugeFamily& gauge,
                                    const TemporalGrid& tgrid, double mass_gate = 0.999) {
    const auto dist = temporal_distribution(state, gauge, tgrid, TimeKind::arrival, mass_gate);
    const auto cum = dist.cumulative();
    std::vector<double> values(cum.size());
    for (std::size_t k = 0; k < cum.size(); ++k) values[k] = 1.0 - cum[k];
    return LyapunovCurve(tgrid, std::move(values));
}

// ── resolvent-regularized kernel ─────────────────────────────────────────

class StraussKernel {
  public:
    StraussKernel(EnergyGrid grid, double epsilon)
        : grid_(std::move(grid)), epsilon_(epsilon) {
        if (!(epsilon_ > 0.0)) throw std::invalid_argument("StraussKernel: epsilon must be > 0");
    }

    const EnergyGrid& grid() const { return grid_; }
    double epsilon() const { return epsilon_; }

    // (i/2pi) / (E_j - E_l + i eps); diagonal in the channel index.
    cplx entry(std::size_t j, std::size_t l) const {
        return cplx(0.0, 1.0 / (2.0 * M_PI)) /
               cplx(grid_.node(j) - grid_.node(l), epsilon_);
    }

    // Dense node matrix; for small grids and diagnostics only.
    std::vector<cplx> dense_matrix() const {
        const std::size_t n = grid_.size();
        std::vector<cplx> m(n * n);
        for (std::size_t j = 0; j < n; ++j)
            for (std::size_t l = 0; l < n; ++l) m[j * n + l] = entry(j, l);
        return m;
    }

  private:
    EnergyGrid grid_;
    double epsilon_;
};

// eps matching the resolution of the state: 1e-3 times its energy width.
inline double default_strauss_epsilon(const SpectralState& state) {
    return 1e-3 * energy_width(state);
}

namespace detail {

// ∫_0^h e^{-eps s} ds and ∫_0^h s e^{-eps s} ds, series-guarded.
inline std::pair<double, double> exp_panel_integrals(double eps, double h) {
    const double x = eps * h;
    const double j0 = -std::expm1(-x) / eps;
    double is;
    if (x < 1e-3) {
        is = h * h * (0.5 + x * (-1.0 / 3.0 + x * (0.125 + x * (-1.0 / 30.0 + x / 144.0))));
    } else {
        is = (1.0 - std::exp(-x) * (1.0 + x)) / (eps * eps);
    }
    return {j0, is};
}

}  // namespace detail

// <psi_t|L_S|psi_t> on tgrid via the resummed form above. The arrival
// density is tabulated over the window extended by its own length so the
// s integral sees everything the state can still deliver.
inline LyapunovCurve strauss_expectation(const SpectralState& state, const StraussKernel& kernel,
                                         const TemporalGrid& tgrid) {
    if (!same_grid(state.grid(), kernel.grid()))
        throw IncompatibleGridError("strauss_expectation: state and kernel on different grids");
    detail::require_nyquist(state.grid(), tgrid, "strauss_expectation");

    const std::size_t n = tgrid.size();
    const TemporalGrid extended(tgrid.t_min(), tgrid.dt(), 2 * n - 1);
    const auto gauge = identity_gauge(state.grid(), state.channels());
    std::vector<double> pi(extended.size(), 0.0);
    for (std::size_t i = 0; i < gauge.size(); ++i) {
        const auto g = gauge_projection(state, gauge, i);
        const auto eta = detail::oscillatory_sum(state.grid(), g, extended, 1.0);
        for (std::size_t k = 0; k < pi.size(); ++k) pi[k] += std::norm(eta[k]);
    }

    const double eps = kernel.epsilon();
    const double h = tgrid.dt();
    const auto [j0, is] = detail::exp_panel_integrals(eps, h);
    const double i1 = is / h;
    const double i0 = j0 - i1;
    const double f = std::exp(-eps * h);

    // Close the tail at the quietest sample beyond the base window. On a
    // finite grid the density eventually revives; cutting at its minimum
    // keeps the genuine tail and drops the recurrence artifact.
    std::size_t close = n - 1;
    for (std::size_t k = n - 1; k < pi.size(); ++k)
        if (pi[k] < pi[close]) close = k;

    std::vector<double> suffix(close + 1);
    suffix[close] = pi[close] / eps;
    for (std::size_t k = close; k-- > 0;)
        suffix[k] = f * suffix[k + 1] + pi[k] * i0 + pi[k + 1] * i1;

    std::vector<double> values(suffix.begin(), suffix.begin() + static_cast<std::ptrdiff_t>(n));
    return LyapunovCurve(tgrid, std::move(values));
}

// ── time-reversal identity ───────────────────────────────────────────────

// sup_t | curve_{Theta psi}(t) - (1 - curve_psi(-t)) | over the window.
inline double reversal_identity_check(const SpectralState& state, const GaugeFamily& gauge,
                                      const TemporalGrid& tgrid) {
    const auto reversed_curve = lyapunov_curve(time_reverse(state), gauge, tgrid, 0.0);
    const TemporalGrid mirror(-tgrid.t_max(), tgrid.dt(), tgrid.size());
    const auto forward_curve = lyapunov_curve(state, gauge, mirror, 0.0);
    const std::size_t n = tgrid.size();
    double worst = 0.0;
    for (std::size_t k = 0; k < n; ++k) {
        const double lhs = reversed_curve.values()[k];
        const double rhs = 1.0 - forward_curve.values()[n - 1 - k];
        worst = std::max(worst, std::abs(lhs - rhs));
    }
    return worst;
}

// ── negativity certificate ───────────────────────────────────────────────

struct CertificateVerdict {
    bool trivial;               // kernel numerically zero: nothing to witness
    std::size_t witness_index;  // basis direction m with <e_m|-conj(K)|e_m> < 0
    double negativity;          // that expectation, = -K_mm
};

// A nonzero PSD kernel K cannot have PSD negation: conjugation by Theta maps
// K to -conj(K), whose diagonal is -diag(K), so the largest diagonal entry
// hands over an explicit negative direction.
inline CertificateVerdict no_invariant_lyapunov_certificate(const DensityKernel& kernel) {
    const std::size_t n = kernel.dim();
    double scale = 0.0;
    for (const auto& z : kernel.matrix()) scale = std::max(scale, std::abs(z));
    if (scale < 1e-12) return {true, 0, 0.0};
    std::size_t best = 0;
    for (std::size_t r = 1; r < n; ++r)
        if (kernel.entry(r, r).real() > kernel.entry(best, best).real()) best = r;
    const double diag = kernel.entry(best, best).real();
    if (!(diag > 0.0))
        throw NotPositiveSemidefiniteError(
            "no_invariant_lyapunov_certificate: nonzero kernel with no positive diagonal entry");
    return {false, best, -diag};
}

}  // namespace tempus
