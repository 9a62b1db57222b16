/*
 * spectral_state.hpp — states in the energy representation.
 *
 * A state is a vector of complex amplitudes psi(E_j, alpha) over the grid
 * nodes and a set of degeneracy channels alpha = 0..C-1, stored node-major.
 * The norm is the quadrature sum  sum_j w_j sum_a |psi(E_j,a)|^2.
 *
 * Wave packets are specified in k space,
 *     psi(k) = N [1 - exp(-beta k^2)] exp[-(k - k0)^2 / (4 dk^2)] e^{+i k x0},
 * and carried to the energy representation by psi(E) = psi(k)/sqrt(k) with
 * k = sqrt(2E), so that |psi|^2 dE = |psi|^2 dk. The +ikx0 phase makes the
 * packet incoming toward the origin: its free arrival mean is x0 <1/k> > 0.
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

namespace tempus {

using cplx = std::complex<double>;

class SpectralState {
  public:
    SpectralState(EnergyGrid grid, std::size_t channels, std::vector<cplx> amps)
        : grid_(std::move(grid)), channels_(channels), amps_(std::move(amps)) {
        if (channels_ < 1) throw std::invalid_argument("SpectralState: need >= 1 channel");
        if (amps_.size() != grid_.size() * channels_)
            throw std::invalid_argument("SpectralState: amplitude count != nodes * channels");
        for (const auto& a : amps_)
            if (!std::isfinite(a.real()) || !std::isfinite(a.imag()))
                throw std::invalid_argument("SpectralState: non-finite amplitude");
    }

    const EnergyGrid& grid() const { return grid_; }
    std::size_t channels() const { return channels_; }
    const std::vector<cplx>& amplitudes() const { return amps_; }
    cplx amp(std::size_t j, std::size_t alpha) const { return amps_[j * channels_ + alpha]; }

    double norm_squared() const {
        double acc = 0.0;
        for (std::size_t j = 0; j < grid_.size(); ++j) {
            double row = 0.0;
            for (std::size_t a = 0; a < channels_; ++a) row += std::norm(amps_[j * channels_ + a]);
            acc += grid_.weight(j) * row;
        }
        return acc;
    }

  private:
    EnergyGrid grid_;
    std::size_t channels_;
    std::vector<cplx> amps_;
};

// ── basic maps ───────────────────────────────────────────────────────────

inline SpectralState normalize(const SpectralState& s) {
    const double n2 = s.norm_squared();
    if (!(n2 > 1e-28)) throw DegenerateStateError("normalize: zero state");
    const double inv = 1.0 / std::sqrt(n2);
    std::vector<cplx> a = s.amplitudes();
    for (auto& z : a) z *= inv;
    return SpectralState(s.grid(), s.channels(), std::move(a));
}

// Theta acts as complex conjugation of the amplitudes in this basis.
inline SpectralState time_reverse(const SpectralState& s) {
    std::vector<cplx> a = s.amplitudes();
    for (auto& z : a) z = std::conj(z);
    return SpectralState(s.grid(), s.channels(), std::move(a));
}

// Forward evolution by t: amplitudes pick up e^{-i E_j t}.
inline SpectralState evolve(const SpectralState& s, double t) {
    std::vector<cplx> a = s.amplitudes();
    const std::size_t c = s.channels();
    for (std::size_t j = 0; j < s.grid().size(); ++j) {
        const cplx ph = std::polar(1.0, -s.grid().node(j) * t);
        for (std::size_t al = 0; al < c; ++al) a[j * c + al] *= ph;
    }
    return SpectralState(s.grid(), s.channels(), std::move(a));
}

inline cplx inner_product(const SpectralState& u, const SpectralState& v) {
    if (!same_grid(u.grid(), v.grid()) || u.channels() != v.channels())
        throw IncompatibleGridError("inner_product: states on different grids");
    cplx acc = 0.0;
    for (std::size_t j = 0; j < u.grid().size(); ++j)
        for (std::size_t a = 0; a < u.channels(); ++a)
            acc += u.grid().weight(j) * std::conj(u.amp(j, a)) * v.amp(j, a);
    return acc;
}

inline double energy_mean(const SpectralState& s) {
    double m = 0.0;
    for (std::size_t j = 0; j < s.grid().size(); ++j) {
        double row = 0.0;
        for (std::size_t a = 0; a < s.channels(); ++a) row += std::norm(s.amp(j, a));
        m += s.grid().weight(j) * s.grid().node(j) * row;
    }
    return m / s.norm_squared();
}

inline double energy_width(const SpectralState& s) {
    const double mu = energy_mean(s);
    double m2 = 0.0;
    for (std::size_t j = 0; j < s.grid().size(); ++j) {
        double row = 0.0;
        for (std::size_t a = 0; a < s.channels(); ++a) row += std::norm(s.amp(j, a));
        const double d = s.grid().node(j) - mu;
        m2 += s.grid().weight(j) * d * d * row;
    }
    return std::sqrt(m2 / s.norm_squared());
}

// ── Gaussian packet ──────────────────────────────────────────────────────

namespace detail {

// Closed form of I(c) = ∫_0^∞ e^{-c k^2} e^{-(k-k0)^2/(2 dk^2)} dk.
inline double half_gaussian_integral(double c, double k0, double dk) {
    const double A = c + 1.0 / (2.0 * dk * dk);
    const double B = k0 / (2.0 * dk * dk);
    const double C = k0 * k0 / (2.0 * dk * dk);
    return std::exp(B * B / A - C) * 0.5 * std::sqrt(M_PI / A) * std::erfc(-B / std::sqrt(A));
}

}  // namespace detail

// Single-channel normalized packet. The magnitude |k0| is used. Throws a
// grid-coverage error when the grid holds < 99% of the analytic k-space mass.
inline SpectralState gaussian_packet(const EnergyGrid& grid, double k0, double dk,
                                     double x0, double beta) {
    if (!(dk > 0.0)) throw std::invalid_argument("gaussian_packet: dk must be > 0");
    if (!(beta >= 0.0)) throw std::invalid_argument("gaussian_packet: beta must be >= 0");
    const double kc = std::abs(k0);
    std::vector<cplx> amps(grid.size());
    for (std::size_t j = 0; j < grid.size(); ++j) {
        const double k = wavenumber(grid.node(j));
        if (k < 1e-300) { amps[j] = 0.0; continue; }
        const double d = (k - kc) / (2.0 * dk);
        double mag = std::exp(-d * d);
        if (beta > 0.0) mag *= 1.0 - std::exp(-beta * k * k);
        amps[j] = std::polar(mag / std::sqrt(k), k * x0);
    }
    SpectralState raw(grid, 1, std::move(amps));
    double analytic = detail::half_gaussian_integral(0.0, kc, dk);
    if (beta > 0.0)
        analytic += -2.0 * detail::half_gaussian_integral(beta, kc, dk) +
                    detail::half_gaussian_integral(2.0 * beta, kc, dk);
    const double held = raw.norm_squared();
    if (held < 0.99 * analytic)
        throw GridCoverageError("gaussian_packet: grid holds " + std::to_string(held / analytic) +
                                " of the packet's k-space mass (need >= 0.99)");
    return normalize(raw);
}

}  // namespace tempus
