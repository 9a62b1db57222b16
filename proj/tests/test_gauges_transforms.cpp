// Gauge families, normalization accounting, the energy-to-time transforms,
// and the tau-state overlap route to the clock density.

#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <random>

#include <tempus/gauge.hpp>
#include <tempus/time_observables.hpp>
#include <tempus/transform.hpp>

using namespace tempus;
using Catch::Approx;

namespace {

const EnergyGrid& grid768() {
    static const EnergyGrid g = build_energy_grid(8.0, 32, 24);
    return g;
}

}  // namespace

TEST_CASE("identity and phase gauges are normalized") {
    const auto& grid = grid768();
    REQUIRE(check_gauge_normalization(identity_gauge(grid, 1)).pass);
    REQUIRE(check_gauge_normalization(identity_gauge(grid, 2)).pass);
    REQUIRE(check_gauge_normalization(linear_phase_gauge(grid, 1, 3.0)).pass);
    REQUIRE(check_gauge_normalization(arrival_plane_gauge(grid, 1, 12.0)).pass);
}

TEST_CASE("constant sub-unit member is constructible but flagged") {
    const auto& grid = grid768();
    const GaugeFamily dim(grid, 1,
                          {std::vector<cplx>(grid.size(), cplx(0.9, 0.0))});
    const auto rep = check_gauge_normalization(dim);
    REQUIRE_FALSE(rep.pass);
    REQUIRE(rep.max_deviation == Approx(0.19).epsilon(1e-12));

    const auto psi = gaussian_packet(grid, 1.6, 0.16, 40.0, 0.5);
    const TemporalGrid tgrid(-80.0, 0.25, 641);
    REQUIRE_THROWS_AS(temporal_distribution(psi, dim, tgrid, TimeKind::arrival),
                      std::invalid_argument);
}

TEST_CASE("gauge projection folds channels against the state") {
    const auto& grid = grid768();
    const auto psi = gaussian_packet(grid, 1.6, 0.16, 40.0, 0.5);
    const auto gauge = linear_phase_gauge(grid, 1, 2.0);
    const auto g = gauge_projection(psi, gauge, 0);
    REQUIRE(g.size() == grid.size());
    for (std::size_t j : {std::size_t{0}, std::size_t{300}, grid.size() - 1}) {
        const cplx want = std::conj(psi.amp(j, 0)) * gauge.value(0, j, 0);
        REQUIRE(std::abs(g[j] - want) < 1e-15);
    }
}

TEST_CASE("temporal distribution holds unit mass on a wide window") {
    const auto& grid = grid768();
    const auto psi = gaussian_packet(grid, 1.6, 0.16, 40.0, 0.5);
    const auto gauge = identity_gauge(grid, 1);
    const TemporalGrid tgrid(-120.0, 0.25, 1121);  // out to +160
    const auto dist = temporal_distribution(psi, gauge, tgrid, TimeKind::arrival);
    REQUIRE(dist.mass() == Approx(1.0).margin(1e-6));
    REQUIRE(dist.kind() == TimeKind::arrival);
    // density concentrates near x0 <1/k> ~ +25
    REQUIRE(dist.quantile(0.5) == Approx(25.2).margin(1.5));
}

TEST_CASE("arrival and clock densities mirror for real states") {
    const auto& grid = grid768();
    const auto psi = gaussian_packet(grid, 1.6, 0.16, 0.0, 0.5);  // real amplitudes
    const auto gauge = identity_gauge(grid, 1);
    const TemporalGrid tgrid(-40.0, 0.25, 321);  // symmetric about 0
    const auto arr = temporal_distribution(psi, gauge, tgrid, TimeKind::arrival);
    const auto clk = temporal_distribution(psi, gauge, tgrid, TimeKind::clock);
    double worst = 0.0;
    for (std::size_t k = 0; k < tgrid.size(); ++k)
        worst = std::max(worst, std::abs(arr.density()[k] -
                                         clk.density()[tgrid.size() - 1 - k]));
    REQUIRE(worst < 1e-13);
}

TEST_CASE("time step beyond the Nyquist bound is rejected") {
    const auto& grid = grid768();  // e_max 8 -> dt must stay below ~0.3927
    const auto psi = gaussian_packet(grid, 1.6, 0.16, 40.0, 0.5);
    const auto gauge = identity_gauge(grid, 1);
    REQUIRE_THROWS_AS(
        temporal_distribution(psi, gauge, TemporalGrid(-80.0, 0.5, 301), TimeKind::arrival),
        std::invalid_argument);
}

TEST_CASE("grid mismatch between state and gauge is rejected") {
    const auto& grid = grid768();
    const auto other = build_energy_grid(8.0, 16, 12);
    const auto psi = gaussian_packet(grid, 1.6, 0.16, 40.0, 0.5);
    const auto gauge = identity_gauge(other, 1);
    REQUIRE_THROWS_AS(
        temporal_distribution(psi, gauge, TemporalGrid(-80.0, 0.25, 641), TimeKind::arrival),
        IncompatibleGridError);
}

TEST_CASE("narrow window trips the mass gate, explicit gate relaxes it") {
    const auto& grid = grid768();
    const auto psi = gaussian_packet(grid, 1.6, 0.16, 40.0, 0.5);
    const auto gauge = identity_gauge(grid, 1);
    const TemporalGrid tight(20.0, 0.25, 21);  // a 5-unit slice of the peak
    REQUIRE_THROWS_AS(temporal_distribution(psi, gauge, tight, TimeKind::arrival),
                      WindowMassError);
    const auto dist = temporal_distribution(psi, gauge, tight, TimeKind::arrival, 0.0);
    REQUIRE(dist.mass() < 0.999);
}

TEST_CASE("tau overlaps reproduce the clock density and mean") {
    const auto& grid = grid768();
    const auto psi = gaussian_packet(grid, 1.6, 0.16, 40.0, 0.5);
    const auto gauge = identity_gauge(grid, 1);
    const TemporalGrid tgrid(-80.0, 0.25, 441);  // out to +30, clock peak ~ -25
    const auto dist = temporal_distribution(psi, gauge, tgrid, TimeKind::clock);

    double worst = 0.0, quad_mean = 0.0, quad_mass = 0.0;
    std::vector<double> overlap2(tgrid.size());
    for (std::size_t k = 0; k < tgrid.size(); ++k) {
        const auto tau = tau_state(grid, tgrid.node(k));
        overlap2[k] = std::norm(tau_overlap(grid, tau, psi));
        worst = std::max(worst, std::abs(overlap2[k] - dist.density()[k]));
    }
    for (std::size_t k = 0; k + 1 < tgrid.size(); ++k) {
        quad_mean += 0.5 * tgrid.dt() *
                     (tgrid.node(k) * overlap2[k] + tgrid.node(k + 1) * overlap2[k + 1]);
        quad_mass += 0.5 * tgrid.dt() * (overlap2[k] + overlap2[k + 1]);
    }
    REQUIRE(worst < 1e-10);

    const auto spectral = moments_spectral(psi, gauge, TimeKind::clock);
    REQUIRE(std::abs(quad_mean / quad_mass - spectral.mean) <=
            1e-5 * std::max(1.0, std::abs(spectral.mean)));
}

TEST_CASE("tau overlap at zero time is real for real states") {
    const auto& grid = grid768();
    const auto psi = gaussian_packet(grid, 1.6, 0.16, 0.0, 0.5);
    const auto tau = tau_state(grid, 0.0);
    REQUIRE(tau_overlap(grid, tau, psi).imag() == 0.0);
}

TEST_CASE("evolution shifts clock densities forward and arrival densities back") {
    const auto& grid = grid768();
    const auto psi = gaussian_packet(grid, 1.6, 0.16, 40.0, 0.5);
    const auto gauge = identity_gauge(grid, 1);
    const TemporalGrid tgrid(-100.0, 0.25, 881);  // generous on both sides
    const double t0 = 5.0;
    const std::size_t shift = 20;  // 5.0 / 0.25
    const auto moved = evolve(psi, t0);

    for (const auto kind : {TimeKind::clock, TimeKind::arrival}) {
        const auto base = temporal_distribution(psi, gauge, tgrid, kind, 0.0);
        const auto after = temporal_distribution(moved, gauge, tgrid, kind, 0.0);
        double worst = 0.0;
        for (std::size_t k = shift; k + shift < tgrid.size(); ++k) {
            // clock readings move with the state (+t0), arrivals against it
            const std::size_t ref = kind == TimeKind::clock ? k - shift : k + shift;
            worst = std::max(worst, std::abs(after.density()[k] - base.density()[ref]));
        }
        REQUIRE(worst < 1e-12);
    }
}
