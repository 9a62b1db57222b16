// Acceptance gate: thirteen criteria, one PASS/FAIL line each, exit code
// equal to the number of failures. Randomized checks use fixed seeds.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <random>
#include <string>
#include <vector>

#include <tempus/detail/linalg.hpp>
#include <tempus/tempus.hpp>

using namespace tempus;

namespace {

using clock_type = std::chrono::steady_clock;

double seconds_since(clock_type::time_point t0) {
    return std::chrono::duration<double>(clock_type::now() - t0).count();
}

std::string fmt(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.3g", v);
    return buf;
}

// ── randomized admissible objects ────────────────────────────────────────

struct Draw {
    SpectralState state;
    GaugeFamily gauge;
};

// smooth random C-channel state: a packet times a slowly rotating channel
// direction, unit norm on the grid
SpectralState random_state(const EnergyGrid& grid, std::size_t channels, std::mt19937_64& rng) {
    std::uniform_real_distribution<double> uk0(1.5, 2.2), udk(0.10, 0.14), ux0(20.0, 40.0),
        uph(0.0, 2.0 * M_PI);
    const auto packet = gaussian_packet(grid, uk0(rng), udk(rng), ux0(rng), 0.5);
    if (channels == 1) return packet;
    const double th0 = uph(rng), ph0 = uph(rng), wob = 0.2;
    std::vector<cplx> amps(grid.size() * channels);
    for (std::size_t j = 0; j < grid.size(); ++j) {
        const double th = th0 + wob * std::sin(M_PI * grid.node(j) / grid.e_max());
        amps[j * 2 + 0] = packet.amp(j, 0) * std::cos(th);
        amps[j * 2 + 1] = packet.amp(j, 0) * std::sin(th) * std::polar(1.0, ph0);
    }
    return SpectralState(grid, channels, std::move(amps));
}

// smooth random normalized family: polar factor of a perturbed isometry
GaugeFamily random_gauge(const EnergyGrid& grid, std::size_t channels, std::size_t members,
                         std::mt19937_64& rng) {
    std::normal_distribution<double> gauss(0.0, 1.0);
    std::uniform_real_distribution<double> uph(0.0, 2.0 * M_PI);
    const std::size_t m = members, mc = m * channels;
    std::vector<cplx> base(mc, 0.0);
    for (std::size_t c = 0; c < channels; ++c) base[c * channels + c] = 1.0;
    const int waves = 3;
    std::vector<std::vector<cplx>> amp(waves, std::vector<cplx>(mc));
    std::vector<double> phase(waves);
    for (int p = 0; p < waves; ++p) {
        phase[p] = uph(rng);
        for (auto& v : amp[p])
            v = cplx(gauss(rng), gauss(rng)) * (0.1 / (p + 1.0) / std::sqrt(double(mc)));
    }
    std::vector<std::vector<cplx>> out(m, std::vector<cplx>(grid.size() * channels));
    std::vector<cplx> M(mc), G(channels * channels), Gih(channels * channels);
    for (std::size_t j = 0; j < grid.size(); ++j) {
        for (std::size_t i = 0; i < mc; ++i) M[i] = base[i];
        for (int p = 0; p < waves; ++p) {
            const double s = std::sin((p + 1.0) * M_PI * grid.node(j) / grid.e_max() + phase[p]);
            for (std::size_t i = 0; i < mc; ++i) M[i] += s * amp[p][i];
        }
        // G = M^dagger M, then G^{-1/2} through its eigensystem
        for (std::size_t a = 0; a < channels; ++a)
            for (std::size_t b = 0; b < channels; ++b) {
                cplx acc = 0.0;
                for (std::size_t i = 0; i < m; ++i)
                    acc += std::conj(M[i * channels + a]) * M[i * channels + b];
                G[a * channels + b] = acc;
            }
        std::vector<cplx> vecs;
        const auto evals = detail::hermitian_eigenvalues(G, channels, &vecs);
        for (std::size_t a = 0; a < channels; ++a)
            for (std::size_t b = 0; b < channels; ++b) {
                cplx acc = 0.0;
                for (std::size_t c = 0; c < channels; ++c)
                    acc += vecs[a * channels + c] / std::sqrt(evals[c]) *
                           std::conj(vecs[b * channels + c]);
                Gih[a * channels + b] = acc;
            }
        for (std::size_t i = 0; i < m; ++i)
            for (std::size_t a = 0; a < channels; ++a) {
                cplx acc = 0.0;
                for (std::size_t b = 0; b < channels; ++b)
                    acc += M[i * channels + b] * Gih[b * channels + a];
                out[i][j * channels + a] = acc;
            }
    }
    return GaugeFamily(grid, channels, std::move(out));
}

Draw random_pair(const EnergyGrid& grid, std::size_t index, std::mt19937_64& rng) {
    const std::size_t channels = index % 4 == 3 ? 2 : 1;
    const std::size_t members = channels == 1 ? 1 + index % 3 : 2 + index % 2;
    return {random_state(grid, channels, rng), random_gauge(grid, channels, members, rng)};
}

TemporalGrid centered_window(const SpectralState& s, const GaugeFamily& g, TimeKind kind,
                             double half, double dt) {
    const double c = moments_spectral(s, g, kind).mean;
    const double lo = std::floor((c - half) / dt) * dt;
    return make_time_window(lo, c + half, dt);
}

double inverse_speed(const SpectralState& s) {
    double acc = 0.0;
    const auto& grid = s.grid();
    for (std::size_t j = 0; j < grid.size(); ++j) {
        double row = 0.0;
        for (std::size_t a = 0; a < s.channels(); ++a) row += std::norm(s.amp(j, a));
        acc += grid.weight(j) * row / wavenumber(grid.node(j));
    }
    return acc / s.norm_squared();
}

// ── criteria ─────────────────────────────────────────────────────────────

struct Outcome {
    bool pass;
    std::string detail;
};

const EnergyGrid& grid_free() {
    static const EnergyGrid g = build_energy_grid(8.0, 32, 24);
    return g;
}

const EnergyGrid& grid_fig() {
    static const EnergyGrid g = build_energy_grid(4.0, 56, 64);
    return g;
}

const SpectralState& packet_fig() {
    static const SpectralState s = gaussian_packet(grid_fig(), M_PI / 2.0, 0.045, 180.0, 0.5);
    return s;
}

Outcome criterion_normalization() {
    const auto t0 = clock_type::now();
    std::mt19937_64 rng(101);
    double worst = 0.0;
    for (std::size_t i = 0; i < 20; ++i) {
        const auto draw = random_pair(grid_free(), i, rng);
        for (const auto kind : {TimeKind::arrival, TimeKind::clock}) {
            const auto tgrid = centered_window(draw.state, draw.gauge, kind, 130.0, 0.3);
            const auto dist = temporal_distribution(draw.state, draw.gauge, tgrid, kind);
            worst = std::max(worst, std::abs(dist.mass() - 1.0));
        }
    }
    const double dt = seconds_since(t0);
    return {worst <= 1e-6 && dt < 10.0,
            "max |mass - 1| = " + fmt(worst) + ", " + fmt(dt) + " s"};
}

Outcome criterion_covariance() {
    std::mt19937_64 rng(202);
    const double step = 0.25;
    double worst = 0.0;
    for (std::size_t i = 0; i < 4; ++i) {
        const auto draw = random_pair(grid_free(), i, rng);
        for (const auto kind : {TimeKind::arrival, TimeKind::clock}) {
            const auto tgrid = centered_window(draw.state, draw.gauge, kind, 130.0, step);
            const auto base = temporal_distribution(draw.state, draw.gauge, tgrid, kind, 0.0);
            for (const double t0 : {1.0, -1.0, 5.0, -5.0}) {
                const auto moved = evolve(draw.state, t0);
                const auto after = temporal_distribution(moved, draw.gauge, tgrid, kind, 0.0);
                const long s = std::lround(t0 / step);
                for (long k = 0; k < static_cast<long>(tgrid.size()); ++k) {
                    // clock densities shift by +t0, arrival densities by -t0
                    const long ref = kind == TimeKind::clock ? k - s : k + s;
                    if (ref < 0 || ref >= static_cast<long>(tgrid.size())) continue;
                    worst = std::max(worst, std::abs(after.density()[k] - base.density()[ref]));
                }
            }
        }
    }
    return {worst < 1e-4, "sup shifted mismatch = " + fmt(worst)};
}

Outcome criterion_moments() {
    std::mt19937_64 rng(303);
    double worst = 0.0;
    for (std::size_t i = 0; i < 10; ++i) {
        const auto draw = random_pair(grid_free(), i, rng);
        for (const auto kind : {TimeKind::arrival, TimeKind::clock}) {
            const auto tgrid = centered_window(draw.state, draw.gauge, kind, 130.0, 0.25);
            const auto dist = temporal_distribution(draw.state, draw.gauge, tgrid, kind);
            const auto md = moments_distribution(dist);
            const auto ms = moments_spectral(draw.state, draw.gauge, kind);
            worst = std::max(worst, std::abs(md.mean - ms.mean) / std::abs(ms.mean));
            worst = std::max(worst,
                             std::abs(md.second_moment - ms.second_moment) / ms.second_moment);
            worst = std::max(worst, std::abs(md.variance - ms.variance) / ms.variance);
        }
    }
    return {worst < 1e-5, "max relative moment mismatch = " + fmt(worst)};
}

struct SmithData {
    ArrivalMeanReport relations;
    double td_delay;
    double seconds;
};

const SmithData& smith_data() {
    static const SmithData data = [] {
        const auto t0 = clock_type::now();
        const auto profile = build_phase_profile(grid_fig(), delta_potential(20.0, 20.0));
        const auto relations = arrival_mean_relations(packet_fig(), profile);
        const auto out = map_asymptotic(packet_fig(), profile, AsymptoticTarget::out);
        const TemporalGrid tgrid(-150.0, 0.25, 2401);
        const auto gauge = identity_gauge(grid_fig(), 1);
        const auto din = temporal_distribution(packet_fig(), gauge, tgrid, TimeKind::arrival);
        const auto dout = temporal_distribution(out, gauge, tgrid, TimeKind::arrival, 0.99);
        const double td =
            moments_distribution(dout, 0.99).mean - moments_distribution(din).mean;
        return SmithData{relations, td, seconds_since(t0)};
    }();
    return data;
}

Outcome criterion_smith() {
    const auto& d = smith_data();
    const double rel = std::abs(d.td_delay - d.relations.delay) / std::abs(d.relations.delay);
    const bool pass = rel < 0.01 && d.relations.delay < 0.0 && d.seconds < 60.0;
    return {pass, "delay = " + fmt(d.relations.delay) + ", distribution route = " +
                      fmt(d.td_delay) + ", rel = " + fmt(rel) + ", " + fmt(d.seconds) + " s"};
}

Outcome criterion_opaque() {
    const auto profile = build_phase_profile(grid_fig(), delta_potential(200.0, 20.0));
    const double delay = smith_delay(packet_fig(), profile);
    const double oracle = -2.0 * 20.0 * inverse_speed(packet_fig());
    const double rel = std::abs(delay - oracle) / std::abs(oracle);
    return {rel < 0.02, "delay = " + fmt(delay) + ", wall oracle = " + fmt(oracle) +
                            ", rel = " + fmt(rel)};
}

Outcome criterion_io_midpoint() {
    const auto& d = smith_data();
    const double tol = 1e-4 * std::max(1.0, std::abs(d.relations.delay));
    return {d.relations.io_residual <= tol,
            "|mean_io - (mean_in + mean_out)/2| = " + fmt(d.relations.io_residual) +
                ", tol = " + fmt(tol)};
}

Outcome criterion_first_arrival() {
    const auto psi = gaussian_packet(grid_free(), 1.6, 0.16, 40.0, 0.5);
    const double invv = inverse_speed(psi);
    const double base = moments_spectral(psi, identity_gauge(grid_free(), 1),
                                         TimeKind::arrival).mean;
    double worst_rel = 0.0;
    for (const double a : {5.0, 20.0}) {
        const double mean =
            moments_spectral(psi, arrival_plane_gauge(grid_free(), 1, a), TimeKind::arrival).mean;
        worst_rel = std::max(worst_rel,
                             std::abs((mean - base) - (-a * invv)) / (a * invv));
    }
    const TemporalGrid tgrid(-80.0, 0.25, 961);
    const auto direct =
        temporal_distribution(psi, identity_gauge(grid_free(), 1), tgrid, TimeKind::arrival);
    const auto at0 = first_arrival_distribution(psi, 0.0, tgrid);
    double sup0 = 0.0;
    for (std::size_t k = 0; k < tgrid.size(); ++k)
        sup0 = std::max(sup0, std::abs(at0.density()[k] - direct.density()[k]));
    return {worst_rel < 1e-4 && sup0 <= 1e-12,
            "shift-law rel = " + fmt(worst_rel) + ", a=0 reduction sup = " + fmt(sup0)};
}

Outcome criterion_figures() {
    auto cfg1 = default_scenario_config("fig1");
    cfg1.output_dir = "acceptance_out/fig1";
    const auto rep1 = run_scenario(cfg1);
    auto cfg2 = default_scenario_config("fig2");
    cfg2.output_dir = "acceptance_out/fig2";
    const auto rep2 = run_scenario(cfg2);
    auto row = [](const RunReport& r, const std::string& name) -> const CheckRow& {
        for (const auto& c : r.checks)
            if (c.name == name) return c;
        throw std::runtime_error("missing check " + name);
    };
    const auto& peak = row(rep1, "t0_peak_position");
    const auto& edge = row(rep1, "t190_leading_edge_advance");
    const auto& oio = row(rep2, "mean_ordering_out_io");
    const auto& ioin = row(rep2, "mean_ordering_io_in");
    const bool pass = peak.pass && edge.pass && oio.pass && ioin.pass;
    return {pass, "peak = " + fmt(peak.measured) + ", edge advance = " + fmt(edge.measured) +
                      ", ordering gaps = " + fmt(oio.measured) + "/" + fmt(ioin.measured)};
}

Outcome criterion_lyapunov() {
    std::mt19937_64 rng(909);
    const auto gauge1 = identity_gauge(grid_free(), 1);
    double worst_inc = -1e300, worst_end = 0.0, worst_acc = 0.0;
    for (std::size_t i = 0; i < 5; ++i) {
        const auto psi = random_state(grid_free(), 1, rng);
        const auto tgrid = centered_window(psi, gauge1, TimeKind::arrival, 130.0, 0.25);
        const auto curve = lyapunov_curve(psi, gauge1, tgrid);
        worst_inc = std::max(worst_inc, curve.max_increment());
        worst_end = std::max({worst_end, std::abs(curve.front() - 1.0), std::abs(curve.back())});
        const auto dist = temporal_distribution(psi, gauge1, tgrid, TimeKind::arrival);
        double cum = 0.0;
        for (std::size_t k = 0; k < tgrid.size(); ++k) {
            if (k > 0)
                cum += 0.5 * tgrid.dt() * (dist.density()[k - 1] + dist.density()[k]);
            worst_acc = std::max(worst_acc, std::abs(curve.values()[k] - (1.0 - cum)));
        }
    }

    const auto psi = gaussian_packet(grid_free(), 1.6, 0.16, 40.0, 0.5);
    const TemporalGrid tgrid(-60.0, 0.25, 721);
    const auto reference = lyapunov_curve(psi, gauge1, tgrid);
    const double width = energy_width(psi);
    std::vector<double> devs;
    for (const double f : {1e-1, 1e-2, 1e-3}) {
        const auto curve = strauss_expectation(psi, StraussKernel(grid_free(), f * width), tgrid);
        double dev = 0.0;
        for (std::size_t k = 0; k < tgrid.size(); ++k)
            dev = std::max(dev, std::abs(curve.values()[k] - reference.values()[k]));
        devs.push_back(dev);
    }
    const bool strauss_ok = devs[0] > devs[1] && devs[1] > devs[2];
    const bool pass =
        worst_inc <= 1e-10 && worst_end <= 1e-3 && worst_acc < 1e-10 && strauss_ok;
    return {pass, "max increment = " + fmt(worst_inc) + ", endpoint defect = " + fmt(worst_end) +
                      ", accumulation sup = " + fmt(worst_acc) + ", strauss devs = " +
                      fmt(devs[0]) + " > " + fmt(devs[1]) + " > " + fmt(devs[2])};
}

Outcome criterion_reversal() {
    const TemporalGrid tgrid(-450.0, 0.25, 3601);
    const double sup = reversal_identity_check(packet_fig(), identity_gauge(grid_fig(), 1), tgrid);
    return {sup < 1e-8, "sup deviation = " + fmt(sup)};
}

Outcome criterion_certificate() {
    std::mt19937_64 rng(1111);
    std::normal_distribution<double> gauss(0.0, 1.0);
    std::vector<EnergyGrid> grids;
    for (int n = 3; n <= 8; ++n) grids.push_back(build_energy_grid(1.0, 1, n));
    std::size_t witnessed = 0;
    for (std::size_t trial = 0; trial < 1000; ++trial) {
        const auto& grid = grids[trial % grids.size()];
        const std::size_t n = grid.size(), rank = 1 + trial % 4;
        std::vector<cplx> k(n * n, 0.0);
        for (std::size_t r = 0; r < rank; ++r) {
            std::vector<cplx> col(n);
            for (auto& v : col) v = cplx(gauss(rng), gauss(rng));
            for (std::size_t a = 0; a < n; ++a)
                for (std::size_t b = 0; b < n; ++b) k[a * n + b] += col[a] * std::conj(col[b]);
        }
        double trace = 0.0;
        for (std::size_t a = 0; a < n; ++a) trace += k[a * n + a].real();
        if (trace <= 1e-6) continue;
        const auto verdict = no_invariant_lyapunov_certificate(DensityKernel(grid, 1, k));
        if (!verdict.trivial && verdict.negativity < 0.0 && verdict.witness_index < n)
            ++witnessed;
        else
            return {false, "witness missing at trial " + std::to_string(trial)};
    }
    const auto& g3 = grids.front();
    const DensityKernel zero(g3, 1, std::vector<cplx>(g3.size() * g3.size(), 0.0));
    const bool zero_ok = no_invariant_lyapunov_certificate(zero).trivial;
    return {witnessed == 1000 && zero_ok,
            std::to_string(witnessed) + "/1000 witnessed, zero kernel trivial = " +
                (zero_ok ? "yes" : "no")};
}

Outcome criterion_variance_scan() {
    const auto psi = gaussian_packet(grid_free(), 1.6, 0.16, 0.0, 0.5);

    // independent floor: analytic derivative of the packet profile
    const double k0 = 1.6, dk = 0.16, beta = 0.5;
    const auto& grid = grid_free();
    double num = 0.0, den = 0.0;
    for (std::size_t j = 0; j < grid.size(); ++j) {
        const double k = wavenumber(grid.node(j));
        const double gs = std::exp(-(k - k0) * (k - k0) / (4.0 * dk * dk));
        const double cut = 1.0 - std::exp(-beta * k * k);
        const double raw = cut * gs / std::sqrt(k);
        const double dA = 2.0 * beta * k * std::exp(-beta * k * k) * gs -
                          cut * gs * (k - k0) / (2.0 * dk * dk);
        const double draw = (dA / std::sqrt(k) - 0.5 * cut * gs / std::pow(k, 1.5)) / k;
        num += grid.weight(j) * draw * draw;
        den += grid.weight(j) * raw * raw;
    }
    const double floor_analytic = num / den;

    std::vector<double> lams;
    for (int i = 0; i <= 80; ++i) lams.push_back(-10.0 + 0.25 * i);
    const auto lin = variance_gauge_scan(psi, [](double e, double p) { return p * e; }, lams);
    double flat = 0.0;
    for (const double v : lin.variances)
        flat = std::max(flat, std::abs(v - lin.floor) / lin.floor);
    const double floor_rel = std::abs(lin.floor - floor_analytic) / floor_analytic;

    const std::vector<double> mus = {0.0, 0.2, 0.4, 0.8, 1.6};
    const auto quad = variance_gauge_scan(psi, [](double e, double p) { return p * e * e; }, mus);
    bool strict = true;
    for (std::size_t i = 1; i < mus.size(); ++i)
        strict = strict && quad.variances[i] > quad.variances[i - 1];

    const double mu0 = 3.7;
    std::vector<double> window;
    for (int i = 0; i <= 28; ++i) window.push_back(3.0 + 0.05 * i);
    const auto match = variance_gauge_scan(
        psi, [](double e, double p) { return p * e * e; }, window,
        [mu0](double e) { return mu0 * e * e; });
    const bool min_ok = std::abs(match.min_param - mu0) <= 0.05 + 1e-12;

    const bool pass = flat < 1e-8 && floor_rel < 1e-6 && strict && min_ok;
    return {pass, "flatness = " + fmt(flat) + ", floor rel = " + fmt(floor_rel) +
                      ", quadratic strict = " + (strict ? "yes" : "no") +
                      ", min at " + fmt(match.min_param)};
}

Outcome criterion_kernel_roundtrip() {
    std::mt19937_64 rng(1313);
    std::normal_distribution<double> gauss(0.0, 1.0);
    const auto grid = build_energy_grid(4.0, 6, 4);
    double worst = 0.0;
    for (const auto& [channels, members] :
         {std::pair<std::size_t, std::size_t>{1, 1}, {1, 3}, {1, 4}, {2, 2}, {2, 3}, {2, 4}}) {
        // random normalized family via per-node Gram-Schmidt of an m x C draw
        std::vector<std::vector<cplx>> mem(members,
                                           std::vector<cplx>(grid.size() * channels));
        for (std::size_t j = 0; j < grid.size(); ++j) {
            std::vector<std::vector<cplx>> cols(channels, std::vector<cplx>(members));
            for (auto& col : cols)
                for (auto& v : col) v = cplx(gauss(rng), gauss(rng));
            for (std::size_t c = 0; c < channels; ++c) {
                for (std::size_t p = 0; p < c; ++p) {
                    cplx dot = 0.0;
                    for (std::size_t i = 0; i < members; ++i)
                        dot += std::conj(cols[p][i]) * cols[c][i];
                    for (std::size_t i = 0; i < members; ++i) cols[c][i] -= dot * cols[p][i];
                }
                double nrm = 0.0;
                for (std::size_t i = 0; i < members; ++i) nrm += std::norm(cols[c][i]);
                nrm = std::sqrt(nrm);
                for (std::size_t i = 0; i < members; ++i) cols[c][i] /= nrm;
            }
            for (std::size_t i = 0; i < members; ++i)
                for (std::size_t c = 0; c < channels; ++c)
                    mem[i][j * channels + c] = cols[c][i];
        }
        const GaugeFamily family(grid, channels, std::move(mem));
        const auto kernel = kernel_from_gauge(family);
        const auto recovered = gauge_from_kernel(kernel);
        worst = std::max(worst, kernel_reconstruction_error(kernel, recovered));
    }
    return {worst < 1e-8, "max reconstruction error = " + fmt(worst)};
}

}  // namespace

int main() {
    unsetenv("TEMPUS_OUT");
    struct Entry {
        const char* label;
        std::function<Outcome()> fn;
    };
    const std::vector<Entry> entries = {
        {"normalization of randomized temporal densities", criterion_normalization},
        {"covariant translation of densities", criterion_covariance},
        {"spectral vs distribution moments", criterion_moments},
        {"delay identity on the barrier packet", criterion_smith},
        {"opaque-barrier delay against the wall oracle", criterion_opaque},
        {"io asymptote mean midpoint", criterion_io_midpoint},
        {"first-arrival shift law and origin reduction", criterion_first_arrival},
        {"figure scenarios: peak, advancement, ordering", criterion_figures},
        {"accumulation curves and strauss convergence", criterion_lyapunov},
        {"time-reversal identity on the barrier packet", criterion_reversal},
        {"negativity certificate on random kernels", criterion_certificate},
        {"variance scan floor and minimum", criterion_variance_scan},
        {"kernel-gauge round trip", criterion_kernel_roundtrip},
    };
    int failures = 0;
    for (std::size_t i = 0; i < entries.size(); ++i) {
        Outcome out{false, ""};
        try {
            out = entries[i].fn();
        } catch (const std::exception& e) {
            out = {false, std::string("exception: ") + e.what()};
        }
        if (!out.pass) ++failures;
        std::printf("C%02zu %s  %s (%s)\n", i + 1, out.pass ? "PASS" : "FAIL",
                    entries[i].label, out.detail.c_str());
    }
    std::printf("acceptance: %zu/13 passed\n", entries.size() - failures);
    return failures;
}
