/*
 * kernel.hpp — density kernels K(E_j a, E_l a') and the kernel ↔ gauge
 * conversions.
 *
 * A gauge family generates K = sum_i b_i b_i^† over the composite
 * node-channel index (quadrature weights stay outside the entries, so an
 * admissible family gives unit channel-diagonal). The reverse direction
 * factors the weighted kernel  K~ = D K D,  D = diag(sqrt(w_j)),  by pivoted
 * Cholesky and unweights the columns, recovering a family of size equal to
 * the numerical rank that reproduces K. Only the kernel is canonical: any
 * unitary mixing of members gives the same K.
 */
#pragma once

#include <cmath>
#include <complex>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "detail/linalg.hpp"
#include "energy_grid.hpp"
#include "errors.hpp"
#include "gauge.hpp"

namespace tempus {

class DensityKernel {
  public:
    // matrix is row-major over the composite index (j, alpha) -> j*C + alpha.
    DensityKernel(EnergyGrid grid, std::size_t channels, std::vector<cplx> matrix)
        : grid_(std::move(grid)), channels_(channels), matrix_(std::move(matrix)) {
        if (channels_ < 1) throw std::invalid_argument("DensityKernel: need >= 1 channel");
        n_ = grid_.size() * channels_;
        if (matrix_.size() != n_ * n_)
            throw std::invalid_argument("DensityKernel: matrix size != (nodes*channels)^2");
        double scale = 0.0;
        for (const auto& z : matrix_) scale = std::max(scale, std::abs(z));
        for (std::size_t r = 0; r < n_; ++r)
            for (std::size_t s = r; s < n_; ++s)
                if (std::abs(matrix_[r * n_ + s] - std::conj(matrix_[s * n_ + r])) >
                    1e-12 * std::max(1.0, scale))
                    throw std::invalid_argument("DensityKernel: matrix not Hermitian");
    }

    const EnergyGrid& grid() const { return grid_; }
    std::size_t channels() const { return channels_; }
    std::size_t dim() const { return n_; }
    const std::vector<cplx>& matrix() const { return matrix_; }
    cplx entry(std::size_t r, std::size_t s) const { return matrix_[r * n_ + s]; }

  private:
    EnergyGrid grid_;
    std::size_t channels_;
    std::vector<cplx> matrix_;
    std::size_t n_;
};

inline DensityKernel kernel_from_gauge(const GaugeFamily& gauge) {
    detail::require_normalized(gauge, "kernel_from_gauge");
    const std::size_t n = gauge.grid().size() * gauge.channels();
    std::vector<cplx> k(n * n, 0.0);
    for (std::size_t i = 0; i < gauge.size(); ++i) {
        const auto& b = gauge.member(i);
        for (std::size_t r = 0; r < n; ++r)
            for (std::size_t s = 0; s < n; ++s) k[r * n + s] += b[r] * std::conj(b[s]);
    }
    return DensityKernel(gauge.grid(), gauge.channels(), std::move(k));
}

// Recover a gauge family from a PSD kernel with unit channel-diagonal. The
// member count is the numerical rank at threshold rank_tol relative to the
// largest weighted diagonal entry.
inline GaugeFamily gauge_from_kernel(const DensityKernel& kernel, double rank_tol = 1e-10) {
    const std::size_t c = kernel.channels();
    const std::size_t nn = kernel.grid().size();
    const std::size_t n = kernel.dim();

    for (std::size_t j = 0; j < nn; ++j)
        for (std::size_t a = 0; a < c; ++a)
            for (std::size_t ap = 0; ap < c; ++ap) {
                const cplx want = a == ap ? cplx(1.0) : cplx(0.0);
                if (std::abs(kernel.entry(j * c + a, j * c + ap) - want) > 1e-8)
                    throw std::invalid_argument(
                        "gauge_from_kernel: kernel lacks unit channel-diagonal");
            }

    std::vector<double> root_w(n);
    for (std::size_t j = 0; j < nn; ++j)
        for (std::size_t a = 0; a < c; ++a) root_w[j * c + a] = std::sqrt(kernel.grid().weight(j));

    std::vector<cplx> weighted(n * n);
    for (std::size_t r = 0; r < n; ++r)
        for (std::size_t s = 0; s < n; ++s)
            weighted[r * n + s] = root_w[r] * kernel.entry(r, s) * root_w[s];

    const auto columns = detail::pivoted_cholesky(std::move(weighted), n, rank_tol);
    if (columns.empty())
        throw std::invalid_argument("gauge_from_kernel: kernel has numerical rank 0");

    std::vector<std::vector<cplx>> members;
    members.reserve(columns.size());
    for (const auto& col : columns) {
        std::vector<cplx> b(n);
        for (std::size_t r = 0; r < n; ++r) b[r] = col[r] / root_w[r];
        members.push_back(std::move(b));
    }
    return GaugeFamily(kernel.grid(), c, std::move(members));
}

// Largest absolute entry of K - sum_i b_i b_i^†, the round-trip residual.
inline double kernel_reconstruction_error(const DensityKernel& kernel, const GaugeFamily& gauge) {
    if (!same_grid(kernel.grid(), gauge.grid()) || kernel.channels() != gauge.channels())
        throw IncompatibleGridError("kernel_reconstruction_error: mismatched grids");
    const std::size_t n = kernel.dim();
    double worst = 0.0;
    for (std::size_t r = 0; r < n; ++r)
        for (std::size_t s = 0; s < n; ++s) {
            cplx acc = 0.0;
            for (std::size_t i = 0; i < gauge.size(); ++i)
                acc += gauge.member(i)[r] * std::conj(gauge.member(i)[s]);
            worst = std::max(worst, std::abs(kernel.entry(r, s) - acc));
        }
    return worst;
}

}  // namespace tempus
