#pragma once

#include <cmath>
#include <complex>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

#include "../errors.hpp"

namespace tempus::detail {

using cplx = std::complex<double>;

// Dense row-major Hermitian matrix helpers sized for desk-scale use.

// Cyclic Jacobi eigensolver for Hermitian complex matrices. Eigenvalues
// ascend; eigenvectors (columns of V) returned when vecs != nullptr.
inline std::vector<double>
hermitian_eigenvalues(std::vector<cplx> a, std::size_t n,
                      std::vector<cplx>* vecs = nullptr) {
    if (n == 0) throw std::invalid_argument("hermitian_eigenvalues: empty matrix");
    if (a.size() != n * n) throw std::invalid_argument("hermitian_eigenvalues: size mismatch");
    std::vector<cplx> V;
    if (vecs) {
        V.assign(n * n, cplx{0.0, 0.0});
        for (std::size_t i = 0; i < n; ++i) V[i * n + i] = 1.0;
    }
    auto off_norm = [&]() {
        double s = 0.0;
        for (std::size_t p = 0; p < n; ++p)
            for (std::size_t q = p + 1; q < n; ++q) s += std::norm(a[p * n + q]);
        return s;
    };
    double scale = 0.0;
    for (std::size_t i = 0; i < n; ++i) scale = std::max(scale, std::abs(a[i * n + i].real()));
    for (std::size_t p = 0; p < n; ++p)
        for (std::size_t q = 0; q < n; ++q) scale = std::max(scale, std::abs(a[p * n + q]));
    const double tol = 1e-30 * std::max(1.0, scale * scale);
    for (int sweep = 0; sweep < 100 && off_norm() > tol * n * n; ++sweep) {
        for (std::size_t p = 0; p < n; ++p) {
            for (std::size_t q = p + 1; q < n; ++q) {
                const cplx apq = a[p * n + q];
                if (std::norm(apq) == 0.0) continue;
                // Unitary 2x2 rotation annihilating a[p][q]:
                //   factor out the phase of a[p][q], then a real Jacobi rotation.
                const double app = a[p * n + p].real();
                const double aqq = a[q * n + q].real();
                const double absapq = std::abs(apq);
                const cplx phase = apq / absapq;
                const double theta = (aqq - app) / (2.0 * absapq);
                const double t = (theta >= 0.0 ? 1.0 : -1.0) /
                                 (std::abs(theta) + std::sqrt(theta * theta + 1.0));
                const double c = 1.0 / std::sqrt(t * t + 1.0);
                const double s = t * c;
                const cplx sp = s * phase;  // complex sine carrying the phase
                for (std::size_t k = 0; k < n; ++k) {
                    const cplx akp = a[k * n + p];
                    const cplx akq = a[k * n + q];
                    a[k * n + p] = c * akp - std::conj(sp) * akq;
                    a[k * n + q] = sp * akp + c * akq;
                }
                for (std::size_t k = 0; k < n; ++k) {
                    const cplx apk = a[p * n + k];
                    const cplx aqk = a[q * n + k];
                    a[p * n + k] = c * apk - sp * aqk;
                    a[q * n + k] = std::conj(sp) * apk + c * aqk;
                }
                if (vecs) {
                    for (std::size_t k = 0; k < n; ++k) {
                        const cplx vkp = V[k * n + p];
                        const cplx vkq = V[k * n + q];
                        V[k * n + p] = c * vkp - std::conj(sp) * vkq;
                        V[k * n + q] = sp * vkp + c * vkq;
                    }
                }
            }
        }
    }
    std::vector<double> ev(n);
    for (std::size_t i = 0; i < n; ++i) ev[i] = a[i * n + i].real();
    // insertion sort ascending, carrying eigenvectors
    for (std::size_t i = 1; i < n; ++i) {
        const double key = ev[i];
        std::vector<cplx> col;
        if (vecs) {
            col.resize(n);
            for (std::size_t k = 0; k < n; ++k) col[k] = V[k * n + i];
        }
        std::size_t j = i;
        while (j > 0 && ev[j - 1] > key) {
            ev[j] = ev[j - 1];
            if (vecs)
                for (std::size_t k = 0; k < n; ++k) V[k * n + j] = V[k * n + j - 1];
            --j;
        }
        ev[j] = key;
        if (vecs)
            for (std::size_t k = 0; k < n; ++k) V[k * n + j] = col[k];
    }
    if (vecs) *vecs = std::move(V);
    return ev;
}

// Diagonally pivoted Cholesky of a Hermitian PSD matrix. Returns columns
// l_i (in the original index order) with K = sum_i l_i l_i^dagger up to the
// rank cutoff; pivots below rank_tol * max-initial-diagonal end the sweep,
// pivots below the negative of that threshold reject the matrix.
inline std::vector<std::vector<cplx>>
pivoted_cholesky(std::vector<cplx> k, std::size_t n, double rank_tol) {
    if (k.size() != n * n) throw std::invalid_argument("pivoted_cholesky: size mismatch");
    std::vector<double> diag(n);
    double d0 = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        diag[i] = k[i * n + i].real();
        d0 = std::max(d0, std::abs(diag[i]));
    }
    if (d0 == 0.0) return {};
    const double cut = rank_tol * d0;
    std::vector<std::vector<cplx>> cols;
    std::vector<bool> used(n, false);
    for (std::size_t step = 0; step < n; ++step) {
        std::size_t p = n;
        double best = -1.0;
        for (std::size_t i = 0; i < n; ++i)
            if (!used[i] && diag[i] > best) { best = diag[i]; p = i; }
        if (p == n) break;
        if (best < -cut)
            throw NotPositiveSemidefiniteError("pivoted_cholesky: negative pivot");
        if (best <= cut) break;
        const double piv = std::sqrt(best);
        std::vector<cplx> l(n, cplx{0.0, 0.0});
        for (std::size_t i = 0; i < n; ++i) {
            if (used[i]) continue;
            cplx v = k[i * n + p];
            for (const auto& prev : cols) v -= prev[i] * std::conj(prev[p]);
            l[i] = v / piv;
        }
        l[p] = piv;  // exact by construction
        for (std::size_t i = 0; i < n; ++i)
            if (!used[i]) diag[i] -= std::norm(l[i]);
        diag[p] = 0.0;
        used[p] = true;
        cols.push_back(std::move(l));
    }
    // For semidefinite input the Schur complement obeys |R_ij|^2 <= R_ii R_jj,
    // so stopping at the pivot cut leaves residual entries below it. A larger
    // residual certifies an indefinite matrix hiding behind a zero diagonal.
    double residual = 0.0;
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) {
            cplx v = k[i * n + j];
            for (const auto& col : cols) v -= col[i] * std::conj(col[j]);
            residual = std::max(residual, std::abs(v));
        }
    if (residual > std::max(16.0 * cut, 1e-12 * d0 * static_cast<double>(n)))
        throw NotPositiveSemidefiniteError("pivoted_cholesky: factorization residual " +
                                           std::to_string(residual) +
                                           " certifies an indefinite matrix");
    return cols;
}

}  // namespace tempus::detail
