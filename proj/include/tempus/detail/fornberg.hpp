#pragma once

#include <complex>
#include <cstddef>
#include <stdexcept>
#include <vector>

namespace tempus::detail {

// Finite-difference weights on arbitrary nodes (Fornberg's algorithm).
// Returns weights c such that f^(m)(x0) ~= sum_i c[i] f(xs[i]).
inline std::vector<double>
fd_weights(const double* xs, std::size_t n, double x0, int m) {
    if (n == 0 || m < 0 || static_cast<std::size_t>(m) >= n)
        throw std::invalid_argument("fd_weights: need more nodes than derivative order");
    std::vector<double> c(n * static_cast<std::size_t>(m + 1), 0.0);
    auto C = [&](std::size_t i, int k) -> double& {
        return c[i * static_cast<std::size_t>(m + 1) + static_cast<std::size_t>(k)];
    };
    double c1 = 1.0;
    double c4 = xs[0] - x0;
    C(0, 0) = 1.0;
    for (std::size_t i = 1; i < n; ++i) {
        const int mn = static_cast<int>(i < static_cast<std::size_t>(m) ? i : static_cast<std::size_t>(m));
        double c2 = 1.0;
        const double c5 = c4;
        c4 = xs[i] - x0;
        for (std::size_t j = 0; j < i; ++j) {
            const double c3 = xs[i] - xs[j];
            c2 *= c3;
            if (j == i - 1) {
                for (int k = mn; k >= 1; --k)
                    C(i, k) = c1 * (k * C(i - 1, k - 1) - c5 * C(i - 1, k)) / c2;
                C(i, 0) = -c1 * c5 * C(i - 1, 0) / c2;
            }
            for (int k = mn; k >= 1; --k)
                C(j, k) = (c4 * C(j, k) - k * C(j, k - 1)) / c3;
            C(j, 0) = c4 * C(j, 0) / c3;
        }
        c1 = c2;
    }
    std::vector<double> out(n);
    for (std::size_t i = 0; i < n; ++i) out[i] = C(i, m);
    return out;
}

// Precomputed first-derivative stencils over a full node set: 9-point
// interior stencils, sliding one-sided near the ends. Built once per grid,
// applied to any sampled function.
class FirstDerivative {
  public:
    explicit FirstDerivative(const std::vector<double>& nodes)
        : n_(nodes.size()) {
        if (n_ < 2) throw std::invalid_argument("FirstDerivative: need at least 2 nodes");
        width_ = n_ < 9 ? n_ : 9;
        lo_.resize(n_);
        w_.resize(n_ * width_);
        const std::size_t half = (width_ - 1) / 2;
        for (std::size_t i = 0; i < n_; ++i) {
            std::size_t lo = i > half ? i - half : 0;
            if (lo + width_ > n_) lo = n_ - width_;
            lo_[i] = lo;
            auto c = fd_weights(nodes.data() + lo, width_, nodes[i], 1);
            for (std::size_t j = 0; j < width_; ++j) w_[i * width_ + j] = c[j];
        }
    }

    template <typename T>
    std::vector<T> apply(const std::vector<T>& f) const {
        if (f.size() != n_) throw std::invalid_argument("FirstDerivative: size mismatch");
        std::vector<T> out(n_);
        for (std::size_t i = 0; i < n_; ++i) {
            T acc{};
            const std::size_t lo = lo_[i];
            for (std::size_t j = 0; j < width_; ++j)
                acc += w_[i * width_ + j] * f[lo + j];
            out[i] = acc;
        }
        return out;
    }

    // Strided variant for interleaved multi-channel samples.
    template <typename T>
    std::vector<T> apply_strided(const std::vector<T>& f, std::size_t stride,
                                 std::size_t offset) const {
        if (f.size() < offset + (n_ - 1) * stride + 1)
            throw std::invalid_argument("FirstDerivative: strided size mismatch");
        std::vector<T> out(n_);
        for (std::size_t i = 0; i < n_; ++i) {
            T acc{};
            const std::size_t lo = lo_[i];
            for (std::size_t j = 0; j < width_; ++j)
                acc += w_[i * width_ + j] * f[offset + (lo + j) * stride];
            out[i] = acc;
        }
        return out;
    }

    std::size_t size() const { return n_; }

  private:
    std::size_t n_;
    std::size_t width_;
    std::vector<std::size_t> lo_;
    std::vector<double> w_;
};

}  // namespace tempus::detail
