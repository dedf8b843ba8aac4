#pragma once

// Minimal complex-to-complex FFT used by the spectral derivative kernels.
// Radix-2 iterative transform for power-of-two lengths, naive DFT otherwise
// (grids are desk scale, so the O(n^2) fallback is acceptable).

#include <complex>
#include <numbers>
#include <stdexcept>
#include <vector>

namespace swrd::detail {

using cplx = std::complex<double>;

inline bool is_pow2(std::size_t n) { return n != 0 && (n & (n - 1)) == 0; }

inline void fft_radix2(std::vector<cplx>& a, bool inverse) {
    const std::size_t n = a.size();
    for (std::size_t i = 1, j = 0; i < n; ++i) {
        std::size_t bit = n >> 1;
        for (; j & bit; bit >>= 1) j ^= bit;
        j ^= bit;
        if (i < j) std::swap(a[i], a[j]);
    }
    for (std::size_t len = 2; len <= n; len <<= 1) {
        const double ang = 2.0 * std::numbers::pi / static_cast<double>(len) * (inverse ? 1.0 : -1.0);
        const cplx wl(std::cos(ang), std::sin(ang));
        for (std::size_t i = 0; i < n; i += len) {
            cplx w(1.0, 0.0);
            for (std::size_t k = 0; k < len / 2; ++k) {
                cplx u = a[i + k];
                cplx v = a[i + k + len / 2] * w;
                a[i + k] = u + v;
                a[i + k + len / 2] = u - v;
                w *= wl;
            }
        }
    }
}

inline void dft_naive(std::vector<cplx>& a, bool inverse) {
    const std::size_t n = a.size();
    std::vector<cplx> out(n, cplx(0.0, 0.0));
    const double s = inverse ? 1.0 : -1.0;
    for (std::size_t k = 0; k < n; ++k) {
        for (std::size_t j = 0; j < n; ++j) {
            const double ang = s * 2.0 * std::numbers::pi * static_cast<double>(k * j % n) / static_cast<double>(n);
            out[k] += a[j] * cplx(std::cos(ang), std::sin(ang));
        }
    }
    a = std::move(out);
}

// In-place transform. Forward is unnormalized; inverse divides by n.
inline void fft(std::vector<cplx>& a, bool inverse) {
    if (a.empty()) throw std::invalid_argument("fft: empty input");
    if (is_pow2(a.size()))
        fft_radix2(a, inverse);
    else
        dft_naive(a, inverse);
    if (inverse) {
        const double inv = 1.0 / static_cast<double>(a.size());
        for (auto& v : a) v *= inv;
    }
}

// Signed integer wavenumber for bin k of an n-point transform.
inline int wavenumber(std::size_t k, std::size_t n) {
    return k < n / 2 ? static_cast<int>(k) : static_cast<int>(k) - static_cast<int>(n);
}

}  // namespace swrd::detail
