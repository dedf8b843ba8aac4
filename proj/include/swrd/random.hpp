#pragma once

// Seeded counter-based randomness (splitmix64) so every suite is reproducible
// across platforms, plus band-limited random fields with the repo-wide
// spectral cutoff nx/4.

#include <cstdint>
#include <vector>

#include "swrd/grid.hpp"

namespace swrd {

struct Rng {
    std::uint64_t state;

    explicit Rng(std::uint64_t seed) : state(seed) {}

    std::uint64_t next_u64() {
        std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }
    // uniform in [0,1)
    double next_double() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }
    // uniform in [-1,1)
    double next_signed() { return 2.0 * next_double() - 1.0; }
};

// Smooth random torus field built from Fourier modes |m|,|n| <= cutoff
// (default nx/4), amplitudes damped by 1/(1+m^2+n^2).
inline ScalarField random_band_limited(const GridSpec& g, Rng& rng, int cutoff = 0, double amplitude = 1.0) {
    if (!g.torus_domain()) throw std::invalid_argument("random_band_limited: torus only");
    if (cutoff <= 0) cutoff = g.nx / 4;
    ScalarField f(g);
    struct Mode { int m, n; cplx c; };
    std::vector<Mode> modes;
    for (int m = -cutoff; m <= cutoff; ++m)
        for (int n = -cutoff; n <= cutoff; ++n) {
            const double damp = 1.0 / (1.0 + m * m + n * n);
            modes.push_back({m, n, amplitude * damp * cplx(rng.next_signed(), rng.next_signed())});
        }
    for (int iy = 0; iy < g.ny; ++iy)
        for (int ix = 0; ix < g.nx; ++ix) {
            const double x = g.x(ix), y = g.y(iy);
            cplx v(0.0, 0.0);
            for (const auto& md : modes)
                v += md.c * std::exp(cplx(0.0, md.m * x + md.n * y));
            f(ix, iy) = v;
        }
    return f;
}

inline ScalarField random_band_limited_real(const GridSpec& g, Rng& rng, int cutoff = 0, double amplitude = 1.0) {
    ScalarField f = random_band_limited(g, rng, cutoff, amplitude);
    return real_part(f);
}

// Purely imaginary gauge generator zeta.
inline ScalarField random_imaginary(const GridSpec& g, Rng& rng, int cutoff = 0, double amplitude = 1.0) {
    return cplx(0.0, 1.0) * random_band_limited_real(g, rng, cutoff, amplitude);
}

inline OneForm random_imaginary_one_form(const GridSpec& g, Rng& rng, int cutoff = 0, double amplitude = 1.0) {
    return OneForm::imaginary(random_band_limited(g, rng, cutoff, amplitude));
}

// Smooth random patch field vanishing (with first derivatives) at the square
// boundary; used for perturbations and negative controls on the disk patch.
inline ScalarField random_patch_bump(const GridSpec& g, Rng& rng, int modes = 3, double amplitude = 1.0) {
    if (g.torus_domain()) throw std::invalid_argument("random_patch_bump: patch only");
    std::vector<double> cs;
    for (int k = 0; k < 2 * modes * modes; ++k) cs.push_back(rng.next_signed());
    const double s = g.half_side();
    ScalarField f(g);
    for (int iy = 0; iy < g.ny; ++iy)
        for (int ix = 0; ix < g.nx; ++ix) {
            const double u = g.x(ix) / s, v = g.y(iy) / s;
            const double bump = (1.0 - u * u) * (1.0 - u * u) * (1.0 - v * v) * (1.0 - v * v);
            cplx acc(0.0, 0.0);
            int t = 0;
            for (int a = 1; a <= modes; ++a)
                for (int b = 1; b <= modes; ++b) {
                    acc += cplx(cs[static_cast<std::size_t>(t)], cs[static_cast<std::size_t>(t + 1)]) *
                           std::sin(0.5 * a * std::numbers::pi * (u + 1.0)) *
                           std::sin(0.5 * b * std::numbers::pi * (v + 1.0));
                    t += 2;
                }
            f(ix, iy) = amplitude * bump * acc;
        }
    return f;
}

}  // namespace swrd
