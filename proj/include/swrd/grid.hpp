#pragma once

// Discretized 2-D domains and the complex-coordinate calculus on them:
// scalar fields, (1,0)/(0,1) forms, two-forms, conformal metric data,
// derivatives (spectral on the periodic torus, finite differences on the
// disk patch), quadrature and both Hodge star operators.
//
// Form bookkeeping (fixed once, tested via conjugation symmetry):
//   OneForm   a = p10 dz + p01 dzbar
//   imaginary-valued / unitary:  p01 = -conj(p10) nodewise
//   TwoForm   w = coeff dz/\dzbar;  iR-valued <=> coeff real
//   d(a)      = (dz(p01) - dzbar(p10)) dz/\dzbar
//   Int w     = sum coeff * (-2i) * dx dy

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <functional>
#include <stdexcept>
#include <string>
#include <vector>

#include "swrd/fft.hpp"

namespace swrd {

using cplx = std::complex<double>;

enum class DomainKind : unsigned char { periodic_torus = 0, disk_patch = 1 };

enum class RealityTag : unsigned char { imaginary_valued, unitary_connection, general };

struct GridSpec {
    DomainKind kind = DomainKind::periodic_torus;
    int nx = 0, ny = 0;
    double patch_radius = 0.6;  // r0 < 1, unit-disk coordinate
    int margin = 2;             // ghost layers on the patch

    static GridSpec torus(int nx, int ny) {
        GridSpec g{DomainKind::periodic_torus, nx, ny, 0.0, 0};
        g.validate();
        return g;
    }
    static GridSpec patch(int nx, int ny, double r0 = 0.6, int margin = 2) {
        GridSpec g{DomainKind::disk_patch, nx, ny, r0, margin};
        g.validate();
        return g;
    }

    void validate() const {
        if (nx < 8 || ny < 8 || nx % 2 != 0 || ny % 2 != 0)
            throw std::invalid_argument("GridSpec: nx, ny must be even and >= 8");
        if (kind == DomainKind::disk_patch) {
            if (!(patch_radius > 0.0 && patch_radius < 1.0))
                throw std::invalid_argument("GridSpec: patch radius must lie in (0,1)");
            if (margin < 2 || 2 * margin + 4 > std::min(nx, ny))
                throw std::invalid_argument("GridSpec: patch margin too small or too large");
        }
    }

    bool torus_domain() const { return kind == DomainKind::periodic_torus; }
    int size() const { return nx * ny; }
    int index(int ix, int iy) const { return iy * nx + ix; }

    // Patch nodes cover the square [-s,s]^2 inscribed in |z| <= r0.
    double half_side() const { return patch_radius / std::sqrt(2.0); }

    double dx() const {
        return torus_domain() ? 2.0 * std::numbers::pi / nx : 2.0 * half_side() / (nx - 1);
    }
    double dy() const {
        return torus_domain() ? 2.0 * std::numbers::pi / ny : 2.0 * half_side() / (ny - 1);
    }
    double x(int ix) const { return torus_domain() ? ix * dx() : -half_side() + ix * dx(); }
    double y(int iy) const { return torus_domain() ? iy * dy() : -half_side() + iy * dy(); }
    cplx z(int ix, int iy) const { return {x(ix), y(iy)}; }

    // Margin nodes exist only on the patch; all patch norms and integrals skip them.
    bool in_margin(int ix, int iy) const {
        if (torus_domain()) return false;
        return ix < margin || iy < margin || ix >= nx - margin || iy >= ny - margin;
    }

    double cell_area() const { return dx() * dy(); }

    friend bool operator==(const GridSpec& a, const GridSpec& b) {
        return a.kind == b.kind && a.nx == b.nx && a.ny == b.ny &&
               (a.torus_domain() || (a.patch_radius == b.patch_radius && a.margin == b.margin));
    }
};

inline void require_same_grid(const GridSpec& a, const GridSpec& b, const char* where) {
    if (!(a == b)) throw std::invalid_argument(std::string(where) + ": domain mismatch");
}

struct ScalarField {
    GridSpec grid;
    std::vector<cplx> values;

    ScalarField() = default;
    explicit ScalarField(const GridSpec& g, cplx fill = cplx(0.0, 0.0))
        : grid(g), values(static_cast<std::size_t>(g.size()), fill) {}

    cplx& operator()(int ix, int iy) { return values[static_cast<std::size_t>(grid.index(ix, iy))]; }
    cplx operator()(int ix, int iy) const { return values[static_cast<std::size_t>(grid.index(ix, iy))]; }
    cplx& operator[](std::size_t i) { return values[i]; }
    cplx operator[](std::size_t i) const { return values[i]; }
    std::size_t size() const { return values.size(); }

    bool all_finite() const {
        for (const auto& v : values)
            if (!std::isfinite(v.real()) || !std::isfinite(v.imag())) return false;
        return true;
    }

    static ScalarField sample(const GridSpec& g, const std::function<cplx(double, double)>& f) {
        ScalarField out(g);
        for (int iy = 0; iy < g.ny; ++iy)
            for (int ix = 0; ix < g.nx; ++ix) out(ix, iy) = f(g.x(ix), g.y(iy));
        return out;
    }
};

// -- nodewise arithmetic ----------------------------------------------------

inline ScalarField zip(const ScalarField& a, const ScalarField& b, const std::function<cplx(cplx, cplx)>& f) {
    require_same_grid(a.grid, b.grid, "zip");
    ScalarField out(a.grid);
    for (std::size_t i = 0; i < a.size(); ++i) out[i] = f(a[i], b[i]);
    return out;
}
inline ScalarField map(const ScalarField& a, const std::function<cplx(cplx)>& f) {
    ScalarField out(a.grid);
    for (std::size_t i = 0; i < a.size(); ++i) out[i] = f(a[i]);
    return out;
}

inline ScalarField operator+(const ScalarField& a, const ScalarField& b) {
    return zip(a, b, [](cplx x, cplx y) { return x + y; });
}
inline ScalarField operator-(const ScalarField& a, const ScalarField& b) {
    return zip(a, b, [](cplx x, cplx y) { return x - y; });
}
inline ScalarField operator*(const ScalarField& a, const ScalarField& b) {
    return zip(a, b, [](cplx x, cplx y) { return x * y; });
}
inline ScalarField operator*(cplx s, const ScalarField& a) {
    return map(a, [s](cplx x) { return s * x; });
}
inline ScalarField operator*(const ScalarField& a, cplx s) { return s * a; }
inline ScalarField operator-(const ScalarField& a) { return cplx(-1.0, 0.0) * a; }

inline ScalarField conj(const ScalarField& a) {
    return map(a, [](cplx x) { return std::conj(x); });
}
inline ScalarField real_part(const ScalarField& a) {
    return map(a, [](cplx x) { return cplx(x.real(), 0.0); });
}
inline ScalarField imag_part(const ScalarField& a) {
    return map(a, [](cplx x) { return cplx(x.imag(), 0.0); });
}
inline ScalarField abs2(const ScalarField& a) {
    return map(a, [](cplx x) { return cplx(std::norm(x), 0.0); });
}
inline ScalarField exp(const ScalarField& a) {
    return map(a, [](cplx x) { return std::exp(x); });
}

// -- norms (patch margins excluded) ------------------------------------------

inline double sup_norm(const ScalarField& f) {
    double m = 0.0;
    for (int iy = 0; iy < f.grid.ny; ++iy)
        for (int ix = 0; ix < f.grid.nx; ++ix)
            if (!f.grid.in_margin(ix, iy)) m = std::max(m, std::abs(f(ix, iy)));
    return m;
}

inline double l2_norm(const ScalarField& f) {
    double s = 0.0;
    for (int iy = 0; iy < f.grid.ny; ++iy)
        for (int ix = 0; ix < f.grid.nx; ++ix)
            if (!f.grid.in_margin(ix, iy)) s += std::norm(f(ix, iy));
    return std::sqrt(s * f.grid.cell_area());
}

// Quadrature of a scalar density against dx dy (uniform Riemann sum).
inline cplx integrate_scalar(const ScalarField& f) {
    cplx s(0.0, 0.0);
    for (int iy = 0; iy < f.grid.ny; ++iy)
        for (int ix = 0; ix < f.grid.nx; ++ix)
            if (!f.grid.in_margin(ix, iy)) s += f(ix, iy);
    return s * f.grid.cell_area();
}

// -- derivatives --------------------------------------------------------------

namespace detail {

// Fornberg weights for the m-th derivative at x0 from nodes xs.
inline std::vector<double> fd_weights(double x0, const std::vector<double>& xs, int m) {
    const int n = static_cast<int>(xs.size());
    std::vector<std::vector<double>> c(static_cast<std::size_t>(n), std::vector<double>(static_cast<std::size_t>(m + 1), 0.0));
    double c1 = 1.0, c4 = xs[0] - x0;
    c[0][0] = 1.0;
    for (int i = 1; i < n; ++i) {
        const int mn = std::min(i, m);
        double c2 = 1.0, c5 = c4;
        c4 = xs[static_cast<std::size_t>(i)] - x0;
        for (int j = 0; j < i; ++j) {
            const double c3 = xs[static_cast<std::size_t>(i)] - xs[static_cast<std::size_t>(j)];
            c2 *= c3;
            if (j == i - 1) {
                for (int k = mn; k >= 1; --k)
                    c[static_cast<std::size_t>(i)][static_cast<std::size_t>(k)] =
                        c1 * (k * c[static_cast<std::size_t>(i - 1)][static_cast<std::size_t>(k - 1)] -
                              c5 * c[static_cast<std::size_t>(i - 1)][static_cast<std::size_t>(k)]) / c2;
                c[static_cast<std::size_t>(i)][0] = -c1 * c5 * c[static_cast<std::size_t>(i - 1)][0] / c2;
            }
            for (int k = mn; k >= 1; --k)
                c[static_cast<std::size_t>(j)][static_cast<std::size_t>(k)] =
                    (c4 * c[static_cast<std::size_t>(j)][static_cast<std::size_t>(k)] -
                     k * c[static_cast<std::size_t>(j)][static_cast<std::size_t>(k - 1)]) / c3;
            c[static_cast<std::size_t>(j)][0] = c4 * c[static_cast<std::size_t>(j)][0] / c3;
        }
        c1 = c2;
    }
    std::vector<double> w(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) w[static_cast<std::size_t>(i)] = c[static_cast<std::size_t>(i)][static_cast<std::size_t>(m)];
    return w;
}

inline constexpr int kStencil = 5;  // 4th-order first derivatives on the patch

// Stencil rows for each window offset p = i - start, start = clamp(i-2, 0, n-5).
inline std::array<std::vector<double>, kStencil> stencil_table(double h, int m) {
    std::array<std::vector<double>, kStencil> t;
    std::vector<double> xs(kStencil);
    for (int p = 0; p < kStencil; ++p) {
        for (int q = 0; q < kStencil; ++q) xs[static_cast<std::size_t>(q)] = (q - p) * h;
        t[static_cast<std::size_t>(p)] = fd_weights(0.0, xs, m);
    }
    return t;
}

enum class Axis { x, y };

// The Nyquist bin gets multiplier zero: this keeps the derivative matrix real
// and antisymmetric, so discrete integration by parts is exact for every nodal
// field (the orbit-orthogonality checks depend on it).
inline ScalarField spectral_axis_derivative(const ScalarField& f, Axis ax) {
    const GridSpec& g = f.grid;
    ScalarField out(g);
    const int n = ax == Axis::x ? g.nx : g.ny;
    const int lines = ax == Axis::x ? g.ny : g.nx;
    std::vector<cplx> line(static_cast<std::size_t>(n));
    for (int l = 0; l < lines; ++l) {
        for (int k = 0; k < n; ++k)
            line[static_cast<std::size_t>(k)] = ax == Axis::x ? f(k, l) : f(l, k);
        fft(line, false);
        for (int k = 0; k < n; ++k) {
            const double m = k == n / 2 ? 0.0 : static_cast<double>(wavenumber(static_cast<std::size_t>(k), static_cast<std::size_t>(n)));
            line[static_cast<std::size_t>(k)] *= cplx(0.0, m);
        }
        fft(line, true);
        for (int k = 0; k < n; ++k)
            (ax == Axis::x ? out(k, l) : out(l, k)) = line[static_cast<std::size_t>(k)];
    }
    return out;
}

// Zero the Nyquist bins of a torus field (the doubler bins of the spectral
// calculus; used by the band-limited de-Rham sector counts).
inline ScalarField drop_nyquist(const ScalarField& f) {
    const GridSpec& g = f.grid;
    if (!g.torus_domain()) throw std::invalid_argument("drop_nyquist: torus only");
    std::vector<std::vector<cplx>> spec(static_cast<std::size_t>(g.ny), std::vector<cplx>(static_cast<std::size_t>(g.nx)));
    std::vector<cplx> line(static_cast<std::size_t>(g.nx));
    for (int iy = 0; iy < g.ny; ++iy) {
        for (int ix = 0; ix < g.nx; ++ix) line[static_cast<std::size_t>(ix)] = f(ix, iy);
        fft(line, false);
        spec[static_cast<std::size_t>(iy)] = line;
    }
    std::vector<cplx> col(static_cast<std::size_t>(g.ny));
    for (int ix = 0; ix < g.nx; ++ix) {
        for (int iy = 0; iy < g.ny; ++iy) col[static_cast<std::size_t>(iy)] = spec[static_cast<std::size_t>(iy)][static_cast<std::size_t>(ix)];
        fft(col, false);
        for (int iy = 0; iy < g.ny; ++iy) {
            if (ix == g.nx / 2 || iy == g.ny / 2) col[static_cast<std::size_t>(iy)] = 0.0;
        }
        fft(col, true);
        for (int iy = 0; iy < g.ny; ++iy) spec[static_cast<std::size_t>(iy)][static_cast<std::size_t>(ix)] = col[static_cast<std::size_t>(iy)];
    }
    ScalarField out(g);
    for (int iy = 0; iy < g.ny; ++iy) {
        line = spec[static_cast<std::size_t>(iy)];
        fft(line, true);
        for (int ix = 0; ix < g.nx; ++ix) out(ix, iy) = line[static_cast<std::size_t>(ix)];
    }
    return out;
}

inline ScalarField fd_axis_derivative(const ScalarField& f, Axis ax, int order) {
    const GridSpec& g = f.grid;
    ScalarField out(g);
    const int n = ax == Axis::x ? g.nx : g.ny;
    const int lines = ax == Axis::x ? g.ny : g.nx;
    const double h = ax == Axis::x ? g.dx() : g.dy();
    const auto table = stencil_table(h, order);
    for (int l = 0; l < lines; ++l) {
        for (int i = 0; i < n; ++i) {
            const int start = std::clamp(i - 2, 0, n - kStencil);
            const auto& w = table[static_cast<std::size_t>(i - start)];
            cplx acc(0.0, 0.0);
            for (int q = 0; q < kStencil; ++q) {
                const int j = start + q;
                acc += w[static_cast<std::size_t>(q)] * (ax == Axis::x ? f(j, l) : f(l, j));
            }
            (ax == Axis::x ? out(i, l) : out(l, i)) = acc;
        }
    }
    return out;
}

}  // namespace detail

inline ScalarField d_x(const ScalarField& f) {
    return f.grid.torus_domain() ? detail::spectral_axis_derivative(f, detail::Axis::x)
                                 : detail::fd_axis_derivative(f, detail::Axis::x, 1);
}
inline ScalarField d_y(const ScalarField& f) {
    return f.grid.torus_domain() ? detail::spectral_axis_derivative(f, detail::Axis::y)
                                 : detail::fd_axis_derivative(f, detail::Axis::y, 1);
}

enum class Wirtinger { z, zbar };

inline ScalarField derivative(const ScalarField& f, Wirtinger which) {
    ScalarField fx = d_x(f), fy = d_y(f);
    const cplx iy = which == Wirtinger::z ? cplx(0.0, -0.5) : cplx(0.0, 0.5);
    return cplx(0.5, 0.0) * fx + iy * fy;
}

inline ScalarField d_z(const ScalarField& f) { return derivative(f, Wirtinger::z); }
inline ScalarField d_zbar(const ScalarField& f) { return derivative(f, Wirtinger::zbar); }

// 4 dz dzbar. Spectral on the torus; on the patch a 1-D 5-point second
// derivative per axis, which is what the Liouville solver assembles.
inline ScalarField laplacian(const ScalarField& f) {
    if (f.grid.torus_domain()) {
        const GridSpec& g = f.grid;
        ScalarField out(g);
        ScalarField fxx = detail::spectral_axis_derivative(detail::spectral_axis_derivative(f, detail::Axis::x), detail::Axis::x);
        ScalarField fyy = detail::spectral_axis_derivative(detail::spectral_axis_derivative(f, detail::Axis::y), detail::Axis::y);
        return fxx + fyy;
    }
    return detail::fd_axis_derivative(f, detail::Axis::x, 2) + detail::fd_axis_derivative(f, detail::Axis::y, 2);
}

// -- forms ---------------------------------------------------------------------

struct OneForm {
    ScalarField p10, p01;
    RealityTag tag = RealityTag::general;

    OneForm() = default;
    OneForm(ScalarField a10, ScalarField a01, RealityTag t = RealityTag::general)
        : p10(std::move(a10)), p01(std::move(a01)), tag(t) {
        require_same_grid(p10.grid, p01.grid, "OneForm");
    }

    const GridSpec& grid() const { return p10.grid; }

    // f dz - conj(f) dzbar, the Omega^1(M, iR) pattern.
    static OneForm imaginary(const ScalarField& f, RealityTag t = RealityTag::imaginary_valued) {
        return OneForm(f, -conj(f), t);
    }

    double reality_defect() const {
        ScalarField d = p01 + conj(p10);
        return sup_norm(d);
    }
};

inline OneForm operator+(const OneForm& a, const OneForm& b) {
    RealityTag t = a.tag == b.tag ? a.tag : RealityTag::general;
    return OneForm(a.p10 + b.p10, a.p01 + b.p01, t);
}
inline OneForm operator-(const OneForm& a, const OneForm& b) {
    RealityTag t = a.tag == b.tag ? a.tag : RealityTag::general;
    return OneForm(a.p10 - b.p10, a.p01 - b.p01, t);
}
inline OneForm operator*(cplx s, const OneForm& a) {
    return OneForm(s * a.p10, s * a.p01, RealityTag::general);
}
inline OneForm operator*(double s, const OneForm& a) {
    return OneForm(cplx(s, 0.0) * a.p10, cplx(s, 0.0) * a.p01, a.tag);
}

struct TwoForm {
    ScalarField coeff;  // of dz/\dzbar

    TwoForm() = default;
    explicit TwoForm(ScalarField c) : coeff(std::move(c)) {}
    const GridSpec& grid() const { return coeff.grid; }
};

inline TwoForm operator+(const TwoForm& a, const TwoForm& b) { return TwoForm(a.coeff + b.coeff); }
inline TwoForm operator-(const TwoForm& a, const TwoForm& b) { return TwoForm(a.coeff - b.coeff); }
inline TwoForm operator*(cplx s, const TwoForm& a) { return TwoForm(s * a.coeff); }

inline TwoForm exterior_d(const OneForm& a) {
    return TwoForm(d_z(a.p01) - d_zbar(a.p10));
}

// Int w with dz/\dzbar = -2i dx/\dy.
inline cplx integrate_two_form(const TwoForm& w) {
    return cplx(0.0, -2.0) * integrate_scalar(w.coeff);
}

// Metric Hodge star on one-forms: (1,0) -> -i (1,0), (0,1) -> +i (0,1).
inline OneForm hodge_star_one_form(const OneForm& a) {
    return OneForm(cplx(0.0, -1.0) * a.p10, cplx(0.0, 1.0) * a.p01, a.tag);
}

// Determinant-line star: conjugates and swaps type; on imaginary-valued forms it
// sends the (0,1) part to minus the (1,0) part. Squares to -Id.
inline OneForm star1_one_form(const OneForm& a) {
    return OneForm(conj(a.p01), -conj(a.p10), a.tag);
}

inline TwoForm wedge_one_forms(const OneForm& a, const OneForm& b) {
    require_same_grid(a.grid(), b.grid(), "wedge_one_forms");
    return TwoForm(a.p10 * b.p01 - a.p01 * b.p10);
}

// -- conformal metric data -------------------------------------------------------

struct MetricData {
    ScalarField h;      // positive real conformal factor
    ScalarField sigma;  // real

    MetricData() = default;
    MetricData(ScalarField h_, ScalarField sigma_) : h(std::move(h_)), sigma(std::move(sigma_)) {
        require_same_grid(h.grid, sigma.grid, "MetricData");
        for (std::size_t i = 0; i < h.size(); ++i) {
            if (!(h[i].real() > 0.0) || h[i].imag() != 0.0)
                throw std::invalid_argument("MetricData: h must be real and positive");
            if (sigma[i].imag() != 0.0)
                throw std::invalid_argument("MetricData: sigma must be real");
        }
    }

    static MetricData flat(const GridSpec& g) {
        return MetricData(ScalarField(g, cplx(1.0, 0.0)), ScalarField(g, cplx(0.0, 0.0)));
    }

    // rho = e^sigma h; theta = rho dz so that i theta /\ conj(theta) = omega.
    ScalarField rho() const {
        return zip(h, sigma, [](cplx hh, cplx s) { return hh * std::exp(s.real()); });
    }
    ScalarField theta_coeff() const { return rho(); }

    // omega = i e^{2 sigma} h^2 dz/\dzbar, a positive multiple of dx/\dy.
    TwoForm omega() const {
        ScalarField r = rho();
        return TwoForm(map(r, [](cplx v) { return cplx(0.0, 1.0) * v * v; }));
    }
};

}  // namespace swrd
