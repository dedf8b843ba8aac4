#pragma once

// Unitary connections on line bundles over the discretized surface, in two
// representations: smooth potentials (degree 0) and U(1) link variables
// (any degree; all degree information lives in the links, sections are plain
// node arrays). Curvature, Chern number, covariant dbar, Hermitian pairings
// and the gauge-group action.

#include <cmath>
#include <numbers>
#include <optional>
#include <stdexcept>
#include <utility>

#include "swrd/conventions.hpp"
#include "swrd/grid.hpp"

namespace swrd {

struct LinkField {
    GridSpec grid;                 // torus only
    std::vector<cplx> ux, uy;      // unit modulus per directed edge

    LinkField() = default;
    explicit LinkField(const GridSpec& g)
        : grid(g),
          ux(static_cast<std::size_t>(g.size()), cplx(1.0, 0.0)),
          uy(static_cast<std::size_t>(g.size()), cplx(1.0, 0.0)) {
        if (!g.torus_domain()) throw std::invalid_argument("LinkField: torus only");
    }

    cplx& x_link(int ix, int iy) { return ux[static_cast<std::size_t>(grid.index(ix, iy))]; }
    cplx x_link(int ix, int iy) const { return ux[static_cast<std::size_t>(grid.index(ix, iy))]; }
    cplx& y_link(int ix, int iy) { return uy[static_cast<std::size_t>(grid.index(ix, iy))]; }
    cplx y_link(int ix, int iy) const { return uy[static_cast<std::size_t>(grid.index(ix, iy))]; }

    cplx plaquette(int ix, int iy) const {
        const int ixp = (ix + 1) % grid.nx, iyp = (iy + 1) % grid.ny;
        return x_link(ix, iy) * y_link(ixp, iy) * std::conj(x_link(ix, iyp)) * std::conj(y_link(ix, iy));
    }
    double plaquette_angle(int ix, int iy) const { return std::arg(plaquette(ix, iy)); }

    double total_flux() const {
        double s = 0.0;
        for (int iy = 0; iy < grid.ny; ++iy)
            for (int ix = 0; ix < grid.nx; ++ix) s += plaquette_angle(ix, iy);
        return s;
    }
};

struct Connection {
    OneForm potential;                 // smooth unitary 1-form; degree-0 representation
    std::optional<LinkField> links;    // lattice representation, any degree

    Connection() = default;
    explicit Connection(OneForm pot) : potential(std::move(pot)) {
        if (potential.tag == RealityTag::general) potential.tag = RealityTag::unitary_connection;
    }
    explicit Connection(LinkField lf) : potential(OneForm(ScalarField(lf.grid), ScalarField(lf.grid), RealityTag::unitary_connection)), links(std::move(lf)) {}

    const GridSpec& grid() const { return potential.grid(); }
    bool lattice() const { return links.has_value(); }

    static Connection flat(const GridSpec& g) {
        return Connection(OneForm(ScalarField(g), ScalarField(g), RealityTag::unitary_connection));
    }
};

struct SpinorPair {
    ScalarField psi1;      // section of L
    ScalarField psi2bar;   // the component written as conj(psi2); also a section of L

    SpinorPair() = default;
    SpinorPair(ScalarField a, ScalarField b) : psi1(std::move(a)), psi2bar(std::move(b)) {
        require_same_grid(psi1.grid, psi2bar.grid, "SpinorPair");
    }
    const GridSpec& grid() const { return psi1.grid; }

    static SpinorPair zero(const GridSpec& g) { return SpinorPair(ScalarField(g), ScalarField(g)); }
};

struct HermitianMetric {
    ScalarField H;  // positive real

    HermitianMetric() = default;
    explicit HermitianMetric(ScalarField h) : H(std::move(h)) {
        for (std::size_t i = 0; i < H.size(); ++i)
            if (!(H[i].real() > 0.0) || H[i].imag() != 0.0)
                throw std::invalid_argument("HermitianMetric: H must be real and positive");
    }
    static HermitianMetric unit(const GridSpec& g) { return HermitianMetric(ScalarField(g, cplx(1.0, 0.0))); }
};

struct HiggsField {
    ScalarField phi;

    HiggsField() = default;
    explicit HiggsField(ScalarField p) : phi(std::move(p)) {}
    static HiggsField zero(const GridSpec& g) { return HiggsField(ScalarField(g)); }

    ScalarField phibar() const { return conj(phi); }
    // Phi = phi dz - phibar dzbar
    OneForm form() const { return OneForm::imaginary(phi); }
};

struct GaugeTransform {
    ScalarField zeta;  // purely imaginary generator
    ScalarField u;     // e^zeta, unit modulus

    explicit GaugeTransform(ScalarField z) : zeta(std::move(z)), u(exp(zeta)) {
        for (std::size_t i = 0; i < zeta.size(); ++i)
            if (std::abs(zeta[i].real()) > 1e-14)
                throw std::invalid_argument("GaugeTransform: zeta must be purely imaginary");
    }
    ScalarField u_inv() const { return conj(u); }
};

// -- operations ---------------------------------------------------------------

// F = dA. Smooth case from derivatives of the potential; lattice case from
// plaquette log-phases: coeff = -theta_p / (2 ax ay) per cell (see conventions.hpp).
inline TwoForm curvature(const Connection& A) {
    if (A.lattice()) {
        const LinkField& lf = *A.links;
        const GridSpec& g = lf.grid;
        ScalarField c(g);
        const double denom = 2.0 * g.dx() * g.dy();
        for (int iy = 0; iy < g.ny; ++iy)
            for (int ix = 0; ix < g.nx; ++ix)
                c(ix, iy) = cplx(-lf.plaquette_angle(ix, iy) / denom, 0.0);
        return TwoForm(std::move(c));
    }
    if (A.potential.p10.size() == 0) throw std::invalid_argument("curvature: missing representation");
    return exterior_d(A.potential);
}

// Nearest integer to (i/2pi) Int F together with the deviation from it.
inline std::pair<int, double> chern_number(const Connection& A) {
    if (!A.grid().torus_domain()) throw std::invalid_argument("chern_number: torus only");
    const cplx val = cplx(0.0, 1.0) / (2.0 * std::numbers::pi) * integrate_two_form(curvature(A));
    const double c1 = val.real();
    const int n = static_cast<int>(std::lround(c1));
    return {n, std::abs(val - cplx(static_cast<double>(n), 0.0))};
}

// Uniform-flux representative of the degree-d bundle. Every plaquette carries
// angle kFluxAngleSign * 2 pi d/(nx ny); chern_number of the result is +d.
inline LinkField make_uniform_flux_links(int d, const GridSpec& g) {
    if (!g.torus_domain()) throw std::invalid_argument("make_uniform_flux_links: torus only");
    LinkField lf(g);
    const double theta0 = kFluxAngleSign * 2.0 * std::numbers::pi * d / (static_cast<double>(g.nx) * g.ny);
    for (int iy = 0; iy < g.ny; ++iy)
        for (int ix = 0; ix < g.nx; ++ix) {
            lf.x_link(ix, iy) = std::polar(1.0, -theta0 * iy);
            lf.y_link(ix, iy) = iy == g.ny - 1 ? std::polar(1.0, theta0 * g.ny * ix) : cplx(1.0, 0.0);
        }
    return lf;
}

// dbar_A s. Smooth case dbar s + A^{0,1} s; lattice case the gauge-covariant
// central difference in the zbar combination (exactly equivariant).
inline ScalarField covariant_dbar(const Connection& A, const ScalarField& s) {
    require_same_grid(A.grid(), s.grid, "covariant_dbar");
    if (!A.lattice()) return d_zbar(s) + A.potential.p01 * s;
    const LinkField& lf = *A.links;
    const GridSpec& g = lf.grid;
    ScalarField out(g);
    const double ax = g.dx(), ay = g.dy();
    for (int iy = 0; iy < g.ny; ++iy)
        for (int ix = 0; ix < g.nx; ++ix) {
            const int ixp = (ix + 1) % g.nx, ixm = (ix + g.nx - 1) % g.nx;
            const int iyp = (iy + 1) % g.ny, iym = (iy + g.ny - 1) % g.ny;
            const cplx dxs = (lf.x_link(ix, iy) * s(ixp, iy) - std::conj(lf.x_link(ixm, iy)) * s(ixm, iy)) / (2.0 * ax);
            const cplx dys = (lf.y_link(ix, iy) * s(ix, iyp) - std::conj(lf.y_link(ix, iym)) * s(ix, iym)) / (2.0 * ay);
            out(ix, iy) = 0.5 * (dxs + cplx(0.0, 1.0) * dys);
        }
    return out;
}

// <s, t>_H = s H conj(t), nodewise.
inline ScalarField inner_h(const HermitianMetric& H, const ScalarField& s, const ScalarField& t) {
    require_same_grid(s.grid, t.grid, "inner_h");
    ScalarField out(s.grid);
    for (std::size_t i = 0; i < s.size(); ++i) out[i] = s[i] * H.H[i] * std::conj(t[i]);
    return out;
}

struct GaugeTriple {
    Connection A;
    SpinorPair Psi;
    HiggsField Phi;
};

// (A, Psi, Phi) -> (A + u^{-1} du, u^{-1} Psi, Phi)
inline GaugeTriple gauge_act(const GaugeTransform& gt, const GaugeTriple& p) {
    GaugeTriple out = p;
    const ScalarField dz_zeta = d_z(gt.zeta), dzb_zeta = d_zbar(gt.zeta);
    out.A.potential = OneForm(p.A.potential.p10 + dz_zeta, p.A.potential.p01 + dzb_zeta,
                              RealityTag::unitary_connection);
    if (p.A.lattice()) {
        const GridSpec& g = p.A.links->grid;
        LinkField lf = *p.A.links;
        for (int iy = 0; iy < g.ny; ++iy)
            for (int ix = 0; ix < g.nx; ++ix) {
                const int ixp = (ix + 1) % g.nx, iyp = (iy + 1) % g.ny;
                lf.x_link(ix, iy) = std::conj(gt.u(ix, iy)) * p.A.links->x_link(ix, iy) * gt.u(ixp, iy);
                lf.y_link(ix, iy) = std::conj(gt.u(ix, iy)) * p.A.links->y_link(ix, iy) * gt.u(ix, iyp);
            }
        out.A.links = std::move(lf);
    }
    const ScalarField ui = gt.u_inv();
    out.Psi = SpinorPair(ui * p.Psi.psi1, ui * p.Psi.psi2bar);
    return out;
}

}  // namespace swrd
