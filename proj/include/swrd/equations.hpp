#pragma once

// Residuals of the invariant system (curvature, Higgs holomorphicity, Dirac),
// the moment map, the Gaussian
// curvature functional in the normalization K(rho) = -lap(ln rho)/(2 rho^2)
// (half the classical Gaussian curvature, matching the moment-map equation),
// and the closed-form hyperbolic-patch family.

#include <cmath>
#include <stdexcept>

#include "swrd/gauge.hpp"
#include "swrd/grid.hpp"

namespace swrd {

struct Configuration {
    Connection A;
    SpinorPair Psi;
    HiggsField Phi;
    MetricData metric;
    HermitianMetric H;

    const GridSpec& grid() const { return Psi.grid(); }

    // |psi1|^2_H + |psi2|^2_H, nodewise real
    ScalarField spinor_density() const {
        return inner_h(H, Psi.psi1, Psi.psi1) + inner_h(H, Psi.psi2bar, Psi.psi2bar);
    }
};

inline Configuration make_configuration(Connection A, SpinorPair Psi, HiggsField Phi,
                                        MetricData metric, HermitianMetric H) {
    Configuration c{std::move(A), std::move(Psi), std::move(Phi), std::move(metric), std::move(H)};
    require_same_grid(c.A.grid(), c.Psi.grid(), "Configuration");
    require_same_grid(c.Psi.grid(), c.metric.h.grid, "Configuration");
    require_same_grid(c.Psi.grid(), c.H.H.grid, "Configuration");
    return c;
}

struct NormPair {
    double sup = 0.0;
    double l2 = 0.0;
};

struct ResidualReport {
    NormPair curvature;  // moment-map equation
    NormPair higgs;      // holomorphicity of the Higgs field
    NormPair dirac;      // spinor equation (max over the two components)
};

// The coupled Dirac operator applied to (psi1, psi2bar); off-diagonal entries are the
// dzbar coefficients +-(1/2) phibar, compared coefficient-wise.
inline SpinorPair dirac_residual_2d(const Connection& A, const SpinorPair& Psi, const HiggsField& Phi) {
    const ScalarField phibar = Phi.phibar();
    ScalarField e1 = covariant_dbar(A, Psi.psi1) + cplx(0.5, 0.0) * phibar * Psi.psi2bar;
    ScalarField e2 = covariant_dbar(A, Psi.psi2bar) - cplx(0.5, 0.0) * phibar * Psi.psi1;
    return SpinorPair(std::move(e1), std::move(e2));
}

// mu = F(A) - (i/2)(|psi1|^2_H + |psi2|^2_H) omega; the curvature equation is mu = 0.
inline TwoForm moment_map(const Configuration& c) {
    const TwoForm F = curvature(c.A);
    const TwoForm w = c.metric.omega();
    return TwoForm(F.coeff - cplx(0.0, 0.5) * c.spinor_density() * w.coeff);
}

inline TwoForm higgs_residual(const Configuration& c) {
    // Phi^{0,1} = -phibar dzbar, so d(Phi^{0,1}) = -dz(phibar) dz/\dzbar
    return TwoForm(-d_z(c.Phi.phibar()));
}

inline ResidualReport residuals(const Configuration& c) {
    ResidualReport rep;
    const TwoForm mu = moment_map(c);
    rep.curvature = {sup_norm(mu.coeff), l2_norm(mu.coeff)};
    const TwoForm hg = higgs_residual(c);
    rep.higgs = {sup_norm(hg.coeff), l2_norm(hg.coeff)};
    const SpinorPair dr = dirac_residual_2d(c.A, c.Psi, c.Phi);
    rep.dirac = {std::max(sup_norm(dr.psi1), sup_norm(dr.psi2bar)),
                 std::hypot(l2_norm(dr.psi1), l2_norm(dr.psi2bar))};
    return rep;
}

// K(e^sigma h) = -lap(ln(e^sigma h)) / (2 e^{2 sigma} h^2), the normalization in
// which the curvature equation reads K = -(|psi1|^2_H + |psi2|^2_H)/2 on the patch family.
inline ScalarField curvature_k(const MetricData& m) {
    ScalarField ln_rho = zip(m.h, m.sigma, [](cplx h, cplx s) { return cplx(std::log(h.real()) + s.real(), 0.0); });
    ScalarField lap = laplacian(ln_rho);
    ScalarField rho = m.rho();
    return zip(lap, rho, [](cplx l, cplx r) { return cplx(-l.real() / (2.0 * r.real() * r.real()), 0.0); });
}

// h = 2/(1-|z|^2) on the disk patch.
inline ScalarField hyperbolic_h(const GridSpec& g) {
    if (g.torus_domain()) throw std::invalid_argument("hyperbolic_h: patch only");
    return ScalarField::sample(g, [](double x, double y) { return cplx(2.0 / (1.0 - x * x - y * y), 0.0); });
}

// Closed-form solution family on the hyperbolic patch. For holomorphic f, g
// the Dirac residual vanishes; the curvature residual vanishes when
// |e^f|^2 + |e^g|^2 = -2 K(e^sigma h) pointwise (f = g = -(ln 2)/2 at sigma = 0).
//
// Fiber bookkeeping: A = dln(rho) - dbar ln(rho) with rho = e^sigma h, and the
// spinors are psi1 = e^f rho, psi2bar = e^g rho with fiber metric H = rho^{-2},
// the one assignment under which all three equations hold simultaneously for the
// honest operators; |psi_i|^2_H = |e^{f,g}|^2 nodewise either way.
inline Configuration hyperbolic_patch_config(const ScalarField& f, const ScalarField& g,
                                             const ScalarField& sigma, double holo_tol = 1e-6) {
    const GridSpec& gr = f.grid;
    require_same_grid(gr, g.grid, "hyperbolic_patch_config");
    require_same_grid(gr, sigma.grid, "hyperbolic_patch_config");
    if (gr.torus_domain()) throw std::invalid_argument("hyperbolic_patch_config: patch only");
    const double df = sup_norm(d_zbar(f)), dg = sup_norm(d_zbar(g));
    if (df > holo_tol || dg > holo_tol)
        throw std::invalid_argument("hyperbolic_patch_config: f or g is not holomorphic (dbar residual " +
                                    std::to_string(std::max(df, dg)) + ")");

    ScalarField h = hyperbolic_h(gr);
    MetricData metric(h, real_part(sigma));
    ScalarField rho = metric.rho();

    // dln(h) is sampled in closed form (dz ln h = zbar/(1-|z|^2)); only the
    // sigma contribution is differentiated numerically
    ScalarField dlnh_z = ScalarField::sample(gr, [](double x, double y) {
        return std::conj(cplx(x, y)) / (1.0 - x * x - y * y);
    });
    ScalarField p10 = d_z(real_part(sigma)) + dlnh_z;
    Connection A(OneForm(p10, -conj(p10), RealityTag::unitary_connection));
    SpinorPair Psi(exp(f) * rho, exp(g) * rho);
    HermitianMetric H(map(rho, [](cplx r) { return cplx(1.0 / (r.real() * r.real()), 0.0); }));
    return make_configuration(std::move(A), std::move(Psi), HiggsField::zero(gr), std::move(metric), std::move(H));
}

}  // namespace swrd
