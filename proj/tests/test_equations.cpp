#include <doctest.h>

#include "swrd/bases.hpp"
#include "swrd/equations.hpp"
#include "swrd/random.hpp"

using namespace swrd;

TEST_CASE("residuals vanish on the vacuum") {
    const GridSpec g = GridSpec::torus(16, 16);
    Configuration c = make_configuration(Connection::flat(g), SpinorPair::zero(g), HiggsField::zero(g),
                                         MetricData::flat(g), HermitianMetric::unit(g));
    const ResidualReport rep = residuals(c);
    CHECK(rep.curvature.sup == 0.0);
    CHECK(rep.higgs.sup == 0.0);
    CHECK(rep.dirac.sup == 0.0);
}

TEST_CASE("flat connection with spinors: r21 is the spinor density term") {
    const GridSpec g = GridSpec::torus(16, 16);
    Rng rng(3);
    SpinorPair Psi(random_band_limited(g, rng), random_band_limited(g, rng));
    Configuration c = make_configuration(Connection::flat(g), Psi, HiggsField::zero(g),
                                         MetricData::flat(g), HermitianMetric::unit(g));
    const TwoForm mu = moment_map(c);
    // F = 0, so coeff = -(1/2)(|psi1|^2+|psi2|^2) * |omega coeff| with omega = i dz/\dzbar
    double worst = 0.0;
    for (int iy = 0; iy < g.ny; ++iy)
        for (int ix = 0; ix < g.nx; ++ix) {
            const double dens = std::norm(Psi.psi1(ix, iy)) + std::norm(Psi.psi2bar(ix, iy));
            worst = std::max(worst, std::abs(mu.coeff(ix, iy) - cplx(0.5 * dens, 0.0)));
        }
    CHECK(worst < 1e-14);
}

TEST_CASE("moment map: gauge invariance and quadratic scaling") {
    const GridSpec g = GridSpec::torus(16, 16);
    Rng rng(5);
    Configuration c = bases::torus_random_base(g, rng, true);

    GaugeTransform gt(random_imaginary(g, rng));
    GaugeTriple tr{c.A, c.Psi, c.Phi};
    const GaugeTriple tr2 = gauge_act(gt, tr);
    Configuration c2 = make_configuration(tr2.A, tr2.Psi, tr2.Phi, c.metric, c.H);
    const double scale = 1.0 + sup_norm(moment_map(c).coeff);
    CHECK(sup_norm(moment_map(c2).coeff - moment_map(c).coeff) < 1e-12 * scale);

    // scaling Psi by t shifts mu by (1-t^2) (i/2) |Psi|^2_H omega
    const double t = 0.75;
    Configuration ct = c;
    ct.Psi = SpinorPair(cplx(t, 0.0) * c.Psi.psi1, cplx(t, 0.0) * c.Psi.psi2bar);
    ScalarField diff = moment_map(ct).coeff - moment_map(c).coeff;
    ScalarField rho = c.metric.rho();
    ScalarField expect = cplx(0.0, 0.5) * (1.0 - t * t) * c.spinor_density() * cplx(0.0, 1.0) * (rho * rho);
    CHECK(sup_norm(diff - expect) < 1e-13 * scale);
}

TEST_CASE("residual norms are gauge invariant") {
    // smooth case: exact up to the spectral tail of u = e^zeta, so the
    // transform must be fully resolved (low cutoff, moderate amplitude)
    const GridSpec g = GridSpec::torus(32, 32);
    Rng rng(4);
    Configuration c = bases::torus_random_base(g, rng, true);
    const ResidualReport before = residuals(c);
    GaugeTransform gt(random_imaginary(g, rng, 1, 0.3));
    GaugeTriple tr{c.A, c.Psi, c.Phi};
    const GaugeTriple tr2 = gauge_act(gt, tr);
    const ResidualReport after = residuals(make_configuration(tr2.A, tr2.Psi, tr2.Phi, c.metric, c.H));
    CHECK(std::abs(after.curvature.sup - before.curvature.sup) < 1e-12 * (1.0 + before.curvature.sup));
    CHECK(std::abs(after.higgs.sup - before.higgs.sup) < 1e-12 * (1.0 + before.higgs.sup));
    CHECK(std::abs(after.dirac.sup - before.dirac.sup) < 1e-12 * (1.0 + before.dirac.sup));
}

TEST_CASE("curvature_k: hyperbolic disk and flat plane") {
    const GridSpec g = GridSpec::patch(64, 64);
    MetricData hyper(hyperbolic_h(g), ScalarField(g));
    ScalarField K = curvature_k(hyper);
    double worst = 0.0;
    for (int iy = 0; iy < g.ny; ++iy)
        for (int ix = 0; ix < g.nx; ++ix)
            if (!g.in_margin(ix, iy)) worst = std::max(worst, std::abs(K(ix, iy).real() + 0.5));
    CHECK(worst < 1e-5);  // 4th-order stencils on the analytic profile

    MetricData flat = MetricData::flat(g);
    CHECK(sup_norm(curvature_k(flat)) < 1e-12);
}

TEST_CASE("curvature_k consistency with the metric connection") {
    // F(A_metric) = K rho^2 dz/\dzbar for A_metric = dln(rho) - dbar ln(rho)
    const GridSpec g = GridSpec::torus(32, 32);
    Rng rng(7);
    MetricData m(ScalarField(g, cplx(1.0, 0.0)), random_band_limited_real(g, rng, 4, 0.4));
    ScalarField ln_rho = m.sigma;  // h = 1
    Connection A(OneForm(d_z(ln_rho), -d_zbar(ln_rho), RealityTag::unitary_connection));
    ScalarField rho = m.rho();
    ScalarField expect = curvature_k(m) * rho * rho;
    CHECK(sup_norm(curvature(A).coeff - expect) < 1e-10);
}

TEST_CASE("hyperbolic patch family: calibrated solution") {
    const double cstar = -0.5 * std::log(2.0);
    auto sup_residuals = [&](int n) {
        const GridSpec g = GridSpec::patch(n, n);
        ScalarField f(g, cplx(cstar, 0.0)), sigma(g);
        Configuration c = hyperbolic_patch_config(f, f, sigma);
        const ResidualReport rep = residuals(c);
        return std::array<double, 3>{rep.curvature.sup, rep.higgs.sup, rep.dirac.sup};
    };
    const auto a = sup_residuals(32), b = sup_residuals(64);
    CHECK(a[1] == 0.0);  // Phi = 0 identically
    CHECK(std::log2(a[0] / b[0]) > 1.9);
    CHECK(std::log2(a[2] / b[2]) > 1.9);
    CHECK(b[0] < 5e-4);
    CHECK(b[2] < 5e-4);
}

TEST_CASE("hyperbolic patch family: |psi|^2_H = |e^f|^2 and dirac kernel for any holomorphic f") {
    const GridSpec g = GridSpec::patch(48, 48);
    // f(z) = c + 0.3 z, g(z) = c - (0.2+0.1i) z^2: holomorphic, non-constant
    ScalarField f = ScalarField::sample(g, [](double x, double y) {
        return cplx(-0.4, 0.1) + cplx(0.3, 0.0) * cplx(x, y);
    });
    ScalarField h2 = ScalarField::sample(g, [](double x, double y) {
        const cplx z(x, y);
        return cplx(-0.4, 0.0) - cplx(0.2, 0.1) * z * z;
    });
    Rng rng(9);
    ScalarField sigma = real_part(random_patch_bump(g, rng, 2, 0.1));
    Configuration c = hyperbolic_patch_config(f, h2, sigma);

    // sigma and h cancel in |psi1|^2_H
    ScalarField dens = inner_h(c.H, c.Psi.psi1, c.Psi.psi1);
    ScalarField expect = abs2(exp(f));
    CHECK(sup_norm(dens - expect) < 1e-13);

    // the spinor equation holds for any holomorphic pair at truncation level
    const ResidualReport rep = residuals(c);
    CHECK(rep.dirac.sup < 5e-4);
    CHECK(rep.higgs.sup == 0.0);

    // non-holomorphic input is rejected
    ScalarField badf = ScalarField::sample(g, [](double x, double y) { return cplx(x * x + y, 0.0); });
    CHECK_THROWS_AS(hyperbolic_patch_config(badf, badf, ScalarField(g)), std::invalid_argument);
}

TEST_CASE("hyperbolic patch family: vanishing spinor negative control") {
    const GridSpec g = GridSpec::patch(32, 32);
    ScalarField f(g, cplx(-10.0, 0.0)), sigma(g);
    Configuration c = hyperbolic_patch_config(f, f, sigma);
    const ResidualReport rep = residuals(c);
    CHECK(rep.dirac.sup < 1e-6);   // dirac stays satisfied
    CHECK(rep.curvature.sup > 1e-1);   // curvature equation is far off with Psi ~ 0
}
