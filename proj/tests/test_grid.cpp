#include <doctest.h>

#include "swrd/grid.hpp"
#include "swrd/random.hpp"

using namespace swrd;

TEST_CASE("grid spec validation") {
    CHECK_THROWS_AS(GridSpec::torus(7, 16), std::invalid_argument);
    CHECK_THROWS_AS(GridSpec::torus(16, 9), std::invalid_argument);
    CHECK_THROWS_AS(GridSpec::patch(16, 16, 1.5), std::invalid_argument);
    const GridSpec p = GridSpec::patch(16, 16, 0.7);
    // every node sits inside |z| <= r0
    for (int iy = 0; iy < p.ny; ++iy)
        for (int ix = 0; ix < p.nx; ++ix) CHECK(std::abs(p.z(ix, iy)) <= p.patch_radius + 1e-12);
}

TEST_CASE("spectral derivative: Fourier mode eigenfunction") {
    const GridSpec g = GridSpec::torus(16, 16);
    ScalarField f = ScalarField::sample(g, [](double x, double y) { return std::exp(cplx(0.0, x + y)); });
    ScalarField dz = derivative(f, Wirtinger::z);
    // d/dz e^{i(x+y)} = (i+1)/2 e^{i(x+y)}
    double dev = 0.0;
    for (std::size_t k = 0; k < f.size(); ++k)
        dev = std::max(dev, std::abs(dz[k] - cplx(0.5, 0.5) * f[k]));
    CHECK(dev < 1e-12);

    ScalarField c(g, cplx(3.0, -1.0));
    CHECK(sup_norm(derivative(c, Wirtinger::z)) < 1e-14);
    CHECK(sup_norm(derivative(c, Wirtinger::zbar)) < 1e-14);
}

TEST_CASE("spectral derivative matches analytic derivative on band-limited fields") {
    const GridSpec g = GridSpec::torus(32, 32);
    // f = e^{i(3x-2y)}; dzbar f = (i*3 + i*(-2)*i... ) computed directly
    ScalarField f = ScalarField::sample(g, [](double x, double y) { return std::exp(cplx(0.0, 3.0 * x - 2.0 * y)); });
    ScalarField dzb = derivative(f, Wirtinger::zbar);
    const cplx factor = 0.5 * (cplx(0.0, 3.0) + cplx(0.0, 1.0) * cplx(0.0, -2.0));
    double rel = 0.0;
    for (std::size_t k = 0; k < f.size(); ++k)
        rel = std::max(rel, std::abs(dzb[k] - factor * f[k]) / std::abs(factor));
    CHECK(rel < 1e-12);
}

TEST_CASE("patch derivative: z zbar and measured convergence order") {
    auto err_at = [](int n) {
        const GridSpec g = GridSpec::patch(n, n);
        ScalarField f = ScalarField::sample(g, [](double x, double y) {
            const cplx z(x, y);
            return std::exp(z * std::conj(z)) * std::sin(x);  // smooth, non-polynomial
        });
        ScalarField dz = derivative(f, Wirtinger::z);
        double worst = 0.0;
        for (int iy = 0; iy < g.ny; ++iy)
            for (int ix = 0; ix < g.nx; ++ix) {
                if (g.in_margin(ix, iy)) continue;
                const double x = g.x(ix), y = g.y(iy);
                const cplx z(x, y);
                const cplx exact = std::exp(z * std::conj(z)) *
                                   (std::conj(z) * std::sin(x) + cplx(0.5, 0.0) * std::cos(x));
                worst = std::max(worst, std::abs(dz(ix, iy) - exact));
            }
        return worst;
    };
    const double e1 = err_at(24), e2 = err_at(48);
    CHECK(std::log2(e1 / e2) > 1.9);  // 4th-order stencils: comfortably above 1.9

    // z zbar is exactly representable by the 5-point stencils
    const GridSpec g = GridSpec::patch(16, 16);
    ScalarField q = ScalarField::sample(g, [](double x, double y) {
        const cplx z(x, y);
        return z * std::conj(z);
    });
    ScalarField dq = derivative(q, Wirtinger::z);
    double dev = 0.0;
    for (int iy = 0; iy < g.ny; ++iy)
        for (int ix = 0; ix < g.nx; ++ix) dev = std::max(dev, std::abs(dq(ix, iy) - std::conj(g.z(ix, iy))));
    CHECK(dev < 1e-12);
}

TEST_CASE("two-form quadrature") {
    const GridSpec g = GridSpec::torus(16, 16);
    const double area = 4.0 * std::numbers::pi * std::numbers::pi;

    TwoForm unit(ScalarField(g, cplx(1.0, 0.0)));
    CHECK(std::abs(integrate_two_form(unit) - cplx(0.0, -2.0) * area) < 1e-9);

    MetricData flat = MetricData::flat(g);
    CHECK(std::abs(integrate_two_form(flat.omega()) - cplx(2.0 * area, 0.0)) < 1e-9);

    // Stokes: Int d(beta) = 0 for smooth periodic one-forms
    Rng rng(3);
    OneForm beta(random_band_limited(g, rng), random_band_limited(g, rng));
    const double scale = sup_norm(beta.p10) + sup_norm(beta.p01);
    CHECK(std::abs(integrate_two_form(exterior_d(beta))) < 1e-12 * scale);
}

TEST_CASE("hodge star operators") {
    const GridSpec g = GridSpec::torus(16, 16);
    Rng rng(5);

    // alpha = dz - dzbar -> -i dz - i dzbar
    OneForm a(ScalarField(g, cplx(1.0, 0.0)), ScalarField(g, cplx(-1.0, 0.0)), RealityTag::imaginary_valued);
    OneForm sa = hodge_star_one_form(a);
    CHECK(std::abs(sa.p10[0] - cplx(0.0, -1.0)) < 1e-15);
    CHECK(std::abs(sa.p01[0] - cplx(0.0, -1.0)) < 1e-15);

    OneForm r = random_imaginary_one_form(g, rng);
    OneForm rss = hodge_star_one_form(hodge_star_one_form(r));
    CHECK(sup_norm(rss.p10 + r.p10) == 0.0);  // ** = -Id exactly
    CHECK(hodge_star_one_form(r).reality_defect() < 1e-13);

    OneForm r1 = star1_one_form(star1_one_form(r));
    CHECK(sup_norm(r1.p10 + r.p10) == 0.0);  // *1 squares to -Id as well

    // a dz with real a -> -a dzbar
    OneForm ar(ScalarField(g, cplx(2.0, 0.0)), ScalarField(g), RealityTag::general);
    OneForm s1 = star1_one_form(ar);
    CHECK(std::abs(s1.p01[0] - cplx(-2.0, 0.0)) < 1e-15);
    CHECK(std::abs(s1.p10[0]) < 1e-15);

    CHECK(sup_norm(star1_one_form(OneForm(ScalarField(g), ScalarField(g))).p10) == 0.0);
}

TEST_CASE("star1 pairing identity on imaginary-valued forms") {
    // Re Int a^{01} /\ *1 b^{01} = -(1/2) Int a /\ b
    const GridSpec g = GridSpec::torus(16, 16);
    Rng rng(11);
    OneForm a = random_imaginary_one_form(g, rng);
    OneForm b = random_imaginary_one_form(g, rng);
    OneForm a01(ScalarField(g), a.p01), b01(ScalarField(g), b.p01);
    const cplx lhs = integrate_two_form(wedge_one_forms(a01, star1_one_form(b01)));
    const cplx rhs = -0.5 * integrate_two_form(wedge_one_forms(a, b));
    CHECK(std::abs(lhs.real() - rhs.real()) < 1e-10 * std::max(1.0, std::abs(rhs.real())));
}

TEST_CASE("wedge product") {
    const GridSpec g = GridSpec::torus(16, 16);
    Rng rng(7);

    OneForm dz(ScalarField(g, cplx(1.0, 0.0)), ScalarField(g));
    OneForm dzb(ScalarField(g), ScalarField(g, cplx(1.0, 0.0)));
    CHECK(std::abs(wedge_one_forms(dz, dzb).coeff[0] - cplx(1.0, 0.0)) < 1e-15);

    OneForm a(random_band_limited(g, rng), random_band_limited(g, rng));
    OneForm b(random_band_limited(g, rng), random_band_limited(g, rng));
    CHECK(sup_norm(wedge_one_forms(a, a).coeff) == 0.0);
    CHECK(sup_norm((wedge_one_forms(a, b) + wedge_one_forms(b, a)).coeff) == 0.0);
}

TEST_CASE("metric data invariants") {
    const GridSpec g = GridSpec::torus(16, 16);
    Rng rng(9);
    MetricData m(exp(random_band_limited_real(g, rng, 0, 0.3)), random_band_limited_real(g, rng, 0, 0.3));

    // omega is a positive multiple of dx/\dy: coeff purely imaginary positive /i
    TwoForm w = m.omega();
    for (std::size_t k = 0; k < w.coeff.size(); ++k) {
        CHECK(w.coeff[k].real() == 0.0);
        CHECK(w.coeff[k].imag() > 0.0);
    }
    // i theta /\ conj(theta) = omega
    ScalarField tc = m.theta_coeff();
    OneForm theta(tc, ScalarField(g));
    OneForm theta_bar(ScalarField(g), conj(tc));
    TwoForm lhs = cplx(0.0, 1.0) * wedge_one_forms(theta, theta_bar);
    CHECK(sup_norm(lhs.coeff - w.coeff) < 1e-13 * sup_norm(w.coeff));

    CHECK_THROWS_AS(MetricData(ScalarField(g, cplx(-1.0, 0.0)), ScalarField(g)), std::invalid_argument);
}
