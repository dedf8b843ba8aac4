#include <doctest.h>

#include "swrd/random.hpp"
#include "swrd/reduction4d.hpp"

using namespace swrd;

namespace {

// Independent 2x2 products, written out by hand (the oracle the module's
// PauliTriple is checked against).
Mat2 mul_by_hand(const Mat2& x, const Mat2& y) {
    Mat2 out;
    out(0, 0) = x(0, 0) * y(0, 0) + x(0, 1) * y(1, 0);
    out(0, 1) = x(0, 0) * y(0, 1) + x(0, 1) * y(1, 1);
    out(1, 0) = x(1, 0) * y(0, 0) + x(1, 1) * y(1, 0);
    out(1, 1) = x(1, 0) * y(0, 1) + x(1, 1) * y(1, 1);
    return out;
}

FourDField random_field(const GridSpec& g, std::uint64_t seed) {
    Rng rng(seed);
    return FourDField(g, random_band_limited_real(g, rng), random_band_limited_real(g, rng),
                      random_band_limited_real(g, rng), random_band_limited_real(g, rng),
                      SpinorPair(random_band_limited(g, rng), random_band_limited(g, rng)));
}

}  // namespace

TEST_CASE("modified pauli algebra") {
    const PauliReport rep = pauli_check();
    CHECK(rep.pass());

    const PauliTriple p;
    CHECK(mul_by_hand(p.K, p.K).dist(p.Id) == 0.0);            // K^2 = +Id, the modified sign
    CHECK(mul_by_hand(p.J, p.K).dist(-p.I) == 0.0);            // JK = i Id = -I
    CHECK(mul_by_hand(p.I, p.J).dist(p.K) == 0.0);             // IJ = K
    CHECK(mul_by_hand(p.I, p.I).dist(-p.Id) == 0.0);
    CHECK(mul_by_hand(p.J, p.J).dist(-p.Id) == 0.0);
    // not the quaternion algebra: J and K commute here instead of anticommuting
    CHECK(mul_by_hand(p.K, p.J).dist(-p.I) == 0.0);
}

TEST_CASE("sw residuals: zero and constant fields") {
    const GridSpec g = GridSpec::torus(16, 16);
    FourDField zero(g, ScalarField(g), ScalarField(g), ScalarField(g), ScalarField(g), SpinorPair::zero(g));
    const SwResiduals rz = sw_residuals_4d(zero);
    CHECK(sup_norm(rz.dirac.psi1) == 0.0);
    CHECK(sup_norm(rz.r2a) == 0.0);
    CHECK(sup_norm(rz.r2b) == 0.0);
    CHECK(sup_norm(rz.r2c) == 0.0);

    // A = 0, constant Psi: SW1 vanishes, SW2a residual is (i/2)(|psi1|^2+|psi2|^2)
    const cplx c1(0.8, -0.1), c2(0.2, 0.4);
    FourDField cf(g, ScalarField(g), ScalarField(g), ScalarField(g), ScalarField(g),
                  SpinorPair(ScalarField(g, c1), ScalarField(g, c2)));
    const SwResiduals rc = sw_residuals_4d(cf);
    CHECK(sup_norm(rc.dirac.psi1) < 1e-14);
    CHECK(sup_norm(rc.dirac.psi2bar) < 1e-14);
    const cplx expected = cplx(0.0, 0.5) * (std::norm(c1) + std::norm(c2));
    CHECK(std::abs(rc.r2a[0] - expected) < 1e-14);
}

TEST_CASE("sw residuals match an independent component expansion") {
    const GridSpec g = GridSpec::torus(32, 32);
    const FourDField f = random_field(g, 31);
    const SwResiduals r = sw_residuals_4d(f);

    // plain-loop oracle, no shared helpers
    const ScalarField d1p1 = d_x(f.Psi.psi1), d2p1 = d_y(f.Psi.psi1);
    const ScalarField d1p2 = d_x(f.Psi.psi2bar), d2p2 = d_y(f.Psi.psi2bar);
    const cplx iu(0.0, 1.0);
    double worst = 0.0;
    for (int iy = 0; iy < g.ny; ++iy)
        for (int ix = 0; ix < g.nx; ++ix) {
            const cplx a1 = f.A1(ix, iy), a2 = f.A2(ix, iy), a3 = f.A3(ix, iy), a4 = f.A4(ix, iy);
            const cplx p1 = f.Psi.psi1(ix, iy), p2 = f.Psi.psi2bar(ix, iy);
            // row 1: (d1 + iA1 + i d2 - A2) psi1 + (-iA3 - A4) psi2bar
            const cplx row1 = d1p1(ix, iy) + iu * a1 * p1 + iu * d2p1(ix, iy) - a2 * p1 + (-iu * a3 - a4) * p2;
            const cplx row2 = (iu * a3 + a4) * p1 + d1p2(ix, iy) + iu * a1 * p2 + iu * d2p2(ix, iy) - a2 * p2;
            worst = std::max(worst, std::abs(row1 - r.dirac.psi1(ix, iy)));
            worst = std::max(worst, std::abs(row2 - r.dirac.psi2bar(ix, iy)));
        }
    CHECK(worst < 1e-13);
}

TEST_CASE("reduce_fields: higgs assembly and round trip") {
    const GridSpec g = GridSpec::torus(16, 16);

    // A3 = A4 = 0 -> Phi = 0
    {
        Rng rng(1);
        FourDField f(g, random_band_limited_real(g, rng), random_band_limited_real(g, rng),
                     ScalarField(g), ScalarField(g), SpinorPair::zero(g));
        CHECK(sup_norm(reduce_fields(f).Phi.phi) == 0.0);
    }
    // A1 = A2 = 0, constant A3, A4 -> zero connection, constant Phi
    {
        FourDField f(g, ScalarField(g), ScalarField(g), ScalarField(g, cplx(0.3, 0.0)),
                     ScalarField(g, cplx(-0.7, 0.0)), SpinorPair::zero(g));
        const ReducedTriple red = reduce_fields(f);
        CHECK(sup_norm(red.A.potential.p10) == 0.0);
        // phibar = -i A3 - A4 = -0.3i + 0.7
        CHECK(std::abs(conj(red.Phi.phi)[0] - cplx(0.7, -0.3)) < 1e-15);
    }
    // round trip: A1 = Re(-2i p10), A2 = -Im(-2i p10)
    {
        const FourDField f = random_field(g, 17);
        const ReducedTriple red = reduce_fields(f);
        ScalarField back = cplx(0.0, -2.0) * red.A.potential.p10;
        CHECK(sup_norm(real_part(back) - f.A1) < 1e-14);
        CHECK(sup_norm(cplx(-1.0, 0.0) * imag_part(back) - f.A2) < 1e-14);
        CHECK(red.A.potential.reality_defect() < 1e-14);
    }
}

TEST_CASE("reduction equivalence and negative control") {
    const GridSpec g = GridSpec::torus(32, 32);
    {
        FourDField zero(g, ScalarField(g), ScalarField(g), ScalarField(g), ScalarField(g), SpinorPair::zero(g));
        CHECK(reduction_discrepancy(zero).max() == 0.0);
    }
    for (std::uint64_t seed : {101, 102, 103}) {
        const FourDField f = random_field(g, seed);
        CHECK(reduction_discrepancy(f).max() < 1e-12);
    }
    FourDField bad = random_field(g, 104);
    Rng rng(105);
    bad.injected_x3_slope = SpinorPair(random_band_limited(g, rng), random_band_limited(g, rng));
    CHECK(reduction_discrepancy(bad).max() > 1e-6);
}
