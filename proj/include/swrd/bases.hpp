#pragma once

// Base-point configurations used by the check suites and tests.
//
// torus_dirac_base builds exact discrete solutions of the spinor equation
// with nonzero Higgs field: constant spinors psi1 = c, psi2bar = i c and
// phibar = 2i A^{0,1} make both rows of the Dirac operator vanish nodewise
// with no derivative involved. Because the spinor is constant, the discrete
// Leibniz identity dbar(zeta psi) = zeta dbar(psi) + (dbar zeta) psi is exact
// for every zeta, so the gauge directions lie in ker d2 to roundoff and the
// assembled complex satisfies D2 D1 = 0 at matrix level.

#include "swrd/equations.hpp"
#include "swrd/gauge.hpp"
#include "swrd/grid.hpp"
#include "swrd/linearization.hpp"
#include "swrd/random.hpp"

namespace swrd::bases {

struct BaseOptions {
    bool general_h = false;      // H = exp(small random real) instead of 1
    bool general_metric = false; // sigma = small random real instead of 0
    bool with_potential = false; // nonzero smooth unitary potential
    double amplitude = 0.5;
    double scale = 1.0;          // overall spinor/potential size (small values keep mu small)
};

inline Configuration torus_dirac_base(const GridSpec& g, Rng& rng, const BaseOptions& opts = {}) {
    if (!g.torus_domain()) throw std::invalid_argument("torus_dirac_base: torus only");

    Connection A = Connection::flat(g);
    if (opts.with_potential)
        A = Connection(OneForm::imaginary(random_band_limited(g, rng, 0, 0.3 * opts.amplitude * opts.scale),
                                          RealityTag::unitary_connection));

    const cplx c = opts.scale * cplx(1.2 + 0.4 * rng.next_signed(), 0.4 + 0.2 * rng.next_signed());
    ScalarField psi1(g, c);
    ScalarField phibar = cplx(0.0, 2.0) * A.potential.p01;
    SpinorPair Psi(psi1, cplx(0.0, 1.0) * psi1);
    HiggsField Phi(conj(phibar));

    MetricData metric = opts.general_metric
                            ? MetricData(ScalarField(g, cplx(1.0, 0.0)),
                                         random_band_limited_real(g, rng, 0, 0.2))
                            : MetricData::flat(g);
    HermitianMetric H = opts.general_h
                            ? HermitianMetric(exp(random_band_limited_real(g, rng, 0, 0.3)))
                            : HermitianMetric::unit(g);
    return make_configuration(std::move(A), std::move(Psi), std::move(Phi), std::move(metric), std::move(H));
}

// Constant-spinor base: flat connection, Phi = 0; solves the spinor equation exactly.
inline Configuration torus_constant_base(const GridSpec& g, cplx c1 = cplx(1.0, 0.5),
                                         cplx c2 = cplx(0.3, -0.2)) {
    SpinorPair Psi(ScalarField(g, c1), ScalarField(g, c2));
    return make_configuration(Connection::flat(g), std::move(Psi), HiggsField::zero(g),
                              MetricData::flat(g), HermitianMetric::unit(g));
}

// Generic non-solution point (random everything), for the checks that must
// hold at arbitrary base points.
inline Configuration torus_random_base(const GridSpec& g, Rng& rng, bool general_h = false) {
    Connection A(OneForm::imaginary(random_band_limited(g, rng, 0, 0.5), RealityTag::unitary_connection));
    SpinorPair Psi(random_band_limited(g, rng, 0, 0.7), random_band_limited(g, rng, 0, 0.7));
    HiggsField Phi(random_band_limited(g, rng, 0, 0.5));
    HermitianMetric H = general_h ? HermitianMetric(exp(random_band_limited_real(g, rng, 0, 0.3)))
                                  : HermitianMetric::unit(g);
    return make_configuration(std::move(A), std::move(Psi), std::move(Phi), MetricData::flat(g), std::move(H));
}

inline TangentVector random_tangent(const GridSpec& g, Rng& rng, double amplitude = 1.0) {
    return {random_imaginary_one_form(g, rng, 0, amplitude),
            SpinorPair(random_band_limited(g, rng, 0, amplitude), random_band_limited(g, rng, 0, amplitude)),
            random_imaginary_one_form(g, rng, 0, amplitude)};
}

}  // namespace swrd::bases
