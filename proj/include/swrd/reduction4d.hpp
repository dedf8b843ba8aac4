#pragma once

// The modified Pauli matrices, the 4-D SW1/SW2 residuals for x3,x4-independent
// data, and the machine check that such data reduces exactly to the 2-D system.
// Component conventions follow F_jk = i(dk Aj - dj Ak) so that both sides of
// the reduction identity share one discretization and agree to roundoff.

#include <array>
#include <cmath>
#include <optional>
#include <string>

#include "swrd/equations.hpp"
#include "swrd/gauge.hpp"
#include "swrd/grid.hpp"

namespace swrd {

struct Mat2 {
    std::array<cplx, 4> a{};  // row major

    cplx operator()(int r, int c) const { return a[static_cast<std::size_t>(2 * r + c)]; }
    cplx& operator()(int r, int c) { return a[static_cast<std::size_t>(2 * r + c)]; }

    friend Mat2 operator*(const Mat2& x, const Mat2& y) {
        Mat2 out;
        for (int r = 0; r < 2; ++r)
            for (int c = 0; c < 2; ++c)
                out(r, c) = x(r, 0) * y(0, c) + x(r, 1) * y(1, c);
        return out;
    }
    friend Mat2 operator-(const Mat2& x) {
        Mat2 out;
        for (int k = 0; k < 4; ++k) out.a[static_cast<std::size_t>(k)] = -x.a[static_cast<std::size_t>(k)];
        return out;
    }
    double dist(const Mat2& y) const {
        double m = 0.0;
        for (int k = 0; k < 4; ++k)
            m = std::max(m, std::abs(a[static_cast<std::size_t>(k)] - y.a[static_cast<std::size_t>(k)]));
        return m;
    }
};

struct PauliTriple {
    Mat2 I, J, K, Id;

    PauliTriple() {
        Id(0, 0) = 1.0; Id(1, 1) = 1.0;
        I(0, 0) = cplx(0, -1); I(1, 1) = cplx(0, -1);
        J(0, 1) = 1.0; J(1, 0) = -1.0;
        K(0, 1) = cplx(0, -1); K(1, 0) = cplx(0, 1);
    }
};

struct PauliReport {
    double i_sq_plus_id;   // |I^2 + Id|
    double j_sq_plus_id;   // |J^2 + Id|
    double k_sq_minus_id;  // |K^2 - Id|  (the non-quaternionic sign)
    double ij_minus_k;     // |IJ - K|
    double jk_plus_i;      // |JK + I|
    std::array<Mat2, 9> table;  // products {I,J,K} x {I,J,K}
    bool pass() const {
        return i_sq_plus_id == 0.0 && j_sq_plus_id == 0.0 && k_sq_minus_id == 0.0 &&
               ij_minus_k == 0.0 && jk_plus_i == 0.0;
    }
};

inline PauliReport pauli_check() {
    PauliTriple p;
    PauliReport r{};
    r.i_sq_plus_id = (p.I * p.I).dist(-p.Id);
    r.j_sq_plus_id = (p.J * p.J).dist(-p.Id);
    r.k_sq_minus_id = (p.K * p.K).dist(p.Id);
    r.ij_minus_k = (p.I * p.J).dist(p.K);
    r.jk_plus_i = (p.J * p.K).dist(-p.I);
    const std::array<Mat2, 3> m{p.I, p.J, p.K};
    for (int a = 0; a < 3; ++a)
        for (int b = 0; b < 3; ++b)
            r.table[static_cast<std::size_t>(3 * a + b)] = m[static_cast<std::size_t>(a)] * m[static_cast<std::size_t>(b)];
    return r;
}

// x3,x4-independent 4-D data on the 2-D torus grid. injected_x3_slope, when
// present, stands in for a nonzero d3 Psi and is the negative control for the
// reduction check.
struct FourDField {
    GridSpec grid;
    ScalarField A1, A2, A3, A4;  // real
    SpinorPair Psi;
    std::optional<SpinorPair> injected_x3_slope;

    FourDField(const GridSpec& g, ScalarField a1, ScalarField a2, ScalarField a3, ScalarField a4, SpinorPair psi)
        : grid(g), A1(std::move(a1)), A2(std::move(a2)), A3(std::move(a3)), A4(std::move(a4)), Psi(std::move(psi)) {}

    // eta1 = -i(|psi1|^2 + |psi2|^2)
    ScalarField eta1() const { return cplx(0.0, -1.0) * (abs2(Psi.psi1) + abs2(Psi.psi2bar)); }
    // psi1 psi2 with psi2 = conj(psi2bar)
    ScalarField psi1_psi2() const { return Psi.psi1 * conj(Psi.psi2bar); }
    ScalarField eta2() const { return cplx(0.0, -2.0) * imag_part(psi1_psi2()); }
    ScalarField eta3() const { return cplx(-2.0, 0.0) * imag_part(psi1_psi2()); }
};

struct SwResiduals {
    SpinorPair dirac;          // SW1 residual, two components
    ScalarField r2a, r2b, r2c; // SW2a..c residuals
};

inline SwResiduals sw_residuals_4d(const FourDField& f) {
    const PauliTriple P;
    const cplx iu(0.0, 1.0);

    // nabla_j Psi with d3 = d4 = 0 on reduced data
    const ScalarField n1_1 = d_x(f.Psi.psi1) + iu * f.A1 * f.Psi.psi1;
    const ScalarField n1_2 = d_x(f.Psi.psi2bar) + iu * f.A1 * f.Psi.psi2bar;
    const ScalarField n2_1 = d_y(f.Psi.psi1) + iu * f.A2 * f.Psi.psi1;
    const ScalarField n2_2 = d_y(f.Psi.psi2bar) + iu * f.A2 * f.Psi.psi2bar;
    ScalarField n3_1 = iu * f.A3 * f.Psi.psi1;
    ScalarField n3_2 = iu * f.A3 * f.Psi.psi2bar;
    if (f.injected_x3_slope) {
        n3_1 = n3_1 + f.injected_x3_slope->psi1;
        n3_2 = n3_2 + f.injected_x3_slope->psi2bar;
    }
    const ScalarField n4_1 = iu * f.A4 * f.Psi.psi1;
    const ScalarField n4_2 = iu * f.A4 * f.Psi.psi2bar;

    // SW1: nabla1 Psi - I nabla2 Psi - J nabla3 Psi - K nabla4 Psi
    auto apply = [](const Mat2& m, const ScalarField& c1, const ScalarField& c2) {
        return std::pair<ScalarField, ScalarField>(m(0, 0) * c1 + m(0, 1) * c2, m(1, 0) * c1 + m(1, 1) * c2);
    };
    auto [i1, i2] = apply(P.I, n2_1, n2_2);
    auto [j1, j2] = apply(P.J, n3_1, n3_2);
    auto [k1, k2] = apply(P.K, n4_1, n4_2);
    SpinorPair dirac(n1_1 - i1 - j1 - k1, n1_2 - i2 - j2 - k2);

    // F_jk = i(dk Aj - dj Ak); d3 = d4 = 0
    const ScalarField F12 = iu * (d_y(f.A1) - d_x(f.A2));
    const ScalarField F13 = -iu * d_x(f.A3);
    const ScalarField F42 = iu * d_y(f.A4);
    const ScalarField F14 = -iu * d_x(f.A4);
    const ScalarField F23 = -iu * d_y(f.A3);

    ScalarField r2a = F12 - cplx(0.5, 0.0) * f.eta1();
    ScalarField r2b = F13 + F42 - cplx(0.5, 0.0) * f.eta2();
    ScalarField r2c = F14 + F23 - cplx(0.5, 0.0) * f.eta3();
    return {std::move(dirac), std::move(r2a), std::move(r2b), std::move(r2c)};
}

struct ReducedTriple {
    Connection A;
    SpinorPair Psi;
    HiggsField Phi;
};

// A^{1,0} = (i/2)(A1 - i A2) dz, A^{0,1} = (i/2)(A1 + i A2) dzbar,
// phibar = phi1 - i phi2 with phi1 = -i A3, phi2 = -i A4.
inline ReducedTriple reduce_fields(const FourDField& f) {
    const cplx ih(0.0, 0.5);
    ScalarField p10 = ih * (f.A1 - cplx(0.0, 1.0) * f.A2);
    ScalarField p01 = ih * (f.A1 + cplx(0.0, 1.0) * f.A2);
    Connection A(OneForm(std::move(p10), std::move(p01), RealityTag::unitary_connection));
    ScalarField phibar = cplx(0.0, -1.0) * f.A3 - f.A4;
    HiggsField Phi(conj(phibar));
    return {std::move(A), f.Psi, std::move(Phi)};
}

struct ReductionDiscrepancy {
    double higgs;    // |(SW2b - i SW2c) + 2 dPhi^{0,1} coeff|_sup
    double dirac;    // |SW1 residual - 2x reduced Dirac residual|_sup
    double max() const { return std::max(higgs, dirac); }
};

inline ReductionDiscrepancy reduction_discrepancy(const FourDField& f) {
    const SwResiduals sw = sw_residuals_4d(f);
    const ReducedTriple red = reduce_fields(f);

    // (SW2b - i SW2c) = 2 dz(phibar); r22 coeff = -dz(phibar)
    const ScalarField combo = sw.r2b - cplx(0.0, 1.0) * sw.r2c;
    const ScalarField r22_coeff = -d_z(conj(red.Phi.phi));
    const double higgs = sup_norm(combo + cplx(2.0, 0.0) * r22_coeff);

    const SpinorPair r23 = dirac_residual_2d(red.A, red.Psi, red.Phi);
    const double dirac = std::max(sup_norm(sw.dirac.psi1 - cplx(2.0, 0.0) * r23.psi1),
                                  sup_norm(sw.dirac.psi2bar - cplx(2.0, 0.0) * r23.psi2bar));
    return {higgs, dirac};
}

}  // namespace swrd
