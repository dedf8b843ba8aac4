#pragma once

// The deformation complex d1 -> d2 of the linearized system, its explicit
// real-linear matrices over stacked (Re, Im) degrees of freedom, numerical
// cohomology by singular-value counting, the closed-form dimension counts,
// and the lattice Riemann-Roch index.
//
// Real-dof packing (fixed):
//   zeta   : N      (zeta = i s, s real per node)
//   tangent: 8N     [alpha p10 | beta1 | beta2bar | gamma p10], (Re,Im) pairs
//   output : 7N     [curvature row: N real | higgs row: 2N | dirac rows: 4N]
//
// The index of the degree-d covariant dbar is computed through its overlap
// (Ginsparg-Wilson) completion: a square naive matrix has dim ker = dim coker
// by rank-nullity, so only the doubler-free chiral construction carries the
// topological index; its zero modes are exact and chirality graded.

#include <Eigen/Dense>
#include <cmath>
#include <stdexcept>
#include <vector>

#include "swrd/conventions.hpp"
#include "swrd/equations.hpp"
#include "swrd/gauge.hpp"
#include "swrd/grid.hpp"
#include "swrd/reduction4d.hpp"

namespace swrd {

struct TangentVector {
    OneForm alpha;    // imaginary valued
    SpinorPair beta;  // (beta1, beta2bar)
    OneForm gamma;    // imaginary valued

    const GridSpec& grid() const { return beta.grid(); }

    static TangentVector zero(const GridSpec& g) {
        return {OneForm::imaginary(ScalarField(g)), SpinorPair::zero(g), OneForm::imaginary(ScalarField(g))};
    }
};

enum class PairingMode {
    re_projected,  // Re<psi,beta>_H in the curvature row; makes d2 d1 = 0 and the Hamiltonian check exact
    verbatim       // complex pairing exactly as displayed
};

// d1 zeta = (d zeta, -t zeta Psi, 0)
inline TangentVector apply_d1(const Configuration& p, const ScalarField& zeta, double t = 1.0) {
    OneForm dz(d_z(zeta), d_zbar(zeta), RealityTag::imaginary_valued);
    SpinorPair b(cplx(-t, 0.0) * zeta * p.Psi.psi1, cplx(-t, 0.0) * zeta * p.Psi.psi2bar);
    return {std::move(dz), std::move(b), OneForm::imaginary(ScalarField(zeta.grid))};
}

struct D2Output {
    ScalarField a_row;  // coeff of the linearized curvature equation; real in re_projected mode
    ScalarField b_row;  // coeff of d gamma^{0,1}
    SpinorPair c_row;   // linearized Dirac components
};

inline D2Output apply_d2(const Configuration& p, const TangentVector& X, double t = 1.0,
                         PairingMode mode = PairingMode::re_projected) {
    const GridSpec& g = p.grid();
    require_same_grid(g, X.grid(), "apply_d2");

    // linearized curvature row: d alpha - i t [<psi1,beta1>_H + <psi2,beta2>_H] omega
    ScalarField inner = inner_h(p.H, p.Psi.psi1, X.beta.psi1) +
                        conj(p.Psi.psi2bar) * p.H.H * X.beta.psi2bar;
    if (mode == PairingMode::re_projected) inner = real_part(inner);
    ScalarField rho = p.metric.rho();
    ScalarField weight = rho * rho;  // -i * (i e^{2 sigma} h^2) = e^{2 sigma} h^2
    ScalarField a_row = exterior_d(X.alpha).coeff + cplx(t, 0.0) * inner * weight;

    // linearized Higgs row: d(gamma^{0,1}) coefficient
    ScalarField b_row = d_z(X.gamma.p01);

    // linearized Dirac row: Dirac(beta) plus the multiplication block acting on Psi. The
    // Higgs entry is the derivative of the +-(1/2) phibar slots under
    // Phi -> Phi + t gamma, i.e. +-(1/2) conj(gamma^{1,0}) (the displayed
    // gamma^{0,1} entry named through the phibar variation).
    const ScalarField phibar = p.Phi.phibar();
    const cplx th(0.5 * t, 0.0);
    const ScalarField dphibar = conj(X.gamma.p10);
    ScalarField c1 = covariant_dbar(p.A, X.beta.psi1) + th * phibar * X.beta.psi2bar +
                     cplx(t, 0.0) * (X.alpha.p01 * p.Psi.psi1) + th * (dphibar * p.Psi.psi2bar);
    ScalarField c2 = covariant_dbar(p.A, X.beta.psi2bar) - th * phibar * X.beta.psi1 +
                     cplx(t, 0.0) * (X.alpha.p01 * p.Psi.psi2bar) - th * (dphibar * p.Psi.psi1);
    return {std::move(a_row), std::move(b_row), SpinorPair(std::move(c1), std::move(c2))};
}

// -- real-dof packing ----------------------------------------------------------

inline int tangent_dim(const GridSpec& g) { return 8 * g.size(); }
inline int output_dim(const GridSpec& g) { return 7 * g.size(); }

inline Eigen::VectorXd pack_tangent(const TangentVector& X) {
    const int n = X.grid().size();
    Eigen::VectorXd v(8 * n);
    for (int k = 0; k < n; ++k) {
        const std::size_t ks = static_cast<std::size_t>(k);
        v[2 * k] = X.alpha.p10[ks].real();
        v[2 * k + 1] = X.alpha.p10[ks].imag();
        v[2 * n + 2 * k] = X.beta.psi1[ks].real();
        v[2 * n + 2 * k + 1] = X.beta.psi1[ks].imag();
        v[4 * n + 2 * k] = X.beta.psi2bar[ks].real();
        v[4 * n + 2 * k + 1] = X.beta.psi2bar[ks].imag();
        v[6 * n + 2 * k] = X.gamma.p10[ks].real();
        v[6 * n + 2 * k + 1] = X.gamma.p10[ks].imag();
    }
    return v;
}

inline TangentVector unpack_tangent(const GridSpec& g, const Eigen::VectorXd& v) {
    const int n = g.size();
    ScalarField a(g), b1(g), b2(g), c(g);
    for (int k = 0; k < n; ++k) {
        const std::size_t ks = static_cast<std::size_t>(k);
        a[ks] = cplx(v[2 * k], v[2 * k + 1]);
        b1[ks] = cplx(v[2 * n + 2 * k], v[2 * n + 2 * k + 1]);
        b2[ks] = cplx(v[4 * n + 2 * k], v[4 * n + 2 * k + 1]);
        c[ks] = cplx(v[6 * n + 2 * k], v[6 * n + 2 * k + 1]);
    }
    return {OneForm::imaginary(a), SpinorPair(std::move(b1), std::move(b2)), OneForm::imaginary(c)};
}

inline Eigen::VectorXd pack_output(const D2Output& o) {
    const int n = o.a_row.grid.size();
    Eigen::VectorXd v(7 * n);
    for (int k = 0; k < n; ++k) {
        const std::size_t ks = static_cast<std::size_t>(k);
        v[k] = o.a_row[ks].real();
        v[n + 2 * k] = o.b_row[ks].real();
        v[n + 2 * k + 1] = o.b_row[ks].imag();
        v[3 * n + 2 * k] = o.c_row.psi1[ks].real();
        v[3 * n + 2 * k + 1] = o.c_row.psi1[ks].imag();
        v[5 * n + 2 * k] = o.c_row.psi2bar[ks].real();
        v[5 * n + 2 * k + 1] = o.c_row.psi2bar[ks].imag();
    }
    return v;
}

inline ScalarField unpack_zeta(const GridSpec& g, const Eigen::VectorXd& v) {
    ScalarField z(g);
    for (int k = 0; k < g.size(); ++k) z[static_cast<std::size_t>(k)] = cplx(0.0, v[k]);
    return z;
}

struct ComplexAssembly {
    Eigen::MatrixXd D1;  // 8N x N
    Eigen::MatrixXd D2;  // 7N x 8N
    double t = 1.0;

    double complex_property_defect() const {
        const double denom = D2.norm() * D1.norm();
        return denom == 0.0 ? 0.0 : (D2 * D1).norm() / denom;
    }
};

inline ComplexAssembly assemble_complex(const Configuration& p, double t = 1.0,
                                        PairingMode mode = PairingMode::re_projected) {
    const GridSpec& g = p.grid();
    const int n = g.size();
    ComplexAssembly asm_;
    asm_.t = t;
    asm_.D1.resize(8 * n, n);
    for (int j = 0; j < n; ++j) {
        Eigen::VectorXd e = Eigen::VectorXd::Zero(n);
        e[j] = 1.0;
        asm_.D1.col(j) = pack_tangent(apply_d1(p, unpack_zeta(g, e), t));
    }
    asm_.D2.resize(7 * n, 8 * n);
    for (int j = 0; j < 8 * n; ++j) {
        Eigen::VectorXd e = Eigen::VectorXd::Zero(8 * n);
        e[j] = 1.0;
        asm_.D2.col(j) = pack_output(apply_d2(p, unpack_tangent(g, e), t, mode));
    }
    return asm_;
}

// -- singular value counting ------------------------------------------------------

struct RankReport {
    int rank = 0;
    int nullity = 0;
    double gap_ratio = std::numeric_limits<double>::infinity();  // last kept / first dropped
    bool reliable = true;  // gap_ratio >= 1e3
};

inline RankReport svd_rank(const Eigen::MatrixXd& M, double rel_threshold = 1e-8) {
    Eigen::BDCSVD<Eigen::MatrixXd> svd(M);
    const auto& s = svd.singularValues();
    const double smax = s.size() ? s[0] : 0.0;
    RankReport r;
    if (smax == 0.0) {
        r.rank = 0;
        r.nullity = static_cast<int>(M.cols());
        return r;
    }
    int rank = 0;
    while (rank < s.size() && s[rank] > rel_threshold * smax) ++rank;
    r.rank = rank;
    r.nullity = static_cast<int>(M.cols()) - rank;
    if (rank > 0 && rank < s.size() && s[rank] > 0.0)
        r.gap_ratio = s[rank - 1] / s[rank];
    r.reliable = r.gap_ratio >= 1e3;
    return r;
}

struct CohomologyDims {
    int h0 = 0, h1 = 0, h2 = 0;
    RankReport d1_rank, d2_rank;
    bool reliable() const { return d1_rank.reliable && d2_rank.reliable; }
};

inline CohomologyDims cohomology_dims(const ComplexAssembly& asm_, double svd_threshold = 1e-8) {
    CohomologyDims out;
    out.d1_rank = svd_rank(asm_.D1, svd_threshold);
    out.d2_rank = svd_rank(asm_.D2, svd_threshold);
    out.h0 = out.d1_rank.nullity;
    out.h1 = out.d2_rank.nullity - out.d1_rank.rank;
    out.h2 = static_cast<int>(asm_.D2.rows()) - out.d2_rank.rank;
    return out;
}

enum class DimensionCase { full, phi0_bothspinors, phi0_psi1zero };

inline int dimension_formula(int g, int c1, DimensionCase c) {
    if (g < 0) throw std::invalid_argument("dimension_formula: g >= 0 required");
    switch (c) {
        case DimensionCase::full: return 2 * g + 2 * c1 + 2;
        case DimensionCase::phi0_bothspinors: return 2 * c1 + 2;
        case DimensionCase::phi0_psi1zero: return g + c1 + 1;
    }
    throw std::logic_error("dimension_formula: bad case");
}

// h1 of the decoupled alpha-sector (complex (a)) at t = 0 on the torus:
// dim ker(d: imaginary 1-forms -> 2-forms) - rank(d: scalars -> 1-forms),
// computed on the Nyquist-filtered subspace (the zero-multiplier doubler bins
// of the spectral d are lattice artifacts, not harmonic forms).
inline int alpha_sector_h1(const GridSpec& g, double svd_threshold = 1e-8) {
    const int n = g.size();
    Eigen::MatrixXd d0(2 * n, n);       // d composed with the scalar filter
    for (int j = 0; j < n; ++j) {
        Eigen::VectorXd e = Eigen::VectorXd::Zero(n);
        e[j] = 1.0;
        ScalarField zeta = detail::drop_nyquist(unpack_zeta(g, e));
        ScalarField p10 = d_z(zeta);
        for (int k = 0; k < n; ++k) {
            d0(2 * k, j) = p10[static_cast<std::size_t>(k)].real();
            d0(2 * k + 1, j) = p10[static_cast<std::size_t>(k)].imag();
        }
    }
    Eigen::MatrixXd d1m(n, 2 * n);      // d on filtered one-forms
    Eigen::MatrixXd filter(2 * n, 2 * n);
    for (int j = 0; j < 2 * n; ++j) {
        ScalarField a(g);
        a[static_cast<std::size_t>(j / 2)] = j % 2 == 0 ? cplx(1.0, 0.0) : cplx(0.0, 1.0);
        a = detail::drop_nyquist(a);
        for (int k = 0; k < n; ++k) {
            filter(2 * k, j) = a[static_cast<std::size_t>(k)].real();
            filter(2 * k + 1, j) = a[static_cast<std::size_t>(k)].imag();
        }
        TwoForm da = exterior_d(OneForm::imaginary(a));
        for (int k = 0; k < n; ++k) d1m(k, j) = da.coeff[static_cast<std::size_t>(k)].real();
    }
    const int filtered_out = 2 * n - svd_rank(filter, svd_threshold).rank;
    const int ker_v = svd_rank(d1m, svd_threshold).nullity - filtered_out;
    return ker_v - svd_rank(d0, svd_threshold).rank;
}

// -- lattice Riemann-Roch index ------------------------------------------------------

struct IndexReport {
    int index = 0;
    int dim_ker = 0;    // zero modes of positive chirality
    int dim_coker = 0;  // zero modes of negative chirality
    double gap_ratio = std::numeric_limits<double>::infinity();
    int trace_index = 0;  // from the spectral asymmetry of g5 Dw, must agree
    bool reliable = true;
};

namespace detail {

struct OverlapParts {
    Eigen::MatrixXcd Dov;
    Eigen::MatrixXcd g5;
    double spectral_asymmetry = 0.0;  // sum of eigenvalue signs of H = g5 Dw
};

// Overlap completion of the covariant dbar for the U(1) link field.
// Spinor basis (2*site + s), gamma1 = sigma1, gamma2 = sigma2, gamma5 = sigma3,
// Wilson r = 1, negative mass 1 (the one-doubler-free branch).
inline OverlapParts overlap_parts(const LinkField& lf) {
    const GridSpec& g = lf.grid;
    const int n = g.size();
    const int dim = 2 * n;
    const cplx iu(0.0, 1.0);

    Mat2 id, g1, g2;
    id(0, 0) = 1.0; id(1, 1) = 1.0;
    g1(0, 1) = 1.0; g1(1, 0) = 1.0;
    g2(0, 1) = -iu; g2(1, 0) = iu;
    auto minus = [](const Mat2& a, const Mat2& b) {
        Mat2 out;
        for (int k = 0; k < 4; ++k) out.a[static_cast<std::size_t>(k)] = a.a[static_cast<std::size_t>(k)] - b.a[static_cast<std::size_t>(k)];
        return out;
    };
    auto plus = [](const Mat2& a, const Mat2& b) {
        Mat2 out;
        for (int k = 0; k < 4; ++k) out.a[static_cast<std::size_t>(k)] = a.a[static_cast<std::size_t>(k)] + b.a[static_cast<std::size_t>(k)];
        return out;
    };

    Eigen::MatrixXcd Dw = Eigen::MatrixXcd::Zero(dim, dim);
    auto site = [&](int ix, int iy) { return g.index((ix + g.nx) % g.nx, (iy + g.ny) % g.ny); };
    auto hop = [&](int s0, int s1, const Mat2& m, cplx factor) {
        for (int r = 0; r < 2; ++r)
            for (int c = 0; c < 2; ++c) Dw(2 * s0 + r, 2 * s1 + c) += factor * m(r, c);
    };
    for (int iy = 0; iy < g.ny; ++iy)
        for (int ix = 0; ix < g.nx; ++ix) {
            const int s0 = site(ix, iy);
            hop(s0, s0, id, cplx(1.0, 0.0));  // m + 2r with m = -1, r = 1
            hop(s0, site(ix + 1, iy), minus(id, g1), -0.5 * lf.x_link(ix, iy));
            hop(s0, site(ix - 1, iy), plus(id, g1), -0.5 * std::conj(lf.x_link((ix + g.nx - 1) % g.nx, iy)));
            hop(s0, site(ix, iy + 1), minus(id, g2), -0.5 * lf.y_link(ix, iy));
            hop(s0, site(ix, iy - 1), plus(id, g2), -0.5 * std::conj(lf.y_link(ix, (iy + g.ny - 1) % g.ny)));
        }

    OverlapParts parts;
    parts.g5 = Eigen::MatrixXcd::Zero(dim, dim);
    for (int k = 0; k < n; ++k) {
        parts.g5(2 * k, 2 * k) = 1.0;
        parts.g5(2 * k + 1, 2 * k + 1) = -1.0;
    }
    Eigen::MatrixXcd H = parts.g5 * Dw;
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> eig(H);
    Eigen::VectorXd sgn = eig.eigenvalues().unaryExpr([](double x) { return x >= 0.0 ? 1.0 : -1.0; });
    Eigen::MatrixXcd sign_h = eig.eigenvectors() * sgn.asDiagonal() * eig.eigenvectors().adjoint();
    parts.spectral_asymmetry = sgn.sum();
    parts.Dov = 0.5 * (Eigen::MatrixXcd::Identity(dim, dim) + parts.g5 * sign_h);
    return parts;
}

}  // namespace detail

inline IndexReport overlap_index(const LinkField& lf, double svd_threshold = 1e-8) {
    detail::OverlapParts parts = detail::overlap_parts(lf);
    const Eigen::MatrixXcd& Dov = parts.Dov;
    const Eigen::MatrixXcd& g5 = parts.g5;

    IndexReport rep;
    rep.trace_index = static_cast<int>(std::lround(-0.5 * parts.spectral_asymmetry));

    Eigen::JacobiSVD<Eigen::MatrixXcd> svd(Dov, Eigen::ComputeThinV);
    const auto& s = svd.singularValues();
    const double smax = s[0];
    int nzero = 0;
    for (int k = static_cast<int>(s.size()) - 1; k >= 0; --k) {
        if (s[k] <= svd_threshold * smax) ++nzero;
        else break;
    }
    if (nzero > 0) {
        const int cut = static_cast<int>(s.size()) - nzero;
        rep.gap_ratio = cut > 0 ? s[cut - 1] / std::max(s[cut], 1e-300) : std::numeric_limits<double>::infinity();
    }
    int nplus = 0, nminus = 0;
    for (int k = 0; k < nzero; ++k) {
        Eigen::VectorXcd v = svd.matrixV().col(static_cast<int>(s.size()) - 1 - k);
        const double chi = (v.adjoint() * g5 * v)(0, 0).real();
        (chi > 0.0 ? nplus : nminus) += 1;
    }
    rep.dim_ker = kOverlapIndexSign > 0 ? nminus : nplus;
    rep.dim_coker = kOverlapIndexSign > 0 ? nplus : nminus;
    rep.index = rep.dim_ker - rep.dim_coker;
    rep.reliable = rep.gap_ratio >= 1e3;
    return rep;
}

// Spectral index of the covariant dbar on the degree-d uniform-flux bundle;
// Riemann-Roch value on the torus is d.
inline IndexReport riemann_roch_index(int d, const GridSpec& g, double svd_threshold = 1e-8) {
    if (!g.torus_domain()) throw std::invalid_argument("riemann_roch_index: torus only");
    return overlap_index(make_uniform_flux_links(d, g), svd_threshold);
}

}  // namespace swrd
