#pragma once

// The metric g, almost complex structure I = (*, i, i, *), symplectic forms
// Omega and Omega_psi0, the Hamiltonian of a gauge generator, and the
// gauge-orbit orthogonality checks. Pairing conventions:
//   <beta, eta>_H = beta1 H conj(eta1) + beta2bar H conj(eta2bar)
//   g(X, Y)  = Int *a1 /\ a2 + Int Re<beta,eta>_H w + Int *g1 /\ g2
//   Omega    = -Int a1 /\ a2 + Int Re<I beta,eta>_H w - Int g1 /\ g2
// so that g(I X, Y) = Omega(X, Y) exactly (** = -1).

#include <Eigen/Dense>
#include <cmath>
#include <vector>

#include "swrd/equations.hpp"
#include "swrd/grid.hpp"
#include "swrd/linearization.hpp"
#include "swrd/random.hpp"

namespace swrd {

struct Psi0Reference {
    ScalarField psi0;
    std::vector<int> zero_set;

    explicit Psi0Reference(ScalarField f) : psi0(std::move(f)) {
        for (int k = 0; k < psi0.grid.size(); ++k)
            if (std::abs(psi0[static_cast<std::size_t>(k)]) < 1e-14) zero_set.push_back(k);
    }
};

// A section with a single first-order zero at grid node (ix0, iy0).
inline Psi0Reference psi0_single_zero(const GridSpec& g, int ix0, int iy0) {
    if (!g.torus_domain()) throw std::invalid_argument("psi0_single_zero: torus only");
    const double x0 = g.x(ix0), y0 = g.y(iy0);
    ScalarField f = ScalarField::sample(g, [x0, y0](double x, double y) {
        return cplx(std::sin(0.5 * (x - x0)) * std::cos(0.5 * (y - y0)), std::sin(0.5 * (y - y0)));
    });
    return Psi0Reference(std::move(f));
}

namespace detail {

// Int f w for a scalar density f; w = i e^{2 sigma} h^2 dz/\dzbar = 2 rho^2 dx dy.
inline cplx integrate_against_omega(const ScalarField& f, const MetricData& m) {
    ScalarField rho = m.rho();
    return cplx(2.0, 0.0) * integrate_scalar(f * (rho * rho));
}

inline ScalarField pairing_h(const HermitianMetric& H, const SpinorPair& b, const SpinorPair& e) {
    return b.psi1 * H.H * conj(e.psi1) + b.psi2bar * H.H * conj(e.psi2bar);
}

}  // namespace detail

inline TangentVector acs_apply(const TangentVector& X) {
    return {hodge_star_one_form(X.alpha),
            SpinorPair(cplx(0.0, 1.0) * X.beta.psi1, cplx(0.0, 1.0) * X.beta.psi2bar),
            hodge_star_one_form(X.gamma)};
}

inline TangentVector gauge_push(const GaugeTransform& gt, const TangentVector& X) {
    const ScalarField ui = gt.u_inv();
    return {X.alpha, SpinorPair(ui * X.beta.psi1, ui * X.beta.psi2bar), X.gamma};
}

inline double metric_g(const Configuration& p, const TangentVector& X, const TangentVector& Y) {
    const cplx a = integrate_two_form(wedge_one_forms(hodge_star_one_form(X.alpha), Y.alpha));
    const cplx c = integrate_two_form(wedge_one_forms(hodge_star_one_form(X.gamma), Y.gamma));
    const cplx s = detail::integrate_against_omega(real_part(detail::pairing_h(p.H, X.beta, Y.beta)), p.metric);
    return (a + c + s).real();
}

inline double omega(const Configuration& p, const TangentVector& X, const TangentVector& Y) {
    const cplx a = integrate_two_form(wedge_one_forms(X.alpha, Y.alpha));
    const cplx c = integrate_two_form(wedge_one_forms(X.gamma, Y.gamma));
    const ScalarField ib = real_part(cplx(0.0, 1.0) * detail::pairing_h(p.H, X.beta, Y.beta));
    const cplx s = detail::integrate_against_omega(ib, p.metric);
    return (-a - c + s).real();
}

// -Int a1/\a2 + (i/2) Int [(b1 H conj(e1) - conj(b1) H e1)
//                        - (b2 H conj(e2) - conj(b2) H e2)] |psi0|^2_H w - Int g1/\g2
inline double omega_psi0(const Configuration& p, const Psi0Reference& ref,
                         const TangentVector& X, const TangentVector& Y) {
    const cplx a = integrate_two_form(wedge_one_forms(X.alpha, Y.alpha));
    const cplx c = integrate_two_form(wedge_one_forms(X.gamma, Y.gamma));
    const ScalarField w0 = abs2(ref.psi0) * p.H.H;

    const ScalarField t1 = X.beta.psi1 * p.H.H * conj(Y.beta.psi1);
    const ScalarField b2 = conj(X.beta.psi2bar), e2 = conj(Y.beta.psi2bar);
    const ScalarField t2 = b2 * p.H.H * conj(e2);
    const ScalarField bracket = (t1 - conj(t1)) - (t2 - conj(t2));
    const cplx s = detail::integrate_against_omega(cplx(0.0, 0.5) * bracket * w0, p.metric);
    return (-a - c + s).real();
}

// H_zeta(p) = Int zeta mu(p); real because zeta and the moment density are both imaginary.
inline double hamiltonian_h_zeta(const Configuration& p, const ScalarField& zeta) {
    const TwoForm mu = moment_map(p);
    const cplx v = cplx(0.0, -2.0) * integrate_scalar(zeta * mu.coeff);
    return v.real();
}

// Shift p by epsilon X (smooth potentials only), for the central-difference checks.
inline Configuration shift_configuration(const Configuration& p, const TangentVector& X, double eps) {
    Configuration out = p;
    out.A.potential = OneForm(p.A.potential.p10 + cplx(eps, 0.0) * X.alpha.p10,
                              p.A.potential.p01 + cplx(eps, 0.0) * X.alpha.p01, RealityTag::unitary_connection);
    out.Psi = SpinorPair(p.Psi.psi1 + cplx(eps, 0.0) * X.beta.psi1,
                         p.Psi.psi2bar + cplx(eps, 0.0) * X.beta.psi2bar);
    out.Phi = HiggsField(p.Phi.phi + cplx(eps, 0.0) * X.gamma.p10);
    return out;
}

// -- orbit machinery -------------------------------------------------------------

// Diagonal of the g-metric Gram in the packed real dofs.
inline Eigen::VectorXd metric_diagonal(const Configuration& p) {
    const GridSpec& g = p.grid();
    const int n = g.size();
    Eigen::VectorXd w(8 * n);
    const ScalarField rho = p.metric.rho();
    const double cell = g.cell_area();
    for (int k = 0; k < n; ++k) {
        const std::size_t ks = static_cast<std::size_t>(k);
        const bool margin = g.in_margin(k % g.nx, k / g.nx);
        const double wa = margin ? 0.0 : 4.0 * cell;
        const double ws = margin ? 0.0 : 2.0 * rho[ks].real() * rho[ks].real() * p.H.H[ks].real() * cell;
        w[2 * k] = w[2 * k + 1] = wa;
        w[2 * n + 2 * k] = w[2 * n + 2 * k + 1] = ws;
        w[4 * n + 2 * k] = w[4 * n + 2 * k + 1] = ws;
        w[6 * n + 2 * k] = w[6 * n + 2 * k + 1] = wa;
    }
    return w;
}

struct OrbitProjector {
    Eigen::MatrixXd orbit;      // D1 columns, 8N x N
    Eigen::VectorXd wdiag;      // metric diagonal
    Eigen::LDLT<Eigen::MatrixXd> gram;

    OrbitProjector(const Configuration& p, const ComplexAssembly& asm_)
        : orbit(asm_.D1), wdiag(metric_diagonal(p)), gram((orbit.transpose() * wdiag.asDiagonal() * orbit).eval()) {}

    Eigen::VectorXd project_out(const Eigen::VectorXd& x) const {
        Eigen::VectorXd rhs = orbit.transpose() * (wdiag.asDiagonal() * x);
        return x - orbit * gram.solve(rhs);
    }
    double orbit_pairing_norm(const Eigen::VectorXd& x) const {
        return (orbit.transpose() * (wdiag.asDiagonal() * x)).norm();
    }
};

// Random orbit-orthogonal combinations of the numerical kernel of D2.
inline std::vector<Eigen::VectorXd> solution_tangent_samples(const ComplexAssembly& asm_,
                                                             const OrbitProjector& proj, Rng& rng,
                                                             int count, double rel_threshold = 1e-12) {
    Eigen::BDCSVD<Eigen::MatrixXd> svd(asm_.D2, Eigen::ComputeFullV);
    const auto& s = svd.singularValues();
    const double smax = s[0];
    std::vector<int> null_cols;
    for (int k = 0; k < svd.matrixV().cols(); ++k)
        if (k >= s.size() || s[k] <= rel_threshold * smax) null_cols.push_back(k);
    std::vector<Eigen::VectorXd> out;
    for (int c = 0; c < count; ++c) {
        Eigen::VectorXd x = Eigen::VectorXd::Zero(asm_.D2.cols());
        for (int k : null_cols) x += rng.next_signed() * svd.matrixV().col(k);
        x = proj.project_out(x);
        const double nrm = std::sqrt(x.dot(proj.wdiag.asDiagonal() * x));
        if (nrm > 0.0) x /= nrm;
        out.push_back(std::move(x));
    }
    return out;
}

struct OrbitReport {
    double pure_orbit_projection;   // |project_out(d1 zeta)| / |d1 zeta|
    double projected_acs_residual;  // |D2 (I X_proj)| / |D2|
    double unprojected_acs_residual;
};

// The Lemma checks: (a) orbit directions project to ~0, (b) I X stays in the
// linearized solution space once X is orbit-orthogonal, (c) negative control
// with the orbit component kept.
inline OrbitReport gauge_orbit_orthogonality(const Configuration& p, const ComplexAssembly& asm_,
                                             const OrbitProjector& proj, const Eigen::VectorXd& x_solution,
                                             const ScalarField& zeta_probe) {
    const GridSpec& g = p.grid();
    OrbitReport rep{};

    Eigen::VectorXd xo = pack_tangent(apply_d1(p, zeta_probe, asm_.t));
    rep.pure_orbit_projection = proj.project_out(xo).norm() / xo.norm();

    const double d2scale = asm_.D2.norm();
    auto acs_residual = [&](const Eigen::VectorXd& x) {
        const TangentVector ix = acs_apply(unpack_tangent(g, x));
        return (asm_.D2 * pack_tangent(ix)).norm() / (d2scale * std::max(x.norm(), 1e-300));
    };

    Eigen::VectorXd xp = proj.project_out(x_solution);
    rep.projected_acs_residual = acs_residual(xp);

    Eigen::VectorXd xbad = xp + xo / xo.norm() * xp.norm();
    rep.unprojected_acs_residual = acs_residual(xbad);
    return rep;
}

}  // namespace swrd
