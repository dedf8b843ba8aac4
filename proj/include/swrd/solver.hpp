#pragma once

// Newton solvers on the disk patch: the prescribed-curvature (Liouville)
// equation for the conformal factor, and an experimental coupled iteration
// for the full system with gauge-orthogonal updates.
//
// K(e^sigma h) = -c   <=>   lap(sigma) = 2 c h^2 e^{2 sigma} - lap(ln h)
// (coefficient 2c re-derived from curvature_k's normalization and frozen; the
// hyperbolic calibration h = 2/(1-|z|^2), c = 1/2 makes sigma = 0 exact).
// The solver and curvature_k share one discrete Laplacian, so the reported
// K-residual is exactly what equations::curvature_k reproduces.

#include <Eigen/Dense>
#include <Eigen/Sparse>
#include <cmath>
#include <optional>
#include <string>
#include <vector>

#include "swrd/equations.hpp"
#include "swrd/grid.hpp"
#include "swrd/linearization.hpp"

namespace swrd {

struct SolverOptions {
    int max_iter = 50;
    double residual_tol = 1e-10;
    double backtrack = 0.5;
    double linear_tol = 1e-12;

    void validate() const {
        if (max_iter < 1 || residual_tol <= 0.0 || backtrack <= 0.0 || backtrack >= 1.0 || linear_tol <= 0.0)
            throw std::invalid_argument("SolverOptions: all fields positive, max_iter >= 1, backtrack in (0,1)");
    }
};

struct TraceRecord {
    int iter = 0;
    double residual_sup = 0.0;
    double residual_l2 = 0.0;
    double step_length = 0.0;
};

struct LiouvilleResult {
    ScalarField sigma;
    std::vector<TraceRecord> trace;
    bool converged = false;
    std::string message;
};

namespace detail {

// 1-D five-point second-derivative rows, all-centered thanks to margin >= 2.
struct PatchLaplacian {
    GridSpec grid;
    std::vector<int> interior;          // node -> order in the unknown vector, -1 for margin
    std::vector<int> nodes;             // unknown -> node
    std::vector<double> wx, wy;         // centered stencils

    explicit PatchLaplacian(const GridSpec& g) : grid(g), interior(static_cast<std::size_t>(g.size()), -1) {
        for (int iy = 0; iy < g.ny; ++iy)
            for (int ix = 0; ix < g.nx; ++ix)
                if (!g.in_margin(ix, iy)) {
                    interior[static_cast<std::size_t>(g.index(ix, iy))] = static_cast<int>(nodes.size());
                    nodes.push_back(g.index(ix, iy));
                }
        std::vector<double> xs(detail::kStencil);
        for (int q = 0; q < detail::kStencil; ++q) xs[static_cast<std::size_t>(q)] = (q - 2) * g.dx();
        wx = fd_weights(0.0, xs, 2);
        for (int q = 0; q < detail::kStencil; ++q) xs[static_cast<std::size_t>(q)] = (q - 2) * g.dy();
        wy = fd_weights(0.0, xs, 2);
    }

    int count() const { return static_cast<int>(nodes.size()); }

    // lap u at interior nodes; u vanishes on the margin (Dirichlet).
    Eigen::SparseMatrix<double> dirichlet_matrix() const {
        std::vector<Eigen::Triplet<double>> trips;
        for (int k = 0; k < count(); ++k) {
            const int node = nodes[static_cast<std::size_t>(k)];
            const int ix = node % grid.nx, iy = node / grid.nx;
            for (int q = -2; q <= 2; ++q) {
                const int jx = interior[static_cast<std::size_t>(grid.index(ix + q, iy))];
                if (jx >= 0) trips.emplace_back(k, jx, wx[static_cast<std::size_t>(q + 2)]);
                const int jy = interior[static_cast<std::size_t>(grid.index(ix, iy + q))];
                if (jy >= 0) trips.emplace_back(k, jy, wy[static_cast<std::size_t>(q + 2)]);
            }
        }
        Eigen::SparseMatrix<double> m(count(), count());
        m.setFromTriplets(trips.begin(), trips.end());
        return m;
    }
};

}  // namespace detail

inline LiouvilleResult solve_liouville(const ScalarField& h, double c, const GridSpec& grid,
                                       const SolverOptions& opts = {},
                                       const std::optional<ScalarField>& sigma0 = std::nullopt) {
    opts.validate();
    if (grid.torus_domain()) throw std::invalid_argument("solve_liouville: disk patch only");
    if (c < 0.0) throw std::invalid_argument("solve_liouville: c >= 0 required");
    require_same_grid(h.grid, grid, "solve_liouville");

    detail::PatchLaplacian lap(grid);
    const int m = lap.count();

    ScalarField ln_h = map(h, [](cplx v) { return cplx(std::log(v.real()), 0.0); });
    ScalarField lap_ln_h = laplacian(ln_h);

    Eigen::VectorXd sig = Eigen::VectorXd::Zero(m);
    if (sigma0)
        for (int k = 0; k < m; ++k) sig[k] = (*sigma0).values[static_cast<std::size_t>(lap.nodes[static_cast<std::size_t>(k)])].real();

    Eigen::SparseMatrix<double> L = lap.dirichlet_matrix();

    auto to_field = [&](const Eigen::VectorXd& v) {
        ScalarField f(grid);
        for (int k = 0; k < m; ++k) f.values[static_cast<std::size_t>(lap.nodes[static_cast<std::size_t>(k)])] = cplx(v[k], 0.0);
        return f;
    };
    // R = lap sigma - 2 c h^2 e^{2 sigma} + lap ln h, rows at interior nodes
    auto pde_residual = [&](const Eigen::VectorXd& s) {
        Eigen::VectorXd r = L * s;
        for (int k = 0; k < m; ++k) {
            const std::size_t node = static_cast<std::size_t>(lap.nodes[static_cast<std::size_t>(k)]);
            const double hh = h.values[node].real();
            r[k] += lap_ln_h.values[node].real() - 2.0 * c * hh * hh * std::exp(2.0 * s[k]);
        }
        return r;
    };
    // K(e^sigma h) + c = -R / (2 rho^2), the verifier-grade residual
    auto k_residual = [&](const Eigen::VectorXd& s, const Eigen::VectorXd& r, double& sup, double& l2) {
        sup = 0.0;
        double acc = 0.0;
        for (int k = 0; k < m; ++k) {
            const std::size_t node = static_cast<std::size_t>(lap.nodes[static_cast<std::size_t>(k)]);
            const double rho = h.values[node].real() * std::exp(s[k]);
            const double v = -r[k] / (2.0 * rho * rho);
            sup = std::max(sup, std::abs(v));
            acc += v * v;
        }
        l2 = std::sqrt(acc * grid.cell_area());
    };

    LiouvilleResult out;
    Eigen::VectorXd r = pde_residual(sig);
    for (int it = 0; it < opts.max_iter; ++it) {
        double sup, l2;
        k_residual(sig, r, sup, l2);
        out.trace.push_back({it, sup, l2, it == 0 ? 0.0 : out.trace.back().step_length});
        if (sup <= opts.residual_tol * (1.0 + c)) {
            out.converged = true;
            break;
        }

        // J = lap - diag(4 c h^2 e^{2 sigma}); -J is SPD
        Eigen::SparseMatrix<double> J = L;
        for (int k = 0; k < m; ++k) {
            const std::size_t node = static_cast<std::size_t>(lap.nodes[static_cast<std::size_t>(k)]);
            const double hh = h.values[node].real();
            J.coeffRef(k, k) -= 4.0 * c * hh * hh * std::exp(2.0 * sig[k]);
        }
        Eigen::SimplicialLDLT<Eigen::SparseMatrix<double>> fact(-J);
        if (fact.info() != Eigen::Success) {
            out.message = "singular Newton system";
            out.sigma = to_field(sig);
            return out;
        }
        Eigen::VectorXd delta = fact.solve(r);

        double step = 1.0;
        const double r0 = r.norm();
        Eigen::VectorXd cand;
        Eigen::VectorXd rc;
        for (int ls = 0; ls < 40; ++ls) {
            cand = sig + step * delta;
            rc = pde_residual(cand);
            if (rc.norm() < r0) break;
            step *= opts.backtrack;
        }
        sig = cand;
        r = rc;
        out.trace.back().step_length = step;
    }
    if (!out.converged && !out.trace.empty()) {
        double sup, l2;
        k_residual(sig, r, sup, l2);
        if (sup <= opts.residual_tol * (1.0 + c)) out.converged = true;
        out.trace.push_back({static_cast<int>(out.trace.size()), sup, l2, out.trace.back().step_length});
        if (!out.converged && out.message.empty()) out.message = "no convergence after max_iter";
    }
    out.sigma = to_field(sig);
    return out;
}

// -- coupled Newton on the patch ----------------------------------------------------

struct CoupledResult {
    Configuration config;
    std::vector<TraceRecord> trace;
    bool converged = false;
    bool degenerate = false;  // Psi == 0 branch
    std::string message;
};

namespace detail {

inline double combined_residual_l2(const Configuration& c) {
    const TwoForm mu = moment_map(c);
    const TwoForm hg = higgs_residual(c);
    const SpinorPair dr = dirac_residual_2d(c.A, c.Psi, c.Phi);
    const double a = l2_norm(mu.coeff), b = l2_norm(hg.coeff);
    const double d1 = l2_norm(dr.psi1), d2 = l2_norm(dr.psi2bar);
    return std::sqrt(a * a + b * b + d1 * d1 + d2 * d2);
}

inline double combined_residual_sup(const Configuration& c) {
    const TwoForm mu = moment_map(c);
    const TwoForm hg = higgs_residual(c);
    const SpinorPair dr = dirac_residual_2d(c.A, c.Psi, c.Phi);
    return std::max({sup_norm(mu.coeff), sup_norm(hg.coeff), sup_norm(dr.psi1), sup_norm(dr.psi2bar)});
}

}  // namespace detail

// Newton for the full coupled system in (A, Psi, Phi) with margin values pinned to the
// initial guess and updates constrained g-orthogonal to the gauge orbit.
inline CoupledResult newton_coupled(const Configuration& c0, const SolverOptions& opts = {}) {
    opts.validate();
    const GridSpec& g = c0.grid();
    if (g.torus_domain()) throw std::invalid_argument("newton_coupled: disk patch only");
    if (c0.A.lattice()) throw std::invalid_argument("newton_coupled: smooth potentials only");

    CoupledResult out{c0, {}, false, false, ""};
    if (sup_norm(c0.Psi.psi1) + sup_norm(c0.Psi.psi2bar) < 1e-12) {
        out.degenerate = true;
        out.converged = detail::combined_residual_sup(c0) <= opts.residual_tol;
        out.message = "Psi == 0: trivial branch, Jacobian rank-deficient by construction";
        out.trace.push_back({0, detail::combined_residual_sup(c0), detail::combined_residual_l2(c0), 0.0});
        return out;
    }

    detail::PatchLaplacian idx(g);  // reuse the interior indexing
    const int m = idx.count();
    const int dofs = 8 * m;

    // interior sub-packing of tangent vectors / residual rows
    auto pack_x = [&](const TangentVector& X) {
        Eigen::VectorXd v(dofs);
        for (int k = 0; k < m; ++k) {
            const std::size_t node = static_cast<std::size_t>(idx.nodes[static_cast<std::size_t>(k)]);
            v[2 * k] = X.alpha.p10[node].real();
            v[2 * k + 1] = X.alpha.p10[node].imag();
            v[2 * m + 2 * k] = X.beta.psi1[node].real();
            v[2 * m + 2 * k + 1] = X.beta.psi1[node].imag();
            v[4 * m + 2 * k] = X.beta.psi2bar[node].real();
            v[4 * m + 2 * k + 1] = X.beta.psi2bar[node].imag();
            v[6 * m + 2 * k] = X.gamma.p10[node].real();
            v[6 * m + 2 * k + 1] = X.gamma.p10[node].imag();
        }
        return v;
    };
    auto unpack_x = [&](const Eigen::VectorXd& v) {
        ScalarField a(g), b1(g), b2(g), gm(g);
        for (int k = 0; k < m; ++k) {
            const std::size_t node = static_cast<std::size_t>(idx.nodes[static_cast<std::size_t>(k)]);
            a[node] = cplx(v[2 * k], v[2 * k + 1]);
            b1[node] = cplx(v[2 * m + 2 * k], v[2 * m + 2 * k + 1]);
            b2[node] = cplx(v[4 * m + 2 * k], v[4 * m + 2 * k + 1]);
            gm[node] = cplx(v[6 * m + 2 * k], v[6 * m + 2 * k + 1]);
        }
        return TangentVector{OneForm::imaginary(a), SpinorPair(std::move(b1), std::move(b2)), OneForm::imaginary(gm)};
    };
    auto pack_rows = [&](const ScalarField& r21c, const ScalarField& r22c, const SpinorPair& r23) {
        Eigen::VectorXd v(7 * m);
        for (int k = 0; k < m; ++k) {
            const std::size_t node = static_cast<std::size_t>(idx.nodes[static_cast<std::size_t>(k)]);
            v[k] = r21c[node].real();
            v[m + 2 * k] = r22c[node].real();
            v[m + 2 * k + 1] = r22c[node].imag();
            v[3 * m + 2 * k] = r23.psi1[node].real();
            v[3 * m + 2 * k + 1] = r23.psi1[node].imag();
            v[5 * m + 2 * k] = r23.psi2bar[node].real();
            v[5 * m + 2 * k + 1] = r23.psi2bar[node].imag();
        }
        return v;
    };

    Configuration cur = c0;
    auto residual_vec = [&](const Configuration& c) {
        return pack_rows(moment_map(c).coeff, higgs_residual(c).coeff, dirac_residual_2d(c.A, c.Psi, c.Phi));
    };
    auto apply_update = [&](const Configuration& c, const TangentVector& X, double s) {
        Configuration nxt = c;
        nxt.A.potential = OneForm(c.A.potential.p10 + cplx(s, 0.0) * X.alpha.p10,
                                  c.A.potential.p01 + cplx(s, 0.0) * X.alpha.p01, RealityTag::unitary_connection);
        nxt.Psi = SpinorPair(c.Psi.psi1 + cplx(s, 0.0) * X.beta.psi1, c.Psi.psi2bar + cplx(s, 0.0) * X.beta.psi2bar);
        nxt.Phi = HiggsField(c.Phi.phi + cplx(s, 0.0) * X.gamma.p10);
        return nxt;
    };

    Eigen::VectorXd r = residual_vec(cur);
    for (int it = 0; it < opts.max_iter; ++it) {
        out.trace.push_back({it, detail::combined_residual_sup(cur), detail::combined_residual_l2(cur), it == 0 ? 0.0 : out.trace.back().step_length});
        if (out.trace.back().residual_l2 <= opts.residual_tol) {
            out.converged = true;
            break;
        }

        // rows: linearized equations at interior + gauge orthogonality
        Eigen::MatrixXd Jbig(8 * m, dofs);
        Eigen::MatrixXd orbit(dofs, m);
        {
            // orbit directions for nodal zetas, and the diagonal g-weights
            Eigen::VectorXd wdiag(dofs);
            ScalarField rho = cur.metric.rho();
            for (int k = 0; k < m; ++k) {
                const std::size_t node = static_cast<std::size_t>(idx.nodes[static_cast<std::size_t>(k)]);
                const double w = g.cell_area();
                const double wspin = 2.0 * rho[node].real() * rho[node].real() * cur.H.H[node].real() * w;
                wdiag[2 * k] = wdiag[2 * k + 1] = 4.0 * w;
                wdiag[2 * m + 2 * k] = wdiag[2 * m + 2 * k + 1] = wspin;
                wdiag[4 * m + 2 * k] = wdiag[4 * m + 2 * k + 1] = wspin;
                wdiag[6 * m + 2 * k] = wdiag[6 * m + 2 * k + 1] = 4.0 * w;
            }
            for (int j = 0; j < m; ++j) {
                ScalarField zeta(g);
                zeta.values[static_cast<std::size_t>(idx.nodes[static_cast<std::size_t>(j)])] = cplx(0.0, 1.0);
                orbit.col(j) = pack_x(apply_d1(cur, zeta));
            }
            for (int j = 0; j < dofs; ++j) {
                Eigen::VectorXd e = Eigen::VectorXd::Zero(dofs);
                e[j] = 1.0;
                const TangentVector X = unpack_x(e);
                const D2Output o = apply_d2(cur, X);
                Jbig.block(0, j, 7 * m, 1) = pack_rows(o.a_row, o.b_row, o.c_row);
            }
            Jbig.block(7 * m, 0, m, dofs) = orbit.transpose() * wdiag.asDiagonal();
        }

        Eigen::VectorXd rhs(8 * m);
        rhs.head(7 * m) = -r;
        rhs.tail(m).setZero();
        Eigen::PartialPivLU<Eigen::MatrixXd> lu(Jbig);
        Eigen::VectorXd dx = lu.solve(rhs);
        if (!dx.allFinite()) {
            out.message = "rank-deficient Jacobian";
            break;
        }
        const TangentVector X = unpack_x(dx);

        double step = 1.0;
        const double r0 = r.norm();
        Configuration cand = cur;
        Eigen::VectorXd rc = r;
        for (int ls = 0; ls < 40; ++ls) {
            cand = apply_update(cur, X, step);
            rc = residual_vec(cand);
            if (rc.norm() < r0) break;
            step *= opts.backtrack;
        }
        if (rc.norm() >= r0) {
            out.message = "line search stalled";
            break;
        }
        cur = cand;
        r = rc;
        out.trace.back().step_length = step;
    }
    if (!out.converged) {
        const double fin = detail::combined_residual_l2(cur);
        out.trace.push_back({static_cast<int>(out.trace.size()), detail::combined_residual_sup(cur), fin, 1.0});
        out.converged = fin <= opts.residual_tol;
        if (!out.converged && out.message.empty()) out.message = "no convergence after max_iter";
    }
    out.config = cur;
    return out;
}

}  // namespace swrd
