#include <doctest.h>

#include "swrd/bases.hpp"
#include "swrd/symplectic.hpp"

using namespace swrd;

namespace {

struct Fixture {
    GridSpec g = GridSpec::torus(16, 16);
    Rng rng{17};
    Configuration p;
    Fixture() : p(bases::torus_dirac_base(g, rng)) {}
};

}  // namespace

TEST_CASE("metric g: displayed expansion and definiteness") {
    Fixture fx;
    Rng rng(21);
    // X with alpha = a dz - conj(a) dzbar, beta = 0, gamma = c dz - conj(c) dzbar
    ScalarField a = random_band_limited(fx.g, rng), c = random_band_limited(fx.g, rng);
    TangentVector X{OneForm::imaginary(a), SpinorPair::zero(fx.g), OneForm::imaginary(c)};
    const double gxx = metric_g(fx.p, X, X);
    const double expect = 4.0 * integrate_scalar(abs2(a)).real() + 4.0 * integrate_scalar(abs2(c)).real();
    CHECK(std::abs(gxx - expect) < 1e-10 * expect);

    for (int s = 0; s < 10; ++s) {
        const TangentVector U = bases::random_tangent(fx.g, rng);
        const TangentVector V = bases::random_tangent(fx.g, rng);
        const double uu = metric_g(fx.p, U, U);
        CHECK(uu > 0.0);
        CHECK(std::abs(metric_g(fx.p, U, V) - metric_g(fx.p, V, U)) < 1e-12 * std::max(1.0, std::abs(uu)));
    }
    CHECK(metric_g(fx.p, TangentVector::zero(fx.g), TangentVector::zero(fx.g)) == 0.0);
}

TEST_CASE("almost complex structure") {
    Fixture fx;
    Rng rng(23);
    const TangentVector X = bases::random_tangent(fx.g, rng);

    const TangentVector XX = acs_apply(acs_apply(X));
    CHECK(sup_norm(XX.alpha.p10 + X.alpha.p10) == 0.0);
    CHECK(sup_norm(XX.beta.psi1 + X.beta.psi1) == 0.0);
    CHECK(sup_norm(XX.gamma.p10 + X.gamma.p10) == 0.0);

    CHECK(acs_apply(X).alpha.reality_defect() < 1e-13);
    CHECK(acs_apply(X).gamma.reality_defect() < 1e-13);

    // commutes with the gauge push-forward (Id, u^{-1}, Id)
    GaugeTransform gt(random_imaginary(fx.g, rng));
    const TangentVector lhs = acs_apply(gauge_push(gt, X));
    const TangentVector rhs = gauge_push(gt, acs_apply(X));
    CHECK(sup_norm(lhs.beta.psi1 - rhs.beta.psi1) == 0.0);
    CHECK(sup_norm(lhs.alpha.p10 - rhs.alpha.p10) == 0.0);
}

TEST_CASE("omega: antisymmetry, compatibility, acs invariance") {
    Fixture fx;
    Rng rng(25);
    for (int s = 0; s < 10; ++s) {
        const TangentVector X = bases::random_tangent(fx.g, rng);
        const TangentVector Y = bases::random_tangent(fx.g, rng);
        const double oxy = omega(fx.p, X, Y);
        const double scale = std::max(1.0, std::abs(oxy));
        CHECK(std::abs(omega(fx.p, X, X)) < 1e-12 * scale);
        CHECK(std::abs(omega(fx.p, Y, X) + oxy) < 1e-12 * scale);
        CHECK(std::abs(metric_g(fx.p, acs_apply(X), Y) - oxy) < 1e-12 * scale);
        CHECK(std::abs(omega(fx.p, acs_apply(X), acs_apply(Y)) - oxy) < 1e-12 * scale);
    }
}

TEST_CASE("omega_psi0: reduction at unit weight, antisymmetry, zero set") {
    Fixture fx;
    Rng rng(27);
    const Psi0Reference one(ScalarField(fx.g, cplx(1.0, 0.0)));
    const TangentVector X = bases::random_tangent(fx.g, rng);
    const TangentVector Y = bases::random_tangent(fx.g, rng);
    // with H = 1 the spinor weight reduces to the omega pairing
    Configuration pu = fx.p;
    pu.H = HermitianMetric::unit(fx.g);
    const double scale = std::max(1.0, std::abs(omega(pu, X, Y)));
    CHECK(std::abs(omega_psi0(pu, one, X, Y) - omega(pu, X, Y)) < 1e-12 * scale);
    CHECK(std::abs(omega_psi0(pu, one, X, X)) < 1e-12 * scale);

    const Psi0Reference zref = psi0_single_zero(fx.g, 4, 12);
    CHECK(zref.zero_set.size() == 1);
    CHECK(zref.zero_set[0] == fx.g.index(4, 12));
}

TEST_CASE("hamiltonian: dH_zeta(X) = Omega(X_zeta, X) by central differences") {
    // small-field base: H_zeta is cancellation-limited at eps = 1e-5 otherwise
    const GridSpec g = GridSpec::torus(16, 16);
    Rng brng(28);
    bases::BaseOptions opt;
    opt.scale = 0.1;
    const Configuration p = bases::torus_dirac_base(g, brng, opt);
    Rng rng(29);
    for (int s = 0; s < 5; ++s) {
        const TangentVector X = bases::random_tangent(g, rng);
        ScalarField zeta = random_imaginary(g, rng);
        const double eps = 1e-5;
        const double fd = (hamiltonian_h_zeta(shift_configuration(p, X, eps), zeta) -
                           hamiltonian_h_zeta(shift_configuration(p, X, -eps), zeta)) / (2.0 * eps);
        const double om = omega(p, apply_d1(p, zeta), X);
        CHECK(std::abs(fd - om) < 1e-10 * std::max(1.0, std::abs(om)));
    }
    // constant zeta on the trivial bundle: H = zeta * (integral of mu)
    ScalarField zc(g, cplx(0.0, 0.4));
    const double direct = hamiltonian_h_zeta(p, zc);
    const cplx mu_total = integrate_two_form(moment_map(p));
    CHECK(std::abs(direct - (cplx(0.0, 0.4) * mu_total).real()) < 1e-10 * std::max(1.0, std::abs(direct)));
}

TEST_CASE("hamiltonian vanishes at a solution point") {
    const GridSpec g = GridSpec::patch(64, 64);
    ScalarField f(g, cplx(-0.5 * std::log(2.0), 0.0)), sigma(g);
    const Configuration c = hyperbolic_patch_config(f, f, sigma);
    Rng rng(33);
    ScalarField zeta = cplx(0.0, 1.0) * real_part(random_patch_bump(g, rng, 2, 1.0));
    // mu is truncation-small at the closed-form solution, so H_zeta is too
    CHECK(std::abs(hamiltonian_h_zeta(c, zeta)) < 1e-5);
}

TEST_CASE("orbit orthogonality lemma") {
    Fixture fx;
    const ComplexAssembly asm_ = assemble_complex(fx.p);
    const OrbitProjector proj(fx.p, asm_);
    Rng rng(31);
    const auto samples = solution_tangent_samples(asm_, proj, rng, 2);
    ScalarField zeta = random_imaginary(fx.g, rng, 0, 0.7);
    for (const auto& x : samples) {
        const OrbitReport rep = gauge_orbit_orthogonality(fx.p, asm_, proj, x, zeta);
        CHECK(rep.pure_orbit_projection < 1e-8);
        CHECK(rep.projected_acs_residual < 1e-8);
        CHECK(rep.unprojected_acs_residual > 1e-3);
    }
}

TEST_CASE("omega_psi0 nondegeneracy on orbit-orthogonal families") {
    Fixture fx;
    const ComplexAssembly asm_ = assemble_complex(fx.p);
    const OrbitProjector proj(fx.p, asm_);
    const Psi0Reference ref = psi0_single_zero(fx.g, fx.g.nx / 2, fx.g.ny / 2);
    for (std::uint64_t seed : {41, 42, 43}) {
        Rng rng(seed);
        std::vector<TangentVector> fam;
        for (int k = 0; k < 10; ++k)
            fam.push_back(unpack_tangent(fx.g, proj.project_out(pack_tangent(bases::random_tangent(fx.g, rng)))));
        Eigen::MatrixXd gram(10, 10);
        for (int a = 0; a < 10; ++a)
            for (int b = 0; b < 10; ++b)
                gram(a, b) = a == b ? 0.0 : omega_psi0(fx.p, ref, fam[static_cast<std::size_t>(a)], fam[static_cast<std::size_t>(b)]);
        Eigen::JacobiSVD<Eigen::MatrixXd> svd(gram);
        CHECK(svd.singularValues()(9) > 1e-8 * svd.singularValues()(0));
    }
}
