#include "wedgelab/singleparticle.hpp"

#include <catch2/catch_amalgamated.hpp>

using namespace wedgelab;
using namespace wedgelab::onep;

namespace {
const QuadratureRule& rule()
{
    static QuadratureRule q = default_rule();
    return q;
}
} // namespace

TEST_CASE("mass shell", "[singleparticle]")
{
    for (double th : {-6.0, -1.3, 0.0, 2.2, 6.0}) {
        const auto p = mass_shell(1.7, th);
        CHECK(std::abs(mink2(p, p) - cplx(1.7 * 1.7)) <= 1e-13 * 1.7 * 1.7 * std::cosh(2 * th));
        CHECK(p[0].real() > 0);
    }
    // p(z -+ i pi) = -p(z)
    const auto p = mass_shell(1.0, cplx(0.8, 0.0));
    const auto pm = mass_shell(1.0, cplx(0.8, -pi));
    CHECK(std::abs(p[0] + pm[0]) < 1e-14);
    CHECK(std::abs(p[1] + pm[1]) < 1e-14);
}

TEST_CASE("Poincare action on wave functions", "[singleparticle]")
{
    const auto xi = gaussian(1.0, 1.0, 0.3);
    const auto id = act_poincare(xi, RVec::Zero(2), 0.0);
    CHECK(distance(rule(), xi, id) < 1e-14);

    // boost shifts the argument
    const auto boosted = act_poincare(xi, RVec::Zero(2), 0.7);
    CHECK(std::abs(boosted(0, 1.0) - xi(0, 1.0 - 0.7)) < 1e-15);

    // time translation at theta = 0 multiplies by exp(i m t)
    RVec x = geom::point({0.4, 0.0});
    const auto shifted = act_poincare(xi, x, 0.0);
    CHECK(std::abs(shifted(0, 0.0) - std::exp(iu * 0.4) * xi(0, 0.0)) < 1e-15);

    // representation property U(g1) U(g2) = U(g1 g2), g = (x, boost)
    Rng rng(5);
    for (int t = 0; t < 5; ++t) {
        const double l1 = rng.uniform(-0.8, 0.8), l2 = rng.uniform(-0.8, 0.8);
        RVec x1(2), x2(2);
        x1 << rng.uniform(-1, 1), rng.uniform(-1, 1);
        x2 << rng.uniform(-1, 1), rng.uniform(-1, 1);
        const auto lhs = act_poincare(act_poincare(xi, x2, l2), x1, l1);
        const RVec x12 = x1 + geom::boost01(2, l1) * x2;
        const auto rhs = act_poincare(xi, x12, l1 + l2);
        CHECK(distance(rule(), lhs, rhs) <= 1e-10);
    }
}

TEST_CASE("TCP operator J1", "[singleparticle]")
{
    // real scalar function: J1 acts trivially on the real line
    const auto re = RapidityFunction::scalar(1.0, [](cplx z) { return std::exp(-z * z); });
    CHECK(distance(rule(), apply_J1(re), re) < 1e-14);

    const auto xi = gaussian(1.0, 1.3, cplx(0.2, 0.0), cplx(0.3, 1.1));
    const auto psi = gaussian(1.0, 0.7, cplx(-0.4, 0.0), cplx(1.0, -0.2));

    // J1^2 = 1
    CHECK(distance(rule(), apply_J1(apply_J1(xi)), xi) < 1e-14);

    // antiunitarity: <J xi, J psi> = conj <xi, psi>
    const cplx a = inner_product(rule(), apply_J1(xi), apply_J1(psi));
    const cplx b = inner_product(rule(), xi, psi);
    CHECK(std::abs(a - std::conj(b)) < 1e-10);

    // J1 U(x, l) J1 = U(-x, l)
    RVec x = geom::point({0.3, 0.8});
    const auto lhs = apply_J1(act_poincare(apply_J1(xi), x, 0.4));
    const auto rhs = act_poincare(xi, RVec(-x), 0.4);
    CHECK(distance(rule(), lhs, rhs) < 1e-12);

    // tensor case with charge swap
    const auto sp = smx::ParticleSpectrum::uniform(2, 1.0, {1, 0});
    RapidityFunction multi(sp, {[](cplx z) { return std::exp(-z * z); },
                                [](cplx z) { return z * std::exp(-z * z); }});
    const auto jm = apply_J1(multi);
    CHECK(std::abs(jm(0, 0.5) - std::conj(multi(1, 0.5))) < 1e-15);
    CHECK(distance(rule(), apply_J1(jm), multi) < 1e-13);
}

TEST_CASE("modular data", "[singleparticle]")
{
    const auto xi = gaussian(1.0, 1.0, 0.1);
    // Delta^{it} shifts by +2 pi t
    const auto sh = delta_power(xi, iu * 0.25); // w = it with t = 0.25
    CHECK(std::abs(sh(0, 0.3) - xi(0, 0.3 + 2.0 * pi * 0.25)) < 1e-15);

    // Delta^{it} is unitary on sampled inner products
    const auto psi = gaussian(1.0, 0.8, -0.2);
    const cplx before = inner_product(rule(), xi, psi);
    const cplx after =
        inner_product(rule(), delta_power(xi, iu * 0.05), delta_power(psi, iu * 0.05));
    CHECK(std::abs(before - after) < 1e-9);

    // S1^2 = 1 identically on analytic functions
    const auto s2 = s1_apply(s1_apply(xi));
    CHECK(distance(rule(), s2, xi) < 1e-13);
}

TEST_CASE("standard subspace membership", "[singleparticle]")
{
    const auto member = member_gaussian(1.0, 1.0, 0.2);
    const auto res = k1_membership(rule(), member);
    CHECK(res.member());
    CHECK(res.boundary_residual <= 1e-12);

    // S1 fixes members pointwise
    CHECK(distance(rule(), s1_apply(member), member) < 1e-12);

    // i * member cannot be a member (K1 is only real-linear)
    const auto ires = k1_membership(rule(), iu * member);
    CHECK_FALSE(ires.member());
    CHECK(ires.boundary_residual > 0.1);

    // real-linear combinations of members pass
    const auto m2 = member_gaussian(1.0, 1.4, -0.5);
    const auto comb = 0.7 * member + (-1.3) * m2;
    CHECK(k1_membership(rule(), comb).member());

    // wedge translations and boosts preserve K1
    RVec inside = geom::point({0.2, 0.5}); // (0.5 > |0.2|): in the closed right wedge
    CHECK(k1_membership(rule(), act_poincare(member, inside, 0.0)).member());
    CHECK(k1_membership(rule(), act_poincare(member, RVec::Zero(2), 0.45)).member());
    RVec lightlike = geom::point({0.5, 0.5});
    CHECK(k1_membership(rule(), act_poincare(member, lightlike, 0.0)).member());

    // a plain Gaussian violates the boundary identity
    CHECK_FALSE(k1_membership(rule(), gaussian(1.0, 1.0, 0.0)).member());

    // tensor members through the charge-conjugating construction
    const auto sp = smx::ParticleSpectrum::uniform(2, 1.0, {1, 0});
    const auto multi = member_multi(
        sp, {[](cplx z) { return std::exp(-(z - 0.3) * (z - 0.3)); },
             [](cplx z) { return 0.4 * std::exp(-1.2 * z * z); }});
    CHECK(k1_membership(rule(), multi).member());
}

TEST_CASE("spacetime Gaussian: boundary identity holds, Hardy bound fails", "[singleparticle]")
{
    // The mass-shell pullback of a real spacetime Gaussian satisfies the
    // far-edge boundary identity exactly, but its entire order-2 growth
    // makes the mid-strip L2 norms blow up, so it is not in K1. The
    // membership test must separate the two failure modes.
    const auto st = spacetime_gaussian(1.0, 0.5, geom::point({0.1, 0.3}));
    const auto res = k1_membership(rule(), st);
    CHECK(res.boundary_residual <= 1e-10);
    CHECK(res.hardy_ratio > 1e4);
    CHECK_FALSE(res.member());
}

TEST_CASE("symplectic form and the complement", "[singleparticle]")
{
    // <xi, xi> real for real-valued xi
    const auto re = RapidityFunction::scalar(1.0, [](cplx z) { return std::exp(-z * z); });
    CHECK(std::abs(symplectic_form(rule(), re, re).value) < 1e-14);

    // psi = i xi with ||xi|| = 1: Im<psi, xi> = Im(conj(i)) = -1
    const double n = norm(rule(), re);
    const auto unit = (1.0 / n) * re;
    CHECK(symplectic_form(rule(), iu * unit, unit).value == Catch::Approx(-1.0).margin(1e-12));

    // J1 maps K1 into the symplectic complement (unit-normalized members)
    Rng rng(9);
    for (int t = 0; t < 6; ++t) {
        auto m1 = member_gaussian(1.0, rng.uniform(0.8, 1.6), rng.uniform(-0.5, 0.5));
        auto m2 = member_gaussian(1.0, rng.uniform(0.8, 1.6), rng.uniform(-0.5, 0.5));
        m1 = (1.0 / norm(rule(), m1)) * m1;
        m2 = (1.0 / norm(rule(), m2)) * m2;
        const auto s = symplectic_form(rule(), m1, apply_J1(m2));
        CHECK(std::abs(s.value) <= 1e-8);
        CHECK(s.converged);
    }
}

TEST_CASE("Borchers relations for the geometric data", "[singleparticle]")
{
    std::vector<RapidityFunction> family = {member_gaussian(1.0, 1.0, 0.0),
                                            gaussian(1.0, 1.2, 0.4)};
    // t = 0 and x = 0 are exact
    const auto triv = borchers_relation_check(rule(), {0.0}, {RVec(geom::point({0.3, 0.2}))}, family);
    CHECK(triv.boost_residual < 1e-13);

    const auto res = borchers_relation_check(rule(), {0.05, -0.02},
                                             {RVec(geom::point({0.3, 0.2})), RVec(geom::point({-0.1, 0.4}))},
                                             family);
    CHECK(res.boost_residual <= 1e-8);
    CHECK(res.tcp_residual <= 1e-8);
}

TEST_CASE("symmetric inner functions and endomorphisms", "[singleparticle]")
{
    const auto grid = smx::uniform_grid(-6.0, 6.0, 41);

    InnerFunction one{[](cplx) { return cplx(1.0); }, "1"};
    CHECK(is_symmetric_inner(one, grid).symmetric_inner());

    const double a = 0.8;
    InnerFunction blaschke{[a](cplx p) { return (p - iu * a) / (p + iu * a); }, "blaschke"};
    CHECK(is_symmetric_inner(blaschke, grid).symmetric_inner());

    const double beta = 0.6;
    InnerFunction translation{[beta](cplx p) { return std::exp(iu * beta * p); }, "exp"};
    CHECK(is_symmetric_inner(translation, grid).symmetric_inner());

    // |phi| != 1 on R -> rejected
    InnerFunction damped{[](cplx p) { return std::exp(iu * p) * 0.9; }, "bad"};
    CHECK_FALSE(is_symmetric_inner(damped, grid).symmetric_inner());

    // endomorphism property: members stay members under phi(P)
    const auto member = lightray_member(1.0, 0.2);
    CHECK(k1_membership(rule(), member, {}, 1e-9, 1e4, +1).member());
    CHECK(endomorphism_check(rule(), one, member).member());
    CHECK(endomorphism_check(rule(), blaschke, member).member());
    CHECK(endomorphism_check(rule(), translation, member).member());

    // a non-inner multiplier breaks membership
    InnerFunction breaker{[](cplx p) { return std::exp(-iu * 2.0 * p); }, "anti"};
    CHECK_FALSE(endomorphism_check(rule(), breaker, member).member());
}
