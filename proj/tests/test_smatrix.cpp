#include "wedgelab/smatrix.hpp"

#include <catch2/catch_amalgamated.hpp>

using namespace wedgelab;
using namespace wedgelab::smx;

TEST_CASE("built-in evaluation", "[smatrix]")
{
    const auto ising = ising_model();
    CHECK(ising.evaluate_scalar(0.7) == cplx(-1.0));
    CHECK(ising.evaluate_scalar(cplx(0.2, 1.1)) == cplx(-1.0));

    const auto free = free_model();
    CHECK(free.evaluate_scalar(cplx(-3.0, 0.4)) == cplx(1.0));

    const auto shg = sinh_gordon_model(1.0);
    CHECK(std::abs(shg.evaluate_scalar(0.0) - cplx(-1.0)) < 1e-15); // sinh(0) = 0
    CHECK(std::abs(shg.param("b") - pi / (4.0 * pi + 1.0)) < 1e-15);

    const auto nc = nc_exp_model(0.5, 2.0);
    CHECK(std::abs(nc.evaluate_scalar(1.0) - std::exp(iu * 0.5 * 4.0 * std::sinh(1.0))) < 1e-15);
    CHECK_THROWS_AS(nc_exp_model(-0.5, 1.0), std::invalid_argument);

    // declared domain enforced; raw continuation still available
    CHECK_THROWS_AS(nc.evaluate(cplx(0.0, -0.2)), std::domain_error);
    CHECK(std::isfinite(nc.evaluate_raw(cplx(0.0, -0.2))(0, 0).real()));

    const auto flip = flip_model(+1, ParticleSpectrum::uniform(2, 1.0));
    Vec vw(4);
    vw << 1.0, 2.0, 3.0, 4.0; // v (x) w with v=(1,2), w=(3,4)... check flip action
    Vec tensor(4);
    tensor << 1.0 * 3.0, 1.0 * 4.0, 2.0 * 3.0, 2.0 * 4.0;
    Vec flipped = flip.evaluate(0.3) * tensor;
    Vec expect(4);
    expect << 3.0 * 1.0, 3.0 * 2.0, 4.0 * 1.0, 4.0 * 2.0; // w (x) v
    CHECK((flipped - expect).norm() < 1e-15);
}

TEST_CASE("axiom residuals for the built-ins", "[smatrix]")
{
    const auto grid = uniform_grid(-5.0, 5.0, 41);

    for (const auto& model :
         {free_model(), ising_model(), sinh_gordon_model(0.5), sinh_gordon_model(1.0),
          sinh_gordon_model(2.0)}) {
        const auto rep = axiom_residuals(model, grid, 1e-10);
        INFO(model.name());
        CHECK(rep.unitarity <= 1e-12);
        CHECK(rep.hermitian_analyticity <= 1e-12);
        CHECK(rep.yang_baxter <= 1e-12); // scalars commute
        CHECK(rep.crossing <= 1e-10);
        CHECK(rep.pass());
    }

    ParticleSpectrum sp2 = ParticleSpectrum::uniform(2, 1.0, {1, 0});
    Rng rng(21);
    sp2.gauge_samples = {random_unitary(rng, 2), random_unitary(rng, 2)};
    for (int sign : {+1, -1}) {
        const auto rep = axiom_residuals(flip_model(sign, sp2), grid, 1e-10);
        INFO("flip sign " << sign);
        CHECK(rep.worst() <= 1e-12);
        CHECK_FALSE(rep.gauge_skipped);
    }

    // crossing of nc_exp via sinh(i pi - z) = sinh z
    const auto nc = axiom_residuals(nc_exp_model(1.0, 1.0), grid, 1e-10);
    CHECK(nc.crossing <= 1e-12);
    CHECK(nc.unitarity <= 1e-12);

    // the broken fixture must fail loudly
    const auto bad = axiom_residuals(broken_model(), uniform_grid(-2.0, 2.0, 9), 1e-10);
    CHECK(bad.unitarity > 1e-2);
    CHECK(bad.yang_baxter > 1e-2);
    CHECK_FALSE(bad.pass());
}

TEST_CASE("sigma template reproduces the flip for degenerate coefficients", "[smatrix]")
{
    const ParticleSpectrum sp = ParticleSpectrum::uniform(3, 1.0);
    const auto model = sigma_template_model(
        sp, [](cplx) { return cplx(0.0); }, [](cplx) { return cplx(1.0); },
        [](cplx) { return cplx(0.0); });
    const auto flip = flip_model(+1, sp);
    CHECK(max_abs(Mat(model.evaluate(0.4) - flip.evaluate(0.4))) < 1e-15);
    // sigma_1 contributes the delta^{a1 a2} delta_{b1 b2} tensor
    const auto m1 = sigma_template_model(
        sp, [](cplx) { return cplx(2.0); }, [](cplx) { return cplx(0.0); },
        [](cplx) { return cplx(0.0); });
    const Mat s = m1.evaluate(0.0);
    CHECK(s(0 * 3 + 0, 1 * 3 + 1) == cplx(2.0));
    CHECK(s(0 * 3 + 0, 0 * 3 + 1) == cplx(0.0));
}

TEST_CASE("regularity probe discriminates", "[smatrix]")
{
    const auto shg = regularity_probe(sinh_gordon_model(1.0), 0.1);
    CHECK(shg.domain_claimed);
    CHECK(shg.bounded);
    CHECK(shg.boundary_modulus_dev <= 1e-10); // |S| = 1 on the physical boundary lines

    const auto is = regularity_probe(ising_model(), 0.3);
    CHECK(is.bounded);
    CHECK(is.sup_estimate == Catch::Approx(1.0));

    const auto fr = regularity_probe(free_model(), 1.0);
    CHECK(fr.sup_estimate == Catch::Approx(1.0));

    const auto nc = regularity_probe(nc_exp_model(1.0, 1.0), 0.1);
    CHECK_FALSE(nc.domain_claimed);
    CHECK_FALSE(nc.bounded); // unbounded growth flag on any widened strip
    CHECK(nc.growth_ratio > 1e3);
}

TEST_CASE("spectrum validation", "[smatrix]")
{
    ParticleSpectrum bad = ParticleSpectrum::uniform(2, 1.0);
    bad.conjugation = {1, 1};
    CHECK_THROWS_AS(bad.validate(), std::invalid_argument);

    ParticleSpectrum badmass = ParticleSpectrum::uniform(2, 1.0, {1, 0});
    badmass.masses = {1.0, 2.0};
    CHECK_THROWS_AS(badmass.validate(), std::invalid_argument);
}
