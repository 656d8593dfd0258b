#include "wedgelab/warp.hpp"

#include <catch2/catch_amalgamated.hpp>

using namespace wedgelab;
using namespace wedgelab::wconv;

namespace {

/// Random rep on C^n with r distinct spectral points in d dimensions,
/// optionally restricted to the closed forward cone with a p = 0 point.
SpectralRep random_rep(Rng& rng, int n, int r, int d, bool forward = false)
{
    std::vector<RVec> pts;
    for (int j = 0; j < r; ++j) {
        RVec p(d);
        if (j == 0 && forward) {
            p.setZero();
        } else {
            for (int i = 1; i < d; ++i) p(i) = rng.uniform(-1.0, 1.0);
            double s = 0.0;
            for (int i = 1; i < d; ++i) s += p(i) * p(i);
            p(0) = forward ? std::sqrt(s) * std::cosh(rng.uniform(0.0, 1.0)) : rng.uniform(-2.0, 2.0);
        }
        pts.push_back(p);
    }
    const Mat basis = random_unitary(rng, n);
    std::vector<RVec> col_points;
    for (int c = 0; c < n; ++c) col_points.push_back(pts[c % r]);
    return SpectralRep::from_eigenbasis(col_points, basis);
}

RMat random_skew(Rng& rng, int d)
{
    RMat anti = RMat::Zero(d, d);
    for (int a = 0; a < d; ++a)
        for (int b = a + 1; b < d; ++b) {
            anti(a, b) = rng.uniform(-1.0, 1.0);
            anti(b, a) = -anti(a, b);
        }
    return geom::eta(d) * anti;
}

} // namespace

TEST_CASE("spectral representations", "[warp]")
{
    Rng rng(101);
    const auto rep = random_rep(rng, 6, 3, 2);
    // U(x) unitary, U(x)U(y) = U(x+y)
    RVec x = geom::point({0.4, -0.7}), y = geom::point({-0.2, 0.3});
    const Mat id = Mat::Identity(6, 6);
    CHECK(opnorm(Mat(rep.u(x) * rep.u(x).adjoint() - id)) <= 1e-12);
    CHECK(opnorm(Mat(rep.u(x) * rep.u(y) - rep.u(RVec(x + y)))) <= 1e-12);

    const auto fwd = random_rep(rng, 6, 3, 2, true);
    CHECK(fwd.forward_cone());
    CHECK(fwd.invariant_index() == 0);
}

TEST_CASE("warping basics", "[warp]")
{
    Rng rng(103);
    const auto rep = random_rep(rng, 6, 3, 2);
    const Mat a = random_matrix(rng, 6, 6);
    const RMat q = random_skew(rng, 2);

    // Q = 0 is the identity deformation
    CHECK(opnorm(Mat(warp_right(a, RMat::Zero(2, 2), rep) - a)) <= 1e-13);

    // translation-invariant operators are fixed points
    const Mat ux = rep.u(geom::point({0.8, 0.3}));
    CHECK(opnorm(Mat(warp_right(ux, q, rep) - ux)) <= 1e-12);

    // left/right spectral orderings agree exactly for skew Q
    const auto res = warp(a, q, rep);
    CHECK(res.ordering_disagreement <= 1e-12);
    // ... and the blockwise phase formula reproduces both
    CHECK(opnorm(Mat(res.value - warp_blockwise(a, q, rep))) <= 1e-12);

    // negative control: a symmetric (non-skew) deformation matrix makes
    // the two orderings disagree
    RMat sym = RMat::Zero(2, 2);
    sym(0, 0) = 0.9;
    sym(1, 1) = 0.4;
    CHECK(warp(a, sym, rep).ordering_disagreement > 1e-3);

    // linear, star-preserving, bijective with inverse warp(-Q)
    const Mat b = random_matrix(rng, 6, 6);
    CHECK(opnorm(Mat(warp_right(Mat(2.0 * a + iu * b), q, rep) - 2.0 * warp_right(a, q, rep) -
                     iu * warp_right(b, q, rep))) <= 1e-12);
    CHECK(opnorm(Mat(warp_right(Mat(a.adjoint()), q, rep) - warp_right(a, q, rep).adjoint())) <= 1e-12);
    CHECK(opnorm(Mat(warp_right(warp_right(a, q, rep), RMat(-q), rep) - a)) <= 1e-13);
}

TEST_CASE("cascading deformations", "[warp]")
{
    Rng rng(107);
    const auto rep = random_rep(rng, 6, 4, 2);
    const Mat a = random_matrix(rng, 6, 6);
    const RMat q1 = random_skew(rng, 2), q2 = random_skew(rng, 2);

    CHECK(cascade_check(a, q1, q2, rep) <= 1e-12);
    CHECK(cascade_check(a, RMat::Zero(2, 2), RMat::Zero(2, 2), rep) <= 1e-14);
    CHECK(opnorm(Mat(warp_right(warp_right(a, q1, rep), RMat(-q1), rep) - a)) <= 1e-12);
}

TEST_CASE("Rieffel product", "[warp]")
{
    Rng rng(109);
    for (int trial = 0; trial < 10; ++trial) {
        const auto rep = random_rep(rng, 6, 3, 2);
        const Mat a = random_matrix(rng, 6, 6);
        const Mat b = random_matrix(rng, 6, 6);
        const Mat c = random_matrix(rng, 6, 6);
        const RMat q = random_skew(rng, 2);
        const Mat id = Mat::Identity(6, 6);

        // Q = 0 reduces to the operator product
        CHECK(opnorm(Mat(rieffel_product(a, b, RMat::Zero(2, 2), rep) - a * b)) <= 1e-12);
        // unit
        CHECK(opnorm(Mat(rieffel_product(a, id, q, rep) - a)) <= 1e-12);
        CHECK(opnorm(Mat(rieffel_product(id, a, q, rep) - a)) <= 1e-12);
        // warp intertwines the products
        CHECK(opnorm(Mat(warp_right(a, q, rep) * warp_right(b, q, rep) -
                         warp_right(rieffel_product(a, b, q, rep), q, rep))) <= 1e-12);
        // independent blockwise double-sum oracle
        CHECK(opnorm(Mat(rieffel_product(a, b, q, rep) - rieffel_blockwise(a, b, q, rep))) <= 1e-12);
        // associativity
        CHECK(opnorm(Mat(rieffel_product(rieffel_product(a, b, q, rep), c, q, rep) -
                         rieffel_product(a, rieffel_product(b, c, q, rep), q, rep))) <= 1e-12);
        // star compatibility: (A x_Q B)* = B* x_Q A*
        CHECK(opnorm(Mat(rieffel_product(a, b, q, rep).adjoint() -
                         rieffel_product(Mat(b.adjoint()), Mat(a.adjoint()), q, rep))) <= 1e-12);
    }
}

TEST_CASE("covariance of warping", "[warp]")
{
    Rng rng(113);

    // V = U(y): M = 1 (translation covariance)
    {
        const auto rep = random_rep(rng, 6, 3, 2);
        const Mat a = random_matrix(rng, 6, 6);
        const RMat q = random_skew(rng, 2);
        Implementer v{rep.u(geom::point({0.5, -0.3})), false};
        const auto res = covariance_check(a, q, v, RMat::Identity(2, 2), rep);
        CHECK(res.intertwining_residual <= 1e-12);
        CHECK(res.covariance_residual <= 1e-12);
    }

    // Spectrum symmetric under x1 -> -x1 with a permutation implementer,
    // M = the spatial reflection (an invertible intertwiner is all
    // Prop.-4.3-type covariance needs)
    {
        RVec pm = geom::point({1.0, 0.4});
        RVec pr = geom::point({1.0, -0.4});
        std::vector<RVec> cols = {pm, pr, pm, pr};
        const auto rep = SpectralRep::from_eigenbasis(cols, Mat(Mat::Identity(4, 4)));
        RMat m = RMat::Identity(2, 2);
        m(1, 1) = -1.0;
        Mat vswap = Mat::Zero(4, 4);
        vswap(0, 1) = vswap(1, 0) = vswap(2, 3) = vswap(3, 2) = 1.0;
        Implementer vv{vswap, false};
        const Mat a = random_matrix(rng, 4, 4);
        const RMat q = random_skew(rng, 2);
        const auto res = covariance_check(a, q, vv, m, rep);
        CHECK(res.intertwining_residual <= 1e-12);
        CHECK(res.covariance_residual <= 1e-12);
    }

    // Antiunitary implementer: conjugation in a real eigenbasis maps U(x)
    // to U(-x), so M = -1 and the covariance sign flips
    {
        RVec p1 = geom::point({1.2, 0.3}), p2 = geom::point({0.7, -0.5});
        std::vector<RVec> cols = {p1, p2, p1, p2};
        const auto rrep = SpectralRep::from_eigenbasis(cols, Mat(Mat::Identity(4, 4)));
        Implementer v{Mat(Mat::Identity(4, 4)), true};
        const RMat m = -RMat::Identity(2, 2);
        const Mat a = random_matrix(rng, 4, 4);
        const RMat q = random_skew(rng, 2);
        const auto res = covariance_check(a, q, v, m, rrep);
        CHECK(res.intertwining_residual <= 1e-12);
        CHECK(res.covariance_residual <= 1e-12);
    }

    // precondition failure is reported
    {
        const auto rep = random_rep(rng, 6, 3, 2);
        const Mat a = random_matrix(rng, 6, 6);
        Implementer bad{random_unitary(rng, 6), false};
        CHECK_THROWS_AS(covariance_check(a, random_skew(rng, 2), bad, RMat::Identity(2, 2), rep),
                        std::invalid_argument);
    }
}

TEST_CASE("vacuum invariance", "[warp]")
{
    Rng rng(127);
    const auto rep = random_rep(rng, 6, 3, 2, true);
    const Mat a = random_matrix(rng, 6, 6);
    const RMat q = random_skew(rng, 2);
    // Omega = any unit vector in the p = 0 eigenspace
    Eigen::SelfAdjointEigenSolver<Mat> es(rep.projections[rep.invariant_index()]);
    Vec omega = es.eigenvectors().col(5); // eigenvalue-1 eigenvector
    CHECK(std::abs((rep.projections[rep.invariant_index()] * omega - omega).norm()) <= 1e-10);

    CHECK(vacuum_check(a, q, rep, omega) <= 1e-12);
    CHECK(vacuum_check(Mat(Mat::Identity(6, 6)), q, rep, omega) <= 1e-14);

    const auto norep = random_rep(rng, 6, 3, 2, false);
    if (norep.invariant_index() < 0)
        CHECK_THROWS_AS(vacuum_check(a, q, norep, omega), std::invalid_argument);
}

TEST_CASE("commutation theorem for opposite warpings", "[warp]")
{
    Rng rng(131);
    // tensor-factor construction: A = A0 (x) 1, B = 1 (x) B0 with U = U1 (x) U2
    const int n1 = 3, n2 = 2;
    const Mat b1 = random_unitary(rng, n1), b2 = random_unitary(rng, n2);
    std::vector<RVec> pts1, pts2;
    for (int c = 0; c < n1; ++c) {
        RVec p(2);
        p(1) = rng.uniform(-1.0, 1.0);
        p(0) = std::abs(p(1)) * std::cosh(rng.uniform(0.0, 0.7));
        pts1.push_back(p);
    }
    for (int c = 0; c < n2; ++c) {
        RVec p(2);
        p(1) = rng.uniform(-1.0, 1.0);
        p(0) = std::abs(p(1)) * std::cosh(rng.uniform(0.0, 0.7));
        pts2.push_back(p);
    }
    std::vector<RVec> cols;
    Mat basis = kron(b1, b2);
    for (int c1 = 0; c1 < n1; ++c1)
        for (int c2 = 0; c2 < n2; ++c2) cols.push_back(RVec(pts1[c1] + pts2[c2]));
    const auto rep = SpectralRep::from_eigenbasis(cols, basis, 1e-9);
    CHECK(rep.forward_cone(1e-9));

    const Mat a0 = random_matrix(rng, n1, n1), b0 = random_matrix(rng, n2, n2);
    const Mat a = kron(Mat(b1 * a0 * b1.adjoint()), Mat::Identity(n2, n2));
    const Mat b = kron(Mat::Identity(n1, n1), Mat(b2 * b0 * b2.adjoint()));
    const RMat q = geom::admissible_q(2, 0.6);

    const auto res = commutation_theorem_check(a, b, q, rep);
    CHECK(res.hypothesis_residual <= 1e-12);
    CHECK(res.conclusion_residual <= 1e-12);

    // Q = 0: plain commutation in = plain commutation out
    const auto triv = commutation_theorem_check(a, b, RMat::Zero(2, 2), rep);
    CHECK(triv.conclusion_residual <= 1e-12);

    // negative control: random non-commuting A, B
    const auto repr = random_rep(rng, 6, 3, 2, true);
    const auto bad = commutation_theorem_check(random_matrix(rng, 6, 6), random_matrix(rng, 6, 6),
                                               q, repr);
    CHECK(bad.hypothesis_residual > 1e-2); // hypothesis violated; conclusion unconstrained
}

TEST_CASE("deformed two-particle phase", "[warp]")
{
    // theta = theta': both sides are 1
    const auto same = deformed_phase(0.7, 0.7, 1.3, 0.9);
    CHECK(std::abs(same.bilinear - cplx(1.0)) <= 1e-14);
    CHECK(same.difference <= 1e-14);

    // kappa = m = 1, theta = 1, theta' = 0: e^{i sinh 1}
    const auto ref = deformed_phase(1.0, 0.0, 1.0, 1.0);
    CHECK(std::abs(ref.closed_form - std::exp(iu * std::sinh(1.0))) <= 1e-15);
    CHECK(ref.difference <= 1e-13);

    // antisymmetry: phase(a,b) * phase(b,a) = 1
    Rng rng(137);
    for (int t = 0; t < 25; ++t) {
        const double a = rng.uniform(-2.5, 2.5), b = rng.uniform(-2.5, 2.5);
        const double kappa = rng.uniform(0.1, 2.0), m = rng.uniform(0.5, 2.0);
        const auto ab = deformed_phase(a, b, kappa, m);
        const auto ba = deformed_phase(b, a, kappa, m);
        CHECK(ab.difference <= 1e-13);
        CHECK(std::abs(ab.bilinear * ba.bilinear - cplx(1.0)) <= 1e-13);
    }
}
