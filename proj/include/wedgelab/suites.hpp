#pragma once

#include "wedgelab/geometry.hpp"
#include "wedgelab/nuclearity.hpp"
#include "wedgelab/oracles.hpp"
#include "wedgelab/report.hpp"
#include "wedgelab/warp.hpp"

namespace wedgelab::app {

// Shared closed-form test-function families (unit-normalized members of
// the standard subspace and their TCP images).
struct Families {
    QuadratureRule rule;
    std::vector<onep::RapidityFunction> members;       // K1
    std::vector<onep::RapidityFunction> members_sym;   // PT-symmetric K1 (th0 = 0)
    std::vector<onep::RapidityFunction> gaussians;     // generic non-members

    static Families standard(const RunConfig& cfg)
    {
        Families f{cfg.quadrature(), {}, {}, {}};
        auto unit = [&](onep::RapidityFunction m) {
            return (1.0 / onep::norm(f.rule, m)) * m;
        };
        f.members.push_back(unit(onep::member_gaussian(cfg.mass, 0.5, 0.2)));
        f.members.push_back(unit(onep::member_gaussian(cfg.mass, 0.65, -0.35)));
        f.members.push_back(unit(onep::member_gaussian(cfg.mass, 0.8, 0.55)));
        f.members_sym.push_back(unit(onep::member_gaussian(cfg.mass, 0.5, 0.0)));
        f.members_sym.push_back(unit(onep::member_gaussian(cfg.mass, 0.65, 0.0)));
        f.gaussians.push_back(unit(onep::gaussian(cfg.mass, 1.0, 0.3)));
        f.gaussians.push_back(unit(onep::gaussian(cfg.mass, 0.7, cplx(-0.2, 0.0), cplx(0.4, 1.2))));
        return f;
    }
};

// ---------------------------------------------------------------------------
// geometry
// ---------------------------------------------------------------------------

inline void run_geometry_suite(const RunConfig& cfg, Report& rep)
{
    Rng rng(cfg.seed ^ 0x67656f6dULL);
    const std::string suite = "geometry";

    // Poincare covariance of wedge membership, exact on 1000 cases
    int failures = 0;
    for (int t = 0; t < 1000; ++t) {
        const int d = 2 + t % 3;
        RMat lam = geom::boost01(d, rng.uniform(-1.5, 1.5));
        for (int a = 1; a < d; ++a)
            for (int b = a + 1; b < d; ++b) {
                RMat r = RMat::Identity(d, d);
                const double phi = rng.uniform(0.0, 2.0 * pi);
                r(a, a) = r(b, b) = std::cos(phi);
                r(a, b) = -std::sin(phi);
                r(b, a) = std::sin(phi);
                lam = r * lam;
            }
        if (rng.uniform() < 0.25) lam = geom::edge_reflection(d) * lam;
        RVec x(d), p(d);
        for (int i = 0; i < d; ++i) {
            x(i) = rng.uniform(-2.0, 2.0);
            p(i) = rng.uniform(-3.0, 3.0);
        }
        const geom::PoincareTransform g(x, lam);
        const geom::Wedge w0 = geom::Wedge::right(d);
        if (w0.transformed(g).contains(g.apply(p)) != w0.contains(p)) ++failures;
    }
    rep.records.push_back(make_flag_record(suite, "membership covariance (1000 random)",
                                           "Def. 2.1, Eq. (2.1)", failures == 0));

    // complement involution and the d = 2 classification
    bool involution = true, family = true, rigidity = true;
    for (int t = 0; t < 200; ++t) {
        RVec x(2);
        x << rng.uniform(-2, 2), rng.uniform(-2, 2);
        const geom::PoincareTransform g(x, geom::boost01(2, rng.uniform(-1.5, 1.5)));
        const geom::Wedge w = geom::Wedge::right(2).transformed(g);
        involution = involution && w.causal_complement().causal_complement().operator_equal(w, 1e-9);
        family = family && (w.same_rays(geom::Wedge::right(2)) || w.same_rays(geom::Wedge::left(2)));
        RVec y(2);
        y << rng.uniform(-2, 2), rng.uniform(-2, 2);
        const geom::Wedge w2 = geom::Wedge::right(2, y);
        const geom::Wedge w1 = geom::Wedge::right(2, RVec(0.3 * y));
        if (w1.includes(w2) && w2.includes(w1)) rigidity = rigidity && w1.operator_equal(w2, 1e-9);
    }
    rep.records.push_back(make_flag_record(suite, "causal complement is an involution",
                                           "Sec. 2.1 (W'' = W)", involution));
    rep.records.push_back(
        make_flag_record(suite, "d=2 wedges reduce to the two families", "Sec. 2.1 (d=2)", family));
    rep.records.push_back(
        make_flag_record(suite, "mutual inclusion forces equality", "Prop. 2.2", rigidity));

    // double cones
    const auto dc = geom::double_cone(geom::point({0.0, 0.0}), geom::point({0.0, 1.0}));
    rep.records.push_back(make_record(suite, "double cone diameter",
                                      "Eq. (2.4), Sec. 2.4 d(O)", std::abs(dc.diameter - 1.0),
                                      1e-12));
    rep.records.push_back(make_flag_record(
        suite, "double cone emptiness criterion", "Eq. (2.4)",
        !dc.empty && geom::double_cone(geom::point({0.0, 0.0}), geom::point({0.0, -1.0})).empty));

    // wedge reflection and boost
    {
        const geom::Wedge wr = geom::Wedge::right(2);
        auto [j, b] = wr.reflection_and_boost(0.1);
        const bool jmaps = wr.transformed(j).operator_equal(wr.causal_complement(), 1e-10);
        const bool bkeeps = wr.transformed(b).operator_equal(wr, 1e-10);
        rep.records.push_back(
            make_flag_record(suite, "j_W maps W onto its complement", "Eq. (2.2)", jmaps));
        rep.records.push_back(
            make_flag_record(suite, "Lambda_W(t) preserves W", "Eq. (2.2)", bkeeps));
        double form = 0.0;
        for (double t : {-2.0, -0.5, 0.7, 2.0}) {
            const RMat lam = geom::wedge_boost_matrix(2, t);
            const double scale = std::pow(lam.cwiseAbs().maxCoeff(), 2);
            form = std::max(form,
                            (lam.transpose() * geom::eta(2) * lam - geom::eta(2)).cwiseAbs().maxCoeff() /
                                scale);
        }
        rep.records.push_back(
            make_record(suite, "wedge boost preserves the Minkowski form", "Eq. (2.2)", form, 1e-13));
    }

    // admissibility classifier: pattern route vs condition route
    int disagreements = 0;
    int cone_failures = 0;
    for (int t = 0; t < 200; ++t) {
        const int d = (t % 3 == 0) ? 4 : 2 + (t % 3);
        RMat q;
        switch (t % 5) {
            case 0: q = geom::admissible_q(d, rng.uniform(0.0, 2.0), rng.uniform(-1.0, 1.0)); break;
            case 1: q = geom::admissible_q(d, -rng.uniform(0.1, 2.0)); break;
            case 2: q = RMat::Zero(d, d); break;
            default: {
                RMat anti = RMat::Zero(d, d);
                for (int a = 0; a < d; ++a)
                    for (int b = a + 1; b < d; ++b) {
                        anti(a, b) = rng.uniform(-1.0, 1.0);
                        anti(b, a) = -anti(a, b);
                    }
                q = geom::eta(d) * anti;
            }
        }
        const auto r = geom::admissibility_report(q);
        if (r.admissible != r.pattern_match) ++disagreements;
    }
    for (int t = 0; t < 100; ++t) {
        const RMat q = geom::admissible_q(2, 0.8);
        RVec p(2);
        p(1) = rng.uniform(-2.0, 2.0);
        p(0) = std::abs(p(1)) * std::cosh(rng.uniform(0.0, 1.2));
        if (!geom::Wedge::right(2).closure_contains(RVec(q * p), 1e-9)) ++cone_failures;
    }
    rep.records.push_back(make_flag_record(suite, "admissibility pattern = condition test (200)",
                                           "Sec. 4.2 (i)-(iii), Eq. (q1)/(q2)", disagreements == 0));
    rep.records.push_back(make_flag_record(suite, "admissible Q maps the forward cone into W_R",
                                           "Sec. 4.2 (iii)", cone_failures == 0));
}

// ---------------------------------------------------------------------------
// smatrix + regularity
// ---------------------------------------------------------------------------

inline void run_smatrix_suite(const RunConfig& cfg, Report& rep)
{
    const std::string suite = "smatrix";
    const auto model = cfg.build_model();
    const auto grid = smx::uniform_grid(-5.0, 5.0, 41);
    const double tol = 1e-10;
    const auto ar = smx::axiom_residuals(model, grid, tol);
    rep.records.push_back(make_record(suite, "unitarity", "Def. 3.1 a", ar.unitarity, tol));
    rep.records.push_back(
        make_record(suite, "hermitian analyticity", "Def. 3.1 b", ar.hermitian_analyticity, tol));
    rep.records.push_back(make_record(suite, "Yang-Baxter", "Def. 3.1 c", ar.yang_baxter, tol));
    rep.records.push_back(
        make_record(suite, "mass conservation pattern", "Def. 3.1 d", ar.poincare_mass, tol));
    rep.records.push_back(
        make_record(suite, "conjugation symmetry", "Def. 3.1 d", ar.poincare_conjugation, tol));
    if (!ar.gauge_skipped)
        rep.records.push_back(
            make_record(suite, "gauge invariance", "Def. 3.1 e", ar.gauge_invariance, tol));
    rep.records.push_back(make_record(suite, "crossing symmetry", "Def. 3.1 f", ar.crossing,
                                      model.name() == "nc_exp" ? 1e-12 : tol));
}

inline void run_regularity_suite(const RunConfig& cfg, Report& rep)
{
    const std::string suite = "regularity";
    const auto model = cfg.build_model();
    const double eps = 0.1;
    const auto probe = smx::regularity_probe(model, eps);
    if (model.regularity_margin() >= eps) {
        rep.records.push_back(make_flag_record(suite, "bounded on the widened strip", "Def. 3.12",
                                               probe.bounded));
        rep.records.push_back(make_record(suite, "unimodular boundary values", "Def. 3.1 a",
                                          probe.boundary_modulus_dev, 1e-10));
    } else {
        // not claimed regular: report the growth verdict as informational
        rep.records.push_back(make_flag_record(suite, "unbounded growth flag on the widened strip",
                                               "Def. 3.12, Sec. 4.2", !probe.bounded,
                                               /*informational=*/true,
                                               "model declares no regularity margin"));
    }
}

// ---------------------------------------------------------------------------
// singleparticle
// ---------------------------------------------------------------------------

inline void run_singleparticle_suite(const RunConfig& cfg, Report& rep)
{
    const std::string suite = "singleparticle";
    Rng rng(cfg.seed ^ 0x6f6e6570ULL);
    const auto fam = Families::standard(cfg);
    const auto& q = fam.rule;

    // mass shell
    double shell = 0.0;
    for (double th = -6.0; th <= 6.0; th += 0.5) {
        const auto p = onep::mass_shell(cfg.mass, th);
        shell = std::max(shell, std::abs(onep::mink2(p, p) - cplx(cfg.mass * cfg.mass)) /
                                    (cfg.mass * cfg.mass * std::cosh(2 * th)));
    }
    rep.records.push_back(make_record(suite, "on-shell momentum", "Eq. (3.2)", shell, 1e-13));

    // representation property on test functions
    double repres = 0.0;
    for (int t = 0; t < 4; ++t) {
        const double l1 = rng.uniform(-0.6, 0.6), l2 = rng.uniform(-0.6, 0.6);
        RVec x1(2), x2(2);
        x1 << rng.uniform(-1, 1), rng.uniform(-1, 1);
        x2 << rng.uniform(-1, 1), rng.uniform(-1, 1);
        const auto& xi = fam.gaussians[t % fam.gaussians.size()];
        const auto lhs = onep::act_poincare(onep::act_poincare(xi, x2, l2), x1, l1);
        const RVec x12 = x1 + geom::boost01(2, l1) * x2;
        repres = std::max(repres, onep::distance(q, lhs, onep::act_poincare(xi, x12, l1 + l2)));
    }
    rep.records.push_back(make_record(suite, "U1 is a representation", "Eq. (3.1)", repres, 1e-10));

    // J1: involution, antiunitarity, commutation with boosts
    {
        const auto& xi = fam.gaussians[1];
        const auto& psi = fam.members[0];
        const double invol = onep::distance(q, onep::apply_J1(onep::apply_J1(xi)), xi);
        const cplx a = onep::inner_product(q, onep::apply_J1(xi), onep::apply_J1(psi));
        const cplx b = onep::inner_product(q, xi, psi);
        RVec x = geom::point({0.3, 0.8});
        const double comm = onep::distance(
            q, onep::apply_J1(onep::act_poincare(onep::apply_J1(xi), x, 0.4)),
            onep::act_poincare(xi, RVec(-x), 0.4));
        rep.records.push_back(make_record(suite, "J1 is an antiunitary involution", "Eq. (3.3)",
                                          std::max(invol, std::abs(a - std::conj(b))), 1e-10));
        rep.records.push_back(
            make_record(suite, "J1 U(x,l) J1 = U(-x,l)", "Sec. 3.1 / Thm. 2.6", comm, 1e-10));
    }

    // standard subspace membership and its real-linear structure
    {
        double worst = 0.0;
        bool verdicts = true;
        for (const auto& m : fam.members) {
            const auto res = onep::k1_membership(q, m);
            verdicts = verdicts && res.member();
            worst = std::max(worst, res.boundary_residual);
        }
        const auto comb =
            onep::k1_membership(q, 0.7 * fam.members[0] + (-1.2) * fam.members[1]);
        verdicts = verdicts && comb.member();
        const auto anti = onep::k1_membership(q, iu * fam.members[0]);
        verdicts = verdicts && !anti.member();
        const auto gs = onep::k1_membership(q, fam.gaussians[0]);
        verdicts = verdicts && !gs.member();
        // wedge translations preserve membership
        const auto tr =
            onep::k1_membership(q, onep::act_poincare(fam.members[0], geom::point({0.2, 0.5}), 0.3));
        verdicts = verdicts && tr.member();
        rep.records.push_back(
            make_record(suite, "K1 boundary identity residual", "Eq. (3.12)", worst, 1e-9));
        rep.records.push_back(make_flag_record(
            suite, "membership verdicts (members / i*member / plain Gaussian)",
            "Eq. (3.12), Def. 2.8 (K1 n iK1 = 0), Eq. (2.10)", verdicts));
    }

    // S1 = J1 Delta^{1/2} fixes members; S1^2 = 1
    {
        const double fix = onep::distance(q, onep::s1_apply(fam.members[0]), fam.members[0]);
        const double invol =
            onep::distance(q, onep::s1_apply(onep::s1_apply(fam.gaussians[0])), fam.gaussians[0]);
        rep.records.push_back(make_record(suite, "S1 fixes K1 and squares to one",
                                          "Eq. (2.19), Eq. (3.12)", std::max(fix, invol), 1e-9));
    }

    // symplectic complement via J1
    {
        double worst = 0.0;
        for (std::size_t a = 0; a < fam.members.size(); ++a)
            for (std::size_t b = 0; b < fam.members.size(); ++b)
                worst = std::max(worst, std::abs(onep::symplectic_form(
                                                     q, fam.members[a], onep::apply_J1(fam.members[b]))
                                                     .value));
        rep.records.push_back(
            make_record(suite, "J1 K1 lies in the symplectic complement", "Lemma 2.9", worst, 1e-8));
    }

    // Borchers commutation relations for the geometric modular data
    {
        const auto res = onep::borchers_relation_check(
            q, {0.05, -0.03}, {geom::point({0.3, 0.2}), geom::point({-0.1, 0.4})},
            {fam.members[0], fam.gaussians[0]});
        rep.records.push_back(make_record(suite, "Delta^{it} U(x) Delta^{-it} = U(Lambda_W(t) x)",
                                          "Thm. 2.6, Eq. (2.13)", res.boost_residual, 1e-8));
        rep.records.push_back(
            make_record(suite, "J U(x) J = U(jx)", "Thm. 2.6", res.tcp_residual, 1e-8));
    }

    // Longo-Witten endomorphisms
    {
        const auto grid = smx::uniform_grid(-6.0, 6.0, 41);
        onep::InnerFunction blaschke{[](cplx p) { return (p - iu * 0.8) / (p + iu * 0.8); }, "blaschke"};
        onep::InnerFunction translation{[](cplx p) { return std::exp(iu * 0.6 * p); }, "exp"};
        const auto c1 = onep::is_symmetric_inner(blaschke, grid);
        const auto c2 = onep::is_symmetric_inner(translation, grid);
        const auto member = onep::lightray_member(1.0, 0.2);
        const bool endo = onep::endomorphism_check(q, blaschke, member).member() &&
                          onep::endomorphism_check(q, translation, member).member();
        rep.records.push_back(make_flag_record(suite, "symmetric inner functions verified",
                                               "Thm. 3.15, Eq. (3.36)",
                                               c1.symmetric_inner() && c2.symmetric_inner()));
        rep.records.push_back(make_flag_record(suite, "phi(P) maps light-ray members to members",
                                               "Thm. 3.15", endo));
    }
}

// ---------------------------------------------------------------------------
// fock representation / projector
// ---------------------------------------------------------------------------

inline void run_fock_rep_suite(const RunConfig& cfg, Report& rep)
{
    const std::string suite = "fock_rep";
    Rng rng(cfg.seed ^ 0x666f636bULL);
    const auto model = cfg.build_model();
    const fock::GridSpec g =
        fock::GridSpec::gauss_legendre(cfg.grid_points, cfg.grid_theta_max, model.dim());
    fock::FockSpace fs(g, model, std::min(4, std::max(cfg.n_max, 3)));

    // braid-word independence, n <= 4
    double braid = 0.0;
    for (int trial = 0; trial < 24; ++trial) {
        const int n = 2 + trial % 3;
        if (n > fs.n_max()) continue;
        std::vector<int> word, image(n);
        std::iota(image.begin(), image.end(), 0);
        for (int l = 0; l < 6; ++l) word.push_back(rng.index(n - 1));
        for (auto it = word.rbegin(); it != word.rend(); ++it)
            std::swap(image[*it], image[*it + 1]);
        const Vec v = random_vector(rng, fs.dim(n));
        const Vec a = fs.apply_word(n, word, v);
        const Vec b = fs.apply_word(n, fock::FockSpace::word_for(image), v);
        braid = std::max(braid, (a - b).norm() / v.norm());
    }
    rep.records.push_back(
        make_record(suite, "braid-word independence of D_n", "Eq. (3.15), Def. 3.1 b/c", braid, 1e-9));

    // projector properties
    double idem = 0.0, selfadj = 0.0, fixed = 0.0;
    for (int n = 2; n <= std::min(3, fs.n_max()); ++n) {
        const Mat& p = fs.projector(n);
        idem = std::max(idem, opnorm(Mat(p * p - p)));
        Mat padj = p.adjoint();
        for (long long r = 0; r < fs.dim(n); ++r)
            for (long long c = 0; c < fs.dim(n); ++c)
                padj(r, c) *= fs.sector_weights(n)(c) / fs.sector_weights(n)(r);
        selfadj = std::max(selfadj, opnorm(Mat(padj - p)));
        const Vec pv = fs.apply_projector(n, random_vector(rng, fs.dim(n)));
        for (int k = 0; k + 1 < n; ++k)
            fixed = std::max(fixed, (fs.apply_tau(n, k, pv) - pv).norm());
    }
    rep.records.push_back(make_record(suite, "P_S idempotent", "Sec. 3.2", idem, 1e-10));
    rep.records.push_back(make_record(suite, "P_S self-adjoint", "Sec. 3.2", selfadj, 1e-10));
    rep.records.push_back(
        make_record(suite, "range of P_S = fixed points of D_n", "Eq. (3.15)", fixed, 1e-10));

    // rank counts for the constant S = +-1 models, n <= 4, M*D <= 8
    bool ranks_ok = true;
    auto check_ranks = [&](int m, int d) {
        const auto spect = smx::ParticleSpectrum::uniform(d, cfg.mass);
        const auto bose = d == 1 ? smx::free_model(cfg.mass) : smx::flip_model(+1, spect);
        const auto fermi = d == 1 ? smx::ising_model(cfg.mass) : smx::flip_model(-1, spect);
        fock::FockSpace fb(fock::GridSpec::gauss_legendre(m, 3.0, d), bose, 4);
        fock::FockSpace ff(fock::GridSpec::gauss_legendre(m, 3.0, d), fermi, 4);
        const int sites = m * d;
        for (int n = 0; n <= 4; ++n) {
            if (std::lround(fb.projector_trace(n)) != binomial(sites + n - 1, n)) ranks_ok = false;
            if (std::lround(ff.projector_trace(n)) != binomial(sites, n)) ranks_ok = false;
        }
    };
    for (int m = 2; m <= 8; ++m) check_ranks(m, 1);
    check_ranks(3, 2);
    check_ranks(4, 2);
    rep.records.push_back(make_flag_record(
        suite, "S = +-1 sector dimensions match multiset/subset counts (n <= 4, M*D <= 8)",
        "Sec. 3.2 (H_S for the flip)", ranks_ok));
}

// ---------------------------------------------------------------------------
// ZF algebra
// ---------------------------------------------------------------------------

inline void run_zf_suite(const RunConfig& cfg, Report& rep)
{
    const std::string suite = "zf";
    Rng rng(cfg.seed ^ 0x7a66ULL);
    const auto model = cfg.build_model();
    const fock::GridSpec g =
        fock::GridSpec::gauss_legendre(cfg.grid_points, cfg.grid_theta_max, model.dim());
    fock::FockSpace fs(g, model, cfg.n_max);

    const auto zf = fock::zf_residuals(fs, rng, 50);
    rep.records.push_back(
        make_record(suite, "annihilator exchange relation", "Eq. (3.22)", zf.exchange_zz, 1e-9));
    rep.records.push_back(
        make_record(suite, "creator exchange relation", "Eq. (3.23)", zf.exchange_zdzd, 1e-9));
    rep.records.push_back(make_record(suite, "mixed relation with the discrete delta", "Eq. (3.24)",
                                      zf.mixed_delta, 1e-9));
    rep.records.push_back(make_record(suite, "number bounds on 100 random vectors", "Eq. (3.21)",
                                      std::max(0.0, zf.number_bound), 1e-12));

    // adjointness z(phi)^* = z^dagger(phi) on safe sectors
    const Vec phi = random_vector(rng, fs.sites());
    rep.records.push_back(make_record(
        suite, "z(phi)^* = z^dagger(phi) on safe sectors", "Eq. (3.21) region",
        fs.residual_on_sym(Mat(fs.adjoint_w(fs.z(phi)) - fs.z_dagger(phi)), fs.n_max() - 1), 1e-10));

    // S = +-1 reduce to the CCR/CAR algebra verified against the
    // occupation-number oracle
    for (int sign : {+1, -1}) {
        const fock::GridSpec g4 = fock::GridSpec::gauss_legendre(4, 3.0);
        fock::FockSpace fc(g4, sign > 0 ? smx::free_model(cfg.mass) : smx::ising_model(cfg.mass), 3);
        oracles::OccupationOracle oracle(g4, 3, sign);
        const double r = oracle.creation_equality(fc, random_vector(rng, g4.sites()));
        rep.records.push_back(make_record(
            suite, sign > 0 ? "S=+1 equals the CCR construction" : "S=-1 equals the CAR construction",
            "Sec. 3.2 (CCR/CAR reduction)", r, 1e-12));
    }
}

// ---------------------------------------------------------------------------
// wedge fields
// ---------------------------------------------------------------------------

inline void run_wedgefield_suite(const RunConfig& cfg, Report& rep)
{
    const std::string suite = "wedgefield";
    Rng rng(cfg.seed ^ 0x77656467ULL);
    const auto model = cfg.build_model();
    const auto fam = Families::standard(cfg);
    const fock::GridSpec g =
        fock::GridSpec::gauss_legendre(cfg.grid_points, cfg.grid_theta_max, model.dim());

    if (model.dim() == 1) {
        fock::FockSpace fs(g, model, cfg.n_max);
        const auto& xi = fam.members[0];

        // Phi(xi) Omega = xi
        const Vec v = wfield::phi_op(fs, xi) * fs.vacuum();
        double vac = (fs.sector_of(v, 1) - fock::sample_grid(fs.grid(), xi)).norm();
        for (int n : {0, 2}) vac = std::max(vac, fs.norm_w_sector(n, fs.sector_of(v, n)));
        rep.records.push_back(
            make_record(suite, "Phi(xi) Omega = xi", "Sec. 3.2 field definitions", vac, 1e-12));

        rep.records.push_back(make_record(suite, "adjoint relation on K1 arguments", "Prop. 3.8 a",
                                          wfield::adjoint_residual(fs, xi), 1e-8));
        rep.records.push_back(make_record(
            suite, "translation covariance", "Eq. (3.26)",
            wfield::covariance_translation_residual(fs, xi, geom::point({0.2, 0.5})), 1e-9));
        rep.records.push_back(
            make_record(suite, "boost covariance through closed forms", "Eq. (3.26)",
                        wfield::covariance_boost_residual(fs, {xi, fam.members[1]}, 0.3), 1e-10));
        rep.records.push_back(make_record(suite, "TCP exchange J Phi J = Phi'(J xi)",
                                          "Sec. 3.2 (J Phi J)", wfield::tcp_exchange_residual(fs, xi),
                                          1e-9));
        rep.records.push_back(make_record(
            suite, "modular covariance Delta^{it} = boost", "Thm. 3.10 (Bisognano-Wichmann)",
            wfield::covariance_boost_residual(fs, {xi}, -2.0 * pi * 0.04), 1e-10));
    }

    // locality with Hardy pairs at truncation level (constant S) plus the
    // crossing-violation negative control
    {
        const auto& phi1 = fam.members_sym[0];
        const auto psi_prime = onep::apply_J1(fam.members_sym[1]);
        fock::FockSpace fr(fock::GridSpec::gauss_legendre(cfg.grid_points, cfg.grid_theta_max),
                           smx::free_model(cfg.mass), cfg.n_max);
        fock::FockSpace fi(fock::GridSpec::gauss_legendre(cfg.grid_points, cfg.grid_theta_max),
                           smx::ising_model(cfg.mass), cfg.n_max);
        rep.records.push_back(make_record(suite, "wedge locality, free field", "Sec. 3.2 (L + K = 0)",
                                          wfield::locality_residual(fr, phi1, psi_prime), 1e-8));
        rep.records.push_back(make_record(suite, "wedge locality, Ising", "Sec. 3.2 (L + K = 0)",
                                          wfield::locality_residual(fi, phi1, psi_prime), 1e-6));
        fock::FockSpace fnc(fock::GridSpec::gauss_legendre(cfg.grid_points, cfg.grid_theta_max),
                            smx::crossing_violating_model(1.0, cfg.mass), cfg.n_max);
        rep.records.push_back(make_flag_record(
            suite, "negative control: crossing violation breaks locality", "Def. 3.1 f",
            wfield::locality_residual(fnc, phi1, psi_prime) > 1e-5));
    }

    // crossing identity L = -K by the contour-shift oracle
    {
        const auto psi_prime = onep::apply_J1(fam.members[1]);
        const double r_shg =
            fock::crossing_oracle(smx::sinh_gordon_model(1.0, cfg.mass), fam.members[0], psi_prime);
        rep.records.push_back(
            make_record(suite, "L = -K for Hardy pairs (sinh-Gordon oracle)",
                        "Prop. 3.7, Eq. (KernelsEqual)", r_shg, 1e-6));
    }

    // cyclicity ranks at M = 3
    {
        std::vector<onep::RapidityFunction> family = fam.members;
        for (int k = 0; k < 3; ++k) {
            const double th0 = rng.uniform(-0.6, 0.6);
            const auto m = onep::member_gaussian(cfg.mass, 0.4 + 0.15 * k, th0);
            family.push_back((1.0 / onep::norm(fam.rule, m)) * m);
        }
        fock::FockSpace fb(fock::GridSpec::gauss_legendre(3, 3.5), smx::free_model(cfg.mass), 3);
        fock::FockSpace ff(fock::GridSpec::gauss_legendre(3, 3.5), smx::ising_model(cfg.mass), 3);
        const auto rb = wfield::cyclicity_rank(fb, family, 2);
        const auto rf = wfield::cyclicity_rank(ff, family, 2);
        rep.records.push_back(make_flag_record(suite, "vacuum cyclicity rank, S=+1 (10)",
                                               "Prop. 3.8 d", rb.achieved == 10 && rb.target == 10));
        rep.records.push_back(make_flag_record(suite, "vacuum cyclicity rank, S=-1 (7)",
                                               "Prop. 3.8 d", rf.achieved == 7 && rf.target == 7));
    }

    // cross-commutator structure for the configured model
    if (model.dim() == 1 && cfg.n_max >= 2) {
        fock::FockSpace fs(g, model, cfg.n_max);
        const auto cc =
            fock::cross_commutators(fs, random_vector(rng, fs.sites()), random_vector(rng, fs.sites()));
        rep.records.push_back(make_record(suite, "[z'(phi), z(psi)] = 0", "Eq. (3.27) region",
                                          cc.comm_z_prime_z, 1e-10));
        rep.records.push_back(make_record(suite, "[z'^+(phi), z^+(psi)] = 0", "Eq. (3.28) region",
                                          cc.comm_zd_prime_zd, 1e-10));
        rep.records.push_back(make_record(
            suite, "K, L commute with N and grid multipliers", "Prop. 3.7",
            std::max({cc.K_number_comm, cc.L_number_comm, cc.K_multiplier_comm, cc.L_multiplier_comm}),
            1e-9));
    }
}

// ---------------------------------------------------------------------------
// scattering
// ---------------------------------------------------------------------------

inline void run_scattering_suite(const RunConfig& cfg, Report& rep)
{
    const std::string suite = "scattering";
    const auto model = cfg.build_model();
    const fock::GridSpec g =
        fock::GridSpec::gauss_legendre(cfg.grid_points, cfg.grid_theta_max, model.dim());
    fock::FockSpace fs(g, model, std::max(cfg.n_max, 2));

    double worst_factor = 0.0, worst_resid = 0.0;
    Table scan;
    scan.header = {"theta_i", "theta_j", "factor_re", "factor_im"};
    for (int i = 0; i < g.points(); ++i)
        for (int j = 0; j < g.points(); ++j) {
            if (i == j) continue;
            const auto r = wfield::scattering_reorder(fs, i, j);
            worst_resid = std::max(worst_resid, r.residual);
            if (model.dim() == 1)
                worst_factor = std::max(worst_factor, std::abs(r.factor - r.s_value));
            scan.rows.push_back({g.nodes[i], g.nodes[j], r.factor.real(), r.factor.imag()});
        }
    rep.tables["scattering_scan"] = scan;
    rep.records.push_back(make_record(suite, "exchange twist matches the two-particle S",
                                      "Eqs. (3.33)-(3.34), Prop. 3.6 e", worst_resid, 1e-12));
    if (model.dim() == 1)
        rep.records.push_back(make_record(suite, "exchange factor equals S(th_i - th_j)",
                                          "Eqs. (3.33)-(3.34)", worst_factor, 1e-12));

    // the deformed model's factor is the warped-convolution phase
    {
        const double kappa = (model.name() == "nc_exp") ? model.param("kappa") : 1.0;
        const double mass = cfg.mass;
        fock::FockSpace fn(fock::GridSpec::gauss_legendre(cfg.grid_points, cfg.grid_theta_max),
                           smx::nc_exp_model(kappa, mass), 2);
        double worst = 0.0;
        for (int i = 0; i < fn.grid().points(); ++i)
            for (int j = 0; j < i; ++j) {
                const auto r = wfield::scattering_reorder(fn, i, j);
                const auto ph =
                    wconv::deformed_phase(fn.grid().nodes[i], fn.grid().nodes[j], kappa, mass);
                worst = std::max(worst, std::abs(r.factor - ph.bilinear));
                worst = std::max(worst, ph.difference);
            }
        rep.records.push_back(make_record(
            suite, "deformed factor equals the warped-convolution phase", "Eq. (4.8), Sec. 4.2",
            worst, 1e-13));
    }
}

// ---------------------------------------------------------------------------
// warped convolution
// ---------------------------------------------------------------------------

inline void run_warp_suite(const RunConfig& cfg, Report& rep)
{
    const std::string suite = "warp";
    Rng rng(cfg.seed ^ 0x77617270ULL);

    auto random_fwd_rep = [&](int n, int r, bool with_vacuum) {
        std::vector<RVec> pts;
        for (int j = 0; j < r; ++j) {
            RVec p(2);
            if (j == 0 && with_vacuum) {
                p.setZero();
            } else {
                p(1) = rng.uniform(-1.0, 1.0);
                p(0) = std::abs(p(1)) * std::cosh(rng.uniform(0.0, 1.0));
            }
            pts.push_back(p);
        }
        std::vector<RVec> cols;
        for (int c = 0; c < n; ++c) cols.push_back(pts[c % r]);
        return wconv::SpectralRep::from_eigenbasis(cols, random_unitary(rng, n));
    };
    auto random_skew = [&](int d) {
        RMat anti = RMat::Zero(d, d);
        for (int a = 0; a < d; ++a)
            for (int b = a + 1; b < d; ++b) {
                anti(a, b) = rng.uniform(-1.0, 1.0);
                anti(b, a) = -anti(a, b);
            }
        return RMat(geom::eta(d) * anti);
    };

    double id0 = 0, star = 0, cascade = 0, ordering = 0, assoc = 0, oracle = 0, covar = 0, vac = 0;
    double neg_ordering = std::numeric_limits<double>::infinity();
    for (int t = 0; t < 100; ++t) {
        const auto repx = random_fwd_rep(6, 3, true);
        const Mat a = random_matrix(rng, 6, 6);
        const Mat b = random_matrix(rng, 6, 6);
        const RMat q = random_skew(2);

        id0 = std::max(id0, opnorm(Mat(wconv::warp_right(a, RMat::Zero(2, 2), repx) - a)));
        star = std::max(star, opnorm(Mat(wconv::warp_right(Mat(a.adjoint()), q, repx) -
                                         wconv::warp_right(a, q, repx).adjoint())));
        cascade = std::max(cascade, wconv::cascade_check(a, q, random_skew(2), repx));
        ordering = std::max(ordering, wconv::warp(a, q, repx).ordering_disagreement);
        assoc = std::max(
            assoc, opnorm(Mat(wconv::rieffel_product(wconv::rieffel_product(a, b, q, repx), a, q, repx) -
                              wconv::rieffel_product(a, wconv::rieffel_product(b, a, q, repx), q, repx))));
        oracle = std::max(oracle, opnorm(Mat(wconv::rieffel_product(a, b, q, repx) -
                                             wconv::rieffel_blockwise(a, b, q, repx))));
        // U-covariance with V = U(y)
        wconv::Implementer v{repx.u(geom::point({rng.uniform(-1, 1), rng.uniform(-1, 1)})), false};
        covar = std::max(
            covar, wconv::covariance_check(a, q, v, RMat::Identity(2, 2), repx).covariance_residual);
        // vacuum invariance
        Eigen::SelfAdjointEigenSolver<Mat> es(repx.projections[repx.invariant_index()]);
        const Vec omega = es.eigenvectors().col(5);
        vac = std::max(vac, wconv::vacuum_check(a, q, repx, omega));

        RMat sym = RMat::Zero(2, 2);
        sym(0, 0) = 1.0;
        sym(1, 1) = 0.5;
        neg_ordering = std::min(neg_ordering, wconv::warp(a, sym, repx).ordering_disagreement);
    }
    rep.records.push_back(make_record(suite, "Q = 0 is the identity", "Thm. 4.2 c region", id0, 1e-12));
    rep.records.push_back(make_record(suite, "warping commutes with adjoints", "Thm. 4.2 b", star, 1e-12));
    rep.records.push_back(make_record(suite, "cascade (A_Q1)_Q2 = A_{Q1+Q2}", "Lemma 4.4", cascade, 1e-12));
    rep.records.push_back(
        make_record(suite, "left/right spectral orderings agree", "Eq. (4.5)", ordering, 1e-12));
    rep.records.push_back(
        make_record(suite, "Rieffel product associativity", "Eq. (4.1), Thm. 4.2 a", assoc, 1e-12));
    rep.records.push_back(
        make_record(suite, "Rieffel product equals the blockwise oracle", "Eq. (4.1)", oracle, 1e-12));
    rep.records.push_back(make_record(suite, "U-covariance of warping", "Prop. 4.3 a", covar, 1e-12));
    rep.records.push_back(make_record(suite, "vacuum invariance A_Q Omega = A Omega", "Prop. 4.3 b", vac, 1e-12));
    rep.records.push_back(make_flag_record(suite, "negative control: non-skew Q splits the orderings",
                                           "Eq. (4.5)", neg_ordering > 1e-3));

    // commutation theorem on the tensor-factor construction
    {
        const Mat b1 = random_unitary(rng, 3), b2 = random_unitary(rng, 2);
        std::vector<RVec> cols;
        for (int c1 = 0; c1 < 3; ++c1)
            for (int c2 = 0; c2 < 2; ++c2) {
                RVec p(2), q2(2);
                p(1) = 0.3 * (c1 - 1);
                p(0) = std::abs(p(1)) + 0.2 * c1;
                q2(1) = 0.4 * c2;
                q2(0) = std::abs(q2(1)) + 0.1;
                cols.push_back(RVec(p + q2));
            }
        const auto repx = wconv::SpectralRep::from_eigenbasis(cols, kron(b1, b2), 1e-9);
        const Mat a = kron(Mat(b1 * random_matrix(rng, 3, 3) * b1.adjoint()), Mat::Identity(2, 2));
        const Mat b = kron(Mat::Identity(3, 3), Mat(b2 * random_matrix(rng, 2, 2) * b2.adjoint()));
        const RMat q = geom::admissible_q(2, 0.6);
        const auto res = wconv::commutation_theorem_check(a, b, q, repx);
        rep.records.push_back(make_record(suite, "commutation theorem hypothesis (tensor factors)",
                                          "Prop. 4.5", res.hypothesis_residual, 1e-12));
        rep.records.push_back(make_record(suite, "commutation theorem conclusion [A_Q, B_{-Q}] = 0",
                                          "Prop. 4.5", res.conclusion_residual, 1e-12));
        const auto bad = wconv::commutation_theorem_check(random_matrix(rng, 6, 6),
                                                          random_matrix(rng, 6, 6), q,
                                                          random_fwd_rep(6, 3, true));
        rep.records.push_back(make_flag_record(suite, "negative control: hypothesis fails for random pairs",
                                               "Prop. 4.5", bad.hypothesis_residual > 1e-2));
    }

    // deformed phase, both routes
    {
        double worst = 0.0;
        for (int t = 0; t < 50; ++t) {
            const auto ph = wconv::deformed_phase(rng.uniform(-2.5, 2.5), rng.uniform(-2.5, 2.5),
                                                  rng.uniform(0.1, 2.0), rng.uniform(0.5, 2.0));
            worst = std::max(worst, ph.difference);
        }
        rep.records.push_back(
            make_record(suite, "deformed two-particle phase, both routes", "Eq. (4.8)", worst, 1e-13));
    }
}

// ---------------------------------------------------------------------------
// nuclearity
// ---------------------------------------------------------------------------

inline void run_nuclearity_suite(const RunConfig& cfg, Report& rep)
{
    const std::string suite = "nuclearity";
    const auto model = cfg.build_model();
    if (model.dim() != 1) {
        rep.skipped.push_back("nuclearity: implemented for scalar models");
        return;
    }
    const auto fam = Families::standard(cfg);
    const fock::GridSpec g = fock::GridSpec::gauss_legendre(std::max(cfg.grid_points, 8), cfg.grid_theta_max);
    fock::FockSpace fs(g, model, std::min(cfg.n_max, 3));

    std::vector<nuc::Generator> family = {{1.0, {}},
                                          {1.0, {fam.members[0]}},
                                          {1.0, {fam.members[1]}},
                                          {1.0, {fam.members[0], fam.members[1]}},
                                          {1.0, {fam.members[0], fam.members[2]}}};

    // two-route agreement (operator machinery vs permutation assembly)
    double tworoute = 0.0;
    for (const auto& gen : family)
        tworoute = std::max(tworoute,
                            fs.norm_w(Vec(nuc::xi_apply(fs, gen, 1.0) - nuc::xi_apply_symbolic(fs, gen, 1.0))));
    rep.records.push_back(make_record(suite, "damped continuation, two-route agreement",
                                      "Eq. (3.30) vs Eq. (3.31)", tworoute, 1e-8));

    // vacuum generator untouched
    rep.records.push_back(make_record(suite, "Xi(s) 1 = Omega", "Eq. (2.26)",
                                      fs.norm_w(Vec(nuc::xi_apply(fs, {1.0, {}}, 0.9) - fs.vacuum())),
                                      1e-13));

    // scan: monotone in s, sector decay at s >= 1/m
    std::vector<double> sgrid;
    for (int k = 0; k < 10; ++k) sgrid.push_back(0.4 + 0.25 * k);
    const auto rows = nuc::nuclear_norm_scan(fs, family, sgrid);
    bool monotone = true, decay = true;
    Table scan;
    scan.header = {"s", "total"};
    for (int n = 0; n <= fs.n_max(); ++n) scan.header.push_back("n" + std::to_string(n));
    for (std::size_t k = 0; k < rows.size(); ++k) {
        if (k + 1 < rows.size() && rows[k + 1].total > rows[k].total + 1e-12) monotone = false;
        if (rows[k].s >= 1.0 / cfg.mass)
            for (std::size_t n = 0; n + 1 < rows[k].per_sector.size(); ++n)
                if (rows[k].per_sector[n + 1] > rows[k].per_sector[n] + 1e-12) decay = false;
        std::vector<double> row = {rows[k].s, rows[k].total};
        row.insert(row.end(), rows[k].per_sector.begin(), rows[k].per_sector.end());
        scan.rows.push_back(row);
    }
    rep.tables["nuclearity_scan"] = scan;
    rep.records.push_back(make_flag_record(suite, "nuclear-norm estimate monotone in s",
                                           "Thm. 2.14 context, Sec. 3.3 Step 3", monotone));
    rep.records.push_back(make_flag_record(suite, "per-sector contributions decay in n at s >= 1/m",
                                           "Sec. 3.3 Step 3", decay));

    // singular values: family-basis invariance
    {
        const auto r1 = nuc::singular_values(fs, family, 1.0);
        auto rotated = family;
        for (std::size_t k = 0; k < rotated.size(); ++k)
            rotated[k].coeff *= std::exp(iu * (0.2 + 0.5 * static_cast<double>(k)));
        const auto r2 = nuc::singular_values(fs, rotated, 1.0);
        double dev = 0.0;
        for (std::size_t k = 0; k < r1.sigmas.size(); ++k)
            dev = std::max(dev, std::abs(r1.sigmas[k] - r2.sigmas[k]));
        rep.records.push_back(make_record(suite, "singular values invariant under re-parametrization",
                                          "Thm. 2.14 context", dev, 1e-10));
    }
}

// ---------------------------------------------------------------------------
// orchestration
// ---------------------------------------------------------------------------

inline std::vector<std::string> known_suites()
{
    return {"geometry", "smatrix", "regularity", "singleparticle", "fock_rep",
            "zf",       "wedgefield", "scattering", "warp",        "nuclearity"};
}

/// Execute the selected suites in dependency order: smatrix gates the
/// Fock-side suites; geometry, warp and singleparticle are independent;
/// nuclearity runs last. Deterministic for a fixed config (all
/// randomness comes from the config seed).
inline Report run_all(const RunConfig& cfg)
{
    Report rep;
    rep.config_echo = cfg.echo;
    rep.timestamp = current_timestamp();

    auto selected = [&](const std::string& name) {
        if (cfg.suites.empty()) return true;
        for (const auto& s : cfg.suites)
            if (s == name) return true;
        return false;
    };
    auto guarded = [&](const std::string& name, auto&& fn) {
        if (!selected(name)) return;
        try {
            fn();
        } catch (const std::exception& e) {
            rep.skipped.push_back(name + ": " + e.what());
        }
    };

    guarded("geometry", [&] { run_geometry_suite(cfg, rep); });
    guarded("smatrix", [&] { run_smatrix_suite(cfg, rep); });
    guarded("regularity", [&] { run_regularity_suite(cfg, rep); });
    guarded("singleparticle", [&] { run_singleparticle_suite(cfg, rep); });
    guarded("warp", [&] { run_warp_suite(cfg, rep); });

    bool smatrix_ok = true;
    for (const auto& r : rep.records)
        if (r.suite == "smatrix" && !r.informational && !r.pass) smatrix_ok = false;
    const std::vector<std::string> dependents = {"fock_rep", "zf", "wedgefield", "scattering",
                                                 "nuclearity"};
    if (!smatrix_ok) {
        for (const auto& name : dependents)
            if (selected(name)) rep.skipped.push_back(name + ": S-matrix axioms failed upstream");
        return rep;
    }
    guarded("fock_rep", [&] { run_fock_rep_suite(cfg, rep); });
    guarded("zf", [&] { run_zf_suite(cfg, rep); });
    guarded("wedgefield", [&] { run_wedgefield_suite(cfg, rep); });
    guarded("scattering", [&] { run_scattering_suite(cfg, rep); });
    guarded("nuclearity", [&] { run_nuclearity_suite(cfg, rep); });
    return rep;
}

} // namespace wedgelab::app
