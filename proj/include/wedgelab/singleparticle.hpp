#pragma once

#include "wedgelab/core.hpp"
#include "wedgelab/geometry.hpp"
#include "wedgelab/smatrix.hpp"

#include <array>
#include <utility>

namespace wedgelab::onep {

/// On-shell momentum p_m(z) = m (cosh z, sinh z), entire in z.
inline std::array<cplx, 2> mass_shell(double m, cplx z)
{
    return {m * std::cosh(z), m * std::sinh(z)};
}

inline cplx mink2(const std::array<cplx, 2>& p, const std::array<cplx, 2>& q)
{
    return p[0] * q[0] - p[1] * q[1];
}

/// Single-particle wave function in the rapidity picture: D closed-form
/// components analytic wherever their formulas are, carried around as
/// callables so that Delta powers and J act by genuine continuation.
///
/// Strip convention (fixed for the whole artifact): standard-subspace
/// members are analytic in { -pi < Im z < 0 } and the boundary value at
/// Im = -pi equals the conjugate of the charge-conjugate component on
/// the real line; equivalently Delta^{1/2} shifts arguments by -i pi and
/// Delta^{it} by +2 pi t.
class RapidityFunction {
public:
    using Comp = std::function<cplx(cplx)>;

    RapidityFunction(smx::ParticleSpectrum spectrum, std::vector<Comp> comps,
                     std::string provenance = "")
        : spec_(std::move(spectrum)), comps_(std::move(comps)), provenance_(std::move(provenance))
    {
        if (static_cast<int>(comps_.size()) != spec_.dim)
            throw std::invalid_argument("RapidityFunction: component count != spectrum dim");
    }

    static RapidityFunction scalar(double mass, Comp f, std::string provenance = "")
    {
        return RapidityFunction(smx::ParticleSpectrum::scalar(mass), {std::move(f)},
                                std::move(provenance));
    }

    int dim() const { return spec_.dim; }
    const smx::ParticleSpectrum& spectrum() const { return spec_; }
    const std::string& provenance() const { return provenance_; }

    cplx operator()(int alpha, cplx z) const { return comps_[alpha](z); }
    cplx operator()(cplx z) const { return comps_[0](z); }

    RapidityFunction map(std::vector<Comp> comps, const std::string& tag) const
    {
        return RapidityFunction(spec_, std::move(comps), provenance_.empty() ? tag : provenance_ + ";" + tag);
    }

private:
    smx::ParticleSpectrum spec_;
    std::vector<Comp> comps_;
    std::string provenance_;
};

inline RapidityFunction operator*(cplx c, const RapidityFunction& f)
{
    std::vector<RapidityFunction::Comp> comps;
    for (int a = 0; a < f.dim(); ++a)
        comps.push_back([c, a, f](cplx z) { return c * f(a, z); });
    return f.map(std::move(comps), "scaled");
}

inline RapidityFunction operator+(const RapidityFunction& f, const RapidityFunction& g)
{
    std::vector<RapidityFunction::Comp> comps;
    for (int a = 0; a < f.dim(); ++a)
        comps.push_back([a, f, g](cplx z) { return f(a, z) + g(a, z); });
    return f.map(std::move(comps), "sum");
}

// ---------------------------------------------------------------------------
// Representation and modular data
// ---------------------------------------------------------------------------

/// (U1(x,lambda) xi)^a(z) = exp(i p_{m_a}(z).x) xi^a(z - lambda).
inline RapidityFunction act_poincare(const RapidityFunction& xi, const RVec& x, double lambda)
{
    if (x.size() != 2) throw std::invalid_argument("act_poincare: d = 2 translations only");
    const double x0 = x(0), x1 = x(1);
    std::vector<RapidityFunction::Comp> comps;
    for (int a = 0; a < xi.dim(); ++a) {
        const double m = xi.spectrum().masses[a];
        comps.push_back([=](cplx z) {
            const auto p = mass_shell(m, z);
            return std::exp(iu * (p[0] * x0 - p[1] * x1)) * xi(a, z - lambda);
        });
    }
    return xi.map(std::move(comps), "U1");
}

/// TCP: (J1 xi)^a(z) = conj(xi^{conj a}(conj z)); on the real line this is
/// plain conjugation of the charge-conjugate component.
inline RapidityFunction apply_J1(const RapidityFunction& xi)
{
    std::vector<RapidityFunction::Comp> comps;
    for (int a = 0; a < xi.dim(); ++a) {
        const int ab = xi.spectrum().conjugation[a];
        comps.push_back([ab, xi](cplx z) { return std::conj(xi(ab, std::conj(z))); });
    }
    return xi.map(std::move(comps), "J1");
}

/// Delta^w as the argument shift z -> z - 2 pi i w (w = it recovers the
/// unitary group, w = 1/2 the Tomita square root).
inline RapidityFunction delta_power(const RapidityFunction& xi, cplx w)
{
    const cplx shift = -2.0 * pi * iu * w;
    std::vector<RapidityFunction::Comp> comps;
    for (int a = 0; a < xi.dim(); ++a)
        comps.push_back([a, xi, shift](cplx z) { return xi(a, z + shift); });
    return xi.map(std::move(comps), "Delta^w");
}

/// S1 = J1 Delta^{1/2}; members of K1 are exactly its fixed points.
inline RapidityFunction s1_apply(const RapidityFunction& xi)
{
    std::vector<RapidityFunction::Comp> comps;
    for (int a = 0; a < xi.dim(); ++a) {
        const int ab = xi.spectrum().conjugation[a];
        comps.push_back([ab, xi](cplx z) { return std::conj(xi(ab, std::conj(z) - iu * pi)); });
    }
    return xi.map(std::move(comps), "S1");
}

inline QuadratureRule default_rule() { return composite_gauss_legendre(-8.0, 8.0, 4, 64); }

/// L2 pairing on the real boundary, conjugate-linear in the first slot.
inline cplx inner_product(const QuadratureRule& q, const RapidityFunction& f,
                          const RapidityFunction& g, double im_line = 0.0)
{
    cplx acc = 0.0;
    for (std::size_t k = 0; k < q.size(); ++k) {
        const cplx z(q.nodes[k], im_line);
        for (int a = 0; a < f.dim(); ++a) acc += q.weights[k] * std::conj(f(a, z)) * g(a, z);
    }
    return acc;
}

inline double norm(const QuadratureRule& q, const RapidityFunction& f, double im_line = 0.0)
{
    return std::sqrt(std::max(0.0, inner_product(q, f, f, im_line).real()));
}

inline double distance(const QuadratureRule& q, const RapidityFunction& f, const RapidityFunction& g)
{
    return norm(q, f + (-1.0) * g);
}

struct SymplecticResult {
    double value = 0.0;
    double tail = 0.0;
    bool converged = true;
};

/// Im<psi, xi> by quadrature with a crude tail monitor: the mass carried
/// by the outermost fifth of the integration window.
inline SymplecticResult symplectic_form(const QuadratureRule& q, const RapidityFunction& psi,
                                        const RapidityFunction& xi, double tail_tol = 1e-10)
{
    SymplecticResult r;
    const double lo = q.nodes.front(), hi = q.nodes.back();
    const double edge = 0.2 * (hi - lo);
    cplx acc = 0.0;
    double tail = 0.0;
    for (std::size_t k = 0; k < q.size(); ++k) {
        const double th = q.nodes[k];
        cplx term = 0.0;
        for (int a = 0; a < psi.dim(); ++a) term += std::conj(psi(a, th)) * xi(a, th);
        acc += q.weights[k] * term;
        if (th < lo + edge || th > hi - edge) tail += q.weights[k] * std::abs(term);
    }
    r.value = acc.imag();
    r.tail = tail;
    r.converged = tail <= tail_tol;
    return r;
}

// ---------------------------------------------------------------------------
// Standard subspace membership (Hardy test)
// ---------------------------------------------------------------------------

enum class Verdict { Member, NotMember, NotTestable };

struct MembershipResult {
    Verdict verdict = Verdict::NotTestable;
    double boundary_residual = 0.0; // far-edge value vs conjugate on the real line
    double hardy_ratio = 0.0;       // worst interior-line L2 norm / boundary L2 norm
    bool member() const { return verdict == Verdict::Member; }
};

/// K1 membership: the boundary identity xi^a(th - i pi) =
/// conj(xi^{conj a}(th)) on the quadrature nodes (normalized by the L2
/// norm) plus a finiteness probe of the shifted L2 norms on sampled
/// interior lines. `strip_sign` = -1 selects the massive convention
/// (lower strip); +1 the light-ray one (upper strip).
inline MembershipResult k1_membership(const QuadratureRule& q, const RapidityFunction& xi,
                                      const std::vector<double>& lambda_samples = {},
                                      double tol = 1e-9, double growth_cap = 1e4,
                                      int strip_sign = -1)
{
    MembershipResult res;
    std::vector<double> lams = lambda_samples;
    if (lams.empty()) lams = {0.1 * pi, 0.25 * pi, 0.5 * pi, 0.75 * pi, 0.9 * pi};
    try {
        const double n0 = norm(q, xi);
        if (!(n0 > 0) || !std::isfinite(n0)) return res;

        double resid = 0.0;
        for (std::size_t k = 0; k < q.size(); ++k) {
            const double th = q.nodes[k];
            for (int a = 0; a < xi.dim(); ++a) {
                const int ab = xi.spectrum().conjugation[a];
                const cplx far = xi(a, cplx(th, strip_sign * pi));
                const cplx ref = std::conj(xi(ab, th));
                if (!std::isfinite(far.real()) || !std::isfinite(far.imag())) return res;
                resid = std::max(resid, std::abs(far - ref));
            }
        }
        res.boundary_residual = resid / n0;

        double worst = n0;
        for (double lam : lams) {
            const double nl = norm(q, xi, strip_sign * lam);
            if (!std::isfinite(nl)) {
                res.hardy_ratio = std::numeric_limits<double>::infinity();
                res.verdict = Verdict::NotMember;
                return res;
            }
            worst = std::max(worst, nl);
        }
        res.hardy_ratio = worst / n0;
        res.verdict = (res.boundary_residual <= tol && res.hardy_ratio <= growth_cap)
                          ? Verdict::Member
                          : Verdict::NotMember;
    } catch (const std::exception&) {
        res.verdict = Verdict::NotTestable;
    }
    return res;
}

// ---------------------------------------------------------------------------
// Test-function families
// ---------------------------------------------------------------------------

/// Plain rapidity Gaussian exp(-b (z - z0)^2): entire, uniformly L2 on
/// every horizontal line, but not a K1 member by itself.
inline RapidityFunction gaussian(double mass, double b, cplx z0, cplx amplitude = 1.0)
{
    return RapidityFunction::scalar(
        mass, [=](cplx z) { return amplitude * std::exp(-b * (z - z0) * (z - z0)); }, "gaussian");
}

/// Symmetrized Gaussian h + S1 h: an exact K1 member in closed form.
inline RapidityFunction member_gaussian(double mass, double b, double th0, cplx amplitude = 1.0)
{
    const auto h = gaussian(mass, b, th0, amplitude);
    return (h + s1_apply(h)).map(
        {[h](cplx z) { return h(0, z) + std::conj(h(0, std::conj(z) - iu * pi)); }}, "K1 member");
}

/// Tensor version: seed component profiles, then symmetrize with S1.
inline RapidityFunction member_multi(const smx::ParticleSpectrum& spec,
                                     const std::vector<RapidityFunction::Comp>& seeds)
{
    RapidityFunction h(spec, seeds, "seed");
    return h + s1_apply(h);
}

/// Wave function of a real spacetime Gaussian exp(-a |x - c|^2) pulled
/// back through the mass shell. Satisfies the boundary identity exactly
/// but grows in the middle of the strip (it is not Hardy class); kept as
/// a documented near-member for the membership diagnostics.
inline RapidityFunction spacetime_gaussian(double mass, double a, const RVec& center)
{
    const double c0 = center(0), c1 = center(1);
    return RapidityFunction::scalar(
        mass,
        [=](cplx z) {
            const auto p = mass_shell(mass, z);
            const cplx phase = std::exp(iu * (p[0] * c0 - p[1] * c1));
            return (pi / a) * phase * std::exp(-(p[0] * p[0] + p[1] * p[1]) / (4.0 * a));
        },
        "spacetime gaussian");
}

// ---------------------------------------------------------------------------
// Borchers commutation relations
// ---------------------------------------------------------------------------

struct BorchersResult {
    double boost_residual = 0.0; // Delta^{it} U(x) Delta^{-it} vs U(LambdaW(t) x)
    double tcp_residual = 0.0;   // J U(x) J vs U(j x)
};

inline BorchersResult borchers_relation_check(const QuadratureRule& q,
                                              const std::vector<double>& t_samples,
                                              const std::vector<RVec>& x_samples,
                                              const std::vector<RapidityFunction>& family)
{
    BorchersResult out;
    for (double t : t_samples)
        for (const RVec& x : x_samples) {
            const RMat lam = geom::wedge_boost_matrix(2, t);
            const RVec lx = lam * x;
            for (const auto& xi : family) {
                // Delta^{it} U(x) Delta^{-it} xi
                const auto lhs_b =
                    delta_power(act_poincare(delta_power(xi, -iu * t), x, 0.0), iu * t);
                const auto rhs_b = act_poincare(xi, lx, 0.0);
                out.boost_residual = std::max(out.boost_residual, distance(q, lhs_b, rhs_b));

                const auto lhs_j = apply_J1(act_poincare(apply_J1(xi), x, 0.0));
                const auto rhs_j = act_poincare(xi, RVec(-x), 0.0);
                out.tcp_residual = std::max(out.tcp_residual, distance(q, lhs_j, rhs_j));
            }
        }
    return out;
}

// ---------------------------------------------------------------------------
// Longo-Witten endomorphisms (light-ray standard pair)
// ---------------------------------------------------------------------------

/// Bounded analytic function on the upper half plane with unimodular
/// symmetric boundary values.
struct InnerFunction {
    std::function<cplx(cplx)> phi;
    std::string name;
};

struct InnerCheck {
    double unimodularity = 0.0;  // | |phi(p)| - 1 | on the real line
    double symmetry = 0.0;       // | phi(-p) - conj(phi(p)) |
    double inverse_identity = 0.0; // | conj(phi(p)) - 1/phi(p) |
    double uhp_bound = 0.0;      // sup |phi| on a sampled upper-half-plane grid
    bool symmetric_inner(double tol = 1e-10) const
    {
        return unimodularity <= tol && symmetry <= tol && inverse_identity <= tol &&
               uhp_bound <= 1.0 + tol;
    }
};

inline InnerCheck is_symmetric_inner(const InnerFunction& f, const std::vector<double>& grid)
{
    InnerCheck c;
    for (double p : grid) {
        if (p == 0.0) continue;
        const cplx v = f.phi(p);
        c.unimodularity = std::max(c.unimodularity, std::abs(std::abs(v) - 1.0));
        c.symmetry = std::max(c.symmetry, std::abs(f.phi(-p) - std::conj(v)));
        c.inverse_identity = std::max(c.inverse_identity, std::abs(std::conj(v) - 1.0 / v));
        for (double im : {0.3, 1.0, 3.0})
            c.uhp_bound = std::max(c.uhp_bound, std::abs(f.phi(cplx(p, im))));
    }
    return c;
}

/// Light-ray members live in the mirrored strip { 0 < Im z < pi } (the
/// momentum e^z must stay in the upper half plane, where phi is
/// analytic); the boundary identity sits at +i pi.
inline RapidityFunction lightray_member(double b, double s0)
{
    const auto h = gaussian(1.0, b, s0);
    return RapidityFunction::scalar(
        1.0, [h](cplx z) { return h(0, z) + std::conj(h(0, std::conj(z) + iu * pi)); },
        "light-ray member");
}

/// V = phi(P) acts by multiplication with phi(e^z) in the logarithmic
/// momentum variable; an endomorphism must map members to members.
inline MembershipResult endomorphism_check(const QuadratureRule& q, const InnerFunction& f,
                                           const RapidityFunction& member, double tol = 1e-9)
{
    auto mapped = member.map(
        {[f, member](cplx z) { return f.phi(std::exp(z)) * member(0, z); }}, "phi(P)");
    return k1_membership(q, mapped, {}, tol, 1e4, +1);
}

} // namespace wedgelab::onep
