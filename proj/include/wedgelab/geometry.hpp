#pragma once

#include "wedgelab/core.hpp"

#include <optional>
#include <sstream>
#include <utility>

namespace wedgelab::geom {

/// Minkowski product with signature (+,-,...,-).
inline double mink(const RVec& x, const RVec& y)
{
    if (x.size() != y.size()) throw std::invalid_argument("mink: dimension mismatch");
    double s = x(0) * y(0);
    for (int i = 1; i < x.size(); ++i) s -= x(i) * y(i);
    return s;
}

inline RMat eta(int d)
{
    RMat g = RMat::Identity(d, d);
    for (int i = 1; i < d; ++i) g(i, i) = -1.0;
    return g;
}

inline RVec point(std::initializer_list<double> coords)
{
    RVec x(static_cast<int>(coords.size()));
    int i = 0;
    for (double c : coords) x(i++) = c;
    return x;
}

inline bool is_lorentz(const RMat& lam, double tol = 1e-10)
{
    const int d = static_cast<int>(lam.rows());
    return (lam.transpose() * eta(d) * lam - eta(d)).cwiseAbs().maxCoeff() <= tol;
}

/// Affine Poincare map x -> lorentz*x + translation. Proper means
/// det = +1; antichronous elements (like the wedge reflection j) are
/// kept with a flag derived from the sign of lorentz(0,0).
class PoincareTransform {
public:
    PoincareTransform(RVec translation, RMat lorentz)
        : a_(std::move(translation)), lam_(std::move(lorentz))
    {
        if (a_.size() != lam_.rows() || lam_.rows() != lam_.cols())
            throw std::invalid_argument("PoincareTransform: shape mismatch");
        if (!is_lorentz(lam_)) throw std::invalid_argument("PoincareTransform: not a Lorentz matrix");
        if (std::abs(lam_.determinant() - 1.0) > 1e-10)
            throw std::invalid_argument("PoincareTransform: not proper (det != +1)");
    }

    static PoincareTransform identity(int d)
    {
        return {RVec::Zero(d), RMat::Identity(d, d)};
    }
    static PoincareTransform translation(const RVec& x)
    {
        return {x, RMat::Identity(static_cast<int>(x.size()), static_cast<int>(x.size()))};
    }

    int dim() const { return static_cast<int>(a_.size()); }
    const RVec& shift() const { return a_; }
    const RMat& lorentz() const { return lam_; }
    bool orthochronous() const { return lam_(0, 0) > 0.0; }

    RVec apply(const RVec& x) const { return lam_ * x + a_; }

    PoincareTransform compose(const PoincareTransform& o) const
    {
        return {a_ + lam_ * o.a_, lam_ * o.lam_};
    }
    PoincareTransform inverse() const
    {
        const RMat li = eta(dim()) * lam_.transpose() * eta(dim());
        return {RVec(-li * a_), li};
    }

private:
    RVec a_;
    RMat lam_;
};

/// Boost in the x1 direction with rapidity `chi` (padded with identity).
inline RMat boost01(int d, double chi)
{
    RMat b = RMat::Identity(d, d);
    b(0, 0) = std::cosh(chi);
    b(0, 1) = std::sinh(chi);
    b(1, 0) = std::sinh(chi);
    b(1, 1) = std::cosh(chi);
    return b;
}

/// Reflection about the edge of W_R: (x0,x1,rest) -> (-x0,-x1,rest).
inline RMat edge_reflection(int d)
{
    RMat j = RMat::Identity(d, d);
    j(0, 0) = -1.0;
    j(1, 1) = -1.0;
    return j;
}

// One-parameter wedge boost with 2*pi-rescaled angle. The sign is the one
// that matches the modular group convention used by the single-particle
// module (Delta^{it} shifts rapidity arguments by +2*pi*t), so that the
// Borchers relation Delta^{it} U(x) Delta^{-it} = U(LambdaW(t) x) holds
// as an exact identity of the constructed representation.
inline RMat wedge_boost_matrix(int d, double t) { return boost01(d, -2.0 * pi * t); }

/// Wedge region: a proper Poincare image of W_R = { x : x1 > |x0| }.
///
/// Stored in a normalized form: the two null directions P, N with
/// membership  (x-a).P < 0 and (x-a).N > 0  (Minkowski pairings), scaled
/// to unit time component, plus the apex component in span(P,N). For
/// W_R itself P = (1,1,0,..), N = (1,-1,0,..). Equality of wedges is
/// decidable by comparing these data; the Lorentz representative is
/// reconstructed by a fixed section when needed.
class Wedge {
public:
    enum class Side { Right, Left };

    static Wedge right(int d)
    {
        RVec p = RVec::Zero(d), n = RVec::Zero(d);
        p(0) = 1.0;
        p(1) = 1.0;
        n(0) = 1.0;
        n(1) = -1.0;
        return Wedge(p, n, RVec::Zero(d));
    }
    static Wedge left(int d) { return right(d).causal_complement(); }
    static Wedge right(int d, const RVec& apex) { return right(d).translated(apex); }
    static Wedge left(int d, const RVec& apex) { return left(d).translated(apex); }

    int dim() const { return static_cast<int>(p_.size()); }
    const RVec& null_p() const { return p_; }
    const RVec& null_n() const { return n_; }
    const RVec& apex() const { return apex_; }

    /// Strict (open) membership, Eq. x1 > |x0| in the wedge frame.
    bool contains(const RVec& x, double tol = 1e-12) const
    {
        check_dim(x);
        const RVec u = x - apex_;
        return mink(u, p_) < -tol && mink(u, n_) > tol;
    }

    /// Non-strict membership in the closure.
    bool closure_contains(const RVec& x, double tol = 1e-12) const
    {
        check_dim(x);
        const RVec u = x - apex_;
        return mink(u, p_) <= tol && mink(u, n_) >= -tol;
    }

    /// The causal complement W' = -W (same apex, opposite side); an
    /// involution on the stored data.
    Wedge causal_complement() const { return Wedge(RVec(-p_), RVec(-n_), apex_); }

    Wedge transformed(const PoincareTransform& g) const
    {
        return Wedge(RVec(g.lorentz() * p_), RVec(g.lorentz() * n_), g.apply(apex_full()));
    }
    Wedge translated(const RVec& x) const { return Wedge(p_, n_, RVec(apex_ + x)); }

    bool same_rays(const Wedge& o, double tol = 1e-12) const
    {
        return dim() == o.dim() && (p_ - o.p_).cwiseAbs().maxCoeff() <= tol &&
               (n_ - o.n_).cwiseAbs().maxCoeff() <= tol;
    }

    bool operator_equal(const Wedge& o, double tol = 1e-12) const
    {
        return same_rays(o, tol) && (apex_ - o.apex_).cwiseAbs().maxCoeff() <= tol;
    }

    /// Does `inner` lie inside this wedge? By Prop.-2.2-type rigidity this
    /// holds iff both share the Lorentz frame and the apex displacement
    /// lies in the closure of this wedge.
    bool includes(const Wedge& inner, double tol = 1e-12) const
    {
        if (!same_rays(inner, tol)) return false;
        const RVec dx = inner.apex_ - apex_;
        return mink(dx, p_) <= tol && mink(dx, n_) >= -tol;
    }

    /// d=2 convenience: which of the two families the wedge belongs to.
    Side side() const
    {
        if (dim() != 2) throw std::logic_error("Wedge::side: only defined in d=2");
        return p_(1) > 0.0 ? Side::Right : Side::Left;
    }

    /// A fixed-section Lorentz frame Lambda with Lambda W_R = W - apex.
    /// Unique only up to the stabilizer of W_R; see module notes.
    RMat frame() const
    {
        const int d = dim();
        const double g = mink(p_, n_);
        const double s = std::sqrt(2.0 / g);
        const RVec ph = s * p_, nh = s * n_;
        RMat lam = RMat::Zero(d, d);
        lam.col(0) = 0.5 * (ph + nh);
        lam.col(1) = 0.5 * (ph - nh);
        // Complete with an orthonormal basis of the edge subspace.
        int col = 2;
        for (int k = 0; k < d && col < d; ++k) {
            RVec v = RVec::Zero(d);
            v(k) = 1.0;
            for (int j = 0; j < col; ++j) {
                const double gj = (j == 0) ? 1.0 : -1.0;
                v -= (mink(RVec(lam.col(j)), v) / gj) * lam.col(j);
            }
            const double n2 = -mink(v, v);
            if (n2 > 1e-10) {
                lam.col(col++) = v / std::sqrt(n2);
            }
        }
        if (col != d) throw std::runtime_error("Wedge::frame: degenerate edge basis");
        if (lam.determinant() < 0) lam.col(d - 1) *= -1.0;
        return lam;
    }

    /// The reflection j_W about the edge of W and the boost Lambda_W(t),
    /// both conjugated from the reference wedge by the fixed section.
    std::pair<PoincareTransform, PoincareTransform> reflection_and_boost(double t) const
    {
        const PoincareTransform s(apex_, frame());
        const PoincareTransform jr(RVec::Zero(dim()), edge_reflection(dim()));
        const PoincareTransform bt(RVec::Zero(dim()), wedge_boost_matrix(dim(), t));
        return {s.compose(jr).compose(s.inverse()), s.compose(bt).compose(s.inverse())};
    }

private:
    Wedge(RVec p, RVec n, RVec apex) : p_(std::move(p)), n_(std::move(n))
    {
        if (p_.size() < 2) throw std::invalid_argument("Wedge: need d >= 2");
        // Canonical representative: (P,N) ~ (-N,-P) describe the same
        // region; pick the one with forward null directions.
        if (p_(0) < 0.0) {
            RVec tmp = -n_;
            n_ = -p_;
            p_ = tmp;
        }
        p_ /= std::abs(p_(0));
        n_ /= std::abs(n_(0));
        apex_ = core_component(apex);
    }

    RVec apex_full() const { return apex_; }

    /// Project the apex onto span(P,N); edge translations fix the wedge.
    RVec core_component(const RVec& a) const
    {
        const double g = mink(p_, n_);
        const double beta = mink(a, p_) / g;
        const double alpha = mink(a, n_) / g;
        return alpha * p_ + beta * n_;
    }

    void check_dim(const RVec& x) const
    {
        if (x.size() != p_.size()) throw std::invalid_argument("Wedge: dimension mismatch");
    }

    RVec p_, n_, apex_;
};

// ---------------------------------------------------------------------------
// Double cones (d = 2)
// ---------------------------------------------------------------------------

struct DoubleCone {
    bool empty = true;
    RVec x, y;
    double diameter = 0.0;
};

/// O_{x,y} = (W_R + x) n (W_L + y); nonempty iff y - x lies in W_R,
/// with diameter sqrt(-(x-y)^2).
inline DoubleCone double_cone(const RVec& x, const RVec& y, double tol = 1e-12)
{
    if (x.size() != 2 || y.size() != 2) throw std::invalid_argument("double_cone: requires d = 2");
    DoubleCone c;
    c.x = x;
    c.y = y;
    if (Wedge::right(2).contains(RVec(y - x), tol)) {
        c.empty = false;
        c.diameter = std::sqrt(-mink(RVec(x - y), RVec(x - y)));
    }
    return c;
}

// ---------------------------------------------------------------------------
// Admissible deformation matrices
// ---------------------------------------------------------------------------

/// Skew symmetry w.r.t. the Minkowski product: (Qx).y = -x.(Qy).
inline bool is_minkowski_skew(const RMat& q, double tol = 1e-12)
{
    const RMat m = eta(static_cast<int>(q.rows())) * q;
    return (m + m.transpose()).cwiseAbs().maxCoeff() <= tol;
}

/// The standard admissible matrix: kappa in the 0-1 corner and, in d=4,
/// the extra kappa' rotation block in the edge.
inline RMat admissible_q(int d, double kappa, double kappa_prime = 0.0)
{
    RMat q = RMat::Zero(d, d);
    q(0, 1) = kappa;
    q(1, 0) = kappa;
    if (d == 4) {
        q(2, 3) = kappa_prime;
        q(3, 2) = -kappa_prime;
    }
    return q;
}

struct AdmissibilityReport {
    bool skew = false;
    bool pattern_match = false; // matches the closed form with kappa >= 0
    bool boost_invariant = false;        // condition (i)
    bool reversal_anti_invariant = false; // condition (ii), incl. jQj = Q
    bool cone_into_wedge = false;        // condition (iii)
    bool admissible = false;
    std::string diagnostic;
};

/// Tests the closed-form pattern and, independently, conditions
/// (i)-(iii) on sampled boosts, edge rotations, W_R-reversing rotations
/// and forward-cone rays.
inline AdmissibilityReport admissibility_report(const RMat& q, double tol = 1e-9)
{
    const int d = static_cast<int>(q.rows());
    if (d < 2 || q.cols() != d) throw std::invalid_argument("admissibility_report: Q must be d x d, d >= 2");
    AdmissibilityReport rep;
    rep.skew = is_minkowski_skew(q, tol);
    if (!rep.skew) {
        std::ostringstream os;
        os << "Q is not skew-symmetric w.r.t. the Minkowski product (max violation "
           << (eta(d) * q + (eta(d) * q).transpose()).cwiseAbs().maxCoeff() << ")";
        rep.diagnostic = os.str();
    }

    // Pattern route.
    const double kappa = q(0, 1);
    const double kp = (d == 4) ? q(2, 3) : 0.0;
    rep.pattern_match =
        (q - admissible_q(d, kappa, kp)).cwiseAbs().maxCoeff() <= tol && kappa >= -tol;

    // Direct route, condition (i): invariance under W_R-preserving maps.
    double resid_i = 0.0;
    for (double chi : {0.37, -1.21}) {
        const RMat b = boost01(d, chi);
        resid_i = std::max(resid_i, (b * q * b.inverse() - q).cwiseAbs().maxCoeff());
    }
    for (int a = 2; a < d; ++a)
        for (int b = a + 1; b < d; ++b) {
            RMat r = RMat::Identity(d, d);
            const double phi = 0.83;
            r(a, a) = std::cos(phi);
            r(b, b) = std::cos(phi);
            r(a, b) = -std::sin(phi);
            r(b, a) = std::sin(phi);
            resid_i = std::max(resid_i, (r * q * r.inverse() - q).cwiseAbs().maxCoeff());
        }
    rep.boost_invariant = resid_i <= tol;

    // Condition (ii): anti-invariance under W_R-reversing rotations (none
    // exist in d=2) and jQj = Q.
    double resid_ii = 0.0;
    for (int k = 2; k < d; ++k) {
        RMat r = RMat::Identity(d, d);
        r(1, 1) = -1.0;
        r(k, k) = -1.0; // pi rotation in the (x1, xk) plane, proper and orthochronous
        resid_ii = std::max(resid_ii, (r * q * r.inverse() + q).cwiseAbs().maxCoeff());
    }
    const RMat j = edge_reflection(d);
    resid_ii = std::max(resid_ii, (j * q * j - q).cwiseAbs().maxCoeff());
    rep.reversal_anti_invariant = resid_ii <= tol;

    // Condition (iii): Q maps the closed forward cone into the closed W_R.
    bool cone_ok = true;
    Rng rng(0x9e3779b97f4a7c15ULL);
    const Wedge wr = Wedge::right(d);
    for (int trial = 0; trial < 64 && cone_ok; ++trial) {
        RVec p(d);
        double norm2 = 0.0;
        for (int i = 1; i < d; ++i) {
            p(i) = rng.normal();
            norm2 += p(i) * p(i);
        }
        const double r = std::sqrt(norm2);
        const double scale = rng.uniform(0.0, 2.0);
        const bool null_ray = (trial % 4 == 0);
        p(0) = null_ray ? r : r * std::cosh(rng.uniform(0.0, 1.5));
        p *= (r > 0 ? scale / r : 1.0);
        cone_ok = wr.closure_contains(RVec(q * p), 1e-9);
    }
    rep.cone_into_wedge = cone_ok;

    rep.admissible = rep.skew && rep.boost_invariant && rep.reversal_anti_invariant && rep.cone_into_wedge;
    if (rep.admissible != rep.pattern_match && rep.skew)
        rep.diagnostic += "pattern/direct disagreement";
    return rep;
}

inline bool is_admissible(const RMat& q, double tol = 1e-9)
{
    return admissibility_report(q, tol).admissible;
}

} // namespace wedgelab::geom
