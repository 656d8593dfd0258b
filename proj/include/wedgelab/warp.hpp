#pragma once

#include "wedgelab/core.hpp"
#include "wedgelab/geometry.hpp"

#include <utility>

namespace wedgelab::wconv {

/// Finite joint spectral resolution of a translation representation:
/// U(x) = sum_j exp(i p_j . x) E_j with pairwise orthogonal projections
/// summing to the identity.
struct SpectralRep {
    std::vector<RVec> points;
    std::vector<Mat> projections;
    int dim = 0;

    int spectrum_size() const { return static_cast<int>(points.size()); }
    int space_dim() const { return static_cast<int>(points.empty() ? 0 : points[0].size()); }

    static SpectralRep from_eigenbasis(const std::vector<RVec>& col_points, const Mat& basis,
                                       double merge_tol = 1e-12)
    {
        if (static_cast<int>(col_points.size()) != basis.cols())
            throw std::invalid_argument("SpectralRep: one spectral point per basis column required");
        SpectralRep rep;
        rep.dim = static_cast<int>(basis.rows());
        for (int c = 0; c < basis.cols(); ++c) {
            int found = -1;
            for (int g = 0; g < rep.spectrum_size(); ++g)
                if ((rep.points[g] - col_points[c]).cwiseAbs().maxCoeff() <= merge_tol) found = g;
            const Mat contrib = basis.col(c) * basis.col(c).adjoint();
            if (found < 0) {
                rep.points.push_back(col_points[c]);
                rep.projections.push_back(contrib);
            } else {
                rep.projections[found] += contrib;
            }
        }
        rep.validate();
        return rep;
    }

    void validate(double tol = 1e-10) const
    {
        Mat sum = Mat::Zero(dim, dim);
        for (int j = 0; j < spectrum_size(); ++j) {
            const Mat& e = projections[j];
            if (opnorm(Mat(e - e.adjoint())) > tol || opnorm(Mat(e * e - e)) > tol)
                throw std::invalid_argument("SpectralRep: projections must be orthogonal idempotents");
            for (int k = j + 1; k < spectrum_size(); ++k)
                if (opnorm(Mat(e * projections[k])) > tol)
                    throw std::invalid_argument("SpectralRep: projections not mutually orthogonal");
            sum += e;
        }
        if (opnorm(Mat(sum - Mat::Identity(dim, dim))) > tol)
            throw std::invalid_argument("SpectralRep: projections do not sum to the identity");
    }

    bool forward_cone(double tol = 1e-12) const
    {
        for (const RVec& p : points) {
            double s2 = 0.0;
            for (int i = 1; i < p.size(); ++i) s2 += p(i) * p(i);
            if (p(0) < std::sqrt(s2) - tol) return false;
        }
        return true;
    }

    /// Index of a p = 0 spectral point, or -1.
    int invariant_index(double tol = 1e-12) const
    {
        for (int j = 0; j < spectrum_size(); ++j)
            if (points[j].cwiseAbs().maxCoeff() <= tol) return j;
        return -1;
    }

    Mat u(const RVec& x) const
    {
        Mat m = Mat::Zero(dim, dim);
        for (int j = 0; j < spectrum_size(); ++j)
            m += std::exp(iu * geom::mink(points[j], x)) * projections[j];
        return m;
    }

    Mat alpha(const RVec& y, const Mat& a) const { return u(y) * a * u(y).adjoint(); }
};

// ---------------------------------------------------------------------------
// Warped convolution
// ---------------------------------------------------------------------------

/// A_Q = sum_j alpha_{Q p_j}(A) E_j (spectral form of the warped
/// convolution; on discrete spectra this is the definition).
inline Mat warp_right(const Mat& a, const RMat& q, const SpectralRep& rep)
{
    Mat out = Mat::Zero(rep.dim, rep.dim);
    for (int j = 0; j < rep.spectrum_size(); ++j)
        out += rep.alpha(RVec(q * rep.points[j]), a) * rep.projections[j];
    return out;
}

inline Mat warp_left(const Mat& a, const RMat& q, const SpectralRep& rep)
{
    Mat out = Mat::Zero(rep.dim, rep.dim);
    for (int j = 0; j < rep.spectrum_size(); ++j)
        out += rep.projections[j] * rep.alpha(RVec(q * rep.points[j]), a);
    return out;
}

struct WarpResult {
    Mat value;
    double ordering_disagreement = 0.0; // nonzero payload when Q is not skew
};

inline WarpResult warp(const Mat& a, const RMat& q, const SpectralRep& rep)
{
    WarpResult res{warp_right(a, q, rep), 0.0};
    res.ordering_disagreement = opnorm(Mat(res.value - warp_left(a, q, rep)));
    return res;
}

/// Independent blockwise formula (A_Q)_{jk} = exp(i p_j . Q p_k) A_{jk}.
inline Mat warp_blockwise(const Mat& a, const RMat& q, const SpectralRep& rep)
{
    Mat out = Mat::Zero(rep.dim, rep.dim);
    for (int j = 0; j < rep.spectrum_size(); ++j)
        for (int k = 0; k < rep.spectrum_size(); ++k)
            out += std::exp(iu * geom::mink(rep.points[j], RVec(q * rep.points[k]))) *
                   (rep.projections[j] * a * rep.projections[k]);
    return out;
}

/// Rieffel product through the warping bijection: A x_Q B =
/// warp(A_Q B_Q, -Q).
inline Mat rieffel_product(const Mat& a, const Mat& b, const RMat& q, const SpectralRep& rep)
{
    return warp_right(Mat(warp_right(a, q, rep) * warp_right(b, q, rep)), RMat(-q), rep);
}

/// Independent double-sum oracle for the Rieffel product.
inline Mat rieffel_blockwise(const Mat& a, const Mat& b, const RMat& q, const SpectralRep& rep)
{
    Mat out = Mat::Zero(rep.dim, rep.dim);
    for (int j = 0; j < rep.spectrum_size(); ++j)
        for (int k = 0; k < rep.spectrum_size(); ++k)
            for (int l = 0; l < rep.spectrum_size(); ++l) {
                const double phase = geom::mink(rep.points[j], RVec(q * rep.points[k])) +
                                     geom::mink(rep.points[k], RVec(q * rep.points[l])) -
                                     geom::mink(rep.points[j], RVec(q * rep.points[l]));
                out += std::exp(iu * phase) *
                       (rep.projections[j] * a * rep.projections[k] * b * rep.projections[l]);
            }
    return out;
}

/// || (A_{Q1})_{Q2} - A_{Q1+Q2} ||.
inline double cascade_check(const Mat& a, const RMat& q1, const RMat& q2, const SpectralRep& rep)
{
    const Mat lhs = warp_right(warp_right(a, q1, rep), q2, rep);
    const Mat rhs = warp_right(a, RMat(q1 + q2), rep);
    return opnorm(Mat(lhs - rhs));
}

/// || A_Q Omega - A Omega || for the invariant vector of the p = 0
/// spectral subspace.
inline double vacuum_check(const Mat& a, const RMat& q, const SpectralRep& rep, const Vec& omega)
{
    if (rep.invariant_index() < 0)
        throw std::invalid_argument("vacuum_check: representation has no p = 0 spectral point");
    return (warp_right(a, q, rep) * omega - a * omega).norm();
}

/// Unitary or antiunitary implementer V with V U(x) V^{-1} = U(M x);
/// antiunitaries are stored as the linear part of V composed with
/// componentwise conjugation.
struct Implementer {
    Mat v;
    bool antiunitary = false;

    Mat conjugate(const Mat& a) const
    {
        return antiunitary ? Mat(v * a.conjugate() * v.inverse()) : Mat(v * a * v.inverse());
    }
    Mat map_u(const Mat& ux) const
    {
        return antiunitary ? Mat(v * ux.conjugate() * v.inverse()) : Mat(v * ux * v.inverse());
    }
};

/// Minkowski transpose: a . (M^T b) = (M a) . b.
inline RMat mink_transpose(const RMat& m)
{
    const int d = static_cast<int>(m.rows());
    return geom::eta(d) * m.transpose() * geom::eta(d);
}

struct CovarianceResult {
    double intertwining_residual = 0.0;
    double covariance_residual = 0.0;
};

/// Prop.-4.3-type covariance: V A_Q V^{-1} = (V A V^{-1})_{+-M Q M^T},
/// sign + for unitary and - for antiunitary V. The intertwining
/// precondition is verified on sampled translations first.
inline CovarianceResult covariance_check(const Mat& a, const RMat& q, const Implementer& v,
                                         const RMat& m, const SpectralRep& rep,
                                         double precondition_tol = 1e-9)
{
    CovarianceResult res;
    Rng rng(0xc0ffee);
    for (int t = 0; t < 8; ++t) {
        RVec x(rep.space_dim());
        for (int i = 0; i < x.size(); ++i) x(i) = rng.uniform(-1.5, 1.5);
        res.intertwining_residual =
            std::max(res.intertwining_residual, opnorm(Mat(v.map_u(rep.u(x)) - rep.u(RVec(m * x)))));
    }
    if (res.intertwining_residual > precondition_tol)
        throw std::invalid_argument("covariance_check: V fails the intertwining precondition");
    const double sign = v.antiunitary ? -1.0 : 1.0;
    const RMat qp = sign * m * q * mink_transpose(m);
    const Mat lhs = v.conjugate(warp_right(a, q, rep));
    const Mat rhs = warp_right(v.conjugate(a), qp, rep);
    res.covariance_residual = opnorm(Mat(lhs - rhs));
    return res;
}

struct CommutationResult {
    double hypothesis_residual = 0.0; // max over spectral pairs of ||[a_{Qp}(A), a_{-Qq}(B)]||
    double conclusion_residual = 0.0; // ||[A_Q, B_{-Q}]||
};

/// Buchholz-Summers compatibility of opposite warpings.
inline CommutationResult commutation_theorem_check(const Mat& a, const Mat& b, const RMat& q,
                                                   const SpectralRep& rep)
{
    CommutationResult res;
    for (const RVec& p : rep.points)
        for (const RVec& pq : rep.points) {
            const Mat aa = rep.alpha(RVec(q * p), a);
            const Mat bb = rep.alpha(RVec(-q * pq), b);
            res.hypothesis_residual = std::max(res.hypothesis_residual, opnorm(Mat(aa * bb - bb * aa)));
        }
    const Mat aq = warp_right(a, q, rep);
    const Mat bq = warp_right(b, RMat(-q), rep);
    res.conclusion_residual = opnorm(Mat(aq * bq - bq * aq));
    return res;
}

struct DeformedPhase {
    cplx bilinear;   // exp(i p_m(theta').Q(kappa) p_m(theta))
    cplx closed_form; // exp(i kappa m^2 sinh(theta - theta'))
    double difference;
};

/// The two routes to the deformed two-particle phase; their equality is
/// the computable core of the equivalence between warping the free field
/// and the integrable model with S(theta) = exp(i kappa m^2 sinh theta).
inline DeformedPhase deformed_phase(double theta, double theta_prime, double kappa, double mass)
{
    const RMat q = geom::admissible_q(2, kappa);
    RVec p(2), pp(2);
    p << mass * std::cosh(theta), mass * std::sinh(theta);
    pp << mass * std::cosh(theta_prime), mass * std::sinh(theta_prime);
    DeformedPhase out;
    out.bilinear = std::exp(iu * geom::mink(pp, RVec(q * p)));
    out.closed_form = std::exp(iu * kappa * mass * mass * std::sinh(theta - theta_prime));
    out.difference = std::abs(out.bilinear - out.closed_form);
    return out;
}

} // namespace wedgelab::wconv
