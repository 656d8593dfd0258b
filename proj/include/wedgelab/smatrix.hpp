#pragma once

#include "wedgelab/core.hpp"

#include <limits>
#include <map>
#include <optional>
#include <string>
#include <utility>

namespace wedgelab::smx {

/// Internal-space data: masses and charge conjugation per basis index,
/// plus optional sampled gauge-group representatives V1(g).
struct ParticleSpectrum {
    int dim = 1;
    std::vector<double> masses;      // m_[alpha] > 0
    std::vector<int> conjugation;    // alpha -> conj(alpha), an involution
    std::vector<Mat> gauge_samples;  // unitary D x D matrices

    static ParticleSpectrum scalar(double mass)
    {
        ParticleSpectrum s;
        s.dim = 1;
        s.masses = {mass};
        s.conjugation = {0};
        return s;
    }

    static ParticleSpectrum uniform(int dim, double mass, std::vector<int> conj = {})
    {
        ParticleSpectrum s;
        s.dim = dim;
        s.masses.assign(dim, mass);
        if (conj.empty()) {
            s.conjugation.resize(dim);
            for (int a = 0; a < dim; ++a) s.conjugation[a] = a;
        } else {
            s.conjugation = std::move(conj);
        }
        return s;
    }

    void validate() const
    {
        if (dim < 1 || static_cast<int>(masses.size()) != dim ||
            static_cast<int>(conjugation.size()) != dim)
            throw std::invalid_argument("ParticleSpectrum: inconsistent sizes");
        for (int a = 0; a < dim; ++a) {
            if (!(masses[a] > 0)) throw std::invalid_argument("ParticleSpectrum: masses must be positive");
            const int ab = conjugation[a];
            if (ab < 0 || ab >= dim || conjugation[ab] != a)
                throw std::invalid_argument("ParticleSpectrum: conjugation is not an involution");
            if (std::abs(masses[ab] - masses[a]) > 1e-14)
                throw std::invalid_argument("ParticleSpectrum: conjugate masses differ");
        }
        for (const Mat& g : gauge_samples)
            if (opnorm(Mat(g.adjoint() * g - Mat::Identity(dim, dim))) > 1e-10)
                throw std::invalid_argument("ParticleSpectrum: gauge sample not unitary");
    }
};

/// Two-particle S-matrix as an analytic map on the closed rapidity strip
/// S(0, pi), valued in D^2 x D^2 tensors indexed (alpha beta),(gamma
/// delta) row-major. `regularity_margin` declares the widened strip
/// S(-eps, pi+eps) on which a bounded extension is claimed (0: none).
class SMatrixModel {
public:
    using EvalFn = std::function<Mat(cplx)>;

    SMatrixModel(std::string name, ParticleSpectrum spectrum, EvalFn eval,
                 double regularity_margin = 0.0,
                 std::map<std::string, double> params = {})
        : name_(std::move(name)), spectrum_(std::move(spectrum)), eval_(std::move(eval)),
          margin_(regularity_margin), params_(std::move(params))
    {
        spectrum_.validate();
    }

    const std::string& name() const { return name_; }
    const ParticleSpectrum& spectrum() const { return spectrum_; }
    int dim() const { return spectrum_.dim; }
    bool scalar() const { return spectrum_.dim == 1; }
    double regularity_margin() const { return margin_; }
    const std::map<std::string, double>& params() const { return params_; }
    double param(const std::string& key) const { return params_.at(key); }

    /// Evaluation restricted to the declared analyticity domain.
    Mat evaluate(cplx zeta) const
    {
        const double lo = -margin_ - 1e-12, hi = pi + margin_ + 1e-12;
        if (zeta.imag() < lo || zeta.imag() > hi)
            throw std::domain_error("SMatrixModel::evaluate: Im(zeta) outside declared strip of " + name_);
        return eval_(zeta);
    }

    /// Raw analytic continuation of the defining formula (used by the
    /// regularity probe, which investigates precisely the region where no
    /// boundedness is claimed).
    Mat evaluate_raw(cplx zeta) const { return eval_(zeta); }

    cplx evaluate_scalar(cplx zeta) const
    {
        if (!scalar()) throw std::logic_error("SMatrixModel::evaluate_scalar: tensor model");
        return evaluate(zeta)(0, 0);
    }

    int idx(int a, int b) const { return a * spectrum_.dim + b; }
    int conj(int a) const { return spectrum_.conjugation[a]; }

private:
    std::string name_;
    ParticleSpectrum spectrum_;
    EvalFn eval_;
    double margin_;
    std::map<std::string, double> params_;
};

// ---------------------------------------------------------------------------
// Built-in models
// ---------------------------------------------------------------------------

inline SMatrixModel constant_scalar(const std::string& name, double value, double mass,
                                    std::map<std::string, double> params = {})
{
    Mat s(1, 1);
    s(0, 0) = value;
    return SMatrixModel(name, ParticleSpectrum::scalar(mass),
                        [s](cplx) { return s; },
                        std::numeric_limits<double>::infinity(), std::move(params));
}

inline SMatrixModel free_model(double mass = 1.0)
{
    return constant_scalar("free", 1.0, mass, {{"mass", mass}});
}

inline SMatrixModel ising_model(double mass = 1.0)
{
    return constant_scalar("ising", -1.0, mass, {{"mass", mass}});
}

inline double sinh_gordon_b(double g) { return pi * g * g / (4.0 * pi + g * g); }

/// Sinh-Gordon: S(z) = (sinh z - i sin b)/(sinh z + i sin b) with
/// b = pi g^2 / (4 pi + g^2). Pole-free margin b around the strip.
inline SMatrixModel sinh_gordon_model(double g, double mass = 1.0)
{
    const double b = sinh_gordon_b(g);
    if (std::sin(b) == 0.0) return constant_scalar("sinh_gordon", 1.0, mass, {{"g", g}, {"mass", mass}});
    const double margin = std::min(b, pi - b);
    return SMatrixModel(
        "sinh_gordon", ParticleSpectrum::scalar(mass),
        [b](cplx z) {
            Mat s(1, 1);
            s(0, 0) = (std::sinh(z) - iu * std::sin(b)) / (std::sinh(z) + iu * std::sin(b));
            return s;
        },
        margin, {{"g", g}, {"b", b}, {"mass", mass}});
}

/// The deformed-field S-matrix exp(i kappa m^2 sinh z); bounded on the
/// physical strip but on no widened strip.
inline SMatrixModel nc_exp_model(double kappa, double mass)
{
    if (!(kappa > 0)) throw std::invalid_argument("nc_exp: requires kappa > 0");
    return SMatrixModel(
        "nc_exp", ParticleSpectrum::scalar(mass),
        [kappa, mass](cplx z) {
            Mat s(1, 1);
            s(0, 0) = std::exp(iu * kappa * mass * mass * std::sinh(z));
            return s;
        },
        0.0, {{"kappa", kappa}, {"mass", mass}});
}

/// Constant flip S(z) = sign * F, F(v (x) w) = w (x) v.
inline SMatrixModel flip_model(int sign, const ParticleSpectrum& spectrum)
{
    const int d = spectrum.dim;
    Mat f = Mat::Zero(d * d, d * d);
    for (int a = 0; a < d; ++a)
        for (int b = 0; b < d; ++b) f(a * d + b, b * d + a) = static_cast<double>(sign);
    return SMatrixModel(sign > 0 ? "flip+" : "flip-", spectrum, [f](cplx) { return f; },
                        std::numeric_limits<double>::infinity());
}

/// O(N)-sigma-type structural template: the three invariant tensors with
/// caller-supplied analytic coefficients (the paper cites the sigma_i to
/// the literature without printing them).
inline SMatrixModel sigma_template_model(const ParticleSpectrum& spectrum,
                                         std::function<cplx(cplx)> sigma1,
                                         std::function<cplx(cplx)> sigma2,
                                         std::function<cplx(cplx)> sigma3,
                                         double regularity_margin = 0.0)
{
    const int d = spectrum.dim;
    return SMatrixModel(
        "on_sigma_template", spectrum,
        [d, sigma1, sigma2, sigma3](cplx z) {
            const cplx s1 = sigma1(z), s2 = sigma2(z), s3 = sigma3(z);
            Mat s = Mat::Zero(d * d, d * d);
            for (int a = 0; a < d; ++a)
                for (int b = 0; b < d; ++b)
                    for (int c = 0; c < d; ++c)
                        for (int e = 0; e < d; ++e) {
                            cplx v = 0.0;
                            if (a == b && c == e) v += s1;
                            if (a == e && b == c) v += s2;
                            if (a == c && b == e) v += s3;
                            if (v != 0.0) s(a * d + b, c * d + e) = v;
                        }
            return s;
        },
        regularity_margin);
}

// ---------------------------------------------------------------------------
// Axiom verification
// ---------------------------------------------------------------------------

struct AxiomReport {
    double unitarity = 0.0;
    double hermitian_analyticity = 0.0;
    double yang_baxter = 0.0;
    double poincare_mass = 0.0;
    double poincare_conjugation = 0.0;
    double gauge_invariance = 0.0;
    double crossing = 0.0;
    bool gauge_skipped = false;
    int grid_size = 0;
    double tolerance = 0.0;

    double worst() const
    {
        double w = std::max({unitarity, hermitian_analyticity, yang_baxter, poincare_mass,
                             poincare_conjugation, crossing});
        if (!gauge_skipped) w = std::max(w, gauge_invariance);
        return w;
    }
    bool pass() const { return worst() <= tolerance; }
};

inline std::vector<double> uniform_grid(double a, double b, int n)
{
    std::vector<double> g(n);
    for (int i = 0; i < n; ++i) g[i] = a + (b - a) * i / (n - 1.0);
    return g;
}

/// Max residuals of the Def.-3.1 axioms over the sample grid (grid^2 for
/// Yang-Baxter). Crossing is checked through genuine evaluation at
/// i pi - theta; the conjugation symmetry of item d is checked on the
/// real boundary.
inline AxiomReport axiom_residuals(const SMatrixModel& model, const std::vector<double>& grid,
                                   double tol = 1e-10)
{
    if (grid.empty()) throw std::invalid_argument("axiom_residuals: empty grid");
    const int d = model.dim();
    const Mat id = Mat::Identity(d * d, d * d);
    const Mat id1 = Mat::Identity(d, d);
    AxiomReport rep;
    rep.grid_size = static_cast<int>(grid.size());
    rep.tolerance = tol;
    rep.gauge_skipped = model.spectrum().gauge_samples.empty();

    for (double th : grid) {
        const Mat s = model.evaluate(th);
        const Mat sm = model.evaluate(-th);
        rep.unitarity = std::max(rep.unitarity, opnorm(Mat(s.adjoint() * s - id)));
        rep.hermitian_analyticity = std::max(rep.hermitian_analyticity, opnorm(Mat(s * sm - id)));

        const Mat sc = model.evaluate(iu * pi - th);
        for (int a = 0; a < d; ++a)
            for (int b = 0; b < d; ++b)
                for (int c = 0; c < d; ++c)
                    for (int e = 0; e < d; ++e) {
                        const cplx v = s(model.idx(a, b), model.idx(c, e));
                        // item d: mass conservation pattern
                        if (std::abs(model.spectrum().masses[a] - model.spectrum().masses[e]) > 1e-14 ||
                            std::abs(model.spectrum().masses[b] - model.spectrum().masses[c]) > 1e-14)
                            rep.poincare_mass = std::max(rep.poincare_mass, std::abs(v));
                        // item d: S^{ab}_{ce} = S^{conj(e) conj(c)}_{conj(b) conj(a)}
                        const cplx w =
                            s(model.idx(model.conj(e), model.conj(c)), model.idx(model.conj(b), model.conj(a)));
                        rep.poincare_conjugation = std::max(rep.poincare_conjugation, std::abs(v - w));
                        // item f: S^{ab}_{ce}(i pi - th) = S^{conj(c) a}_{e conj(b)}(th)
                        const cplx x = sc(model.idx(a, b), model.idx(c, e));
                        const cplx y = s(model.idx(model.conj(c), a), model.idx(e, model.conj(b)));
                        rep.crossing = std::max(rep.crossing, std::abs(x - y));
                    }

        for (const Mat& g : model.spectrum().gauge_samples) {
            const Mat gg = kron(g, g);
            rep.gauge_invariance = std::max(rep.gauge_invariance, opnorm(Mat(s * gg - gg * s)));
        }
    }

    for (double th : grid)
        for (double tp : grid) {
            const Mat s1 = kron(model.evaluate(th), id1);
            const Mat s2 = kron(id1, model.evaluate(th + tp));
            const Mat s3 = kron(model.evaluate(tp), id1);
            const Mat t1 = kron(id1, model.evaluate(tp));
            const Mat t2 = kron(model.evaluate(th + tp), id1);
            const Mat t3 = kron(id1, model.evaluate(th));
            rep.yang_baxter = std::max(rep.yang_baxter, opnorm(Mat(s1 * s2 * s3 - t1 * t2 * t3)));
        }
    return rep;
}

struct RegularityProbe {
    bool domain_claimed = false; // model declares a margin >= requested eps
    bool bounded = false;
    double sup_estimate = 0.0;
    double growth_ratio = 0.0;          // slice max at Re = theta_max vs theta_max/2
    double boundary_modulus_dev = 0.0;  // deviation of |S| from 1 on Im in {0, pi}
};

/// Samples |S| on the widened strip S(-eps, pi+eps) up to |Re| =
/// theta_max. The growth flag compares the outermost vertical slices; an
/// S-matrix that is bounded on the widened strip has ratio ~ 1 there,
/// while e.g. exp(i kappa m^2 sinh z) grows doubly exponentially.
inline RegularityProbe regularity_probe(const SMatrixModel& model, double eps,
                                        double theta_max = 6.0, int re_samples = 49,
                                        double growth_threshold = 4.0)
{
    RegularityProbe probe;
    probe.domain_claimed = model.regularity_margin() >= eps;
    const std::vector<double> ims = {-eps, -0.5 * eps, 0.0, 0.5 * pi, pi, pi + 0.5 * eps, pi + eps};
    double half_slice = 0.0, full_slice = 0.0;
    for (double im : ims)
        for (int k = 0; k < re_samples; ++k) {
            const double re = -theta_max + 2.0 * theta_max * k / (re_samples - 1.0);
            const double v = opnorm(model.evaluate_raw(cplx(re, im)));
            probe.sup_estimate = std::max(probe.sup_estimate, v);
            if (std::abs(std::abs(re) - 0.5 * theta_max) < theta_max / re_samples)
                half_slice = std::max(half_slice, v);
            if (std::abs(std::abs(re) - theta_max) < theta_max / re_samples)
                full_slice = std::max(full_slice, v);
            if (im == 0.0 || im == pi)
                probe.boundary_modulus_dev = std::max(probe.boundary_modulus_dev, std::abs(v - 1.0));
        }
    probe.growth_ratio = half_slice > 0 ? full_slice / half_slice : 0.0;
    probe.bounded = probe.growth_ratio <= growth_threshold && std::isfinite(probe.sup_estimate);
    return probe;
}

/// A fixture that keeps unitarity, hermitian analyticity and (scalar)
/// Yang-Baxter but violates crossing: S(i pi - th) != S(th). The wedge
/// machinery accepts it, and precisely the crossing-dependent statements
/// (L = -K, field locality) must fail on it.
inline SMatrixModel crossing_violating_model(double slope = 1.0, double mass = 1.0)
{
    return SMatrixModel(
        "noncrossing", ParticleSpectrum::scalar(mass),
        [slope](cplx z) {
            Mat s(1, 1);
            s(0, 0) = std::exp(iu * slope * z);
            return s;
        },
        0.0, {{"slope", slope}, {"mass", mass}});
}

/// A deliberately broken fixture (unitarity and Yang-Baxter both fail):
/// negative control for everything downstream that assumes Def. 3.1.
inline SMatrixModel broken_model(double mass = 1.0)
{
    ParticleSpectrum sp = ParticleSpectrum::uniform(2, mass);
    return SMatrixModel(
        "broken", sp,
        [](cplx z) {
            Mat s = Mat::Zero(4, 4);
            s(0, 0) = 1.1;
            s(1, 1) = 0.3 * std::exp(iu * z);
            s(1, 2) = 0.9;
            s(2, 1) = 0.9;
            s(2, 2) = -0.2;
            s(3, 3) = std::cosh(z * 0.1);
            return s;
        },
        0.0);
}

} // namespace wedgelab::smx
