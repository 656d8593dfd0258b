#pragma once

#include <Eigen/Dense>
#include <Eigen/SVD>
#include <cmath>
#include <complex>
#include <cstdint>
#include <functional>
#include <numbers>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

namespace wedgelab {

using cplx = std::complex<double>;
using Vec = Eigen::VectorXcd;
using Mat = Eigen::MatrixXcd;
using RVec = Eigen::VectorXd;
using RMat = Eigen::MatrixXd;

inline constexpr double pi = std::numbers::pi;
inline constexpr cplx iu{0.0, 1.0};

// Tolerance ladder: plain grid algebra vs anything routed through one
// analytic continuation plus quadrature.
struct Tolerances {
    double algebraic = 1e-9;
    double rounding = 1e-12;
    double quadrature = 1e-6;
};

/// Deterministic RNG. mt19937_64 output is standard-specified, and the
/// uniform draw below avoids the implementation-defined std::
/// distributions, so streams are reproducible across toolchains.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : eng_(seed) {}

    double uniform() { return static_cast<double>(eng_() >> 11) * 0x1.0p-53; }
    double uniform(double a, double b) { return a + (b - a) * uniform(); }
    // Marsaglia polar would need rejection; Box-Muller is branch-free.
    double normal()
    {
        double u1 = uniform();
        while (u1 <= 1e-300) u1 = uniform();
        const double u2 = uniform();
        return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * pi * u2);
    }
    cplx cnormal() { return {normal(), normal()}; }
    std::uint64_t bits() { return eng_(); }
    int index(int n) { return static_cast<int>(bits() % static_cast<std::uint64_t>(n)); }

private:
    std::mt19937_64 eng_;
};

inline Mat random_matrix(Rng& rng, int rows, int cols, double scale = 1.0)
{
    Mat a(rows, cols);
    for (int i = 0; i < rows; ++i)
        for (int j = 0; j < cols; ++j) a(i, j) = scale * rng.cnormal();
    return a;
}

inline Vec random_vector(Rng& rng, int n, double scale = 1.0)
{
    Vec v(n);
    for (int i = 0; i < n; ++i) v(i) = scale * rng.cnormal();
    return v;
}

/// Random unitary via Householder QR of a Ginibre matrix.
inline Mat random_unitary(Rng& rng, int n)
{
    const Mat a = random_matrix(rng, n, n);
    Eigen::HouseholderQR<Mat> qr(a);
    Mat q = qr.householderQ();
    const Mat r = qr.matrixQR().triangularView<Eigen::Upper>();
    for (int j = 0; j < n; ++j) {
        const cplx d = r(j, j);
        q.col(j) *= (std::abs(d) > 0 ? d / std::abs(d) : cplx(1.0));
    }
    return q;
}

/// Operator (spectral) norm; residuals in the reports are measured in it.
inline double opnorm(const Mat& a)
{
    if (a.rows() == 0 || a.cols() == 0) return 0.0;
    Eigen::JacobiSVD<Mat> svd(a);
    return svd.singularValues()(0);
}

inline double max_abs(const Mat& a)
{
    return a.size() == 0 ? 0.0 : a.cwiseAbs().maxCoeff();
}

inline Mat kron(const Mat& a, const Mat& b)
{
    Mat out(a.rows() * b.rows(), a.cols() * b.cols());
    for (int i = 0; i < a.rows(); ++i)
        for (int j = 0; j < a.cols(); ++j)
            out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    return out;
}

// ---------------------------------------------------------------------------
// Quadrature
// ---------------------------------------------------------------------------

struct QuadratureRule {
    std::vector<double> nodes;
    std::vector<double> weights;
    std::size_t size() const { return nodes.size(); }
};

/// Gauss-Legendre nodes/weights on [-1,1] by Newton iteration on P_n.
inline QuadratureRule gauss_legendre(int n)
{
    QuadratureRule rule;
    rule.nodes.resize(n);
    rule.weights.resize(n);
    for (int i = 0; i < (n + 1) / 2; ++i) {
        double x = std::cos(pi * (i + 0.75) / (n + 0.5));
        double dp = 0.0;
        for (int it = 0; it < 100; ++it) {
            double p0 = 1.0, p1 = x;
            for (int k = 2; k <= n; ++k) {
                const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
                p0 = p1;
                p1 = p2;
            }
            dp = n * (x * p1 - p0) / (x * x - 1.0);
            const double dx = p1 / dp;
            x -= dx;
            if (std::abs(dx) < 1e-15) break;
        }
        rule.nodes[i] = -x;
        rule.nodes[n - 1 - i] = x;
        const double w = 2.0 / ((1.0 - x * x) * dp * dp);
        rule.weights[i] = w;
        rule.weights[n - 1 - i] = w;
    }
    return rule;
}

/// Composite Gauss-Legendre on [a,b] with `panels` equal panels of
/// `per_panel` nodes each.
inline QuadratureRule composite_gauss_legendre(double a, double b, int panels, int per_panel)
{
    if (!(b > a) || panels < 1 || per_panel < 1)
        throw std::invalid_argument("composite_gauss_legendre: bad arguments");
    const QuadratureRule base = gauss_legendre(per_panel);
    QuadratureRule rule;
    const double h = (b - a) / panels;
    for (int p = 0; p < panels; ++p) {
        const double lo = a + p * h;
        for (std::size_t k = 0; k < base.size(); ++k) {
            rule.nodes.push_back(lo + 0.5 * h * (base.nodes[k] + 1.0));
            rule.weights.push_back(0.5 * h * base.weights[k]);
        }
    }
    return rule;
}

template <typename F>
cplx integrate(const QuadratureRule& q, F&& f)
{
    cplx acc = 0.0;
    for (std::size_t k = 0; k < q.size(); ++k) acc += q.weights[k] * f(q.nodes[k]);
    return acc;
}

inline long long binomial(int n, int k)
{
    if (k < 0 || k > n) return 0;
    long long r = 1;
    for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
    return r;
}

} // namespace wedgelab
