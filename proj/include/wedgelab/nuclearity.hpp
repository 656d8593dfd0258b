#pragma once

#include "wedgelab/wedgefield.hpp"

namespace wedgelab::nuc {

using onep::RapidityFunction;

/// A generator of the wedge algebra at desk scale: a scaled monomial in
/// creation operators with closed-form Hardy-class arguments, A =
/// coeff * zd(xi_1)...zd(xi_k) (k = 0 is a multiple of the identity).
struct Generator {
    cplx coeff = 1.0;
    std::vector<RapidityFunction> xis;
    int degree() const { return static_cast<int>(xis.size()); }
};

/// Xi_S(s) A = Delta^{1/4} U_S(s) A Omega: per-particle damping
/// exp(-m_a s cosh theta_k) times the wave function continued to the
/// line Im = -pi/2, sampled on the grid. The continuation is done in
/// closed form per generator (inputs evaluated at theta - i pi/2; the
/// S-factor arguments stay real).
inline Vec xi_apply(const fock::FockSpace& fs, const Generator& gen, double s)
{
    const int k = gen.degree();
    if (k > fs.n_max()) throw std::invalid_argument("xi_apply: generator degree exceeds truncation");
    const Vec shifted = wfield::product_state(fs, gen.xis, -iu * pi / 2.0);
    Vec out = Vec::Zero(fs.dim_total());
    Vec sector = fs.sector_of(shifted, k);
    const auto& g = fs.grid();
    for (long long x = 0; x < fs.dim(k); ++x) {
        double damp = 1.0;
        long long t = x;
        for (int l = 0; l < k; ++l) {
            const int u = static_cast<int>(t % g.sites());
            t /= g.sites();
            damp *= std::exp(-fs.model().spectrum().masses[g.site_comp(u)] * s *
                             std::cosh(g.nodes[g.site_node(u)]));
        }
        sector(x) *= damp;
    }
    out.segment(fs.offset(k), fs.dim(k)) = gen.coeff * sector;
    return out;
}

/// Independent route: the permutation-sum assembly of the continued wave
/// function instead of the operator machinery.
inline Vec xi_apply_symbolic(const fock::FockSpace& fs, const Generator& gen, double s)
{
    const int k = gen.degree();
    Vec sector = wfield::product_state_symbolic(fs, gen.xis, -iu * pi / 2.0);
    const auto& g = fs.grid();
    for (long long x = 0; x < fs.dim(k); ++x) {
        double damp = 1.0;
        long long t = x;
        for (int l = 0; l < k; ++l) {
            const int u = static_cast<int>(t % g.sites());
            t /= g.sites();
            damp *= std::exp(-fs.model().spectrum().masses[g.site_comp(u)] * s *
                             std::cosh(g.nodes[g.site_node(u)]));
        }
        sector(x) *= damp;
    }
    Vec out = Vec::Zero(fs.dim_total());
    out.segment(fs.offset(k), fs.dim(k)) = gen.coeff * sector;
    return out;
}

struct SingularValueReport {
    std::vector<double> sigmas;   // descending
    double gram_condition = 1.0;
    bool rank_deficient = false;
    double nuclear_norm() const
    {
        double t = 0.0;
        for (double s : sigmas) t += s;
        return t;
    }
};

namespace detail {

/// X scaled to orthonormal family coordinates: X G^{-1/2} with the Gram
/// matrix of the generators in the vacuum (GNS) inner product; singular
/// values are then invariant under re-parametrizations of the family.
inline std::pair<Mat, SingularValueReport> family_matrix(const fock::FockSpace& fs,
                                                         const std::vector<Generator>& family,
                                                         double s)
{
    const int nfam = static_cast<int>(family.size());
    Mat x(fs.dim_total(), nfam);
    Mat states(fs.dim_total(), nfam);
    for (int j = 0; j < nfam; ++j) {
        x.col(j) = xi_apply(fs, family[j], s);
        states.col(j) = family[j].coeff * wfield::product_state(fs, family[j].xis);
    }
    for (long long r = 0; r < fs.dim_total(); ++r) {
        const double sw = std::sqrt(fs.weights()(r));
        x.row(r) *= sw;
        states.row(r) *= sw;
    }
    const Mat gram = states.adjoint() * states;
    Eigen::SelfAdjointEigenSolver<Mat> es(gram);
    SingularValueReport rep;
    const auto& ev = es.eigenvalues();
    const double emax = ev.maxCoeff();
    Eigen::VectorXd inv_sqrt = Eigen::VectorXd::Zero(ev.size());
    for (int i = 0; i < ev.size(); ++i) {
        if (ev(i) > 1e-12 * emax) {
            inv_sqrt(i) = 1.0 / std::sqrt(ev(i));
        } else {
            rep.rank_deficient = true;
        }
    }
    const double emin = ev.minCoeff();
    rep.gram_condition = emin > 0 ? emax / emin : std::numeric_limits<double>::infinity();
    const Mat gsqrt_inv = es.eigenvectors() * inv_sqrt.asDiagonal() * es.eigenvectors().adjoint();
    return {Mat(x * gsqrt_inv), rep};
}

} // namespace detail

inline SingularValueReport singular_values(const fock::FockSpace& fs,
                                           const std::vector<Generator>& family, double s)
{
    auto [xg, rep] = detail::family_matrix(fs, family, s);
    Eigen::JacobiSVD<Mat> svd(xg);
    for (int i = 0; i < svd.singularValues().size(); ++i)
        rep.sigmas.push_back(svd.singularValues()(i));
    return rep;
}

struct ScanRow {
    double s = 0.0;
    double total = 0.0;               // truncated nuclear-norm estimate
    std::vector<double> per_sector;   // sum of singular values per particle sector
};

/// Nuclear-norm estimates along an s-grid, with the per-sector breakdown
/// that exhibits the damping-driven decay in the particle number.
inline std::vector<ScanRow> nuclear_norm_scan(const fock::FockSpace& fs,
                                              const std::vector<Generator>& family,
                                              const std::vector<double>& s_grid)
{
    std::vector<ScanRow> rows;
    for (double s : s_grid) {
        auto [xg, rep] = detail::family_matrix(fs, family, s);
        ScanRow row;
        row.s = s;
        Eigen::JacobiSVD<Mat> svd(xg);
        for (int i = 0; i < svd.singularValues().size(); ++i) row.total += svd.singularValues()(i);
        for (int n = 0; n <= fs.n_max(); ++n) {
            const Mat blk = xg.block(fs.offset(n), 0, fs.dim(n), xg.cols());
            Eigen::JacobiSVD<Mat> bs(blk);
            double t = 0.0;
            for (int i = 0; i < bs.singularValues().size(); ++i) t += bs.singularValues()(i);
            row.per_sector.push_back(t);
        }
        rows.push_back(std::move(row));
    }
    return rows;
}

} // namespace wedgelab::nuc
