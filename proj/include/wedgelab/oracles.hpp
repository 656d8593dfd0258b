#pragma once

#include "wedgelab/fock.hpp"

#include <map>

namespace wedgelab::oracles {

/// Independent CCR/CAR reference construction: occupation-number second
/// quantization over the orthonormal modes e_u / sqrt(w_u), mapped onto
/// grid tensors by the standard (anti)symmetrized basis. No
/// permutation-group averaging and no S-matrix machinery ever enters;
/// agreement with the S = +-1 Fock operators is a genuine cross-check.
struct OccupationOracle {
    const fock::GridSpec& g;
    int n_max;
    int sign; // +1 bosonic, -1 fermionic
    std::vector<std::vector<int>> states;
    std::map<std::vector<int>, int> index;

    OccupationOracle(const fock::GridSpec& gg, int nmax, int s) : g(gg), n_max(nmax), sign(s)
    {
        std::vector<int> occ(g.sites(), 0);
        enumerate(occ, 0, 0);
    }

    void enumerate(std::vector<int>& occ, int site, int total)
    {
        if (site == g.sites()) {
            index[occ] = static_cast<int>(states.size());
            states.push_back(occ);
            return;
        }
        const int cap = sign > 0 ? n_max - total : std::min(1, n_max - total);
        for (int k = 0; k <= cap; ++k) {
            occ[site] = k;
            enumerate(occ, site + 1, total + k);
            occ[site] = 0;
        }
    }

    int total(const std::vector<int>& occ) const
    {
        int t = 0;
        for (int k : occ) t += k;
        return t;
    }

    /// b_u^dagger with the usual sqrt factors; Jordan-Wigner signs in the
    /// fermionic case.
    Mat creator(int u) const
    {
        Mat b = Mat::Zero(states.size(), states.size());
        for (std::size_t j = 0; j < states.size(); ++j) {
            std::vector<int> occ = states[j];
            if (total(occ) + 1 > n_max) continue;
            if (sign < 0 && occ[u] == 1) continue;
            double fac = std::sqrt(occ[u] + 1.0);
            if (sign < 0) {
                int swaps = 0;
                for (int v = 0; v < u; ++v) swaps += occ[v];
                fac *= (swaps % 2 == 0) ? 1.0 : -1.0;
            }
            occ[u] += 1;
            b(index.at(occ), j) = fac;
        }
        return b;
    }

    /// Weighted isometry onto the grid-tensor Fock space: occupation
    /// states map to normalized (anti)symmetrized mode tensors.
    Mat embedding(const fock::FockSpace& fs) const
    {
        Mat t = Mat::Zero(fs.dim_total(), states.size());
        for (std::size_t j = 0; j < states.size(); ++j) {
            const auto& occ = states[j];
            std::vector<int> modes;
            for (int u = 0; u < g.sites(); ++u)
                for (int k = 0; k < occ[u]; ++k) modes.push_back(u);
            const int n = static_cast<int>(modes.size());
            double multfact = 1.0;
            for (int u = 0; u < g.sites(); ++u)
                for (int k = 2; k <= occ[u]; ++k) multfact *= k;
            double nfact = 1.0;
            for (int k = 2; k <= n; ++k) nfact *= k;
            std::sort(modes.begin(), modes.end());
            Vec sector = Vec::Zero(fs.dim(n));
            do {
                double sgn = 1.0;
                if (sign < 0) {
                    int inv = 0;
                    for (int a = 0; a < n; ++a)
                        for (int b = a + 1; b < n; ++b)
                            if (modes[a] > modes[b]) ++inv;
                    sgn = (inv % 2 == 0) ? 1.0 : -1.0;
                }
                long long flat = 0;
                double wprod = 1.0;
                for (int a = 0; a < n; ++a) {
                    flat = flat * g.sites() + modes[a];
                    wprod *= std::sqrt(g.weights[g.site_node(modes[a])]);
                }
                sector(flat) += sgn * std::sqrt(multfact / nfact) / wprod;
            } while (std::next_permutation(modes.begin(), modes.end()));
            t.block(fs.offset(n), j, fs.dim(n), 1) = sector;
        }
        return t;
    }

    /// Max deviation of the FockSpace creation operator from the
    /// occupation-basis one through the embedding.
    double creation_equality(const fock::FockSpace& fs, const Vec& phi) const
    {
        const Mat t = embedding(fs);
        Mat b = Mat::Zero(t.cols(), t.cols());
        for (int u = 0; u < g.sites(); ++u)
            b += phi(u) * std::sqrt(g.weights[g.site_node(u)]) * creator(u);
        return max_abs(Mat(fs.z_dagger(phi) * t - t * b));
    }
};

} // namespace wedgelab::oracles
