#pragma once

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "common.hpp"
#include "qracah.hpp"
#include "spectrum.hpp"
#include "tridiag_eig.hpp"

namespace cradle {

// mass-weighted tridiagonal operator of the chain: diag holds b_0..b_N,
// offsq holds u_n = (coupling)^2 with offsq[0] unused. factor_a/factor_c are
// the scaled recurrence factors; they drive the free-free synthesis route.
struct jacobi_matrix {
    int size = 0;  // N + 1
    std::vector<double> diag;
    std::vector<double> offsq;
    std::vector<double> factor_a;
    std::vector<double> factor_c;
    boundary_kind variant = boundary_kind::fixed_fixed;
};

inline q_params params_of(const spectral_design& dz) {
    return q_params{dz.q, dz.qbar, dz.gamma, dz.big_n};
}

inline jacobi_matrix build_jacobi(const spectral_design& dz) {
    const q_params qp = params_of(dz);
    const int n_top = dz.big_n;
    jacobi_matrix jm;
    jm.size = n_top + 1;
    jm.variant = dz.boundary;
    jm.factor_a.resize(n_top + 1);
    jm.factor_c.resize(n_top + 1);
    for (int n = 0; n <= n_top; ++n) {
        const racah_factor_pair fp = racah_factors(n, qp);
        jm.factor_a[n] = dz.scale * fp.a;
        jm.factor_c[n] = dz.scale * fp.c;
    }
    const double x0 = (dz.omega * static_cast<double>(dz.k0)) *
                      (dz.omega * static_cast<double>(dz.k0));
    jm.diag.resize(n_top + 1);
    jm.offsq.assign(n_top + 1, 0.0);
    for (int n = 0; n <= n_top; ++n) jm.diag[n] = x0 - (jm.factor_a[n] + jm.factor_c[n]);
    for (int n = 1; n <= n_top; ++n) jm.offsq[n] = jm.factor_a[n - 1] * jm.factor_c[n];
    // copy the lower half up so the mirror symmetry is exact, not eps-level
    for (int n = 0; n <= n_top; ++n)
        if (n > n_top - n) jm.diag[n] = jm.diag[n_top - n];
    for (int n = 1; n <= n_top; ++n)
        if (n > n_top + 1 - n) jm.offsq[n] = jm.offsq[n_top + 1 - n];
    for (int n = 1; n <= n_top; ++n) {
        if (!(jm.offsq[n] > 0.0) || !std::isfinite(jm.offsq[n]))
            throw validation_error("positivity",
                                   "coupling u_" + std::to_string(n) + " not positive");
    }
    for (int n = 0; n <= n_top; ++n) {
        if (!std::isfinite(jm.diag[n]))
            throw validation_error("positivity",
                                   "diagonal b_" + std::to_string(n) + " not finite");
    }
    return jm;
}

// eigen-decomposition with rows as eigenvectors; rows follow the physical
// sign convention (negative couplings), so row alternation is (-1)^n
struct eigen_system {
    std::vector<double> values;
    std::vector<std::vector<double>> vectors;
};

// recurse to the midpoint, then fill the outer half by the mirror rule; that
// keeps rows exactly consistent with the mirrored matrix entries
inline eigen_system eigensystem_from_nodes(const jacobi_matrix& jm,
                                           const std::vector<double>& nodes,
                                           const std::vector<double>& weights) {
    const int n_top = jm.size - 1;
    const int mid = n_top / 2;
    std::vector<double> su(n_top + 1, 0.0);
    for (int i = 1; i <= n_top; ++i) su[i] = std::sqrt(jm.offsq[i]);

    eigen_system es;
    es.values = nodes;
    es.vectors.assign(n_top + 1, std::vector<double>(n_top + 1, 0.0));
    std::vector<double> phi(n_top + 1, 0.0);
    for (int n = 0; n <= n_top; ++n) {
        const double x = nodes[n];
        std::fill(phi.begin(), phi.end(), 0.0);
        phi[0] = 1.0;
        for (int i = 0; i < mid; ++i) {
            const double nxt =
                (x - jm.diag[i]) * phi[i] - (i >= 1 ? su[i] * phi[i - 1] : 0.0);
            phi[i + 1] = nxt / su[i + 1];
        }
        const double sw = std::sqrt(weights[n]);
        auto& row = es.vectors[n];
        for (int i = 0; i <= mid; ++i) row[i] = (i % 2 ? -sw : sw) * phi[i];
        for (int i = mid + 1; i <= n_top; ++i)
            row[i] = (n % 2 ? -row[n_top - i] : row[n_top - i]);
        if (n_top % 2 == 0 && n % 2 == 1) row[mid] = 0.0;
    }
    return es;
}

inline eigen_system eigensystem_analytic(const jacobi_matrix& jm, const spectral_design& dz) {
    const weight_table wt = make_weight_table(params_of(dz), dz.boundary);
    return eigensystem_from_nodes(jm, eigenvalues(dz), wt.weights);
}

inline eigen_system eigensystem_numeric(const jacobi_matrix& jm) {
    eigen_system es;
    es.values = bisect_eigenvalues(jm.diag, jm.offsq);
    es.vectors = inverse_iteration_vectors(jm.diag, jm.offsq, es.values);
    for (auto& row : es.vectors) {
        if (row[0] < 0.0)
            for (double& t : row) t = -t;
    }
    return es;
}

// relative mirror-symmetry defect; zero for anything build_jacobi produced,
// informative for matrices coming back from surgery or chain readback
inline double persymmetry_defect(const jacobi_matrix& jm) {
    const int n_top = jm.size - 1;
    double bmax = 0.0, umax = 0.0, db = 0.0, du = 0.0;
    for (int n = 0; n <= n_top; ++n) {
        bmax = std::max(bmax, std::abs(jm.diag[n]));
        db = std::max(db, std::abs(jm.diag[n] - jm.diag[n_top - n]));
    }
    for (int n = 1; n <= n_top; ++n) {
        umax = std::max(umax, jm.offsq[n]);
        du = std::max(du, std::abs(jm.offsq[n] - jm.offsq[n_top + 1 - n]));
    }
    double rel = 0.0;
    if (bmax > 0.0) rel = std::max(rel, db / bmax);
    if (umax > 0.0) rel = std::max(rel, du / umax);
    return rel;
}

}  // namespace cradle
