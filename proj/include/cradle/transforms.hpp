#pragma once

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "common.hpp"
#include "jacobi.hpp"
#include "qracah.hpp"
#include "synthesis.hpp"
#include "tridiag_eig.hpp"

namespace cradle {

struct deformation_params {
    double alpha = 0.5;
    double theta = 0.0;  // sin 2theta = 1 - 2 alpha, cos 2theta = 2 sqrt(alpha(1-alpha))
    int j = 0;           // middle index: N = 2j+1 odd, N = 2j even
};

inline deformation_params make_deformation(double alpha, int big_n) {
    if (!(alpha > 0.0 && alpha < 1.0))
        throw validation_error("alpha-range", "alpha must lie strictly inside (0,1)");
    deformation_params dp;
    dp.alpha = alpha;
    dp.theta = 0.5 * std::atan2(1.0 - 2.0 * alpha, 2.0 * std::sqrt(alpha * (1.0 - alpha)));
    dp.j = big_n % 2 ? (big_n - 1) / 2 : big_n / 2;
    return dp;
}

// isospectral central pinch; only the middle entries move
inline jacobi_matrix deform_jacobi(const jacobi_matrix& jm, double alpha) {
    make_deformation(alpha, jm.size - 1);
    const int n_top = jm.size - 1;
    jacobi_matrix out = jm;
    // the recurrence factors describe the undeformed operator only
    out.factor_a.clear();
    out.factor_c.clear();
    const double beta = 1.0 - 2.0 * alpha;
    if (n_top % 2 == 1) {
        const int j = (n_top - 1) / 2;
        out.offsq[j + 1] = 4.0 * alpha * (1.0 - alpha) * jm.offsq[j + 1];
        out.diag[j] = jm.diag[j] - beta * std::sqrt(jm.offsq[j + 1]);
        out.diag[j + 1] = jm.diag[j + 1] + beta * std::sqrt(jm.offsq[j + 1]);
    } else if (n_top >= 2) {
        const int j = n_top / 2;
        out.offsq[j] = 2.0 * (1.0 - alpha) * jm.offsq[j];
        out.offsq[j + 1] = 2.0 * alpha * jm.offsq[j];
    }
    return out;
}

// same eigenvalues, rows rescaled half-by-half; the mirror structure of the
// source rows makes the rescaled rows come out unit automatically
inline eigen_system deform_eigensystem(const eigen_system& es, double alpha) {
    const int n_top = static_cast<int>(es.values.size()) - 1;
    make_deformation(alpha, n_top);
    const double beta = 1.0 - 2.0 * alpha;
    eigen_system out = es;
    for (int n = 0; n <= n_top; ++n) {
        const double sgn = n % 2 ? -1.0 : 1.0;
        const double fplus = std::sqrt(1.0 + sgn * beta);
        const double fminus = std::sqrt(1.0 - sgn * beta);
        for (int i = 0; i <= n_top; ++i) {
            if (n_top % 2 == 1) {
                out.vectors[n][i] *= (i <= (n_top - 1) / 2) ? fplus : fminus;
            } else {
                const int j = n_top / 2;
                out.vectors[n][i] *= (i < j) ? fplus : (i == j ? 1.0 : fminus);
            }
        }
    }
    return out;
}

inline chain_spec deform_chain(const chain_spec& ch, double alpha) {
    const int n_top = chain_order(ch);
    make_deformation(alpha, n_top);
    if (ch.alpha != 0.5)
        throw validation_error("alpha-source", "source chain is already deformed");
    const double ratio = alpha / (1.0 - alpha);
    chain_spec out = ch;
    out.alpha = alpha;
    std::vector<double> k = full_springs(ch);
    if (n_top % 2 == 1) {
        const int j = (n_top - 1) / 2;
        for (int i = j + 1; i <= n_top; ++i) out.masses[i] = ratio * ch.masses[i];
        k[j + 1] *= 2.0 * alpha;
        for (int i = j + 2; i < static_cast<int>(k.size()); ++i) k[i] *= ratio;
    } else {
        const int j = n_top / 2;
        out.masses[j] = ch.masses[j] / (2.0 * (1.0 - alpha));
        for (int i = j + 1; i <= n_top; ++i) out.masses[i] = ratio * ch.masses[i];
        for (int i = j + 1; i < static_cast<int>(k.size()); ++i) k[i] *= ratio;
    }
    if (ch.boundary == boundary_kind::fixed_fixed) {
        out.springs = k;
    } else {
        out.springs.assign(k.begin() + 1, k.end() - 1);
    }
    require_positive_chain(out);
    return out;
}

// one-angle reflection: identity-like outside the mirrored (i, N-i) planes,
// V^2 = I, V = V^T; alpha = 1/2 collapses to the plain antidiagonal flip
inline std::vector<std::vector<double>> deformation_reflection(int big_n, double alpha) {
    make_deformation(alpha, big_n);
    const double s = (std::sqrt(1.0 - alpha) - std::sqrt(alpha)) / std::sqrt(2.0);
    const double c = (std::sqrt(1.0 - alpha) + std::sqrt(alpha)) / std::sqrt(2.0);
    std::vector<std::vector<double>> v(big_n + 1, std::vector<double>(big_n + 1, 0.0));
    for (int i = 0; i <= big_n; ++i) {
        if (2 * i < big_n)
            v[i][i] = s;
        else if (2 * i == big_n)
            v[i][i] = 1.0;
        else
            v[i][i] = -s;
        if (2 * i != big_n) v[i][big_n - i] = c;
    }
    return v;
}

// one Christoffel step in ratio form, kept as a diagnostic: the forward
// recurrence is exact until P_n(x_k) collapses toward zero, which happens
// structurally (even order, odd mode index) and numerically (top of the
// spectrum); production surgery rebuilds from the surgered measure instead
struct christoffel_step {
    double removed = 0.0;
    std::vector<double> ratios;  // E_n = P_{n+1}(x_k) / P_n(x_k)
    std::vector<double> diag;    // shrunk entries, valid only if !failed
    std::vector<double> offsq;
    bool failed = false;
};

inline christoffel_step christoffel_ratios(const jacobi_matrix& jm, double xk) {
    const int n_top = jm.size - 1;
    christoffel_step cs;
    cs.removed = xk;
    cs.ratios.assign(n_top + 1, 0.0);
    double scale = std::abs(xk);
    for (int n = 0; n <= n_top; ++n) scale = std::max(scale, std::abs(jm.diag[n]));
    cs.ratios[0] = xk - jm.diag[0];
    if (std::abs(cs.ratios[0]) < 1e-12 * scale) cs.failed = true;
    for (int n = 1; n <= n_top && !cs.failed; ++n) {
        cs.ratios[n] = (xk - jm.diag[n]) - jm.offsq[n] / cs.ratios[n - 1];
        if (std::abs(cs.ratios[n]) < 1e-12 * scale) cs.failed = true;
    }
    if (cs.failed) return cs;
    cs.diag.resize(n_top);
    cs.offsq.assign(n_top, 0.0);
    for (int n = 0; n < n_top; ++n)
        cs.diag[n] = jm.diag[n + 1] + cs.ratios[n + 1] - cs.ratios[n];
    for (int n = 1; n < n_top; ++n)
        cs.offsq[n] = jm.offsq[n] * cs.ratios[n] / cs.ratios[n - 1];
    return cs;
}

// result of spectral surgery; table.grid holds the kept spectral nodes (the
// matrix-scale eigenvalues), not the dimensionless lattice
struct surgery_result {
    weight_table table;
    jacobi_matrix matrix;
    std::vector<int> kept;
    double normalization = 0.0;
    bool pst_candidate = true;
};

namespace detail {

inline surgery_result rebuild_from_measure(const std::vector<double>& nodes,
                                           const std::vector<double>& raw_weights,
                                           const std::vector<int>& kept,
                                           boundary_kind variant) {
    double sum = 0.0;
    for (double w : raw_weights) sum += w;
    surgery_result sr;
    sr.normalization = 1.0 / sum;
    sr.kept = kept;
    sr.table.grid = nodes;
    sr.table.weights.resize(raw_weights.size());
    for (std::size_t i = 0; i < raw_weights.size(); ++i) {
        sr.table.weights[i] = raw_weights[i] * sr.normalization;
        if (!(sr.table.weights[i] > 0.0))
            throw validation_error("weight-positivity", "surgered weight not positive");
    }
    auto [a, u] = jacobi_from_measure(nodes, sr.table.weights);
    sr.matrix.size = static_cast<int>(nodes.size());
    sr.matrix.diag = std::move(a);
    sr.matrix.offsq = std::move(u);
    sr.matrix.variant = variant;
    sr.pst_candidate = persymmetry_defect(sr.matrix) <= 1e-9;
    return sr;
}

}  // namespace detail

inline surgery_result surgery_remove_pair(const weight_table& wt,
                                          const std::vector<double>& nodes,
                                          const jacobi_matrix& jm, int k) {
    const int n_top = jm.size - 1;
    if (k < 0 || k > n_top - 1)
        throw validation_error("surgery-index", "pair index out of range");
    if (n_top < 3)
        throw validation_error("surgery-size", "chain too short to lose a pair");
    std::vector<double> kept_nodes, raw;
    std::vector<int> kept;
    for (int s = 0; s <= n_top; ++s) {
        if (s == k || s == k + 1) continue;
        kept.push_back(s);
        kept_nodes.push_back(nodes[s]);
        raw.push_back((nodes[s] - nodes[k]) * (nodes[s] - nodes[k + 1]) * wt.weights[s]);
    }
    return detail::rebuild_from_measure(kept_nodes, raw, kept, jm.variant);
}

inline surgery_result surgery_remove_end(const weight_table& wt,
                                         const std::vector<double>& nodes,
                                         const jacobi_matrix& jm, int k) {
    const int n_top = jm.size - 1;
    if (k != 0 && k != n_top)
        throw validation_error("surgery-interior",
                               "single removal keeps weights positive only at the ends");
    if (n_top < 2)
        throw validation_error("surgery-size", "chain too short to lose a point");
    std::vector<double> kept_nodes, raw;
    std::vector<int> kept;
    const double sign = k == 0 ? 1.0 : -1.0;
    for (int s = 0; s <= n_top; ++s) {
        if (s == k) continue;
        kept.push_back(s);
        kept_nodes.push_back(nodes[s]);
        raw.push_back(sign * (nodes[s] - nodes[k]) * wt.weights[s]);
    }
    surgery_result sr = detail::rebuild_from_measure(kept_nodes, raw, kept, jm.variant);
    sr.normalization *= sign;
    return sr;
}

}  // namespace cradle
