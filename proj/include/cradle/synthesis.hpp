#pragma once

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "common.hpp"
#include "jacobi.hpp"
#include "spectrum.hpp"
#include "tridiag_eig.hpp"

namespace cradle {

// physical chain: masses m_0..m_N and springs (fixed ends K_0..K_{N+1},
// free ends K_1..K_N only; end anchors are implicitly zero there)
struct chain_spec {
    boundary_kind boundary = boundary_kind::fixed_fixed;
    std::vector<double> masses;
    std::vector<double> springs;
    double alpha = 0.5;
    double omega = 1.0;
};

inline int chain_order(const chain_spec& ch) {
    return static_cast<int>(ch.masses.size()) - 1;
}

// always K_0..K_{N+1}, padding zero anchors for free ends
inline std::vector<double> full_springs(const chain_spec& ch) {
    if (ch.boundary == boundary_kind::fixed_fixed) return ch.springs;
    std::vector<double> k(ch.springs.size() + 2, 0.0);
    std::copy(ch.springs.begin(), ch.springs.end(), k.begin() + 1);
    return k;
}

inline void require_positive_chain(const chain_spec& ch) {
    if (ch.masses.empty()) throw validation_error("masses", "empty mass list");
    const std::size_t want =
        ch.boundary == boundary_kind::fixed_fixed ? ch.masses.size() + 1 : ch.masses.size() - 1;
    if (ch.springs.size() != want)
        throw validation_error("springs", "spring count does not match boundary and order");
    for (double m : ch.masses)
        if (!(m > 0.0) || !std::isfinite(m))
            throw validation_error("masses", "nonpositive mass in chain");
    for (double k : ch.springs)
        if (!(k > 0.0) || !std::isfinite(k))
            throw validation_error("springs", "nonpositive spring in chain");
}

// even-mode resolvent column; the fixed-end synthesis runs entirely off it
inline std::vector<double> gamma_vector(const eigen_system& es) {
    const int n_top = static_cast<int>(es.values.size()) - 1;
    std::vector<double> g(n_top + 1, 0.0);
    for (int n = 0; n <= n_top; n += 2) {
        if (!(es.values[n] > 0.0))
            throw validation_error("zero-eigenvalue",
                                   "zero mode present; use the free-free synthesis");
        const double c = es.vectors[n][0] / es.values[n];
        for (int i = 0; i <= n_top; ++i) g[i] += es.vectors[n][i] * c;
    }
    return g;
}

inline chain_spec synthesize_fixed_fixed(const eigen_system& es, const jacobi_matrix& jm,
                                         double m0 = 1.0, double omega = 1.0) {
    const int n_top = jm.size - 1;
    const std::vector<double> g = gamma_vector(es);
    chain_spec ch;
    ch.boundary = boundary_kind::fixed_fixed;
    ch.omega = omega;
    ch.masses.resize(n_top + 1);
    for (int i = 0; i <= n_top; ++i) {
        const double ratio = g[i] / g[0];
        ch.masses[i] = m0 * ratio * ratio;
    }
    ch.springs.assign(n_top + 2, 0.0);
    ch.springs[0] = ch.springs[n_top + 1] = m0 / (2.0 * g[0]);
    for (int i = 1; i <= n_top; ++i)
        ch.springs[i] = std::sqrt(jm.offsq[i]) * std::sqrt(ch.masses[i - 1] * ch.masses[i]);
    require_positive_chain(ch);
    return ch;
}

// continued-fraction tail of the recurrence; for the designed matrices this
// equals -factor_a term by term, which is what the factor route exploits
inline std::vector<double> ladder_values(const jacobi_matrix& jm) {
    const int n_top = jm.size - 1;
    std::vector<double> y(n_top + 1, 0.0);
    y[0] = jm.diag[0];
    for (int i = 1; i <= n_top; ++i) y[i] = jm.diag[i] - jm.offsq[i] / y[i - 1];
    return y;
}

namespace detail {

inline chain_spec free_chain_from_ladder(const jacobi_matrix& jm,
                                         const std::vector<double>& y, double m0,
                                         double omega) {
    if (jm.variant != boundary_kind::free_free)
        throw validation_error("boundary", "free-free synthesis needs a free-free design");
    const int n_top = jm.size - 1;
    chain_spec ch;
    ch.boundary = boundary_kind::free_free;
    ch.omega = omega;
    ch.masses.assign(n_top + 1, 0.0);
    ch.masses[0] = m0;
    ch.springs.assign(n_top, 0.0);
    for (int i = 1; i <= n_top; ++i) {
        ch.masses[i] = ch.masses[i - 1] * y[i - 1] * y[i - 1] / jm.offsq[i];
        ch.springs[i - 1] = y[i - 1] * ch.masses[i - 1];
    }
    require_positive_chain(ch);
    return ch;
}

}  // namespace detail

// production route: ladder values taken from the recurrence factors directly,
// which stays accurate where the raw continued fraction loses digits
inline chain_spec synthesize_free_free(const jacobi_matrix& jm, double m0 = 1.0,
                                       double omega = 1.0) {
    const int n_top = jm.size - 1;
    if (static_cast<int>(jm.factor_a.size()) != jm.size)
        throw validation_error("factors",
                               "recurrence factors unavailable; use the ladder route");
    std::vector<double> y(n_top + 1, 0.0);
    for (int i = 0; i <= n_top; ++i) y[i] = -jm.factor_a[i];
    return detail::free_chain_from_ladder(jm, y, m0, omega);
}

inline chain_spec synthesize_free_free_ladder(const jacobi_matrix& jm, double m0 = 1.0,
                                              double omega = 1.0) {
    return detail::free_chain_from_ladder(jm, ladder_values(jm), m0, omega);
}

// fully closed form: mass ratios as products of q-shifted factorials
inline chain_spec synthesize_free_free_closed(const spectral_design& dz, double m0 = 1.0) {
    if (dz.boundary != boundary_kind::free_free)
        throw validation_error("boundary", "closed-form synthesis needs a free-free design");
    const int n_top = dz.big_n;
    const double q = dz.q;
    const double sq = std::sqrt(q);
    const double qmn = std::pow(q, -n_top);
    chain_spec ch;
    ch.boundary = boundary_kind::free_free;
    ch.omega = dz.omega;
    ch.masses.assign(n_top + 1, 0.0);
    ch.springs.assign(n_top, 0.0);
    for (int i = 0; i <= n_top; ++i) {
        const double num = q_pochhammer(sq, q, i) * q_pochhammer(-sq, q, i) *
                           q_pochhammer(qmn, q, i) * q_pochhammer(-qmn, q, i);
        const double den = q_pochhammer(q, q, i) * q_pochhammer(-q, q, i) *
                           q_pochhammer(qmn * sq, q, i) * q_pochhammer(-qmn * sq, q, i);
        ch.masses[i] = m0 * num / den * (1.0 + std::pow(q, 2 * i - n_top)) / (1.0 + qmn);
    }
    const double fac = dz.omega * dz.omega /
                       (4.0 * (static_cast<double>(dz.r) * dz.r - 1.0));
    for (int i = 1; i <= n_top; ++i) {
        ch.springs[i - 1] = fac * ch.masses[i] * (1.0 - std::pow(q, 2 * i)) *
                            (std::pow(q, 2 * i - 2 * n_top - 1) - 1.0) /
                            ((1.0 + std::pow(q, 2 * i - n_top - 1)) *
                             (1.0 + std::pow(q, 2 * i - n_top)));
    }
    require_positive_chain(ch);
    return ch;
}

inline jacobi_matrix chain_to_jacobi(const chain_spec& ch) {
    require_positive_chain(ch);
    const int n_top = chain_order(ch);
    const std::vector<double> k = full_springs(ch);
    jacobi_matrix jm;
    jm.size = n_top + 1;
    jm.variant = ch.boundary;
    jm.diag.resize(n_top + 1);
    jm.offsq.assign(n_top + 1, 0.0);
    for (int i = 0; i <= n_top; ++i) jm.diag[i] = (k[i] + k[i + 1]) / ch.masses[i];
    for (int i = 1; i <= n_top; ++i)
        jm.offsq[i] = k[i] * k[i] / (ch.masses[i - 1] * ch.masses[i]);
    return jm;
}

// interleaved entries sqrt(K/m) of the bidiagonal factor; its squared
// singular values are the chain eigenvalues, tiny ones kept to full
// relative accuracy (the assembled tridiagonal would square away half
// the digits of the small end of the spectrum)
inline std::vector<double> chain_bidiagonal(const chain_spec& ch) {
    const int n_top = chain_order(ch);
    const std::vector<double> k = full_springs(ch);
    std::vector<double> e;
    e.reserve(2 * static_cast<std::size_t>(n_top) + 2);
    if (ch.boundary == boundary_kind::fixed_fixed)
        e.push_back(std::sqrt(k[0] / ch.masses[0]));
    for (int i = 1; i <= n_top; ++i) {
        e.push_back(std::sqrt(k[i] / ch.masses[i - 1]));
        e.push_back(std::sqrt(k[i] / ch.masses[i]));
    }
    if (ch.boundary == boundary_kind::fixed_fixed)
        e.push_back(std::sqrt(k[n_top + 1] / ch.masses[n_top]));
    return e;
}

inline std::vector<double> chain_eigenvalues_numeric(const chain_spec& ch) {
    const std::vector<double> e = chain_bidiagonal(ch);
    const std::vector<double> sig = golub_kahan_positive_sigma(e);
    const int npos = static_cast<int>(e.size() + 1) / 2;
    std::vector<double> vals(ch.masses.size() - static_cast<std::size_t>(npos), 0.0);
    for (double s : sig) vals.push_back(s * s);
    return vals;
}

}  // namespace cradle
