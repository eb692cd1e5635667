#pragma once

#include <algorithm>
#include <cmath>
#include <vector>

#include "cradle/common.hpp"

namespace cradle {

struct q_params {
    double q = 0.0;      // base, strictly inside (0,1)
    double qbar = 0.0;   // sqrt(q)
    double gamma = 0.0;  // grid parameter; only gamma^2 and gamma*qbar enter
    int big_n = 1;       // truncation order N
};

inline double q_pochhammer(double a, double q, int k) {
    double p = 1.0;
    double aq = a;
    for (int j = 0; j < k; ++j) {
        p *= 1.0 - aq;
        aq *= q;
    }
    return p;
}

// mu(x) = q^-x + gamma^2 q^(x+1), strictly increasing in x for q in (0,1)
inline double grid_mu(int x, const q_params& qp) {
    return std::pow(qp.q, -x) + qp.gamma * qp.gamma * std::pow(qp.q, x + 1);
}

struct racah_factor_pair {
    double a;  // A_n, vanishes at n = N
    double c;  // C_n, vanishes at n = 0; C_{N-n} = A_n
};

// dimensionless lowering/raising factors of the one-parameter family
inline racah_factor_pair racah_factors(int n, const q_params& qp) {
    const double q = qp.q;
    const double g2 = qp.gamma * qp.gamma;
    const int nn = qp.big_n;
    const double da = (1.0 + std::pow(q, 2 * n - nn)) * (1.0 + std::pow(q, 2 * n - nn + 1));
    const double dc = (1.0 + std::pow(q, 2 * n - nn - 1)) * (1.0 + std::pow(q, 2 * n - nn));
    if (da == 0.0 || dc == 0.0)
        throw validation_error("conditioning", "degenerate denominator in recurrence factors");
    const double a = (1.0 - g2 * std::pow(q, 2 * n + 2)) * (1.0 - std::pow(q, 2 * (n - nn))) / da;
    const double c = (1.0 - std::pow(q, 2 * n)) * (g2 * q - std::pow(q, 2 * n - 2 * nn - 1)) / dc;
    return {a, c};
}

struct weight_table {
    std::vector<double> weights;  // w_0..w_N, positive, sums to 1
    std::vector<double> grid;     // mu(0)..mu(N)
    // set when intermediate product magnitudes span more than 1e14; the
    // weights remain normalized, extreme entries just carry fewer digits
    bool conditioning_warning = false;
};

// normalized grid weights; evaluated as a running ratio product so the
// near-cancelling Pochhammer factors never meet head on
inline weight_table make_weight_table(const q_params& qp, boundary_kind variant) {
    const int n = qp.big_n;
    const double q = qp.q;
    weight_table wt;
    wt.grid.resize(n + 1);
    for (int x = 0; x <= n; ++x) wt.grid[x] = grid_mu(x, qp);
    wt.weights.resize(n + 1);

    double tmax = 1.0, tmin = 1.0;
    if (variant == boundary_kind::free_free) {
        // reduction at gamma q = -sqrt(q)
        const double sq = qp.qbar;
        const double norm = q_pochhammer(sq, q, n) * q_pochhammer(-sq, q, n) /
                            (q_pochhammer(-1.0, q, n) * q_pochhammer(q, q, n));
        double t = 1.0;
        for (int x = 0; x <= n; ++x) {
            const double gx = (x == 0) ? 1.0 : 1.0 + std::pow(q, x);
            wt.weights[x] = norm * gx * t;
            t *= -std::pow(q, n) * (1.0 - std::pow(q, x - n)) / (1.0 - std::pow(q, n + 1 + x));
            tmax = std::max(tmax, std::abs(t));
            if (x < n) tmin = std::min(tmin, std::abs(t));
        }
    } else {
        const double g2 = qp.gamma * qp.gamma;
        // paired (gamma q)(-gamma q) factors collapse to (g2 q^2; q^2)_N
        double norm_num = 1.0;
        for (int j = 0; j < n; ++j) norm_num *= 1.0 - g2 * std::pow(q, 2 + 2 * j);
        const double norm =
            norm_num / (q_pochhammer(-1.0, q, n) * q_pochhammer(g2 * q * q, q, n));
        double t = 1.0;
        for (int x = 0; x <= n; ++x) {
            // the x = 0 bracket is an empty product
            const double gx = (x == 0) ? 1.0
                                       : (1.0 - g2 * std::pow(q, 2 * x + 1)) /
                                             (1.0 - g2 * std::pow(q, x + 1));
            wt.weights[x] = norm * gx * t;
            t *= -std::pow(q, n) * (1.0 - std::pow(q, x - n)) * (1.0 - g2 * std::pow(q, x + 2)) /
                 ((1.0 - std::pow(q, x + 1)) * (1.0 - g2 * std::pow(q, n + 2 + x)));
            tmax = std::max(tmax, std::abs(t));
            if (x < n) tmin = std::min(tmin, std::abs(t));
        }
    }
    wt.conditioning_warning = tmax > 1e14 * tmin;
    for (double w : wt.weights)
        if (!(w > 0.0))
            throw validation_error("weight-positivity",
                                   "invalid parameter region: non-positive grid weight");
    return wt;
}

struct polynomial_evaluator {
    std::vector<double> diag;   // b_0..b_N
    std::vector<double> offsq;  // offsq[0] = 0, offsq[1..N] = u_n
};

// dimensionless three-term recurrence data on the mu grid
inline polynomial_evaluator make_recurrence(const q_params& qp) {
    const int n = qp.big_n;
    polynomial_evaluator rec;
    rec.diag.resize(n + 1);
    rec.offsq.assign(n + 1, 0.0);
    std::vector<double> a(n + 1), c(n + 1);
    for (int i = 0; i <= n; ++i) {
        const racah_factor_pair f = racah_factors(i, qp);
        a[i] = f.a;
        c[i] = f.c;
    }
    const double mu0 = 1.0 + qp.gamma * qp.gamma * qp.q;
    for (int i = 0; i <= n; ++i) rec.diag[i] = mu0 - (a[i] + c[i]);
    for (int i = 1; i <= n; ++i) rec.offsq[i] = a[i - 1] * c[i];
    return rec;
}

// monic P_n by forward recurrence: P_{n+1} = (x - b_n) P_n - u_n P_{n-1}
inline double eval_monic(int n, double x, const polynomial_evaluator& rec) {
    if (n <= 0) return 1.0;
    double p0 = 1.0;
    double p1 = x - rec.diag[0];
    for (int i = 1; i < n; ++i) {
        const double p2 = (x - rec.diag[i]) * p1 - rec.offsq[i] * p0;
        p0 = p1;
        p1 = p2;
    }
    return p1;
}

// normalized polynomial at the integer grid point x via the terminating
// basic hypergeometric sum; independent oracle for eval_monic through
// P_n = A_{n-1}...A_0 * (this value)
inline double eval_hypergeometric_check(int n, int x, const q_params& qp) {
    const double q = qp.q;
    const double g2 = qp.gamma * qp.gamma;
    const int nn = qp.big_n;
    double tot = 1.0, term = 1.0;
    const int mmax = std::min(n, x);
    for (int m = 0; m < mmax; ++m) {
        const double num = (1.0 - std::pow(q, m - n)) * (1.0 + std::pow(q, n - nn + m)) *
                           (1.0 - std::pow(q, m - x)) * (1.0 - g2 * std::pow(q, x + 1 + m));
        const double den = (1.0 - std::pow(q, m - nn)) *
                           (1.0 - g2 * q * q * std::pow(q, 2 * m)) *
                           (1.0 - std::pow(q, m + 1));
        term *= num / den * q;
        tot += term;
    }
    return tot;
}

}  // namespace cradle
