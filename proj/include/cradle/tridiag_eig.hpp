#pragma once

#include <algorithm>
#include <cmath>
#include <utility>
#include <vector>

namespace cradle {

// eigenvalues of the symmetric tridiagonal with diagonal `diag` and squared
// off-diagonals `offsq` (offsq[0] unused), by Sturm-count bisection; the
// count only sees the squares, so either off-diagonal sign convention works
inline std::vector<double> bisect_eigenvalues(const std::vector<double>& diag,
                                              const std::vector<double>& offsq) {
    const int n = static_cast<int>(diag.size());
    double rad = 0.0;
    for (int i = 1; i < n; ++i) rad = std::max(rad, offsq[i]);
    rad = 2.0 * std::sqrt(rad);
    double lo0 = diag[0], hi0 = diag[0];
    for (int i = 1; i < n; ++i) {
        lo0 = std::min(lo0, diag[i]);
        hi0 = std::max(hi0, diag[i]);
    }
    lo0 = std::min(lo0 - rad, 0.0);
    hi0 += rad;

    const auto count_below = [&](double s) {
        int c = 0;
        double d = 1.0;
        for (int i = 0; i < n; ++i) {
            d = (diag[i] - s) - (i ? offsq[i] / d : 0.0);
            if (d < 0.0) ++c;
            if (d == 0.0) d = 1e-300;
        }
        return c;
    };

    std::vector<double> out(n);
    for (int j = 1; j <= n; ++j) {
        double a = lo0, b = hi0;
        for (int it = 0; it < 200; ++it) {
            const double mid = 0.5 * (a + b);
            if (count_below(mid) >= j)
                b = mid;
            else
                a = mid;
            if ((b - a) <= 1e-16 * std::max({std::abs(a), std::abs(b), 1e-300})) break;
        }
        out[j - 1] = 0.5 * (a + b);
    }
    return out;
}

namespace detail {

// (T - lam I) v = rhs for T = tridiag(-sqrt(u), b, -sqrt(u)); Gaussian
// elimination with partial pivoting, fill-in limited to one extra band
inline std::vector<double> tridiag_solve_shifted(const std::vector<double>& diag,
                                                 const std::vector<double>& offsq,
                                                 double lam, std::vector<double> v) {
    const int n = static_cast<int>(diag.size());
    std::vector<double> sub(n, 0.0), main(n, 0.0), sup(n, 0.0), fill(n, 0.0);
    for (int i = 0; i < n; ++i) main[i] = diag[i] - lam;
    for (int i = 1; i < n; ++i) {
        const double s = -std::sqrt(offsq[i]);
        sub[i] = s;
        sup[i - 1] = s;
    }
    for (int i = 0; i + 1 < n; ++i) {
        if (std::abs(sub[i + 1]) > std::abs(main[i])) {
            std::swap(main[i], sub[i + 1]);
            std::swap(sup[i], main[i + 1]);
            std::swap(fill[i], sup[i + 1]);
            std::swap(v[i], v[i + 1]);
        }
        if (main[i] == 0.0) main[i] = 1e-300;
        const double f = sub[i + 1] / main[i];
        main[i + 1] -= f * sup[i];
        sup[i + 1] -= f * fill[i];
        v[i + 1] -= f * v[i];
    }
    if (main[n - 1] == 0.0) main[n - 1] = 1e-300;
    std::vector<double> out(n, 0.0);
    for (int i = n - 1; i >= 0; --i) {
        double s = v[i];
        if (i + 1 < n) s -= sup[i] * out[i + 1];
        if (i + 2 < n) s -= fill[i] * out[i + 2];
        out[i] = s / main[i];
    }
    return out;
}

}  // namespace detail

// eigenvector rows for precomputed eigenvalues, by shifted inverse iteration
inline std::vector<std::vector<double>> inverse_iteration_vectors(
    const std::vector<double>& diag, const std::vector<double>& offsq,
    const std::vector<double>& values) {
    const int n = static_cast<int>(diag.size());
    std::vector<std::vector<double>> rows(values.size());
    for (std::size_t j = 0; j < values.size(); ++j) {
        const double lam = values[j];
        const double shifted = lam * (1.0 + 1e-14) + (lam == 0.0 ? 1e-300 : 0.0);
        std::vector<double> v(n, 1.0 / std::sqrt(static_cast<double>(n)));
        for (int it = 0; it < 3; ++it) {
            v = detail::tridiag_solve_shifted(diag, offsq, shifted, std::move(v));
            double nrm = 0.0;
            for (double t : v) nrm += t * t;
            nrm = std::sqrt(nrm);
            for (double& t : v) t /= nrm;
        }
        rows[j] = std::move(v);
    }
    return rows;
}

// positive singular values (ascending) of the bidiagonal matrix whose
// interleaved entries are `offd`, through the zero-diagonal tridiagonal
// embedding; bisection is geometric so tiny sigma keep relative accuracy
inline std::vector<double> golub_kahan_positive_sigma(const std::vector<double>& offd) {
    const int dim = static_cast<int>(offd.size()) + 1;
    const int npos = dim / 2;
    const int nzero = dim - 2 * npos;
    double hi0 = 0.0;
    for (double e : offd) hi0 = std::max(hi0, e);
    hi0 *= 2.0;

    const auto count_below = [&](double s) {
        int c = 0;
        double d = -s;
        if (d < 0.0) ++c;
        for (double ek : offd) {
            if (d == 0.0) d = -1e-300;
            d = -s - ek * ek / d;
            if (d < 0.0) ++c;
        }
        return c;
    };

    std::vector<double> sig(npos);
    for (int j = 0; j < npos; ++j) {
        double lo = hi0 * 1e-200, hi = hi0;
        for (int it = 0; it < 200; ++it) {
            const double mid = std::sqrt(lo * hi);
            if (!(lo < mid && mid < hi)) break;
            if (count_below(mid) <= npos + nzero + j)
                lo = mid;
            else
                hi = mid;
        }
        sig[j] = 0.5 * (lo + hi);
    }
    return sig;
}

// recurrence coefficients of the discrete measure sum w_i delta(x - nodes_i):
// Lanczos on diag(nodes) started at sqrt(w), reorthogonalized twice per step
inline std::pair<std::vector<double>, std::vector<double>> jacobi_from_measure(
    const std::vector<double>& nodes, const std::vector<double>& weights) {
    const int m = static_cast<int>(nodes.size());
    std::vector<std::vector<double>> qcols(m, std::vector<double>(m, 0.0));
    double wsum = 0.0;
    for (double w : weights) wsum += w;
    for (int i = 0; i < m; ++i) qcols[0][i] = std::sqrt(weights[i] / wsum);

    std::vector<double> a(m, 0.0), bb(m, 0.0);
    std::vector<double> v(m);
    for (int j = 0; j < m; ++j) {
        for (int i = 0; i < m; ++i) v[i] = nodes[i] * qcols[j][i];
        double aj = 0.0;
        for (int i = 0; i < m; ++i) aj += qcols[j][i] * v[i];
        a[j] = aj;
        for (int i = 0; i < m; ++i) v[i] -= aj * qcols[j][i];
        if (j > 0)
            for (int i = 0; i < m; ++i) v[i] -= bb[j] * qcols[j - 1][i];
        for (int pass = 0; pass < 2; ++pass) {
            for (int c = 0; c <= j; ++c) {
                double d = 0.0;
                for (int i = 0; i < m; ++i) d += qcols[c][i] * v[i];
                for (int i = 0; i < m; ++i) v[i] -= d * qcols[c][i];
            }
        }
        if (j + 1 < m) {
            double nrm = 0.0;
            for (double t : v) nrm += t * t;
            nrm = std::sqrt(nrm);
            bb[j + 1] = nrm;
            for (int i = 0; i < m; ++i) qcols[j + 1][i] = v[i] / nrm;
        }
    }
    std::vector<double> u(m, 0.0);
    for (int i = 1; i < m; ++i) u[i] = bb[i] * bb[i];
    return {std::move(a), std::move(u)};
}

}  // namespace cradle
