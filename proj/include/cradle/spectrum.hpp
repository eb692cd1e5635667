#pragma once

#include <cmath>
#include <cstdint>
#include <numeric>
#include <string>
#include <vector>

#include "cradle/common.hpp"

namespace cradle {

struct spectral_design {
    int r = 2;
    std::int64_t k0 = 0;
    std::int64_t k1 = 1;
    int big_n = 1;
    double omega = 1.0;
    boundary_kind boundary = boundary_kind::free_free;
    // derived
    double qbar = 0.0;
    double q = 0.0;
    double big_omega = 0.0;
    double d = 0.0;
    double gamma = 0.0;
    double scale = 0.0;  // affine factor taking the dimensionless grid to (omega k)^2
    std::vector<std::int64_t> kseq;
};

inline double qbar_from_r(int r) {
    if (r < 2) throw validation_error("r-range", "lattice parameter r must be an integer >= 2");
    const double rr = static_cast<double>(r);
    return rr - std::sqrt(rr * rr - 1.0);
}

// k_{n+1} = 2 r k_n - k_{n-1}, checked 64-bit
inline std::vector<std::int64_t> eigenintegers(std::int64_t k0, std::int64_t k1, int r,
                                               int big_n) {
    std::vector<std::int64_t> ks;
    ks.reserve(big_n + 1);
    ks.push_back(k0);
    ks.push_back(k1);
    for (int n = 1; n < big_n; ++n) {
        std::int64_t twice = 0, next = 0;
        if (__builtin_mul_overflow(static_cast<std::int64_t>(2 * r), ks[n], &twice) ||
            __builtin_sub_overflow(twice, ks[n - 1], &next))
            throw validation_error("overflow", "eigenvalue integer sequence exceeds 64-bit range at index " +
                                                   std::to_string(n + 1));
        ks.push_back(next);
    }
    return ks;
}

struct affine_map {
    double big_omega;
    double d;
    double gamma;  // equals d in this construction
};

inline affine_map affine_params(std::int64_t k0, std::int64_t k1, double qbar) {
    const double a = static_cast<double>(k1) - static_cast<double>(k0) * qbar;
    const double big_omega = a / (1.0 / qbar - qbar);
    const double d = (static_cast<double>(k0) - static_cast<double>(k1) * qbar) / (a * qbar * qbar);
    return {big_omega, d, d};
}

inline spectral_design make_design(int r, std::int64_t k0, std::int64_t k1, int big_n,
                                   boundary_kind boundary, double omega = 1.0) {
    if (r < 2) throw validation_error("r-range", "lattice parameter r must be an integer >= 2");
    if (big_n < 1) throw validation_error("order-range", "chain order N must be >= 1");
    if (big_n > max_chain_order())
        throw validation_error("size-cap", "N = " + std::to_string(big_n) +
                                               " exceeds the conditioning cap " +
                                               std::to_string(max_chain_order()) +
                                               " (override with CRADLE_MAX_N)");
    if (!(omega > 0.0)) throw validation_error("omega-range", "omega must be positive");
    if (k0 < 0 || k1 <= k0)
        throw validation_error("k-order", "need 0 <= k0 < k1");
    if (((k0 + k1) % 2) == 0)
        throw validation_error("parity", "k0 and k1 must have opposite parity");
    if (std::gcd(k0, k1) > 1)
        throw validation_error("common-factor",
                               "k0 and k1 share a factor; fold it into omega instead");
    if (boundary == boundary_kind::free_free && !(k0 == 0 && k1 == 1))
        throw validation_error("free-pair", "free ends force (k0, k1) = (0, 1)");
    if (boundary == boundary_kind::fixed_fixed && k0 == 0)
        throw validation_error("fixed-zero", "fixed ends need k0 >= 1 (no zero mode)");

    spectral_design dz;
    dz.r = r;
    dz.k0 = k0;
    dz.k1 = k1;
    dz.big_n = big_n;
    dz.omega = omega;
    dz.boundary = boundary;
    dz.qbar = qbar_from_r(r);
    dz.q = dz.qbar * dz.qbar;
    const affine_map am = affine_params(k0, k1, dz.qbar);
    dz.big_omega = am.big_omega;
    dz.d = am.d;
    dz.gamma = am.gamma;
    const double a = static_cast<double>(k1) - static_cast<double>(k0) * dz.qbar;
    dz.scale = omega * omega * a * a / (4.0 * (static_cast<double>(r) * r - 1.0));
    dz.kseq = eigenintegers(k0, k1, r, big_n);
    return dz;
}

// squared normal-mode frequencies; exact integers squared, x_0 = 0 for free ends
inline std::vector<double> eigenvalues(const spectral_design& dz) {
    std::vector<double> xs(dz.kseq.size());
    for (std::size_t n = 0; n < xs.size(); ++n) {
        const double v = dz.omega * static_cast<double>(dz.kseq[n]);
        xs[n] = v * v;
    }
    return xs;
}

// same spectrum through the affine image of the q-grid; cross-check form
inline std::vector<double> eigenvalues_closed(const spectral_design& dz) {
    std::vector<double> xs(dz.big_n + 1);
    const double g = dz.gamma, q = dz.q, s = dz.scale;
    for (int n = 0; n <= dz.big_n; ++n)
        xs[n] = s * (std::pow(q, -n) + g * g * std::pow(q, n + 1) + 2.0 * g * dz.qbar);
    return xs;
}

struct spectrum_violation {
    std::string code;
    std::string detail;
};

// structural conditions on the integer sequence required for end-to-end transfer
inline std::vector<spectrum_violation> validate_pst_spectrum(
    const std::vector<std::int64_t>& kseq) {
    std::vector<spectrum_violation> out;
    if (kseq.size() < 2) {
        out.push_back({"size", "need at least two eigenvalue integers"});
        return out;
    }
    const std::int64_t k0 = kseq[0], k1 = kseq[1];
    if (k0 < 0 || k1 <= k0)
        out.push_back({"k-order", "sequence must start with 0 <= k0 < k1"});
    if (((k0 + k1) % 2) == 0)
        out.push_back({"parity", "k1 - k0 must be odd so mirror parities alternate"});
    if (std::gcd(k0, k1) > 1)
        out.push_back({"common-factor",
                       "gcd(k0, k1) = " + std::to_string(std::gcd(k0, k1)) + " must be 1"});
    if (kseq.size() >= 3) {
        // every gap must follow one shared three-term rule k_{n+1} = 2 r k_n - k_{n-1}
        const std::int64_t t = kseq[2] + k0;
        if (k1 == 0 || t % k1 != 0 || (t / k1) % 2 != 0 || t / k1 < 4) {
            out.push_back({"recurrence", "no integer r >= 2 reproduces the sequence"});
        } else {
            const std::int64_t twice_r = t / k1;
            for (std::size_t n = 2; n < kseq.size(); ++n)
                if (kseq[n] != twice_r * kseq[n - 1] - kseq[n - 2]) {
                    out.push_back({"recurrence", "gap at index " + std::to_string(n) +
                                                     " breaks the three-term rule"});
                    break;
                }
        }
    }
    return out;
}

}  // namespace cradle
