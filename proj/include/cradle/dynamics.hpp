#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <numbers>
#include <numeric>
#include <set>
#include <string>
#include <vector>

#include "common.hpp"
#include "jacobi.hpp"
#include "spectrum.hpp"
#include "synthesis.hpp"

namespace cradle {

struct simulation_config {
    double pbar = 1.0;
    double tstar = std::numbers::pi;
    std::vector<double> sample_times;
    double omega = 1.0;
    std::vector<std::int64_t> kseq;
};

inline simulation_config make_simulation_config(const spectral_design& dz, double pbar = 1.0) {
    simulation_config cfg;
    cfg.pbar = pbar;
    cfg.omega = dz.omega;
    cfg.tstar = std::numbers::pi / dz.omega;
    cfg.kseq = dz.kseq;
    return cfg;
}

// mass-weighted coordinates unless stated otherwise (the verlet oracle is the
// one producer of physical-coordinate states)
struct trajectory_state {
    double t = 0.0;
    std::vector<double> qvec;
    std::vector<double> pvec;
};

inline trajectory_state evolve(const eigen_system& es, const std::vector<double>& q0,
                               const std::vector<double>& p0, double t) {
    const int n_top = static_cast<int>(es.values.size()) - 1;
    trajectory_state st;
    st.t = t;
    st.qvec.assign(n_top + 1, 0.0);
    st.pvec.assign(n_top + 1, 0.0);
    for (int n = 0; n <= n_top; ++n) {
        const auto& row = es.vectors[n];
        double qh = 0.0, ph = 0.0;
        for (int j = 0; j <= n_top; ++j) {
            qh += row[j] * q0[j];
            ph += row[j] * p0[j];
        }
        const double x = es.values[n];
        double qt, pt;
        if (x <= 0.0) {
            // translation mode: sin(wt)/w -> t as w -> 0
            qt = qh + ph * t;
            pt = ph;
        } else {
            const double w = std::sqrt(x);
            const double c = std::cos(w * t), s = std::sin(w * t);
            qt = qh * c + ph * s / w;
            pt = -qh * w * s + ph * c;
        }
        for (int i = 0; i <= n_top; ++i) {
            st.qvec[i] += row[i] * qt;
            st.pvec[i] += row[i] * pt;
        }
    }
    return st;
}

inline double mode_energy(const eigen_system& es, const std::vector<double>& q,
                          const std::vector<double>& p) {
    const int n_top = static_cast<int>(es.values.size()) - 1;
    double e = 0.0;
    for (int n = 0; n <= n_top; ++n) {
        double qh = 0.0, ph = 0.0;
        for (int j = 0; j <= n_top; ++j) {
            qh += es.vectors[n][j] * q[j];
            ph += es.vectors[n][j] * p[j];
        }
        e += 0.5 * (ph * ph + es.values[n] * qh * qh);
    }
    return e;
}

namespace detail {

// cos(pi * k * ell / z) with the phase reduced in integer arithmetic first;
// the reduction is what keeps transfer residuals at rounding level even when
// the raw arguments k*t would be astronomically large
inline double cosine_of_reduced_phase(std::int64_t k, std::int64_t ell, std::int64_t z) {
    const __int128 two_z = 2 * static_cast<__int128>(z);
    __int128 m = (static_cast<__int128>(k) * ell) % two_z;
    if (m < 0) m += two_z;
    return std::cos(std::numbers::pi * static_cast<double>(static_cast<std::int64_t>(m)) /
                    static_cast<double>(z));
}

inline std::vector<std::int64_t> divisors_of(std::int64_t n) {
    n = std::abs(n);
    std::vector<std::int64_t> out;
    for (std::int64_t i = 1; i * i <= n; ++i) {
        if (n % i == 0) {
            out.push_back(i);
            if (i != n / i) out.push_back(n / i);
        }
    }
    return out;
}

}  // namespace detail

// momenta at the revival fraction t = (ell/z) * pi/omega for the single-kick
// start p = (pbar, 0, ..., 0), q = 0
inline std::vector<double> momenta_at_fraction(const eigen_system& es,
                                               const std::vector<std::int64_t>& kseq,
                                               std::int64_t ell, std::int64_t z,
                                               double pbar = 1.0) {
    const int n_top = static_cast<int>(es.values.size()) - 1;
    std::vector<double> out(n_top + 1, 0.0);
    for (int n = 0; n <= n_top; ++n) {
        const double c =
            detail::cosine_of_reduced_phase(kseq[n], ell, z) * es.vectors[n][0] * pbar;
        for (int i = 0; i <= n_top; ++i) out[i] += c * es.vectors[n][i];
    }
    return out;
}

struct pst_report {
    double pn_over_pbar = 0.0;
    double residual = 0.0;  // max interior |p_i(t*)| / pbar
};

inline pst_report pst_fidelity(const eigen_system& es, const simulation_config& cfg) {
    const int n_top = static_cast<int>(es.values.size()) - 1;
    std::vector<double> p;
    if (cfg.kseq.size() == es.values.size() && cfg.tstar == std::numbers::pi / cfg.omega) {
        p = momenta_at_fraction(es, cfg.kseq, 1, 1, cfg.pbar);
    } else {
        const std::vector<double> q0(n_top + 1, 0.0);
        std::vector<double> p0(n_top + 1, 0.0);
        p0[0] = cfg.pbar;
        p = evolve(es, q0, p0, cfg.tstar).pvec;
    }
    pst_report rep;
    rep.pn_over_pbar = p[n_top] / cfg.pbar;
    for (int i = 0; i < n_top; ++i)
        rep.residual = std::max(rep.residual, std::abs(p[i]) / cfg.pbar);
    return rep;
}

struct revival_order {
    std::int64_t z = 0;
    std::vector<int> condition_ids;
};

// every divisor test below bounds Z by a fixed nonzero integer, so the
// enumeration is finite; the congruence scan over the k-sequence is the oracle
inline std::vector<revival_order> revival_orders(std::int64_t k0, std::int64_t k1,
                                                 std::int64_t r, boundary_kind variant) {
    std::map<std::int64_t, std::set<int>> hits;
    const auto add = [&](std::int64_t z, int cid) {
        if (z >= 2) hits[z].insert(cid);
    };
    for (std::int64_t z : detail::divisors_of(r)) {
        add(z, 83);
        if (variant == boundary_kind::free_free) add(z, 105);
    }
    const std::int64_t d0 = r * k0 - k1, d1 = r * k1 - k0;
    for (std::int64_t z : detail::divisors_of(std::gcd(d0, d1))) add(z, 84);
    std::int64_t g = std::gcd(std::gcd(r * k0, d1), 2 * k0);
    if (g) {
        for (std::int64_t z : detail::divisors_of(g)) add(z, 85);
    }
    g = std::gcd(std::gcd(d0, 2 * k1), r * k1);
    if (g) {
        for (std::int64_t z : detail::divisors_of(g)) add(z, 86);
    }
    std::vector<revival_order> out;
    for (const auto& [z, ids] : hits)
        out.push_back(revival_order{z, std::vector<int>(ids.begin(), ids.end())});
    return out;
}

struct revival_amplitudes {
    double p0 = 0.0;
    double pn = 0.0;
};

inline revival_amplitudes revival_prediction(std::int64_t z, std::int64_t ell,
                                             std::int64_t k0, std::int64_t k1, double alpha,
                                             boundary_kind variant, std::int64_t r) {
    if (!(alpha > 0.0 && alpha < 1.0))
        throw validation_error("alpha-range", "alpha must lie strictly inside (0,1)");
    if (ell < 0 || ell > z)
        throw validation_error("ell-range", "fraction index must satisfy 0 <= ell <= Z");
    bool known = false;
    for (const revival_order& ro : revival_orders(k0, k1, r, variant))
        if (ro.z == z) known = true;
    if (!known)
        throw validation_error("revival-order", "Z does not satisfy any revival condition");
    const double c0 = detail::cosine_of_reduced_phase(k0, ell, z);
    const double c1 = detail::cosine_of_reduced_phase(k1, ell, z);
    return revival_amplitudes{(1.0 - alpha) * c0 + alpha * c1,
                              std::sqrt(alpha * (1.0 - alpha)) * (c0 - c1)};
}

struct revival_entry {
    std::int64_t z = 0;
    std::vector<int> condition_ids;
    std::vector<double> times;  // tau_{ell,Z}, ell = 1..Z-1
    std::vector<revival_amplitudes> predicted;
};

inline std::vector<revival_entry> make_revival_schedule(const spectral_design& dz,
                                                        double alpha, double pbar = 1.0) {
    std::vector<revival_entry> out;
    for (const revival_order& ro : revival_orders(dz.k0, dz.k1, dz.r, dz.boundary)) {
        revival_entry e;
        e.z = ro.z;
        e.condition_ids = ro.condition_ids;
        for (std::int64_t ell = 1; ell < ro.z; ++ell) {
            e.times.push_back(static_cast<double>(ell) * std::numbers::pi /
                              (static_cast<double>(ro.z) * dz.omega));
            revival_amplitudes ra =
                revival_prediction(ro.z, ell, dz.k0, dz.k1, alpha, dz.boundary, dz.r);
            ra.p0 *= pbar;
            ra.pn *= pbar;
            e.predicted.push_back(ra);
        }
        out.push_back(std::move(e));
    }
    return out;
}

// independent check of the spectral propagator: velocity Verlet on the
// physical chain. states carry displacements and physical momenta m*v;
// divide pvec by sqrt(m) to compare against the mass-weighted evolution
inline std::vector<trajectory_state> verlet_states(const chain_spec& ch,
                                                   const simulation_config& cfg, double dt,
                                                   const std::vector<double>& times) {
    require_positive_chain(ch);
    if (!(dt > 0.0) || !std::isfinite(dt))
        throw validation_error("timestep", "dt must be positive and finite");
    const std::vector<double> vals = chain_eigenvalues_numeric(ch);
    const double wmax = std::sqrt(vals.back());
    if (wmax > 0.0 && dt > 2.0 * std::numbers::pi / (50.0 * wmax))
        throw validation_error("timestep", "dt too large to resolve the fastest mode");

    const int n_top = chain_order(ch);
    const std::vector<double> k = full_springs(ch);
    std::vector<double> x(n_top + 1, 0.0), v(n_top + 1, 0.0), a(n_top + 1, 0.0);
    v[0] = cfg.pbar / std::sqrt(ch.masses[0]);
    const auto accel = [&]() {
        for (int i = 0; i <= n_top; ++i) {
            const double left = i > 0 ? x[i - 1] : 0.0;
            const double right = i < n_top ? x[i + 1] : 0.0;
            a[i] = (k[i] * (left - x[i]) + k[i + 1] * (right - x[i])) / ch.masses[i];
        }
    };

    std::vector<std::size_t> order(times.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    std::sort(order.begin(), order.end(),
              [&](std::size_t i, std::size_t j) { return times[i] < times[j]; });

    std::vector<trajectory_state> out(times.size());
    accel();
    long long step = 0;
    for (std::size_t idx : order) {
        const long long target = std::llround(times[idx] / dt);
        while (step < target) {
            for (int i = 0; i <= n_top; ++i) v[i] += 0.5 * dt * a[i];
            for (int i = 0; i <= n_top; ++i) x[i] += dt * v[i];
            accel();
            for (int i = 0; i <= n_top; ++i) v[i] += 0.5 * dt * a[i];
            ++step;
        }
        trajectory_state st;
        st.t = static_cast<double>(target) * dt;
        st.qvec = x;
        st.pvec.resize(n_top + 1);
        for (int i = 0; i <= n_top; ++i) st.pvec[i] = ch.masses[i] * v[i];
        out[idx] = std::move(st);
    }
    return out;
}

inline trajectory_state verlet_oracle(const chain_spec& ch, const simulation_config& cfg,
                                      double dt, double t_end) {
    return verlet_states(ch, cfg, dt, std::vector<double>{t_end}).front();
}

// energy of a physical-coordinate state (the verlet output)
inline double physical_energy(const chain_spec& ch, const trajectory_state& st) {
    const int n_top = chain_order(ch);
    const std::vector<double> k = full_springs(ch);
    double e = 0.0;
    for (int i = 0; i <= n_top; ++i)
        e += 0.5 * st.pvec[i] * st.pvec[i] / ch.masses[i];
    e += 0.5 * k[0] * st.qvec[0] * st.qvec[0];
    for (int i = 1; i <= n_top; ++i) {
        const double d = st.qvec[i] - st.qvec[i - 1];
        e += 0.5 * k[i] * d * d;
    }
    e += 0.5 * k[n_top + 1] * st.qvec[n_top] * st.qvec[n_top];
    return e;
}

}  // namespace cradle
