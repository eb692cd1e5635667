#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <vector>

#include "cradle/jacobi.hpp"
#include "cradle/spectrum.hpp"
#include "cradle/synthesis.hpp"

using namespace cradle;

namespace {

struct probe {
    int r;
    std::int64_t k0, k1;
    int big_n;
    boundary_kind b;
};

// the module-level agreement grid: free chains to N = 8, fixed chains to N = 7
std::vector<probe> module_grid() {
    std::vector<probe> out;
    for (int r : {2, 3})
        for (int n = 1; n <= 8; ++n) out.push_back({r, 0, 1, n, boundary_kind::free_free});
    for (auto [k0, k1] : {std::pair<std::int64_t, std::int64_t>{1, 2}, {2, 3}, {3, 4}, {1, 4}})
        for (int n = 1; n <= 7; ++n) out.push_back({2, k0, k1, n, boundary_kind::fixed_fixed});
    for (int n = 1; n <= 6; ++n) out.push_back({3, 1, 2, n, boundary_kind::fixed_fixed});
    return out;
}

// dense symmetric product U T U^T against the physical-sign tridiagonal
double reconstruction_defect(const eigen_system& es, const jacobi_matrix& jm) {
    const int n = jm.size;
    double xmax = 0.0;
    for (double x : es.values) xmax = std::max(xmax, std::abs(x));
    double worst = 0.0;
    std::vector<double> tv(n);
    for (int a = 0; a < n; ++a) {
        const std::vector<double>& va = es.vectors[a];
        for (int i = 0; i < n; ++i) {
            double s = jm.diag[i] * va[i];
            if (i > 0) s -= std::sqrt(jm.offsq[i]) * va[i - 1];
            if (i + 1 < n) s -= std::sqrt(jm.offsq[i + 1]) * va[i + 1];
            tv[i] = s;
        }
        for (int b = 0; b < n; ++b) {
            double m = 0.0;
            for (int i = 0; i < n; ++i) m += es.vectors[b][i] * tv[i];
            const double want = (a == b) ? es.values[a] : 0.0;
            worst = std::max(worst, std::abs(m - want) / xmax);
        }
    }
    return worst;
}

}  // namespace

TEST_CASE("matrix assembly") {
    SECTION("two-site free chain in closed form") {
        const spectral_design dz = make_design(2, 0, 1, 1, boundary_kind::free_free);
        const jacobi_matrix jm = build_jacobi(dz);
        REQUIRE(jm.size == 2);
        CHECK(jm.factor_a[0] == Catch::Approx(-0.5).margin(1e-12));
        CHECK(jm.diag[0] == Catch::Approx(0.5).margin(1e-12));
        CHECK(jm.diag[1] == Catch::Approx(0.5).margin(1e-12));
        CHECK(jm.offsq[1] == Catch::Approx(0.25).margin(1e-12));
    }

    SECTION("endpoint factors vanish exactly") {
        for (const probe& pr : module_grid()) {
            const spectral_design dz = make_design(pr.r, pr.k0, pr.k1, pr.big_n, pr.b);
            const jacobi_matrix jm = build_jacobi(dz);
            CHECK(jm.factor_a[pr.big_n] == 0.0);
            CHECK(jm.factor_c[0] == 0.0);
        }
    }

    SECTION("persymmetry and trace") {
        for (const probe& pr : module_grid()) {
            const spectral_design dz = make_design(pr.r, pr.k0, pr.k1, pr.big_n, pr.b);
            const jacobi_matrix jm = build_jacobi(dz);
            // the mirror entries are copies, not recomputations
            CHECK(persymmetry_defect(jm) == 0.0);

            double tr = 0.0, sx = 0.0;
            for (double b : jm.diag) tr += b;
            for (double x : eigenvalues(dz)) sx += x;
            CHECK(std::abs(tr - sx) <= 1e-10 * sx);
        }
    }

    SECTION("positivity gate") {
        spectral_design dz = make_design(2, 1, 2, 4, boundary_kind::fixed_fixed);
        dz.gamma = 5.0 / dz.q;  // outside the admissible grid-parameter region
        bool hit = false;
        try {
            build_jacobi(dz);
        } catch (const validation_error& e) {
            hit = (e.code() == "positivity");
        }
        CHECK(hit);
    }
}

TEST_CASE("analytic eigensystem") {
    for (const probe& pr : module_grid()) {
        const spectral_design dz = make_design(pr.r, pr.k0, pr.k1, pr.big_n, pr.b);
        const jacobi_matrix jm = build_jacobi(dz);
        const eigen_system es = eigensystem_analytic(jm, dz);
        const int n_top = pr.big_n;
        INFO("design r=" << pr.r << " k=(" << pr.k0 << "," << pr.k1 << ") N=" << n_top);

        const std::vector<double> xs = eigenvalues(dz);
        for (int n = 0; n <= n_top; ++n) CHECK(es.values[n] == xs[n]);

        // leading column carries the raw weights
        const weight_table wt = make_weight_table(params_of(dz), dz.boundary);
        double col0 = 0.0;
        for (int n = 0; n <= n_top; ++n) {
            CHECK(es.vectors[n][0] > 0.0);
            CHECK(std::abs(es.vectors[n][0] - std::sqrt(wt.weights[n])) <=
                  1e-12 * es.vectors[n][0]);
            col0 += es.vectors[n][0] * es.vectors[n][0];
        }
        CHECK(std::abs(col0 - 1.0) <= 1e-12);

        // row orthonormality
        double worst = 0.0;
        for (int a = 0; a <= n_top; ++a)
            for (int b = a; b <= n_top; ++b) {
                double g = 0.0;
                for (int i = 0; i <= n_top; ++i) g += es.vectors[a][i] * es.vectors[b][i];
                worst = std::max(worst, std::abs(g - (a == b ? 1.0 : 0.0)));
            }
        CHECK(worst <= 1e-10);

        // mirror alternation is a construction rule, so the defect is zero
        for (int n = 0; n <= n_top; ++n)
            for (int i = 0; i <= n_top; ++i) {
                const double want = (n % 2 ? -1.0 : 1.0) * es.vectors[n][i];
                CHECK(std::abs(es.vectors[n][n_top - i] - want) <= 1e-12);
            }

        CHECK(reconstruction_defect(es, jm) <= 1e-9);

        // parity-resolved completeness over mirror pairs
        double parity_worst = 0.0;
        for (int i = 0; i <= n_top; ++i)
            for (int k = 0; k <= n_top; ++k) {
                double even = 0.0, odd = 0.0;
                for (int n = 0; n <= n_top; ++n) {
                    const double t = es.vectors[n][i] * es.vectors[n][k];
                    (n % 2 ? odd : even) += t;
                }
                const double di = (i == k) ? 1.0 : 0.0;
                const double dm = (i == n_top - k) ? 1.0 : 0.0;
                parity_worst = std::max(parity_worst, std::abs(even - 0.5 * (di + dm)));
                parity_worst = std::max(parity_worst, std::abs(odd - 0.5 * (di - dm)));
            }
        CHECK(parity_worst <= 1e-10);

        // antisymmetric modes have an exact node at the centre site
        if (n_top % 2 == 0)
            for (int n = 1; n <= n_top; n += 2) CHECK(es.vectors[n][n_top / 2] == 0.0);
    }
}

TEST_CASE("zero mode of a free chain") {
    for (int r : {2, 3}) {
        const spectral_design dz = make_design(r, 0, 1, 4, boundary_kind::free_free);
        const jacobi_matrix jm = build_jacobi(dz);
        const eigen_system es = eigensystem_analytic(jm, dz);
        REQUIRE(es.values[0] == 0.0);

        // the x = 0 row is the mass-weighted image of the uniform translation:
        // entries sqrt(m_i / sum m), so U_{0i}/sqrt(m_i) is constant
        const chain_spec ch = synthesize_free_free(jm);
        double total = 0.0;
        for (double m : ch.masses) total += m;
        for (int i = 0; i <= 4; ++i)
            CHECK(std::abs(es.vectors[0][i] - std::sqrt(ch.masses[i] / total)) <= 1e-10);
    }
}

TEST_CASE("numeric eigensolver oracle") {
    SECTION("two-site free chain") {
        const spectral_design dz = make_design(2, 0, 1, 1, boundary_kind::free_free);
        const eigen_system es = eigensystem_numeric(build_jacobi(dz));
        CHECK(std::abs(es.values[0]) <= 1e-12);
        CHECK(std::abs(es.values[1] - 1.0) <= 1e-12);
    }

    SECTION("single site edge") {
        jacobi_matrix jm;
        jm.size = 1;
        jm.diag = {3.7};
        jm.offsq = {0.0};
        const eigen_system es = eigensystem_numeric(jm);
        REQUIRE(es.values.size() == 1);
        CHECK(std::abs(es.values[0] - 3.7) <= 1e-12);
        CHECK(std::abs(std::abs(es.vectors[0][0]) - 1.0) <= 1e-12);
    }

    SECTION("agreement with the analytic construction") {
        for (const probe& pr : module_grid()) {
            const spectral_design dz = make_design(pr.r, pr.k0, pr.k1, pr.big_n, pr.b);
            const jacobi_matrix jm = build_jacobi(dz);
            const eigen_system ea = eigensystem_analytic(jm, dz);
            const eigen_system en = eigensystem_numeric(jm);
            const int n_top = pr.big_n;
            INFO("design r=" << pr.r << " k=(" << pr.k0 << "," << pr.k1 << ") N=" << n_top);

            const double xmax = ea.values[n_top];
            double dv = 0.0, du = 0.0;
            for (int n = 0; n <= n_top; ++n) {
                dv = std::max(dv, std::abs(en.values[n] - ea.values[n]));
                for (int i = 0; i <= n_top; ++i)
                    du = std::max(du, std::abs(std::abs(en.vectors[n][i]) -
                                               std::abs(ea.vectors[n][i])));
            }
            CHECK(dv <= 1e-9 * xmax);
            CHECK(du <= 1e-8);
        }
    }
}
