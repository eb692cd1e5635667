#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <vector>

#include "cradle/jacobi.hpp"
#include "cradle/spectrum.hpp"
#include "cradle/synthesis.hpp"

using namespace cradle;

namespace {

template <class F>
std::string thrown_code(F&& f) {
    try {
        f();
    } catch (const validation_error& e) {
        return e.code();
    }
    return "";
}

double rel_span_delta(const std::vector<double>& got, const std::vector<double>& want) {
    double scale = 0.0, worst = 0.0;
    for (double w : want) scale = std::max(scale, std::abs(w));
    for (std::size_t i = 0; i < want.size(); ++i)
        worst = std::max(worst, std::abs(got[i] - want[i]));
    return worst / scale;
}

double jacobi_round_trip_defect(const chain_spec& ch, const jacobi_matrix& jm) {
    const jacobi_matrix back = chain_to_jacobi(ch);
    return std::max(rel_span_delta(back.diag, jm.diag), rel_span_delta(back.offsq, jm.offsq));
}

}  // namespace

TEST_CASE("gamma vector") {
    SECTION("single mass") {
        eigen_system es;
        es.values = {2.5};
        es.vectors = {{1.0}};
        const std::vector<double> g = gamma_vector(es);
        REQUIRE(g.size() == 1);
        CHECK(g[0] == 1.0 / 2.5);
    }

    SECTION("zero mode is rejected") {
        const spectral_design dz = make_design(2, 0, 1, 3, boundary_kind::free_free);
        const jacobi_matrix jm = build_jacobi(dz);
        const eigen_system es = eigensystem_analytic(jm, dz);
        CHECK(thrown_code([&] { gamma_vector(es); }) == "zero-eigenvalue");
    }

    struct probe {
        int r;
        std::int64_t k0, k1;
        int big_n;
    };
    const probe probes[] = {{2, 1, 2, 12}, {2, 3, 4, 10}, {3, 2, 3, 8}, {2, 1, 4, 7}};
    for (const probe& pr : probes) {
        const spectral_design dz = make_design(pr.r, pr.k0, pr.k1, pr.big_n,
                                               boundary_kind::fixed_fixed);
        const jacobi_matrix jm = build_jacobi(dz);
        const eigen_system es = eigensystem_analytic(jm, dz);
        const std::vector<double> g = gamma_vector(es);
        const int n_top = pr.big_n;
        INFO("design r=" << pr.r << " k=(" << pr.k0 << "," << pr.k1 << ") N=" << n_top);

        for (int i = 0; i <= n_top; ++i) {
            CHECK(g[i] > 0.0);
            CHECK(std::abs(g[n_top - i] - g[i]) <= 1e-10 * g[i]);
        }

        // cross-check against the weighted polynomial sum over even modes; the
        // eigenvector rows carry the physical sign gauge (-1)^i on top of the
        // normalized polynomials, so the polynomial form picks up that factor
        const weight_table wt = make_weight_table(params_of(dz), dz.boundary);
        double norm = 1.0;
        for (int i = 0; i <= n_top; ++i) {
            if (i > 0) norm *= std::sqrt(jm.offsq[i]);
            const polynomial_evaluator rec{jm.diag, jm.offsq};
            double s = 0.0;
            for (int n = 0; n <= n_top; n += 2)
                s += wt.weights[n] / es.values[n] * eval_monic(i, es.values[n], rec) / norm;
            const double sign = (i % 2) ? -1.0 : 1.0;
            CHECK(std::abs(sign * s - g[i]) <= 1e-10 * g[i]);
        }
    }
}

TEST_CASE("fixed chain synthesis") {
    struct probe {
        int r;
        std::int64_t k0, k1;
        int big_n;
    };
    const probe probes[] = {{2, 1, 2, 10}, {2, 3, 4, 8}, {3, 2, 3, 7}, {2, 1, 4, 5}, {2, 1, 2, 1}};
    for (const probe& pr : probes) {
        const spectral_design dz = make_design(pr.r, pr.k0, pr.k1, pr.big_n,
                                               boundary_kind::fixed_fixed);
        const jacobi_matrix jm = build_jacobi(dz);
        const eigen_system es = eigensystem_analytic(jm, dz);
        const double m0 = 1.75;
        const chain_spec ch = synthesize_fixed_fixed(es, jm, m0);
        const int n_top = pr.big_n;
        INFO("design r=" << pr.r << " k=(" << pr.k0 << "," << pr.k1 << ") N=" << n_top);

        REQUIRE(chain_order(ch) == n_top);
        REQUIRE(ch.springs.size() == ch.masses.size() + 1);
        CHECK(ch.masses[0] == m0);
        CHECK(ch.springs[0] == ch.springs[n_top + 1]);
        for (double m : ch.masses) CHECK(m > 0.0);
        for (double k : ch.springs) CHECK(k > 0.0);
        for (int i = 0; i <= n_top; ++i)
            CHECK(std::abs(ch.masses[n_top - i] - ch.masses[i]) <= 1e-9 * ch.masses[i]);
        for (int i = 0; i <= n_top + 1; ++i)
            CHECK(std::abs(ch.springs[n_top + 1 - i] - ch.springs[i]) <= 1e-9 * ch.springs[i]);

        CHECK(jacobi_round_trip_defect(ch, jm) <= 1e-9);

        const std::vector<double> xs = chain_eigenvalues_numeric(ch);
        CHECK(rel_span_delta(xs, eigenvalues(dz)) <= 1e-8);
    }
}

TEST_CASE("free chain synthesis") {
    SECTION("two equal masses") {
        const spectral_design dz = make_design(2, 0, 1, 1, boundary_kind::free_free);
        const chain_spec ch = synthesize_free_free(build_jacobi(dz), 2.0);
        REQUIRE(ch.masses.size() == 2);
        REQUIRE(ch.springs.size() == 1);
        CHECK(std::abs(ch.masses[1] - ch.masses[0]) <= 1e-14 * ch.masses[0]);
        CHECK(std::abs(ch.springs[0] - 0.5 * 2.0) <= 1e-14);
    }

    SECTION("route agreement") {
        for (int r : {2, 3}) {
            for (int big_n = 1; big_n <= 12; ++big_n) {
                const spectral_design dz = make_design(r, 0, 1, big_n,
                                                       boundary_kind::free_free);
                const jacobi_matrix jm = build_jacobi(dz);
                const chain_spec fac = synthesize_free_free(jm);
                const chain_spec clo = synthesize_free_free_closed(dz);
                INFO("r=" << r << " N=" << big_n);

                CHECK(rel_span_delta(fac.masses, clo.masses) <= 1e-9);
                CHECK(rel_span_delta(fac.springs, clo.springs) <= 1e-9);

                for (std::size_t i = 0; i < fac.masses.size(); ++i)
                    CHECK(std::abs(fac.masses[big_n - i] - fac.masses[i]) <=
                          1e-9 * fac.masses[i]);

                CHECK(jacobi_round_trip_defect(fac, jm) <= 1e-9);

                // numeric spectrum keeps the translation mode exactly at zero
                const std::vector<double> xs = chain_eigenvalues_numeric(fac);
                CHECK(xs[0] == 0.0);
                CHECK(rel_span_delta(xs, eigenvalues(dz)) <= 1e-8);
            }
        }
    }

    SECTION("raw ladder agrees on moderate designs") {
        for (int r : {2, 3}) {
            for (int big_n = 1; big_n <= 8; ++big_n) {
                const spectral_design dz = make_design(r, 0, 1, big_n,
                                                       boundary_kind::free_free);
                const jacobi_matrix jm = build_jacobi(dz);
                const chain_spec fac = synthesize_free_free(jm);
                const chain_spec lad = synthesize_free_free_ladder(jm);
                INFO("r=" << r << " N=" << big_n);
                CHECK(rel_span_delta(lad.masses, fac.masses) <= 1e-9);
                CHECK(rel_span_delta(lad.springs, fac.springs) <= 1e-9);
            }
        }
    }

    SECTION("ladder tail reproduces the lowering factors") {
        for (int r : {2, 3}) {
            const spectral_design dz = make_design(r, 0, 1, 8, boundary_kind::free_free);
            const jacobi_matrix jm = build_jacobi(dz);
            const std::vector<double> y = ladder_values(jm);
            for (int i = 0; i < jm.size; ++i) {
                CHECK(-jm.factor_a[i] >= 0.0);
                if (i < jm.size - 1)  // y_N = -A_N = 0 only in exact arithmetic
                    CHECK(std::abs(y[i] + jm.factor_a[i]) <= 1e-11 * std::abs(y[i]));
            }
        }
    }

    SECTION("factor route needs the stored factors") {
        const spectral_design dz = make_design(2, 0, 1, 3, boundary_kind::free_free);
        jacobi_matrix jm = build_jacobi(dz);
        jm.factor_a.clear();
        jm.factor_c.clear();
        CHECK(thrown_code([&] { synthesize_free_free(jm); }) == "factors");
        CHECK_NOTHROW(synthesize_free_free_ladder(jm));
    }

    SECTION("ladder route is free-free only") {
        const spectral_design dz = make_design(2, 1, 2, 3, boundary_kind::fixed_fixed);
        const jacobi_matrix jm = build_jacobi(dz);
        CHECK(thrown_code([&] { synthesize_free_free_ladder(jm); }) == "boundary");
    }
}

TEST_CASE("forward map") {
    SECTION("two masses, one spring") {
        chain_spec ch;
        ch.boundary = boundary_kind::free_free;
        ch.masses = {2.0, 0.5};
        ch.springs = {3.0};
        const jacobi_matrix jm = chain_to_jacobi(ch);
        REQUIRE(jm.size == 2);
        CHECK(jm.diag[0] == 1.5);   // K1/m0
        CHECK(jm.diag[1] == 6.0);   // K1/m1
        CHECK(jm.offsq[1] == 9.0);  // K1^2/(m0 m1)
    }

    SECTION("weighted constant vector is the kernel") {
        const spectral_design dz = make_design(3, 0, 1, 6, boundary_kind::free_free);
        const chain_spec ch = synthesize_free_free(build_jacobi(dz));
        const jacobi_matrix jm = chain_to_jacobi(ch);
        double scale = 0.0, worst = 0.0;
        for (int i = 0; i <= 6; ++i) {
            const double rm = std::sqrt(ch.masses[i]);
            double s = jm.diag[i] * rm;
            if (i > 0) s -= std::sqrt(jm.offsq[i]) * std::sqrt(ch.masses[i - 1]);
            if (i < 6) s -= std::sqrt(jm.offsq[i + 1]) * std::sqrt(ch.masses[i + 1]);
            scale = std::max(scale, std::abs(jm.diag[i] * rm));
            worst = std::max(worst, std::abs(s));
        }
        CHECK(worst <= 1e-10 * scale);
    }

    SECTION("chain validation codes") {
        chain_spec ch;
        ch.boundary = boundary_kind::free_free;
        ch.masses = {1.0, -1.0};
        ch.springs = {1.0};
        CHECK(thrown_code([&] { require_positive_chain(ch); }) == "masses");
        ch.masses = {1.0, 1.0};
        ch.springs = {0.0};
        CHECK(thrown_code([&] { require_positive_chain(ch); }) == "springs");
        ch.springs = {1.0, 2.0};  // free ends carry exactly N springs
        CHECK(thrown_code([&] { require_positive_chain(ch); }) == "springs");
    }
}
