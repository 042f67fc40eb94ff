#include "doctest.h"

#include "mta/errors.hpp"
#include "mta/linalg.hpp"
#include "mta/measurement.hpp"
#include "mta/problem.hpp"
#include "mta/vqls.hpp"

#include "oracles.hpp"

#include <cmath>
#include <numbers>

using namespace mta;
using namespace mta::vqls;

TEST_CASE("pauli_matrix: fixed 2x2 values") {
    const ComplexMatrix x = pauli_matrix("X");
    CHECK(x(0, 1) == Complex(1.0, 0.0));
    CHECK(x(1, 0) == Complex(1.0, 0.0));
    CHECK(x(0, 0) == Complex(0.0, 0.0));

    const ComplexMatrix y = pauli_matrix("Y");
    CHECK(y(0, 1) == Complex(0.0, -1.0));
    CHECK(y(1, 0) == Complex(0.0, 1.0));

    const ComplexMatrix z = pauli_matrix("Z");
    CHECK(z(0, 0) == Complex(1.0, 0.0));
    CHECK(z(1, 1) == Complex(-1.0, 0.0));

    // Two-qubit string: leftmost character acts on the higher qubit.
    const ComplexMatrix zx = pauli_matrix("ZX");
    const ComplexMatrix expected = kron(pauli_matrix("Z"), pauli_matrix("X"));
    CHECK((zx - expected).max_abs() <= 1e-15);
}

TEST_CASE("pauli_decompose: fixed values") {
    const auto id = pauli_decompose(ComplexMatrix::identity(2));
    REQUIRE(id.terms.size() == 1);
    CHECK(id.terms[0].ops == "I");
    CHECK(id.terms[0].coeff == doctest::Approx(1.0));

    const auto x = pauli_decompose(ComplexMatrix::from_real(2, 2, {0, 1, 1, 0}));
    REQUIRE(x.terms.size() == 1);
    CHECK(x.terms[0].ops == "X");
    CHECK(x.terms[0].coeff == doctest::Approx(1.0));
}

TEST_CASE("pauli_decompose: reconstruction of random Hermitian matrices") {
    for (std::uint64_t seed = 0; seed < 25; ++seed) {
        const ComplexMatrix a = oracles::random_hermitian(4, 2000 + seed);
        const auto decomp = pauli_decompose(a);
        CHECK(decomp.terms.size() <= 16);
        const ComplexMatrix back = reconstruct(decomp);
        CHECK((a - back).frobenius_norm() <= 1e-10 * std::max(1.0, a.frobenius_norm()));
    }
}

TEST_CASE("pauli_decompose: rejects non-power-of-two and non-Hermitian input") {
    CHECK_THROWS_AS(pauli_decompose(ComplexMatrix(3, 3)), InvalidInputError);
    ComplexMatrix nh(2, 2);
    nh(0, 1) = Complex(0.5, 0.5);
    CHECK_THROWS_AS(pauli_decompose(nh), InvalidInputError);
}

TEST_CASE("pauli_expectation: agrees with the dense matrix") {
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
        const CVector psi = oracles::random_state(4, 50 + seed);
        for (const char* ops_cstr : {"XZ", "YI", "ZY", "XX", "IZ"}) {
            const std::string ops(ops_cstr);
            const ComplexMatrix p = pauli_matrix(ops);
            const Complex dense = inner(psi, p * psi);
            CHECK(pauli_expectation(ops, psi) == doctest::Approx(dense.real()).epsilon(1e-12));
            CHECK(std::abs(dense.imag()) <= 1e-12);
        }
    }
}

TEST_CASE("random_pauli_matrix: determinism, hermiticity, exact term count") {
    const ComplexMatrix a = random_pauli_matrix(2, 10, 7);
    const ComplexMatrix b = random_pauli_matrix(2, 10, 7);
    CHECK(a.data() == b.data());
    CHECK(a.is_hermitian(1e-12));

    const auto decomp = pauli_decompose(a);
    CHECK(decomp.terms.size() == 10);

    CHECK_THROWS_AS(random_pauli_matrix(2, 0, 1), InvalidInputError);
    CHECK_THROWS_AS(random_pauli_matrix(2, 17, 1), InvalidInputError);
}

TEST_CASE("estimate_mta_sigma: binomial closed form and endpoints") {
    // Observable with an on-grid spectrum; probe with weight 1/2 on a_0 puts
    // the zero-outcome probability at exactly 1/2.
    const auto basis = linalg::hermitian_eig(oracles::random_hermitian(4, 90));
    std::vector<double> lams = {0.0, 0.25, 0.5, 0.75};
    ComplexMatrix a(4, 4);
    for (std::size_t k = 0; k < 4; ++k) {
        const CVector v = basis.eigenvector(k);
        for (std::size_t i = 0; i < 4; ++i)
            for (std::size_t j = 0; j < 4; ++j) a(i, j) += lams[k] * v[i] * std::conj(v[j]);
    }
    for (std::size_t i = 0; i < 4; ++i)
        for (std::size_t j = i; j < 4; ++j) {
            const Complex avg = 0.5 * (a(i, j) + std::conj(a(j, i)));
            a(i, j) = avg;
            a(j, i) = std::conj(avg);
        }
    const auto obs = problem::observable_from_hermitian(a);

    ansatz::StateVector psi;
    psi.amplitudes.resize(4);
    const CVector a0 = obs.spectrum.eigenvector(0);
    const CVector a2 = obs.spectrum.eigenvector(2);
    for (std::size_t i = 0; i < 4; ++i)
        psi.amplitudes[i] = (a0[i] + a2[i]) / std::numbers::sqrt2;

    const std::uint64_t n = 100000;
    const auto est = estimate_mta_sigma(obs, psi, measurement::PointerConfig{2}, n, 400, 11);
    CHECK(est.mean == doctest::Approx(0.5).epsilon(0.01));
    const double expected = std::sqrt(0.25 / static_cast<double>(n)) / 0.5;
    CHECK(est.sigma_rel == doctest::Approx(expected).epsilon(0.2));
    CHECK_FALSE(est.absolute_sigma);

    // p0 = 1: relative deviation is exactly zero.
    const auto sure = estimate_mta_sigma(obs, ansatz::StateVector{a0},
                                         measurement::PointerConfig{2}, 1000, 50, 3);
    CHECK(sure.sigma_rel == doctest::Approx(0.0));

    // p0 = 0: zero mean triggers the absolute-sigma switch.
    const auto never = estimate_mta_sigma(obs, ansatz::StateVector{a2},
                                          measurement::PointerConfig{2}, 1000, 50, 4);
    CHECK(never.absolute_sigma);
    CHECK(never.sigma_rel == doctest::Approx(0.0));
}

TEST_CASE("estimate_vqls_cost_sigma: single-term matrix matches delta-method oracle") {
    // M = coefficient * single Pauli string, drawn deterministically.
    const ComplexMatrix m = random_pauli_matrix(2, 1, 21);
    std::vector<double> b = {0.3, -0.8, 0.5, 0.1};
    const CVector psi_v = oracles::random_state(4, 22);
    const ansatz::StateVector psi{psi_v};

    const std::uint64_t n_total = 2000000;
    const std::size_t reps = 400;
    const auto est = estimate_vqls_cost_sigma(m, b, psi, n_total, reps, 5);

    // Delta-method: D-hat is exact (M^H M = c^2 I), so
    // sigma(C) = sqrt(sum_P c_P^2 (1 - E_P^2) / N_t) / D.
    const CVector b_hat = normalized(to_complex(b));
    const ComplexMatrix mh = m.adjoint();
    const ComplexMatrix d_op = mh * m;
    const CVector v = mh * b_hat;
    const ComplexMatrix a_op = d_op - outer(v, v);
    const auto a_terms = pauli_decompose(a_op);
    const auto d_terms = pauli_decompose(d_op);
    REQUIRE(d_terms.terms.size() == 1); // c^2 * identity
    const double d_value = d_terms.terms[0].coeff;

    const std::uint64_t n_t =
        n_total / static_cast<std::uint64_t>(a_terms.terms.size() + d_terms.terms.size());
    double var_a = 0.0;
    double mean_a = 0.0;
    for (const auto& term : a_terms.terms) {
        const double e = pauli_expectation(term.ops, psi_v);
        var_a += term.coeff * term.coeff * (1.0 - e * e) / static_cast<double>(n_t);
        mean_a += term.coeff * e;
    }
    const double c_exact = mean_a / d_value;
    const double sigma_rel_oracle = std::sqrt(var_a) / d_value / std::abs(c_exact);

    CHECK(est.mean == doctest::Approx(c_exact).epsilon(0.02));
    CHECK(est.sigma_rel == doctest::Approx(sigma_rel_oracle).epsilon(0.2));
}

TEST_CASE("estimate_vqls_cost_sigma: cost vanishes on the exact solution ray") {
    const auto sys = problem::random_instance(2, 62, 50.0);
    const auto x = linalg::classical_solve(sys.m, sys.b);
    const ansatz::StateVector psi{normalized(to_complex(x))};

    const auto est = estimate_vqls_cost_sigma(sys.m, sys.b, psi, 10000000, 100, 9);
    // The exact cost C(y) is zero; the estimate must be noise around zero
    // and the near-zero-mean handling must keep sigma_rel finite.
    CHECK(std::abs(est.mean) <= 0.01);
    CHECK(std::isfinite(est.sigma_rel));
}

TEST_CASE("estimate_vqls_cost_sigma: starved budgets flag excluded repetitions") {
    // One shot per term makes the denominator estimate a random +-1 sum, so
    // a sizeable fraction of repetitions must be dropped and reported.
    const auto sys = problem::random_instance(2, 77, 50.0);
    const ansatz::StateVector psi{oracles::random_state(4, 78)};
    const auto est = estimate_vqls_cost_sigma(sys.m, sys.b, psi, 1, 200, 6);
    CHECK(est.excluded > 0);
    CHECK(est.excluded < 200);
    CHECK(std::isfinite(est.sigma_rel));
}

TEST_CASE("variance_comparison: smoke sweep shape and determinism") {
    const auto report = variance_comparison(2, {2, 4}, 3, 10, 10000, 31);
    CHECK(report.rows.size() == 6);
    CHECK(report.median_sigma_mta.size() == 2);
    CHECK(report.median_sigma_vqls.size() == 2);
    for (const auto& row : report.rows) {
        CHECK(row.sigma_rel_mta >= 0.0);
        CHECK(row.sigma_rel_vqls >= 0.0);
        CHECK(row.repetitions == 10);
    }
    const auto again = variance_comparison(2, {2, 4}, 3, 10, 10000, 31);
    for (std::size_t i = 0; i < report.rows.size(); ++i) {
        CHECK(report.rows[i].sigma_rel_mta == again.rows[i].sigma_rel_mta);
        CHECK(report.rows[i].sigma_rel_vqls == again.rows[i].sigma_rel_vqls);
    }
}
