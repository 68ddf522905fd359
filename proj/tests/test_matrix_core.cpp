#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "numrange/error.hpp"
#include "numrange/linalg.hpp"
#include "oracles.hpp"

using namespace numrange;
using std::numbers::pi;

namespace {

ComplexMatrix tridiagonal(std::size_t n, double d, double off) {
    ComplexMatrix t(n);
    for (std::size_t i = 0; i < n; ++i) {
        t(i, i) = d;
        if (i + 1 < n) t(i, i + 1) = t(i + 1, i) = off;
    }
    return t;
}

double eig_residual(const ComplexMatrix& h, const HermitianEig& e) {
    double worst = 0.0;
    for (std::size_t k = 0; k < e.values.size(); ++k) {
        CVector r = multiply(h, e.vectors[k]);
        axpy(-e.values[k], e.vectors[k], r);
        worst = std::max(worst, norm(r));
    }
    return worst;
}

}  // namespace

TEST_CASE("rotated hermitian part") {
    const auto j = ComplexMatrix::from_rows({{0, 1}, {0, 0}});
    const auto h0 = rotated_hermitian_part(j, 0.0);
    CHECK(std::abs(h0(0, 1) - 0.5) < 1e-15);
    CHECK(std::abs(h0(1, 0) - 0.5) < 1e-15);
    CHECK(std::abs(h0(0, 0)) == 0.0);

    const cplx i1(0, 1);
    const auto hi = rotated_hermitian_part(ComplexMatrix::diagonal(std::vector<cplx>{i1}), pi / 2);
    CHECK(std::abs(hi(0, 0) - 1.0) < 1e-15);

    const auto two = ComplexMatrix::from_rows({{0, 2}, {0, 0}});
    const auto e = eig_hermitian(rotated_hermitian_part(two, 0.7));
    CHECK(e.values[0] == doctest::Approx(-1.0).epsilon(1e-14));
    CHECK(e.values[1] == doctest::Approx(1.0).epsilon(1e-14));
}

TEST_CASE("quadratic form identity <H_theta v, v> = Re(e^{-i theta} <Av, v>)") {
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> ang(0.0, 2 * pi);
    for (int trial = 0; trial < 20; ++trial) {
        const auto a = oracle::random_matrix(rng, 6);
        const auto v = normalized(oracle::random_vector(rng, 6));
        const double th = ang(rng);
        const double lhs = inner(multiply(rotated_hermitian_part(a, th), v), v).real();
        const double rhs = (std::polar(1.0, -th) * rayleigh(a, v)).real();
        CHECK(std::abs(lhs - rhs) <= 1e-12 * a.frobenius_norm());
    }
}

TEST_CASE("eig_hermitian small fixtures") {
    const auto e = eig_hermitian(ComplexMatrix::from_rows({{0, 0.5}, {0.5, 0}}));
    CHECK(e.values[0] == doctest::Approx(-0.5));
    CHECK(e.values[1] == doctest::Approx(0.5));

    const auto id = eig_hermitian(ComplexMatrix::identity(5));
    for (double v : id.values) CHECK(v == doctest::Approx(1.0).epsilon(1e-14));

    const auto t = eig_hermitian(tridiagonal(4, 0.0, 0.5));
    CHECK(std::abs(t.values.back() - std::cos(pi / 5)) < 1e-14);
}

TEST_CASE("eig_hermitian rejects non-hermitian input") {
    const auto a = ComplexMatrix::from_rows({{0, 1}, {0, 0}});
    CHECK_THROWS_AS(eig_hermitian(a), Error);
    try {
        eig_hermitian(a);
    } catch (const Error& err) {
        CHECK(err.kind() == ErrorKind::NotHermitian);
    }
}

TEST_CASE("eig_hermitian agrees with Jacobi oracle, residual and orthonormality") {
    std::mt19937_64 rng(2024);
    for (std::size_t n : {1u, 2u, 3u, 7u, 16u, 31u}) {
        const auto a = oracle::random_matrix(rng, n);
        const auto h = rotated_hermitian_part(a, 0.3);
        const auto e = eig_hermitian(h);
        const auto ref = oracle::hermitian_eigenvalues(h);
        const double tol = 1e-12 * double(n) * std::max(1.0, h.frobenius_norm());
        REQUIRE(e.values.size() == n);
        for (std::size_t k = 0; k < n; ++k) CHECK(std::abs(e.values[k] - ref[k]) <= tol);
        for (std::size_t k = 1; k < n; ++k) CHECK(e.values[k - 1] <= e.values[k]);
        CHECK(eig_residual(h, e) <= tol);
        for (std::size_t j = 0; j < n; ++j)
            for (std::size_t k = 0; k < n; ++k)
                CHECK(std::abs(inner(e.vectors[j], e.vectors[k]) - (j == k ? 1.0 : 0.0)) <= 1e-12 * double(n));
    }
}

TEST_CASE("top_eigenspace matches the full decomposition") {
    std::mt19937_64 rng(7);
    for (std::size_t n : {1u, 4u, 12u, 40u}) {
        const auto h = rotated_hermitian_part(oracle::random_matrix(rng, n), 1.1);
        const auto top = top_eigenspace(h, 1e-9);
        const auto full = eig_hermitian(h);
        CHECK(top.multiplicity() == 1);
        CHECK(std::abs(top.top() - full.values.back()) <= 1e-12 * double(n) * h.frobenius_norm());
        CVector r = multiply(h, top.vectors[0]);
        axpy(-top.top(), top.vectors[0], r);
        CHECK(norm(r) <= 1e-11 * h.frobenius_norm());
        CHECK(std::abs(norm(top.vectors[0]) - 1.0) < 1e-13);
    }
}

TEST_CASE("top_eigenspace reports clusters") {
    std::vector<cplx> d = {3.0, 1.0, 3.0, -2.0, 3.0 - 1e-13};
    std::mt19937_64 rng(5);
    const auto u = oracle::random_unitary(rng, d.size());
    const auto h = u * ComplexMatrix::diagonal(d) * u.adjoint();
    const auto top = top_eigenspace(rotated_hermitian_part(h, 0.0), 1e-8);
    REQUIRE(top.multiplicity() == 3);
    for (std::size_t j = 0; j < 3; ++j)
        for (std::size_t k = 0; k < 3; ++k)
            CHECK(std::abs(inner(top.vectors[j], top.vectors[k]) - (j == k ? 1.0 : 0.0)) < 1e-10);
}

TEST_CASE("top_eigenspace on tridiagonal storage") {
    HermitianTridiagonal t;
    const std::size_t n = 200;
    t.diag.assign(n, 2.0);
    t.sub.assign(n - 1, cplx(0.0, -1.0));  // phases must not matter
    const auto top = top_eigenspace(t, 1e-12);
    CHECK(std::abs(top.top() - (2.0 + 2.0 * std::cos(pi / double(n + 1)))) < 1e-12);
    ComplexMatrix dense(n);
    for (std::size_t i = 0; i < n; ++i) {
        dense(i, i) = 2.0;
        if (i + 1 < n) {
            dense(i + 1, i) = t.sub[i];
            dense(i, i + 1) = std::conj(t.sub[i]);
        }
    }
    CVector r = multiply(dense, top.vectors[0]);
    axpy(-top.top(), top.vectors[0], r);
    CHECK(norm(r) < 1e-10);
}

TEST_CASE("eig_general fixtures") {
    const cplx i1(0, 1);
    auto pairs = eig_general(ComplexMatrix::diagonal(std::vector<cplx>{0.0, 1.0, i1}));
    std::vector<cplx> vals;
    for (auto& p : pairs) vals.push_back(p.value);
    CHECK(oracle::match_distance(vals, {0.0, 1.0, i1}) < 1e-14);

    const auto nil = eigenvalues(ComplexMatrix::from_rows({{0, 1}, {0, 0}}));
    REQUIRE(nil.size() == 2);
    CHECK(std::abs(nil[0]) < 1e-14);
    CHECK(std::abs(nil[1]) < 1e-14);

    // companion matrix of z^2 - 3z + 2
    const auto comp = ComplexMatrix::from_rows({{3, -2}, {1, 0}});
    CHECK(oracle::match_distance(eigenvalues(comp), {1.0, 2.0}) < 1e-12);
}

TEST_CASE("eig_general on random and normal matrices") {
    std::mt19937_64 rng(99);
    for (std::size_t n : {3u, 8u, 20u, 50u}) {
        const auto a = oracle::random_matrix(rng, n);
        const auto pairs = eig_general(a);
        REQUIRE(pairs.size() == n);
        const double anorm = spectral_norm(a);
        for (const auto& p : pairs) {
            CVector r = multiply(a, p.vector);
            axpy(-p.value, p.vector, r);
            CHECK(norm(r) <= 1e-9 * double(n) * anorm);
            CHECK(std::abs(norm(p.vector) - 1.0) < 1e-12);
        }
        std::vector<cplx> d = oracle::random_vector(rng, n);
        const auto u = oracle::random_unitary(rng, n);
        const auto normal = u * ComplexMatrix::diagonal(d) * u.adjoint();
        CHECK(oracle::match_distance(eigenvalues(normal), d) < 1e-10);
    }
}

TEST_CASE("smallest singular value") {
    CHECK(smallest_singular_value(ComplexMatrix::diagonal(std::vector<cplx>{0.0, 1.0}), 0.0) < 1e-14);
    CHECK(smallest_singular_value(ComplexMatrix::diagonal(std::vector<cplx>{0.0, 3.0}), 1.0) ==
          doctest::Approx(1.0).epsilon(1e-13));

    const auto j = ComplexMatrix::from_rows({{0, 1}, {0, 0}});
    const double s = smallest_singular_value(j, 0.5);
    CHECK(s > 0.0);
    CHECK(s < 0.5);
    CHECK(std::abs(s - oracle::smallest_singular_value(j, 0.5)) < 1e-12);

    std::mt19937_64 rng(3);
    for (std::size_t n : {2u, 5u, 12u}) {
        const auto a = oracle::random_matrix(rng, n);
        const cplx lam(0.3, -0.2);
        const auto t = smallest_singular_triple(a, lam);
        CHECK(std::abs(t.value - oracle::smallest_singular_value(a, lam)) < 1e-10);
        for (int trial = 0; trial < 10; ++trial) {
            const auto v = normalized(oracle::random_vector(rng, n));
            CVector r = multiply(a, v);
            axpy(-lam, v, r);
            CHECK(t.value <= norm(r) + 1e-14);
        }
    }
}

TEST_CASE("smallest singular value on banded input") {
    const std::size_t n = 300;
    ComplexMatrix t(n);
    for (std::size_t i = 0; i < n; ++i) {
        t(i, i) = cplx(2.0, 0.1);
        if (i + 1 < n) t(i, i + 1) = t(i + 1, i) = -1.0;
    }
    // eigenvalues 2 - 2cos(k pi/(n+1)) + 0.1 i; normal, so sigma_min is a distance
    const cplx lam(1.0, 0.1);
    double best = 1e9;
    for (std::size_t k = 1; k <= n; ++k) best = std::min(best, std::abs(2.0 - 2.0 * std::cos(k * pi / (n + 1)) - 1.0));
    CHECK(std::abs(smallest_singular_value(t, lam) - best) < 1e-10);
}

TEST_CASE("rayleigh quotient") {
    const double r = 1.0 / std::sqrt(2.0);
    CHECK(std::abs(rayleigh(ComplexMatrix::diagonal(std::vector<cplx>{0.0, 1.0}), CVector{r, r}) - 0.5) < 1e-15);
    CHECK(std::abs(rayleigh(ComplexMatrix::from_rows({{0, 1}, {0, 0}}), CVector{r, r}) - 0.5) < 1e-15);
    std::mt19937_64 rng(1);
    CHECK(std::abs(rayleigh(ComplexMatrix::identity(4), normalized(oracle::random_vector(rng, 4))) - 1.0) < 1e-15);
    CHECK_THROWS_AS(rayleigh(ComplexMatrix::identity(2), CVector{0.0, 0.0}), Error);
}
