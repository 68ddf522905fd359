#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "numrange/numerical_range.hpp"
#include "oracles.hpp"

using namespace numrange;
using std::numbers::pi;

namespace {

// Support function of the polygon: for convex sets the Hausdorff distance is
// the sup-norm difference of support functions.
double polygon_support(const std::vector<cplx>& v, double theta) {
    const cplx rot = std::polar(1.0, -theta);
    double h = -kInfinity;
    for (const cplx z : v) h = std::max(h, (rot * z).real());
    return h;
}

double support_distance(const std::vector<cplx>& a, const std::vector<cplx>& b) {
    double worst = 0.0;
    for (int k = 0; k < 720; ++k) {
        const double t = 2.0 * pi * k / 720.0;
        worst = std::max(worst, std::abs(polygon_support(a, t) - polygon_support(b, t)));
    }
    return worst;
}

std::vector<cplx> mapped(const std::vector<cplx>& v, cplx a, cplx b) {
    std::vector<cplx> out;
    for (const cplx z : v) out.push_back(a * z + b);
    return out;
}

ComplexMatrix random_normal(std::mt19937_64& rng, std::size_t n) {
    const ComplexMatrix u = oracle::random_unitary(rng, n);
    const auto d = oracle::random_vector(rng, n);
    return u * ComplexMatrix::diagonal(d) * u.adjoint();
}

}  // namespace

TEST_CASE("convexity and support containment on random matrices") {
    std::mt19937_64 rng(101);
    for (int trial = 0; trial < 20; ++trial) {
        const std::size_t n = 2 + trial % 7;
        const auto atlas = compute_boundary(oracle::random_matrix(rng, n));
        CHECK(atlas.convexity_defect() <= 1e-9);
        CHECK(atlas.containment_defect() <= 1e-9);
        CHECK_FALSE(atlas.budget_exhausted);
    }
}

TEST_CASE("spectral inclusion") {
    std::mt19937_64 rng(202);
    for (int trial = 0; trial < 20; ++trial) {
        const ComplexMatrix a = oracle::random_matrix(rng, 3 + trial % 6);
        const auto atlas = compute_boundary(a);
        for (const auto& e : eig_general(a))
            for (const auto& s : atlas.samples)
                CHECK((std::polar(1.0, -s.theta) * e.value).real() <= s.h + 1e-9 * atlas.scale);
    }
}

TEST_CASE("normal hull law") {
    std::mt19937_64 rng(303);
    for (int trial = 0; trial < 15; ++trial) {
        const std::size_t n = 3 + trial % 6;
        const ComplexMatrix a = random_normal(rng, n);
        std::vector<cplx> eigs;
        for (const auto& e : eig_general(a)) eigs.push_back(e.value);
        const auto atlas = compute_boundary(a);
        CHECK(support_distance(atlas.vertices, eigs) <= atlas.refine_tol * atlas.scale);
    }
}

TEST_CASE("2x2 ellipse law: foci at the eigenvalues") {
    std::mt19937_64 rng(404);
    int checked = 0;
    for (int trial = 0; trial < 50; ++trial) {
        const ComplexMatrix a = oracle::random_matrix(rng, 2);
        // eigenvalues by the quadratic formula, minor axis from the Frobenius defect
        const cplx tr = a.trace(), det = a(0, 0) * a(1, 1) - a(0, 1) * a(1, 0);
        const cplx disc = std::sqrt(tr * tr - 4.0 * det);
        const cplx l1 = 0.5 * (tr + disc), l2 = 0.5 * (tr - disc);
        const double fro2 = std::pow(a.frobenius_norm(), 2);
        const double minor2 = std::max(0.0, fro2 - std::norm(l1) - std::norm(l2));
        const double major = std::sqrt(minor2 + std::norm(l1 - l2));
        const auto atlas = compute_boundary(a);
        for (const cplx z : atlas.vertices) {
            CHECK(std::abs(std::abs(z - l1) + std::abs(z - l2) - major) <= 1e-6 * atlas.scale);
            ++checked;
        }
    }
    CHECK(checked > 50 * 16);
}

TEST_CASE("affine equivariance") {
    std::mt19937_64 rng(505);
    const std::vector<std::pair<cplx, cplx>> maps = {{2.0, cplx(0, 1)}, {cplx(0, 1), 0.0}, {cplx(-0.3, 0.7), cplx(5, -2)}};
    for (int trial = 0; trial < 5; ++trial) {
        const ComplexMatrix a = oracle::random_matrix(rng, 4 + trial);
        const auto base = compute_boundary(a);
        for (const auto& [s, b] : maps) {
            const auto moved = compute_boundary(affine_transform(a, s, b));
            CHECK(support_distance(moved.vertices, mapped(base.vertices, s, b)) <=
                  2.0 * base.refine_tol * moved.scale);
        }
    }
}

TEST_CASE("affine equivariance of classifications") {
    const std::vector<ComplexMatrix> fixtures = {
        ComplexMatrix::diagonal(std::vector<cplx>{0.0, 1.0, cplx(0, 1)}),
        ComplexMatrix::from_rows({{0, 1}, {0, 0}}),
        ComplexMatrix::from_rows({{0, 1, 0}, {0, 0, 0}, {0, 0, cplx(0.2, 0.9)}}),
    };
    const cplx s(0.6, -1.1), b(3.0, 2.0);
    for (const auto& a : fixtures) {
        const auto atlas = compute_boundary(a);
        const auto targets = default_targets(atlas, 8);
        const auto c0 = classify_boundary(a, atlas, targets);
        const ComplexMatrix m = affine_transform(a, s, b);
        const auto atlas1 = compute_boundary(m);
        const auto c1 = classify_boundary(m, atlas1, mapped(targets, s, b));
        REQUIRE(c0.size() == c1.size());
        for (std::size_t i = 0; i < c0.size(); ++i) {
            INFO("target ", c0[i].target, " diag0 ", c0[i].diagnostics, " diag1 ", c1[i].diagnostics, " err1 ", int(c1[i].error.value_or(ErrorKind::Io)));
            CHECK(c0[i].error == c1[i].error);
            CHECK(c0[i].cls.kind == c1[i].cls.kind);
        }
    }
}

TEST_CASE("unitary invariance") {
    std::mt19937_64 rng(606);
    for (int trial = 0; trial < 10; ++trial) {
        const std::size_t n = 3 + trial % 5;
        const ComplexMatrix a = oracle::random_matrix(rng, n);
        const ComplexMatrix u = oracle::random_unitary(rng, n);
        const auto x = compute_boundary(a);
        const auto y = compute_boundary(u.adjoint() * a * u);
        CHECK(support_distance(x.vertices, y.vertices) <= 2.0 * x.refine_tol * x.scale);
    }
}

TEST_CASE("conjugation: Num(A^H) is the mirror image") {
    std::mt19937_64 rng(707);
    for (int trial = 0; trial < 10; ++trial) {
        const ComplexMatrix a = oracle::random_matrix(rng, 3 + trial % 5);
        const auto x = compute_boundary(a);
        const auto y = compute_boundary(a.adjoint());
        std::vector<cplx> mirrored;
        for (const cplx z : x.vertices) mirrored.push_back(std::conj(z));
        CHECK(support_distance(mirrored, y.vertices) <= 2.0 * x.refine_tol * x.scale);
    }
}
