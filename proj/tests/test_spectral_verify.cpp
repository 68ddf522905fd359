#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "numrange/gallery.hpp"
#include "numrange/spectral.hpp"
#include "oracles.hpp"

using namespace numrange;
using std::numbers::pi;

namespace {

const cplx I1(0.0, 1.0);

ComplexMatrix triangle() { return normal_from_eigs({0.0, 1.0, I1}); }
ComplexMatrix wedge() { return normal_from_eigs({0.0, 1.0 + I1, -1.0 + I1}); }
ComplexMatrix tangent_disk() { return affine_transform(jordan_block(2, 0.0), 2.0, I1); }

double min_imag(const BoundaryAtlas& atlas) {
    double lo = kInfinity;
    for (const cplx z : atlas.vertices) lo = std::min(lo, z.imag());
    return lo;
}

CVector unit(std::size_t n, std::size_t k) {
    CVector v(n);
    v[k] = 1.0;
    return v;
}

}  // namespace

TEST_CASE("verdict thresholds") {
    CHECK(verdict_for(0.5, 1.0) == Verdict::Pass);
    CHECK(verdict_for(50.0, 1.0) == Verdict::Inconclusive);
    CHECK(verdict_for(101.0, 1.0) == Verdict::Fail);
    CHECK(std::string(to_string(Verdict::Inconclusive)) == "inconclusive");
}

TEST_CASE("normalize_at") {
    SUBCASE("triangle corner: the sector axis becomes the imaginary axis") {
        const auto a = triangle();
        const auto n = normalize_at(a, 0.0, compute_boundary(a));
        CHECK(std::arg(n.record.a) == doctest::Approx(pi / 4));
        const auto atlas = compute_boundary(n.matrix);
        CHECK(min_imag(atlas) >= -1e-9 * atlas.scale);
        // edges leave 0 at 45 degrees on both sides
        const auto img1 = n.record.a * 1.0 + n.record.b, imgi = n.record.a * I1 + n.record.b;
        CHECK(std::arg(img1) == doctest::Approx(pi / 4));
        CHECK(std::arg(imgi) == doctest::Approx(3 * pi / 4));
    }
    SUBCASE("already normalized") {
        const auto a = wedge();
        const auto n = normalize_at(a, 0.0, compute_boundary(a));
        CHECK(std::abs(n.record.a - 1.0) < 1e-12);
        CHECK(std::abs(n.record.b) < 1e-12);
    }
    SUBCASE("rightmost disk point") {
        const auto a = jordan_block(2, 0.0);
        const auto n = normalize_at(a, 0.5, compute_boundary(a));
        // outward normal 0 must turn to -pi/2
        CHECK(std::arg(n.record.a) == doctest::Approx(-pi / 2));
        CHECK(std::abs(n.record.frame.normal_angle) < 1e-6);
        const auto atlas = compute_boundary(n.matrix);
        CHECK(min_imag(atlas) >= -1e-9 * atlas.scale);
        CHECK(std::abs(rayleigh(n.matrix, std::vector<cplx>{1.0, 1.0})) < 1e-6);
    }
    SUBCASE("interior point is rejected") {
        const auto a = triangle();
        CHECK_THROWS_AS(normalize_at(a, cplx(0.2, 0.2), compute_boundary(a)), Error);
    }
}

TEST_CASE("corner eigenvalue check") {
    const auto a = triangle();
    const auto atlas = compute_boundary(a);
    auto reports = corner_eigenvalue_check(a, classify_boundary(a, atlas));
    REQUIRE(reports.size() >= 3);
    for (const auto& r : reports) {
        CHECK(r.verdict == Verdict::Pass);
        CHECK(r.margin < 1e-12);
        CHECK(r.theorem_id == "corner_eigenvalue");
    }

    const auto w = wedge();
    const auto wa = compute_boundary(w);
    reports = corner_eigenvalue_check(w, classify_boundary(w, wa, std::vector<cplx>{0.0}));
    REQUIRE(reports.size() == 1);
    CHECK(reports[0].verdict == Verdict::Pass);

    const auto j = jordan_block(2, 0.0);
    CHECK(corner_eigenvalue_check(j, classify_boundary(j, compute_boundary(j))).empty());
}

TEST_CASE("corner eigenvalue check on random normal matrices") {
    int corners = 0;
    for (std::uint64_t seed = 1; seed <= 30; ++seed) {
        const auto a = random_normal(seed, 2 + seed % 9);
        if (degeneracy_check(a).kind != Degeneracy::Kind::FullDim) continue;
        const auto atlas = compute_boundary(a);
        for (const auto& r : corner_eigenvalue_check(a, classify_boundary(a, atlas), {1e-7, 0.0, seed})) {
            ++corners;
            CHECK(r.verdict != Verdict::Fail);
            if (r.verdict == Verdict::Pass) CHECK(r.margin <= 1e-8 * spectral_norm(a));
        }
    }
    CHECK(corners >= 60);
}

TEST_CASE("spectrum membership") {
    const auto a = triangle();
    auto r = spectrum_membership_check(a, 0.0);
    CHECK(r.verdict == Verdict::Pass);
    CHECK(r.margin < 1e-12);
    r = spectrum_membership_check(a, 0.5, {}, false);
    CHECK(r.margin == doctest::Approx(0.5));
    CHECK(r.verdict == Verdict::Inconclusive);
    // the witness realizes the margin
    CVector res = multiply(a, r.witness);
    axpy(-0.5, r.witness, res);
    CHECK(norm(res) == doctest::Approx(0.5));
    CHECK(norm(r.witness) == doctest::Approx(1.0));
}

TEST_CASE("boundary eigenvector normality") {
    const auto a = triangle();
    const auto atlas = compute_boundary(a);
    auto r = boundary_eigen_normality_check(a, 1.0, unit(3, 1), atlas);
    CHECK(r.verdict == Verdict::Pass);
    CHECK(r.margin == 0.0);
    CHECK_THROWS_AS(boundary_eigen_normality_check(a, 1.0, unit(3, 0), atlas), Error);

    // i stays a vertex of the hull of the triangle and the disk around 2
    ComplexMatrix b(5);
    b(0, 0) = 0.0;
    b(1, 1) = 1.0;
    b(2, 2) = I1;
    b(3, 3) = b(4, 4) = 2.0;
    b(3, 4) = 1.0;
    const auto batlas = compute_boundary(b);
    r = boundary_eigen_normality_check(b, I1, unit(5, 2), batlas);
    CHECK(r.verdict == Verdict::Pass);
    // 2 is an eigenvalue but lies inside the disk
    CHECK_THROWS_AS(boundary_eigen_normality_check(b, 2.0, unit(5, 3), batlas), Error);
}

TEST_CASE("boundary eigenvector normality on hidden normal parts") {
    std::mt19937_64 rng(33);
    int checked = 0;
    for (int trial = 0; trial < 20; ++trial) {
        // U^H (D + B) U with D outside Num(B): the entries of D are boundary eigenvalues
        const std::size_t nb = 3 + trial % 4;
        const ComplexMatrix bb = oracle::random_matrix(rng, nb);
        const double reach = 3.0 * bb.frobenius_norm();
        ComplexMatrix m(nb + 2);
        for (std::size_t i = 0; i < nb; ++i)
            for (std::size_t j = 0; j < nb; ++j) m(i, j) = bb(i, j);
        m(nb, nb) = std::polar(reach, 0.3 * trial);
        m(nb + 1, nb + 1) = std::polar(reach, 0.3 * trial + 2.0);
        const ComplexMatrix u = oracle::random_unitary(rng, nb + 2);
        const ComplexMatrix a = u.adjoint() * m * u;
        const auto atlas = compute_boundary(a);
        for (const auto& e : eig_general(a)) {
            if (std::abs(std::abs(e.value) - reach) > 1e-8 * reach) continue;
            const auto r = boundary_eigen_normality_check(a, e.value, e.vector, atlas);
            CHECK(r.verdict == Verdict::Pass);
            CHECK(r.margin <= 1e-7 * spectral_norm(a));
            ++checked;
        }
    }
    CHECK(checked == 40);
}

TEST_CASE("K functional on the wedge") {
    const auto a = wedge();
    const auto atlas = compute_boundary(a);
    double prev = kInfinity;
    for (const double s : {0.025, 0.05, 0.1, 0.2, 0.4}) {
        const double k = k_functional(a, s, atlas);
        CHECK(k * s == doctest::Approx(std::sqrt(2.0)).epsilon(1e-6));
        CHECK(k <= prev);
        prev = k;
    }
    // no interior point beats the boundary infimum
    std::mt19937_64 rng(5);
    const double k = k_functional(a, 0.2, atlas);
    for (int t = 0; t < 20000; ++t) {
        const auto v = oracle::random_vector(rng, 3);
        const cplx z = rayleigh(a, v);
        if (z.real() > 0.0 && std::abs(z) < 0.2) CHECK(z.imag() / (z.real() * z.real()) >= k * (1 - 1e-9));
    }
}

TEST_CASE("K functional on the tangent disk") {
    const auto a = tangent_disk();
    const auto atlas = compute_boundary(a);
    double prev = kInfinity;
    for (const double s : {0.005, 0.01, 0.02, 0.05}) {
        const double k = k_functional(a, s, atlas);
        CHECK(k >= 0.45);
        CHECK(k <= 0.55);
        CHECK(k <= prev + 1e-12);
        prev = k;
    }
}

TEST_CASE("K functional preconditions and empty sets") {
    const auto shifted = affine_transform(wedge(), 1.0, 0.3);
    CHECK_THROWS_AS(k_functional(shifted, 0.1, compute_boundary(shifted)), Error);
    const auto left = normal_from_eigs({0.0, -1.0 + I1, I1});
    CHECK(k_functional(left, 0.5, compute_boundary(left)) == kInfinity);
}

TEST_CASE("discretization probe") {
    CHECK_THROWS_AS(discretization_sequence_probe({}, 0.0), Error);

    CHECK(discretization_sequence_probe({jordan_block(4, 0.0), jordan_block(8, 0.0), jordan_block(16, 0.0)}, 0.0)
              .empty());

    std::vector<ComplexMatrix> family;
    for (const std::size_t n : {11, 21, 41}) {
        std::vector<cplx> eigs;
        for (std::size_t k = 0; k < n; ++k) eigs.push_back(double(k) / double(n - 1));
        eigs.push_back(cplx(0.5, 0.5));
        family.push_back(normal_from_eigs(eigs));
    }
    const auto reports = discretization_sequence_probe(family, 0.0);
    REQUIRE(reports.size() == 4);
    for (std::size_t i = 0; i < 3; ++i) CHECK(reports[i].margin < 1e-9);
    CHECK(reports.back().theorem_id == "sequence_trend");
    CHECK(reports.back().verdict == Verdict::Pass);
}

TEST_CASE("bump corner shrinks toward 0 as the box grows") {
    std::vector<ComplexMatrix> family;
    for (const double L : {10.0, 20.0, 40.0})
        family.push_back(schrodinger_1d(bump_potential(1.0 + I1), {L, std::size_t(10 * L)}));
    ProbeOptions opts;
    opts.classify.eps_min_rel = 1e-5;
    opts.count_radius = 0.05;
    const auto reports = discretization_sequence_probe(family, 0.0, opts);
    REQUIRE(reports.size() == 4);
    CHECK(reports[0].margin > reports[1].margin);
    CHECK(reports[1].margin > reports[2].margin);
    CHECK(reports[2].margin < 0.01);
    CHECK(reports.back().verdict == Verdict::Pass);
}

TEST_CASE("hyperbola and sector checks") {
    const cplx c = 1.0 + I1;
    const auto atlas = compute_boundary(harmonic_oscillator(c, {12.0, 600}));
    const auto r = harmonic_hyperbola_check(atlas, c);
    CHECK(r.verdict == Verdict::Pass);
    CHECK(r.margin <= 0.05 * 0.25);
    // the same range is not inside a narrower sector
    CHECK(sector_containment_check(atlas, cplx(2.0, 1.0)).verdict == Verdict::Fail);
    CHECK_THROWS_AS(harmonic_hyperbola_check(atlas, 1.0), Error);
}
