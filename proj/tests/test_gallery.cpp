#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>

#include "numrange/gallery.hpp"
#include "numrange/spectral.hpp"
#include "oracles.hpp"

using namespace numrange;
using std::numbers::pi;

namespace {

const cplx I1(0.0, 1.0);

// Real symmetric tridiagonal data of a real-potential discretization.
void real_tridiagonal(const ComplexMatrix& m, std::vector<double>& d, std::vector<double>& e) {
    d.clear();
    e.clear();
    for (std::size_t i = 0; i < m.dim(); ++i) {
        d.push_back(m(i, i).real());
        if (i + 1 < m.dim()) e.push_back(m(i + 1, i).real());
    }
}

}  // namespace

TEST_CASE("structured constructors") {
    const auto j = jordan_block(2, 0.0);
    CHECK(j == ComplexMatrix::from_rows({{0, 1}, {0, 0}}));
    CHECK(jordan_block(3, 2.0)(1, 1) == cplx(2.0));
    CHECK(normal_from_eigs({0.0, 1.0, I1}) == ComplexMatrix::diagonal(std::vector<cplx>{0.0, 1.0, I1}));
    CHECK_THROWS_AS(jordan_block(0, 0.0), Error);
    CHECK_THROWS_AS(normal_from_eigs({}), Error);
}

TEST_CASE("random constructors are seeded") {
    CHECK(random_dense(7, 8) == random_dense(7, 8));
    CHECK_FALSE(random_dense(7, 8) == random_dense(8, 8));
    // E|z|^2 = 1 for complex standard normal entries
    const auto big = random_dense(3, 200);
    double mean = 0.0;
    for (std::size_t i = 0; i < 200; ++i)
        for (std::size_t j = 0; j < 200; ++j) mean += std::norm(big(i, j));
    CHECK(mean / 40000.0 == doctest::Approx(1.0).epsilon(0.03));

    const auto u = random_unitary(5, 6);
    const auto g = u.adjoint() * u;
    for (std::size_t i = 0; i < 6; ++i)
        for (std::size_t k = 0; k < 6; ++k) CHECK(std::abs(g(i, k) - (i == k ? 1.0 : 0.0)) < 1e-13);
    const auto nm = random_normal(5, 6);
    const auto comm = nm * nm.adjoint() - nm.adjoint() * nm;
    CHECK(comm.frobenius_norm() < 1e-12 * std::pow(nm.frobenius_norm(), 2));
}

TEST_CASE("free Laplacian on [-pi/2, pi/2]") {
    const auto zero = custom_potential({0.0}, {0.0});
    const GridSpec grid{pi / 2, 99};
    const auto m = schrodinger_1d(zero, grid);
    std::vector<double> d, e;
    real_tridiagonal(m, d, e);
    const double lowest = oracle::tridiagonal_eigenvalue(d, e, 0);
    const double h = grid.h();
    CHECK(lowest == doctest::Approx(2.0 / (h * h) * (1.0 - std::cos(pi / 100.0))).epsilon(1e-10));
    CHECK(std::abs(lowest - 1.0) <= 1e-3);
    CHECK(m(0, 0) == cplx(2.0 / (h * h)));
    CHECK(m(0, 1) == cplx(-1.0 / (h * h)));
}

TEST_CASE("harmonic oscillator ground state") {
    const auto m = harmonic_oscillator(1.0, {12.0, 600});
    std::vector<double> d, e;
    real_tridiagonal(m, d, e);
    CHECK(std::abs(oracle::tridiagonal_eigenvalue(d, e, 0) - 1.0) <= 1e-3);
    CHECK(std::abs(oracle::tridiagonal_eigenvalue(d, e, 1) - 3.0) <= 3e-3);
    CHECK(degeneracy_check(m).kind == Degeneracy::Kind::Segment);
    CHECK_THROWS_AS(harmonic_oscillator(I1), Error);
    CHECK_THROWS_AS(harmonic_oscillator(1.0, {12.0, 4}), Error);
}

TEST_CASE("bump profile") {
    CHECK(bump_profile(0.0) == doctest::Approx(std::exp(-1.0)));
    CHECK(bump_profile(1.0) == 0.0);
    CHECK(bump_profile(-3.0) == 0.0);
    CHECK(bump_profile(0.5) == doctest::Approx(std::exp(-1.0 / 0.75)));
    const auto free = schrodinger_1d(bump_potential(0.0), {40.0, 200});
    CHECK(degeneracy_check(free).kind == Degeneracy::Kind::Segment);
}

TEST_CASE("bump range lies in the sector x >= y >= 0") {
    const auto m = gallery_matrix("bump:1+1i");
    CHECK(m.dim() == 1200);
    const auto atlas = compute_boundary(m);
    const auto r = sector_containment_check(atlas, 1.0 + I1, 1e-8 * atlas.scale);
    CHECK(r.verdict == Verdict::Pass);
    // the imaginary part is <W f, f>, so it never exceeds max W
    for (const cplx z : atlas.vertices) CHECK(z.imag() <= std::exp(-1.0) * (1.0 + 1e-9));
}

TEST_CASE("harmonic boundary follows t1 t2 = 1/4") {
    const cplx c = 1.0 + I1;
    const auto atlas = compute_boundary(harmonic_oscillator(c, {12.0, 600}));
    double lowest = kInfinity;
    for (const cplx z : atlas.vertices) {
        const double t2 = z.imag() / c.imag(), t1 = z.real() - c.real() * t2;
        if (t2 >= 0.2 && t2 <= 2.0) lowest = std::min(lowest, t1 * t2);
    }
    CHECK(lowest >= 0.245);
    CHECK(lowest <= 0.25 + 1e-3);
}

TEST_CASE("grid refinement roughly nests the ranges") {
    // the left part of the range (bounded support values) converges as the grid refines
    const auto coarse = compute_boundary(gallery_matrix("bump:1+1i,10,100"));
    const auto fine = compute_boundary(gallery_matrix("bump:1+1i,10,201"));
    const SupportOracle fo(gallery_matrix("bump:1+1i,10,201"));
    for (const auto& s : coarse.samples) {
        if (std::cos(s.theta) > -0.2) continue;
        CHECK(s.h <= fo.sample(s.theta).h + 1e-3 * std::abs(s.h) + 1e-6 * fine.scale);
    }
}

TEST_CASE("gallery names and complex parsing") {
    CHECK(parse_complex("1+1i") == cplx(1, 1));
    CHECK(parse_complex("0.3-2i") == cplx(0.3, -2));
    CHECK(parse_complex("i") == cplx(0, 1));
    CHECK(parse_complex("-i") == cplx(0, -1));
    CHECK(parse_complex("-2.5") == cplx(-2.5, 0));
    CHECK(parse_complex("1e-3+2e+1i") == cplx(1e-3, 20));
    CHECK_THROWS_AS(parse_complex("abc"), Error);
    CHECK(gallery_matrix("jordan:2") == jordan_block(2, 0.0));
    CHECK(gallery_matrix("normal:0,1,1i") == normal_from_eigs({0.0, 1.0, I1}));
    CHECK(gallery_matrix("random:4", 9) == random_dense(9, 4));
    CHECK(gallery_matrix("harmonic:1,12,100").dim() == 100);
    CHECK_THROWS_AS(gallery_matrix("nope:1"), Error);
    CHECK_THROWS_AS(gallery_matrix("jordan"), Error);
    CHECK(gallery_entries().size() >= 7);
}
