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

const cplx I1(0.0, 1.0);

ComplexMatrix jordan2() { return ComplexMatrix::from_rows({{0, 1}, {0, 0}}); }
ComplexMatrix triangle() { return ComplexMatrix::diagonal(std::vector<cplx>{0.0, 1.0, I1}); }

// Largest distance from points of `a` to the polygon `b` (both counterclockwise).
double one_sided_hausdorff(const std::vector<cplx>& a, const std::vector<cplx>& b) {
    double worst = 0.0;
    for (const cplx z : a) {
        double best = kInfinity;
        for (std::size_t i = 0; i < b.size(); ++i) {
            const cplx p = b[i], d = b[(i + 1) % b.size()] - p;
            const double len2 = std::norm(d);
            const double t = len2 == 0 ? 0 : std::clamp(((z - p) * std::conj(d)).real() / len2, 0.0, 1.0);
            best = std::min(best, std::abs(p + t * d - z));
        }
        worst = std::max(worst, best);
    }
    return worst;
}

double hausdorff(const std::vector<cplx>& a, const std::vector<cplx>& b) {
    return std::max(one_sided_hausdorff(a, b), one_sided_hausdorff(b, a));
}

}  // namespace

TEST_CASE("support samples of a normal matrix") {
    const auto s0 = support_sample(triangle(), 0.0);
    CHECK(s0.h == doctest::Approx(1.0));
    CHECK(std::abs(s0.point() - 1.0) < 1e-14);
    CHECK(s0.multiplicity == 1);
    const auto s1 = support_sample(triangle(), pi / 2);
    CHECK(std::abs(s1.point() - I1) < 1e-14);

    const auto flat = support_sample(ComplexMatrix::diagonal(std::vector<cplx>{0.0, 1.0}), pi / 2);
    CHECK(std::abs(flat.h) < 1e-15);
    CHECK(flat.multiplicity == 2);
    // direction i: counterclockwise along the edge runs from 1 to 0
    CHECK(std::abs(flat.start - 1.0) < 1e-14);
    CHECK(std::abs(flat.end) < 1e-14);
}

TEST_CASE("support invariant |Re(e^{-i theta} p) - h| small") {
    std::mt19937_64 rng(17);
    const auto a = oracle::random_matrix(rng, 9);
    const SupportOracle o(a);
    for (double t = 0; t < 2 * pi; t += 0.1) {
        const auto s = o.sample(t);
        for (const cplx p : s.points) CHECK(std::abs((std::polar(1.0, -t) * p).real() - s.h) <= 2 * o.gap_tol());
        CHECK(std::abs(s.h - oracle::max_support(a, t)) <= 1e-12 * a.frobenius_norm());
    }
}

TEST_CASE("degeneracy check") {
    const auto p = degeneracy_check(ComplexMatrix::identity(3));
    CHECK(p.kind == Degeneracy::Kind::Point);
    CHECK(std::abs(p.a - 1.0) < 1e-15);

    const auto s = degeneracy_check(ComplexMatrix::diagonal(std::vector<cplx>{0.0, 2.0}));
    REQUIRE(s.kind == Degeneracy::Kind::Segment);
    CHECK(oracle::match_distance({s.a, s.b}, {0.0, 2.0}) < 1e-12);

    // a rotated and shifted Hermitian matrix is still a segment
    std::mt19937_64 rng(4);
    const auto g = oracle::random_matrix(rng, 5);
    const auto h = rotated_hermitian_part(g, 0.0);
    const auto rot = affine_transform(h, std::polar(2.0, 0.9), cplx(1, -3));
    CHECK(degeneracy_check(rot).kind == Degeneracy::Kind::Segment);

    CHECK(degeneracy_check(triangle()).kind == Degeneracy::Kind::FullDim);
    CHECK(degeneracy_check(jordan2()).kind == Degeneracy::Kind::FullDim);
}

TEST_CASE("disk atlas") {
    const auto atlas = compute_boundary(jordan2());
    CHECK(!atlas.budget_exhausted);
    CHECK(atlas.scale == doctest::Approx(1.0));
    double worst = 0;
    for (const cplx v : atlas.vertices) worst = std::max(worst, std::abs(std::abs(v) - 0.5));
    CHECK(worst <= 1e-6);
    CHECK(atlas.corner_candidates.empty());
    CHECK(atlas.edges.empty());
    CHECK(atlas.convexity_defect() <= 1e-9);
    CHECK(atlas.containment_defect() <= 1e-12);
}

TEST_CASE("triangle atlas") {
    const auto atlas = compute_boundary(triangle());
    CHECK(atlas.edges.size() == 3);
    REQUIRE(atlas.corner_candidates.size() == 3);
    for (const auto& c : atlas.corner_candidates) {
        if (std::abs(c.point) < 1e-12) CHECK(c.width() == doctest::Approx(pi / 2));
        else CHECK(c.width() == doctest::Approx(3 * pi / 4));
    }
    CHECK(hausdorff(atlas.vertices, {0.0, 1.0, I1}) < 1e-12);
}

TEST_CASE("degenerate input is rejected") {
    CHECK_THROWS_AS(compute_boundary(ComplexMatrix::identity(2)), Error);
    try {
        compute_boundary(ComplexMatrix::identity(2));
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::Degenerate);
    }
}

TEST_CASE("budget exhaustion returns a partial atlas") {
    BoundaryOptions o;
    o.angle_budget = 20;
    const auto atlas = compute_boundary(jordan2(), o);
    CHECK(atlas.budget_exhausted);
    CHECK(atlas.samples.size() == 20);
    CHECK(atlas.achieved_gap > o.refine_tol * atlas.scale);
}

TEST_CASE("classification of fixtures") {
    const auto t = triangle();
    const auto at = compute_boundary(t);
    const auto c = classify_boundary(t, at, std::vector<cplx>{0.0, 0.5, cplx(0.5, 0.5)});
    CHECK(c[0].cls.kind == BoundaryKind::Corner);
    CHECK(c[0].cls.cone_width == doctest::Approx(pi / 2).epsilon(1e-6));
    CHECK(c[0].strict_corner);
    CHECK(c[1].cls.kind == BoundaryKind::FlatInterior);
    CHECK(c[2].cls.kind == BoundaryKind::FlatInterior);

    const auto j = jordan2();
    const auto aj = compute_boundary(j);
    for (const auto& pc : classify_boundary(j, aj)) {
        CAPTURE(pc.point);
        CAPTURE(pc.diagnostics);
        CHECK(!pc.error);
        CHECK(pc.cls.kind == BoundaryKind::Round);
        CHECK(pc.cls.gamma == doctest::Approx(1.0).epsilon(0.1));
    }
}
