#pragma once

#include <optional>
#include <string>
#include <vector>

#include "numrange/convex.hpp"
#include "numrange/error.hpp"
#include "numrange/linalg.hpp"
#include "numrange/matrix.hpp"

namespace numrange {

/// Support data in direction e^{i theta}. For a simple top eigenvalue there is
/// a single boundary point; for a cluster the support line meets Num(A) in an
/// edge whose clockwise and counterclockwise ends are `start` and `end`.
struct SupportSample {
    double theta = 0.0;
    double h = 0.0;
    std::vector<cplx> points;
    std::size_t multiplicity = 1;
    cplx start;
    cplx end;
    std::vector<CVector> vectors;  ///< filled only on request

    cplx point() const noexcept { return points.front(); }
};

/// Evaluates support samples of one matrix. Hermitian and skew parts are
/// cached, and tridiagonal matrices avoid dense work entirely.
class SupportOracle {
public:
    explicit SupportOracle(ComplexMatrix a);

    SupportSample sample(double theta, bool keep_vectors = false) const;

    const ComplexMatrix& matrix() const noexcept { return a_; }
    double norm() const noexcept { return norm_; }
    double gap_tol() const noexcept { return gap_tol_; }

private:
    TopEigenspace top_at(double theta, std::size_t max_vectors) const;
    SupportSample assemble(double theta, TopEigenspace top, bool keep_vectors) const;

    ComplexMatrix a_;
    ComplexMatrix re_;  // (A + A^H) / 2
    ComplexMatrix im_;  // (A - A^H) / 2i
    Band band_;
    bool tridiagonal_ = false;
    double norm_ = 0.0;
    double gap_tol_ = 0.0;
};

SupportSample support_sample(const ComplexMatrix& a, double theta);

struct Edge {
    cplx a;  ///< clockwise end
    cplx b;  ///< counterclockwise end
    double theta = 0.0;  ///< outward normal
};

struct CornerCandidate {
    cplx point;
    double theta1 = 0.0;
    double theta2 = 0.0;

    double width() const noexcept { return theta2 - theta1; }
};

struct BoundaryAtlas {
    std::vector<SupportSample> samples;  ///< sorted by theta in [0, 2 pi)
    std::vector<cplx> vertices;          ///< counterclockwise, closed implicitly
    std::vector<Edge> edges;
    std::vector<CornerCandidate> corner_candidates;
    double scale = 0.0;
    double refine_tol = 0.0;
    double achieved_gap = 0.0;
    bool budget_exhausted = false;

    /// Largest violation of the convexity and support-containment invariants,
    /// relative to scale (0 when both hold exactly).
    double convexity_defect() const;
    double containment_defect() const;
};

struct BoundaryOptions {
    std::size_t angle_budget = 4096;
    double refine_tol = 1e-6;
    std::size_t initial_angles = 32;
    double angle_tol = 1e-3;
};

/// Adaptive support sweep. Requires a full-dimensional numerical range
/// (throws Degenerate otherwise). Running out of budget is reported through
/// `budget_exhausted` and `achieved_gap` rather than an exception.
BoundaryAtlas compute_boundary(const ComplexMatrix& a, const BoundaryOptions& opts = {});
BoundaryAtlas compute_boundary(const SupportOracle& oracle, const BoundaryOptions& opts = {});

struct Degeneracy {
    enum class Kind { Point, Segment, FullDim } kind = Kind::FullDim;
    cplx a;
    cplx b;
};
const char* to_string(Degeneracy::Kind kind) noexcept;

Degeneracy degeneracy_check(const ComplexMatrix& a, double tol = 1e-10);

struct ClassifyOptions {
    double angle_tol = 1e-3;
    double eps_min_rel = 1e-6;  ///< lower end of the scale window, relative to the diameter
    double eps_max_rel = 0.1;
    std::size_t n_min = 8;
    std::size_t default_spread = 16;
    int per_decade = 12;
};

struct PointClassification {
    cplx target;
    cplx point;  ///< boundary point the target snapped to
    BoundaryClass cls;
    double normal_angle = 0.0;
    double cone_lo = 0.0;
    double cone_hi = 0.0;
    bool strict_corner = false;  ///< a corner candidate of the atlas, not only resolution-limited
    bool ambiguous = false;
    std::optional<ErrorKind> error;
    std::string diagnostics;
    std::optional<CurvatureEstimate> estimate;
};

/// Default targets: corner candidates, edge endpoints and evenly spread vertices.
std::vector<cplx> default_targets(const BoundaryAtlas& atlas, std::size_t spread = 16);

std::vector<PointClassification> classify_boundary(const SupportOracle& oracle, const BoundaryAtlas& atlas,
                                                   const std::optional<std::vector<cplx>>& targets = std::nullopt,
                                                   const ClassifyOptions& opts = {});
std::vector<PointClassification> classify_boundary(const ComplexMatrix& a, const BoundaryAtlas& atlas,
                                                   const std::optional<std::vector<cplx>>& targets = std::nullopt,
                                                   const ClassifyOptions& opts = {});

/// aA + bI; throws ZeroScale when a == 0.
ComplexMatrix affine_transform(const ComplexMatrix& a, cplx scale, cplx shift);

}  // namespace numrange
