#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "numrange/numerical_range.hpp"

namespace numrange {

enum class Verdict { Pass, Fail, Inconclusive };
const char* to_string(Verdict v) noexcept;

struct TheoremReport {
    std::string theorem_id;
    cplx point;
    Verdict verdict = Verdict::Inconclusive;
    double margin = 0.0;
    std::string diagnostics;
    std::uint64_t seed = 0;
    CVector witness;  ///< approximate eigenvector, when the checker produces one
};

struct VerifyOptions {
    double tol_thm = 1e-7;  ///< relative to ||A||
    /// When positive, replaces tol_thm * ||A|| as the pass threshold. Used for
    /// discretized operators whose norm is dominated by the grid.
    double abs_tol = 0.0;
    std::uint64_t seed = 0;
};

/// pass when margin <= tol, inconclusive up to 100 tol, fail beyond.
Verdict verdict_for(double margin, double tol) noexcept;

struct NormalizationRecord {
    cplx a;  ///< the transform is a (A - lambda) = a A + b
    cplx b;
    cplx original_point;
    CanonicalFrame frame;  ///< frame at the point, in original coordinates
};

struct Normalized {
    ComplexMatrix matrix;
    NormalizationRecord record;
};

/// Moves lambda to 0 with the (mid-cone) outward normal pointing to -i, so
/// the range lies in the closed upper half plane and a corner's sector is
/// bisected by the imaginary axis.
Normalized normalize_at(const ComplexMatrix& a, cplx lambda, const BoundaryAtlas& atlas,
                        const ClassifyOptions& opts = {});

/// Every point of infinite upper curvature (corners included) must be an
/// eigenvalue. Corners that only exist at finite resolution, and ambiguous
/// classifications, are never reported as failures.
std::vector<TheoremReport> corner_eigenvalue_check(const ComplexMatrix& a,
                                                   const std::vector<PointClassification>& classes,
                                                   const VerifyOptions& opts = {});

/// sigma_min(A - lambda). With `applies` false the report is informational
/// and never passes or fails.
TheoremReport spectrum_membership_check(const ComplexMatrix& a, cplx lambda, const VerifyOptions& opts = {},
                                        bool applies = true);

/// ||A^H v - conj(lambda) v|| for an eigenpair whose eigenvalue lies on the
/// boundary. Throws NotAnEigenpair or PointNotOnBoundary.
TheoremReport boundary_eigen_normality_check(const ComplexMatrix& a, cplx lambda, std::span<const cplx> v,
                                             const BoundaryAtlas& atlas, const VerifyOptions& opts = {});

/// inf Im z / (Re z)^2 over z in Num(A), 0 < |z| < a, Re z > 0, for a
/// normalized matrix. Infinity when no such z exists. Throws NotNormalized.
double k_functional(const ComplexMatrix& a_normalized, double a, const BoundaryAtlas& atlas);

struct ProbeOptions {
    double count_radius = 0.05;  ///< eigenvalues inside this disk around the target are counted
    ClassifyOptions classify;
    BoundaryOptions boundary;
};

/// Follows the non-round boundary point nearest `target` along a family of
/// growing discretizations. Members without such a point are skipped; the
/// last entry is a trend summary when at least two members contributed.
std::vector<TheoremReport> discretization_sequence_probe(const std::vector<ComplexMatrix>& family, cplx target,
                                                         const ProbeOptions& opts = {});

/// Boundary points z = t1 + c t2 of the atlas with t2 in [t2_lo, t2_hi]:
/// min t1 t2 against 1/4, passing within rel_tol.
TheoremReport harmonic_hyperbola_check(const BoundaryAtlas& atlas, cplx c, double t2_lo = 0.2, double t2_hi = 2.0,
                                       double rel_tol = 0.05);

/// Atlas inside the sector {t1 + s t2 : t1, t2 >= 0}, up to an absolute tolerance.
TheoremReport sector_containment_check(const BoundaryAtlas& atlas, cplx s, double tol = 1e-6);

}  // namespace numrange
