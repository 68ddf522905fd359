#pragma once

#include <algorithm>
#include <complex>
#include <limits>
#include <string>
#include <utility>
#include <vector>

namespace numrange {

using cplx = std::complex<double>;

inline constexpr double kInfinity = std::numeric_limits<double>::infinity();

/// Point in the local frame at a boundary point: xi runs along the supporting
/// line (counterclockwise positive), eta >= 0 points into the body.
struct FrameSample {
    double xi = 0.0;
    double eta = 0.0;
};

struct CanonicalFrame {
    cplx origin;
    double normal_angle = 0.0;  ///< outward normal direction of the chosen supporting line

    FrameSample to_frame(cplx z) const noexcept;
    cplx from_frame(FrameSample s) const noexcept;
};

/// Frame whose supporting line is orthogonal to the axis of the normal cone
/// [theta1, theta2]. Throws DegenerateCone when the cone is a half-plane or wider.
CanonicalFrame canonical_frame(cplx lambda, double theta1, double theta2);

enum class Side { Left, Right, Both };
const char* to_string(Side side) noexcept;

/// One-sided statistics of eta / xi^2.
struct SideEstimate {
    double gamma_u = 0.0;   ///< max ratio in the finest window, +inf when flagged
    double gamma_l = 0.0;   ///< min ratio in the finest window, +inf when flagged
    double beta = 2.0;      ///< least-squares slope of log eta against log |xi|
    double beta_u = 2.0;    ///< exponent implied by the upper envelope of the ratio
    double beta_l = 2.0;    ///< same for the lower envelope
    double gamma_median = 0.0;  ///< median ratio over the finer half of the windows
    bool upper_infinite = false;
    bool lower_infinite = false;
    bool upper_zero = false;
    bool lower_zero = false;
    bool quarters_disagree = false;
    std::size_t samples = 0;
};

struct CurvatureEstimate {
    SideEstimate plus;   ///< xi > 0
    SideEstimate minus;  ///< xi < 0
    double eps_min = 0.0;
    double eps_max = 0.0;

    double gamma_u() const noexcept { return std::max(plus.gamma_u, minus.gamma_u); }
    double gamma_l() const noexcept { return std::min(plus.gamma_l, minus.gamma_l); }
};

struct CurvatureOptions {
    double eps_min = 0.0;
    double eps_max = 0.0;
    std::size_t n_min = 8;
    double delta_exp = 0.15;
    double eta_floor = 0.0;  ///< eta at or below this is treated as exactly flat
};

/// Window spanning the |xi| range of the given samples.
CurvatureOptions window_of(const std::vector<FrameSample>& samples);

/// Dyadic-window estimates of the one-sided upper and lower curvatures.
/// Throws InsufficientSamples when a side has fewer than n_min samples in the window.
CurvatureEstimate curvature_estimates(const CanonicalFrame& frame, const std::vector<FrameSample>& samples,
                                      const CurvatureOptions& opts);

enum class BoundaryKind { Round, InfiniteUpperCurvatureOnly, UnilateralInfinite, Corner, FlatInterior };
const char* to_string(BoundaryKind kind) noexcept;

struct BoundaryClass {
    BoundaryKind kind = BoundaryKind::Round;
    double gamma = 0.0;       ///< Round only
    Side side = Side::Both;   ///< UnilateralInfinite only
    double cone_width = 0.0;  ///< Corner only

    /// Corners and unilateral or upper infinite curvature all count as infinite curvature.
    bool infinite_curvature() const noexcept { return kind != BoundaryKind::Round && kind != BoundaryKind::FlatInterior; }
};

/// Throws Ambiguous when the upper-envelope verdicts of the two finest
/// quarter windows disagree on some side.
BoundaryClass classify_point(const CurvatureEstimate& est, double cone_width, double angle_tol = 1e-3,
                             bool on_edge_interior = false);

/// Radius of the largest disk tangent at lambda that the polygon contains,
/// judged from the polygon's vertices (it is treated as a sampled smooth
/// curve). `hull` is counterclockwise. Returns 0 at corners and when the
/// radius falls below rho_tol.
struct DiskOptions {
    double angle_tol = 1e-3;
    double rho_tol = -1.0;   ///< negative: 1e-6 of the diameter
    double tol_geom = -1.0;  ///< negative: 1e-9 of the diameter
};
double inscribed_disk_radius(cplx lambda, const std::vector<cplx>& hull, const DiskOptions& opts = {});

enum class CurveKind { Power, Mixed, PolygonalOscillating };

struct CurveSpec {
    CurveKind kind = CurveKind::Power;
    double alpha = 2.0;
};

/// Boundary samples of eta = f(xi) near 0 for the classic curvature examples.
/// `n_samples` counts samples per side.
std::vector<FrameSample> example_curve(const CurveSpec& spec, std::size_t n_samples, double scale = 1.0);

/// Node points (a_k, b_k) of the oscillating polygonal fixture: g touches x^2
/// at a_k and sqrt(x) at b_k.
std::vector<std::pair<double, double>> oscillating_nodes(double x_min);

/// Curvature radius rho = h + h'' from a uniformly sampled support function
/// and the associated gamma = 1/(2 rho), which is +inf when rho <= rho_tol.
struct SupportCurvature {
    double rho = 0.0;
    double gamma = 0.0;
};
SupportCurvature support_curvature(const std::vector<std::pair<double, double>>& h_samples, double theta0,
                                   double rho_tol = 1e-9);

/// Writes "xi,eta" rows with 17 significant digits.
std::string frame_samples_csv(const std::vector<FrameSample>& samples);

}  // namespace numrange
