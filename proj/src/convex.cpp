#include "numrange/convex.hpp"

#include <cmath>
#include <cstdio>
#include <numbers>

#include "numrange/error.hpp"

namespace numrange {
namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;
constexpr double kTinyEta = 1e-300;

struct Window {
    bool used = false;
    double max_ratio = 0.0;
    double min_ratio = kInfinity;
    double log_center = 0.0;
    std::vector<double> ratios;
};

struct EnvelopeFlags {
    double kappa_u = 0.0;
    double kappa_l = 0.0;
    bool any = false;
};

EnvelopeFlags envelope(const std::vector<Window>& w, std::size_t ref, std::size_t from, std::size_t to) {
    EnvelopeFlags f{-kInfinity, kInfinity, false};
    for (std::size_t j = std::max(from, ref + 3); j < to; ++j) {
        if (!w[j].used) continue;
        const double dx = w[ref].log_center - w[j].log_center;
        f.kappa_u = std::max(f.kappa_u, (std::log(w[j].max_ratio) - std::log(w[ref].max_ratio)) / dx);
        f.kappa_l = std::min(f.kappa_l, (std::log(w[j].min_ratio) - std::log(w[ref].min_ratio)) / dx);
        f.any = true;
    }
    if (!f.any) f.kappa_u = f.kappa_l = 0.0;
    return f;
}

SideEstimate estimate_side(const std::vector<FrameSample>& samples, int sign, const CurvatureOptions& opts) {
    std::vector<std::pair<double, double>> pts;  // (|xi|, eta)
    for (const auto& s : samples) {
        const double x = sign * s.xi;
        if (x <= 0.0 || x < opts.eps_min || x > opts.eps_max) continue;
        pts.emplace_back(x, s.eta <= opts.eta_floor ? kTinyEta : s.eta);
    }
    if (pts.size() < opts.n_min)
        throw Error(ErrorKind::InsufficientSamples, std::string(sign > 0 ? "right" : "left") + " side has " +
                                                        std::to_string(pts.size()) + " samples in the window, need " +
                                                        std::to_string(opts.n_min));

    const double lo = std::max(opts.eps_min, std::numeric_limits<double>::min());
    const std::size_t nwin = std::max<std::size_t>(1, static_cast<std::size_t>(std::ceil(std::log2(opts.eps_max / lo))));
    std::vector<Window> win(nwin);
    for (std::size_t j = 0; j < nwin; ++j) win[j].log_center = std::log(opts.eps_max) - (double(j) + 0.5) * std::numbers::ln2;
    for (const auto& [x, eta] : pts) {
        // flat samples keep a constant ratio; a constant eta would fake a -2 exponent
        const double r = eta == kTinyEta ? kTinyEta : eta / (x * x);
        auto j = static_cast<std::size_t>(std::max(0.0, std::floor(std::log2(opts.eps_max / x))));
        j = std::min(j, nwin - 1);
        auto& w = win[j];
        w.used = true;
        w.max_ratio = std::max(w.max_ratio, r);
        w.min_ratio = std::min(w.min_ratio, r);
        w.ratios.push_back(r);
    }

    SideEstimate out;
    out.samples = pts.size();

    // least-squares exponent
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (const auto& [x, eta] : pts) {
        const double lx = std::log(x), ly = std::log(eta);
        sx += lx;
        sy += ly;
        sxx += lx * lx;
        sxy += lx * ly;
    }
    const double np = double(pts.size());
    const double den = np * sxx - sx * sx;
    out.beta = den > 0.0 ? (np * sxy - sx * sy) / den : 2.0;

    std::size_t ref = 0;
    while (!win[ref].used) ++ref;
    std::size_t finest = nwin - 1;
    while (!win[finest].used) --finest;

    const std::size_t half = nwin / 2;
    const EnvelopeFlags fine = envelope(win, ref, half, nwin);
    const double tol = opts.delta_exp;
    out.beta_u = 2.0 - fine.kappa_u;
    out.beta_l = 2.0 - fine.kappa_l;
    out.upper_infinite = out.beta_u < 2.0 - tol;
    out.lower_infinite = out.beta_l < 2.0 - tol;
    out.upper_zero = out.beta_u > 2.0 + tol;
    out.lower_zero = out.beta_l > 2.0 + tol;
    if (out.lower_infinite) out.upper_infinite = true;

    const std::size_t q = half + (nwin - half) / 2;
    const EnvelopeFlags q1 = envelope(win, ref, half, q);
    const EnvelopeFlags q2 = envelope(win, ref, q, nwin);
    if (q1.any && q2.any) out.quarters_disagree = ((2.0 - q1.kappa_u) < 2.0 - tol) != ((2.0 - q2.kappa_u) < 2.0 - tol);

    out.gamma_u = out.upper_infinite ? kInfinity : win[finest].max_ratio;
    out.gamma_l = out.lower_infinite ? kInfinity : win[finest].min_ratio;

    std::vector<double> fine_ratios;
    for (std::size_t j = half; j < nwin; ++j) fine_ratios.insert(fine_ratios.end(), win[j].ratios.begin(), win[j].ratios.end());
    if (fine_ratios.empty())
        for (const auto& w : win) fine_ratios.insert(fine_ratios.end(), w.ratios.begin(), w.ratios.end());
    const auto mid = fine_ratios.begin() + static_cast<std::ptrdiff_t>(fine_ratios.size() / 2);
    std::nth_element(fine_ratios.begin(), mid, fine_ratios.end());
    out.gamma_median = *mid;
    return out;
}

double wrap_positive(double a) {
    a = std::fmod(a, kTwoPi);
    return a < 0.0 ? a + kTwoPi : a;
}

}  // namespace

FrameSample CanonicalFrame::to_frame(cplx z) const noexcept {
    const cplx w = std::polar(1.0, -normal_angle) * (z - origin);
    return {w.imag(), -w.real()};
}

cplx CanonicalFrame::from_frame(FrameSample s) const noexcept {
    return origin + std::polar(1.0, normal_angle) * cplx(-s.eta, s.xi);
}

CanonicalFrame canonical_frame(cplx lambda, double theta1, double theta2) {
    if (!(theta1 <= theta2)) throw Error(ErrorKind::BadParameter, "normal cone bounds out of order");
    if (theta2 - theta1 >= std::numbers::pi)
        throw Error(ErrorKind::DegenerateCone, "normal cone is at least a half-plane wide");
    return {lambda, 0.5 * (theta1 + theta2)};
}

const char* to_string(Side side) noexcept {
    switch (side) {
        case Side::Left: return "left";
        case Side::Right: return "right";
        case Side::Both: return "both";
    }
    return "?";
}

const char* to_string(BoundaryKind kind) noexcept {
    switch (kind) {
        case BoundaryKind::Round: return "Round";
        case BoundaryKind::InfiniteUpperCurvatureOnly: return "InfiniteUpperCurvatureOnly";
        case BoundaryKind::UnilateralInfinite: return "UnilateralInfinite";
        case BoundaryKind::Corner: return "Corner";
        case BoundaryKind::FlatInterior: return "FlatInterior";
    }
    return "?";
}

CurvatureOptions window_of(const std::vector<FrameSample>& samples) {
    CurvatureOptions o;
    o.eps_min = kInfinity;
    o.eps_max = 0.0;
    for (const auto& s : samples) {
        const double x = std::abs(s.xi);
        if (x == 0.0) continue;
        o.eps_min = std::min(o.eps_min, x);
        o.eps_max = std::max(o.eps_max, x);
    }
    if (o.eps_max == 0.0) throw Error(ErrorKind::InsufficientSamples, "no samples off the origin");
    return o;
}

CurvatureEstimate curvature_estimates(const CanonicalFrame&, const std::vector<FrameSample>& samples,
                                      const CurvatureOptions& opts) {
    if (!(opts.eps_max > opts.eps_min) || !(opts.eps_min >= 0.0))
        throw Error(ErrorKind::BadParameter, "scale window must satisfy 0 <= eps_min < eps_max");
    CurvatureEstimate est;
    est.eps_min = opts.eps_min;
    est.eps_max = opts.eps_max;
    est.plus = estimate_side(samples, +1, opts);
    est.minus = estimate_side(samples, -1, opts);
    return est;
}

BoundaryClass classify_point(const CurvatureEstimate& est, double cone_width, double angle_tol, bool on_edge_interior) {
    BoundaryClass c;
    if (cone_width > angle_tol) {
        c.kind = BoundaryKind::Corner;
        c.cone_width = cone_width;
        return c;
    }
    if (on_edge_interior) {
        c.kind = BoundaryKind::FlatInterior;
        return c;
    }
    if (est.plus.quarters_disagree || est.minus.quarters_disagree) {
        char buf[160];
        std::snprintf(buf, sizeof buf, "envelope exponents disagree across windows (right beta_u %.3f, left beta_u %.3f)",
                      est.plus.beta_u, est.minus.beta_u);
        throw Error(ErrorKind::Ambiguous, buf);
    }
    const bool right = est.plus.lower_infinite, left = est.minus.lower_infinite;
    if (right || left) {
        c.kind = BoundaryKind::UnilateralInfinite;
        c.side = right && left ? Side::Both : (right ? Side::Right : Side::Left);
        return c;
    }
    if (est.plus.upper_infinite || est.minus.upper_infinite) {
        c.kind = BoundaryKind::InfiniteUpperCurvatureOnly;
        return c;
    }
    c.kind = BoundaryKind::Round;
    c.gamma = 0.5 * (est.plus.gamma_median + est.minus.gamma_median);
    return c;
}

double inscribed_disk_radius(cplx lambda, const std::vector<cplx>& hull, const DiskOptions& opts) {
    const std::size_t n = hull.size();
    if (n < 3) throw Error(ErrorKind::BadParameter, "hull needs at least three vertices");
    double xmin = kInfinity, xmax = -kInfinity, ymin = kInfinity, ymax = -kInfinity;
    for (const cplx z : hull) {
        xmin = std::min(xmin, z.real());
        xmax = std::max(xmax, z.real());
        ymin = std::min(ymin, z.imag());
        ymax = std::max(ymax, z.imag());
    }
    const double diam = std::hypot(xmax - xmin, ymax - ymin);
    const double tol_geom = opts.tol_geom < 0.0 ? 1e-9 * diam : opts.tol_geom;
    const double rho_tol = opts.rho_tol < 0.0 ? 1e-6 * diam : opts.rho_tol;

    std::size_t best_vertex = 0;
    double dv = kInfinity;
    for (std::size_t i = 0; i < n; ++i)
        if (std::abs(hull[i] - lambda) < dv) {
            dv = std::abs(hull[i] - lambda);
            best_vertex = i;
        }
    double normal = 0.0, width = 0.0;
    if (dv <= tol_geom) {
        auto edge_normal = [&](std::size_t a, std::size_t b) { return std::arg(cplx(0, -1) * (hull[b] - hull[a])); };
        std::size_t prev = (best_vertex + n - 1) % n, next = (best_vertex + 1) % n;
        while (std::abs(hull[prev] - hull[best_vertex]) <= tol_geom && prev != next) prev = (prev + n - 1) % n;
        while (std::abs(hull[next] - hull[best_vertex]) <= tol_geom && next != prev) next = (next + 1) % n;
        const double a1 = edge_normal(prev, best_vertex);
        width = wrap_positive(edge_normal(best_vertex, next) - a1);
        if (width > std::numbers::pi) width = 0.0;  // reflex turn from noise: treat as smooth
        normal = a1 + 0.5 * width;
    } else {
        double de = kInfinity;
        for (std::size_t i = 0; i < n; ++i) {
            const cplx a = hull[i], d = hull[(i + 1) % n] - a;
            const double len2 = std::norm(d);
            if (len2 == 0.0) continue;
            const double t = std::clamp(((lambda - a) * std::conj(d)).real() / len2, 0.0, 1.0);
            const double dist = std::abs(a + t * d - lambda);
            if (dist < de) {
                de = dist;
                normal = std::arg(cplx(0, -1) * d);
            }
        }
        if (de > tol_geom) throw Error(ErrorKind::PointNotOnBoundary, "point is not on the hull boundary");
    }
    if (width > opts.angle_tol) return 0.0;
    const CanonicalFrame frame{lambda, normal};
    // P stays outside the tangent disk of radius r iff r <= |P|^2 / (2 eta_P)
    double r = kInfinity;
    for (const cplx z : hull) {
        const FrameSample p = frame.to_frame(z);
        if (p.eta <= tol_geom) continue;
        r = std::min(r, (p.xi * p.xi + p.eta * p.eta) / (2.0 * p.eta));
    }
    return r <= rho_tol ? 0.0 : r;
}

std::vector<std::pair<double, double>> oscillating_nodes(double x_min) {
    std::vector<std::pair<double, double>> nodes;
    double a = 0.7;
    while (a >= x_min && nodes.size() < 64) {
        const double b = a * a * a * a;
        nodes.emplace_back(a, b);
        a = 0.5 * b;
    }
    return nodes;
}

namespace {

// Piecewise linear g through the given knots (ascending x) and its exact integral.
class PolygonalIntegral {
public:
    explicit PolygonalIntegral(std::vector<std::pair<double, double>> knots) : k_(std::move(knots)) {
        cum_.assign(k_.size(), 0.0);
        for (std::size_t i = 1; i < k_.size(); ++i)
            cum_[i] = cum_[i - 1] + 0.5 * (k_[i].first - k_[i - 1].first) * (k_[i].second + k_[i - 1].second);
    }

    double operator()(double x) const {
        auto it = std::upper_bound(k_.begin(), k_.end(), x, [](double v, const auto& p) { return v < p.first; });
        std::size_t i = it == k_.begin() ? 0 : std::size_t(it - k_.begin()) - 1;
        i = std::min(i, k_.size() - 2);
        const auto [x0, g0] = k_[i];
        const auto [x1, g1] = k_[i + 1];
        const double gx = g0 + (g1 - g0) * (x - x0) / (x1 - x0);
        return cum_[i] + 0.5 * (x - x0) * (g0 + gx);
    }

private:
    std::vector<std::pair<double, double>> k_;
    std::vector<double> cum_;
};

}  // namespace

std::vector<FrameSample> example_curve(const CurveSpec& spec, std::size_t n_samples, double scale) {
    if (n_samples < 16) throw Error(ErrorKind::BadParameter, "need at least 16 samples per side");
    if (!(scale > 0.0)) throw Error(ErrorKind::BadParameter, "scale must be positive");
    if (spec.kind == CurveKind::Power && !(spec.alpha > 1.0 && spec.alpha <= 4.0))
        throw Error(ErrorKind::BadParameter, "power exponent must lie in (1, 4]");

    std::vector<FrameSample> out;
    out.push_back({0.0, 0.0});
    if (spec.kind != CurveKind::PolygonalOscillating) {
        const double a_right = spec.kind == CurveKind::Power ? spec.alpha : 2.0;
        const double a_left = spec.kind == CurveKind::Power ? spec.alpha : 1.5;
        for (std::size_t k = 0; k < n_samples; ++k) {
            const double x = std::pow(10.0, -12.0 * (1.0 - double(k) / double(n_samples - 1)));
            out.push_back({scale * x, scale * std::pow(x, a_right)});
            out.push_back({-scale * x, scale * std::pow(x, a_left)});
        }
        return out;
    }

    constexpr double x_min = 1e-80;
    const auto nodes = oscillating_nodes(x_min);
    // g is linear from the origin up to the smallest b_k, and linear between a_{k+1} and b_k
    std::vector<std::pair<double, double>> knots{{0.0, 0.0}};
    for (auto it = nodes.rbegin(); it != nodes.rend(); ++it) {
        const auto [a, b] = *it;
        knots.emplace_back(b, a * a);
        knots.emplace_back(a, a * a);
    }
    knots.erase(std::unique(knots.begin(), knots.end(),
                            [](const auto& p, const auto& q) { return p.first == q.first; }),
                knots.end());
    knots.emplace_back(1.0, 1.0);
    const PolygonalIntegral f(knots);

    const std::size_t n = std::max<std::size_t>(n_samples, 4000);
    std::vector<double> xs;
    for (std::size_t k = 0; k < n; ++k) xs.push_back(std::pow(10.0, -80.0 * (1.0 - double(k) / double(n - 1))));
    for (const auto& [x, g] : knots)
        if (x >= x_min) xs.push_back(x);
    std::sort(xs.begin(), xs.end());
    for (const double x : xs) {
        const double y = f(x);
        out.push_back({scale * x, scale * y});
        out.push_back({-scale * x, scale * y});
    }
    return out;
}

SupportCurvature support_curvature(const std::vector<std::pair<double, double>>& h, double theta0, double rho_tol) {
    if (h.size() < 5) throw Error(ErrorKind::InsufficientSamples, "support curvature needs at least 5 samples");
    std::size_t i = 0;
    for (std::size_t k = 1; k < h.size(); ++k)
        if (std::abs(h[k].first - theta0) < std::abs(h[i].first - theta0)) i = k;
    if (i == 0 || i + 1 == h.size())
        throw Error(ErrorKind::InsufficientSamples, "theta0 must have grid neighbours on both sides");
    const double dt = 0.5 * (h[i + 1].first - h[i - 1].first);
    const double second = (h[i + 1].second - 2.0 * h[i].second + h[i - 1].second) / (dt * dt);
    SupportCurvature out;
    out.rho = h[i].second + second;
    out.gamma = out.rho <= rho_tol ? kInfinity : 1.0 / (2.0 * out.rho);
    return out;
}

std::string frame_samples_csv(const std::vector<FrameSample>& samples) {
    std::string s = "xi,eta\n";
    char buf[64];
    for (const auto& p : samples) {
        std::snprintf(buf, sizeof buf, "%.17g,%.17g\n", p.xi, p.eta);
        s += buf;
    }
    return s;
}

}  // namespace numrange
