#include <algorithm>
#include <cmath>
#include <numbers>

#include "numrange/numerical_range.hpp"

namespace numrange {
namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

bool touches(const SupportSample& s, cplx z, double r) {
    if (std::abs(s.start - z) <= r || std::abs(s.end - z) <= r) return true;
    return std::any_of(s.points.begin(), s.points.end(), [&](cplx p) { return std::abs(p - z) <= r; });
}

double dist_to_segment(cplx z, cplx a, cplx b, double* t_out = nullptr) {
    const cplx d = b - a;
    const double len2 = std::norm(d);
    const double t = len2 == 0.0 ? 0.0 : std::clamp(((z - a) * std::conj(d)).real() / len2, 0.0, 1.0);
    if (t_out) *t_out = t;
    return std::abs(a + t * d - z);
}

std::vector<double> geometric(double lo, double hi, int per_decade) {
    std::vector<double> out;
    const int steps = std::max(1, int(std::ceil(std::log10(hi / lo) * per_decade)));
    for (int k = 0; k <= steps; ++k) out.push_back(lo * std::pow(hi / lo, double(k) / steps));
    return out;
}

class TargetClassifier {
public:
    TargetClassifier(const SupportOracle& oracle, const BoundaryAtlas& atlas, const ClassifyOptions& opts)
        : oracle_(oracle), atlas_(atlas), opts_(opts) {
        diam_ = atlas.scale;
        eps_min_ = opts.eps_min_rel * diam_;
        eps_max_ = opts.eps_max_rel * diam_;
        noise_ = 1e-13 * std::max(diam_, oracle.norm());
    }

    PointClassification run(cplx target) const {
        PointClassification out;
        out.target = target;
        out.point = target;

        for (const auto& e : atlas_.edges) {
            double t;
            if (dist_to_segment(target, e.a, e.b, &t) <= eps_min_ && std::abs(target - e.a) > eps_min_ &&
                std::abs(target - e.b) > eps_min_) {
                out.point = e.a + t * (e.b - e.a);
                out.normal_angle = out.cone_lo = out.cone_hi = e.theta;
                out.cls.kind = BoundaryKind::FlatInterior;
                return out;
            }
        }

        // nearest atlas sample point
        const auto& smp = atlas_.samples;
        std::size_t i0 = 0;
        cplx lambda;
        double best = kInfinity;
        for (std::size_t i = 0; i < smp.size(); ++i) {
            for (const cplx z : {smp[i].start, smp[i].end}) {
                if (std::abs(z - target) < best) {
                    best = std::abs(z - target);
                    lambda = z;
                    i0 = i;
                }
            }
        }
        double t0 = smp[i0].theta;
        if (best > eps_min_) {
            // between samples: project onto the polyline and ask for the support point there
            const auto& v = atlas_.vertices;
            double dpoly = kInfinity;
            std::size_t seg = 0;
            for (std::size_t i = 0; i < v.size(); ++i) {
                const double d = dist_to_segment(target, v[i], v[(i + 1) % v.size()]);
                if (d < dpoly) {
                    dpoly = d;
                    seg = i;
                }
            }
            if (dpoly > eps_min_) {
                out.error = ErrorKind::PointNotOnBoundary;
                out.diagnostics = "target is " + std::to_string(dpoly / diam_) + " diameters from the boundary";
                return out;
            }
            t0 = std::arg(cplx(0.0, -1.0) * (v[(seg + 1) % v.size()] - v[seg]));
            const SupportSample s = oracle_.sample(t0);
            lambda = s.point();
        }
        out.point = lambda;

        // normal cone at atlas resolution: the run of samples touching lambda
        const double r_cone = eps_min_;
        const std::size_t n = smp.size();
        double lo = t0, hi = t0;
        if (touches(smp[i0], lambda, r_cone) && best <= eps_min_) {
            std::size_t k = i0;
            for (std::size_t c = 1; c < n; ++c) {
                const std::size_t prev = (k + n - 1) % n;
                if (!touches(smp[prev], lambda, r_cone)) break;
                lo -= std::fmod(smp[k].theta - smp[prev].theta + kTwoPi, kTwoPi);
                k = prev;
            }
            k = i0;
            for (std::size_t c = 1; c < n; ++c) {
                const std::size_t nxt = (k + 1) % n;
                if (!touches(smp[nxt], lambda, r_cone)) break;
                hi += std::fmod(smp[nxt].theta - smp[k].theta + kTwoPi, kTwoPi);
                k = nxt;
            }
        }

        // local refinement beyond both ends of the cone
        std::vector<SupportSample> local;
        const auto deltas = geometric(1e-9, std::numbers::pi / 2, opts_.per_decade);
        double ext_lo = 0.0, ext_hi = 0.0;
        bool open_lo = true, open_hi = true;
        for (const double d : deltas) {
            local.push_back(oracle_.sample(lo - d));
            if (open_lo && touches(local.back(), lambda, r_cone))
                ext_lo = d;
            else
                open_lo = false;
            local.push_back(oracle_.sample(hi + d));
            if (open_hi && touches(local.back(), lambda, r_cone))
                ext_hi = d;
            else
                open_hi = false;
        }
        lo -= ext_lo;
        hi += ext_hi;
        out.cone_lo = lo;
        out.cone_hi = hi;
        const double width = hi - lo;
        out.normal_angle = 0.5 * (lo + hi);

        if (width > opts_.angle_tol) {
            out.cls.kind = BoundaryKind::Corner;
            out.cls.cone_width = width;
            out.strict_corner = std::any_of(atlas_.corner_candidates.begin(), atlas_.corner_candidates.end(),
                                            [&](const CornerCandidate& c) { return std::abs(c.point - lambda) <= r_cone; });
            return out;
        }
        if (width >= std::numbers::pi) {
            out.error = ErrorKind::DegenerateCone;
            return out;
        }

        const CanonicalFrame frame = canonical_frame(lambda, lo, hi);
        std::vector<FrameSample> fs = frame_samples(frame, local);
        CurvatureOptions copt;
        copt.eps_min = eps_min_;
        copt.eps_max = eps_max_;
        copt.n_min = opts_.n_min;
        CurvatureEstimate est;
        try {
            est = curvature_estimates(frame, fs, copt);
        } catch (const Error& e) {
            if (e.kind() != ErrorKind::InsufficientSamples) throw;
            std::vector<SupportSample> extra;
            for (const double d : geometric(1e-12, 0.5, 2 * opts_.per_decade)) {
                extra.push_back(oracle_.sample(frame.normal_angle - d));
                extra.push_back(oracle_.sample(frame.normal_angle + d));
            }
            local.insert(local.end(), extra.begin(), extra.end());
            fs = frame_samples(frame, local);
            try {
                est = curvature_estimates(frame, fs, copt);
            } catch (const Error& again) {
                if (again.kind() != ErrorKind::InsufficientSamples) throw;
                out.error = ErrorKind::InsufficientSamples;
                out.diagnostics = again.what();
                return out;
            }
        }
        out.estimate = est;
        try {
            out.cls = classify_point(est, width, opts_.angle_tol);
        } catch (const Error& e) {
            if (e.kind() != ErrorKind::Ambiguous) throw;
            out.ambiguous = true;
            out.diagnostics = e.what();
            CurvatureEstimate relaxed = est;
            relaxed.plus.quarters_disagree = relaxed.minus.quarters_disagree = false;
            out.cls = classify_point(relaxed, width, opts_.angle_tol);
        }
        return out;
    }

private:
    std::vector<FrameSample> frame_samples(const CanonicalFrame& frame, const std::vector<SupportSample>& local) const {
        std::vector<FrameSample> fs;
        const double t_star = frame.normal_angle;
        auto take = [&](const SupportSample& s) {
            // only the arc whose normals stay within a quarter turn of the frame normal
            if (std::abs(std::remainder(s.theta - t_star, kTwoPi)) >= std::numbers::pi / 2) return;
            auto add = [&](cplx z) {
                const FrameSample p = frame.to_frame(z);
                if (std::abs(p.xi) < eps_min_ || std::abs(p.xi) > eps_max_) return;
                if (p.eta <= noise_) return;  // below eigensolver resolution
                fs.push_back(p);
            };
            add(s.point());
            if (s.multiplicity > 1) {
                // a cluster that is only nearly degenerate spreads its compressed
                // points inside the range; only those on the support line count
                const cplx rot = std::polar(1.0, -s.theta);
                auto on_line = [&](cplx z) {
                    if (s.h - (rot * z).real() <= noise_) add(z);
                };
                for (std::size_t k = 1; k < s.points.size(); ++k) on_line(s.points[k]);
                on_line(s.start);
                on_line(s.end);
            }
        };
        for (const auto& s : atlas_.samples) take(s);
        for (const auto& s : local) take(s);
        // flat edges leaving lambda contribute exact zeros
        for (const auto& e : atlas_.edges) {
            for (const auto& [from, to] : {std::pair{e.a, e.b}, std::pair{e.b, e.a}}) {
                if (std::abs(from - frame.origin) > eps_min_) continue;
                const double len = std::abs(to - from);
                for (const double t : geometric(eps_min_ / len, 1.0, opts_.per_decade)) {
                    FrameSample p = frame.to_frame(from + t * (to - from));
                    if (std::abs(p.xi) < eps_min_ || std::abs(p.xi) > eps_max_) continue;
                    if (p.eta <= noise_) p.eta = 0.0;  // rounding on an exactly straight piece
                    fs.push_back(p);
                }
            }
        }
        return fs;
    }

    const SupportOracle& oracle_;
    const BoundaryAtlas& atlas_;
    ClassifyOptions opts_;
    double diam_ = 0.0, eps_min_ = 0.0, eps_max_ = 0.0, noise_ = 0.0;
};

}  // namespace

std::vector<PointClassification> classify_boundary(const SupportOracle& oracle, const BoundaryAtlas& atlas,
                                                   const std::optional<std::vector<cplx>>& targets,
                                                   const ClassifyOptions& opts) {
    if (atlas.samples.empty()) throw Error(ErrorKind::BadParameter, "atlas has no samples");
    const std::vector<cplx> pts = targets ? *targets : default_targets(atlas, opts.default_spread);
    const TargetClassifier tc(oracle, atlas, opts);
    std::vector<PointClassification> out;
    out.reserve(pts.size());
    for (const cplx z : pts) out.push_back(tc.run(z));
    return out;
}

std::vector<PointClassification> classify_boundary(const ComplexMatrix& a, const BoundaryAtlas& atlas,
                                                   const std::optional<std::vector<cplx>>& targets,
                                                   const ClassifyOptions& opts) {
    return classify_boundary(SupportOracle(a), atlas, targets, opts);
}

}  // namespace numrange
