#include <algorithm>
#include <cmath>
#include <numbers>
#include <queue>

#include "numrange/numerical_range.hpp"

namespace numrange {
namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

struct Interval {
    double gap;
    std::size_t left, right;
    double t_left, t_right;  // t_right may exceed 2 pi on the wrap-around interval
};

struct ByGap {
    bool operator()(const Interval& a, const Interval& b) const {
        if (a.gap != b.gap) return a.gap < b.gap;
        return a.t_left > b.t_left;
    }
};

// Distance between the corner of the two supporting lines and the chord
// joining the boundary points: an upper bound on how far the true boundary
// can stray from the polyline over this angular interval.
double interval_gap(const SupportSample& s1, const SupportSample& s2, double t1, double t2, double scale) {
    const double dt = t2 - t1;
    if (dt <= 1e-13) return 0.0;
    const double det = std::sin(dt);
    const double x = (s1.h * std::sin(t2) - s2.h * std::sin(t1)) / det;
    const double y = (s2.h * std::cos(t1) - s1.h * std::cos(t2)) / det;
    const cplx q(x, y), p1 = s1.end, p2 = s2.start;
    const cplx chord = p2 - p1;
    const double len = std::abs(chord);
    if (len <= 1e-14 * scale) return std::abs(q - p1);
    const cplx n = cplx(0.0, -1.0) * chord / len;
    return std::max(0.0, (std::conj(n) * (q - p1)).real());
}

double chord_angle(const SupportSample& s1, const SupportSample& s2, double t1, double t2) {
    const cplx chord = s2.start - s1.end;
    const double mid = 0.5 * (t1 + t2);
    if (std::abs(chord) == 0.0) return mid;
    double phi = std::arg(cplx(0.0, -1.0) * chord);
    phi = t1 + std::fmod(std::fmod(phi - t1, kTwoPi) + kTwoPi, kTwoPi);
    const double margin = 1e-6 * (t2 - t1);
    return (phi > t1 + margin && phi < t2 - margin) ? phi : mid;
}

bool near(cplx a, cplx b, double tol) { return std::abs(a - b) <= tol; }

}  // namespace

double BoundaryAtlas::convexity_defect() const {
    const std::size_t n = vertices.size();
    double worst = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const cplx a = vertices[(i + 1) % n] - vertices[i];
        const cplx b = vertices[(i + 2) % n] - vertices[(i + 1) % n];
        const double cross = a.real() * b.imag() - a.imag() * b.real();
        worst = std::max(worst, -cross / (scale * scale));
    }
    return worst;
}

double BoundaryAtlas::containment_defect() const {
    double worst = 0.0;
    for (const auto& s : samples) {
        const cplx rot = std::polar(1.0, -s.theta);
        for (const cplx v : vertices) worst = std::max(worst, ((rot * v).real() - s.h) / scale);
    }
    return worst;
}

BoundaryAtlas compute_boundary(const ComplexMatrix& a, const BoundaryOptions& opts) {
    return compute_boundary(SupportOracle(a), opts);
}

BoundaryAtlas compute_boundary(const SupportOracle& oracle, const BoundaryOptions& opts) {
    const Degeneracy deg = degeneracy_check(oracle.matrix());
    if (deg.kind != Degeneracy::Kind::FullDim)
        throw Error(ErrorKind::Degenerate, std::string("numerical range is a ") + to_string(deg.kind));
    if (opts.angle_budget < 16) throw Error(ErrorKind::BadParameter, "angle budget must be at least 16");
    if (!(opts.refine_tol > 0.0)) throw Error(ErrorKind::BadParameter, "refine_tol must be positive");

    const std::size_t n0 = std::max<std::size_t>(16, std::min(opts.initial_angles, opts.angle_budget)) / 4 * 4;
    std::vector<SupportSample> samples;
    samples.reserve(opts.angle_budget);
    for (std::size_t k = 0; k < n0; ++k) samples.push_back(oracle.sample(kTwoPi * double(k) / double(n0)));

    BoundaryAtlas atlas;
    atlas.refine_tol = opts.refine_tol;
    atlas.scale = std::max(samples[0].h + samples[n0 / 2].h, samples[n0 / 4].h + samples[3 * n0 / 4].h);
    const double scale = atlas.scale;

    std::priority_queue<Interval, std::vector<Interval>, ByGap> queue;
    auto push = [&](std::size_t l, std::size_t r, double tl, double tr) {
        queue.push({interval_gap(samples[l], samples[r], tl, tr, scale), l, r, tl, tr});
    };
    for (std::size_t k = 0; k < n0; ++k) {
        const std::size_t r = (k + 1) % n0;
        push(k, r, samples[k].theta, r == 0 ? kTwoPi : samples[r].theta);
    }

    const double target = opts.refine_tol * scale;
    while (!queue.empty() && queue.top().gap > target && samples.size() < opts.angle_budget) {
        const Interval iv = queue.top();
        queue.pop();
        const double t = chord_angle(samples[iv.left], samples[iv.right], iv.t_left, iv.t_right);
        SupportSample s = oracle.sample(t >= kTwoPi ? t - kTwoPi : t);
        samples.push_back(std::move(s));
        const std::size_t m = samples.size() - 1;
        push(iv.left, m, iv.t_left, t);
        push(m, iv.right, t, iv.t_right);
    }
    atlas.achieved_gap = queue.empty() ? 0.0 : queue.top().gap;
    atlas.budget_exhausted = atlas.achieved_gap > target;

    // chord edges: long chords with no room between support lines
    std::vector<Edge> chord_edges;
    while (!queue.empty()) {
        const Interval iv = queue.top();
        queue.pop();
        const cplx p1 = samples[iv.left].end, p2 = samples[iv.right].start;
        if (std::abs(p2 - p1) <= 1e-4 * scale) continue;
        if (iv.gap <= 1e-10 * scale) {
            chord_edges.push_back({p1, p2, std::arg(cplx(0.0, -1.0) * (p2 - p1))});
            continue;
        }
        if (std::abs(p2 - p1) <= 1e-2 * scale || samples.size() >= opts.angle_budget) continue;
        // a long, nearly flat chord is usually an edge whose exact normal was never
        // sampled; one probe at the chord normal settles it
        const double t = chord_angle(samples[iv.left], samples[iv.right], iv.t_left, iv.t_right);
        samples.push_back(oracle.sample(t >= kTwoPi ? t - kTwoPi : t));
    }

    std::sort(samples.begin(), samples.end(), [](const auto& x, const auto& y) { return x.theta < y.theta; });
    const double tol_geom = 1e-9 * scale;

    for (const auto& s : samples) {
        for (const cplx z : {s.start, s.end}) {
            if (atlas.vertices.empty() || !near(atlas.vertices.back(), z, 1e-12 * scale)) atlas.vertices.push_back(z);
        }
        if (s.multiplicity > 1 && std::abs(s.end - s.start) > tol_geom) atlas.edges.push_back({s.start, s.end, s.theta});
    }
    while (atlas.vertices.size() > 1 && near(atlas.vertices.back(), atlas.vertices.front(), 1e-12 * scale))
        atlas.vertices.pop_back();
    for (const auto& e : chord_edges) {
        const bool dup = std::any_of(atlas.edges.begin(), atlas.edges.end(), [&](const Edge& f) {
            return near(f.a, e.a, tol_geom) && near(f.b, e.b, tol_geom);
        });
        if (!dup) atlas.edges.push_back(e);
    }

    // corner candidates: runs of directions that keep returning the same point;
    // an edge sample ends one run with its start and opens the next with its end
    std::vector<std::pair<double, cplx>> seq;
    for (const auto& s : samples) {
        seq.emplace_back(s.theta, s.start);
        if (!near(s.start, s.end, tol_geom)) seq.emplace_back(s.theta, s.end);
    }
    const std::size_t n = seq.size();
    std::size_t first = n;
    for (std::size_t k = 0; k < n; ++k)
        if (!near(seq[k].second, seq[(k + n - 1) % n].second, tol_geom)) {
            first = k;
            break;
        }
    if (first < n) {
        std::size_t k = first;
        for (std::size_t visited = 0; visited < n;) {
            const std::size_t run_start = k;
            double t_end = seq[k].first;
            std::size_t steps = 0;
            while (visited + steps + 1 < n && near(seq[(k + 1) % n].second, seq[run_start].second, tol_geom)) {
                const std::size_t nxt = (k + 1) % n;
                t_end += std::fmod(seq[nxt].first - seq[k].first + kTwoPi, kTwoPi);
                k = nxt;
                ++steps;
            }
            if (t_end - seq[run_start].first > opts.angle_tol)
                atlas.corner_candidates.push_back({seq[run_start].second, seq[run_start].first, t_end});
            visited += steps + 1;
            k = (k + 1) % n;
        }
    }
    atlas.samples = std::move(samples);
    return atlas;
}

std::vector<cplx> default_targets(const BoundaryAtlas& atlas, std::size_t spread) {
    std::vector<cplx> out;
    const double tol = 1e-6 * atlas.scale;
    auto add = [&](cplx z) {
        for (const cplx w : out)
            if (near(w, z, tol)) return;
        out.push_back(z);
    };
    for (const auto& c : atlas.corner_candidates) add(c.point);
    for (const auto& e : atlas.edges) {
        add(e.a);
        add(e.b);
    }
    const auto& v = atlas.vertices;
    if (v.size() < 2 || spread == 0) return out;
    std::vector<double> cum(v.size() + 1, 0.0);
    for (std::size_t i = 0; i < v.size(); ++i) cum[i + 1] = cum[i] + std::abs(v[(i + 1) % v.size()] - v[i]);
    for (std::size_t k = 0; k < spread; ++k) {
        const double at = cum.back() * double(k) / double(spread);
        const auto it = std::lower_bound(cum.begin(), cum.end(), at);
        std::size_t i = std::size_t(it - cum.begin());
        if (i > 0 && (i == v.size() || at - cum[i - 1] < cum[i] - at)) --i;
        add(v[i % v.size()]);
    }
    return out;
}

}  // namespace numrange
