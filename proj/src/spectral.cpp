#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "numrange/spectral.hpp"

namespace numrange {
namespace {

constexpr double kHalfPi = std::numbers::pi / 2;

double threshold(const VerifyOptions& opts, double norm) {
    return opts.abs_tol > 0.0 ? opts.abs_tol : opts.tol_thm * norm;
}

std::string fmt(double x) {
    std::ostringstream os;
    os.precision(6);
    os << x;
    return os.str();
}

// Smallest slack h(theta) - Re(e^{-i theta} z) over the atlas support lines:
// about zero on the boundary, negative outside.
double support_slack(const BoundaryAtlas& atlas, cplx z) {
    double slack = kInfinity;
    for (const auto& s : atlas.samples) slack = std::min(slack, s.h - (std::polar(1.0, -s.theta) * z).real());
    return slack;
}

}  // namespace

const char* to_string(Verdict v) noexcept {
    switch (v) {
        case Verdict::Pass: return "pass";
        case Verdict::Fail: return "fail";
        case Verdict::Inconclusive: return "inconclusive";
    }
    return "?";
}

Verdict verdict_for(double margin, double tol) noexcept {
    if (margin <= tol) return Verdict::Pass;
    if (margin <= 100.0 * tol) return Verdict::Inconclusive;
    return Verdict::Fail;
}

Normalized normalize_at(const ComplexMatrix& a, cplx lambda, const BoundaryAtlas& atlas, const ClassifyOptions& opts) {
    const auto pc = classify_boundary(a, atlas, std::vector<cplx>{lambda}, opts).front();
    if (pc.error == ErrorKind::PointNotOnBoundary)
        throw Error(ErrorKind::PointNotOnBoundary, "cannot normalize away from the boundary: " + pc.diagnostics);
    Normalized out;
    out.record.original_point = lambda;
    out.record.frame = canonical_frame(pc.point, pc.cone_lo, pc.cone_hi);
    const double phi = std::remainder(-kHalfPi - out.record.frame.normal_angle, 2.0 * std::numbers::pi);
    out.record.a = std::polar(1.0, phi);
    out.record.b = -out.record.a * pc.point;
    out.matrix = affine_transform(a, out.record.a, out.record.b);
    return out;
}

std::vector<TheoremReport> corner_eigenvalue_check(const ComplexMatrix& a,
                                                   const std::vector<PointClassification>& classes,
                                                   const VerifyOptions& opts) {
    std::vector<TheoremReport> out;
    std::vector<cplx> eigs;
    double tol = 0.0;
    for (const auto& pc : classes) {
        if (pc.error || !pc.cls.infinite_curvature()) continue;
        if (eigs.empty()) {
            eigs = eigenvalues(a);
            tol = threshold(opts, spectral_norm(a));
        }
        TheoremReport r;
        r.theorem_id = "corner_eigenvalue";
        r.point = pc.point;
        r.seed = opts.seed;
        r.margin = kInfinity;
        for (const cplx e : eigs) r.margin = std::min(r.margin, std::abs(e - pc.point));
        r.verdict = verdict_for(r.margin, tol);
        r.diagnostics = std::string(to_string(pc.cls.kind)) + ", distance to spectrum " + fmt(r.margin);
        const bool effective = pc.cls.kind == BoundaryKind::Corner && !pc.strict_corner;
        if (r.verdict == Verdict::Fail && (effective || pc.ambiguous)) {
            r.verdict = Verdict::Inconclusive;
            r.diagnostics += effective ? "; corner only at atlas resolution" : "; classification ambiguous";
        }
        out.push_back(std::move(r));
    }
    return out;
}

TheoremReport spectrum_membership_check(const ComplexMatrix& a, cplx lambda, const VerifyOptions& opts, bool applies) {
    const SingularTriple st = smallest_singular_triple(a, lambda);
    TheoremReport r;
    r.theorem_id = "spectrum_membership";
    r.point = lambda;
    r.seed = opts.seed;
    r.margin = st.value;
    r.witness = st.right;
    if (applies) {
        r.verdict = verdict_for(r.margin, threshold(opts, spectral_norm(a)));
        r.diagnostics = "sigma_min(A - lambda) = " + fmt(r.margin);
    } else {
        r.verdict = Verdict::Inconclusive;
        r.diagnostics = "informational: no infinite curvature here, sigma_min = " + fmt(r.margin);
    }
    return r;
}

TheoremReport boundary_eigen_normality_check(const ComplexMatrix& a, cplx lambda, std::span<const cplx> v,
                                             const BoundaryAtlas& atlas, const VerifyOptions& opts) {
    const double nv = norm(v);
    if (nv == 0.0) throw Error(ErrorKind::ZeroVector, "eigenvector is zero");
    const double an = spectral_norm(a);
    CVector r1 = multiply(a, v);
    axpy(-lambda, v, r1);
    if (norm(r1) > 1e-8 * an * nv)
        throw Error(ErrorKind::NotAnEigenpair, "||Av - lambda v|| = " + fmt(norm(r1) / nv));
    if (std::abs(support_slack(atlas, lambda)) > 1e-8 * atlas.scale)
        throw Error(ErrorKind::PointNotOnBoundary, "eigenvalue is not on the atlas boundary");
    CVector r2 = multiply_adjoint(a, v);
    axpy(-std::conj(lambda), v, r2);
    TheoremReport r;
    r.theorem_id = "boundary_eigen_normality";
    r.point = lambda;
    r.seed = opts.seed;
    r.margin = norm(r2) / nv;
    r.verdict = verdict_for(r.margin, threshold(opts, an));
    r.diagnostics = "||A^H v - conj(lambda) v|| = " + fmt(r.margin);
    return r;
}

// The infimum is attained on the lower right boundary arc: for fixed Re z the
// lower boundary point has the smallest Im z and the smallest |z|. That arc
// consists of the support points with normals in [-pi/2, 0], so it is
// assembled from those atlas samples plus a geometric refinement near 0, and
// minimized exactly on each chord.
double k_functional(const ComplexMatrix& a_normalized, double a, const BoundaryAtlas& atlas) {
    if (!(a > 0.0)) throw Error(ErrorKind::BadParameter, "K(a) needs a > 0");
    const SupportOracle oracle(a_normalized);
    const double scale = atlas.scale > 0.0 ? atlas.scale : oracle.norm();
    const SupportSample bottom = oracle.sample(-kHalfPi);
    const double d0 = std::abs(bottom.start) + std::abs(bottom.end) - std::abs(bottom.end - bottom.start);
    if (std::abs(bottom.h) > 1e-9 * scale || d0 > 1e-7 * scale)
        throw Error(ErrorKind::NotNormalized, "0 is not the lowest point of a range in the upper half plane");

    std::vector<std::pair<double, cplx>> arc;
    auto take = [&](const SupportSample& s, double t) {
        arc.emplace_back(t, s.start);
        arc.emplace_back(t, s.end);
    };
    for (const auto& s : atlas.samples) {
        const double t = std::remainder(s.theta, 2.0 * std::numbers::pi);
        if (t >= -kHalfPi && t <= 0.0) take(s, t);
    }
    take(bottom, -kHalfPi);
    const int steps = 240;
    for (int k = 0; k <= steps; ++k) {
        const double delta = 1e-10 * std::pow(kHalfPi / 1e-10, double(k) / steps);
        take(oracle.sample(-kHalfPi + delta), -kHalfPi + delta);
    }
    // stable: start before end within one sample
    std::stable_sort(arc.begin(), arc.end(), [](const auto& x, const auto& y) { return x.first < y.first; });

    // Im z of a computed boundary point carries rounding of order 1e-16 scale,
    // which swamps the ratio once Re z drops much below 1e-5 scale
    const double floor = 1e-5 * scale;
    double best = kInfinity;
    auto consider = [&](cplx z) {
        if (z.real() > 0.0 && std::abs(z) < a && std::abs(z) >= floor)
            best = std::min(best, z.imag() / (z.real() * z.real()));
    };
    for (std::size_t i = 0; i + 1 < arc.size(); ++i) {
        const cplx p = arc[i].second, d = arc[i + 1].second - p;
        // feasible part of the chord: Re z > 0 and |z| <= a
        double lo = 0.0, hi = 1.0;
        if (d.real() != 0.0) {
            const double s0 = -p.real() / d.real();
            if (d.real() > 0.0) lo = std::max(lo, s0); else hi = std::min(hi, s0);
        } else if (p.real() <= 0.0) {
            continue;
        }
        const double qa = std::norm(d), qb = (p * std::conj(d)).real(), qc = std::norm(p) - a * a;
        if (qa == 0.0) {
            consider(p);
            continue;
        }
        const double disc = qb * qb - qa * qc;
        if (disc <= 0.0) continue;
        const double r = std::sqrt(disc);
        lo = std::max(lo, (-qb - r) / qa);
        hi = std::min(hi, (-qb + r) / qa);
        if (lo > hi) continue;
        // shrink by a hair so the open constraints hold at the evaluated ends
        const double pad = 1e-12 * (hi - lo);
        consider(p + (lo + pad) * d);
        consider(p + (hi - pad) * d);
        if (d.real() != 0.0 && d.imag() != 0.0) {
            const double s = (d.imag() * p.real() - 2.0 * p.imag() * d.real()) / (d.imag() * d.real());
            if (s > lo && s < hi) consider(p + s * d);
        }
    }
    return std::max(best, 0.0);
}

std::vector<TheoremReport> discretization_sequence_probe(const std::vector<ComplexMatrix>& family, cplx target,
                                                         const ProbeOptions& opts) {
    if (family.empty()) throw Error(ErrorKind::EmptyFamily, "no matrices to probe");
    std::vector<std::size_t> order(family.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    std::stable_sort(order.begin(), order.end(), [&](auto x, auto y) { return family[x].dim() < family[y].dim(); });

    std::vector<TheoremReport> out;
    std::vector<double> dist;
    std::vector<std::size_t> counts;
    for (const std::size_t i : order) {
        const ComplexMatrix& m = family[i];
        const auto atlas = compute_boundary(m, opts.boundary);
        const auto classes = classify_boundary(m, atlas, std::nullopt, opts.classify);
        const PointClassification* near = nullptr;
        for (const auto& pc : classes) {
            if (pc.error || !pc.cls.infinite_curvature()) continue;
            if (!near || std::abs(pc.point - target) < std::abs(near->point - target)) near = &pc;
        }
        if (!near) continue;
        std::size_t count = 0;
        for (const cplx e : eigenvalues(m))
            if (std::abs(e - target) <= opts.count_radius) ++count;
        TheoremReport r;
        r.theorem_id = "sequence_member";
        r.point = near->point;
        r.margin = std::abs(near->point - target);
        r.verdict = Verdict::Inconclusive;
        r.diagnostics = "dim " + std::to_string(m.dim()) + ", " + to_string(near->cls.kind) + ", sigma_min " +
                        fmt(smallest_singular_value(m, near->point)) + ", eigenvalues within radius " +
                        std::to_string(count);
        dist.push_back(r.margin);
        counts.push_back(count);
        out.push_back(std::move(r));
    }
    if (out.size() >= 2) {
        bool closer = true, more = true;
        for (std::size_t k = 1; k < dist.size(); ++k) {
            closer = closer && dist[k] <= dist[k - 1] * (1.0 + 1e-9);
            more = more && counts[k] >= counts[k - 1];
        }
        TheoremReport r;
        r.theorem_id = "sequence_trend";
        r.point = target;
        r.margin = dist.back();
        r.verdict = closer && more ? Verdict::Pass : Verdict::Inconclusive;
        r.diagnostics = std::string("distance ") + (closer ? "nonincreasing" : "not monotone") + ", eigenvalue count " +
                        (more ? "nondecreasing" : "not monotone");
        out.push_back(std::move(r));
    }
    return out;
}

TheoremReport harmonic_hyperbola_check(const BoundaryAtlas& atlas, cplx c, double t2_lo, double t2_hi, double rel_tol) {
    if (c.imag() == 0.0) throw Error(ErrorKind::BadParameter, "decomposition needs Im c != 0");
    TheoremReport r;
    r.theorem_id = "harmonic_hyperbola";
    double lowest = kInfinity;
    for (const cplx z : atlas.vertices) {
        const double t2 = z.imag() / c.imag(), t1 = z.real() - c.real() * t2;
        if (t2 < t2_lo || t2 > t2_hi) continue;
        if (t1 * t2 < lowest) {
            lowest = t1 * t2;
            r.point = z;
        }
    }
    if (lowest == kInfinity) {
        r.verdict = Verdict::Inconclusive;
        r.diagnostics = "no boundary point with t2 in range";
        return r;
    }
    r.margin = std::abs(lowest - 0.25);
    r.verdict = r.margin <= rel_tol * 0.25 ? Verdict::Pass : Verdict::Fail;
    r.diagnostics = "min t1 t2 = " + fmt(lowest);
    return r;
}

TheoremReport sector_containment_check(const BoundaryAtlas& atlas, cplx s, double tol) {
    if (s.imag() == 0.0) throw Error(ErrorKind::BadParameter, "sector needs Im s != 0");
    TheoremReport r;
    r.theorem_id = "sector_containment";
    for (const cplx z : atlas.vertices) {
        const double t2 = z.imag() / s.imag(), t1 = z.real() - s.real() * t2;
        const double v = std::max(-t1, -t2);
        if (v > r.margin) {
            r.margin = v;
            r.point = z;
        }
    }
    r.verdict = r.margin <= tol ? Verdict::Pass : Verdict::Fail;
    r.diagnostics = "largest violation " + fmt(r.margin);
    return r;
}

}  // namespace numrange
