#include <algorithm>
#include <cmath>
#include <numbers>

#include "numrange/linalg.hpp"
#include "numrange/numerical_range.hpp"
#include "numrange/witness.hpp"

namespace numrange {
namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

double cross(cplx a, cplx b) { return a.real() * b.imag() - a.imag() * b.real(); }

struct Node {
    double theta;
    cplx p;
    CVector x;
};

CVector combine(const std::vector<CVector>& basis, std::span<const cplx> coef) {
    CVector out(basis.front().size());
    for (std::size_t k = 0; k < basis.size(); ++k) axpy(coef[k], basis[k], out);
    return out;
}

// Boundary points with their vectors in direction theta. A cluster yields
// both ends of its edge.
std::vector<Node> support_nodes(const SupportOracle& oracle, double theta) {
    const ComplexMatrix& a = oracle.matrix();
    SupportSample s = oracle.sample(theta, true);
    if (s.vectors.size() == 1) return {{theta, s.points.front(), std::move(s.vectors.front())}};
    const std::size_t m = s.vectors.size();
    std::vector<CVector> images;
    for (const auto& v : s.vectors) images.push_back(multiply(a, v));
    ComplexMatrix b(m), tang(m);
    for (std::size_t j = 0; j < m; ++j)
        for (std::size_t k = 0; k < m; ++k) b(j, k) = inner(images[k], s.vectors[j]);
    const cplx rot = std::polar(1.0, -theta);
    for (std::size_t j = 0; j < m; ++j)
        for (std::size_t k = 0; k < m; ++k) tang(j, k) = cplx(0.0, -0.5) * (rot * b(j, k) - std::conj(rot * b(k, j)));
    const auto e = eig_hermitian(tang);
    CVector lo = normalized(combine(s.vectors, e.vectors.front()));
    CVector hi = normalized(combine(s.vectors, e.vectors.back()));
    const cplx plo = rayleigh(a, lo), phi = rayleigh(a, hi);
    return {{theta, plo, std::move(lo)}, {theta, phi, std::move(hi)}};
}

class InverseSolver {
public:
    explicit InverseSolver(const ComplexMatrix& a) : a_(a), band_(Band::of(a)) {}

    // unnormalized v on the curve from x to y with <Av,v>/<v,v> = w, where w is
    // on the segment [p, q] (p = <Ax,x>, q = <Ay,y>, unit x and y)
    CVector on_segment(std::span<const cplx> x, cplx p, std::span<const cplx> y, cplx q, cplx w, double scale) const {
        const cplx d = q - p;
        const double len = std::abs(d);
        if (std::abs(w - p) <= 1e-15 * scale || len == 0.0) return {x.begin(), x.end()};
        if (std::abs(w - q) <= 1e-15 * scale) return {y.begin(), y.end()};
        const double s = std::clamp(((w - p) * std::conj(d)).real() / (len * len), 0.0, 1.0);
        // rotate and shift so that p -> 0 and q -> len > 0; the target becomes s len
        const cplx rot = std::conj(d) / len;
        const CVector ax = multiply(a_, x, band_), ay = multiply(a_, y, band_);
        const cplx yx = inner(y, x);
        const cplx a1 = rot * (inner(ax, y) - p * std::conj(yx));
        const cplx a2 = rot * (inner(ay, x) - p * yx);
        // phase of the y component that makes the cross term real
        const cplx skew = a2 - std::conj(a1);
        const cplx ph = std::abs(skew) == 0.0 ? cplx(1.0) : std::conj(skew) / std::abs(skew);
        const double c1 = (std::conj(ph) * a1 + ph * a2).real();
        const double g = (ph * yx).real();
        const double wt = s * len;
        const double qa = len - wt, qb = c1 - 2.0 * wt * g;
        if (qa <= 1e-15 * len) return {y.begin(), y.end()};
        const double root = std::sqrt(qb * qb + 4.0 * qa * wt);
        const double t = qb >= 0.0 ? 2.0 * wt / (qb + root) : (root - qb) / (2.0 * qa);
        CVector v(x.begin(), x.end());
        axpy(t * ph, y, v);
        return v;
    }

    CVector solve(cplx z) const {
        const SupportOracle oracle(a_);
        std::vector<Node> nodes;
        for (int k = 0; k < 16; ++k)
            for (auto& nd : support_nodes(oracle, kTwoPi * k / 16.0)) nodes.push_back(std::move(nd));
        double scale = 0.0;
        for (int k = 0; k < 8; ++k) {
            const double h1 = oracle.sample(kTwoPi * k / 16.0).h, h2 = oracle.sample(kTwoPi * (k + 8) / 16.0).h;
            scale = std::max(scale, h1 + h2);
        }
        if (scale <= 0.0) {
            // scalar matrix
            if (std::abs(z - nodes.front().p) > 1e-10 * std::max(1.0, std::abs(z)))
                throw Error(ErrorKind::OutsideRange, "the range is a single point");
            return nodes.front().x;
        }
        scale_ = scale;
        const double tol_in = 0.5e-10 * scale;
        std::vector<std::pair<cplx, cplx>> exact;

        for (int iter = 0; iter < 400; ++iter) {
            std::vector<std::size_t> poly;
            for (std::size_t i = 0; i < nodes.size(); ++i)
                if (poly.empty() || std::abs(nodes[i].p - nodes[poly.back()].p) > 1e-13 * scale) poly.push_back(i);
            while (poly.size() > 1 && std::abs(nodes[poly.back()].p - nodes[poly.front()].p) <= 1e-13 * scale)
                poly.pop_back();
            const std::size_t m = poly.size();
            auto P = [&](std::size_t i) -> const Node& { return nodes[poly[i % m]]; };

            double area = 0.0;
            for (std::size_t i = 0; i < m; ++i) area += 0.5 * cross(P(i).p, P(i + 1).p);
            if (m < 3 || area <= 1e-12 * scale * scale) return segment_case(nodes, z, tol_in);

            double dmin = kInfinity, worst_sd = 0.0;
            std::size_t near_edge = 0, worst = m;
            for (std::size_t i = 0; i < m; ++i) {
                const cplx p = P(i).p, q = P(i + 1).p;
                const cplx e = q - p;
                const double sd = cross(e, z - p) / std::abs(e);
                const double t = std::clamp(((z - p) * std::conj(e)).real() / std::norm(e), 0.0, 1.0);
                const double dist = std::abs(p + t * e - z);
                if (dist < dmin) {
                    dmin = dist;
                    near_edge = i;
                }
                const bool is_exact = std::any_of(exact.begin(), exact.end(), [&](const auto& pr) {
                    return std::abs(pr.first - p) <= 1e-13 * scale && std::abs(pr.second - q) <= 1e-13 * scale;
                });
                if (sd < worst_sd && !is_exact) {
                    worst_sd = sd;
                    worst = i;
                }
            }
            bool inside = true;
            for (std::size_t i = 0; i < m && inside; ++i)
                inside = cross(P(i + 1).p - P(i).p, z - P(i).p) >= 0.0;
            if (inside) return fan_case(nodes, poly, z);
            if (dmin <= tol_in) {
                const Node &l = P(near_edge), &r = P(near_edge + 1);
                return on_segment(l.x, l.p, r.x, r.p, z, scale);
            }
            if (worst == m) throw Error(ErrorKind::OutsideRange, "target lies beyond an edge of the range");

            const Node &l = P(worst), &r = P(worst + 1);
            const double tl = l.theta;
            double tr = r.theta;
            if (tr < tl || (worst + 1) % m == 0) tr += kTwoPi;
            const cplx chord = r.p - l.p;
            double t = std::arg(cplx(0.0, -1.0) * chord);
            t = tl + std::fmod(std::fmod(t - tl, kTwoPi) + kTwoPi, kTwoPi);
            if (!(t >= tl && t <= tr)) t = 0.5 * (tl + tr);
            const double h = oracle.sample(t).h;
            if ((z * std::polar(1.0, -t)).real() - h > tol_in)
                throw Error(ErrorKind::OutsideRange, "target is " + std::to_string(((z * std::polar(1.0, -t)).real() - h) / scale) +
                                                         " range widths beyond a supporting line");
            const cplx lp = l.p, rp = r.p;
            const double tw = t >= kTwoPi ? t - kTwoPi : t;
            auto fresh = support_nodes(oracle, tw);
            bool progress = false;
            for (const auto& nd : fresh)
                if (std::abs(nd.p - lp) > 1e-12 * scale && std::abs(nd.p - rp) > 1e-12 * scale) progress = true;
            if (!progress) {
                exact.emplace_back(lp, rp);
                continue;
            }
            for (auto& nd : fresh) {
                const auto at = std::upper_bound(nodes.begin(), nodes.end(), nd.theta,
                                                 [](double th, const Node& o) { return th < o.theta; });
                nodes.insert(at, std::move(nd));
            }
        }
        throw Error(ErrorKind::NoConvergence, "boundary refinement did not reach the target");
    }

    double scale() const noexcept { return scale_; }

private:
    CVector segment_case(const std::vector<Node>& nodes, cplx z, double tol_in) const {
        std::size_t i0 = 0, j0 = 0;
        double far = -1.0;
        for (std::size_t i = 0; i < nodes.size(); ++i)
            for (std::size_t j = i + 1; j < nodes.size(); ++j)
                if (std::abs(nodes[i].p - nodes[j].p) > far) {
                    far = std::abs(nodes[i].p - nodes[j].p);
                    i0 = i;
                    j0 = j;
                }
        const cplx p = nodes[i0].p, e = nodes[j0].p - p;
        const double t = std::clamp(((z - p) * std::conj(e)).real() / std::norm(e), 0.0, 1.0);
        if (std::abs(p + t * e - z) > tol_in) throw Error(ErrorKind::OutsideRange, "target is off the segment range");
        return on_segment(nodes[i0].x, p, nodes[j0].x, nodes[j0].p, z, scale_);
    }

    CVector fan_case(const std::vector<Node>& nodes, const std::vector<std::size_t>& poly, cplx z) const {
        const Node& o = nodes[poly.front()];
        const cplx d = z - o.p;
        if (std::abs(d) <= 1e-15 * scale_) return o.x;
        const std::size_t m = poly.size();
        std::size_t i = 1;
        while (i + 2 < m && cross(nodes[poly[i + 1]].p - o.p, d) > 0.0) ++i;
        const Node &l = nodes[poly[i]], &r = nodes[poly[i + 1]];
        const cplx e = r.p - l.p;
        const double den = cross(e, d);
        const double s = den == 0.0 ? 0.0 : std::clamp(cross(o.p - l.p, d) / den, 0.0, 1.0);
        const CVector v1 = normalized(on_segment(l.x, l.p, r.x, r.p, l.p + s * e, scale_));
        return on_segment(o.x, o.p, v1, rayleigh(a_, v1), z, scale_);
    }

    const ComplexMatrix& a_;
    Band band_;
    mutable double scale_ = 1.0;
};

double ls_slope(const std::vector<double>& x, const std::vector<double>& y) {
    const std::size_t n = x.size();
    if (n < 2) return 0.0;
    double mx = 0.0, my = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        mx += x[i];
        my += y[i];
    }
    mx /= double(n);
    my /= double(n);
    double sxy = 0.0, sxx = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        sxy += (x[i] - mx) * (y[i] - my);
        sxx += (x[i] - mx) * (x[i] - mx);
    }
    return sxx == 0.0 ? 0.0 : sxy / sxx;
}

const CVector& pick(const std::vector<CVector>& family, std::size_t n) {
    return family.size() == 1 ? family.front() : family[n];
}

void check_family(const std::vector<CVector>& family, const WitnessSequence& ws, std::size_t dim) {
    if (family.empty() || (family.size() != 1 && family.size() != ws.u.size()))
        throw Error(ErrorKind::BadParameter, "vector family needs one entry or one per sequence element");
    for (const auto& v : family)
        if (v.size() != dim) throw Error(ErrorKind::BadParameter, "vector family has the wrong dimension");
}

}  // namespace

CVector inverse_numrange(const ComplexMatrix& a, cplx z) {
    if (a.dim() == 0) throw Error(ErrorKind::BadParameter, "empty matrix");
    const InverseSolver solver(a);
    CVector v = normalized(solver.solve(z));
    fix_phase(v);
    const double res = std::abs(rayleigh(a, v) - z);
    if (res > 1e-10 * solver.scale())
        throw Error(ErrorKind::NoConvergence, "residual " + std::to_string(res / solver.scale()) + " of the range width");
    return v;
}

ComplexMatrix two_dim_compression(const ComplexMatrix& a, std::span<const cplx> v1, std::span<const cplx> v2) {
    if (v1.size() != a.dim() || v2.size() != a.dim()) throw Error(ErrorKind::BadParameter, "vector dimension mismatch");
    const double n1 = norm(v1);
    if (n1 == 0.0) throw Error(ErrorKind::DependentVectors, "first vector is zero");
    CVector q1(v1.begin(), v1.end());
    scale(q1, 1.0 / n1);
    CVector q2(v2.begin(), v2.end());
    const double n2_before = norm(q2);
    for (int pass = 0; pass < 2; ++pass) axpy(-inner(q2, q1), q1, q2);
    const double n2 = norm(q2);
    if (n2_before == 0.0 || n2 <= 1e-10 * n2_before)
        throw Error(ErrorKind::DependentVectors, "vectors are linearly dependent");
    scale(q2, 1.0 / n2);
    const CVector* q[2] = {&q1, &q2};
    ComplexMatrix m(2);
    for (std::size_t k = 0; k < 2; ++k) {
        const CVector aq = multiply(a, *q[k]);
        for (std::size_t j = 0; j < 2; ++j) m(j, k) = inner(aq, *q[j]);
    }
    return m;
}

std::vector<double> default_eps_schedule(std::size_t count) {
    std::vector<double> eps;
    for (std::size_t n = 1; n <= count; ++n) eps.push_back(std::ldexp(1.0, -int(n)));
    return eps;
}

WitnessSequence build_witness_sequence(const ComplexMatrix& a, cplx alpha, const std::vector<double>& eps) {
    if (!(alpha.real() > 0.0 && alpha.real() < 1.0 && alpha.imag() > 0.0 && alpha.imag() < 1.0 && std::abs(alpha) < 1.0))
        throw Error(ErrorKind::BadParameter, "alpha must satisfy 0 < Re, Im < 1 and |alpha| < 1");
    if (eps.empty()) throw Error(ErrorKind::BadParameter, "empty eps schedule");
    for (std::size_t i = 0; i < eps.size(); ++i) {
        if (!(eps[i] > 0.0 && eps[i] <= 1.0)) throw Error(ErrorKind::BadParameter, "eps entries must lie in (0, 1]");
        if (i > 0 && !(eps[i] < eps[i - 1])) throw Error(ErrorKind::BadParameter, "eps must be strictly decreasing");
    }
    const SupportOracle oracle(a);
    const SupportSample bottom = oracle.sample(-std::numbers::pi / 2);
    const double scale = std::max(oracle.norm(), std::numeric_limits<double>::min());
    const double d0 = std::abs(bottom.start) + std::abs(bottom.end) - std::abs(bottom.end - bottom.start);
    if (std::abs(bottom.h) > 1e-9 * scale || d0 > 1e-7 * scale)
        throw Error(ErrorKind::NotNormalized, "0 is not the lowest point of a range in the upper half plane");

    WitnessSequence ws;
    ws.alpha = alpha;
    ws.eps = eps;
    // the segment (0, alpha] is in the range exactly when alpha is
    try {
        (void)inverse_numrange(a, alpha);
    } catch (const Error& e) {
        if (e.kind() != ErrorKind::OutsideRange) throw;
        throw Error(ErrorKind::AnchorInfeasible, std::string("alpha is outside the range (") + e.what() + ")");
    }
    for (const double e : eps) {
        CVector u = inverse_numrange(a, e * alpha);
        ws.residuals.push_back(std::abs(rayleigh(a, u) - e * alpha));
        ws.u.push_back(std::move(u));
    }
    return ws;
}

CVector default_f(const ComplexMatrix& a) {
    CVector f = smallest_singular_triple(a, cplx{}).right;
    fix_phase(f);
    return f;
}

std::vector<CVector> scaled_family(const ComplexMatrix& a, const WitnessSequence& ws, const std::vector<CVector>& f,
                                   double* r_out) {
    check_family(f, ws, a.dim());
    double s1 = 0.0, s2 = 0.0;
    for (const auto& x : f) {
        s1 = std::max(s1, norm(x));
        s2 = std::max({s2, norm(multiply(a, x)), norm(multiply_adjoint(a, x))});
    }
    if (s1 == 0.0) throw Error(ErrorKind::BadParameter, "the f family is zero");
    const double r = ws.alpha.real() / (2.0 * std::max(s1, s2));
    if (r_out) *r_out = r;
    std::vector<CVector> v;
    for (std::size_t n = 0; n < ws.u.size(); ++n) {
        const CVector& fn = pick(f, n);
        const cplx afu = inner(multiply(a, fn), ws.u[n]);
        const cplx auf = inner(multiply(a, ws.u[n]), fn);
        // R e^{i t} afu and R e^{-i t} auf get the same argument
        const double t = (afu == cplx{} || auf == cplx{}) ? 0.0 : 0.5 * (std::arg(auf) - std::arg(afu));
        CVector vn = fn;
        scale(vn, r * std::polar(1.0, t));
        v.push_back(std::move(vn));
    }
    return v;
}

bool WitnessReport::all_hold() const noexcept {
    constexpr double slack = -1e-12;
    return worst_lemma42 >= slack && worst_lemma43 >= slack && worst_lemma44 >= slack &&
           worst_lemma44_mixed >= slack && worst_lemma45 >= slack && min_re_pos > 0.0;
}

WitnessReport replay_inequalities(const ComplexMatrix& a, const WitnessSequence& ws, const std::vector<CVector>& v) {
    check_family(v, ws, a.dim());
    const double half_re = ws.alpha.real() / 2.0;
    for (const auto& x : v) {
        const double big = std::max({norm(x), norm(multiply(a, x)), norm(multiply_adjoint(a, x))});
        if (big > 1.0 + 1e-12)
            throw Error(ErrorKind::ScalingViolated, "max(||v||, ||Av||, ||A^H v||) = " + std::to_string(big) + " exceeds 1");
        const double rav = std::abs(inner(multiply(a, x), x).real());
        if (rav > half_re * (1.0 + 1e-12))
            throw Error(ErrorKind::ScalingViolated,
                        "|Re<Av, v>| = " + std::to_string(rav) + " exceeds Re(alpha)/2 = " + std::to_string(half_re));
    }

    WitnessReport rep;
    rep.alpha = ws.alpha;
    rep.worst_lemma42 = rep.worst_lemma43 = rep.worst_lemma44 = rep.worst_lemma44_mixed = rep.worst_lemma45 =
        rep.min_re_pos = kInfinity;
    std::vector<double> xs, ys;
    for (std::size_t n = 0; n < ws.u.size(); ++n) {
        const CVector& u = ws.u[n];
        const CVector& vn = pick(v, n);
        const double e = ws.eps[n], r = std::sqrt(e);
        WitnessRow row;
        row.n = n + 1;
        row.eps = e;
        row.residual = ws.residuals[n];
        row.avu = inner(multiply(a, vn), u);
        row.auv = inner(multiply(a, u), vn);
        const cplx mixed = row.avu + row.auv;
        row.c_n = mixed.real() >= 0.0 ? 1 : -1;
        CVector w = u;
        axpy(r * row.c_n, vn, w);
        row.w_norm = norm(w);
        row.aww = inner(multiply(a, w), w);
        row.lemma42_lo = row.w_norm - (1.0 - r);
        row.lemma42_hi = (1.0 + r) - row.w_norm;
        row.lemma43_margin = 4.0 * r - std::abs(row.aww);
        row.lemma44_margin = 4.0 * e - row.aww.imag();
        row.lemma44_mixed_margin = 2.0 * r - std::abs(mixed.imag());
        row.re_pos = row.aww.real();
        row.lemma45_margin = row.re_pos - e * half_re - r * std::abs(mixed.real());
        row.mixed_re = mixed.real();

        rep.worst_lemma42 = std::min({rep.worst_lemma42, row.lemma42_lo, row.lemma42_hi});
        rep.worst_lemma43 = std::min(rep.worst_lemma43, row.lemma43_margin);
        rep.worst_lemma44 = std::min(rep.worst_lemma44, row.lemma44_margin);
        rep.worst_lemma44_mixed = std::min(rep.worst_lemma44_mixed, row.lemma44_mixed_margin);
        rep.worst_lemma45 = std::min(rep.worst_lemma45, row.lemma45_margin);
        rep.min_re_pos = std::min(rep.min_re_pos, row.re_pos);
        xs.push_back(r);
        ys.push_back(row.mixed_re);
        rep.rows.push_back(row);
    }
    rep.lemma46_slope = ls_slope(xs, ys);
    return rep;
}

DecayProbe au_n_decay_probe(const ComplexMatrix& a, const WitnessSequence& ws) {
    DecayProbe out;
    out.eps = ws.eps;
    std::vector<double> lx, ly;
    for (std::size_t n = 0; n < ws.u.size(); ++n) {
        const double nu = norm(multiply(a, ws.u[n]));
        out.au_norms.push_back(nu);
        if (nu > 0.0) {
            lx.push_back(std::log(ws.eps[n]));
            ly.push_back(std::log(nu));
        }
    }
    out.fitted = lx.size();
    out.exponent = ls_slope(lx, ly);
    return out;
}

}  // namespace numrange
