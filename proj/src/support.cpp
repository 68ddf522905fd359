#include <cmath>
#include <numbers>

#include "numrange/numerical_range.hpp"

namespace numrange {
namespace {

// clusters larger than this are not compressed (cost grows like n m^2)
constexpr std::size_t kMaxCluster = 48;

double real_inner(const ComplexMatrix& x, const ComplexMatrix& y) {
    double s = 0.0;
    for (std::size_t i = 0; i < x.dim(); ++i)
        for (std::size_t j = 0; j < x.dim(); ++j) s += (std::conj(x(i, j)) * y(i, j)).real();
    return s;
}

ComplexMatrix traceless(const ComplexMatrix& m) {
    ComplexMatrix r = m;
    const cplx mean = m.trace() / double(m.dim());
    for (std::size_t i = 0; i < m.dim(); ++i) r(i, i) -= mean;
    return r;
}

}  // namespace

SupportOracle::SupportOracle(ComplexMatrix a) : a_(std::move(a)), re_(a_.dim()), im_(a_.dim()) {
    if (a_.dim() == 0) throw Error(ErrorKind::BadParameter, "empty matrix");
    if (!a_.is_finite()) throw Error(ErrorKind::BadParameter, "matrix has non-finite entries");
    const std::size_t n = a_.dim();
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) {
            const cplx x = a_(i, j), y = std::conj(a_(j, i));
            re_(i, j) = 0.5 * (x + y);
            im_(i, j) = cplx(0.0, -0.5) * (x - y);
        }
    for (std::size_t i = 0; i < n; ++i) {
        re_(i, i) = re_(i, i).real();
        im_(i, i) = im_(i, i).real();
    }
    band_ = Band::of(a_);
    tridiagonal_ = band_.lower <= 1 && band_.upper <= 1;
    norm_ = spectral_norm(a_);
    gap_tol_ = 1e-8 * std::max(norm_, std::numeric_limits<double>::min());
}

TopEigenspace SupportOracle::top_at(double theta, std::size_t max_vectors) const {
    const double c = std::cos(theta), s = std::sin(theta);
    const std::size_t n = a_.dim();
    if (tridiagonal_) {
        HermitianTridiagonal t;
        t.diag.resize(n);
        t.sub.resize(n - 1);
        for (std::size_t i = 0; i < n; ++i) t.diag[i] = c * re_(i, i).real() + s * im_(i, i).real();
        for (std::size_t k = 0; k + 1 < n; ++k) t.sub[k] = c * re_(k + 1, k) + s * im_(k + 1, k);
        return top_eigenspace(t, gap_tol_, max_vectors);
    }
    ComplexMatrix h(n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) h(i, j) = c * re_(i, j) + s * im_(i, j);
    return top_eigenspace(h, gap_tol_, max_vectors);
}

SupportSample SupportOracle::sample(double theta, bool keep_vectors) const {
    SupportSample out = assemble(theta, top_at(theta, kMaxCluster), keep_vectors);
    if (out.multiplicity <= kMaxCluster) return out;
    // Too large to compress: take the edge ends from the exact support points
    // just clockwise and counterclockwise of theta.
    auto beside = [&](double sign) {
        for (double delta = 1e-8; delta < 0.5; delta *= 10.0) {
            TopEigenspace t = top_at(theta + sign * delta, kMaxCluster);
            if (t.truncated()) continue;
            const SupportSample s = assemble(theta + sign * delta, std::move(t), false);
            // the neighbouring cluster overlaps this edge, so its far extreme is the end
            return sign < 0.0 ? s.start : s.end;
        }
        throw Error(ErrorKind::NoConvergence, "top eigenvalue cluster does not separate near theta");
    };
    out.start = beside(-1.0);
    out.end = beside(1.0);
    return out;
}

SupportSample SupportOracle::assemble(double theta, TopEigenspace top, bool keep_vectors) const {
    SupportSample out;
    out.theta = theta;
    out.h = top.top();
    out.multiplicity = top.multiplicity();
    std::vector<CVector> images;
    for (const auto& v : top.vectors) {
        images.push_back(multiply(a_, v, band_));
        out.points.push_back(inner(images.back(), v));
    }
    if (top.vectors.size() == 1) {
        out.start = out.end = out.points.front();
    } else {
        // compress to the top eigenspace; the edge ends extremize the tangential part
        const std::size_t m = top.vectors.size();
        ComplexMatrix b(m);
        for (std::size_t j = 0; j < m; ++j)
            for (std::size_t k = 0; k < m; ++k) b(j, k) = inner(images[k], top.vectors[j]);
        const cplx rot = std::polar(1.0, -theta);
        ComplexMatrix tang(m);
        for (std::size_t j = 0; j < m; ++j)
            for (std::size_t k = 0; k < m; ++k)
                tang(j, k) = cplx(0.0, -0.5) * (rot * b(j, k) - std::conj(rot * b(k, j)));
        const auto e = eig_hermitian(tang);
        auto value_at = [&](const CVector& w) { return inner(multiply(b, w), w); };
        out.start = value_at(e.vectors.front());
        out.end = value_at(e.vectors.back());
    }
    if (keep_vectors) out.vectors = std::move(top.vectors);
    return out;
}

SupportSample support_sample(const ComplexMatrix& a, double theta) { return SupportOracle(a).sample(theta, true); }

const char* to_string(Degeneracy::Kind kind) noexcept {
    switch (kind) {
        case Degeneracy::Kind::Point: return "Point";
        case Degeneracy::Kind::Segment: return "Segment";
        case Degeneracy::Kind::FullDim: return "FullDim";
    }
    return "?";
}

Degeneracy degeneracy_check(const ComplexMatrix& a, double tol) {
    const std::size_t n = a.dim();
    if (n == 0) throw Error(ErrorKind::BadParameter, "empty matrix");
    const double fro = a.frobenius_norm();
    const cplx mean = a.trace() / double(n);
    Degeneracy d;
    if (traceless(a).frobenius_norm() <= tol * fro || fro == 0.0) {
        d.kind = Degeneracy::Kind::Point;
        d.a = d.b = mean;
        return d;
    }
    const ComplexMatrix r0 = traceless(rotated_hermitian_part(a, 0.0));
    const ComplexMatrix k0 = traceless(rotated_hermitian_part(a, std::numbers::pi / 2));
    // ||cos t K0 - sin t R0||^2 is a quadratic form in (cos t, sin t); take its
    // minimizing direction, then measure the residual directly to avoid cancellation
    const double g11 = real_inner(k0, k0), g22 = real_inner(r0, r0), g12 = -real_inner(k0, r0);
    const double theta = 0.5 * std::atan2(2.0 * g12, g11 - g22) + std::numbers::pi / 2;
    ComplexMatrix resid = std::cos(theta) * k0;
    resid -= std::sin(theta) * r0;
    if (resid.frobenius_norm() > tol * fro) return d;

    const auto e = eig_hermitian(rotated_hermitian_part(a, theta));
    d.kind = Degeneracy::Kind::Segment;
    d.a = rayleigh(a, e.vectors.front());
    d.b = rayleigh(a, e.vectors.back());
    return d;
}

ComplexMatrix affine_transform(const ComplexMatrix& a, cplx scale, cplx shift) {
    if (scale == cplx{}) throw Error(ErrorKind::ZeroScale, "affine scale must be nonzero");
    ComplexMatrix r = scale * a;
    for (std::size_t i = 0; i < r.dim(); ++i) r(i, i) += shift;
    return r;
}

}  // namespace numrange
