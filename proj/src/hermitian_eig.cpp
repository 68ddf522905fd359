#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "numrange/error.hpp"
#include "numrange/linalg.hpp"

namespace numrange {
namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();

/// Householder reflectors P_k = I - 2 v v^H acting on rows/cols k+1..n-1.
struct Reduction {
    HermitianTridiagonal tri;
    std::vector<CVector> reflectors;  // reflectors[k] has length n - k - 1, may be empty

    /// x <- Q x where H = Q T Q^H.
    void apply_q(std::span<cplx> x) const {
        const std::size_t n = x.size();
        for (std::size_t k = reflectors.size(); k-- > 0;) {
            const auto& v = reflectors[k];
            if (v.empty()) continue;
            auto tail = x.subspan(k + 1, n - k - 1);
            const cplx s = 2.0 * inner(tail, v);  // 2 v^H tail
            axpy(-s, v, tail);
        }
    }
};

Reduction tridiagonalize(ComplexMatrix h) {
    const std::size_t n = h.dim();
    Reduction out;
    out.reflectors.resize(n > 2 ? n - 2 : 0);
    for (std::size_t k = 0; k + 2 < n; ++k) {
        const std::size_t m = n - k - 1;
        CVector x(m);
        for (std::size_t i = 0; i < m; ++i) x[i] = h(k + 1 + i, k);
        double tail = 0.0;
        for (std::size_t i = 1; i < m; ++i) tail += std::norm(x[i]);
        if (tail == 0.0) continue;
        const double xn = std::sqrt(tail + std::norm(x[0]));
        const cplx phase = x[0] == cplx{} ? cplx(1.0) : x[0] / std::abs(x[0]);
        const cplx alpha = -phase * xn;
        CVector v = x;
        v[0] -= alpha;
        const double vn = norm(v);
        scale(v, 1.0 / vn);

        // p = H22 v, K = v^H p, q = p - K v;  H22 <- H22 - 2 v q^H - 2 q v^H
        CVector p(m);
        for (std::size_t i = 0; i < m; ++i) {
            cplx s{};
            for (std::size_t j = 0; j < m; ++j) s += h(k + 1 + i, k + 1 + j) * v[j];
            p[i] = s;
        }
        const double kk = inner(p, v).real();
        CVector q = p;
        axpy(-kk, v, q);
        for (std::size_t i = 0; i < m; ++i)
            for (std::size_t j = 0; j < m; ++j)
                h(k + 1 + i, k + 1 + j) -= 2.0 * (v[i] * std::conj(q[j]) + q[i] * std::conj(v[j]));
        h(k + 1, k) = alpha;
        h(k, k + 1) = std::conj(alpha);
        for (std::size_t i = 1; i < m; ++i) {
            h(k + 1 + i, k) = 0.0;
            h(k, k + 1 + i) = 0.0;
        }
        out.reflectors[k] = std::move(v);
    }
    out.tri.diag.resize(n);
    out.tri.sub.resize(n > 0 ? n - 1 : 0);
    for (std::size_t i = 0; i < n; ++i) out.tri.diag[i] = h(i, i).real();
    for (std::size_t i = 0; i + 1 < n; ++i) out.tri.sub[i] = h(i + 1, i);
    return out;
}

/// Unitary diagonal D with D^H T D real symmetric; returns D and |sub|.
std::vector<cplx> real_phases(const HermitianTridiagonal& t, std::vector<double>& off) {
    const std::size_t n = t.dim();
    std::vector<cplx> d(n, 1.0);
    off.assign(n, 0.0);
    for (std::size_t k = 0; k + 1 < n; ++k) {
        const double a = std::abs(t.sub[k]);
        off[k] = a;
        d[k + 1] = a == 0.0 ? d[k] : d[k] * t.sub[k] / a;
    }
    return d;
}

double tridiagonal_norm(std::span<const double> d, std::span<const double> e) {
    double nrm = 0.0;
    const std::size_t n = d.size();
    for (std::size_t i = 0; i < n; ++i) {
        double r = std::abs(d[i]);
        if (i > 0) r += std::abs(e[i - 1]);
        if (i + 1 < n) r += std::abs(e[i]);
        nrm = std::max(nrm, r);
    }
    return nrm;
}

/// Implicit QL with Wilkinson shifts on a real symmetric tridiagonal matrix
/// (d diagonal, e[i] = T(i+1,i), e[n-1] ignored). Rotations are accumulated
/// into the columns of z when z is non-empty.
void implicit_ql(std::vector<double>& d, std::vector<double> e, std::vector<CVector>& z) {
    const std::size_t n = d.size();
    if (n == 0) return;
    e.resize(n, 0.0);
    e[n - 1] = 0.0;
    const bool vectors = !z.empty();
    for (std::size_t l = 0; l < n; ++l) {
        int iter = 0;
        std::size_t m;
        do {
            for (m = l; m + 1 < n; ++m) {
                const double dd = std::abs(d[m]) + std::abs(d[m + 1]);
                if (std::abs(e[m]) <= kEps * dd || std::abs(e[m]) <= std::numeric_limits<double>::min()) break;
            }
            if (m != l) {
                if (iter++ == 60) throw Error(ErrorKind::NoConvergence, "implicit QL exceeded 60 sweeps");
                double g = (d[l + 1] - d[l]) / (2.0 * e[l]);
                double r = std::hypot(g, 1.0);
                g = d[m] - d[l] + e[l] / (g + std::copysign(r, g));
                double s = 1.0, c = 1.0, p = 0.0;
                bool underflow = false;
                for (std::size_t i = m; i-- > l;) {
                    const double f = s * e[i];
                    const double b = c * e[i];
                    r = std::hypot(f, g);
                    e[i + 1] = r;
                    if (r == 0.0) {
                        d[i + 1] -= p;
                        e[m] = 0.0;
                        underflow = true;
                        break;
                    }
                    s = f / r;
                    c = g / r;
                    g = d[i + 1] - p;
                    r = (d[i] - g) * s + 2.0 * c * b;
                    p = s * r;
                    d[i + 1] = g + p;
                    g = c * r - b;
                    if (vectors) {
                        auto& zi = z[i];
                        auto& zi1 = z[i + 1];
                        for (std::size_t k = 0; k < zi.size(); ++k) {
                            const cplx ff = zi1[k];
                            zi1[k] = s * zi[k] + c * ff;
                            zi[k] = c * zi[k] - s * ff;
                        }
                    }
                }
                if (underflow) continue;
                d[l] -= p;
                e[l] = g;
                e[m] = 0.0;
            }
        } while (m != l);
    }
}

/// Number of eigenvalues strictly below x (Sturm sequence).
std::size_t count_below(std::span<const double> d, std::span<const double> e, double x, double pivmin) {
    std::size_t count = 0;
    double q = d[0] - x;
    if (std::abs(q) < pivmin) q = -pivmin;
    if (q < 0.0) ++count;
    for (std::size_t i = 1; i < d.size(); ++i) {
        q = d[i] - x - e[i - 1] * e[i - 1] / q;
        if (std::abs(q) < pivmin) q = -pivmin;
        if (q < 0.0) ++count;
    }
    return count;
}

/// k-th smallest eigenvalue (0-based) by bisection.
double bisect_eigenvalue(std::span<const double> d, std::span<const double> e, std::size_t k, double lo, double hi,
                         double pivmin) {
    for (int it = 0; it < 200; ++it) {
        const double mid = 0.5 * (lo + hi);
        const double tol = 2.0 * kEps * std::max(std::abs(lo), std::abs(hi)) + pivmin;
        if (hi - lo <= tol || mid == lo || mid == hi) break;
        if (count_below(d, e, mid, pivmin) > k)
            hi = mid;
        else
            lo = mid;
    }
    return 0.5 * (lo + hi);
}

/// Solves (T - sigma I) x = b for a real symmetric tridiagonal T with
/// partial pivoting; tiny pivots are replaced by `floor`.
std::vector<double> solve_shifted(std::span<const double> d, std::span<const double> e, double sigma,
                                  std::vector<double> b, double floor) {
    const std::size_t n = d.size();
    // rows hold (diag, super1, super2) after elimination
    std::vector<double> u0(n), u1(n, 0.0), u2(n, 0.0);
    for (std::size_t i = 0; i < n; ++i) u0[i] = d[i] - sigma;
    for (std::size_t i = 0; i + 1 < n; ++i) u1[i] = e[i];
    std::vector<double> below(n, 0.0);  // sub-diagonal entry of row i+1
    for (std::size_t i = 0; i + 1 < n; ++i) below[i] = e[i];
    for (std::size_t k = 0; k + 1 < n; ++k) {
        // candidate rows: k (u0[k], u1[k], u2[k]) and k+1 (below[k], d[k+1]-sigma, e[k+1])
        double r0 = below[k];
        double r1 = u0[k + 1];
        double r2 = k + 2 < n ? u1[k + 1] : 0.0;
        if (std::abs(r0) > std::abs(u0[k])) {
            std::swap(u0[k], r0);
            std::swap(u1[k], r1);
            std::swap(u2[k], r2);
            std::swap(b[k], b[k + 1]);
        }
        if (std::abs(u0[k]) < floor) u0[k] = floor;
        const double l = r0 / u0[k];
        u0[k + 1] = r1 - l * u1[k];
        if (k + 2 < n) u1[k + 1] = r2 - l * u2[k];
        b[k + 1] -= l * b[k];
    }
    if (std::abs(u0[n - 1]) < floor) u0[n - 1] = floor;
    std::vector<double> x(n);
    for (std::size_t k = n; k-- > 0;) {
        double s = b[k];
        if (k + 1 < n) s -= u1[k] * x[k + 1];
        if (k + 2 < n) s -= u2[k] * x[k + 2];
        x[k] = s / u0[k];
    }
    return x;
}

double real_norm(std::span<const double> x) {
    double m = 0.0;
    for (double v : x) m = std::max(m, std::abs(v));
    if (m == 0.0) return 0.0;
    double s = 0.0;
    for (double v : x) s += (v / m) * (v / m);
    return m * std::sqrt(s);
}

/// Top cluster of a real symmetric tridiagonal matrix with real eigenvectors.
std::size_t top_cluster(std::span<const double> d, std::span<const double> e, double gap_tol, std::size_t max_vectors,
                        std::vector<double>& values, std::vector<std::vector<double>>& vectors) {
    const std::size_t n = d.size();
    const double tnorm = std::max(tridiagonal_norm(d, e), std::numeric_limits<double>::min());
    const double pivmin = std::numeric_limits<double>::min() / kEps * std::max(1.0, tnorm);
    const double lo = -tnorm * (1.0 + 4.0 * kEps) - pivmin;
    const double hi = tnorm * (1.0 + 4.0 * kEps) + pivmin;
    const double top = bisect_eigenvalue(d, e, n - 1, lo, hi, pivmin);
    const std::size_t below = count_below(d, e, top - gap_tol, pivmin);
    const std::size_t m = std::max<std::size_t>(1, n - std::min(below, n - 1));
    const std::size_t resolved = m <= max_vectors ? m : 1;
    values.clear();
    vectors.clear();
    for (std::size_t r = 0; r < resolved; ++r) {
        const std::size_t k = n - 1 - r;
        values.push_back(r == 0 ? top : bisect_eigenvalue(d, e, k, lo, hi, pivmin));
    }
    const double floor = kEps * tnorm;
    for (std::size_t r = 0; r < resolved; ++r) {
        std::vector<double> x(n);
        std::uint64_t state = 0x9E3779B97F4A7C15ull + 7919ull * r;
        for (auto& xi : x) {
            state = state * 6364136223846793005ull + 1442695040888963407ull;
            xi = 0.5 + static_cast<double>(state >> 11) * 0x1.0p-53;
        }
        for (int it = 0; it < 4; ++it) {
            x = solve_shifted(d, e, values[r], x, floor);
            for (int pass = 0; pass < 2; ++pass)
                for (const auto& prev : vectors) {
                    const double c = std::inner_product(x.begin(), x.end(), prev.begin(), 0.0);
                    for (std::size_t i = 0; i < n; ++i) x[i] -= c * prev[i];
                }
            const double xn = real_norm(x);
            if (xn == 0.0) throw Error(ErrorKind::NoConvergence, "inverse iteration collapsed");
            for (auto& xi : x) xi /= xn;
        }
        vectors.push_back(std::move(x));
    }
    return m;
}

void check_hermitian(const ComplexMatrix& h) {
    double skew = 0.0;
    const std::size_t n = h.dim();
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) skew += std::norm(h(i, j) - std::conj(h(j, i)));
    if (std::sqrt(skew) > 1e-10 * h.frobenius_norm())
        throw Error(ErrorKind::NotHermitian, "||H - H^H||_F exceeds 1e-10 ||H||_F");
}

ComplexMatrix symmetrized(const ComplexMatrix& h) {
    ComplexMatrix s = h;
    const std::size_t n = h.dim();
    for (std::size_t i = 0; i < n; ++i) {
        s(i, i) = h(i, i).real();
        for (std::size_t j = i + 1; j < n; ++j) {
            const cplx v = 0.5 * (h(i, j) + std::conj(h(j, i)));
            s(i, j) = v;
            s(j, i) = std::conj(v);
        }
    }
    return s;
}

TopEigenspace lift(const HermitianTridiagonal& t, double gap_tol, std::size_t max_vectors, const Reduction* red) {
    std::vector<double> off;
    const auto phases = real_phases(t, off);
    std::vector<double> values;
    std::vector<std::vector<double>> real_vecs;
    TopEigenspace out;
    out.cluster = top_cluster(t.diag, off, gap_tol, max_vectors, values, real_vecs);
    out.values = std::move(values);
    for (const auto& y : real_vecs) {
        CVector v(y.size());
        for (std::size_t i = 0; i < y.size(); ++i) v[i] = phases[i] * y[i];
        if (red) red->apply_q(v);
        out.vectors.push_back(std::move(v));
    }
    return out;
}

}  // namespace

ComplexMatrix rotated_hermitian_part(const ComplexMatrix& a, double theta) {
    const cplx rot = std::polar(1.0, -theta);
    const std::size_t n = a.dim();
    ComplexMatrix h(n);
    for (std::size_t i = 0; i < n; ++i) {
        h(i, i) = (rot * a(i, i)).real();
        for (std::size_t j = i + 1; j < n; ++j) {
            const cplx v = 0.5 * (rot * a(i, j) + std::conj(rot * a(j, i)));
            h(i, j) = v;
            h(j, i) = std::conj(v);
        }
    }
    return h;
}

HermitianEig eig_hermitian(const ComplexMatrix& h) {
    check_hermitian(h);
    const std::size_t n = h.dim();
    HermitianEig out;
    if (n == 0) return out;
    const Reduction red = tridiagonalize(symmetrized(h));
    std::vector<double> off;
    const auto phases = real_phases(red.tri, off);
    std::vector<double> d = red.tri.diag;
    // z[k] is column k of Q D
    std::vector<CVector> z(n, CVector(n));
    for (std::size_t k = 0; k < n; ++k) {
        z[k][k] = phases[k];
        red.apply_q(z[k]);
    }
    implicit_ql(d, off, z);
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return d[a] < d[b]; });
    for (std::size_t k : order) {
        out.values.push_back(d[k]);
        out.vectors.push_back(std::move(z[k]));
    }
    return out;
}

TopEigenspace top_eigenspace(const HermitianTridiagonal& t, double gap_tol, std::size_t max_vectors) {
    if (t.dim() == 0) throw Error(ErrorKind::BadParameter, "empty matrix");
    return lift(t, gap_tol, max_vectors, nullptr);
}

TopEigenspace top_eigenspace(const ComplexMatrix& h, double gap_tol, std::size_t max_vectors) {
    check_hermitian(h);
    if (h.dim() == 0) throw Error(ErrorKind::BadParameter, "empty matrix");
    const Reduction red = tridiagonalize(symmetrized(h));
    return lift(red.tri, gap_tol, max_vectors, &red);
}

cplx rayleigh(const ComplexMatrix& a, std::span<const cplx> v) {
    const double vv = norm(v);
    if (vv == 0.0) throw Error(ErrorKind::ZeroVector, "Rayleigh quotient of the zero vector");
    return inner(multiply(a, v), v) / (vv * vv);
}

}  // namespace numrange
