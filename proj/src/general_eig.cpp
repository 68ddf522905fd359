#include <algorithm>
#include <cmath>
#include <limits>

#include "numrange/error.hpp"
#include "numrange/linalg.hpp"

namespace numrange {
namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();

struct Hessenberg {
    ComplexMatrix h;
    ComplexMatrix q;  // empty when the input was already Hessenberg
};

Hessenberg reduce(const ComplexMatrix& a) {
    const std::size_t n = a.dim();
    Hessenberg out{a, {}};
    if (a.lower_bandwidth() <= 1) return out;
    auto& h = out.h;
    out.q = ComplexMatrix::identity(n);
    for (std::size_t k = 0; k + 2 < n; ++k) {
        const std::size_t m = n - k - 1;
        CVector v(m);
        for (std::size_t i = 0; i < m; ++i) v[i] = h(k + 1 + i, k);
        double tail = 0.0;
        for (std::size_t i = 1; i < m; ++i) tail += std::norm(v[i]);
        if (tail == 0.0) continue;
        const double xn = std::sqrt(tail + std::norm(v[0]));
        const cplx phase = v[0] == cplx{} ? cplx(1.0) : v[0] / std::abs(v[0]);
        v[0] += phase * xn;
        scale(v, 1.0 / norm(v));

        for (std::size_t j = k; j < n; ++j) {
            cplx s{};
            for (std::size_t i = 0; i < m; ++i) s += std::conj(v[i]) * h(k + 1 + i, j);
            s *= 2.0;
            for (std::size_t i = 0; i < m; ++i) h(k + 1 + i, j) -= v[i] * s;
        }
        auto right = [&](ComplexMatrix& mtx) {
            for (std::size_t i = 0; i < n; ++i) {
                cplx s{};
                for (std::size_t j = 0; j < m; ++j) s += mtx(i, k + 1 + j) * v[j];
                s *= 2.0;
                for (std::size_t j = 0; j < m; ++j) mtx(i, k + 1 + j) -= s * std::conj(v[j]);
            }
        };
        right(h);
        right(out.q);
        for (std::size_t i = 2; i < m + 1; ++i) h(k + i, k) = 0.0;
    }
    return out;
}

struct Givens {
    double c;
    cplx s;
};

Givens make_givens(cplx a, cplx b) {
    const double r = std::hypot(std::abs(a), std::abs(b));
    if (r == 0.0) return {1.0, 0.0};
    const cplx ph = a == cplx{} ? cplx(1.0) : a / std::abs(a);
    return {std::abs(a) / r, ph * std::conj(b) / r};
}

std::vector<cplx> hessenberg_qr(ComplexMatrix h) {
    const std::size_t n = h.dim();
    std::vector<cplx> ev;
    ev.reserve(n);
    if (n == 0) return ev;
    std::size_t hi = n - 1;
    int iter = 0;
    int total = 0;
    std::vector<Givens> rot(n);
    while (true) {
        if (hi == 0) {
            ev.push_back(h(0, 0));
            break;
        }
        std::size_t l = hi;
        while (l > 0) {
            const double scale_ = std::abs(h(l - 1, l - 1)) + std::abs(h(l, l));
            if (std::abs(h(l, l - 1)) <= kEps * scale_ || std::abs(h(l, l - 1)) < std::numeric_limits<double>::min()) {
                h(l, l - 1) = 0.0;
                break;
            }
            --l;
        }
        if (l == hi) {
            ev.push_back(h(hi, hi));
            --hi;
            iter = 0;
            continue;
        }
        if (++total > 60 * static_cast<int>(n) + 100)
            throw Error(ErrorKind::NoConvergence, "shifted QR did not converge");
        ++iter;

        cplx mu;
        if (iter % 10 == 0) {
            mu = h(hi, hi) + std::abs(h(hi, hi - 1).real()) + (hi >= 2 ? std::abs(h(hi - 1, hi - 2)) : 0.0);
        } else {
            const cplx a = h(hi - 1, hi - 1), b = h(hi - 1, hi), c = h(hi, hi - 1), d = h(hi, hi);
            const cplx half = 0.5 * (a - d);
            const cplx disc = std::sqrt(half * half + b * c);
            const cplx m1 = 0.5 * (a + d) + disc;
            const cplx m2 = 0.5 * (a + d) - disc;
            mu = std::abs(m1 - d) < std::abs(m2 - d) ? m1 : m2;
        }

        for (std::size_t k = l; k <= hi; ++k) h(k, k) -= mu;
        for (std::size_t k = l; k < hi; ++k) {
            const Givens g = make_givens(h(k, k), h(k + 1, k));
            rot[k] = g;
            for (std::size_t j = k; j <= hi; ++j) {
                const cplx x = h(k, j), y = h(k + 1, j);
                h(k, j) = g.c * x + g.s * y;
                h(k + 1, j) = -std::conj(g.s) * x + g.c * y;
            }
        }
        for (std::size_t k = l; k < hi; ++k) {
            const Givens g = rot[k];
            const std::size_t top = std::min(k + 1, hi);
            for (std::size_t i = l; i <= top; ++i) {
                const cplx x = h(i, k), y = h(i, k + 1);
                h(i, k) = x * g.c + y * std::conj(g.s);
                h(i, k + 1) = -x * g.s + y * g.c;
            }
        }
        for (std::size_t k = l; k <= hi; ++k) h(k, k) += mu;
    }
    return ev;
}

/// LU with adjacent-row pivoting for an upper Hessenberg matrix.
struct HessenbergLU {
    ComplexMatrix u;
    std::vector<cplx> mult;
    std::vector<char> swapped;

    HessenbergLU(const ComplexMatrix& h, cplx shift, double floor) : u(h), mult(h.dim()), swapped(h.dim(), 0) {
        const std::size_t n = u.dim();
        for (std::size_t i = 0; i < n; ++i) u(i, i) -= shift;
        for (std::size_t k = 0; k + 1 < n; ++k) {
            if (std::abs(u(k + 1, k)) > std::abs(u(k, k))) {
                for (std::size_t j = k; j < n; ++j) std::swap(u(k, j), u(k + 1, j));
                swapped[k] = 1;
            }
            if (std::abs(u(k, k)) < floor) u(k, k) = floor;
            const cplx l = u(k + 1, k) / u(k, k);
            mult[k] = l;
            u(k + 1, k) = 0.0;
            if (l != cplx{})
                for (std::size_t j = k + 1; j < n; ++j) u(k + 1, j) -= l * u(k, j);
        }
        if (n > 0 && std::abs(u(n - 1, n - 1)) < floor) u(n - 1, n - 1) = floor;
    }

    void solve(CVector& b) const {
        const std::size_t n = u.dim();
        for (std::size_t k = 0; k + 1 < n; ++k) {
            if (swapped[k]) std::swap(b[k], b[k + 1]);
            b[k + 1] -= mult[k] * b[k];
        }
        for (std::size_t k = n; k-- > 0;) {
            cplx s = b[k];
            const auto r = u.row(k);
            for (std::size_t j = k + 1; j < n; ++j) s -= r[j] * b[j];
            b[k] = s / r[k];
        }
    }
};

}  // namespace

std::vector<cplx> eigenvalues(const ComplexMatrix& a) {
    if (!a.is_finite()) throw Error(ErrorKind::BadParameter, "matrix has non-finite entries");
    return hessenberg_qr(reduce(a).h);
}

std::vector<Eigenpair> eig_general(const ComplexMatrix& a) {
    if (!a.is_finite()) throw Error(ErrorKind::BadParameter, "matrix has non-finite entries");
    const std::size_t n = a.dim();
    const Hessenberg hs = reduce(a);
    const std::vector<cplx> ev = hessenberg_qr(hs.h);
    const double floor = kEps * std::max(hs.h.frobenius_norm(), std::numeric_limits<double>::min());
    std::vector<Eigenpair> out;
    out.reserve(n);
    for (const cplx lambda : ev) {
        const HessenbergLU lu(hs.h, lambda, floor);
        CVector y(n);
        for (std::size_t i = 0; i < n; ++i) y[i] = cplx(1.0, 0.01 * static_cast<double>(i % 3)) / std::sqrt(double(n));
        for (int it = 0; it < 3; ++it) {
            lu.solve(y);
            y = normalized(y);
        }
        CVector v = hs.q.dim() == 0 ? y : multiply(hs.q, y);
        v = normalized(v);
        fix_phase(v);
        out.push_back({lambda, std::move(v)});
    }
    return out;
}

}  // namespace numrange
