#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>

#include "numrange/error.hpp"
#include "numrange/linalg.hpp"

namespace numrange {
namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();

/// Banded LU with partial pivoting. Row i keeps columns [i - p, i + p + q].
class BandLU {
public:
    BandLU(const ComplexMatrix& b, Band band) : n_(b.dim()), p_(band.lower), q_(band.upper) {
        w_ = 2 * p_ + q_ + 1;
        ab_.assign(n_ * w_, cplx{});
        for (std::size_t i = 0; i < n_; ++i) {
            const std::size_t j0 = i > p_ ? i - p_ : 0;
            const std::size_t j1 = std::min(n_, i + q_ + 1);
            for (std::size_t j = j0; j < j1; ++j) at(i, j) = b(i, j);
        }
        const double floor = kEps * std::max(b.frobenius_norm(), std::numeric_limits<double>::min());
        piv_.resize(n_);
        mult_.assign(n_ * std::max<std::size_t>(p_, 1), cplx{});
        for (std::size_t k = 0; k < n_; ++k) {
            const std::size_t last = std::min(n_ - 1, k + p_);
            std::size_t r = k;
            for (std::size_t i = k + 1; i <= last; ++i)
                if (std::abs(at(i, k)) > std::abs(at(r, k))) r = i;
            piv_[k] = r;
            const std::size_t jend = std::min(n_ - 1, k + p_ + q_);
            if (r != k)
                for (std::size_t j = k; j <= jend; ++j) std::swap(at(k, j), at(r, j));
            if (std::abs(at(k, k)) < floor) at(k, k) = floor;
            const cplx pivot = at(k, k);
            for (std::size_t i = k + 1; i <= last; ++i) {
                const cplx l = at(i, k) / pivot;
                mult_[k * p_ + (i - k - 1)] = l;
                at(i, k) = 0.0;
                if (l == cplx{}) continue;
                for (std::size_t j = k + 1; j <= jend; ++j) at(i, j) -= l * at(k, j);
            }
        }
    }

    /// x <- B^{-1} x
    void solve(CVector& x) const {
        for (std::size_t k = 0; k < n_; ++k) {
            if (piv_[k] != k) std::swap(x[k], x[piv_[k]]);
            const std::size_t last = std::min(n_ - 1, k + p_);
            for (std::size_t i = k + 1; i <= last; ++i) x[i] -= mult_[k * p_ + (i - k - 1)] * x[k];
        }
        for (std::size_t k = n_; k-- > 0;) {
            const std::size_t jend = std::min(n_ - 1, k + p_ + q_);
            cplx s = x[k];
            for (std::size_t j = k + 1; j <= jend; ++j) s -= at(k, j) * x[j];
            x[k] = s / at(k, k);
        }
    }

    /// x <- B^{-H} x
    void solve_adjoint(CVector& x) const {
        for (std::size_t k = 0; k < n_; ++k) {
            const std::size_t j0 = k > p_ + q_ ? k - p_ - q_ : 0;
            cplx s = x[k];
            for (std::size_t j = j0; j < k; ++j) s -= std::conj(at(j, k)) * x[j];
            x[k] = s / std::conj(at(k, k));
        }
        for (std::size_t k = n_; k-- > 0;) {
            const std::size_t last = std::min(n_ - 1, k + p_);
            cplx s{};
            for (std::size_t i = k + 1; i <= last; ++i) s += std::conj(mult_[k * p_ + (i - k - 1)]) * x[i];
            x[k] -= s;
            if (piv_[k] != k) std::swap(x[k], x[piv_[k]]);
        }
    }

private:
    cplx& at(std::size_t i, std::size_t j) { return ab_[i * w_ + (j + p_ - i)]; }
    const cplx& at(std::size_t i, std::size_t j) const { return ab_[i * w_ + (j + p_ - i)]; }

    std::size_t n_, p_, q_, w_ = 0;
    std::vector<cplx> ab_;
    std::vector<cplx> mult_;
    std::vector<std::size_t> piv_;
};

}  // namespace

SingularTriple smallest_singular_triple(const ComplexMatrix& a, cplx lambda) {
    const std::size_t n = a.dim();
    if (n == 0) throw Error(ErrorKind::BadParameter, "empty matrix");
    if (!a.is_finite()) throw Error(ErrorKind::BadParameter, "matrix has non-finite entries");
    ComplexMatrix b = a;
    for (std::size_t i = 0; i < n; ++i) b(i, i) -= lambda;
    const Band band = Band::of(b);
    const BandLU lu(b, band);

    CVector x(n);
    std::uint64_t state = 0x2545F4914F6CDD1Dull;
    for (auto& xi : x) {
        state ^= state << 13;
        state ^= state >> 7;
        state ^= state << 17;
        const double re = static_cast<double>(state >> 11) * 0x1.0p-53 - 0.5;
        state ^= state << 13;
        state ^= state >> 7;
        state ^= state << 17;
        const double im = static_cast<double>(state >> 11) * 0x1.0p-53 - 0.5;
        xi = cplx(re, im);
    }
    x = normalized(x);

    double sigma = norm(multiply(b, x, band));
    for (int it = 0; it < 3000; ++it) {
        lu.solve_adjoint(x);
        lu.solve(x);
        const double g = norm(x);
        if (g == 0.0 || !std::isfinite(g)) throw Error(ErrorKind::NoConvergence, "inverse iteration broke down");
        scale(x, 1.0 / g);
        const double next = norm(multiply(b, x, band));
        const bool done = std::abs(next - sigma) <= 1e-13 * std::max(next, kEps * b.frobenius_norm());
        sigma = next;
        if (done && it >= 2) break;
    }
    fix_phase(x);
    return {sigma, std::move(x)};
}

double smallest_singular_value(const ComplexMatrix& a, cplx lambda) {
    return smallest_singular_triple(a, lambda).value;
}

}  // namespace numrange
