#include "numrange/matrix.hpp"

#include <algorithm>
#include <cmath>

#include "numrange/error.hpp"

namespace numrange {

const char* to_string(ErrorKind kind) noexcept {
    switch (kind) {
        case ErrorKind::NotHermitian: return "NotHermitian";
        case ErrorKind::NoConvergence: return "NoConvergence";
        case ErrorKind::ZeroVector: return "ZeroVector";
        case ErrorKind::BadParameter: return "BadParameter";
        case ErrorKind::DegenerateCone: return "DegenerateCone";
        case ErrorKind::InsufficientSamples: return "InsufficientSamples";
        case ErrorKind::Ambiguous: return "Ambiguous";
        case ErrorKind::PointNotOnBoundary: return "PointNotOnBoundary";
        case ErrorKind::Degenerate: return "Degenerate";
        case ErrorKind::ZeroScale: return "ZeroScale";
        case ErrorKind::NotAnEigenpair: return "NotAnEigenpair";
        case ErrorKind::NotNormalized: return "NotNormalized";
        case ErrorKind::EmptyFamily: return "EmptyFamily";
        case ErrorKind::OutsideRange: return "OutsideRange";
        case ErrorKind::DependentVectors: return "DependentVectors";
        case ErrorKind::AnchorInfeasible: return "AnchorInfeasible";
        case ErrorKind::ScalingViolated: return "ScalingViolated";
        case ErrorKind::Io: return "Io";
    }
    return "Unknown";
}

ComplexMatrix::ComplexMatrix(std::size_t dim) : dim_(dim), data_(dim * dim) {}

ComplexMatrix ComplexMatrix::identity(std::size_t dim) {
    ComplexMatrix m(dim);
    for (std::size_t i = 0; i < dim; ++i) m(i, i) = 1.0;
    return m;
}

ComplexMatrix ComplexMatrix::diagonal(std::span<const cplx> entries) {
    ComplexMatrix m(entries.size());
    for (std::size_t i = 0; i < entries.size(); ++i) m(i, i) = entries[i];
    return m;
}

ComplexMatrix ComplexMatrix::from_rows(std::initializer_list<std::initializer_list<cplx>> rows) {
    std::vector<std::vector<cplx>> tmp;
    for (const auto& r : rows) tmp.emplace_back(r);
    return from_rows(tmp);
}

ComplexMatrix ComplexMatrix::from_rows(const std::vector<std::vector<cplx>>& rows) {
    const std::size_t n = rows.size();
    if (n == 0) throw Error(ErrorKind::BadParameter, "matrix must have at least one row");
    ComplexMatrix m(n);
    for (std::size_t i = 0; i < n; ++i) {
        if (rows[i].size() != n) throw Error(ErrorKind::BadParameter, "matrix is not square");
        std::copy(rows[i].begin(), rows[i].end(), m.row(i).begin());
    }
    if (!m.is_finite()) throw Error(ErrorKind::BadParameter, "matrix has non-finite entries");
    return m;
}

ComplexMatrix ComplexMatrix::adjoint() const {
    ComplexMatrix r(dim_);
    for (std::size_t i = 0; i < dim_; ++i)
        for (std::size_t j = 0; j < dim_; ++j) r(j, i) = std::conj((*this)(i, j));
    return r;
}

ComplexMatrix ComplexMatrix::operator*(const ComplexMatrix& rhs) const {
    if (rhs.dim_ != dim_) throw Error(ErrorKind::BadParameter, "dimension mismatch in product");
    ComplexMatrix r(dim_);
    for (std::size_t i = 0; i < dim_; ++i) {
        auto out = r.row(i);
        for (std::size_t k = 0; k < dim_; ++k) {
            const cplx a = (*this)(i, k);
            if (a == cplx{}) continue;
            const auto b = rhs.row(k);
            for (std::size_t j = 0; j < dim_; ++j) out[j] += a * b[j];
        }
    }
    return r;
}

ComplexMatrix& ComplexMatrix::operator+=(const ComplexMatrix& rhs) {
    if (rhs.dim_ != dim_) throw Error(ErrorKind::BadParameter, "dimension mismatch in sum");
    for (std::size_t k = 0; k < data_.size(); ++k) data_[k] += rhs.data_[k];
    return *this;
}

ComplexMatrix& ComplexMatrix::operator-=(const ComplexMatrix& rhs) {
    if (rhs.dim_ != dim_) throw Error(ErrorKind::BadParameter, "dimension mismatch in difference");
    for (std::size_t k = 0; k < data_.size(); ++k) data_[k] -= rhs.data_[k];
    return *this;
}

ComplexMatrix& ComplexMatrix::operator*=(cplx s) {
    for (auto& x : data_) x *= s;
    return *this;
}

bool ComplexMatrix::is_finite() const noexcept {
    return std::all_of(data_.begin(), data_.end(),
                       [](cplx z) { return std::isfinite(z.real()) && std::isfinite(z.imag()); });
}

double ComplexMatrix::frobenius_norm() const noexcept {
    double s = 0.0;
    for (auto z : data_) s += std::norm(z);
    return std::sqrt(s);
}

cplx ComplexMatrix::trace() const noexcept {
    cplx t{};
    for (std::size_t i = 0; i < dim_; ++i) t += (*this)(i, i);
    return t;
}

std::size_t ComplexMatrix::lower_bandwidth() const noexcept {
    std::size_t bw = 0;
    for (std::size_t i = 0; i < dim_; ++i)
        for (std::size_t j = 0; j + bw < i; ++j)
            if ((*this)(i, j) != cplx{}) {
                bw = i - j;
                break;
            }
    return bw;
}

std::size_t ComplexMatrix::upper_bandwidth() const noexcept {
    std::size_t bw = 0;
    for (std::size_t i = 0; i < dim_; ++i)
        for (std::size_t j = dim_; j-- > i + bw;)
            if ((*this)(i, j) != cplx{}) {
                bw = j - i;
                break;
            }
    return bw;
}

ComplexMatrix operator+(ComplexMatrix lhs, const ComplexMatrix& rhs) { return lhs += rhs; }
ComplexMatrix operator-(ComplexMatrix lhs, const ComplexMatrix& rhs) { return lhs -= rhs; }
ComplexMatrix operator*(cplx s, ComplexMatrix m) { return m *= s; }

CVector multiply(const ComplexMatrix& a, std::span<const cplx> x) {
    return multiply(a, x, Band::full(a.dim()));
}

CVector multiply(const ComplexMatrix& a, std::span<const cplx> x, Band band) {
    const std::size_t n = a.dim();
    CVector y(n);
    for (std::size_t i = 0; i < n; ++i) {
        const auto r = a.row(i);
        const std::size_t j0 = i > band.lower ? i - band.lower : 0;
        const std::size_t j1 = std::min(n, i + band.upper + 1);
        cplx s{};
        for (std::size_t j = j0; j < j1; ++j) s += r[j] * x[j];
        y[i] = s;
    }
    return y;
}

CVector multiply_adjoint(const ComplexMatrix& a, std::span<const cplx> x) {
    return multiply_adjoint(a, x, Band::full(a.dim()));
}

CVector multiply_adjoint(const ComplexMatrix& a, std::span<const cplx> x, Band band) {
    const std::size_t n = a.dim();
    CVector y(n);
    for (std::size_t i = 0; i < n; ++i) {
        const auto r = a.row(i);
        const cplx xi = x[i];
        if (xi == cplx{}) continue;
        const std::size_t j0 = i > band.lower ? i - band.lower : 0;
        const std::size_t j1 = std::min(n, i + band.upper + 1);
        for (std::size_t j = j0; j < j1; ++j) y[j] += std::conj(r[j]) * xi;
    }
    return y;
}

cplx inner(std::span<const cplx> x, std::span<const cplx> y) noexcept {
    cplx s{};
    for (std::size_t i = 0; i < x.size(); ++i) s += x[i] * std::conj(y[i]);
    return s;
}

double norm(std::span<const cplx> x) noexcept {
    // scaled accumulation keeps tiny inverse-iteration vectors from underflowing
    double m = 0.0;
    for (auto z : x) m = std::max(m, std::abs(z));
    if (m == 0.0) return 0.0;
    double s = 0.0;
    for (auto z : x) s += std::norm(z / m);
    return m * std::sqrt(s);
}

void scale(std::span<cplx> x, cplx s) noexcept {
    for (auto& z : x) z *= s;
}

void axpy(cplx s, std::span<const cplx> x, std::span<cplx> y) noexcept {
    for (std::size_t i = 0; i < x.size(); ++i) y[i] += s * x[i];
}

CVector normalized(std::span<const cplx> x) {
    const double n = norm(x);
    if (n == 0.0) throw Error(ErrorKind::ZeroVector, "cannot normalize the zero vector");
    CVector r(x.begin(), x.end());
    scale(r, 1.0 / n);
    return r;
}

void fix_phase(std::span<cplx> x) noexcept {
    std::size_t best = 0;
    double mag = -1.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        // strict comparison with a relative slack picks the first of near-ties
        if (std::abs(x[i]) > mag * (1.0 + 1e-12)) {
            mag = std::abs(x[i]);
            best = i;
        }
    }
    if (mag <= 0.0) return;
    const cplx ph = std::conj(x[best]) / mag;
    scale(x, ph);
    x[best] = cplx(std::abs(x[best]), 0.0);
}

double spectral_norm(const ComplexMatrix& a) {
    const std::size_t n = a.dim();
    if (n == 0) return 0.0;
    CVector v(n);
    for (std::size_t i = 0; i < n; ++i) v[i] = cplx(1.0 + 0.01 * static_cast<double>(i % 7), 0.003 * static_cast<double>(i % 5));
    v = normalized(v);
    const Band band = Band::of(a);
    double est = 0.0;
    for (int it = 0; it < 2000; ++it) {
        CVector w = multiply_adjoint(a, multiply(a, v, band), band);
        const double nw = norm(w);
        if (nw == 0.0) return a.frobenius_norm() == 0.0 ? 0.0 : est;
        const double next = std::sqrt(nw);
        scale(w, 1.0 / nw);
        v = std::move(w);
        if (std::abs(next - est) <= 1e-11 * next) return next;
        est = next;
    }
    return est;
}

}  // namespace numrange
