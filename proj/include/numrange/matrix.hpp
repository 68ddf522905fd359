#pragma once

#include <complex>
#include <cstddef>
#include <initializer_list>
#include <span>
#include <vector>

namespace numrange {

using cplx = std::complex<double>;
using CVector = std::vector<cplx>;

/// Dense square complex matrix stored row-major.
///
/// Entries must stay finite; `from_rows` and the JSON loader reject NaN/Inf,
/// and `is_finite()` lets other entry points re-check after mutation.
class ComplexMatrix {
public:
    ComplexMatrix() = default;
    explicit ComplexMatrix(std::size_t dim);

    static ComplexMatrix identity(std::size_t dim);
    static ComplexMatrix diagonal(std::span<const cplx> entries);
    static ComplexMatrix from_rows(std::initializer_list<std::initializer_list<cplx>> rows);
    static ComplexMatrix from_rows(const std::vector<std::vector<cplx>>& rows);

    std::size_t dim() const noexcept { return dim_; }

    cplx& operator()(std::size_t i, std::size_t j) noexcept { return data_[i * dim_ + j]; }
    const cplx& operator()(std::size_t i, std::size_t j) const noexcept { return data_[i * dim_ + j]; }

    std::span<cplx> row(std::size_t i) noexcept { return {data_.data() + i * dim_, dim_}; }
    std::span<const cplx> row(std::size_t i) const noexcept { return {data_.data() + i * dim_, dim_}; }

    ComplexMatrix adjoint() const;
    ComplexMatrix operator*(const ComplexMatrix& rhs) const;
    ComplexMatrix& operator+=(const ComplexMatrix& rhs);
    ComplexMatrix& operator-=(const ComplexMatrix& rhs);
    ComplexMatrix& operator*=(cplx s);

    bool is_finite() const noexcept;
    double frobenius_norm() const noexcept;
    cplx trace() const noexcept;

    /// Number of nonzero sub- and super-diagonals (exact zeros only).
    std::size_t lower_bandwidth() const noexcept;
    std::size_t upper_bandwidth() const noexcept;

    bool operator==(const ComplexMatrix&) const = default;

private:
    std::size_t dim_ = 0;
    std::vector<cplx> data_;
};

ComplexMatrix operator+(ComplexMatrix lhs, const ComplexMatrix& rhs);
ComplexMatrix operator-(ComplexMatrix lhs, const ComplexMatrix& rhs);
ComplexMatrix operator*(cplx s, ComplexMatrix m);

/// Band extents of a matrix; `full(n)` describes a dense one.
struct Band {
    std::size_t lower = 0;
    std::size_t upper = 0;
    static Band of(const ComplexMatrix& a) noexcept { return {a.lower_bandwidth(), a.upper_bandwidth()}; }
    static Band full(std::size_t n) noexcept { return {n == 0 ? 0 : n - 1, n == 0 ? 0 : n - 1}; }
};

/// y = A x. Entries outside `band` are assumed zero and skipped.
CVector multiply(const ComplexMatrix& a, std::span<const cplx> x);
CVector multiply(const ComplexMatrix& a, std::span<const cplx> x, Band band);
/// y = A^H x
CVector multiply_adjoint(const ComplexMatrix& a, std::span<const cplx> x);
CVector multiply_adjoint(const ComplexMatrix& a, std::span<const cplx> x, Band band);

/// <x, y> = sum x_i conj(y_i); linear in the first argument.
cplx inner(std::span<const cplx> x, std::span<const cplx> y) noexcept;
double norm(std::span<const cplx> x) noexcept;
void scale(std::span<cplx> x, cplx s) noexcept;
/// y += s x
void axpy(cplx s, std::span<const cplx> x, std::span<cplx> y) noexcept;
CVector normalized(std::span<const cplx> x);

/// Rotates the vector so its largest-magnitude entry is real and positive.
void fix_phase(std::span<cplx> x) noexcept;

/// Largest singular value by power iteration on A^H A.
double spectral_norm(const ComplexMatrix& a);

}  // namespace numrange
