#pragma once

#include <algorithm>
#include <limits>

#include <span>
#include <vector>

#include "numrange/matrix.hpp"

namespace numrange {

/// Eigen-decomposition of a Hermitian matrix: ascending values, orthonormal
/// eigenvectors (vectors[k] belongs to values[k]).
struct HermitianEig {
    std::vector<double> values;
    std::vector<CVector> vectors;
};

/// Hermitian tridiagonal matrix: real diagonal, complex subdiagonal with
/// `sub[k] = T(k+1, k)`.
struct HermitianTridiagonal {
    std::vector<double> diag;
    std::vector<cplx> sub;

    std::size_t dim() const noexcept { return diag.size(); }
};

/// Top eigenvalue cluster of a Hermitian matrix: every eigenvalue within
/// `gap_tol` of the largest, in descending order, with orthonormal vectors.
/// A cluster larger than the vector cap gets only its top vector;
/// `cluster` still counts all of it.
struct TopEigenspace {
    std::vector<double> values;
    std::vector<CVector> vectors;
    std::size_t cluster = 0;

    double top() const noexcept { return values.front(); }
    std::size_t multiplicity() const noexcept { return std::max(cluster, values.size()); }
    bool truncated() const noexcept { return cluster > values.size(); }
};

struct Eigenpair {
    cplx value;
    CVector vector;
};

struct SingularTriple {
    double value = 0.0;
    CVector right;  ///< unit v with ||(A - lambda) v|| == value
};

/// (e^{-i theta} A + e^{i theta} A^H) / 2. Its largest eigenvalue is the
/// support value of the numerical range in direction e^{i theta}.
ComplexMatrix rotated_hermitian_part(const ComplexMatrix& a, double theta);

/// Householder tridiagonalization followed by implicit QL with Wilkinson
/// shifts. Throws NotHermitian when ||H - H^H||_F > 1e-10 ||H||_F.
HermitianEig eig_hermitian(const ComplexMatrix& h);

/// Largest eigenvalues via Sturm bisection plus inverse iteration. Much
/// cheaper than `eig_hermitian` when only the top of the spectrum matters.
TopEigenspace top_eigenspace(const HermitianTridiagonal& t, double gap_tol,
                            std::size_t max_vectors = std::numeric_limits<std::size_t>::max());
TopEigenspace top_eigenspace(const ComplexMatrix& h, double gap_tol,
                            std::size_t max_vectors = std::numeric_limits<std::size_t>::max());

/// All eigenvalues (with algebraic multiplicity) through Hessenberg
/// reduction and shifted QR.
std::vector<cplx> eigenvalues(const ComplexMatrix& a);

/// Eigenvalues plus unit eigenvectors obtained by inverse iteration.
std::vector<Eigenpair> eig_general(const ComplexMatrix& a);

/// Minimal singular value of A - lambda I and its right singular vector,
/// by inverse iteration on (A - lambda)^H (A - lambda) through a banded LU.
SingularTriple smallest_singular_triple(const ComplexMatrix& a, cplx lambda);
double smallest_singular_value(const ComplexMatrix& a, cplx lambda);

/// <Av, v> / <v, v>; throws ZeroVector for v == 0.
cplx rayleigh(const ComplexMatrix& a, std::span<const cplx> v);

}  // namespace numrange
