#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "numrange/matrix.hpp"

namespace numrange {

struct PotentialSpec {
    enum class Kind { Harmonic, BumpScaled, Gaussian, Custom } kind = Kind::Harmonic;
    cplx coefficient{1.0, 0.0};  ///< c for harmonic and gaussian, s for the bump
    double depth = 1.0;          ///< gaussian only
    std::vector<double> table_x;  ///< custom: nodes, strictly increasing
    std::vector<cplx> table_v;    ///< custom: values; linear in between, 0 outside
    std::string metadata;         ///< free-form notes, never checked

    cplx operator()(double x) const;
};

const char* to_string(PotentialSpec::Kind kind) noexcept;

struct GridSpec {
    double L = 12.0;  ///< domain [-L, L]
    std::size_t N = 600;

    double h() const noexcept { return 2.0 * L / double(N + 1); }
    double node(std::size_t j) const noexcept { return -L + double(j + 1) * h(); }
};

/// c x^2; requires Re c > 0.
PotentialSpec harmonic_potential(cplx c);
/// s exp(-1 / (1 - x^2)) on (-1, 1), zero elsewhere.
PotentialSpec bump_potential(cplx s);
/// -depth c exp(-x^2): a well for positive depth and c = 1.
PotentialSpec gaussian_potential(cplx c, double depth);
PotentialSpec custom_potential(std::vector<double> xs, std::vector<cplx> values);

/// The bump profile W itself (no coefficient).
double bump_profile(double x) noexcept;

/// -d^2/dx^2 + V by central differences with Dirichlet ends: 2/h^2 + V(x_j)
/// on the diagonal, -1/h^2 beside it.
ComplexMatrix schrodinger_1d(const PotentialSpec& v, const GridSpec& grid);
ComplexMatrix harmonic_oscillator(cplx c, const GridSpec& grid = {12.0, 600});

ComplexMatrix jordan_block(std::size_t n, cplx lambda);
ComplexMatrix normal_from_eigs(const std::vector<cplx>& eigs);
/// Entries i.i.d. complex standard normal (E|z|^2 = 1).
ComplexMatrix random_dense(std::uint64_t seed, std::size_t n);
/// Haar-like unitary from the QR factorization of random_dense.
ComplexMatrix random_unitary(std::uint64_t seed, std::size_t n);
/// U diag(d) U^H with d and U both drawn from the seed.
ComplexMatrix random_normal(std::uint64_t seed, std::size_t n);

struct GalleryEntry {
    std::string name;
    std::string params;
    std::string description;
};
const std::vector<GalleryEntry>& gallery_entries();

/// "name" or "name:params", e.g. "jordan:2", "harmonic:1+1i", "bump:1+1i",
/// "random:8", "normal:0,1,1i". Grid defaults depend on the operator.
ComplexMatrix gallery_matrix(const std::string& spec, std::uint64_t seed = 0);

/// Accepts "1", "-2.5", "1i", "1+1i", "0.3-2i", "i".
cplx parse_complex(const std::string& text);

}  // namespace numrange
