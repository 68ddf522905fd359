#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>

#include "numrange/error.hpp"
#include "numrange/gallery.hpp"

namespace numrange {
namespace {

double parse_real(const std::string& text) {
    std::size_t used = 0;
    double x = 0.0;
    try {
        x = std::stod(text, &used);
    } catch (const std::exception&) {
        used = 0;
    }
    if (used == 0 || used != text.size()) throw Error(ErrorKind::BadParameter, "not a number: '" + text + "'");
    return x;
}

std::size_t parse_size(const std::string& text) {
    const double x = parse_real(text);
    if (x < 1.0 || x != std::floor(x)) throw Error(ErrorKind::BadParameter, "not a positive integer: '" + text + "'");
    return std::size_t(x);
}

std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> out;
    std::string cur;
    std::istringstream in(s);
    while (std::getline(in, cur, sep)) out.push_back(cur);
    if (!s.empty() && s.back() == sep) out.emplace_back();
    return out;
}

GridSpec grid_from(const std::vector<std::string>& args, std::size_t first, GridSpec fallback) {
    if (args.size() > first) fallback.L = parse_real(args[first]);
    if (args.size() > first + 1) fallback.N = parse_size(args[first + 1]);
    if (args.size() > first + 2) throw Error(ErrorKind::BadParameter, "too many grid parameters");
    return fallback;
}

}  // namespace

double bump_profile(double x) noexcept { return std::abs(x) < 1.0 ? std::exp(-1.0 / (1.0 - x * x)) : 0.0; }

cplx PotentialSpec::operator()(double x) const {
    switch (kind) {
        case Kind::Harmonic: return coefficient * (x * x);
        case Kind::BumpScaled: return coefficient * bump_profile(x);
        case Kind::Gaussian: return -depth * coefficient * std::exp(-x * x);
        case Kind::Custom: {
            if (table_x.empty() || x < table_x.front() || x > table_x.back()) return 0.0;
            const auto it = std::upper_bound(table_x.begin(), table_x.end(), x);
            if (it == table_x.end()) return table_v.back();
            const std::size_t k = std::size_t(it - table_x.begin());
            const double w = (x - table_x[k - 1]) / (table_x[k] - table_x[k - 1]);
            return (1.0 - w) * table_v[k - 1] + w * table_v[k];
        }
    }
    return 0.0;
}

const char* to_string(PotentialSpec::Kind kind) noexcept {
    switch (kind) {
        case PotentialSpec::Kind::Harmonic: return "harmonic";
        case PotentialSpec::Kind::BumpScaled: return "bump_scaled";
        case PotentialSpec::Kind::Gaussian: return "gaussian";
        case PotentialSpec::Kind::Custom: return "custom";
    }
    return "?";
}

PotentialSpec harmonic_potential(cplx c) {
    if (!(c.real() > 0.0)) throw Error(ErrorKind::BadParameter, "harmonic potential needs Re c > 0");
    PotentialSpec v;
    v.kind = PotentialSpec::Kind::Harmonic;
    v.coefficient = c;
    v.metadata = "grows at infinity; sectorial";
    return v;
}

PotentialSpec bump_potential(cplx s) {
    PotentialSpec v;
    v.kind = PotentialSpec::Kind::BumpScaled;
    v.coefficient = s;
    v.metadata = "compactly supported; imaginary part takes distinct values; vanishes at infinity";
    return v;
}

PotentialSpec gaussian_potential(cplx c, double depth) {
    if (!std::isfinite(depth)) throw Error(ErrorKind::BadParameter, "gaussian depth must be finite");
    PotentialSpec v;
    v.kind = PotentialSpec::Kind::Gaussian;
    v.coefficient = c;
    v.depth = depth;
    v.metadata = "decays at infinity";
    return v;
}

PotentialSpec custom_potential(std::vector<double> xs, std::vector<cplx> values) {
    if (xs.size() != values.size() || xs.empty())
        throw Error(ErrorKind::BadParameter, "custom potential needs matching non-empty tables");
    for (std::size_t i = 0; i < xs.size(); ++i) {
        if (!std::isfinite(xs[i]) || !std::isfinite(values[i].real()) || !std::isfinite(values[i].imag()))
            throw Error(ErrorKind::BadParameter, "custom potential table is not finite");
        if (i > 0 && !(xs[i] > xs[i - 1])) throw Error(ErrorKind::BadParameter, "custom nodes must increase");
    }
    PotentialSpec v;
    v.kind = PotentialSpec::Kind::Custom;
    v.table_x = std::move(xs);
    v.table_v = std::move(values);
    return v;
}

ComplexMatrix schrodinger_1d(const PotentialSpec& v, const GridSpec& grid) {
    if (grid.N < 8) throw Error(ErrorKind::BadParameter, "grid needs at least 8 points");
    if (!(grid.L > 0.0) || !std::isfinite(grid.L)) throw Error(ErrorKind::BadParameter, "grid half-width must be positive");
    const std::size_t n = grid.N;
    const double h = grid.h(), inv = 1.0 / (h * h);
    ComplexMatrix m(n);
    for (std::size_t j = 0; j < n; ++j) {
        const cplx vj = v(grid.node(j));
        if (!std::isfinite(vj.real()) || !std::isfinite(vj.imag()))
            throw Error(ErrorKind::BadParameter, "potential is not finite on the grid");
        m(j, j) = 2.0 * inv + vj;
        if (j + 1 < n) m(j, j + 1) = m(j + 1, j) = -inv;
    }
    return m;
}

ComplexMatrix harmonic_oscillator(cplx c, const GridSpec& grid) { return schrodinger_1d(harmonic_potential(c), grid); }

ComplexMatrix jordan_block(std::size_t n, cplx lambda) {
    if (n == 0) throw Error(ErrorKind::BadParameter, "jordan block needs n >= 1");
    ComplexMatrix m(n);
    for (std::size_t i = 0; i < n; ++i) {
        m(i, i) = lambda;
        if (i + 1 < n) m(i, i + 1) = 1.0;
    }
    return m;
}

ComplexMatrix normal_from_eigs(const std::vector<cplx>& eigs) {
    if (eigs.empty()) throw Error(ErrorKind::BadParameter, "need at least one eigenvalue");
    return ComplexMatrix::diagonal(eigs);
}

ComplexMatrix random_dense(std::uint64_t seed, std::size_t n) {
    if (n == 0) throw Error(ErrorKind::BadParameter, "random matrix needs n >= 1");
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> g(0.0, std::sqrt(0.5));
    ComplexMatrix m(n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) m(i, j) = cplx(g(rng), g(rng));
    return m;
}

ComplexMatrix random_unitary(std::uint64_t seed, std::size_t n) {
    const ComplexMatrix z = random_dense(seed, n);
    // modified Gram-Schmidt on the columns, twice for orthogonality to rounding
    std::vector<CVector> q;
    for (std::size_t j = 0; j < n; ++j) {
        CVector c(n);
        for (std::size_t i = 0; i < n; ++i) c[i] = z(i, j);
        for (int pass = 0; pass < 2; ++pass)
            for (const auto& prev : q) axpy(-inner(c, prev), prev, c);
        const double nc = norm(c);
        if (nc == 0.0) throw Error(ErrorKind::DependentVectors, "random columns are dependent");
        scale(c, 1.0 / nc);
        q.push_back(std::move(c));
    }
    ComplexMatrix u(n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) u(i, j) = q[j][i];
    return u;
}

ComplexMatrix random_normal(std::uint64_t seed, std::size_t n) {
    const ComplexMatrix u = random_unitary(seed, n);
    const ComplexMatrix d = random_dense(seed ^ 0x9e3779b97f4a7c15ULL, n);
    std::vector<cplx> eigs(n);
    for (std::size_t i = 0; i < n; ++i) eigs[i] = d(i, i);
    return u * ComplexMatrix::diagonal(eigs) * u.adjoint();
}

const std::vector<GalleryEntry>& gallery_entries() {
    static const std::vector<GalleryEntry> entries = {
        {"jordan", "n[,lambda]", "Jordan block; its range is a disk of radius cos(pi/(n+1))"},
        {"normal", "z1,z2,...", "diagonal matrix with the given eigenvalues; range is their hull"},
        {"random", "n", "dense matrix with i.i.d. complex normal entries (uses --seed)"},
        {"random_normal", "n", "random unitary conjugate of a random diagonal (uses --seed)"},
        {"harmonic", "c[,L,N]", "-u'' + c x^2 u on [-L,L], defaults L=12 N=600; range bounded by t1 t2 = 1/4"},
        {"bump", "s[,L,N]", "-u'' + s W u with a smooth bump W, defaults L=40 N=1200; corner at 0"},
        {"gaussian", "c,depth[,L,N]", "-u'' - depth c exp(-x^2) u, defaults L=40 N=1200"},
    };
    return entries;
}

ComplexMatrix gallery_matrix(const std::string& spec, std::uint64_t seed) {
    const auto colon = spec.find(':');
    const std::string name = spec.substr(0, colon);
    const std::vector<std::string> args = colon == std::string::npos ? std::vector<std::string>{}
                                                                     : split(spec.substr(colon + 1), ',');
    auto need = [&](std::size_t lo, std::size_t hi) {
        if (args.size() < lo || args.size() > hi)
            throw Error(ErrorKind::BadParameter, "wrong number of parameters for gallery entry '" + name + "'");
    };
    if (name == "jordan") {
        need(1, 2);
        return jordan_block(parse_size(args[0]), args.size() > 1 ? parse_complex(args[1]) : cplx{});
    }
    if (name == "normal" || name == "diag") {
        need(1, 100000);
        std::vector<cplx> eigs;
        for (const auto& a : args) eigs.push_back(parse_complex(a));
        return normal_from_eigs(eigs);
    }
    if (name == "random") {
        need(1, 1);
        return random_dense(seed, parse_size(args[0]));
    }
    if (name == "random_normal") {
        need(1, 1);
        return random_normal(seed, parse_size(args[0]));
    }
    if (name == "harmonic") {
        need(1, 3);
        return harmonic_oscillator(parse_complex(args[0]), grid_from(args, 1, {12.0, 600}));
    }
    if (name == "bump") {
        need(1, 3);
        return schrodinger_1d(bump_potential(parse_complex(args[0])), grid_from(args, 1, {40.0, 1200}));
    }
    if (name == "gaussian") {
        need(2, 4);
        return schrodinger_1d(gaussian_potential(parse_complex(args[0]), parse_real(args[1])),
                              grid_from(args, 2, {40.0, 1200}));
    }
    throw Error(ErrorKind::BadParameter, "unknown gallery entry '" + name + "'");
}

cplx parse_complex(const std::string& raw) {
    std::string t;
    for (const char ch : raw)
        if (!std::isspace(static_cast<unsigned char>(ch))) t += ch;
    if (t.empty()) throw Error(ErrorKind::BadParameter, "empty complex number");
    if (t.back() != 'i' && t.back() != 'j') return parse_real(t);
    t.pop_back();
    // split before the last sign that is not an exponent sign or the leading one
    std::size_t cut = std::string::npos;
    for (std::size_t k = t.size(); k-- > 1;) {
        if ((t[k] == '+' || t[k] == '-') && t[k - 1] != 'e' && t[k - 1] != 'E') {
            cut = k;
            break;
        }
    }
    const std::string re = cut == std::string::npos ? "" : t.substr(0, cut);
    std::string im = cut == std::string::npos ? t : t.substr(cut);
    if (im.empty() || im == "+") im = "1";
    if (im == "-") im = "-1";
    if (im[0] == '+') im.erase(0, 1);
    return {re.empty() ? 0.0 : parse_real(re), parse_real(im)};
}

}  // namespace numrange
