#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "numrange/error.hpp"
#include "numrange/matrix.hpp"

namespace numrange {

/// Unit vector v with <Av, v> = z, up to 1e-10 times the width of Num(A).
/// The largest entry of v is real and positive. Throws OutsideRange when z
/// lies beyond a supporting line of Num(A).
CVector inverse_numrange(const ComplexMatrix& a, cplx z);

/// Compression of A to span{v1, v2}: M(j, k) = <A q_k, q_j> for the
/// Gram-Schmidt basis q of (v1, v2). Throws DependentVectors.
ComplexMatrix two_dim_compression(const ComplexMatrix& a, std::span<const cplx> v1, std::span<const cplx> v2);

struct WitnessSequence {
    cplx alpha;
    std::vector<double> eps;
    std::vector<CVector> u;
    std::vector<double> residuals;  ///< |<A u_n, u_n> - eps_n alpha|
};

/// eps_n = 2^-n for n = 1..count
std::vector<double> default_eps_schedule(std::size_t count = 20);

/// u_n with <A u_n, u_n> = eps_n alpha for a normalized A (0 on the boundary,
/// range in the closed upper half plane). Throws AnchorInfeasible when alpha
/// is outside the range.
WitnessSequence build_witness_sequence(const ComplexMatrix& a_normalized, cplx alpha, const std::vector<double>& eps);

struct WitnessRow {
    std::size_t n = 0;
    double eps = 0.0;
    double residual = 0.0;
    int c_n = 1;
    cplx avu;  ///< <A v_n, u_n>
    cplx auv;  ///< <A u_n, v_n>
    double w_norm = 0.0;
    cplx aww;  ///< <A w_n, w_n>
    // each margin is nonnegative exactly when its inequality holds
    double lemma42_lo = 0.0;             // ||w|| - (1 - sqrt eps)
    double lemma42_hi = 0.0;             // (1 + sqrt eps) - ||w||
    double lemma43_margin = 0.0;         // 4 sqrt eps - |<Aw, w>|
    double lemma44_margin = 0.0;         // 4 eps - Im <Aw, w>
    double lemma44_mixed_margin = 0.0;   // 2 sqrt eps - |Im(avu + auv)|
    double re_pos = 0.0;                 // Re <Aw, w>, must be > 0
    double lemma45_margin = 0.0;         // Re <Aw, w> - eps Re(alpha)/2 - sqrt eps |Re(avu + auv)|
    double mixed_re = 0.0;               // Re(avu + auv), should tend to 0
};

struct WitnessReport {
    cplx alpha;
    std::vector<WitnessRow> rows;
    double worst_lemma42 = 0.0;
    double worst_lemma43 = 0.0;
    double worst_lemma44 = 0.0;
    double worst_lemma44_mixed = 0.0;
    double worst_lemma45 = 0.0;
    double min_re_pos = 0.0;
    double lemma46_slope = 0.0;  ///< least-squares slope of mixed_re against sqrt eps
    double scale_r = 0.0;        ///< R of the scaling rule, 0 when v was given directly
    std::uint64_t seed = 0;

    bool all_hold() const noexcept;
};

/// v_n = R e^{i theta_n} f_n with R = Re(alpha) / (2 max(sup ||f_n||, sup ||A f_n||, sup ||A^H f_n||))
/// and theta_n making <A v_n, u_n> and <A u_n, v_n> share a phase. `f` holds
/// either one vector for every n or one per n. `r_out` receives R.
std::vector<CVector> scaled_family(const ComplexMatrix& a, const WitnessSequence& ws, const std::vector<CVector>& f,
                                   double* r_out = nullptr);

/// Default f: the right singular vector of A for its smallest singular value,
/// i.e. a vector next to the kernel of A.
CVector default_f(const ComplexMatrix& a);

/// Replays the estimates for w_n = u_n + sqrt(eps_n) c_n v_n. `v` holds one
/// vector for every n or one per n, already scaled; the bounds
/// max(||v||, ||Av||, ||A^H v||) <= 1 and |Re<Av, v>| <= Re(alpha)/2 are
/// enforced with ScalingViolated.
WitnessReport replay_inequalities(const ComplexMatrix& a_normalized, const WitnessSequence& ws,
                                  const std::vector<CVector>& v);

struct DecayProbe {
    std::vector<double> eps;
    std::vector<double> au_norms;  ///< ||A u_n||
    double exponent = 0.0;         ///< fitted p in ||A u_n|| ~ eps_n^p
    std::size_t fitted = 0;        ///< points used by the fit
};

/// Reporting only: how fast ||A u_n|| decays along the sequence.
DecayProbe au_n_decay_probe(const ComplexMatrix& a_normalized, const WitnessSequence& ws);

}  // namespace numrange
