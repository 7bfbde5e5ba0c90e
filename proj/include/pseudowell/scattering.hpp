#pragma once

#include "pseudowell/potential.hpp"

namespace pseudowell {

// Channel convention: |R,k> = e^{ikx} (right-travelling), |L,k> = e^{-ikx}
// (left-travelling). Subscripts name the incident channel, so r_R and t_R
// describe a beam incident from the left and r_L, t_L one incident from the
// right. PT symmetry of both potentials forces t_L = t_R; the reflections
// differ.
struct ScatteringData {
    double k = 0.0;
    cplx tL{}, tR{}, rL{}, rR{};
};

// S-matrix in the (R, L) channel basis:
//   [ S_RR  S_RL ]   [ t_R  r_L ]
//   [ S_LR  S_LL ] = [ r_R  t_L ]
struct SMatrix {
    cplx rr{}, rl{}, lr{}, ll{};
};

inline SMatrix s_matrix(const ScatteringData& d) {
    return {d.tR, d.rL, d.rR, d.tL};
}

namespace detail {

inline void require_positive_k(double k, const char* who) {
    if (!(k > 0.0)) throw std::domain_error(std::string(who) + ": k must be positive");
}

// Model-I transmission denominator divided by q:
//   D(k)/q = 2 k cos(qa) - i (q^2 + k^2 - lam^2) sin(qa)/q,   q^2 = v0 + k^2.
// Even in q, hence entire in k^2; usable at k = i*beta for pole residuals.
struct DenomTerms {
    cplx value;
    double scale;
};

inline DenomTerms model_i_denominator_terms(const PotentialSpec& s, cplx k) {
    const cplx q2 = s.v0 + k * k;
    const cplx za = q2 * (s.a * s.a);
    const cplx t1 = 2.0 * k * cosc(za);
    const cplx t2 = cplx(0.0, -1.0) * (q2 + k * k - s.lam * s.lam) * s.a * sincc(za);
    return {t1 + t2, std::max({1.0 / s.a, std::abs(t1), std::abs(t2)})};
}

// Shared model-II denominator
//   (1 - i mu/2k) + (lam/2k)^2 [ -(1 - i mu/2k) - i (mu/k) e^{ika}
//                                + (1 + i mu/2k) e^{2ika} ].
inline DenomTerms model_ii_denominator_terms(const PotentialSpec& s, cplx k) {
    const cplx i(0.0, 1.0);
    const cplx m2 = s.v0 / (2.0 * k);
    const cplx l2 = s.lam / (2.0 * k);
    const cplx eika = std::exp(i * k * s.a);
    const cplx t1 = 1.0 - i * m2;
    const cplx t2 = -l2 * l2 * (1.0 - i * m2);
    const cplx t3 = -l2 * l2 * i * (s.v0 / k) * eika;
    const cplx t4 = l2 * l2 * (1.0 + i * m2) * eika * eika;
    return {t1 + t2 + t3 + t4, std::max({1.0, std::abs(t1), std::abs(t2), std::abs(t3), std::abs(t4)})};
}

}  // namespace detail

// Closed-form amplitudes for model I, q = sqrt(v0 + k^2):
//   t   = 2 q k e^{-ika} / D
//   r_L = i [q^2 - (k + lam)^2] sin(qa) e^{-ika} / D
//   r_R = i [q^2 - (k - lam)^2] sin(qa) e^{-ika} / D
// with D = 2 q k cos(qa) - i (q^2 + k^2 - lam^2) sin(qa).
inline ScatteringData amplitudes_model_i(const PotentialSpec& spec, double k) {
    spec.validate();
    if (spec.family != Family::model_i)
        throw ValidationError("amplitudes_model_i: wrong family");
    detail::require_positive_k(k, "amplitudes_model_i");
    const cplx i(0.0, 1.0);
    const double q = std::sqrt(spec.v0 + k * k);
    const double qa = q * spec.a;
    const cplx phase = std::exp(-i * k * spec.a);
    const cplx D = 2.0 * q * k * std::cos(qa) -
                   i * (q * q + k * k - spec.lam * spec.lam) * std::sin(qa);
    ScatteringData d;
    d.k = k;
    d.tL = d.tR = 2.0 * q * k * phase / D;
    d.rL = i * (q * q - (k + spec.lam) * (k + spec.lam)) * std::sin(qa) * phase / D;
    d.rR = i * (q * q - (k - spec.lam) * (k - spec.lam)) * std::sin(qa) * phase / D;
    return d;
}

// Closed-form amplitudes for model II over the shared denominator. The two
// reflection numerators are
//   i mu/2k (1 -+ lam/k + lam^2/2k^2) +- (1 -+ lam/2k) * B,
//   B = (1 + i mu/2k)(lam/2k) e^{ika} - (1 - i mu/2k)(lam/2k) e^{-ika},
// assigned to r_L / r_R per the channel convention above (the upper signs
// belong to the left-incidence channel r_R; swapping lam -> -lam exchanges
// the two, as it must).
inline ScatteringData amplitudes_model_ii(const PotentialSpec& spec, double k) {
    spec.validate();
    if (spec.family != Family::model_ii)
        throw ValidationError("amplitudes_model_ii: wrong family");
    detail::require_positive_k(k, "amplitudes_model_ii");
    const cplx i(0.0, 1.0);
    const double mu = spec.v0, lam = spec.lam;
    const cplx m2 = mu / (2.0 * k);
    const cplx l2 = lam / (2.0 * k);
    const cplx eika = std::exp(i * k * spec.a);
    const cplx D = detail::model_ii_denominator_terms(spec, cplx(k, 0.0)).value;
    const cplx B = (1.0 + i * m2) * l2 * eika - (1.0 - i * m2) * l2 / eika;
    ScatteringData d;
    d.k = k;
    d.tL = d.tR = 1.0 / D;
    d.rR = (i * m2 * (1.0 - lam / k + lam * lam / (2.0 * k * k)) + (1.0 - l2) * B) / D;
    d.rL = (i * m2 * (1.0 + lam / k + lam * lam / (2.0 * k * k)) - (1.0 + l2) * B) / D;
    return d;
}

inline ScatteringData amplitudes(const PotentialSpec& spec, double k) {
    return spec.family == Family::model_i ? amplitudes_model_i(spec, k)
                                          : amplitudes_model_ii(spec, k);
}

// Max-norm of P^{-1} S^dag P S - I with P = [[0,1],[1,0]]. Zero for any
// P-pseudo-Hermitian system; equivalent to the three scalar conditions
//   conj(t_L) t_R + conj(r_L) r_R = 1,  Re(conj(r_L) t_L) = 0,
//   Re(conj(r_R) t_R) = 0.
inline double pseudo_unitarity_defect(const SMatrix& S) {
    // P S^dag P = [[conj(ll), conj(rl)], [conj(lr), conj(rr)]]
    const cplx a11 = std::conj(S.ll), a12 = std::conj(S.rl);
    const cplx a21 = std::conj(S.lr), a22 = std::conj(S.rr);
    const cplx q11 = a11 * S.rr + a12 * S.lr - 1.0;
    const cplx q12 = a11 * S.rl + a12 * S.ll;
    const cplx q21 = a21 * S.rr + a22 * S.lr;
    const cplx q22 = a21 * S.rl + a22 * S.ll - 1.0;
    return std::max({std::abs(q11), std::abs(q12), std::abs(q21), std::abs(q22)});
}

// Max-norm of S^dag S - I; zero only in the Hermitian (lam = 0) limit.
inline double unitarity_defect(const SMatrix& S) {
    const cplx q11 = std::conj(S.rr) * S.rr + std::conj(S.lr) * S.lr - 1.0;
    const cplx q12 = std::conj(S.rr) * S.rl + std::conj(S.lr) * S.ll;
    const cplx q21 = std::conj(S.rl) * S.rr + std::conj(S.ll) * S.lr;
    const cplx q22 = std::conj(S.rl) * S.rl + std::conj(S.ll) * S.ll - 1.0;
    return std::max({std::abs(q11), std::abs(q12), std::abs(q21), std::abs(q22)});
}

enum class Side { L, R };

// |r|^2 + |t|^2 - 1 per incidence channel; the scalar measure of inelasticity
// (negative for net absorption, positive for net emission).
inline double unitarity_deviation(const ScatteringData& d, Side side) {
    const cplx r = side == Side::L ? d.rL : d.rR;
    const cplx t = side == Side::L ? d.tL : d.tR;
    return std::norm(r) + std::norm(t) - 1.0;
}

// Magnitude of the (scaled) transmission denominator at k = i*beta. Vanishes
// exactly when beta satisfies the bound-state eigencondition, so every bound
// state -- including complex-pair members -- is a pole of the amplitudes.
inline double transmission_pole_residual(const PotentialSpec& spec, cplx beta) {
    spec.validate();
    const cplx k = cplx(0.0, 1.0) * beta;
    auto t = spec.family == Family::model_i ? detail::model_i_denominator_terms(spec, k)
                                            : detail::model_ii_denominator_terms(spec, k);
    return std::abs(t.value) / t.scale;
}

}  // namespace pseudowell
