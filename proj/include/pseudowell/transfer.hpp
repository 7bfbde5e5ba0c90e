#pragma once

#include <vector>

#include "pseudowell/potential.hpp"
#include "pseudowell/roots.hpp"
#include "pseudowell/scattering.hpp"

namespace pseudowell {

// Independent numerical ground truth: 2x2 transfer-matrix propagation for an
// arbitrary PiecewiseSystem. Nothing here uses the closed-form amplitudes or
// eigenconditions; agreement between the two routes is what the check suite
// certifies.
//
// Conventions (fixed):
//  * In a region with constant potential u the solution is written
//      psi(x) = A e^{i k_loc x} + B e^{-i k_loc x},
//    with the coefficients (A, B) referenced to the global origin x = 0;
//    interface positions therefore enter the factors as explicit phases.
//  * k_loc = sqrt(k^2 - u) on the principal branch (Im >= 0, and Re >= 0 when
//    Im = 0). In the free outer regions k_loc = k exactly, so bound-state
//    evaluation substitutes k = i*beta directly instead of continuing through
//    the branch cut.
//  * A structure's matrix M maps coefficients on its left to those on its
//    right: (A,B)_right = M (A,B)_left.
//
// Scattering boundary conditions then give, for a beam incident from the left
// (right-travelling channel R):  (A,B)_left = (1, r_R), (A,B)_right = (t, 0),
// and for one incident from the right (channel L): (A,B)_right = (r_L, 1),
// (A,B)_left = (0, t). Solving,
//   t_R = 1/M22,  r_R = -M21/M22,  t_L = det(M)/M22,  r_L = M12/M22,
// and a bound state (decay both ways at k = i*beta) is exactly M22 = 0.

struct TransferMatrix {
    cplx m11{1.0}, m12{}, m21{}, m22{1.0};

    static TransferMatrix identity() { return {}; }

    cplx det() const { return m11 * m22 - m12 * m21; }

    double max_abs() const {
        return std::max({std::abs(m11), std::abs(m12), std::abs(m21), std::abs(m22)});
    }

    friend TransferMatrix operator*(const TransferMatrix& a, const TransferMatrix& b) {
        return {a.m11 * b.m11 + a.m12 * b.m21, a.m11 * b.m12 + a.m12 * b.m22,
                a.m21 * b.m11 + a.m22 * b.m21, a.m21 * b.m12 + a.m22 * b.m22};
    }
};

// Principal-branch local wavenumber in a region of potential u.
inline cplx local_wavenumber(cplx k, cplx u) {
    if (u == cplx(0.0)) return k;  // outer regions: no branch decision
    cplx kl = std::sqrt(k * k - u);
    if (kl.imag() < 0.0 || (kl.imag() == 0.0 && kl.real() < 0.0)) kl = -kl;
    return kl;
}

// Propagation phases across [x_from, x_to] at constant k_local: carries
// x_from-referenced coefficients to x_to-referenced ones. Unimodular; real
// exponential entries when k_local is purely imaginary (evanescent).
inline TransferMatrix region_matrix(cplx k_local, double x_from, double x_to) {
    if (!(x_to >= x_from)) throw ValidationError("region_matrix: x_to must be >= x_from");
    const cplx i(0.0, 1.0);
    const cplx ph = std::exp(i * k_local * (x_to - x_from));
    return {ph, 0.0, 0.0, 1.0 / ph};
}

namespace detail {

// Position-free matching factor at an interface between wavenumbers kl and kr
// carrying a delta of strength s (psi continuous, psi' jump = s psi), both
// sides referenced at the interface itself.
inline TransferMatrix step_delta_local(cplx kl, cplx kr, cplx s) {
    const cplx i(0.0, 1.0);
    const cplx rho = kl / kr;
    const cplx sig = s / (i * kr);
    return {0.5 * (1.0 + rho + sig), 0.5 * (1.0 - rho + sig),
            0.5 * (1.0 - rho - sig), 0.5 * (1.0 + rho - sig)};
}

}  // namespace detail

// General interface factor in the global phase reference: re-reference to the
// interface position, match, reference back, so x0 enters as explicit phases.
inline TransferMatrix interface_matrix(cplx k_left, cplx k_right, cplx strength, double x0) {
    const cplx i(0.0, 1.0);
    const cplx phl = std::exp(i * k_left * x0);
    const cplx phr = std::exp(i * k_right * x0);
    const TransferMatrix to_local = {phl, 0.0, 0.0, 1.0 / phl};
    const TransferMatrix to_global = {1.0 / phr, 0.0, 0.0, phr};
    return to_global * detail::step_delta_local(k_left, k_right, strength) * to_local;
}

// Delta spike inside a region of uniform wavenumber k. Unimodular for any
// complex strength; identity at strength zero.
inline TransferMatrix delta_matrix(cplx strength, cplx k, double x0) {
    if (k == cplx(0.0)) throw std::domain_error("delta_matrix: k must be nonzero");
    return interface_matrix(k, k, strength, x0);
}

namespace detail {

inline std::vector<cplx> region_wavenumbers(const PiecewiseSystem& sys, cplx k) {
    std::vector<cplx> ks(sys.region_potentials.size());
    for (std::size_t j = 0; j < ks.size(); ++j) {
        bool outer = (j == 0 || j + 1 == ks.size());
        ks[j] = outer ? k : local_wavenumber(k, sys.region_potentials[j]);
    }
    return ks;
}

}  // namespace detail

// Full left-to-right composition at (possibly complex) wavenumber k.
inline TransferMatrix compose_system(const PiecewiseSystem& sys, cplx k) {
    sys.validate();
    auto ks = detail::region_wavenumbers(sys, k);
    TransferMatrix M = TransferMatrix::identity();
    for (std::size_t i = 0; i < sys.interfaces.size(); ++i)
        M = interface_matrix(ks[i], ks[i + 1], sys.delta_strengths[i], sys.interfaces[i]) * M;
    return M;
}

inline ScatteringData oracle_amplitudes(const PiecewiseSystem& sys, double k) {
    if (!(k > 0.0)) throw std::domain_error("oracle_amplitudes: k must be positive");
    TransferMatrix M = compose_system(sys, cplx(k, 0.0));
    if (std::abs(M.m22) < 1e-14 * std::max(1.0, M.max_abs()))
        throw DegenerateSystemError("oracle_amplitudes: pole at real k");
    ScatteringData d;
    d.k = k;
    d.tR = 1.0 / M.m22;
    d.rR = -M.m21 / M.m22;
    d.tL = M.det() / M.m22;
    d.rL = M.m12 / M.m22;
    return d;
}

// Quantization residual at k = i*beta: M22 of the composition, renormalized
// after every factor so the dominant evanescent exponentials divide out and
// deep systems cannot overflow. M22 -> 0 exactly at bound states.
inline cplx oracle_bound_condition(const PiecewiseSystem& sys, cplx beta) {
    sys.validate();
    const cplx k = cplx(0.0, 1.0) * beta;
    auto ks = detail::region_wavenumbers(sys, k);
    TransferMatrix M = TransferMatrix::identity();
    for (std::size_t i = 0; i < sys.interfaces.size(); ++i) {
        M = interface_matrix(ks[i], ks[i + 1], sys.delta_strengths[i], sys.interfaces[i]) * M;
        double m = M.max_abs();
        if (m == 0.0) throw DegenerateSystemError("oracle_bound_condition: zero matrix");
        M.m11 /= m;
        M.m12 /= m;
        M.m21 /= m;
        M.m22 /= m;
    }
    return M.m22;
}

// Real bound states of the oracle condition by the same grid-scan protocol as
// the closed-form solver. For a P-pseudo-Hermitian system the residual is real
// on the real beta axis (up to roundoff); the imaginary part is checked.
inline std::vector<double> oracle_find_real_bound_states(const PiecewiseSystem& sys,
                                                         double beta_max, double tol = 1e-10) {
    sys.validate();
    const double a = sys.interfaces.back() - sys.interfaces.front();
    const double eps = 1e-9 / a;
    std::vector<double> out;
    if (!(beta_max > eps)) return out;
    auto fre = [&](double b) { return oracle_bound_condition(sys, cplx(b, 0.0)).real(); };
    auto brackets = scan_sign_changes(fre, eps, beta_max, 2048);
    for (const auto& br : brackets) {
        double r = refine_root(fre, br, 1e-12 * beta_max);
        if (r <= eps) continue;
        cplx full = oracle_bound_condition(sys, cplx(r, 0.0));
        if (std::abs(full) >= tol) continue;
        if (!out.empty() && std::abs(r - out.back()) < 1e-9 * beta_max) continue;
        out.push_back(r);
    }
    return out;
}

}  // namespace pseudowell
