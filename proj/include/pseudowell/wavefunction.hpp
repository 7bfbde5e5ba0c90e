#pragma once

#include <limits>
#include <vector>

#include "pseudowell/bound.hpp"
#include "pseudowell/potential.hpp"

namespace pseudowell {

// Bound-state wavefunction in region form. In region j (potential u_j) with
// kappa_j = sqrt(u_j + beta^2),
//   psi(x) = c_plus e^{kappa x} + c_minus e^{-kappa x},
// and for kappa = 0 the degenerate basis {1, x} is used instead:
//   psi(x) = c_plus + c_minus x.
// Oscillatory interior regions simply carry imaginary kappa.
struct WaveRegion {
    double x_lo = 0.0, x_hi = 0.0;  // +-infinity on the outer regions
    cplx kappa{};
    cplx c_plus{}, c_minus{};

    cplx value(double x) const {
        if (kappa == cplx(0.0)) return c_plus + c_minus * x;
        return c_plus * std::exp(kappa * x) + c_minus * std::exp(-kappa * x);
    }
    cplx derivative(double x) const {
        if (kappa == cplx(0.0)) return c_minus;
        return kappa * (c_plus * std::exp(kappa * x) - c_minus * std::exp(-kappa * x));
    }
};

struct WaveFunction {
    PiecewiseSystem system;
    cplx beta{};
    std::vector<WaveRegion> regions;  // system.interfaces.size() + 1 entries

    std::size_t region_index(double x) const {
        std::size_t j = 0;
        while (j < system.interfaces.size() && x > system.interfaces[j]) ++j;
        return j;
    }
    cplx value(double x) const { return regions[region_index(x)].value(x); }
    cplx derivative(double x) const { return regions[region_index(x)].derivative(x); }
};

namespace detail {

inline cplx region_kappa(cplx u, cplx beta, bool outer) {
    if (outer) return beta;  // exact substitution, no branch decision
    cplx kap = std::sqrt(u + beta * beta);
    if (kap.real() < 0.0 || (kap.real() == 0.0 && kap.imag() < 0.0)) kap = -kap;
    return kap;
}

}  // namespace detail

// Forward propagation from the left tail (normalized c_plus = 1 there) through
// the continuity and jump conditions. The final region must come out purely
// decaying -- the growing coefficient's relative contribution at the last
// interface must stay below `tail_tol` -- which re-verifies the eigenvalue;
// it is then zeroed so the tails are exactly decaying.
inline WaveFunction build_wavefunction(const PiecewiseSystem& sys, cplx beta,
                                       double tail_tol = 1e-8) {
    sys.validate();
    if (sys.interfaces.empty()) throw ValidationError("build_wavefunction: empty system");
    const std::size_t n = sys.interfaces.size();
    const double inf = std::numeric_limits<double>::infinity();

    WaveFunction wf;
    wf.system = sys;
    wf.beta = beta;
    wf.regions.resize(n + 1);
    for (std::size_t j = 0; j <= n; ++j) {
        auto& reg = wf.regions[j];
        reg.x_lo = j == 0 ? -inf : sys.interfaces[j - 1];
        reg.x_hi = j == n ? inf : sys.interfaces[j];
        reg.kappa = detail::region_kappa(sys.region_potentials[j], beta, j == 0 || j == n);
    }
    wf.regions[0].c_plus = 1.0;
    wf.regions[0].c_minus = 0.0;

    for (std::size_t i = 0; i < n; ++i) {
        const double x = sys.interfaces[i];
        const auto& L = wf.regions[i];
        auto& R = wf.regions[i + 1];
        const cplx psi = L.value(x);
        const cplx dpsi = L.derivative(x) + sys.delta_strengths[i] * psi;
        if (R.kappa == cplx(0.0)) {
            R.c_minus = dpsi;
            R.c_plus = psi - dpsi * x;
        } else {
            R.c_plus = 0.5 * (psi + dpsi / R.kappa) * std::exp(-R.kappa * x);
            R.c_minus = 0.5 * (psi - dpsi / R.kappa) * std::exp(R.kappa * x);
        }
    }

    auto& last = wf.regions[n];
    const double xn = sys.interfaces[n - 1];
    if (last.kappa == cplx(0.0)) {
        // zero-binding limit: the tail must be a constant, not a linear ramp
        double scale = std::abs(xn) + 1.0;
        if (std::abs(last.c_minus) * scale > tail_tol * std::abs(last.c_plus))
            throw StaleStateError("build_wavefunction: linear tail at beta = 0");
        last.c_minus = 0.0;
    } else {
        double growing = std::abs(last.c_plus * std::exp(last.kappa * xn));
        double decaying = std::abs(last.c_minus * std::exp(-last.kappa * xn));
        if (growing > tail_tol * decaying)
            throw StaleStateError("build_wavefunction: growing tail, beta is not an eigenvalue");
        last.c_plus = 0.0;
    }
    return wf;
}

inline WaveFunction build_wavefunction(const PotentialSpec& spec, const BoundState& state,
                                       double tail_tol = 1e-8) {
    return build_wavefunction(decompose(spec), state.beta, tail_tol);
}

// ---------------------------------------------------------------------------
// Closed-form integrals of products of region exponentials.

namespace detail {

// int_u^v e^{s x} dx, series-stable for small |s (v-u)|.
inline cplx exp_segment_integral(cplx s, double u, double v) {
    const double w = v - u;
    const cplx z = s * w;
    if (std::abs(z) < 1e-6)
        return std::exp(s * u) * w * (1.0 + z * (0.5 + z * (1.0 / 6.0 + z / 24.0)));
    return (std::exp(s * v) - std::exp(s * u)) / s;
}

struct ExpTerm {
    cplx coeff;
    cplx rate;  // contributes coeff * e^{rate * x}
};

// psi terms on region j, optionally as psi(-x).
inline void region_terms(const WaveFunction& wf, std::size_t j, bool reflected,
                         ExpTerm out[2]) {
    const auto& r = wf.regions[j];
    if (r.kappa == cplx(0.0))
        throw DivergentIntegralError("inner product: zero-binding state is not normalizable");
    if (!reflected) {
        out[0] = {r.c_plus, r.kappa};
        out[1] = {r.c_minus, -r.kappa};
    } else {
        out[0] = {r.c_plus, -r.kappa};
        out[1] = {r.c_minus, r.kappa};
    }
}

// int conj(f(x)) g(x) dx over the whole line, with g optionally reflected
// (g(-x)). Both wavefunctions must live on the same breakpoints; the tails
// must decay or the integral does not exist.
inline cplx line_overlap(const WaveFunction& f, const WaveFunction& g, bool reflect_g) {
    if (f.system.interfaces != g.system.interfaces)
        throw ValidationError("inner product: wavefunctions on different systems");
    const auto& xs = f.system.interfaces;
    const std::size_t n = xs.size();
    cplx total = 0.0;

    ExpTerm tf[2], tg[2];
    for (std::size_t i = 0; i + 1 < n; ++i) {
        const double u = xs[i], v = xs[i + 1];
        const double mid = 0.5 * (u + v);
        region_terms(f, f.region_index(mid), false, tf);
        if (reflect_g)
            region_terms(g, g.region_index(-mid), true, tg);
        else
            region_terms(g, g.region_index(mid), false, tg);
        for (const auto& a : tf)
            for (const auto& b : tg)
                total += std::conj(a.coeff) * b.coeff *
                         exp_segment_integral(std::conj(a.rate) + b.rate, u, v);
    }

    // right tail [x_n, inf): f has only its decaying component there
    region_terms(f, n, false, tf);
    if (reflect_g)
        region_terms(g, 0, true, tg);
    else
        region_terms(g, n, false, tg);
    for (const auto& a : tf)
        for (const auto& b : tg) {
            if (a.coeff == cplx(0.0) || b.coeff == cplx(0.0)) continue;
            const cplx s = std::conj(a.rate) + b.rate;
            if (!(s.real() < 0.0))
                throw DivergentIntegralError("inner product: non-decaying right tail");
            total += -std::conj(a.coeff) * b.coeff * std::exp(s * xs.back()) / s;
        }

    // left tail (-inf, x_1]
    region_terms(f, 0, false, tf);
    if (reflect_g)
        region_terms(g, n, true, tg);
    else
        region_terms(g, 0, false, tg);
    for (const auto& a : tf)
        for (const auto& b : tg) {
            if (a.coeff == cplx(0.0) || b.coeff == cplx(0.0)) continue;
            const cplx s = std::conj(a.rate) + b.rate;
            if (!(s.real() > 0.0))
                throw DivergentIntegralError("inner product: non-decaying left tail");
            total += std::conj(a.coeff) * b.coeff * std::exp(s * xs.front()) / s;
        }
    return total;
}

}  // namespace detail

// Indefinite eta = P inner product:  <<psi1|psi2>>_P = int conj(psi1(x)) psi2(-x) dx.
// Eigenstates at energies E1, E2 are eta-orthogonal unless conj(E1) = E2, so a
// complex-pair member is eta-orthogonal to itself but not to its partner.
inline cplx eta_inner_product(const WaveFunction& psi1, const WaveFunction& psi2) {
    return detail::line_overlap(psi1, psi2, true);
}

inline cplx l2_inner_product(const WaveFunction& psi1, const WaveFunction& psi2) {
    return detail::line_overlap(psi1, psi2, false);
}

inline double l2_norm_squared(const WaveFunction& psi) {
    return l2_inner_product(psi, psi).real();
}

// The PT image phi(x) = conj(psi(-x)) on the same breakpoints (the systems
// here are reflection-symmetric).
inline WaveFunction pt_image(const WaveFunction& psi) {
    const std::size_t n = psi.system.interfaces.size();
    for (std::size_t i = 0; i < n; ++i)
        if (std::abs(psi.system.interfaces[i] + psi.system.interfaces[n - 1 - i]) >
            1e-14 * (std::abs(psi.system.interfaces.back()) + 1.0))
            throw ValidationError("pt_image: interfaces are not reflection-symmetric");
    WaveFunction out;
    out.system = psi.system;
    out.beta = std::conj(psi.beta);
    out.regions.resize(n + 1);
    for (std::size_t j = 0; j <= n; ++j) {
        const auto& src = psi.regions[n - j];
        auto& dst = out.regions[j];
        dst.x_lo = -src.x_hi;
        dst.x_hi = -src.x_lo;
        dst.kappa = std::conj(src.kappa);
        // conj(c+ e^{k(-x)} + c- e^{-k(-x)}) = conj(c-) e^{conj(k) x} + conj(c+) e^{-conj(k) x}
        dst.c_plus = std::conj(src.c_minus);
        dst.c_minus = std::conj(src.c_plus);
    }
    return out;
}

// min over |c| = 1 of ||PT psi - c psi||_2 / ||psi||_2. Zero for PT-unbroken
// states; O(1) for the spontaneously broken complex-pair members.
//
// When every region basis is closed under conjugation (kappa real or purely
// imaginary, i.e. real beta) the difference PT psi - c psi is formed
// coefficient-wise before integrating, which keeps the defect at roundoff
// level instead of sqrt(machine-eps) from cancelling O(1) norms.
inline double pt_defect(const WaveFunction& psi) {
    const WaveFunction phi = pt_image(psi);
    const double n2 = l2_norm_squared(psi);
    const cplx ov = l2_inner_product(phi, psi);
    if (std::abs(ov) == 0.0) return std::sqrt(2.0);
    const cplx copt = std::conj(ov) / std::abs(ov);

    bool matched = true;
    for (std::size_t j = 0; j < psi.regions.size() && matched; ++j) {
        const cplx kp = phi.regions[j].kappa, k = psi.regions[j].kappa;
        const double tol = 1e-14 * (std::abs(k) + 1.0);
        if (std::abs(kp - k) > tol && std::abs(kp + k) > tol) matched = false;
    }
    if (!matched) {
        const double nphi2 = l2_norm_squared(phi);
        const double d2 = nphi2 + n2 - 2.0 * std::abs(ov);
        return std::sqrt(std::max(0.0, d2 / n2));
    }

    WaveFunction diff = psi;
    for (std::size_t j = 0; j < diff.regions.size(); ++j) {
        const auto& p = phi.regions[j];
        auto& d = diff.regions[j];
        cplx hp = p.c_plus, hm = p.c_minus;
        if (std::abs(p.kappa + d.kappa) <= 1e-14 * (std::abs(d.kappa) + 1.0))
            std::swap(hp, hm);  // conj flipped the basis order
        d.c_plus = hp - copt * psi.regions[j].c_plus;
        d.c_minus = hm - copt * psi.regions[j].c_minus;
    }
    return std::sqrt(std::max(0.0, l2_norm_squared(diff) / n2));
}

}  // namespace pseudowell
