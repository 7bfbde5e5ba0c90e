#pragma once

#include <array>
#include <optional>
#include <vector>

#include "pseudowell/potential.hpp"
#include "pseudowell/roots.hpp"

namespace pseudowell {

// Bound states have energy E = -beta^2 with Re(beta) > 0 so that the tails
// e^{-beta|x|} decay. Eigenvalues are real or come in conjugate pairs.

enum class BoundKind { real, complex_pair_member };

struct BoundState {
    cplx beta{};
    cplx energy{};  // -beta^2
    BoundKind kind = BoundKind::real;
    double residual = 0.0;  // scaled eigencondition magnitude at beta
};

// The model-II eigencondition is implemented in two algebraic variants that
// differ in one exponential factor; `pole_consistent` is the form whose roots
// coincide with the poles of the model-II transmission amplitude (and with
// the transfer-matrix quantization condition -- see the `check` report, which
// arbitrates the two at run time).
enum class ModelTwoVariant { as_printed, pole_consistent };

inline constexpr ModelTwoVariant default_model_two_variant = ModelTwoVariant::pole_consistent;

namespace detail {

struct ResidualTerms {
    cplx value;
    double scale;  // magnitude of the dominant term, for O(1) residuals
};

// Model I:  (q^2 - b^2 - lam^2) sin(qa) = 2 b q cos(qa),  q^2 = v0 - b^2.
// Dividing by q gives an entire function of b (sin(qa)/q and cos(qa) are even
// in q), which keeps the residual branch-free through q = 0 and lets the
// complex Newton iteration work anywhere in the b plane.
inline ResidualTerms eigencondition_terms_model_i(const PotentialSpec& s, cplx b) {
    const cplx q2 = s.v0 - b * b;
    const cplx za = q2 * (s.a * s.a);
    const cplx t1 = (q2 - b * b - s.lam * s.lam) * s.a * sincc(za);
    const cplx t2 = -2.0 * b * cosc(za);
    double scale = std::max({1.0 / s.a, std::abs(t1), std::abs(t2)});
    return {t1 + t2, scale};
}

// Model II:  8 b^3 - 4 mu b^2 = lam^2 (1 - e^{-ba}) [mu (1 - e^{-ba}) - 2 b (1 + e^{+-ba})].
// The as_printed variant carries e^{+ba}; it is evaluated multiplied through
// by e^{-ba} so deep states do not overflow (roots are unchanged).
inline ResidualTerms eigencondition_terms_model_ii(const PotentialSpec& s, cplx b,
                                                   ModelTwoVariant variant) {
    const double mu = s.v0, lam2 = s.lam * s.lam;
    const cplx em = std::exp(-b * s.a);
    const cplx one_minus = 1.0 - em;
    cplx t1, t2, t3, t4;
    if (variant == ModelTwoVariant::pole_consistent) {
        t1 = 8.0 * b * b * b;
        t2 = -4.0 * mu * b * b;
        t3 = -lam2 * one_minus * mu * one_minus;
        t4 = lam2 * one_minus * 2.0 * b * (1.0 + em);
    } else {
        t1 = em * 8.0 * b * b * b;
        t2 = -em * 4.0 * mu * b * b;
        t3 = -lam2 * one_minus * mu * em * one_minus;
        t4 = lam2 * one_minus * 2.0 * b * (em + 1.0);
    }
    const double a3 = s.a * s.a * s.a;
    double scale = std::max({1.0 / a3, std::abs(t1), std::abs(t2), std::abs(t3), std::abs(t4)});
    return {t1 + t2 + t3 + t4, scale};
}

inline ResidualTerms eigencondition_terms(const PotentialSpec& s, cplx b,
                                          ModelTwoVariant variant) {
    return s.family == Family::model_i ? eigencondition_terms_model_i(s, b)
                                       : eigencondition_terms_model_ii(s, b, variant);
}

}  // namespace detail

inline cplx eigencondition_model_i(const PotentialSpec& spec, cplx beta) {
    return detail::eigencondition_terms_model_i(spec, beta).value;
}

inline cplx eigencondition_model_ii(const PotentialSpec& spec, cplx beta,
                                    ModelTwoVariant variant = default_model_two_variant) {
    return detail::eigencondition_terms_model_ii(spec, beta, variant).value;
}

inline cplx eigencondition(const PotentialSpec& spec, cplx beta,
                           ModelTwoVariant variant = default_model_two_variant) {
    return detail::eigencondition_terms(spec, beta, variant).value;
}

// |f(beta)| normalized by the dominant term, so tolerances are dimensionless.
inline double scaled_residual(const PotentialSpec& spec, cplx beta,
                              ModelTwoVariant variant = default_model_two_variant) {
    auto t = detail::eigencondition_terms(spec, beta, variant);
    return std::abs(t.value) / t.scale;
}

namespace detail {

inline constexpr int grid_points = 2048;

inline double grid_epsilon(const PotentialSpec& s) { return 1e-9 / s.a; }

// Upper end of the real search window. Model I cannot bind deeper than the
// well (q^2 = v0 - b^2 must stay real-oscillatory for a sign change), model II
// never binds deeper than the bare delta level mu/2, so mu is generous.
inline double beta_max(const PotentialSpec& s) {
    return s.family == Family::model_i ? std::sqrt(s.v0) - grid_epsilon(s) : s.v0;
}

}  // namespace detail

// Real bound states by grid scan + bisection on the (real-valued) residual,
// Newton-polished. Roots at or below the grid cutoff are excluded: beta = 0
// is always a root (double, for model II) but carries no state. An empty
// result is not an error; it is how criticality shows up.
inline std::vector<BoundState> find_real_bound_states(
    const PotentialSpec& spec, double tol = 1e-10,
    ModelTwoVariant variant = default_model_two_variant) {
    spec.validate();
    if (!(tol > 0.0)) throw ValidationError("find_real_bound_states: tol must be positive");
    std::vector<BoundState> out;
    const double eps = detail::grid_epsilon(spec);
    const double bmax = detail::beta_max(spec);
    if (!(bmax > eps)) return out;

    auto fre = [&](double b) {
        return detail::eigencondition_terms(spec, cplx(b, 0.0), variant).value.real();
    };
    auto brackets = scan_sign_changes(fre, eps, bmax, detail::grid_points);

    std::vector<double> roots;
    for (const auto& br : brackets) {
        double r = refine_root(fre, br, 1e-12 * bmax);
        if (r <= eps) continue;
        if (r < 10.0 * eps) {
            // Reject the unphysical beta = 0 double root: a genuine state this
            // close to zero still has an O(1) slope relative to f/b.
            double h = eps;
            double d = (fre(r + h) - fre(r - h)) / (2.0 * h);
            if (std::abs(d) * r <= 10.0 * std::abs(fre(r))) continue;
        }
        roots.push_back(r);
    }
    std::sort(roots.begin(), roots.end());
    // merge near-degenerate brackets
    std::vector<double> merged;
    for (double r : roots) {
        if (!merged.empty() && std::abs(r - merged.back()) < 1e-9 * bmax)
            merged.back() = 0.5 * (merged.back() + r);
        else
            merged.push_back(r);
    }
    for (double r : merged) {
        double res = scaled_residual(spec, cplx(r, 0.0), variant);
        if (res >= tol) continue;
        BoundState st;
        st.beta = cplx(r, 0.0);
        st.energy = -st.beta * st.beta;
        st.kind = BoundKind::real;
        st.residual = res;
        out.push_back(st);
    }
    return out;
}

// Perturbative seed for the conjugate pair of model I just above criticality,
// eps = (v0 - lam^2) a^2 < 0:  beta*a ~ (3/8)|eps| + i sqrt(|eps|/2).
inline cplx model_i_pair_seed(const PotentialSpec& spec) {
    const double eps = (spec.v0 - spec.lam * spec.lam) * spec.a * spec.a;
    const double ae = std::abs(eps);
    return cplx(3.0 / 8.0 * ae, std::sqrt(ae / 2.0)) / spec.a;
}

// Complex-conjugate pair by damped Newton from `seed`. The returned pair is
// (root, conj(root)) with the conjugate residual verified, not assumed. The
// member with Im(beta) >= 0 comes first.
inline std::array<BoundState, 2> find_complex_pair(
    const PotentialSpec& spec, double tol, cplx seed,
    ModelTwoVariant variant = default_model_two_variant) {
    spec.validate();
    if (!(tol > 0.0)) throw ValidationError("find_complex_pair: tol must be positive");
    auto f = [&](cplx b) { return eigencondition(spec, b, variant); };
    auto norm = [&](cplx b) { return scaled_residual(spec, b, variant); };
    auto r = complex_newton(f, seed, norm, tol, 200);
    if (!r.converged)
        throw ConvergenceError("find_complex_pair: Newton did not converge", r.root);
    cplx b1 = r.root;
    cplx b2 = std::conj(b1);
    double res2 = norm(b2);
    if (res2 >= tol)
        throw ConvergenceError("find_complex_pair: conjugate fails the eigencondition", b2);
    if (b1.imag() < 0.0) std::swap(b1, b2);
    auto mk = [&](cplx b) {
        BoundState st;
        st.beta = b;
        st.energy = -b * b;
        st.residual = norm(b);
        st.kind = std::abs(b.imag()) > 1e-12 * std::max(1.0, std::abs(b))
                      ? BoundKind::complex_pair_member
                      : BoundKind::real;
        return st;
    };
    return {mk(b1), mk(b2)};
}

inline std::array<BoundState, 2> find_complex_pair(
    const PotentialSpec& spec, double tol = 1e-10,
    ModelTwoVariant variant = default_model_two_variant) {
    return find_complex_pair(spec, tol, model_i_pair_seed(spec), variant);
}

// ---------------------------------------------------------------------------
// Near-critical expansion of the model-I eigencondition at sqrt(v0)*a = pi/2.
//
// With eps = (v0 - lam^2) a^2 the transcendental condition reduces to a cubic
// in beta*a; the expansion below quotes the two-term root formulas
//   eps > 0:  beta*a = -(3/8) eps +- sqrt(eps/2)   and  beta*a = -2
//   eps < 0:  beta*a = (3/8)|eps| +- i sqrt(|eps|/2)  and  beta*a = -2
// A root is physical only if Re(beta) > 0.

struct PerturbativeRoot {
    cplx beta_a{};
    bool physical = false;
};

inline std::array<PerturbativeRoot, 3> perturbative_roots_model_i(double eps) {
    std::array<PerturbativeRoot, 3> out;
    if (eps >= 0.0) {
        const double s = std::sqrt(eps / 2.0);
        out[0].beta_a = cplx(-3.0 / 8.0 * eps + s, 0.0);
        out[1].beta_a = cplx(-3.0 / 8.0 * eps - s, 0.0);
    } else {
        const double ae = -eps;
        const double s = std::sqrt(ae / 2.0);
        out[0].beta_a = cplx(3.0 / 8.0 * ae, s);
        out[1].beta_a = cplx(3.0 / 8.0 * ae, -s);
    }
    out[2].beta_a = cplx(-2.0, 0.0);
    for (auto& r : out) r.physical = r.beta_a.real() > 0.0;
    return out;
}

// Exact roots of the cubic reduction itself, z^3 + 2 z^2 - eps = 0 (z = beta*a).
// These track the transcendental roots to O(eps^2), which is what the order
// check in the acceptance suite measures.
inline std::array<cplx, 3> cubic_roots_model_i(double eps) {
    auto p = [&](cplx z) { return z * z * z + 2.0 * z * z - eps; };
    auto dp = [](cplx z) { return 3.0 * z * z + 4.0 * z; };
    std::array<cplx, 3> roots;
    auto pr = perturbative_roots_model_i(eps);
    for (int i = 0; i < 3; ++i) {
        cplx z = pr[i].beta_a;
        for (int it = 0; it < 100; ++it) {
            cplx step = p(z) / dp(z);
            z -= step;
            if (std::abs(step) < 1e-16 * std::max(1.0, std::abs(z))) break;
        }
        roots[i] = z;
    }
    return roots;
}

// ---------------------------------------------------------------------------

struct BindingPoint {
    double lam = 0.0;
    std::optional<double> beta;  // least-bound level, absent past criticality
};

// beta(lam) along a strength grid: the least-bound (smallest beta) real state
// at each lam, evaluated grid-point-parallel with deterministic ordering.
inline std::vector<BindingPoint> binding_curve(
    const PotentialSpec& spec, const std::vector<double>& lam_grid, double tol = 1e-10,
    ModelTwoVariant variant = default_model_two_variant) {
    for (std::size_t i = 1; i < lam_grid.size(); ++i)
        if (!(lam_grid[i - 1] <= lam_grid[i]))
            throw ValidationError("binding_curve: lam grid must be ascending");
    std::vector<BindingPoint> out(lam_grid.size());
    parallel_for(lam_grid.size(), [&](std::size_t i) {
        PotentialSpec s = spec;
        s.lam = lam_grid[i];
        s = PotentialSpec::normalized(s);
        auto states = find_real_bound_states(s, tol, variant);
        out[i].lam = lam_grid[i];
        if (!states.empty()) out[i].beta = states.front().beta.real();
    });
    return out;
}

}  // namespace pseudowell
