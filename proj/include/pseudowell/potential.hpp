#pragma once

#include <optional>
#include <vector>

#include "pseudowell/common.hpp"

namespace pseudowell {

// Two one-dimensional complex optical potentials, in reduced units
// hbar^2/(2m) = 1 throughout:
//
//   model I :  U(x) = -v0 * theta(a/2 - |x|) + i*lam*[delta(x-a/2) - delta(x+a/2)]
//   model II:  U(x) = -v0 * delta(x)         + i*lam*[delta(x-a/2) - delta(x+a/2)]
//
// For model I, v0 is a depth (1/length^2); for model II it is the delta
// strength mu (1/length). Both violate P and T separately but satisfy
// U(-x) = conj(U(x)), i.e. they are P-pseudo-Hermitian.

enum class Family { model_i, model_ii };

inline const char* to_string(Family f) {
    return f == Family::model_i ? "model1" : "model2";
}

struct PotentialSpec {
    Family family = Family::model_i;
    double v0 = 0.0;   // depth v~0 (model I) or delta strength mu~ (model II)
    double a = 1.0;    // well width (model I) or absorber separation (model II)
    double lam = 0.0;  // imaginary delta strength lam~, stored nonnegative

    static PotentialSpec model1(double v0, double a, double lam) {
        return normalized({Family::model_i, v0, a, lam});
    }
    static PotentialSpec model2(double mu, double a, double lam) {
        return normalized({Family::model_ii, mu, a, lam});
    }

    // A negative lam mirrors the system (left<->right roles swap); the
    // canonical form keeps lam >= 0.
    static PotentialSpec normalized(PotentialSpec s) {
        s.lam = std::abs(s.lam);
        s.validate();
        return s;
    }

    void validate() const {
        if (!(a > 0.0)) throw ValidationError("PotentialSpec: range a must be positive");
        if (!(v0 >= 0.0)) throw ValidationError("PotentialSpec: depth must be nonnegative");
        if (!std::isfinite(v0) || !std::isfinite(a) || !std::isfinite(lam))
            throw ValidationError("PotentialSpec: parameters must be finite");
    }

    bool operator==(const PotentialSpec&) const = default;
};

// Piecewise-constant regions separated by complex delta spikes. Region j
// occupies (x_{j-1}, x_j) with interfaces x_0 < ... < x_{n-1}; there are n+1
// regions and the outermost two are free (potential exactly zero).
//
// Jump convention at interface i:  psi'(x_i+) - psi'(x_i-) = s_i * psi(x_i).
struct PiecewiseSystem {
    std::vector<double> interfaces;
    std::vector<cplx> region_potentials;  // size interfaces.size() + 1
    std::vector<cplx> delta_strengths;    // size interfaces.size()

    void validate() const {
        if (region_potentials.size() != interfaces.size() + 1 ||
            delta_strengths.size() != interfaces.size())
            throw ValidationError("PiecewiseSystem: inconsistent sizes");
        for (std::size_t i = 1; i < interfaces.size(); ++i)
            if (!(interfaces[i - 1] < interfaces[i]))
                throw ValidationError("PiecewiseSystem: interfaces must be strictly increasing");
        if (!interfaces.empty() &&
            (region_potentials.front() != cplx(0.0) || region_potentials.back() != cplx(0.0)))
            throw ValidationError("PiecewiseSystem: outer regions must be free");
    }

    bool operator==(const PiecewiseSystem&) const = default;
};

inline PiecewiseSystem decompose(const PotentialSpec& spec) {
    spec.validate();
    const double h = spec.a / 2.0;
    PiecewiseSystem sys;
    if (spec.family == Family::model_i) {
        sys.interfaces = {-h, h};
        sys.region_potentials = {cplx(0.0), cplx(-spec.v0), cplx(0.0)};
        sys.delta_strengths = {cplx(0.0, -spec.lam), cplx(0.0, spec.lam)};
    } else {
        sys.interfaces = {-h, 0.0, h};
        sys.region_potentials = {cplx(0.0), cplx(0.0), cplx(0.0), cplx(0.0)};
        sys.delta_strengths = {cplx(0.0, -spec.lam), cplx(-spec.v0), cplx(0.0, spec.lam)};
    }
    return sys;
}

// Inverse of decompose on the two canonical shapes.
inline PotentialSpec reassemble(const PiecewiseSystem& sys) {
    sys.validate();
    if (sys.interfaces.size() == 2) {
        PotentialSpec s;
        s.family = Family::model_i;
        s.a = sys.interfaces[1] - sys.interfaces[0];
        s.v0 = -sys.region_potentials[1].real();
        s.lam = sys.delta_strengths[1].imag();
        return s;
    }
    if (sys.interfaces.size() == 3) {
        PotentialSpec s;
        s.family = Family::model_ii;
        s.a = sys.interfaces[2] - sys.interfaces[0];
        s.v0 = -sys.delta_strengths[1].real();
        s.lam = sys.delta_strengths[2].imag();
        return s;
    }
    throw ValidationError("reassemble: not a canonical two-family system");
}

// The parity-conjugate partner system: positions reflected, potentials and
// strengths conjugated. Equal to the original exactly when the system is
// P-pseudo-Hermitian (U(-x) = conj(U(x))).
inline PiecewiseSystem reflect_conjugate(const PiecewiseSystem& sys) {
    PiecewiseSystem out;
    const std::size_t n = sys.interfaces.size();
    out.interfaces.resize(n);
    out.delta_strengths.resize(n);
    out.region_potentials.resize(n + 1);
    for (std::size_t i = 0; i < n; ++i) {
        out.interfaces[i] = -sys.interfaces[n - 1 - i];
        out.delta_strengths[i] = std::conj(sys.delta_strengths[n - 1 - i]);
    }
    for (std::size_t j = 0; j <= n; ++j)
        out.region_potentials[j] = std::conj(sys.region_potentials[n - j]);
    return out;
}

// Threshold strength at which the least-bound state reaches zero binding.
//   model I : lam_crit = sqrt(v0)
//   model II: lam_crit solves mu = 4 lam^2 a / (4 + lam^2 a^2); no finite
//             solution when mu*a >= 4.
inline std::optional<double> critical_imaginary_strength(const PotentialSpec& spec) {
    spec.validate();
    if (spec.family == Family::model_i) return std::sqrt(spec.v0);
    const double mua = spec.v0 * spec.a;
    if (mua >= 4.0) return std::nullopt;
    return 2.0 * std::sqrt(spec.v0 / (spec.a * (4.0 - mua)));
}

// Minimum depth that still binds at imaginary strength lam.
//   model I : v0_crit = lam^2
//   model II: mu_crit = 4 lam^2 a / (4 + lam^2 a^2)
inline double critical_depth(Family family, double lam, double a) {
    if (!(a > 0.0)) throw ValidationError("critical_depth: a must be positive");
    if (!(lam >= 0.0)) throw ValidationError("critical_depth: lam must be nonnegative");
    if (family == Family::model_i) return lam * lam;
    const double la2 = lam * lam * a;
    return 4.0 * la2 / (4.0 + la2 * a);
}

}  // namespace pseudowell
