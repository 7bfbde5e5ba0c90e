#pragma once

#include <cmath>
#include <utility>
#include <vector>

#include "pseudowell/common.hpp"

namespace pseudowell {

struct Bracket {
    double lo, hi;
};

// Uniform-grid scan for sign changes of f. A node that is exactly zero is
// bracketed by its neighbours.
template <typename F>
std::vector<Bracket> scan_sign_changes(F&& f, double lo, double hi, int points) {
    std::vector<Bracket> out;
    if (!(hi > lo) || points < 2) return out;
    double prev_x = lo, prev_f = f(lo);
    for (int i = 1; i < points; ++i) {
        double x = lo + (hi - lo) * static_cast<double>(i) / (points - 1);
        double fx = f(x);
        if (prev_f == 0.0 || (prev_f < 0.0) != (fx < 0.0)) out.push_back({prev_x, x});
        prev_x = x;
        prev_f = fx;
    }
    return out;
}

// Bisection to the requested interval width, then a few safeguarded Newton
// steps (central differences) to polish the root to machine accuracy.
template <typename F>
double refine_root(F&& f, Bracket b, double xtol) {
    double lo = b.lo, hi = b.hi;
    double flo = f(lo);
    for (int i = 0; i < 200 && (hi - lo) > xtol; ++i) {
        double mid = 0.5 * (lo + hi);
        double fm = f(mid);
        if (fm == 0.0) return mid;
        if ((flo < 0.0) == (fm < 0.0)) {
            lo = mid;
            flo = fm;
        } else {
            hi = mid;
        }
    }
    double x = 0.5 * (lo + hi);
    for (int i = 0; i < 8; ++i) {
        double h = std::max(1e-7 * std::abs(x), 1e-12 * (b.hi - b.lo + 1.0));
        double d = (f(x + h) - f(x - h)) / (2.0 * h);
        if (d == 0.0) break;
        double step = f(x) / d;
        double next = x - step;
        if (!(next > b.lo && next < b.hi)) break;  // keep the bracket
        x = next;
        if (std::abs(step) < 1e-17 * std::max(1.0, std::abs(x))) break;
    }
    return x;
}

struct NewtonResult {
    cplx root{};
    bool converged = false;
    int iterations = 0;
    double residual = 0.0;
};

// Damped Newton iteration on an analytic complex residual; the derivative is
// taken by central differencing with step 1e-7*max(1,|z|).
template <typename F, typename ResidualNorm>
NewtonResult complex_newton(F&& f, cplx seed, ResidualNorm&& scaled_abs, double tol,
                            int max_iter = 200) {
    NewtonResult res;
    cplx z = seed;
    double fz = scaled_abs(z);
    for (int it = 0; it < max_iter; ++it) {
        res.iterations = it + 1;
        if (fz < tol) {
            res.root = z;
            res.converged = true;
            res.residual = fz;
            return res;
        }
        double h = 1e-7 * std::max(1.0, std::abs(z));
        cplx d = (f(z + h) - f(z - h)) / (2.0 * h);
        if (d == cplx(0.0)) break;
        cplx step = f(z) / d;
        cplx znew = z - step;
        double fnew = scaled_abs(znew);
        int halvings = 0;
        while (fnew >= fz && halvings < 40) {
            step *= 0.5;
            znew = z - step;
            fnew = scaled_abs(znew);
            ++halvings;
        }
        if (fnew >= fz) break;  // no descent direction left
        z = znew;
        fz = fnew;
    }
    res.root = z;
    res.residual = fz;
    res.converged = fz < tol;
    return res;
}

}  // namespace pseudowell
