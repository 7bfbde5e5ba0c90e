#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdlib>
#include <exception>
#include <mutex>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

namespace pseudowell {

using cplx = std::complex<double>;

inline constexpr double pi = 3.14159265358979323846;

// ---------------------------------------------------------------------------
// Error types

struct ValidationError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

struct ConvergenceError : std::runtime_error {
    cplx last_iterate;
    ConvergenceError(const std::string& what, cplx last)
        : std::runtime_error(what), last_iterate(last) {}
};

struct DivergentIntegralError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct StaleStateError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct DegenerateSystemError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// ---------------------------------------------------------------------------
// Even trigonometric kernels.
//
// sincc(z) = sin(sqrt(z))/sqrt(z) and cosc(z) = cos(sqrt(z)) are entire
// functions of z, so evaluating them through z = (local wavenumber)^2 avoids
// any square-root branch choice. Near z = 0 the quotient is computed by
// series.

inline cplx sincc(cplx z) {
    if (std::abs(z) < 1e-2) {
        // 1 - z/6 + z^2/120 - z^3/5040 + z^4/362880, truncation < 1e-17
        cplx s = 1.0;
        s += z * (-1.0 / 6.0 + z * (1.0 / 120.0 + z * (-1.0 / 5040.0 + z / 362880.0)));
        return s;
    }
    cplx w = std::sqrt(z);
    return std::sin(w) / w;
}

inline cplx cosc(cplx z) {
    if (std::abs(z) < 1e-2) {
        cplx s = 1.0;
        s += z * (-1.0 / 2.0 + z * (1.0 / 24.0 + z * (-1.0 / 720.0 + z / 40320.0)));
        return s;
    }
    return std::cos(std::sqrt(z));
}

// ---------------------------------------------------------------------------
// Index-parallel loop. Each index writes only its own output slot, so the
// result is independent of the thread count and schedule. PSEUDOWELL_THREADS
// caps the worker count (default: hardware concurrency).

inline unsigned thread_cap() {
    if (const char* env = std::getenv("PSEUDOWELL_THREADS")) {
        long v = std::strtol(env, nullptr, 10);
        if (v >= 1) return static_cast<unsigned>(v);
    }
    unsigned hw = std::thread::hardware_concurrency();
    return hw == 0 ? 1 : hw;
}

template <typename Fn>
void parallel_for(std::size_t n, Fn&& fn) {
    unsigned workers = std::min<std::size_t>(thread_cap(), n);
    if (workers <= 1) {
        for (std::size_t i = 0; i < n; ++i) fn(i);
        return;
    }
    std::vector<std::thread> pool;
    std::exception_ptr first_error;
    std::mutex err_mutex;
    std::size_t chunk = (n + workers - 1) / workers;
    for (unsigned w = 0; w < workers; ++w) {
        std::size_t lo = w * chunk;
        std::size_t hi = std::min(n, lo + chunk);
        if (lo >= hi) break;
        pool.emplace_back([&, lo, hi] {
            try {
                for (std::size_t i = lo; i < hi; ++i) fn(i);
            } catch (...) {
                std::lock_guard<std::mutex> lock(err_mutex);
                if (!first_error) first_error = std::current_exception();
            }
        });
    }
    for (auto& t : pool) t.join();
    if (first_error) std::rethrow_exception(first_error);
}

}  // namespace pseudowell
