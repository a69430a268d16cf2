#pragma once

#include <complex>
#include <cstdint>
#include <functional>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace lattice {

using cplx = std::complex<double>;

// Compensated accumulator. Add values in a fixed order to get a
// reproducible sum independent of how work was chunked.
class KahanSum {
public:
    void add(double v) {
        double y = v - comp_;
        double t = sum_ + y;
        comp_ = (t - sum_) - y;
        sum_ = t;
    }
    double value() const { return sum_; }

private:
    double sum_ = 0.0;
    double comp_ = 0.0;
};

class KahanSumC {
public:
    void add(cplx v) {
        re_.add(v.real());
        im_.add(v.imag());
    }
    cplx value() const { return {re_.value(), im_.value()}; }

private:
    KahanSum re_;
    KahanSum im_;
};

// Deterministic RNG. Wraps a 64-bit SplitMix-style generator and derives
// doubles by explicit bit manipulation, so streams are identical across
// compilers and standard libraries.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : state_(seed) {}

    std::uint64_t next_u64() {
        state_ += 0x9e3779b97f4a7c15ULL;
        std::uint64_t z = state_;
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

    // Uniform in [0, 1).
    double next_double() {
        return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
    }

    // Uniform in [lo, hi).
    double uniform(double lo, double hi) {
        return lo + (hi - lo) * next_double();
    }

    // Uniform integer in [0, n).
    std::uint64_t next_below(std::uint64_t n) {
        return next_u64() % n;
    }

    cplx complex_in_box(double lo, double hi) {
        double re = uniform(lo, hi);
        double im = uniform(lo, hi);
        return {re, im};
    }

private:
    std::uint64_t state_;
};

// Adaptive Gauss-Kronrod (G7/K15) quadrature for a complex-valued function
// on a real segment. Subdivides until the local error estimate is below
// abs_tol, with a hard cap on subdivisions.
cplx integrate_gk(const std::function<cplx(double)>& f, double a, double b,
                  double abs_tol = 1e-11, int max_depth = 48);

// Scalar root finding: Newton iteration that falls back to bisection on a
// bracketing interval whenever a step leaves the bracket or stalls.
// f must be real-valued and continuous on [lo, hi] with f(lo)*f(hi) <= 0.
struct RootResult {
    double x = 0.0;
    double residual = 0.0;
    int iterations = 0;
    bool converged = false;
};
RootResult newton_bisect(const std::function<double(double)>& f,
                         const std::function<double(double)>& df, double lo,
                         double hi, double tol = 1e-12, int max_iter = 200);

// Dense linear algebra helpers sized for small systems.
// Solves A x = b in place via LDLt-free symmetric Cholesky with a small
// diagonal shift retry; returns false if the matrix stays non-positive.
bool cholesky_solve(std::vector<double> a, int n, std::vector<double> b,
                    std::vector<double>& x);

// Solves a general dense square system via partial-pivot LU.
// Returns false on (numerical) singularity.
bool lu_solve(std::vector<double> a, int n, std::vector<double> b,
              std::vector<double>& x);

// Levenberg-Marquardt over real parameters. residual_fn fills a vector of
// real residuals. Jacobians are central differences with the given step.
struct LmOptions {
    int max_iterations = 200;
    double fd_step = 1e-6;
    double initial_lambda = 1e-3;
    double tol_grad = 1e-14;
    double tol_step = 1e-15;
};
struct LmResult {
    std::vector<double> params;
    double final_cost = 0.0;  // 0.5 * sum of squared residuals
    double max_abs_residual = 0.0;
    int iterations = 0;
    bool converged = false;
};
LmResult levenberg_marquardt(
    const std::function<std::vector<double>(const std::vector<double>&)>& residual_fn,
    std::vector<double> initial, const LmOptions& opts = {});

// Multidimensional Newton for square systems, with a finite-difference
// Jacobian and a regularized retry when the Jacobian is singular.
struct NewtonResult {
    std::vector<double> x;
    double residual_norm = 0.0;
    int iterations = 0;
    bool converged = false;
    std::string failure;
};
NewtonResult newton_system(
    const std::function<std::vector<double>(const std::vector<double>&)>& f,
    std::vector<double> initial, double tol = 1e-10, int max_iter = 200);

// Runs fn(begin, end) over fixed-size chunks of [0, total). Chunk boundaries
// never depend on the thread count, so any per-chunk outputs can be combined
// in chunk order for reproducible results.
void parallel_chunks(std::size_t total, std::size_t chunk,
                     const std::function<void(std::size_t, std::size_t, std::size_t)>& fn,
                     int threads);

// Formats a double with enough digits to round-trip, producing identical
// bytes for identical values.
std::string format_double(double v);
std::string format_complex(cplx v);

}  // namespace lattice
