#include "lattice/numerics.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <thread>

namespace lattice {

namespace {

// 15-point Kronrod nodes on [-1, 1] with the embedded 7-point Gauss rule.
constexpr double kKronrodNodes[15] = {
    -0.991455371120812639206854697526329,
    -0.949107912342758524526189684047851,
    -0.864864423359769072789712788640926,
    -0.741531185599394439863864773280788,
    -0.586087235467691130294144838258730,
    -0.405845151377397166906606412076961,
    -0.207784955007898467600689403773245,
    0.0,
    0.207784955007898467600689403773245,
    0.405845151377397166906606412076961,
    0.586087235467691130294144838258730,
    0.741531185599394439863864773280788,
    0.864864423359769072789712788640926,
    0.949107912342758524526189684047851,
    0.991455371120812639206854697526329};

constexpr double kKronrodWeights[15] = {
    0.022935322010529224963732008058970,
    0.063092092629978553290700663189204,
    0.104790010322250183839876322541518,
    0.140653259715525918745189590510238,
    0.169004726639267902826583426598550,
    0.190350578064785409913256402421014,
    0.204432940075298892414161999234649,
    0.209482141084727828012999174891714,
    0.204432940075298892414161999234649,
    0.190350578064785409913256402421014,
    0.169004726639267902826583426598550,
    0.140653259715525918745189590510238,
    0.104790010322250183839876322541518,
    0.063092092629978553290700663189204,
    0.022935322010529224963732008058970};

constexpr double kGaussWeights[7] = {
    0.129484966168869693270611432679082,
    0.279705391489276667901467771423780,
    0.381830050505118944950369775488975,
    0.417959183673469387755102040816327,
    0.381830050505118944950369775488975,
    0.279705391489276667901467771423780,
    0.129484966168869693270611432679082};

struct PanelResult {
    cplx value;
    double error;
};

PanelResult gk_panel(const std::function<cplx(double)>& f, double a, double b) {
    double half = 0.5 * (b - a);
    double mid = 0.5 * (a + b);
    cplx kron{0.0, 0.0};
    cplx gauss{0.0, 0.0};
    for (int i = 0; i < 15; ++i) {
        cplx fv = f(mid + half * kKronrodNodes[i]);
        kron += kKronrodWeights[i] * fv;
        if (i % 2 == 1) gauss += kGaussWeights[i / 2] * fv;
    }
    kron *= half;
    gauss *= half;
    double err = std::abs(kron - gauss);
    // Standard magnified estimate: the raw difference underestimates the
    // true error of the Kronrod value.
    err = std::pow(200.0 * err, 1.5);
    if (!std::isfinite(err)) err = std::abs(kron - gauss);
    return {kron, std::max(err, std::abs(kron - gauss))};
}

void gk_adaptive(const std::function<cplx(double)>& f, double a, double b,
                 double abs_tol, int depth, int max_depth, KahanSumC& acc) {
    PanelResult pr = gk_panel(f, a, b);
    if (pr.error <= abs_tol || depth >= max_depth) {
        acc.add(pr.value);
        return;
    }
    double mid = 0.5 * (a + b);
    gk_adaptive(f, a, mid, abs_tol * 0.5, depth + 1, max_depth, acc);
    gk_adaptive(f, mid, b, abs_tol * 0.5, depth + 1, max_depth, acc);
}

}  // namespace

cplx integrate_gk(const std::function<cplx(double)>& f, double a, double b,
                  double abs_tol, int max_depth) {
    if (a == b) return {0.0, 0.0};
    KahanSumC acc;
    gk_adaptive(f, a, b, abs_tol, 0, max_depth, acc);
    return acc.value();
}

RootResult newton_bisect(const std::function<double(double)>& f,
                         const std::function<double(double)>& df, double lo,
                         double hi, double tol, int max_iter) {
    RootResult res;
    double flo = f(lo);
    double fhi = f(hi);
    if (flo == 0.0) {
        res = {lo, 0.0, 0, true};
        return res;
    }
    if (fhi == 0.0) {
        res = {hi, 0.0, 0, true};
        return res;
    }
    if (flo * fhi > 0.0) {
        res.converged = false;
        res.x = std::abs(flo) < std::abs(fhi) ? lo : hi;
        res.residual = std::min(std::abs(flo), std::abs(fhi));
        return res;
    }
    double x = 0.5 * (lo + hi);
    for (int it = 0; it < max_iter; ++it) {
        double fx = f(x);
        res.iterations = it + 1;
        if (std::abs(fx) < tol) {
            res.x = x;
            res.residual = std::abs(fx);
            res.converged = true;
            return res;
        }
        if (fx * flo < 0.0) {
            hi = x;
        } else {
            lo = x;
            flo = fx;
        }
        double dfx = df(x);
        double next = x - fx / dfx;
        if (!(dfx != 0.0) || !std::isfinite(next) || next <= lo || next >= hi) {
            next = 0.5 * (lo + hi);
        }
        x = next;
    }
    res.x = x;
    res.residual = std::abs(f(x));
    res.converged = res.residual < tol;
    return res;
}

bool cholesky_solve(std::vector<double> a, int n, std::vector<double> b,
                    std::vector<double>& x) {
    auto attempt = [&](std::vector<double> m, std::vector<double> rhs) -> bool {
        // In-place lower Cholesky.
        for (int j = 0; j < n; ++j) {
            double d = m[j * n + j];
            for (int k = 0; k < j; ++k) d -= m[j * n + k] * m[j * n + k];
            if (!(d > 0.0)) return false;
            d = std::sqrt(d);
            m[j * n + j] = d;
            for (int i = j + 1; i < n; ++i) {
                double s = m[i * n + j];
                for (int k = 0; k < j; ++k) s -= m[i * n + k] * m[j * n + k];
                m[i * n + j] = s / d;
            }
        }
        for (int i = 0; i < n; ++i) {
            double s = rhs[i];
            for (int k = 0; k < i; ++k) s -= m[i * n + k] * rhs[k];
            rhs[i] = s / m[i * n + i];
        }
        for (int i = n - 1; i >= 0; --i) {
            double s = rhs[i];
            for (int k = i + 1; k < n; ++k) s -= m[k * n + i] * rhs[k];
            rhs[i] = s / m[i * n + i];
        }
        x = rhs;
        return true;
    };
    if (attempt(a, b)) return true;
    double scale = 0.0;
    for (int i = 0; i < n; ++i) scale = std::max(scale, std::abs(a[i * n + i]));
    double shift = (scale > 0.0 ? scale : 1.0) * 1e-12;
    for (int round = 0; round < 8; ++round) {
        std::vector<double> shifted = a;
        for (int i = 0; i < n; ++i) shifted[i * n + i] += shift;
        if (attempt(shifted, b)) return true;
        shift *= 100.0;
    }
    return false;
}

bool lu_solve(std::vector<double> a, int n, std::vector<double> b,
              std::vector<double>& x) {
    std::vector<int> piv(n);
    for (int i = 0; i < n; ++i) piv[i] = i;
    for (int col = 0; col < n; ++col) {
        int best = col;
        double best_abs = std::abs(a[piv[col] * n + col]);
        for (int r = col + 1; r < n; ++r) {
            double v = std::abs(a[piv[r] * n + col]);
            if (v > best_abs) {
                best_abs = v;
                best = r;
            }
        }
        if (best_abs < 1e-300) return false;
        std::swap(piv[col], piv[best]);
        double pivval = a[piv[col] * n + col];
        for (int r = col + 1; r < n; ++r) {
            double factor = a[piv[r] * n + col] / pivval;
            a[piv[r] * n + col] = factor;
            for (int c = col + 1; c < n; ++c) {
                a[piv[r] * n + c] -= factor * a[piv[col] * n + c];
            }
        }
    }
    std::vector<double> y(n);
    for (int i = 0; i < n; ++i) {
        double s = b[piv[i]];
        for (int k = 0; k < i; ++k) s -= a[piv[i] * n + k] * y[k];
        y[i] = s;
    }
    x.assign(n, 0.0);
    for (int i = n - 1; i >= 0; --i) {
        double s = y[i];
        for (int k = i + 1; k < n; ++k) s -= a[piv[i] * n + k] * x[k];
        x[i] = s / a[piv[i] * n + i];
    }
    return true;
}

namespace {

double cost_of(const std::vector<double>& r) {
    KahanSum s;
    for (double v : r) s.add(v * v);
    return 0.5 * s.value();
}

double max_abs(const std::vector<double>& r) {
    double m = 0.0;
    for (double v : r) m = std::max(m, std::abs(v));
    return m;
}

}  // namespace

LmResult levenberg_marquardt(
    const std::function<std::vector<double>(const std::vector<double>&)>& residual_fn,
    std::vector<double> initial, const LmOptions& opts) {
    LmResult out;
    std::vector<double> params = std::move(initial);
    std::vector<double> r = residual_fn(params);
    double cost = cost_of(r);
    double lambda = opts.initial_lambda;
    const int n = static_cast<int>(params.size());
    const int m = static_cast<int>(r.size());

    for (int it = 0; it < opts.max_iterations; ++it) {
        out.iterations = it + 1;
        // Central-difference Jacobian, column per parameter.
        std::vector<double> jac(static_cast<std::size_t>(m) * n);
        for (int j = 0; j < n; ++j) {
            double saved = params[j];
            double h = opts.fd_step * std::max(1.0, std::abs(saved));
            params[j] = saved + h;
            std::vector<double> rp = residual_fn(params);
            params[j] = saved - h;
            std::vector<double> rm = residual_fn(params);
            params[j] = saved;
            double inv = 1.0 / (2.0 * h);
            for (int i = 0; i < m; ++i) {
                jac[static_cast<std::size_t>(i) * n + j] = (rp[i] - rm[i]) * inv;
            }
        }
        std::vector<double> jtj(static_cast<std::size_t>(n) * n, 0.0);
        std::vector<double> jtr(n, 0.0);
        for (int i = 0; i < m; ++i) {
            const double* row = &jac[static_cast<std::size_t>(i) * n];
            for (int a = 0; a < n; ++a) {
                jtr[a] += row[a] * r[i];
                for (int b = a; b < n; ++b) jtj[static_cast<std::size_t>(a) * n + b] += row[a] * row[b];
            }
        }
        for (int a = 0; a < n; ++a)
            for (int b = 0; b < a; ++b)
                jtj[static_cast<std::size_t>(a) * n + b] = jtj[static_cast<std::size_t>(b) * n + a];

        double grad_inf = max_abs(jtr);
        if (grad_inf < opts.tol_grad) {
            out.converged = true;
            break;
        }

        bool stepped = false;
        for (int tries = 0; tries < 24; ++tries) {
            std::vector<double> damped = jtj;
            for (int a = 0; a < n; ++a) {
                double d = jtj[static_cast<std::size_t>(a) * n + a];
                damped[static_cast<std::size_t>(a) * n + a] = d + lambda * std::max(d, 1e-12);
            }
            std::vector<double> rhs(n);
            for (int a = 0; a < n; ++a) rhs[a] = -jtr[a];
            std::vector<double> step;
            if (!cholesky_solve(damped, n, rhs, step)) {
                lambda *= 10.0;
                continue;
            }
            std::vector<double> trial = params;
            double step_norm = 0.0;
            for (int a = 0; a < n; ++a) {
                trial[a] += step[a];
                step_norm = std::max(step_norm, std::abs(step[a]));
            }
            std::vector<double> rt = residual_fn(trial);
            double trial_cost = cost_of(rt);
            if (trial_cost < cost) {
                params = std::move(trial);
                r = std::move(rt);
                cost = trial_cost;
                lambda = std::max(lambda * 0.3, 1e-14);
                stepped = true;
                if (step_norm < opts.tol_step) out.converged = true;
                break;
            }
            lambda *= 10.0;
            if (lambda > 1e14) break;
        }
        if (!stepped) {
            out.converged = out.converged || max_abs(r) < 1e-12;
            break;
        }
        if (out.converged) break;
    }
    out.params = std::move(params);
    out.final_cost = cost;
    out.max_abs_residual = max_abs(r);
    return out;
}

NewtonResult newton_system(
    const std::function<std::vector<double>(const std::vector<double>&)>& f,
    std::vector<double> initial, double tol, int max_iter) {
    NewtonResult out;
    std::vector<double> x = std::move(initial);
    const int n = static_cast<int>(x.size());
    std::vector<double> fx = f(x);
    if (static_cast<int>(fx.size()) != n) {
        out.failure = "system is not square";
        out.x = x;
        return out;
    }
    for (int it = 0; it < max_iter; ++it) {
        out.iterations = it + 1;
        double norm = max_abs(fx);
        out.residual_norm = norm;
        if (norm < tol) {
            out.converged = true;
            out.x = x;
            return out;
        }
        std::vector<double> jac(static_cast<std::size_t>(n) * n);
        for (int j = 0; j < n; ++j) {
            double saved = x[j];
            double h = 1e-7 * std::max(1.0, std::abs(saved));
            x[j] = saved + h;
            std::vector<double> fp = f(x);
            x[j] = saved - h;
            std::vector<double> fm = f(x);
            x[j] = saved;
            double inv = 1.0 / (2.0 * h);
            for (int i = 0; i < n; ++i) jac[static_cast<std::size_t>(i) * n + j] = (fp[i] - fm[i]) * inv;
        }
        std::vector<double> rhs(n);
        for (int i = 0; i < n; ++i) rhs[i] = -fx[i];
        std::vector<double> step;
        if (!lu_solve(jac, n, rhs, step)) {
            // Regularized retry: solve the damped normal equations instead.
            std::vector<double> jtj(static_cast<std::size_t>(n) * n, 0.0);
            std::vector<double> jtr(n, 0.0);
            for (int i = 0; i < n; ++i) {
                for (int a = 0; a < n; ++a) {
                    jtr[a] += jac[static_cast<std::size_t>(i) * n + a] * fx[i];
                    for (int b = 0; b < n; ++b) {
                        jtj[static_cast<std::size_t>(a) * n + b] +=
                            jac[static_cast<std::size_t>(i) * n + a] * jac[static_cast<std::size_t>(i) * n + b];
                    }
                }
            }
            double scale = 0.0;
            for (int a = 0; a < n; ++a) scale = std::max(scale, jtj[static_cast<std::size_t>(a) * n + a]);
            for (int a = 0; a < n; ++a) jtj[static_cast<std::size_t>(a) * n + a] += 1e-8 * std::max(scale, 1.0);
            for (int a = 0; a < n; ++a) jtr[a] = -jtr[a];
            if (!cholesky_solve(jtj, n, jtr, step)) {
                out.failure = "singular Jacobian; regularized retry failed";
                out.x = x;
                return out;
            }
        }
        // Backtracking line search on the residual norm.
        double t = 1.0;
        bool accepted = false;
        for (int ls = 0; ls < 30; ++ls) {
            std::vector<double> trial = x;
            for (int a = 0; a < n; ++a) trial[a] += t * step[a];
            std::vector<double> ft = f(trial);
            if (max_abs(ft) < norm) {
                x = std::move(trial);
                fx = std::move(ft);
                accepted = true;
                break;
            }
            t *= 0.5;
        }
        if (!accepted) {
            out.failure = "stalled: no descent along Newton direction";
            out.x = x;
            return out;
        }
    }
    out.residual_norm = max_abs(fx);
    out.converged = out.residual_norm < tol;
    out.x = x;
    if (!out.converged && out.failure.empty()) out.failure = "iteration limit reached";
    return out;
}

void parallel_chunks(std::size_t total, std::size_t chunk,
                     const std::function<void(std::size_t, std::size_t, std::size_t)>& fn,
                     int threads) {
    if (total == 0) return;
    if (chunk == 0) chunk = 1;
    std::size_t nchunks = (total + chunk - 1) / chunk;
    if (threads <= 1 || nchunks <= 1) {
        for (std::size_t c = 0; c < nchunks; ++c) {
            std::size_t lo = c * chunk;
            std::size_t hi = std::min(total, lo + chunk);
            fn(c, lo, hi);
        }
        return;
    }
    std::size_t nthreads = std::min<std::size_t>(threads, nchunks);
    std::vector<std::thread> pool;
    pool.reserve(nthreads);
    for (std::size_t t = 0; t < nthreads; ++t) {
        pool.emplace_back([&, t]() {
            for (std::size_t c = t; c < nchunks; c += nthreads) {
                std::size_t lo = c * chunk;
                std::size_t hi = std::min(total, lo + chunk);
                fn(c, lo, hi);
            }
        });
    }
    for (auto& th : pool) th.join();
}

std::string format_double(double v) {
    if (v == 0.0) v = 0.0;  // normalize negative zero
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

std::string format_complex(cplx v) {
    return format_double(v.real()) + (v.imag() < 0 ? "" : "+") + format_double(v.imag()) + "i";
}

}  // namespace lattice
