#include "lattice/quad.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <stdexcept>

namespace lattice {

namespace {

constexpr double kPoleTol = 1e-12;
constexpr double kSolveTol = 5e-13;
constexpr std::uint64_t kSolveSeed = 20260817ULL;

bool is_fourleg(const QuadFamily& fam) {
    switch (fam.kind) {
        case QuadFamily::Kind::q1a:
        case QuadFamily::Kind::q1h:
        case QuadFamily::Kind::q1e:
            return true;
        default:
            return false;
    }
}

int corner_count(const QuadFamily& fam, const VectorVariable& x, const VectorVariable& u,
                 const VectorVariable& y, const VectorVariable& v) {
    std::size_t n = x.size();
    if (u.size() != n || y.size() != n || v.size() != n) {
        throw std::invalid_argument("corner variables must share a component count");
    }
    if (n == 0) {
        throw std::invalid_argument("corner variables must carry at least one component");
    }
    (void)fam;
    return static_cast<int>(n);
}

void check_pole(cplx c, cplx wk, const char* slot, std::size_t i, std::size_t k) {
    if (std::abs(c - wk) < kPoleTol) {
        throw std::domain_error("pole collision: " + std::string(slot) + "[" +
                                std::to_string(i) + "] meets w[" + std::to_string(k) +
                                "] at " + format_complex(wk));
    }
}

// Leg coefficients of the four legs around the square, in slot order
// x, u, v, y. The parameter chain alternates between the two edges.
struct LegSet {
    cplx fx, fu, fv, fy;
};

LegSet leg_set(const QuadFamily& fam, const EdgeParam& alpha, const EdgeParam& beta) {
    return {quad_leg_f(fam, alpha.a1, beta.a1), quad_leg_f(fam, beta.a1, alpha.a2),
            quad_leg_f(fam, alpha.a2, beta.a2), quad_leg_f(fam, beta.a2, alpha.a1)};
}

std::vector<cplx> eval_fourleg(const QuadFamily& fam, const VectorVariable& x,
                               const VectorVariable& u, const VectorVariable& y,
                               const VectorVariable& v, const EdgeParam& alpha,
                               const EdgeParam& beta, const FaceParam& w, bool affine) {
    std::size_t n = x.size();
    if (w.components.size() != n) {
        throw std::invalid_argument("face parameter must carry one component per equation");
    }
    const LegSet legs = leg_set(fam, alpha, beta);
    const cplx h = quad_h_direct(fam, alpha, beta);
    std::vector<cplx> out(n);
    for (std::size_t k = 0; k < n; ++k) {
        const cplx wk = w.components[k];
        if (!affine) {
            for (std::size_t i = 0; i < n; ++i) {
                check_pole(x[i], wk, "x", i, k);
                check_pole(u[i], wk, "u", i, k);
                check_pole(y[i], wk, "y", i, k);
                check_pole(v[i], wk, "v", i, k);
            }
            KahanSumC acc;
            for (std::size_t i = 0; i < n; ++i) {
                acc.add(legs.fx / (x[i] - wk));
                acc.add(legs.fu / (u[i] - wk));
                acc.add(legs.fv / (v[i] - wk));
                acc.add(legs.fy / (y[i] - wk));
            }
            acc.add(static_cast<double>(n) * h);
            out[k] = acc.value();
            continue;
        }
        // Pole-cleared polynomial: multiply the leg sum by the full product
        // of (w_k - corner) factors and expand each leg's cleared numerator.
        cplx big = 0.0;
        cplx full = 1.0;
        for (std::size_t i = 0; i < n; ++i) {
            full *= (wk - x[i]) * (wk - u[i]) * (wk - y[i]) * (wk - v[i]);
        }
        for (std::size_t i = 0; i < n; ++i) {
            cplx rest = 1.0;
            for (std::size_t j = 0; j < n; ++j) {
                if (j == i) continue;
                rest *= (wk - x[j]) * (wk - u[j]) * (wk - y[j]) * (wk - v[j]);
            }
            cplx bracket = (legs.fx * (wk - v[i]) + legs.fv * (wk - x[i])) * (wk - u[i]) *
                               (wk - y[i]) +
                           (legs.fu * (wk - y[i]) + legs.fy * (wk - u[i])) * (wk - x[i]) *
                               (wk - v[i]);
            big += bracket * rest;
        }
        out[k] = -big + static_cast<double>(n) * h * full;
    }
    return out;
}

std::vector<cplx> eval_q3m(const VectorVariable& x, const VectorVariable& u,
                           const VectorVariable& y, const VectorVariable& v,
                           const EdgeParam& alpha, const EdgeParam& beta, const FaceParam& w) {
    std::size_t n = x.size();
    if (w.components.size() != n) {
        throw std::invalid_argument("face parameter must carry one component per corner component");
    }
    const cplx da = alpha.a1 - beta.a1;
    const cplx db = alpha.a2 - beta.a2;
    const cplx dc = alpha.a2 - beta.a1;
    const cplx dd = alpha.a1 - beta.a2;
    auto half = [&](cplx w1, cplx w2) {
        cplx p = 1.0;
        for (std::size_t i = 0; i < n; ++i) {
            p *= (x[i] + w1 * da) * (v[i] + w1 * db) * (u[i] + w2 * dc) * (y[i] + w2 * dd);
        }
        return p;
    };
    std::vector<cplx> out;
    out.reserve(n > 0 ? n - 1 : 0);
    for (std::size_t k = 0; k + 1 < n; ++k) {
        const cplx w1 = w.components[k];
        const cplx w2 = w.components[k + 1];
        out.push_back(half(w1, w2) - half(w2, w1));
    }
    return out;
}

std::vector<cplx> eval_scalar_linear(const VectorVariable& x, const VectorVariable& u,
                                     const VectorVariable& y, const VectorVariable& v,
                                     const EdgeParam& alpha, const EdgeParam& beta) {
    const cplx cx = alpha.a1 - beta.a1;
    const cplx cu = beta.a1 - alpha.a2;
    const cplx cv = alpha.a2 - beta.a2;
    const cplx cy = beta.a2 - alpha.a1;
    std::vector<cplx> out(x.size());
    for (std::size_t k = 0; k < x.size(); ++k) {
        out[k] = cx * x[k] + cu * u[k] + cv * v[k] + cy * y[k];
    }
    return out;
}

cplx slot_leg_f(const QuadFamily& fam, CornerSlot slot, const EdgeParam& alpha,
                const EdgeParam& beta) {
    const LegSet legs = leg_set(fam, alpha, beta);
    switch (slot) {
        case CornerSlot::x: return legs.fx;
        case CornerSlot::u: return legs.fu;
        case CornerSlot::v: return legs.fv;
        case CornerSlot::y: return legs.fy;
    }
    throw std::invalid_argument("unknown corner slot");
}

cplx slot_linear_coeff(CornerSlot slot, const EdgeParam& alpha, const EdgeParam& beta) {
    switch (slot) {
        case CornerSlot::x: return alpha.a1 - beta.a1;
        case CornerSlot::u: return beta.a1 - alpha.a2;
        case CornerSlot::v: return alpha.a2 - beta.a2;
        case CornerSlot::y: return beta.a2 - alpha.a1;
    }
    throw std::invalid_argument("unknown corner slot");
}

struct SlotView {
    const VectorVariable* x;
    const VectorVariable* u;
    const VectorVariable* y;
    const VectorVariable* v;

    void set(CornerSlot slot, const VectorVariable* value) {
        switch (slot) {
            case CornerSlot::x: x = value; return;
            case CornerSlot::u: u = value; return;
            case CornerSlot::y: y = value; return;
            case CornerSlot::v: v = value; return;
        }
    }
    const VectorVariable& get(CornerSlot slot) const {
        switch (slot) {
            case CornerSlot::x: return *x;
            case CornerSlot::u: return *u;
            case CornerSlot::y: return *y;
            case CornerSlot::v: return *v;
        }
        throw std::invalid_argument("unknown corner slot");
    }
};

std::array<CornerSlot, 3> other_slots(CornerSlot slot) {
    std::array<CornerSlot, 3> out{};
    std::size_t at = 0;
    for (CornerSlot s : {CornerSlot::x, CornerSlot::u, CornerSlot::y, CornerSlot::v}) {
        if (s != slot) out[at++] = s;
    }
    return out;
}

VectorVariable mean_of_three(const SlotView& view, CornerSlot unknown, std::size_t n) {
    const auto rest = other_slots(unknown);
    VectorVariable mean(n, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
        cplx s = 0.0;
        for (CornerSlot slot : rest) s += view.get(slot)[i];
        mean[i] = s / 3.0;
    }
    return mean;
}

std::vector<double> pack_complex(const VectorVariable& v) {
    std::vector<double> out;
    out.reserve(2 * v.size());
    for (cplx c : v) {
        out.push_back(c.real());
        out.push_back(c.imag());
    }
    return out;
}

VectorVariable unpack_complex(const std::vector<double>& v) {
    VectorVariable out(v.size() / 2);
    for (std::size_t i = 0; i < out.size(); ++i) {
        out[i] = {v[2 * i], v[2 * i + 1]};
    }
    return out;
}

}  // namespace

cplx jacobi_sn(cplx z, double m) {
    if (!(m >= 0.0 && m <= 1.0)) {
        throw std::domain_error("jacobi_sn needs the parameter m in [0, 1], got m = " +
                                format_double(m));
    }
    if (m < 1e-15) return std::sin(z);
    if (m > 1.0 - 1e-15) return std::tanh(z);
    double k = std::sqrt(m);
    std::vector<double> chain;
    cplx zr = z;
    for (int step = 0; step < 64 && k > 1e-16; ++step) {
        const double kp = std::sqrt((1.0 - k) * (1.0 + k));
        const double k1 = (1.0 - kp) / (1.0 + kp);
        chain.push_back(k1);
        zr /= 1.0 + k1;
        k = k1;
    }
    cplx s = std::sin(zr);
    for (auto it = chain.rbegin(); it != chain.rend(); ++it) {
        const double k1 = *it;
        s = (1.0 + k1) * s / (1.0 + k1 * s * s);
    }
    return s;
}

QuadFamily QuadFamily::q1a(int delta) {
    QuadFamily fam;
    fam.kind = Kind::q1a;
    fam.delta = delta;
    return fam;
}

QuadFamily QuadFamily::q1h(int delta) {
    QuadFamily fam;
    fam.kind = Kind::q1h;
    fam.delta = delta;
    return fam;
}

QuadFamily QuadFamily::q1e(double m) {
    QuadFamily fam;
    fam.kind = Kind::q1e;
    fam.m = m;
    return fam;
}

QuadFamily QuadFamily::q3m() {
    QuadFamily fam;
    fam.kind = Kind::q3m;
    return fam;
}

QuadFamily QuadFamily::scalar_linear() {
    QuadFamily fam;
    fam.kind = Kind::scalar_linear;
    return fam;
}

std::string quad_family_name(const QuadFamily& fam) {
    switch (fam.kind) {
        case QuadFamily::Kind::q1a: return "q1a";
        case QuadFamily::Kind::q1h: return "q1h";
        case QuadFamily::Kind::q1e: return "q1e";
        case QuadFamily::Kind::q3m: return "q3m";
        case QuadFamily::Kind::scalar_linear: return "scalar-linear";
    }
    throw std::invalid_argument("unknown quad family");
}

QuadFamily quad_family_from_name(const std::string& name, int delta, double m) {
    if (name == "q1a") return QuadFamily::q1a(delta);
    if (name == "q1h") return QuadFamily::q1h(delta);
    if (name == "q1e") return QuadFamily::q1e(m);
    if (name == "q3m") return QuadFamily::q3m();
    if (name == "scalar-linear") return QuadFamily::scalar_linear();
    throw std::invalid_argument("unknown quad family \"" + name + "\"");
}

cplx quad_leg_f(const QuadFamily& fam, cplx alpha, cplx beta) {
    switch (fam.kind) {
        case QuadFamily::Kind::q1a:
            return alpha - beta;
        case QuadFamily::Kind::q1h:
            return std::sinh(2.0 * (alpha - beta));
        case QuadFamily::Kind::q1e: {
            const cplx sa = jacobi_sn(alpha, fam.m);
            const cplx sb = jacobi_sn(beta, fam.m);
            return sa * sa - sb * sb;
        }
        default:
            throw std::invalid_argument("leg coefficients are defined for the four-leg families");
    }
}

cplx quad_leg_g(const QuadFamily& fam, cplx alpha, cplx beta) {
    switch (fam.kind) {
        case QuadFamily::Kind::q1a:
            return static_cast<double>(fam.delta) * alpha * beta * (alpha - beta);
        case QuadFamily::Kind::q1h:
            return static_cast<double>(fam.delta) * std::sinh(alpha) * std::sinh(beta) *
                   std::sinh(alpha - beta);
        case QuadFamily::Kind::q1e: {
            const cplx sa = jacobi_sn(alpha, fam.m);
            const cplx sb = jacobi_sn(beta, fam.m);
            const cplx sd = jacobi_sn(alpha - beta, fam.m);
            return sa * sb * sd * (1.0 - fam.m * sa * sa * sb * sb);
        }
        default:
            throw std::invalid_argument("leg coefficients are defined for the four-leg families");
    }
}

cplx quad_h_direct(const QuadFamily& fam, const EdgeParam& alpha, const EdgeParam& beta) {
    return quad_leg_g(fam, alpha.a1, beta.a1) + quad_leg_g(fam, beta.a1, alpha.a2) +
           quad_leg_g(fam, alpha.a2, beta.a2) + quad_leg_g(fam, beta.a2, alpha.a1);
}

cplx quad_h_factorized(const QuadFamily& fam, const EdgeParam& alpha, const EdgeParam& beta) {
    const cplx a1 = alpha.a1, a2 = alpha.a2, b1 = beta.a1, b2 = beta.a2;
    switch (fam.kind) {
        case QuadFamily::Kind::q1a:
            return static_cast<double>(fam.delta) * (a1 - a2) * (b1 - b2) * (a1 + a2 - b1 - b2);
        case QuadFamily::Kind::q1h:
            return static_cast<double>(fam.delta) * std::sinh(a1 - a2) * std::sinh(b1 - b2) *
                   std::sinh(a1 + a2 - b1 - b2);
        case QuadFamily::Kind::q1e: {
            const double m = fam.m;
            const cplx sa1 = jacobi_sn(a1, m);
            const cplx sa2 = jacobi_sn(a2, m);
            const cplx sb1 = jacobi_sn(b1, m);
            const cplx sb2 = jacobi_sn(b2, m);
            const cplx sas = jacobi_sn(a1 + a2, m);
            const cplx sbs = jacobi_sn(b1 + b2, m);
            const cplx sad = jacobi_sn(a1 - a2, m);
            const cplx sbd = jacobi_sn(b1 - b2, m);
            const cplx scr = jacobi_sn(a1 + a2 - b1 - b2, m);
            const cplx pa = sa1 * sa2;
            const cplx pb = sb1 * sb2;
            const cplx ps = sas * sbs;
            cplx main = sad * sbd * scr * (1.0 - m * pa * pa) * (1.0 - m * pb * pb) *
                        (1.0 - m * ps * ps);
            cplx corr = m * (sa1 * sa1 - sa2 * sa2) * (sb1 * sb1 - sb2 * sb2) *
                        (pa * sas - pb * sbs);
            return main + corr;
        }
        default:
            throw std::invalid_argument("the factorized constant is defined for the four-leg families");
    }
}

std::vector<cplx> quad_eval(const QuadFamily& fam, const VectorVariable& x,
                            const VectorVariable& u, const VectorVariable& y,
                            const VectorVariable& v, const EdgeParam& alpha,
                            const EdgeParam& beta, const FaceParam& w, QuadForm form) {
    corner_count(fam, x, u, y, v);
    switch (fam.kind) {
        case QuadFamily::Kind::q3m:
            return eval_q3m(x, u, y, v, alpha, beta, w);
        case QuadFamily::Kind::scalar_linear:
            return eval_scalar_linear(x, u, y, v, alpha, beta);
        default:
            return eval_fourleg(fam, x, u, y, v, alpha, beta, w, form == QuadForm::affine);
    }
}

std::string corner_slot_name(CornerSlot slot) {
    switch (slot) {
        case CornerSlot::x: return "x";
        case CornerSlot::u: return "u";
        case CornerSlot::y: return "y";
        case CornerSlot::v: return "v";
    }
    throw std::invalid_argument("unknown corner slot");
}

VectorVariable solve_corner(const QuadFamily& fam, CornerSlot unknown,
                            const VectorVariable& x, const VectorVariable& u,
                            const VectorVariable& y, const VectorVariable& v,
                            const EdgeParam& alpha, const EdgeParam& beta,
                            const FaceParam& w, const VectorVariable& initial) {
    SlotView view{&x, &u, &y, &v};
    const auto rest = other_slots(unknown);
    const std::size_t n = view.get(rest[0]).size();
    for (CornerSlot slot : rest) {
        if (view.get(slot).size() != n) {
            throw std::invalid_argument("corner variables must share a component count");
        }
    }
    if (n == 0) {
        throw std::invalid_argument("corner variables must carry at least one component");
    }

    if (fam.kind == QuadFamily::Kind::scalar_linear) {
        const cplx coeff = slot_linear_coeff(unknown, alpha, beta);
        if (std::abs(coeff) < 1e-14) {
            throw std::runtime_error("corner solve is degenerate: the " +
                                     corner_slot_name(unknown) + " coefficient vanishes");
        }
        VectorVariable zero(n, 0.0);
        view.set(unknown, &zero);
        const auto base = eval_scalar_linear(*view.x, *view.u, *view.y, *view.v, alpha, beta);
        VectorVariable out(n);
        for (std::size_t k = 0; k < n; ++k) out[k] = -base[k] / coeff;
        return out;
    }

    if (is_fourleg(fam) && n == 1) {
        if (w.components.size() != 1) {
            throw std::invalid_argument("face parameter must carry one component per equation");
        }
        const cplx wk = w.components[0];
        const cplx fs = slot_leg_f(fam, unknown, alpha, beta);
        KahanSumC others;
        others.add(quad_h_direct(fam, alpha, beta));
        for (CornerSlot slot : rest) {
            const cplx c = view.get(slot)[0];
            check_pole(c, wk, corner_slot_name(slot).c_str(), 0, 0);
            others.add(slot_leg_f(fam, slot, alpha, beta) / (c - wk));
        }
        const cplx denom = others.value();
        if (std::abs(denom) < 1e-14) {
            throw std::runtime_error(
                "corner solve is singular: the remaining legs sum to zero");
        }
        return {wk - fs / denom};
    }

    const bool q3m = fam.kind == QuadFamily::Kind::q3m;
    if (q3m && n == 1) {
        return {cplx(1.0, 0.0)};
    }
    const std::size_t free_n = q3m ? n - 1 : n;

    // Newton over the free components, packed as interleaved re/im pairs.
    auto build_trial = [&](const std::vector<double>& packed) {
        VectorVariable trial = unpack_complex(packed);
        if (q3m) {
            cplx prod = 1.0;
            for (cplx c : trial) prod *= c;
            if (std::abs(prod) < 1e-14) {
                throw std::runtime_error("unit-product completion hit a zero component");
            }
            trial.push_back(1.0 / prod);
        }
        return trial;
    };
    auto residual_fn = [&](const std::vector<double>& packed) {
        std::vector<double> out(2 * free_n, 1e8);
        try {
            VectorVariable trial = build_trial(packed);
            SlotView local = view;
            local.set(unknown, &trial);
            const auto r = quad_eval(fam, *local.x, *local.u, *local.y, *local.v, alpha,
                                     beta, w, QuadForm::fourleg);
            for (std::size_t k = 0; k < r.size(); ++k) {
                out[2 * k] = r[k].real();
                out[2 * k + 1] = r[k].imag();
            }
        } catch (const std::exception&) {
            // keep the barrier values; the line search backs away
        }
        return out;
    };

    VectorVariable mean = initial.empty() ? mean_of_three(view, unknown, n) : initial;
    if (mean.size() < free_n) {
        throw std::invalid_argument("initial guess must carry the unknown's components");
    }
    mean.resize(free_n);

    double last_residual = 0.0;
    for (int attempt = 0; attempt <= 8; ++attempt) {
        VectorVariable start = mean;
        if (attempt > 0) {
            Rng rng(kSolveSeed + static_cast<std::uint64_t>(attempt));
            for (cplx& c : start) {
                c += 0.35 * (1.0 + std::abs(c)) * rng.complex_in_box(-1.0, 1.0);
            }
        }
        const auto result = newton_system(residual_fn, pack_complex(start), kSolveTol, 120);
        last_residual = result.residual_norm;
        if (result.converged) {
            return build_trial(result.x);
        }
    }
    throw std::runtime_error("corner solve failed after 9 starts; last residual " +
                             format_double(last_residual));
}

double relative_deviation(cplx a, cplx b) {
    return std::abs(a - b) / (1.0 + std::max(std::abs(a), std::abs(b)));
}

double max_relative_deviation(const VectorVariable& a, const VectorVariable& b) {
    if (a.size() != b.size()) {
        throw std::invalid_argument("deviation needs vectors of equal length");
    }
    double worst = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        worst = std::max(worst, relative_deviation(a[i], b[i]));
    }
    return worst;
}

void sort_components(VectorVariable& v) {
    std::sort(v.begin(), v.end(), [](cplx a, cplx b) {
        if (a.real() != b.real()) return a.real() < b.real();
        return a.imag() < b.imag();
    });
}

ConsistencyReport consistency_check(const QuadFamily& fam, const VectorVariable& x0,
                                    const VectorVariable& x1, const VectorVariable& x2,
                                    const VectorVariable& x3, const EdgeParam& alpha,
                                    const EdgeParam& beta, const EdgeParam& gamma,
                                    const FaceParam& w, double tol) {
    ConsistencyReport report;
    try {
        report.x12 = solve_corner(fam, CornerSlot::v, x0, x1, x2, {}, alpha, beta, w);
        report.x13 = solve_corner(fam, CornerSlot::v, x0, x1, x3, {}, alpha, gamma, w);
        report.x23 = solve_corner(fam, CornerSlot::v, x0, x2, x3, {}, beta, gamma, w);
        report.x123_ab =
            solve_corner(fam, CornerSlot::v, x3, report.x13, report.x23, {}, alpha, beta, w);
        report.x123_ag =
            solve_corner(fam, CornerSlot::v, x2, report.x12, report.x23, {}, alpha, gamma, w);
        report.x123_bg =
            solve_corner(fam, CornerSlot::v, x1, report.x12, report.x13, {}, beta, gamma, w);
    } catch (const std::exception& e) {
        report.verdict = "solver-failure";
        report.failure = e.what();
        return report;
    }
    sort_components(report.x123_ab);
    sort_components(report.x123_ag);
    sort_components(report.x123_bg);
    double worst = max_relative_deviation(report.x123_ab, report.x123_ag);
    worst = std::max(worst, max_relative_deviation(report.x123_ab, report.x123_bg));
    worst = std::max(worst, max_relative_deviation(report.x123_ag, report.x123_bg));
    report.max_pairwise_deviation = worst;
    report.verdict = worst < tol ? "consistent" : "inconsistent";
    return report;
}

SymmetryReport symmetry_check(const QuadFamily& fam, const VectorVariable& x,
                              const VectorVariable& u, const VectorVariable& y,
                              const VectorVariable& v, const EdgeParam& alpha,
                              const EdgeParam& beta, const FaceParam& w) {
    if (!is_fourleg(fam)) {
        throw std::invalid_argument("square symmetries apply to the four-leg families");
    }
    const auto base = quad_eval(fam, x, u, y, v, alpha, beta, w, QuadForm::fourleg);
    auto against = [&](const std::vector<cplx>& other) {
        double worst = 0.0;
        for (std::size_t k = 0; k < base.size(); ++k) {
            worst = std::max(worst, std::abs(base[k] + other[k]));
        }
        return worst;
    };
    const EdgeParam alpha_hat{alpha.a2, alpha.a1};
    const EdgeParam beta_hat{beta.a2, beta.a1};
    SymmetryReport report;
    report.swap_residual = against(quad_eval(fam, x, y, u, v, beta, alpha, w, QuadForm::fourleg));
    report.hat_beta_residual =
        against(quad_eval(fam, y, v, x, u, alpha, beta_hat, w, QuadForm::fourleg));
    report.hat_alpha_residual =
        against(quad_eval(fam, u, x, v, y, alpha_hat, beta, w, QuadForm::fourleg));
    return report;
}

DegenerationReport degeneration_check(cplx x, cplx u, cplx y, cplx v, cplx w,
                                      const EdgeParam& alpha, const EdgeParam& beta) {
    check_pole(x, w, "x", 0, 0);
    check_pole(u, w, "u", 0, 0);
    check_pole(y, w, "y", 0, 0);
    check_pole(v, w, "v", 0, 0);
    const cplx a1 = alpha.a1, a2 = alpha.a2, b1 = beta.a1, b2 = beta.a2;

    DegenerationReport report;
    report.input_residual = std::abs((a1 - b1) / (x - w) + (b1 - a2) / (u - w) +
                                     (a2 - b2) / (v - w) + (b2 - a1) / (y - w));
    report.cubic_residual =
        std::abs(a1 * (w - u) * (w - v) * (y - x) + a2 * (w - x) * (w - y) * (u - v) +
                 b1 * (w - y) * (w - v) * (x - u) + b2 * (w - x) * (w - u) * (v - y));
    report.grouped_residual =
        std::abs(((a1 - b1) * (v - w) + (a2 - b2) * (x - w)) * (u - w) * (y - w) +
                 ((b1 - a2) * (y - w) + (b2 - a1) * (u - w)) * (x - w) * (v - w));

    const cplx ax = x - w, au = u - w, ay = y - w, av = v - w;
    report.absorbed_residual = std::abs(a1 * au * av * (ay - ax) + b1 * ay * av * (ax - au) +
                                        a2 * ax * ay * (au - av) + b2 * ax * au * (av - ay));
    report.absorbed_product_residual =
        std::abs((a1 - b1) * au * ay * av + (b1 - a2) * ax * ay * av +
                 (a2 - b2) * ax * au * ay + (b2 - a1) * ax * au * av);

    const cplx ix = 1.0 / ax, iu = 1.0 / au, iy = 1.0 / ay, iv = 1.0 / av;
    report.linear_residual =
        std::abs((a1 - b1) * ix + (b1 - a2) * iu + (a2 - b2) * iv + (b2 - a1) * iy);

    report.max_mapped = std::max({report.cubic_residual, report.grouped_residual,
                                  report.absorbed_residual, report.absorbed_product_residual,
                                  report.linear_residual});
    return report;
}

cplx random_annulus(Rng& rng, double r_lo, double r_hi) {
    const double r = rng.uniform(r_lo, r_hi);
    const double theta = rng.uniform(0.0, 6.283185307179586476925287);
    return {r * std::cos(theta), r * std::sin(theta)};
}

VectorVariable random_vector(Rng& rng, int n, double r_lo, double r_hi) {
    VectorVariable out(static_cast<std::size_t>(n));
    for (cplx& c : out) c = random_annulus(rng, r_lo, r_hi);
    return out;
}

VectorVariable random_product_one(Rng& rng, int n) {
    VectorVariable out(static_cast<std::size_t>(n));
    cplx prod = 1.0;
    for (int i = 0; i + 1 < n; ++i) {
        out[static_cast<std::size_t>(i)] = random_annulus(rng, 0.75, 1.35);
        prod *= out[static_cast<std::size_t>(i)];
    }
    if (n > 0) out[static_cast<std::size_t>(n - 1)] = 1.0 / prod;
    return out;
}

}  // namespace lattice
