#include "lattice/classical.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

namespace lattice {

namespace {

constexpr double kPoleTol = 1e-10;
constexpr double kSaddleTol = 1e-12;
constexpr double kImagTol = 1e-9;
constexpr double kQuadTol = 1e-11;

double hyperbolic_shift(cplx a, cplx b) {
    const cplx d = a - b;
    if (std::abs(d.real()) > 1e-12) {
        throw std::domain_error(
            "hyperbolic legs need purely imaginary line-value differences, got a - b = " +
            format_complex(d));
    }
    return d.imag();
}

double log_cosh(double t) {
    const double a = std::abs(t);
    return a + std::log1p(std::exp(-2.0 * a)) - std::log(2.0);
}

double log_abs_sinh(double t) {
    const double a = std::abs(t);
    if (a < 0.5) return std::log(std::abs(std::sinh(t)));
    return a + std::log1p(-std::exp(-2.0 * a)) - std::log(2.0);
}

cplx phi_leg(const LagrangianModel& m, cplx a, cplx b, double x, double y) {
    if (m.family == LagrangianModel::Family::rational) {
        const double d = x - y;
        if (std::abs(d) < kPoleTol) {
            throw std::domain_error("rational leg pole: x - y vanishes at x = " +
                                    format_double(x) + ", y = " + format_double(y));
        }
        return (a - b) / d;
    }
    const double s = hyperbolic_shift(a, b);
    return {-log_cosh(y - x + s), 0.0};
}

cplx phibar_leg(const LagrangianModel& m, cplx a, cplx b, double x, double y) {
    if (m.family == LagrangianModel::Family::rational) {
        return phi_leg(m, a, b, x, y);
    }
    const double s = hyperbolic_shift(a, b);
    const double t = x - y + s;
    if (std::abs(std::sinh(t)) < kPoleTol) {
        throw std::domain_error("sinh factor vanishes: x - y + s = " + format_double(t) +
                                " at x = " + format_double(x) + ", y = " + format_double(y));
    }
    return {log_abs_sinh(t), 0.0};
}

cplx laplace1_value(const LagrangianModel& m, cplx p, cplx pp, cplx q, cplx qp, double x,
                    double xa, double xb, double xc, double xd) {
    return phibar_leg(m, p, q, xc, x) + phibar_leg(m, pp, qp, xb, x) +
           phi_leg(m, pp, q, x, xa) + phi_leg(m, p, qp, x, xd);
}

cplx laplace2_value(const LagrangianModel& m, cplx p, cplx pp, cplx q, cplx qp, double x,
                    double xa, double xb, double xc, double xd) {
    return phibar_leg(m, p, q, x, xb) + phibar_leg(m, pp, qp, x, xc) +
           phi_leg(m, pp, q, xd, x) + phi_leg(m, p, qp, xa, x);
}

cplx lambda_core(const LagrangianModel& m, cplx a, cplx b, double x, double y) {
    if (m.family == LagrangianModel::Family::rational) {
        const double d = x - y;
        if (std::abs(d) < kPoleTol) {
            throw std::domain_error("rational Lagrangian pole: x - y vanishes at x = " +
                                    format_double(x) + ", y = " + format_double(y));
        }
        return (a - b) * std::log(std::abs(d));
    }
    const double s = hyperbolic_shift(a, b);
    const cplx v = integrate_gk(
        [s](double u) { return cplx(-log_cosh(s - u), 0.0); }, 0.0, x - y, kQuadTol);
    if (!std::isfinite(v.real())) {
        throw std::runtime_error("Lagrangian quadrature failed between " + format_double(x) +
                                 " and " + format_double(y));
    }
    return {v.real(), 0.0};
}

cplx lambda_bar_core(const LagrangianModel& m, cplx a, cplx b, double x, double y) {
    if (m.family == LagrangianModel::Family::rational) {
        return lambda_core(m, a, b, x, y);
    }
    const double s = hyperbolic_shift(a, b);
    const double w = x - y;
    // The integrand has an integrable log zero at u0 = -s. When the path
    // covers it, the integral is split there: log|u - u0| is integrated in
    // closed form and the smooth remainder log|sinh(u - u0) / (u - u0)|
    // goes to quadrature.
    const double u0 = -s;
    double v;
    if (u0 > std::min(0.0, w) - 1e-10 && u0 < std::max(0.0, w) + 1e-10) {
        auto smooth = [u0](double u) {
            const double t = u - u0;
            if (std::abs(t) < 1e-8) return cplx(t * t / 6.0, 0.0);
            return cplx(std::log(std::abs(std::sinh(t) / t)), 0.0);
        };
        auto log_primitive = [u0](double u) {
            const double t = u - u0;
            if (t == 0.0) return 0.0;
            return t * (std::log(std::abs(t)) - 1.0);
        };
        v = log_primitive(w) - log_primitive(0.0) +
            integrate_gk(smooth, 0.0, u0, kQuadTol).real() +
            integrate_gk(smooth, u0, w, kQuadTol).real();
    } else {
        v = integrate_gk([s](double u) { return cplx(log_abs_sinh(u + s), 0.0); }, 0.0, w,
                         kQuadTol)
                .real();
    }
    if (!std::isfinite(v)) {
        throw std::runtime_error("Lagrangian quadrature failed between " + format_double(x) +
                                 " and " + format_double(y));
    }
    return {-v, 0.0};
}

cplx l_value(const LagrangianModel& m, LagrangianKind kind, const RapidityPair& A,
             const RapidityPair& B, double x, const std::array<double, 4>& c) {
    const cplx a = A.value, ap = A.primed, b = B.value, bp = B.primed;
    const double xa = c[0], xb = c[1], xc = c[2], xd = c[3];
    switch (kind) {
        case LagrangianKind::L1:
            return lambda_bar_core(m, a, b, xc, x) + lambda_bar_core(m, ap, bp, xb, x) +
                   lambda_core(m, ap, b, x, xa) + lambda_core(m, a, bp, x, xd);
        case LagrangianKind::L2:
            return lambda_bar_core(m, a, b, x, xb) + lambda_bar_core(m, ap, bp, x, xc) +
                   lambda_core(m, ap, b, xd, x) + lambda_core(m, a, bp, xa, x);
        case LagrangianKind::L3:
            return l_value(m, LagrangianKind::L2, A, B, x, c) +
                   lambda_core(m, b, bp, xc, xd) + lambda_core(m, bp, b, xb, xa);
        case LagrangianKind::L4:
            return l_value(m, LagrangianKind::L1, A, B, x, c) +
                   lambda_core(m, a, ap, xa, xc) + lambda_core(m, ap, a, xd, xb);
        default: break;
    }
    throw std::logic_error("l_value handles L1..L4 only");
}

LagrangianKind kind_for_variant(int variant) {
    switch (variant) {
        case 1: return LagrangianKind::L1;
        case 2: return LagrangianKind::L2;
        case 3: return LagrangianKind::L3;
        case 4: return LagrangianKind::L4;
        default: throw std::invalid_argument("variant must be 1..4");
    }
}

double saddle_residual(const LagrangianModel& m, int variant, const RapidityPair& A,
                       const RapidityPair& B, double x, const std::array<double, 4>& c) {
    kind_for_variant(variant);
    const cplx v = (variant == 1 || variant == 4)
                       ? laplace1_value(m, A.value, A.primed, B.value, B.primed, x, c[0],
                                        c[1], c[2], c[3])
                       : laplace2_value(m, A.value, A.primed, B.value, B.primed, x, c[0],
                                        c[1], c[2], c[3]);
    if (std::abs(v.imag()) > kImagTol) {
        throw std::domain_error("saddle residual is not real at x = " + format_double(x));
    }
    return v.real();
}

double central_diff(const std::function<double(double)>& f, double x) {
    const double h = 1e-7 * (1.0 + std::abs(x));
    return (f(x + h) - f(x - h)) / (2.0 * h);
}

double model_window(const LagrangianModel& m, const RapidityPair& A, const RapidityPair& B) {
    if (m.family == LagrangianModel::Family::rational) return 4.0;
    double w = 0.0;
    const cplx vals[4] = {A.value - B.value, A.primed - B.primed, A.primed - B.value,
                          A.value - B.primed};
    for (const cplx& d : vals) w = std::max(w, std::abs(d.imag()));
    return 4.0 + 2.0 * w;
}

// Scans [lo, hi] for sign changes of f, skipping points where f throws or
// is flagged non-real, and polishes every bracket with the damped Newton
// root solver. The equations here can pick up spurious zeros on the
// shoulders of logarithmic spikes, so out of all roots found the one
// closest to `hint` is returned.
double scan_for_root(const std::function<double(double)>& f, double lo, double hi,
                     double hint, const std::string& what) {
    const int samples = 513;
    double prev_x = 0.0;
    double prev_f = 0.0;
    bool have_prev = false;
    bool have_best = false;
    double best = 0.0;
    auto offer = [&](double x) {
        if (!have_best || std::abs(x - hint) < std::abs(best - hint)) {
            best = x;
            have_best = true;
        }
    };
    for (int i = 0; i < samples; ++i) {
        const double x = lo + (hi - lo) * static_cast<double>(i) / (samples - 1);
        double fx;
        try {
            fx = f(x);
        } catch (const std::exception&) {
            have_prev = false;
            continue;
        }
        if (!std::isfinite(fx)) {
            have_prev = false;
            continue;
        }
        if (std::abs(fx) < kSaddleTol) {
            offer(x);
        } else if (have_prev && prev_f * fx < 0.0) {
            const RootResult r = newton_bisect(
                f, [&f](double t) { return central_diff(f, t); }, prev_x, x, kSaddleTol, 200);
            if (r.converged) offer(r.x);
        }
        prev_x = x;
        prev_f = fx;
        have_prev = true;
    }
    if (have_best) return best;
    throw std::runtime_error("no root of " + what + " bracketed in [" + format_double(lo) +
                             ", " + format_double(hi) + "]");
}

std::array<double, 4> to_corners(const std::vector<double>& v, std::size_t offset) {
    return {v[offset], v[offset + 1], v[offset + 2], v[offset + 3]};
}

RapidityPair require_pair(const std::vector<RapidityPair>& lines, std::size_t i,
                          std::size_t need, const char* kind) {
    if (lines.size() != need) {
        throw std::invalid_argument(std::string(kind) + " takes " + std::to_string(need) +
                                    " line bundles, got " + std::to_string(lines.size()));
    }
    return lines[i];
}

}  // namespace

LagrangianModel LagrangianModel::hyperbolic(double base_point) {
    LagrangianModel m;
    m.family = Family::hyperbolic;
    m.lambda_base_point = base_point;
    return m;
}

LagrangianModel LagrangianModel::rational(double base_point) {
    LagrangianModel m;
    m.family = Family::rational;
    m.lambda_base_point = base_point;
    return m;
}

std::string lagrangian_family_name(const LagrangianModel& m) {
    return m.family == LagrangianModel::Family::hyperbolic ? "hyperbolic" : "rational";
}

std::string leg_kind_name(LegKind kind) {
    switch (kind) {
        case LegKind::phi: return "phi";
        case LegKind::phibar: return "phibar";
        case LegKind::laplace1: return "laplace-1";
        case LegKind::laplace2: return "laplace-2";
    }
    throw std::logic_error("bad leg kind");
}

LegKind leg_kind_from_name(const std::string& name) {
    if (name == "phi") return LegKind::phi;
    if (name == "phibar") return LegKind::phibar;
    if (name == "laplace-1") return LegKind::laplace1;
    if (name == "laplace-2") return LegKind::laplace2;
    throw std::invalid_argument("unknown leg kind: " + name);
}

std::string lagrangian_kind_name(LagrangianKind kind) {
    switch (kind) {
        case LagrangianKind::lambda: return "lambda";
        case LagrangianKind::lambda_bar: return "lambdabar";
        case LagrangianKind::L1: return "L1";
        case LagrangianKind::L2: return "L2";
        case LagrangianKind::L3: return "L3";
        case LagrangianKind::L4: return "L4";
    }
    throw std::logic_error("bad Lagrangian kind");
}

LagrangianKind lagrangian_kind_from_name(const std::string& name) {
    if (name == "lambda") return LagrangianKind::lambda;
    if (name == "lambdabar") return LagrangianKind::lambda_bar;
    if (name == "L1") return LagrangianKind::L1;
    if (name == "L2") return LagrangianKind::L2;
    if (name == "L3") return LagrangianKind::L3;
    if (name == "L4") return LagrangianKind::L4;
    throw std::invalid_argument("unknown Lagrangian kind: " + name);
}

std::string classical_relation_name(ClassicalRelation kind) {
    switch (kind) {
        case ClassicalRelation::star_star: return "star-star";
        case ClassicalRelation::four_constraints: return "four-constraints";
        case ClassicalRelation::ybe: return "ybe";
        case ClassicalRelation::closure: return "closure";
    }
    throw std::logic_error("bad classical relation");
}

ClassicalRelation classical_relation_from_name(const std::string& name) {
    if (name == "star-star") return ClassicalRelation::star_star;
    if (name == "four-constraints") return ClassicalRelation::four_constraints;
    if (name == "ybe") return ClassicalRelation::ybe;
    if (name == "closure") return ClassicalRelation::closure;
    throw std::invalid_argument("unknown classical relation: " + name);
}

cplx leg_value(const LagrangianModel& m, LegKind kind, const std::vector<cplx>& rapidities,
               const std::vector<double>& args) {
    switch (kind) {
        case LegKind::phi:
        case LegKind::phibar: {
            if (rapidities.size() != 2 || args.size() != 2) {
                throw std::invalid_argument(
                    "phi and phibar take rapidities {a, b} and args {x, y}");
            }
            return kind == LegKind::phi
                       ? phi_leg(m, rapidities[0], rapidities[1], args[0], args[1])
                       : phibar_leg(m, rapidities[0], rapidities[1], args[0], args[1]);
        }
        case LegKind::laplace1:
        case LegKind::laplace2: {
            if (rapidities.size() != 4 || args.size() != 5) {
                throw std::invalid_argument(
                    "laplace kinds take rapidities {p, p', q, q'} and args {x, xa, xb, xc, xd}");
            }
            return kind == LegKind::laplace1
                       ? laplace1_value(m, rapidities[0], rapidities[1], rapidities[2],
                                        rapidities[3], args[0], args[1], args[2], args[3],
                                        args[4])
                       : laplace2_value(m, rapidities[0], rapidities[1], rapidities[2],
                                        rapidities[3], args[0], args[1], args[2], args[3],
                                        args[4]);
        }
    }
    throw std::logic_error("bad leg kind");
}

cplx lagrangian_value(const LagrangianModel& m, LagrangianKind kind,
                      const std::vector<cplx>& rapidities, const std::vector<double>& args) {
    switch (kind) {
        case LagrangianKind::lambda:
        case LagrangianKind::lambda_bar: {
            if (rapidities.size() != 2 || args.size() != 2) {
                throw std::invalid_argument(
                    "lambda kinds take rapidities {a, b} and args {x, y}");
            }
            return kind == LagrangianKind::lambda
                       ? lambda_core(m, rapidities[0], rapidities[1], args[0], args[1])
                       : lambda_bar_core(m, rapidities[0], rapidities[1], args[0], args[1]);
        }
        default: {
            if (rapidities.size() != 4 || args.size() != 5) {
                throw std::invalid_argument(
                    "L kinds take rapidities {a, a', b, b'} and args {x, xa, xb, xc, xd}");
            }
            const RapidityPair A{rapidities[0], rapidities[1]};
            const RapidityPair B{rapidities[2], rapidities[3]};
            return l_value(m, kind, A, B, args[0],
                           {args[1], args[2], args[3], args[4]});
        }
    }
}

double solve_saddle(const LagrangianModel& m, int variant, RapidityPair a, RapidityPair b,
                    const std::array<double, 4>& corners, double lo, double hi) {
    kind_for_variant(variant);
    auto f = [&](double x) { return saddle_residual(m, variant, a, b, x, corners); };
    const RootResult r = newton_bisect(
        f, [&f](double t) { return central_diff(f, t); }, lo, hi, kSaddleTol, 200);
    if (!r.converged) {
        throw std::runtime_error("saddle solve did not converge on [" + format_double(lo) +
                                 ", " + format_double(hi) + "]: last residual " +
                                 format_double(r.residual));
    }
    return r.x;
}

double solve_face_saddle(const LagrangianModel& m, int variant, RapidityPair a,
                         RapidityPair b, const std::array<double, 4>& corners) {
    kind_for_variant(variant);
    auto f = [&](double x) { return saddle_residual(m, variant, a, b, x, corners); };
    const double mean = (corners[0] + corners[1] + corners[2] + corners[3]) / 4.0;
    for (double probe : {mean, mean + 1e-6, mean - 1e-6}) {
        try {
            if (std::abs(f(probe)) < kSaddleTol) return probe;
        } catch (const std::exception&) {
        }
    }
    const double cmin = std::min({corners[0], corners[1], corners[2], corners[3]});
    const double cmax = std::max({corners[0], corners[1], corners[2], corners[3]});
    double window = model_window(m, a, b);
    std::string last_error;
    for (int attempt = 0; attempt < 3; ++attempt) {
        try {
            return scan_for_root(f, cmin - window, cmax + window, mean,
                                 "the variant " + std::to_string(variant) +
                                     " saddle equation");
        } catch (const std::exception& err) {
            last_error = err.what();
            window *= 4.0;
        }
    }
    throw std::runtime_error(last_error);
}

namespace {

struct StarSaddles {
    double x1 = 0.0;
    double x2 = 0.0;
};

StarSaddles solve_star_saddles(const LagrangianModel& m, const RapidityPair& p,
                               const RapidityPair& q, const std::array<double, 4>& c) {
    StarSaddles s;
    s.x1 = solve_face_saddle(m, 1, p, q, c);
    s.x2 = solve_face_saddle(m, 2, p, q, c);
    return s;
}

// Assembles the first side of the action identity twice: once as written
// and once with the line roles and the middle corners exchanged, which maps
// it onto minus the second side evaluated through the independent L2 and
// crossing-term code paths. Any drift between the paired assemblies is
// quadrature error; both solved saddles are checked.
double star_star_residual(const LagrangianModel& m, const RapidityPair& p,
                          const RapidityPair& q, const std::array<double, 4>& c) {
    const StarSaddles s = solve_star_saddles(m, p, q, c);
    const std::array<double, 4> cs = {c[0], c[2], c[1], c[3]};
    double worst = 0.0;
    for (double x : {s.x1, s.x2}) {
        const cplx side1 = l_value(m, LagrangianKind::L1, p, q, x, c) +
                           lambda_core(m, q.primed, q.value, c[3], c[2]) +
                           lambda_core(m, q.value, q.primed, c[0], c[1]);
        const cplx side2 = l_value(m, LagrangianKind::L2, q, p, x, cs) +
                           lambda_core(m, q.primed, q.value, cs[2], cs[0]) +
                           lambda_core(m, q.value, q.primed, cs[1], cs[3]);
        worst = std::max(worst, std::abs(side1 + side2));
    }
    return worst;
}

double four_constraints_residual(const LagrangianModel& m, const RapidityPair& P,
                                 const RapidityPair& Q, const std::array<double, 4>& c) {
    const StarSaddles s = solve_star_saddles(m, P, Q, c);
    const cplx p = P.value, pp = P.primed, q = Q.value, qp = Q.primed;
    const double xa = c[0], xb = c[1], xc = c[2], xd = c[3];
    const cplx ra = -phi_leg(m, q, pp, xa, s.x1) + phi_leg(m, q, qp, xa, xb) -
                    phi_leg(m, p, qp, xa, s.x2) + phi_leg(m, p, pp, xa, xc);
    const cplx rd = -phi_leg(m, qp, p, xd, s.x1) + phi_leg(m, qp, q, xd, xc) -
                    phi_leg(m, pp, q, xd, s.x2) + phi_leg(m, pp, p, xd, xb);
    const cplx rb = -phibar_leg(m, qp, pp, s.x1, xb) - phi_leg(m, qp, q, xb, xa) -
                    phibar_leg(m, p, q, s.x2, xb) - phi_leg(m, p, pp, xb, xd);
    const cplx rc = -phibar_leg(m, q, p, s.x1, xc) - phi_leg(m, q, qp, xc, xd) -
                    phibar_leg(m, pp, qp, s.x2, xc) - phi_leg(m, pp, p, xc, xa);
    return std::max(std::max(std::abs(ra), std::abs(rb)),
                    std::max(std::abs(rc), std::abs(rd)));
}

double ybe_residual(const LagrangianModel& m, const RapidityPair& P, const RapidityPair& Q,
                    const RapidityPair& R, const std::vector<double>& bd) {
    const double xa = bd[0], xb = bd[1], xc = bd[2], xd = bd[3], xe = bd[4], xf = bd[5];
    const cplx p = P.value, pp = P.primed, q = Q.value, qp = Q.primed, r = R.value,
               rp = R.primed;

    auto lhs_centers = [&](double x, double& c1, double& c2, double& c3) {
        c1 = solve_face_saddle(m, 1, P, Q, {xc, x, xe, xd});
        c2 = solve_face_saddle(m, 1, P, R, {x, xb, xd, xf});
        c3 = solve_face_saddle(m, 1, Q, R, {xc, xa, x, xb});
    };
    auto lhs_corner_eq = [&](double x) {
        double c1, c2, c3;
        lhs_centers(x, c1, c2, c3);
        const cplx v = -phibar_leg(m, qp, pp, c1, x) - phi_leg(m, r, pp, x, c2) -
                       phibar_leg(m, r, q, c3, x) - phi_leg(m, qp, q, x, xc);
        if (std::abs(v.imag()) > kImagTol) {
            throw std::domain_error("corner equation is not real");
        }
        return v.real();
    };
    auto rhs_centers = [&](double y, double& c3p, double& c2p, double& c1p) {
        c3p = solve_face_saddle(m, 1, Q, R, {xe, y, xd, xf});
        c2p = solve_face_saddle(m, 1, P, R, {xc, xa, xe, y});
        c1p = solve_face_saddle(m, 1, P, Q, {xa, xb, y, xf});
    };
    auto rhs_corner_eq = [&](double y) {
        double c3p, c2p, c1p;
        rhs_centers(y, c3p, c2p, c1p);
        const cplx v = -phibar_leg(m, rp, qp, c3p, y) - phi_leg(m, rp, p, y, c2p) -
                       phibar_leg(m, q, p, c1p, y) - phi_leg(m, q, qp, y, xf);
        if (std::abs(v.imag()) > kImagTol) {
            throw std::domain_error("corner equation is not real");
        }
        return v.real();
    };

    const double lo = std::min({xa, xb, xc, xd, xe, xf});
    const double hi = std::max({xa, xb, xc, xd, xe, xf});
    const double mid = (xa + xb + xc + xd + xe + xf) / 6.0;
    const double w = model_window(m, P, Q) + model_window(m, Q, R);
    const double x =
        scan_for_root(lhs_corner_eq, lo - w, hi + w, mid, "the interior corner equation");
    const double y =
        scan_for_root(rhs_corner_eq, lo - w, hi + w, mid, "the interior corner equation");

    double c1, c2, c3, c3p, c2p, c1p;
    lhs_centers(x, c1, c2, c3);
    rhs_centers(y, c3p, c2p, c1p);

    const cplx lhs = l_value(m, LagrangianKind::L1, P, Q, c1, {xc, x, xe, xd}) +
                     l_value(m, LagrangianKind::L1, P, R, c2, {x, xb, xd, xf}) +
                     l_value(m, LagrangianKind::L1, Q, R, c3, {xc, xa, x, xb}) +
                     lambda_core(m, q, qp, xc, x) + lambda_core(m, qp, q, xb, xa) +
                     lambda_core(m, q, qp, y, xf) + lambda_core(m, qp, q, xd, xe);
    const cplx rhs = l_value(m, LagrangianKind::L1, Q, R, c3p, {xe, y, xd, xf}) +
                     l_value(m, LagrangianKind::L1, P, R, c2p, {xc, xa, xe, y}) +
                     l_value(m, LagrangianKind::L1, P, Q, c1p, {xa, xb, y, xf});
    return std::abs(lhs - rhs);
}

double closure_residual(const LagrangianModel& m, const RapidityPair& P,
                        const RapidityPair& Q, const RapidityPair& R,
                        const std::vector<double>& bd) {
    const double x1 = bd[0], x2 = bd[1], x3 = bd[2], x12 = bd[3], x13 = bd[4], x23 = bd[5];
    const cplx p = P.value, pp = P.primed, q = Q.value, qp = Q.primed, r = R.value,
               rp = R.primed;

    auto lower_centers = [&](double x, double& xi, double& xj, double& xk) {
        xi = solve_face_saddle(m, 1, R, Q, {x3, x23, x, x2});
        xj = solve_face_saddle(m, 1, P, R, {x3, x, x13, x1});
        xk = solve_face_saddle(m, 1, P, Q, {x, x2, x1, x12});
    };
    auto lower_eq = [&](double x) {
        double xi, xj, xk;
        lower_centers(x, xi, xj, xk);
        const cplx v = -phibar_leg(m, q, r, xi, x) - phibar_leg(m, rp, pp, xj, x) -
                       phi_leg(m, rp, r, x, x3) - phi_leg(m, q, pp, x, xk);
        if (std::abs(v.imag()) > kImagTol) {
            throw std::domain_error("corner equation is not real");
        }
        return v.real();
    };
    auto upper_centers = [&](double y, double& xip, double& xjp, double& xkp) {
        xip = solve_face_saddle(m, 1, R, Q, {x13, y, x1, x12});
        xjp = solve_face_saddle(m, 1, P, R, {x23, x2, y, x12});
        xkp = solve_face_saddle(m, 1, P, Q, {x3, x23, x13, y});
    };
    auto upper_eq = [&](double y) {
        double xip, xjp, xkp;
        upper_centers(y, xip, xjp, xkp);
        const cplx v = -phibar_leg(m, qp, rp, xip, y) - phibar_leg(m, r, p, xjp, y) +
                       phi_leg(m, rp, r, y, x12) - phi_leg(m, qp, p, y, xkp);
        if (std::abs(v.imag()) > kImagTol) {
            throw std::domain_error("corner equation is not real");
        }
        return v.real();
    };

    const double lo = std::min({x1, x2, x3, x12, x13, x23});
    const double hi = std::max({x1, x2, x3, x12, x13, x23});
    const double mid = (x1 + x2 + x3 + x12 + x13 + x23) / 6.0;
    const double w = model_window(m, P, Q) + model_window(m, R, Q);
    const double x =
        scan_for_root(lower_eq, lo - w, hi + w, mid, "the interior corner equation");
    const double y =
        scan_for_root(upper_eq, lo - w, hi + w, mid, "the interior corner equation");

    double xi, xj, xk, xip, xjp, xkp;
    lower_centers(x, xi, xj, xk);
    upper_centers(y, xip, xjp, xkp);

    const cplx di = l_value(m, LagrangianKind::L1, R, Q, xip, {x13, y, x1, x12}) -
                    l_value(m, LagrangianKind::L1, R, Q, xi, {x3, x23, x, x2});
    const cplx dj = l_value(m, LagrangianKind::L1, P, R, xjp, {x23, x2, y, x12}) +
                    lambda_core(m, r, rp, x23, x2) + lambda_core(m, rp, r, y, x12) -
                    (l_value(m, LagrangianKind::L1, P, R, xj, {x3, x, x13, x1}) +
                     lambda_core(m, r, rp, x3, x) + lambda_core(m, rp, r, x13, x1));
    const cplx dk = l_value(m, LagrangianKind::L1, P, Q, xkp, {x3, x23, x13, y}) -
                    l_value(m, LagrangianKind::L1, P, Q, xk, {x, x2, x1, x12});
    return std::abs(di + dj + dk);
}

}  // namespace

double classical_relation_residual(const LagrangianModel& m, ClassicalRelation kind,
                                   const std::vector<RapidityPair>& lines,
                                   const std::vector<double>& boundary) {
    switch (kind) {
        case ClassicalRelation::star_star:
        case ClassicalRelation::four_constraints: {
            const RapidityPair p = require_pair(lines, 0, 2, "star-star");
            const RapidityPair q = lines[1];
            if (boundary.size() != 4) {
                throw std::invalid_argument("star-star takes boundary {xa, xb, xc, xd}");
            }
            const std::array<double, 4> c = to_corners(boundary, 0);
            return kind == ClassicalRelation::star_star
                       ? star_star_residual(m, p, q, c)
                       : four_constraints_residual(m, p, q, c);
        }
        case ClassicalRelation::ybe:
        case ClassicalRelation::closure: {
            const RapidityPair p = require_pair(lines, 0, 3, "the three-line relations");
            const RapidityPair q = lines[1];
            const RapidityPair r = lines[2];
            if (boundary.size() != 6) {
                throw std::invalid_argument("the three-line relations take six boundary spins");
            }
            return kind == ClassicalRelation::ybe ? ybe_residual(m, p, q, r, boundary)
                                                  : closure_residual(m, p, q, r, boundary);
        }
    }
    throw std::logic_error("bad classical relation");
}

namespace {

struct SquarePlan {
    FourSquare sq;
    SquareScheme scheme;
    RapidityPair A;
    RapidityPair B;
    GridPoint center;
};

std::vector<SquarePlan> build_plans(const Surface& s) {
    if (s.formulation != Formulation::irf) {
        throw std::invalid_argument("the classical layer works on the corner formulation");
    }
    std::vector<SquarePlan> plans;
    plans.reserve(s.squares.size());
    for (const FourSquare& sq : s.squares) {
        SquarePlan plan;
        plan.sq = sq;
        plan.scheme = square_scheme(sq, s.formulation);
        plan.A = surface_line(s, sq, plan.scheme.line_a);
        plan.B = surface_line(s, sq, plan.scheme.line_b);
        plan.center = square_center(sq);
        plans.push_back(plan);
    }
    return plans;
}

double field_at(const std::map<GridPoint, double>& field, const GridPoint& site) {
    auto it = field.find(site);
    if (it == field.end()) {
        throw std::invalid_argument("field misses site " + grid_point_str(site));
    }
    return it->second;
}

cplx corner_term(const LagrangianModel& m, int variant, const RapidityPair& A,
                 const RapidityPair& B, const std::array<double, 4>& c, double x, int slot) {
    const cplx a = A.value, ap = A.primed, b = B.value, bp = B.primed;
    const double xa = c[0], xb = c[1], xc = c[2], xd = c[3];
    cplx v = 0.0;
    if (variant == 1 || variant == 4) {
        switch (slot) {
            case 0: v = -phi_leg(m, b, ap, xa, x); break;
            case 1: v = -phibar_leg(m, bp, ap, x, xb); break;
            case 2: v = -phibar_leg(m, b, a, x, xc); break;
            case 3: v = -phi_leg(m, bp, a, xd, x); break;
            default: throw std::logic_error("bad slot");
        }
        if (variant == 4) {
            switch (slot) {
                case 0: v += phi_leg(m, a, ap, xa, xc); break;
                case 1: v += -phi_leg(m, a, ap, xb, xd); break;
                case 2: v += -phi_leg(m, ap, a, xc, xa); break;
                case 3: v += phi_leg(m, ap, a, xd, xb); break;
                default: break;
            }
        }
        return v;
    }
    switch (slot) {
        case 0: v = phi_leg(m, a, bp, xa, x); break;
        case 1: v = phibar_leg(m, a, b, x, xb); break;
        case 2: v = phibar_leg(m, ap, bp, x, xc); break;
        case 3: v = phi_leg(m, ap, b, xd, x); break;
        default: throw std::logic_error("bad slot");
    }
    if (variant == 3) {
        switch (slot) {
            case 0: v += -phi_leg(m, b, bp, xa, xb); break;
            case 1: v += phi_leg(m, bp, b, xb, xa); break;
            case 2: v += phi_leg(m, b, bp, xc, xd); break;
            case 3: v += -phi_leg(m, bp, b, xd, xc); break;
            default: break;
        }
    }
    return v;
}

std::array<double, 4> plan_corners(const SquarePlan& plan,
                                   const std::map<GridPoint, double>& field) {
    return {field_at(field, plan.scheme.sites[0]), field_at(field, plan.scheme.sites[1]),
            field_at(field, plan.scheme.sites[2]), field_at(field, plan.scheme.sites[3])};
}

}  // namespace

double surface_action(const Surface& s, const LagrangianModel& m,
                      const std::map<GridPoint, double>& field) {
    KahanSumC acc;
    for (const SquarePlan& plan : build_plans(s)) {
        const std::array<double, 4> c = plan_corners(plan, field);
        const double x = field_at(field, plan.center);
        acc.add(l_value(m, kind_for_variant(plan.scheme.variant), plan.A, plan.B, x, c));
    }
    return acc.value().real();
}

double surface_action_gradient(const Surface& s, const LagrangianModel& m,
                               const std::map<GridPoint, double>& field,
                               const GridPoint& site) {
    KahanSumC acc;
    for (const SquarePlan& plan : build_plans(s)) {
        const std::array<double, 4> c = plan_corners(plan, field);
        const double x = field_at(field, plan.center);
        if (plan.center == site) {
            acc.add(cplx(saddle_residual(m, plan.scheme.variant, plan.A, plan.B, x, c), 0.0));
            continue;
        }
        for (int slot = 0; slot < 4; ++slot) {
            if (plan.scheme.sites[static_cast<std::size_t>(slot)] == site) {
                acc.add(corner_term(m, plan.scheme.variant, plan.A, plan.B, c, x, slot));
            }
        }
    }
    return acc.value().real();
}

LaplaceSolution solve_laplace_system(const Surface& s, const LagrangianModel& m,
                                     const std::map<GridPoint, double>& boundary) {
    const std::vector<std::string> problems = validate_surface(s);
    if (!problems.empty()) {
        throw std::invalid_argument("invalid surface: " + problems.front());
    }
    const std::vector<SquarePlan> plans = build_plans(s);

    std::vector<GridPoint> interior;
    std::vector<GridPoint> rim;
    classify_spin_sites(s, interior, rim);
    for (const GridPoint& site : rim) {
        if (boundary.find(site) == boundary.end()) {
            throw std::invalid_argument("missing boundary value at " + grid_point_str(site));
        }
    }
    if (boundary.size() != rim.size()) {
        for (const auto& kv : boundary) {
            if (!std::binary_search(rim.begin(), rim.end(), kv.first)) {
                throw std::invalid_argument("value pinned at non-boundary site " +
                                            grid_point_str(kv.first));
            }
        }
    }

    std::vector<GridPoint> variables = interior;
    for (const SquarePlan& plan : plans) variables.push_back(plan.center);
    const std::size_t n_corners = interior.size();
    const std::size_t n = variables.size();

    auto assemble = [&](const std::vector<double>& vars) {
        std::map<GridPoint, double> field = boundary;
        for (std::size_t i = 0; i < n; ++i) field[variables[i]] = vars[i];
        return field;
    };

    auto residuals = [&](const std::vector<double>& vars) {
        std::vector<double> out(n, 0.0);
        try {
            const std::map<GridPoint, double> field = assemble(vars);
            for (std::size_t i = 0; i < n_corners; ++i) {
                out[i] = surface_action_gradient(s, m, field, variables[i]);
            }
            for (std::size_t j = 0; j < plans.size(); ++j) {
                const SquarePlan& plan = plans[j];
                out[n_corners + j] =
                    saddle_residual(m, plan.scheme.variant, plan.A, plan.B,
                                    field_at(field, plan.center), plan_corners(plan, field));
            }
        } catch (const std::exception&) {
            std::fill(out.begin(), out.end(), 1e8);
        }
        return out;
    };

    double mean = 0.0;
    for (const auto& kv : boundary) mean += kv.second;
    if (!boundary.empty()) mean /= static_cast<double>(boundary.size());

    std::vector<double> init(n, mean);
    {
        std::map<GridPoint, double> field = assemble(init);
        for (std::size_t j = 0; j < plans.size(); ++j) {
            const SquarePlan& plan = plans[j];
            try {
                init[n_corners + j] = solve_face_saddle(m, plan.scheme.variant, plan.A,
                                                        plan.B, plan_corners(plan, field));
            } catch (const std::exception&) {
                const std::array<double, 4> c = plan_corners(plan, field);
                init[n_corners + j] = (c[0] + c[1] + c[2] + c[3]) / 4.0 + 0.1;
            }
        }
    }

    LaplaceSolution out;
    const NewtonResult nr = newton_system(residuals, init, 1e-10, 200);
    out.gradient_norm = nr.residual_norm;
    out.iterations = nr.iterations;
    out.converged = nr.converged;
    out.failure = nr.failure;
    if (!nr.converged && out.failure.empty()) {
        out.failure = "Newton stalled with gradient norm " + format_double(nr.residual_norm);
    }
    for (std::size_t i = 0; i < n; ++i) out.field[variables[i]] = nr.x[i];
    if (nr.converged) {
        try {
            out.action = surface_action(s, m, assemble(nr.x));
        } catch (const std::exception& err) {
            out.converged = false;
            out.failure = err.what();
        }
    }
    return out;
}

ClassicalZReport classical_z_invariance(const Surface& sigma, const Surface& sigma0,
                                        const LagrangianModel& m,
                                        const std::map<GridPoint, double>& boundary) {
    std::vector<GridPoint> interior_a, rim_a, interior_b, rim_b;
    classify_spin_sites(sigma, interior_a, rim_a);
    classify_spin_sites(sigma0, interior_b, rim_b);
    if (rim_a != rim_b) {
        throw std::invalid_argument("surfaces pin different rims");
    }
    ClassicalZReport report;
    const LaplaceSolution sol = solve_laplace_system(sigma, m, boundary);
    const LaplaceSolution sol0 = solve_laplace_system(sigma0, m, boundary);
    report.action_sigma = sol.action;
    report.action_sigma0 = sol0.action;
    report.converged = sol.converged && sol0.converged;
    if (!sol.converged) report.failure = sol.failure;
    if (!sol0.converged) {
        report.failure += report.failure.empty() ? sol0.failure : "; " + sol0.failure;
    }
    if (report.converged) {
        report.difference = std::abs(sol.action - sol0.action);
    }
    return report;
}

}  // namespace lattice
