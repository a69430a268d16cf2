// Standalone oracle for the classical layer. Recomputes legs, Lagrangian
// quadratures, five-point saddles and the four classical relation residuals
// in long double, with Romberg integration cross-checked against composite
// Gauss-Legendre and roots pinned by plain bisection. Values printed here
// are frozen into the unit and acceptance tests; nothing links against the
// library under test.
#include <algorithm>
#include <cmath>
#include <cstdio>
#include <functional>
#include <string>
#include <vector>

namespace {

using ld = long double;
using fn = std::function<ld(ld)>;

struct Line {
    ld v;
    ld vp;
};

const Line P{1.4L, 1.15L};
const Line Q{0.8L, 0.55L};
const Line R{0.3L, 0.1L};

// ---------------------------------------------------------------- quadrature

ld romberg(const fn& f, ld a, ld b) {
    if (a == b) return 0.0L;
    const int kmax = 22;
    static ld table[kmax][kmax];
    ld h = b - a;
    table[0][0] = 0.5L * h * (f(a) + f(b));
    for (int k = 1; k < kmax; ++k) {
        h *= 0.5L;
        ld sum = 0.0L;
        const long n = 1L << (k - 1);
        for (long i = 0; i < n; ++i) sum += f(a + h * (2 * i + 1));
        table[k][0] = 0.5L * table[k - 1][0] + h * sum;
        ld pow4 = 1.0L;
        for (int j = 1; j <= k; ++j) {
            pow4 *= 4.0L;
            table[k][j] =
                table[k][j - 1] + (table[k][j - 1] - table[k - 1][j - 1]) / (pow4 - 1.0L);
        }
        if (k > 4 && std::fabs(table[k][k] - table[k - 1][k - 1]) <
                         1e-19L * (1.0L + std::fabs(table[k][k]))) {
            return table[k][k];
        }
    }
    return table[kmax - 1][kmax - 1];
}

// 20-point Gauss-Legendre nodes and weights on [-1, 1].
const ld kGlNode[10] = {
    0.0765265211334973337546404L, 0.2277858511416450780804962L,
    0.3737060887154195606725482L, 0.5108670019508270980043641L,
    0.6360536807265150254528367L, 0.7463319064601507926143051L,
    0.8391169718222188233945291L, 0.9122344282513259058677524L,
    0.9639719272779137912676661L, 0.9931285991850949247861224L};
const ld kGlWeight[10] = {
    0.1527533871307258506980843L, 0.1491729864726037467878287L,
    0.1420961093183820513292983L, 0.1316886384491766268984945L,
    0.1181945319615184173123774L, 0.1019301198172404350367501L,
    0.0832767415767047487247581L, 0.0626720483341090635695065L,
    0.0406014298003869413310400L, 0.0176140071391521183118620L};

ld gauss_legendre(const fn& f, ld a, ld b, int panels) {
    ld total = 0.0L;
    const ld step = (b - a) / panels;
    for (int p = 0; p < panels; ++p) {
        const ld lo = a + step * p;
        const ld mid = lo + 0.5L * step;
        const ld half = 0.5L * step;
        ld acc = 0.0L;
        for (int i = 0; i < 10; ++i) {
            acc += kGlWeight[i] * (f(mid - half * kGlNode[i]) + f(mid + half * kGlNode[i]));
        }
        total += acc * half;
    }
    return total;
}

// ---------------------------------------------------------------- leg families

struct Model {
    bool rational = false;
};

ld phi(const Model& m, ld s, ld x, ld y) {
    if (m.rational) return s / (x - y);
    return -std::log(std::cosh(y - x + s));
}

ld phibar(const Model& m, ld s, ld x, ld y) {
    if (m.rational) return s / (x - y);
    return std::log(std::fabs(std::sinh(x - y + s)));
}

ld lam(const Model& m, ld s, ld x, ld y) {
    if (m.rational) return s * std::log(std::fabs(x - y));
    return -romberg([s](ld u) { return std::log(std::cosh(s - u)); }, 0.0L, x - y);
}

ld lambar(const Model& m, ld s, ld x, ld y) {
    if (m.rational) return s * std::log(std::fabs(x - y));
    return -romberg([s](ld u) { return std::log(std::fabs(std::sinh(u + s))); }, 0.0L,
                    x - y);
}

struct Face {
    Line A;
    Line B;
    ld c0, c1, c2, c3;
};

ld f1_sum(const Model& m, const Face& f, ld x) {
    return phibar(m, f.A.v - f.B.v, f.c2, x) + phibar(m, f.A.vp - f.B.vp, f.c1, x) +
           phi(m, f.A.vp - f.B.v, x, f.c0) + phi(m, f.A.v - f.B.vp, x, f.c3);
}

ld f2_sum(const Model& m, const Face& f, ld x) {
    return phibar(m, f.A.v - f.B.v, x, f.c1) + phibar(m, f.A.vp - f.B.vp, x, f.c2) +
           phi(m, f.A.vp - f.B.v, f.c3, x) + phi(m, f.A.v - f.B.vp, f.c0, x);
}

ld l1_val(const Model& m, const Face& f, ld x) {
    return lambar(m, f.A.v - f.B.v, f.c2, x) + lambar(m, f.A.vp - f.B.vp, f.c1, x) +
           lam(m, f.A.vp - f.B.v, x, f.c0) + lam(m, f.A.v - f.B.vp, x, f.c3);
}

ld l2_val(const Model& m, const Face& f, ld x) {
    return lambar(m, f.A.v - f.B.v, x, f.c1) + lambar(m, f.A.vp - f.B.vp, x, f.c2) +
           lam(m, f.A.vp - f.B.v, f.c3, x) + lam(m, f.A.v - f.B.vp, f.c0, x);
}

// Crossing terms: qdress carries the second line of the pair, pdress the
// first.
ld qdress(const Model& m, const Face& f) {
    return lam(m, f.B.vp - f.B.v, f.c3, f.c2) + lam(m, f.B.v - f.B.vp, f.c0, f.c1);
}

ld pdress(const Model& m, const Face& f) {
    return lam(m, f.A.vp - f.A.v, f.c2, f.c0) + lam(m, f.A.v - f.A.vp, f.c1, f.c3);
}

// ---------------------------------------------------------------- root finding

std::vector<ld> all_roots(const fn& f, ld lo, ld hi, int n = 20000, int iters = 200) {
    std::vector<ld> roots;
    ld prev_x = 0.0L, prev_f = 0.0L;
    bool have = false;
    for (int i = 0; i <= n; ++i) {
        const ld x = lo + (hi - lo) * i / n;
        const ld fx = f(x);
        if (!std::isfinite(static_cast<double>(fx))) {
            have = false;
            continue;
        }
        if (have && prev_f * fx < 0.0L) {
            ld a = prev_x, b = x, fa = prev_f;
            for (int it = 0; it < iters; ++it) {
                const ld mid = 0.5L * (a + b);
                const ld fm = f(mid);
                if (fa * fm <= 0.0L) {
                    b = mid;
                } else {
                    a = mid;
                    fa = fm;
                }
            }
            roots.push_back(0.5L * (a + b));
        }
        prev_x = x;
        prev_f = fx;
        have = true;
    }
    return roots;
}

ld nearest(const std::vector<ld>& roots, ld hint) {
    ld best = roots.front();
    for (ld r : roots) {
        if (std::fabs(r - hint) < std::fabs(best - hint)) best = r;
    }
    return best;
}

ld face_mean(const Face& f) { return (f.c0 + f.c1 + f.c2 + f.c3) / 4.0L; }

// Inner solves run inside the outer equations' own bisections, so they use
// a coarser scan with enough bisection steps to stay below 1e-19.
ld solve_f1(const Model& m, const Face& f, ld win) {
    const ld lo = std::min({f.c0, f.c1, f.c2, f.c3}) - win;
    const ld hi = std::max({f.c0, f.c1, f.c2, f.c3}) + win;
    const std::vector<ld> roots =
        all_roots([&](ld x) { return f1_sum(m, f, x); }, lo, hi, 2000, 80);
    return nearest(roots, face_mean(f));
}

ld solve_f2(const Model& m, const Face& f, ld win) {
    const ld lo = std::min({f.c0, f.c1, f.c2, f.c3}) - win;
    const ld hi = std::max({f.c0, f.c1, f.c2, f.c3}) + win;
    const std::vector<ld> roots =
        all_roots([&](ld x) { return f2_sum(m, f, x); }, lo, hi, 2000, 80);
    return nearest(roots, face_mean(f));
}

// ---------------------------------------------------------------- reporting

void print_val(const char* label, ld v) { std::printf("  %-34s % .18Le\n", label, v); }

void star_report(const Model& m, const char* tag, Line A, Line B, ld xa, ld xb, ld xc,
                 ld xd, ld win) {
    const Face f{A, B, xa, xb, xc, xd};
    const Face fs{B, A, xa, xc, xb, xd};
    std::printf("[star %s]\n", tag);
    const ld z1 = solve_f1(m, f, win);
    const ld z2 = solve_f2(m, f, win);
    print_val("z1", z1);
    print_val("z2", z2);
    print_val("f1(z1)", f1_sum(m, f, z1));
    print_val("f2(z2)", f2_sum(m, f, z2));
    print_val("z1+z2 - S/2", z1 + z2 - (xa + xb + xc + xd) / 2.0L);
    const ld side1 = l1_val(m, f, z1) + qdress(m, f);
    const ld side2 = l2_val(m, f, z2) + pdress(m, f);
    print_val("side1(z1)", side1);
    print_val("side2(z2)", side2);
    print_val("independent gap", side1 - side2);
    if (!m.rational) {
        const ld d4 = xa - xb - xc + xd;
        const ld defect =
            -romberg([](ld t) { return std::log(2.0L * std::cosh(t / 2.0L)); }, 0.0L, d4);
        print_val("defect integral at D4", defect);
        print_val("gap - defect", side1 - side2 - defect);
    }
    ld swap_worst = 0.0L;
    for (ld z : {z1, z2}) {
        const ld s1 = l1_val(m, f, z) + qdress(m, f);
        const ld s2 = l2_val(m, fs, z) + pdress(m, fs);
        swap_worst = std::max(swap_worst, std::fabs(s1 + s2));
    }
    print_val("role-swap residual", swap_worst);
    const ld ra = -phi(m, B.v - A.vp, xa, z1) + phi(m, B.v - B.vp, xa, xb) -
                  phi(m, A.v - B.vp, xa, z2) + phi(m, A.v - A.vp, xa, xc);
    const ld rb = -phibar(m, B.vp - A.vp, z1, xb) - phi(m, B.vp - B.v, xb, xa) -
                  phibar(m, A.v - B.v, z2, xb) - phi(m, A.v - A.vp, xb, xd);
    const ld rc = -phibar(m, B.v - A.v, z1, xc) - phi(m, B.v - B.vp, xc, xd) -
                  phibar(m, A.vp - B.vp, z2, xc) - phi(m, A.vp - A.v, xc, xa);
    const ld rd = -phi(m, B.vp - A.v, xd, z1) + phi(m, B.vp - B.v, xd, xc) -
                  phi(m, A.vp - B.v, xd, z2) + phi(m, A.vp - A.v, xd, xb);
    print_val("row a", ra);
    print_val("row b", rb);
    print_val("row c", rc);
    print_val("row d", rd);
    if (!m.rational) {
        const ld d4 = xa - xb - xc + xd;
        print_val("log(2cosh(D4/2))", std::log(2.0L * std::cosh(d4 / 2.0L)));
    }
}

void ybe_report(const Model& m, ld xa, ld xb, ld xc, ld xd, ld xe, ld xf, ld win) {
    std::printf("[ybe]\n");
    auto centers_lhs = [&](ld x, ld& c1, ld& c2, ld& c3) {
        c1 = solve_f1(m, Face{P, Q, xc, x, xe, xd}, win);
        c2 = solve_f1(m, Face{P, R, x, xb, xd, xf}, win);
        c3 = solve_f1(m, Face{Q, R, xc, xa, x, xb}, win);
    };
    auto x_eq = [&](ld x) {
        ld c1, c2, c3;
        centers_lhs(x, c1, c2, c3);
        return -phibar(m, Q.vp - P.vp, c1, x) - phi(m, R.v - P.vp, x, c2) -
               phibar(m, R.v - Q.v, c3, x) - phi(m, Q.vp - Q.v, x, xc);
    };
    auto centers_rhs = [&](ld y, ld& c3p, ld& c2p, ld& c1p) {
        c3p = solve_f1(m, Face{Q, R, xe, y, xd, xf}, win);
        c2p = solve_f1(m, Face{P, R, xc, xa, xe, y}, win);
        c1p = solve_f1(m, Face{P, Q, xa, xb, y, xf}, win);
    };
    auto y_eq = [&](ld y) {
        ld c3p, c2p, c1p;
        centers_rhs(y, c3p, c2p, c1p);
        return -phibar(m, R.vp - Q.vp, c3p, y) - phi(m, R.vp - P.v, y, c2p) -
               phibar(m, Q.v - P.v, c1p, y) - phi(m, Q.v - Q.vp, y, xf);
    };
    const ld mid = (xa + xb + xc + xd + xe + xf) / 6.0L;
    const ld lo = std::min({xa, xb, xc, xd, xe, xf}) - 2.0L * win;
    const ld hi = std::max({xa, xb, xc, xd, xe, xf}) + 2.0L * win;
    const std::vector<ld> xroots = all_roots(x_eq, lo, hi, 800, 160);
    const std::vector<ld> yroots = all_roots(y_eq, lo, hi, 800, 160);
    std::printf("  x roots found: %zu, y roots found: %zu\n", xroots.size(), yroots.size());
    const ld x = nearest(xroots, mid);
    const ld y = nearest(yroots, mid);
    print_val("x", x);
    print_val("y", y);
    ld c1, c2, c3, c3p, c2p, c1p;
    centers_lhs(x, c1, c2, c3);
    centers_rhs(y, c3p, c2p, c1p);
    print_val("c1", c1);
    print_val("c2", c2);
    print_val("c3", c3);
    print_val("c3'", c3p);
    print_val("c2'", c2p);
    print_val("c1'", c1p);
    const ld lhs = l1_val(m, Face{P, Q, xc, x, xe, xd}, c1) +
                   l1_val(m, Face{P, R, x, xb, xd, xf}, c2) +
                   l1_val(m, Face{Q, R, xc, xa, x, xb}, c3) + lam(m, Q.v - Q.vp, xc, x) +
                   lam(m, Q.vp - Q.v, xb, xa) + lam(m, Q.v - Q.vp, y, xf) +
                   lam(m, Q.vp - Q.v, xd, xe);
    const ld rhs = l1_val(m, Face{Q, R, xe, y, xd, xf}, c3p) +
                   l1_val(m, Face{P, R, xc, xa, xe, y}, c2p) +
                   l1_val(m, Face{P, Q, xa, xb, y, xf}, c1p);
    print_val("lhs", lhs);
    print_val("rhs", rhs);
    print_val("gap", lhs - rhs);
}

void closure_report(const Model& m, ld x1, ld x2, ld x3, ld x12, ld x13, ld x23, ld win) {
    std::printf("[closure]\n");
    auto centers_lo = [&](ld x, ld& xi, ld& xj, ld& xk) {
        xi = solve_f1(m, Face{R, Q, x3, x23, x, x2}, win);
        xj = solve_f1(m, Face{P, R, x3, x, x13, x1}, win);
        xk = solve_f1(m, Face{P, Q, x, x2, x1, x12}, win);
    };
    auto lower_eq = [&](ld x) {
        ld xi, xj, xk;
        centers_lo(x, xi, xj, xk);
        return -phibar(m, Q.v - R.v, xi, x) - phibar(m, R.vp - P.vp, xj, x) -
               phi(m, R.vp - R.v, x, x3) - phi(m, Q.v - P.vp, x, xk);
    };
    auto centers_hi = [&](ld y, ld& xip, ld& xjp, ld& xkp) {
        xip = solve_f1(m, Face{R, Q, x13, y, x1, x12}, win);
        xjp = solve_f1(m, Face{P, R, x23, x2, y, x12}, win);
        xkp = solve_f1(m, Face{P, Q, x3, x23, x13, y}, win);
    };
    auto upper_eq = [&](ld y) {
        ld xip, xjp, xkp;
        centers_hi(y, xip, xjp, xkp);
        return -phibar(m, Q.vp - R.vp, xip, y) - phibar(m, R.v - P.v, xjp, y) +
               phi(m, R.vp - R.v, y, x12) - phi(m, Q.vp - P.v, y, xkp);
    };
    const ld mid = (x1 + x2 + x3 + x12 + x13 + x23) / 6.0L;
    const ld lo = std::min({x1, x2, x3, x12, x13, x23}) - 2.0L * win;
    const ld hi = std::max({x1, x2, x3, x12, x13, x23}) + 2.0L * win;
    const std::vector<ld> xroots = all_roots(lower_eq, lo, hi, 800, 160);
    const std::vector<ld> yroots = all_roots(upper_eq, lo, hi, 800, 160);
    std::printf("  x roots found: %zu, y roots found: %zu\n", xroots.size(), yroots.size());
    const ld x = nearest(xroots, mid);
    const ld y = nearest(yroots, mid);
    print_val("x", x);
    print_val("y", y);
    ld xi, xj, xk, xip, xjp, xkp;
    centers_lo(x, xi, xj, xk);
    centers_hi(y, xip, xjp, xkp);
    print_val("xi", xi);
    print_val("xj", xj);
    print_val("xk", xk);
    print_val("xi'", xip);
    print_val("xj'", xjp);
    print_val("xk'", xkp);
    const ld di = l1_val(m, Face{R, Q, x13, y, x1, x12}, xip) -
                  l1_val(m, Face{R, Q, x3, x23, x, x2}, xi);
    const ld dj = l1_val(m, Face{P, R, x23, x2, y, x12}, xjp) + lam(m, R.v - R.vp, x23, x2) +
                  lam(m, R.vp - R.v, y, x12) -
                  (l1_val(m, Face{P, R, x3, x, x13, x1}, xj) + lam(m, R.v - R.vp, x3, x) +
                   lam(m, R.vp - R.v, x13, x1));
    const ld dk = l1_val(m, Face{P, Q, x3, x23, x13, y}, xkp) -
                  l1_val(m, Face{P, Q, x, x2, x1, x12}, xk);
    print_val("di", di);
    print_val("dj", dj);
    print_val("dk", dk);
    print_val("gap", di + dj + dk);
}

}  // namespace

int main() {
    const Model hyp{false};
    const Model rat{true};

    std::printf("== leg and Lagrangian fixtures (hyperbolic) ==\n");
    print_val("phi(s=0.6, 0.3, 0.7)", phi(hyp, 0.6L, 0.3L, 0.7L));
    print_val("phibar(s=0.6, 0.3, 0.7)", phibar(hyp, 0.6L, 0.3L, 0.7L));
    print_val("phibar(s=0.35, 0.9, 0.2)", phibar(hyp, 0.35L, 0.9L, 0.2L));
    const Face fA{P, Q, 0.0L, 0.4L, 0.7L, 0.1L};
    print_val("f1(0.3 | star A)", f1_sum(hyp, fA, 0.3L));
    print_val("f2(0.3 | star A)", f2_sum(hyp, fA, 0.3L));
    const ld lam_r = lam(hyp, 0.6L, 0.3L, 0.7L);
    const ld lam_g =
        -gauss_legendre([](ld u) { return std::log(std::cosh(0.6L - u)); }, 0.0L, -0.4L, 64);
    print_val("lam(s=0.6, 0.3, 0.7) romberg", lam_r);
    print_val("lam(s=0.6, 0.3, 0.7) gauss", lam_g);
    const ld lb_r = lambar(hyp, 0.6L, 0.7L, 0.3L);
    const ld lb_g = -gauss_legendre(
        [](ld u) { return std::log(std::fabs(std::sinh(u + 0.6L))); }, 0.0L, 0.4L, 64);
    print_val("lambar(s=0.6, 0.7, 0.3) romberg", lb_r);
    print_val("lambar(s=0.6, 0.7, 0.3) gauss", lb_g);
    print_val("L1(0.32 | star A)", l1_val(hyp, fA, 0.32L));
    print_val("L2(0.32 | star A)", l2_val(hyp, fA, 0.32L));
    print_val("antisym lam", lam(hyp, 0.6L, 0.3L, 0.7L) + lam(hyp, -0.6L, 0.7L, 0.3L));
    print_val("antisym lambar",
              lambar(hyp, 0.6L, 0.7L, 0.3L) + lambar(hyp, -0.6L, 0.3L, 0.7L));
    const Face fAs{Q, P, 0.0L, 0.7L, 0.4L, 0.1L};
    print_val("cinv L2+swapped L1 (0.32)", l2_val(hyp, fA, 0.32L) + l1_val(hyp, fAs, 0.32L));

    std::printf("\n== hyperbolic stars ==\n");
    star_report(hyp, "A", P, Q, 0.0L, 0.4L, 0.7L, 0.1L, 5.7L);
    star_report(hyp, "A-rapidity-2", Line{0.9L, 0.62L}, Line{0.33L, 0.05L}, 0.0L, 0.4L,
                0.7L, 0.1L, 5.0L);
    star_report(hyp, "G", P, Q, -0.5L, 0.9L, 1.2L, -0.4L, 5.7L);

    std::printf("\n== hyperbolic three-line relations ==\n");
    ybe_report(hyp, 1.2L, 0.5L, 0.2L, 0.9L, 0.6L, 0.1L, 5.7L);
    closure_report(hyp, 0.3L, 0.5L, 0.0L, 0.6L, 0.55L, 0.7L, 5.7L);

    std::printf("\n== rational stars and relations ==\n");
    star_report(rat, "A-rational", P, Q, 0.0L, 0.4L, 0.7L, 0.1L, 4.0L);
    ybe_report(rat, 1.2L, 0.5L, 0.2L, 0.9L, 0.6L, 0.1L, 4.0L);
    closure_report(rat, 0.3L, 0.5L, 0.0L, 0.6L, 0.55L, 0.7L, 4.0L);
    return 0;
}
