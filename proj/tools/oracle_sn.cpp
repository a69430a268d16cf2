// Independent reference values for the Jacobi sn function.
//
// Two methods that share no code with the library:
//  1. RK4 integration of the Jacobi system s' = c d, c' = -s d, d' = -m s c
//     along the ray from 0 to z, in long double precision.
//  2. Theta-quotient evaluation with the nome obtained from AGM.
// Prints reference values to freeze into the test suite.

#include <cmath>
#include <complex>
#include <cstdio>

using ld = long double;
using cld = std::complex<ld>;

namespace {

cld sn_ode(cld z, ld m, int steps = 400000) {
    const ld len = std::abs(z);
    if (len == 0.0L) return 0.0L;
    const cld dir = z / len;
    const ld h = len / steps;
    cld s = 0.0L, c = 1.0L, d = 1.0L;
    auto f = [&](cld s0, cld c0, cld d0, cld& ds, cld& dc, cld& dd) {
        ds = dir * c0 * d0;
        dc = -dir * s0 * d0;
        dd = -dir * m * s0 * c0;
    };
    for (int i = 0; i < steps; ++i) {
        cld k1s, k1c, k1d, k2s, k2c, k2d, k3s, k3c, k3d, k4s, k4c, k4d;
        f(s, c, d, k1s, k1c, k1d);
        f(s + 0.5L * h * k1s, c + 0.5L * h * k1c, d + 0.5L * h * k1d, k2s, k2c, k2d);
        f(s + 0.5L * h * k2s, c + 0.5L * h * k2c, d + 0.5L * h * k2d, k3s, k3c, k3d);
        f(s + h * k3s, c + h * k3c, d + h * k3d, k4s, k4c, k4d);
        s += h / 6.0L * (k1s + 2.0L * k2s + 2.0L * k3s + k4s);
        c += h / 6.0L * (k1c + 2.0L * k2c + 2.0L * k3c + k4c);
        d += h / 6.0L * (k1d + 2.0L * k2d + 2.0L * k3d + k4d);
    }
    return s;
}

ld agm(ld a, ld b) {
    for (int i = 0; i < 200 && std::fabs(a - b) > 1e-25L * a; ++i) {
        ld a1 = 0.5L * (a + b);
        ld b1 = std::sqrt(a * b);
        a = a1;
        b = b1;
    }
    return 0.5L * (a + b);
}

ld sn_theta(ld z, ld m) {
    const ld pi = 3.14159265358979323846264338327950288L;
    const ld k = std::sqrt(m);
    const ld kp = std::sqrt(1.0L - m);
    const ld big_k = pi / (2.0L * agm(1.0L, kp));
    const ld big_kp = pi / (2.0L * agm(1.0L, k));
    const ld q = std::exp(-pi * big_kp / big_k);
    const ld u = pi * z / (2.0L * big_k);

    ld theta2_0 = 0.0L, theta3_0 = 1.0L;
    for (int n = 0; n < 64; ++n) {
        theta2_0 += 2.0L * std::pow(q, (n + 0.5L) * (n + 0.5L));
        if (n >= 1) theta3_0 += 2.0L * std::pow(q, static_cast<ld>(n) * n);
    }
    ld theta1 = 0.0L, theta4 = 1.0L;
    ld sign = 1.0L;
    for (int n = 0; n < 64; ++n) {
        theta1 += 2.0L * sign * std::pow(q, (n + 0.5L) * (n + 0.5L)) *
                  std::sin((2.0L * n + 1.0L) * u);
        sign = -sign;
    }
    sign = -1.0L;
    for (int n = 1; n < 64; ++n) {
        theta4 += 2.0L * sign * std::pow(q, static_cast<ld>(n) * n) * std::cos(2.0L * n * u);
        sign = -sign;
    }
    return (theta3_0 / theta2_0) * (theta1 / theta4);
}

void print_cld(const char* label, cld v) {
    std::printf("%-34s % .20Le  % .20Le\n", label, v.real(), v.imag());
}

}  // namespace

int main() {
    std::printf("jacobi sn reference values (re, im)\n\n");

    const ld m = 0.3L;
    print_cld("sn(0.5, 0.3) ode", sn_ode(cld(0.5L, 0.0L), m));
    std::printf("%-34s % .20Le\n", "sn(0.5, 0.3) theta", sn_theta(0.5L, m));
    print_cld("sn(1.25, 0.3) ode", sn_ode(cld(1.25L, 0.0L), m));
    std::printf("%-34s % .20Le\n", "sn(1.25, 0.3) theta", sn_theta(1.25L, m));
    print_cld("sn(0.7+0.4i, 0.3) ode", sn_ode(cld(0.7L, 0.4L), m));
    print_cld("sn(-1.3+0.9i, 0.3) ode", sn_ode(cld(-1.3L, 0.9L), m));
    print_cld("sn(2.1-1.7i, 0.7) ode", sn_ode(cld(2.1L, -1.7L), 0.7L));
    print_cld("sn(0.5, 0) ode vs sin", sn_ode(cld(0.5L, 0.0L), 0.0L) - std::sin(cld(0.5L, 0.0L)));
    print_cld("sn(0.5, 1) ode vs tanh",
              sn_ode(cld(0.5L, 0.0L), 1.0L) - std::tanh(cld(0.5L, 0.0L)));
    return 0;
}
