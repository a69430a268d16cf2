// Independent long-double check of the scalar degeneration chain.
//
// For each instance: three corners, the face value, and the edge parameters
// are drawn at random; the fourth corner is solved from the pole-sum form by
// closed-form rearrangement. The five rewritten forms are then evaluated in
// long double. Prints the worst residual over the instances plus the pinned
// instance (1, 2, 3, -2; w = 0).

#include <cmath>
#include <complex>
#include <cstdint>
#include <cstdio>

using ld = long double;
using cld = std::complex<ld>;

namespace {

std::uint64_t splitmix(std::uint64_t& state) {
    state += 0x9e3779b97f4a7c15ULL;
    std::uint64_t z = state;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

ld uniform(std::uint64_t& state, ld lo, ld hi) {
    return lo + (hi - lo) * static_cast<ld>(splitmix(state) >> 11) * 0x1.0p-53L;
}

cld annulus(std::uint64_t& state) {
    const ld r = uniform(state, 0.7L, 2.0L);
    const ld t = uniform(state, 0.0L, 6.28318530717958647692528676655900577L);
    return {r * std::cos(t), r * std::sin(t)};
}

struct Forms {
    ld input;
    ld cubic;
    ld grouped;
    ld absorbed;
    ld absorbed_product;
    ld linear;
};

Forms evaluate(cld x, cld u, cld y, cld v, cld w, cld a1, cld a2, cld b1, cld b2) {
    Forms out;
    out.input = std::abs((a1 - b1) / (x - w) + (b1 - a2) / (u - w) + (a2 - b2) / (v - w) +
                         (b2 - a1) / (y - w));
    out.cubic = std::abs(a1 * (w - u) * (w - v) * (y - x) + a2 * (w - x) * (w - y) * (u - v) +
                         b1 * (w - y) * (w - v) * (x - u) + b2 * (w - x) * (w - u) * (v - y));
    out.grouped = std::abs(((a1 - b1) * (v - w) + (a2 - b2) * (x - w)) * (u - w) * (y - w) +
                           ((b1 - a2) * (y - w) + (b2 - a1) * (u - w)) * (x - w) * (v - w));
    const cld ax = x - w, au = u - w, ay = y - w, av = v - w;
    out.absorbed = std::abs(a1 * au * av * (ay - ax) + b1 * ay * av * (ax - au) +
                            a2 * ax * ay * (au - av) + b2 * ax * au * (av - ay));
    out.absorbed_product = std::abs((a1 - b1) * au * ay * av + (b1 - a2) * ax * ay * av +
                                    (a2 - b2) * ax * au * ay + (b2 - a1) * ax * au * av);
    out.linear = std::abs((a1 - b1) / ax + (b1 - a2) / au + (a2 - b2) / av + (b2 - a1) / ay);
    return out;
}

ld max_mapped(const Forms& f) {
    ld worst = f.cubic;
    if (f.grouped > worst) worst = f.grouped;
    if (f.absorbed > worst) worst = f.absorbed;
    if (f.absorbed_product > worst) worst = f.absorbed_product;
    if (f.linear > worst) worst = f.linear;
    return worst;
}

}  // namespace

int main() {
    std::printf("scalar degeneration oracle\n\n");

    const Forms pinned = evaluate(cld(1.0L), cld(2.0L), cld(3.0L), cld(-2.0L), cld(0.0L),
                                  cld(1.0L), cld(3.0L), cld(2.0L), cld(4.0L));
    std::printf("pinned (1,2,3,-2; w=0): input % .3Le  cubic % .3Le  grouped % .3Le\n",
                pinned.input, pinned.cubic, pinned.grouped);
    std::printf("   absorbed % .3Le  absorbed-product % .3Le  linear % .3Le\n",
                pinned.absorbed, pinned.absorbed_product, pinned.linear);

    std::uint64_t state = 20260817ULL;
    ld worst = 0.0L;
    ld worst_input = 0.0L;
    for (int i = 0; i < 100; ++i) {
        const cld u = annulus(state), y = annulus(state), v = annulus(state),
                  w = annulus(state);
        const cld a1 = annulus(state), a2 = annulus(state), b1 = annulus(state),
                  b2 = annulus(state);
        // Solve x from the pole-sum form.
        const cld rest = (b1 - a2) / (u - w) + (a2 - b2) / (v - w) + (b2 - a1) / (y - w);
        const cld x = w - (a1 - b1) / rest;
        const Forms f = evaluate(x, u, y, v, w, a1, a2, b1, b2);
        if (f.input > worst_input) worst_input = f.input;
        if (max_mapped(f) > worst) worst = max_mapped(f);
    }
    std::printf("\n100 solved instances: worst input residual % .3Le, worst mapped % .3Le\n",
                worst_input, worst);
    return 0;
}
