#pragma once

#include <string>
#include <utility>
#include <vector>

#include "lattice/numerics.hpp"

namespace lattice {

// A rapidity line together with its partner line. Relations always consume
// lines in these two-member bundles.
struct RapidityPair {
    cplx value;
    cplx primed;
};

// The four edge roles a weight can play between two line bundles (P, Q):
// direct weights cross one unprimed and one primed line, cross weights
// cross two lines of equal priming.
enum class EdgeKind {
    w_p_qprime,        // direct weight on (p, q')
    w_pprime_q,        // direct weight on (p', q)
    wbar_p_q,          // cross weight on (p, q)
    wbar_pprime_qprime // cross weight on (p', q')
};

// Spin-edge weight model over states {0, .., N-1}. Three built-in families:
//  - "trivial": N = 1, every weight is 1.
//  - "all_ones": any N, every weight is 1 (deliberately violates the
//    inversion relations; useful as a negative control).
//  - "exp_table_n2": N = 2. Weights are exponentials of character sums,
//    with an independent coefficient block for every rapidity-argument
//    combination drawn from three fixture line bundles. This is the family
//    the fitter optimizes.
class WeightModel {
public:
    static WeightModel trivial();
    static WeightModel all_ones(int state_count);
    static WeightModel exp_table_n2(RapidityPair p, RapidityPair q, RapidityPair r,
                                    std::vector<double> params);

    int state_count() const { return state_count_; }
    const std::string& family_id() const { return family_id_; }
    const std::vector<double>& params() const { return params_; }
    std::vector<double>& mutable_params() { return params_; }

    // Fixture line bundles (meaningful for exp_table_n2 only).
    RapidityPair line_p() const { return p_; }
    RapidityPair line_q() const { return q_; }
    RapidityPair line_r() const { return r_; }

    // Direct weight W_{ab}(x, y) and cross weight Wbar_{ab}(x, y) for
    // rapidity arguments a, b. The table family resolves (a, b) against its
    // known argument combinations and rejects unknown ones.
    cplx w(cplx a, cplx b, int x, int y) const;
    cplx wbar(cplx a, cplx b, int x, int y) const;

    // Argument combinations the table family supports, in canonical order.
    // Each entry is an (a, b) pair of rapidity values.
    static std::vector<std::pair<cplx, cplx>> w_combos(RapidityPair p, RapidityPair q,
                                                       RapidityPair r);
    static std::vector<std::pair<cplx, cplx>> wbar_combos(RapidityPair p, RapidityPair q,
                                                          RapidityPair r);
    static constexpr int kCoeffsPerCombo = 8;  // 4 complex character coefficients
    static int param_count_n2();

    // Serialization. Files round-trip bit-exactly.
    static WeightModel load_file(const std::string& path);
    void save_file(const std::string& path) const;
    std::string to_json() const;
    static WeightModel from_json(const std::string& text);

private:
    WeightModel() = default;

    cplx table_eval(bool cross, cplx a, cplx b, int x, int y) const;

    std::string family_id_;
    int state_count_ = 1;
    std::vector<double> params_;
    RapidityPair p_{}, q_{}, r_{};
};

// Weight of one edge of kind `kind` between line bundles A and B.
cplx edge_weight(const WeightModel& model, EdgeKind kind, RapidityPair a,
                 RapidityPair b, int x, int y);

// Face weight of a four-square in the corner formulation: the center spin
// c is summed out. Corner order is (TL, TR, BL, BR) in the square's own
// frame, with line a horizontal and line b vertical. Variants:
//  1: sum_c Wbar_ab(BL,c) Wbar_a'b'(TR,c) W_a'b(c,TL) W_ab'(c,BR)
//  2: sum_c Wbar_ab(c,TR) Wbar_a'b'(c,BL) W_a'b(BR,c) W_ab'(TL,c)
//  3: W_bb'(BL,BR) W_b'b(TR,TL) * variant 2
//  4: W_aa'(TL,BL) W_a'a(BR,TR) * variant 1
cplx irf_weight(const WeightModel& model, int variant, RapidityPair a,
                RapidityPair b, int x_tl, int x_tr, int x_bl, int x_br);

// Matrix element of the midpoint-formulation square weight:
// in-spins (x_i, x_j), out-spins (xo_i, xo_j).
cplx vertex_weight(const WeightModel& model, RapidityPair a, RapidityPair b,
                   int x_i, int x_j, int xo_i, int xo_j);

}  // namespace lattice
