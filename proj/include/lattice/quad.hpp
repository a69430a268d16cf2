#pragma once

#include <string>
#include <vector>

#include "lattice/numerics.hpp"

namespace lattice {

// Multi-component quad equations on a quadrilateral with corner variables
// x, u, y, v (n components each), edge parameter pairs alpha, beta, and an
// n-component face parameter w.
using VectorVariable = std::vector<cplx>;

struct EdgeParam {
    cplx a1;
    cplx a2;
};

struct FaceParam {
    std::vector<cplx> components;
};

// Jacobi elliptic sn via the descending Landen recursion, for complex
// arguments and real parameter m in [0, 1]. m outside [0, 1] raises
// std::domain_error. Relative accuracy 1e-12 on |z| <= 5.
cplx jacobi_sn(cplx z, double m);

// The built-in families. q1a, q1h, q1e are four-leg families with leg
// f(a,b)/(x - y) + g(a,b); q3m is the multiplicative product family whose
// corner and face components multiply to 1; scalar_linear is the linear
// degeneration of q1a(0).
struct QuadFamily {
    enum class Kind { q1a, q1h, q1e, q3m, scalar_linear };

    Kind kind = Kind::q1a;
    int delta = 0;   // q1a, q1h
    double m = 0.0;  // q1e elliptic parameter

    static QuadFamily q1a(int delta);
    static QuadFamily q1h(int delta);
    static QuadFamily q1e(double m);
    static QuadFamily q3m();
    static QuadFamily scalar_linear();
};

std::string quad_family_name(const QuadFamily& fam);

// Builds a family from its name plus the relevant parameter (delta for
// q1a/q1h, m for q1e; both ignored elsewhere).
QuadFamily quad_family_from_name(const std::string& name, int delta, double m);

// Leg coefficients of the four-leg families. Both are antisymmetric in
// (alpha, beta). Raises std::invalid_argument for q3m and scalar_linear.
cplx quad_leg_f(const QuadFamily& fam, cplx alpha, cplx beta);
cplx quad_leg_g(const QuadFamily& fam, cplx alpha, cplx beta);

// Constant term of the affine form: the cyclic g-sum
// g(a1,b1) + g(b1,a2) + g(a2,b2) + g(b2,a1), and its closed factorized
// counterpart.
cplx quad_h_direct(const QuadFamily& fam, const EdgeParam& alpha, const EdgeParam& beta);
cplx quad_h_factorized(const QuadFamily& fam, const EdgeParam& alpha, const EdgeParam& beta);

enum class QuadForm { fourleg, affine };

// Evaluates the residual vector of the quad equation.
//   q1a/q1h/q1e: n values; the fourleg form is the leg sum, the affine form
//     is the polynomial obtained by clearing every pole factor, and equals
//     fourleg times prod_i (w_k-x_i)(w_k-u_i)(w_k-y_i)(w_k-v_i).
//   q3m: n-1 values from the mirrored product form; `form` is ignored.
//   scalar_linear: n componentwise linear values; w is ignored.
// A corner component within 1e-12 of a face component raises
// std::domain_error naming the indices (fourleg only).
std::vector<cplx> quad_eval(const QuadFamily& fam, const VectorVariable& x,
                            const VectorVariable& u, const VectorVariable& y,
                            const VectorVariable& v, const EdgeParam& alpha,
                            const EdgeParam& beta, const FaceParam& w, QuadForm form);

enum class CornerSlot { x, u, y, v };

std::string corner_slot_name(CornerSlot slot);

// Solves the quad equation for the corner in `unknown`, given the other
// three. The value passed in the unknown slot is ignored. n = 1 four-leg
// families use the closed-form rearrangement; scalar_linear is solved
// linearly; everything else runs Newton (tolerance 1e-12 componentwise)
// started from the mean of the known corners, with 8 deterministic random
// perturbations before giving up. Q3m eliminates the last component through
// its unit-product constraint. Failure raises std::runtime_error carrying
// the last residual.
VectorVariable solve_corner(const QuadFamily& fam, CornerSlot unknown,
                            const VectorVariable& x, const VectorVariable& u,
                            const VectorVariable& y, const VectorVariable& v,
                            const EdgeParam& alpha, const EdgeParam& beta,
                            const FaceParam& w, const VectorVariable& initial = {});

// Componentwise deviation |a - b| / (1 + max(|a|, |b|)).
double relative_deviation(cplx a, cplx b);
double max_relative_deviation(const VectorVariable& a, const VectorVariable& b);

// The solutions of the built-in equations are determined as multisets of
// components; sorting by (re, im) fixes a representative for comparison.
void sort_components(VectorVariable& v);

struct ConsistencyReport {
    VectorVariable x12;
    VectorVariable x13;
    VectorVariable x23;
    VectorVariable x123_ab;  // from the completing (alpha, beta) face
    VectorVariable x123_ag;  // from the completing (alpha, gamma) face
    VectorVariable x123_bg;  // from the completing (beta, gamma) face
    double max_pairwise_deviation = 0.0;
    std::string verdict;  // consistent | inconsistent | solver-failure
    std::string failure;
};

// Cube check: solves the three faces adjacent to x0 for x12, x13, x23, then
// the remaining three faces for x123, and compares the three x123 values
// with the componentwise deviation metric after canonical sorting.
ConsistencyReport consistency_check(const QuadFamily& fam, const VectorVariable& x0,
                                    const VectorVariable& x1, const VectorVariable& x2,
                                    const VectorVariable& x3, const EdgeParam& alpha,
                                    const EdgeParam& beta, const EdgeParam& gamma,
                                    const FaceParam& w, double tol);

struct SymmetryReport {
    double swap_residual = 0.0;       // u<->y with alpha<->beta
    double hat_beta_residual = 0.0;   // (y,v,x,u) with beta components exchanged
    double hat_alpha_residual = 0.0;  // (u,x,v,y) with alpha components exchanged
};

// Verifies the three square symmetries of the four-leg families: each field
// holds max_k |Q + Q_transformed|. Raises std::invalid_argument for q3m and
// scalar_linear.
SymmetryReport symmetry_check(const QuadFamily& fam, const VectorVariable& x,
                              const VectorVariable& u, const VectorVariable& y,
                              const VectorVariable& v, const EdgeParam& alpha,
                              const EdgeParam& beta, const FaceParam& w);

struct DegenerationReport {
    double input_residual = 0.0;             // scalar pole-sum form
    double cubic_residual = 0.0;             // parameter-grouped cubic form
    double grouped_residual = 0.0;           // difference-grouped cubic form
    double absorbed_residual = 0.0;          // after absorbing the face value
    double absorbed_product_residual = 0.0;  // product form of the absorbed equation
    double linear_residual = 0.0;            // after inverting the absorbed corners
    double max_mapped = 0.0;                 // largest of the five mapped forms
};

// Scalar degeneration chain: given (x, u, y, v, w) and the edge parameters,
// evaluates the pole-sum quad equation and the four equivalent polynomial
// rewrites, then maps the corners through X = 1/(x - w) and evaluates the
// linear form. A solution of the pole-sum form makes all five mapped forms
// vanish.
DegenerationReport degeneration_check(cplx x, cplx u, cplx y, cplx v, cplx w,
                                      const EdgeParam& alpha, const EdgeParam& beta);

// Deterministic seed helpers: components drawn from the annulus
// r in [r_lo, r_hi] (pole avoidance for generic data).
cplx random_annulus(Rng& rng, double r_lo = 0.7, double r_hi = 2.0);
VectorVariable random_vector(Rng& rng, int n, double r_lo = 0.7, double r_hi = 2.0);

// Random vector whose components multiply to 1 (q3m corners and faces).
VectorVariable random_product_one(Rng& rng, int n);

}  // namespace lattice
