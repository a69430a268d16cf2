#pragma once

#include <array>
#include <map>
#include <string>
#include <vector>

#include "lattice/numerics.hpp"
#include "lattice/surface.hpp"
#include "lattice/weights.hpp"

namespace lattice {

// Quasi-classical layer: leg functions, their Lagrangian antiderivatives,
// saddle points of five-point stars, and discrete Laplace systems on
// four-square surfaces.
//
// Two built-in leg families:
//   hyperbolic  phi_ab(x,y)    = -log cosh(y - x + s_ab)
//               phibar_ab(x,y) =  log|sinh(x - y + s_ab)|
//     where s_ab is the imaginary part of the line-value difference a - b;
//     the difference must be purely imaginary for this family, and spins
//     stay real.
//   rational    phi_ab(x,y) = phibar_ab(x,y) = (a - b) / (x - y),
//     with real line values.
struct LagrangianModel {
    enum class Family { hyperbolic, rational };

    Family family = Family::hyperbolic;

    // Anchor of the Lagrangian quadratures. Both built-in families depend
    // on slot differences only, so the anchor does not shift any value the
    // workbench compares: the hyperbolic Lambda vanishes at coincident
    // slots, the rational one at unit slot separation (coincident slots are
    // its leg pole).
    double lambda_base_point = 0.0;

    static LagrangianModel hyperbolic(double base_point = 0.0);
    static LagrangianModel rational(double base_point = 0.0);
};

std::string lagrangian_family_name(const LagrangianModel& m);

// phi / phibar evaluate one leg. laplace1 / laplace2 evaluate the two
// five-point leg sums whose zeros are the saddle conditions of the first
// and second star variants.
enum class LegKind { phi, phibar, laplace1, laplace2 };

std::string leg_kind_name(LegKind kind);
LegKind leg_kind_from_name(const std::string& name);

// Leg evaluation.
//   phi, phibar:        rapidities {a, b},           args {x, y}
//   laplace1, laplace2: rapidities {p, p', q, q'},   args {x, xa, xb, xc, xd}
// where x is the centre spin and xa..xd the corner spins. A leg factor
// within 1e-10 of its pole raises std::domain_error naming the factor.
cplx leg_value(const LagrangianModel& m, LegKind kind,
               const std::vector<cplx>& rapidities,
               const std::vector<double>& args);

// lambda / lambda_bar are the antiderivatives of phi / phibar, normalised to
// vanish at coincident slots. L1..L4 are the four-square Lagrangians: L1 and
// L2 are the bare five-point sums of the first and second star variants, L3
// dresses L2 with the two crossing terms of its wall orientation, L4 dresses
// L1 likewise.
enum class LagrangianKind { lambda, lambda_bar, L1, L2, L3, L4 };

std::string lagrangian_kind_name(LagrangianKind kind);
LagrangianKind lagrangian_kind_from_name(const std::string& name);

// Lagrangian evaluation.
//   lambda, lambda_bar: rapidities {a, b},         args {x, y}
//   L1..L4:             rapidities {a, a', b, b'}, args {x, xa, xb, xc, xd}
// Values are obtained by adaptive quadrature of the legs. The hyperbolic
// lambda_bar integrand has integrable log zeros; a path covering one is
// split there and the log part integrated in closed form. Rational-family
// slot coincidences sit on a genuine pole and raise std::domain_error; a
// quadrature that fails to produce a finite value raises
// std::runtime_error.
cplx lagrangian_value(const LagrangianModel& m, LagrangianKind kind,
                      const std::vector<cplx>& rapidities,
                      const std::vector<double>& args);

// Solves the centre-spin saddle equation of the given star variant (1..4;
// variants 3 and 4 share the equations of 2 and 1, their dressings being
// centre-independent) on the bracket [lo, hi]. Corners are ordered
// (xa, xb, xc, xd). Throws std::runtime_error carrying the last residual
// if the bracket does not pin a root to |residual| < 1e-12 within 200
// iterations.
double solve_saddle(const LagrangianModel& m, int variant, RapidityPair a,
                    RapidityPair b, const std::array<double, 4>& corners,
                    double lo, double hi);

// Same equation, but the bracket is located automatically by scanning a
// window derived from the corner spread and the model shifts.
double solve_face_saddle(const LagrangianModel& m, int variant, RapidityPair a,
                         RapidityPair b, const std::array<double, 4>& corners);

// Classical counterparts of the weight-level identities.
//   star_star:        lines {p, q},    boundary {xa, xb, xc, xd}
//   four_constraints: lines {p, q},    boundary {xa, xb, xc, xd}
//   ybe:              lines {p, q, r}, boundary {xa, xb, xc, xd, xe, xf}
//   closure:          lines {p, q, r}, boundary {x1, x2, x3, x12, x13, x23}
// Every saddle appearing in the relation is solved to 1e-12 first.
// star_star assembles the first action side twice, as written and through
// the role exchange that maps it onto minus the second side, and returns
// the worst drift between the paired assemblies at the solved saddles; ybe
// and closure return |LHS - RHS| of the corresponding action identity;
// four_constraints returns the largest magnitude among the four
// corner-derivative residuals, which involve legs only.
enum class ClassicalRelation { star_star, four_constraints, ybe, closure };

std::string classical_relation_name(ClassicalRelation kind);
ClassicalRelation classical_relation_from_name(const std::string& name);

double classical_relation_residual(const LagrangianModel& m,
                                   ClassicalRelation kind,
                                   const std::vector<RapidityPair>& lines,
                                   const std::vector<double>& boundary);

// Total action of a surface: the sum over four-squares of the Lagrangian
// matching the square's wall orientation, evaluated on the given field.
// The field must carry every corner and every centre (the centre of a
// square sits at base + u + v in its plane).
double surface_action(const Surface& s, const LagrangianModel& m,
                      const std::map<GridPoint, double>& field);

// One gradient component of surface_action with respect to the spin at
// `site`, assembled from legs (no quadrature). `site` may be a centre or a
// corner.
double surface_action_gradient(const Surface& s, const LagrangianModel& m,
                               const std::map<GridPoint, double>& field,
                               const GridPoint& site);

struct LaplaceSolution {
    std::map<GridPoint, double> field;  // interior corners and all centres
    double action = 0.0;
    double gradient_norm = 0.0;
    int iterations = 0;
    bool converged = false;
    std::string failure;
};

// Solves the discrete Laplace system of the surface: every centre satisfies
// its face's five-point saddle equation and every interior corner the
// stationarity of the total action. `boundary` pins the rim corners with
// real spins. Newton runs over all interior variables at once; a singular
// Jacobian triggers one regularised retry before the failure is reported in
// the returned struct.
LaplaceSolution solve_laplace_system(const Surface& s,
                                     const LagrangianModel& m,
                                     const std::map<GridPoint, double>& boundary);

struct ClassicalZReport {
    double action_sigma = 0.0;
    double action_sigma0 = 0.0;
    double difference = 0.0;
    bool converged = false;
    std::string failure;
};

// Solves both surfaces on the shared boundary and reports |A - A0|.
// The two surfaces must pin the same rim sites.
ClassicalZReport classical_z_invariance(const Surface& sigma,
                                        const Surface& sigma0,
                                        const LagrangianModel& m,
                                        const std::map<GridPoint, double>& boundary);

}  // namespace lattice
