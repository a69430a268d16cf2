#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "lattice/numerics.hpp"
#include "lattice/weights.hpp"

namespace lattice {

// The seven local identities the workbench can check. Inversions and
// star-star take two line bundles; the two Yang-Baxter kinds take three.
enum class RelationKind {
    edge_inversion_w,
    edge_inversion_wbar,
    irf_inversion,
    vertex_inversion,
    star_star,
    ybe_irf,
    ybe_vertex
};

std::string relation_kind_name(RelationKind kind);
RelationKind relation_kind_from_name(const std::string& name);
std::vector<RelationKind> all_relation_kinds();

// Number of line bundles the kind consumes.
int relation_arity(RelationKind kind);

struct ResidualReport {
    double max_abs_residual = 0.0;
    std::vector<int> worst_assignment;  // free spins, in enumeration order
    std::string worst_label;            // sub-identity the worst case hit
    std::size_t evaluations = 0;
};

// Exhaustively enumerates the free spins of the identity and returns the
// largest absolute deviation. Deviations are absolute differences of the
// two sides (with unit or Kronecker right-hand sides for the inversions).
ResidualReport relation_residual(const WeightModel& model, RelationKind kind,
                                 const std::vector<RapidityPair>& lines,
                                 int threads = 1);

// Visits every free-spin assignment of the identity and reports the signed
// complex deviation. Shared by relation_residual and the fitter, so both
// always agree on what a residual is.
void for_each_deviation(
    const WeightModel& model, RelationKind kind, const std::vector<RapidityPair>& lines,
    const std::function<void(const std::vector<int>&, const std::string&, cplx)>& visit);

struct FitOptions {
    LmOptions lm{};
    std::uint64_t init_seed = 20260817;
    double init_spread = 0.2;  // scale of the randomized couplings at start
    int restarts = 4;          // extra deterministic restarts if stuck high
};

struct FitResult {
    WeightModel model;
    double max_abs_residual = 0.0;  // over the fitted kinds
    double final_cost = 0.0;
    int iterations = 0;
    bool converged = false;
};

// Fits the family's free parameters so that the listed relation kinds hold
// at the given fixture lines (three: p, q, r; empty falls back to the lines
// stored in the template). Each kind is instantiated at every ordered
// selection of distinct lines of its arity; the direct-weight inversion is
// additionally instantiated at the three self-pairings so the same-bundle
// crossings are pinned. A family with no free parameters is evaluated and
// returned as-is; an empty kind list returns the initial parameters
// untouched with residual zero. Deterministic for fixed options.
FitResult fit_weights(const WeightModel& family, const std::vector<RelationKind>& kinds,
                      const std::vector<RapidityPair>& rapidities = {},
                      const std::vector<double>& initial_params = {},
                      const FitOptions& opts = {});

// Rescales inversion-tied coefficient blocks so the two members of each
// tied pair attain equal maximum weight magnitude. Every relation kind is
// exactly invariant under this rescaling; it only normalizes the scale
// split inside each tied pair.
void equalize_tied_scales(WeightModel& model);

// Largest |w| over a model's table at its fixture arguments.
double max_table_weight(const WeightModel& model);

}  // namespace lattice
