#pragma once

#include <array>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "lattice/weights.hpp"

namespace lattice {

struct GridPoint {
    int i = 0;
    int j = 0;
    int k = 0;

    friend bool operator==(const GridPoint& a, const GridPoint& b) {
        return a.i == b.i && a.j == b.j && a.k == b.k;
    }
    friend bool operator!=(const GridPoint& a, const GridPoint& b) { return !(a == b); }
    friend bool operator<(const GridPoint& a, const GridPoint& b) {
        if (a.i != b.i) return a.i < b.i;
        if (a.j != b.j) return a.j < b.j;
        return a.k < b.k;
    }
    friend GridPoint operator+(const GridPoint& a, const GridPoint& b) {
        return {a.i + b.i, a.j + b.j, a.k + b.k};
    }
};

std::string grid_point_str(const GridPoint& v);

// Square orientation tags. jk/kj and ik/ki occupy the same geometric plane
// but select different weight assignments, so the tag doubles as the weight
// selector.
enum class Plane { ij, jk, kj, ki, ik };

const char* plane_name(Plane p);
Plane plane_from_name(const std::string& name);

enum class Formulation { vertex, irf };

const char* formulation_name(Formulation f);
Formulation formulation_from_name(const std::string& name);

// One elementary four-square: a 2x2 block of unit cells with its base at an
// even lattice point. Wall squares (every plane except ij) reference a
// rapidity loop through r_index and carry that loop's orientation sign.
struct FourSquare {
    GridPoint base;
    Plane plane = Plane::ij;
    int r_index = -1;
    bool r_positive = true;

    friend bool operator==(const FourSquare& a, const FourSquare& b) {
        return a.base == b.base && a.plane == b.plane && a.r_index == b.r_index &&
               a.r_positive == b.r_positive;
    }
    friend bool operator<(const FourSquare& a, const FourSquare& b) {
        if (!(a.base == b.base)) return a.base < b.base;
        if (a.plane != b.plane) return static_cast<int>(a.plane) < static_cast<int>(b.plane);
        if (a.r_index != b.r_index) return a.r_index < b.r_index;
        return a.r_positive < b.r_positive;
    }
};

// Power of the state count N accumulated by five-for-one moves.
struct FactorLedger {
    int n_power = 0;
};

struct Surface {
    Formulation formulation = Formulation::irf;
    RapidityPair p;
    RapidityPair q;
    std::vector<RapidityPair> r_lines;
    std::vector<FourSquare> squares;
    std::map<GridPoint, int> boundary_spins;
    FactorLedger ledger;
};

enum class FlipKind { five_for_one, three_for_three, mixed };

const char* flip_kind_name(FlipKind k);
FlipKind flip_kind_from_name(const std::string& name);

enum class FlipDirection { rise, sink };

const char* flip_direction_name(FlipDirection d);
FlipDirection flip_direction_from_name(const std::string& name);

// A cubic deformation at the cube [location, location + (2,2,2)]. rise moves
// the ij face from the cube floor to the ceiling, sink the reverse; side
// walls present on the cube are consumed and the free side faces filled.
// loop_r names the rapidity pair a five-for-one expansion mints; it is
// ignored otherwise (the consumed walls' loop is inherited).
struct FlipMove {
    FlipKind kind = FlipKind::five_for_one;
    GridPoint location;
    FlipDirection direction = FlipDirection::rise;
    std::optional<RapidityPair> loop_r;
};

// Loop pair used when a five-for-one expansion does not name one.
inline RapidityPair default_loop_r() {
    return RapidityPair{cplx(0.31830988618379067, 0.0), cplx(0.63661977236758134, 0.0)};
}

// Weight recipe for one four-square: the spin sites in slot order plus the
// line pair feeding the weight. Corner formulation: sites are the corners
// (TL, TR, BL, BR) of the irf_weight variant. Midpoint formulation: sites
// are the edge midpoints (in_i, in_j, out_i, out_j) of vertex_weight and
// variant is 0. Line codes: 0 = p, 1 = q, 2 = the square's own loop pair.
struct SquareScheme {
    std::array<GridPoint, 4> sites;
    int variant = 0;
    int line_a = 0;
    int line_b = 1;
};

SquareScheme square_scheme(const FourSquare& sq, Formulation f);

// Resolves a scheme line code (0 = p, 1 = q, 2 = the square's loop) against
// the surface's line bundles.
RapidityPair surface_line(const Surface& s, const FourSquare& sq, int code);

// Centre point of the square's 2x2 block: base + u + v in the square's
// plane.
GridPoint square_center(const FourSquare& sq);

// Geometric corner points of the square's 2x2 block, sorted.
std::array<GridPoint, 4> square_corners(const FourSquare& sq);

// The four boundary segments of the block, each with the smaller endpoint
// first.
std::array<std::pair<GridPoint, GridPoint>, 4> square_sides(const FourSquare& sq);

struct SpinEdge {
    GridPoint a;
    GridPoint b;
    std::string role;  // E1..E4, or rr-crossed for loop self-pair factors
    int r_index = -1;
};

// Factor graph of a surface. Corner formulation: sites are block corners
// (split into summed interior and pinned boundary) plus one center per
// square; centers are summed inside each square weight, never pinned.
// Midpoint formulation: sites are side midpoints, centers empty.
struct SpinGraph {
    std::vector<GridPoint> interior_sites;
    std::vector<GridPoint> boundary_sites;
    std::vector<GridPoint> center_sites;
    std::vector<SpinEdge> edges;
};

// Splits the surface's explicit spin sites into summed (interior) and pinned
// (boundary): corners off the rim vs on it for the corner formulation,
// midpoints of shared vs unshared block sides for the midpoint formulation.
void classify_spin_sites(const Surface& s, std::vector<GridPoint>& interior,
                         std::vector<GridPoint>& boundary);

Surface build_flat_surface(int rows, int cols, Formulation f, const RapidityPair& p,
                           const RapidityPair& q,
                           const std::map<GridPoint, int>& boundary_spins);

// Flat surface with every boundary spin pinned to `spin`.
Surface build_flat_surface_const(int rows, int cols, Formulation f, const RapidityPair& p,
                                 const RapidityPair& q, int spin);

// Boundary sites a flat rows x cols surface requires, for callers that
// assemble their own spin maps.
std::vector<GridPoint> flat_boundary_sites(int rows, int cols, Formulation f);

// Empty result means valid: squares distinct with even bases and loop
// indices in range, every side shared by at most two squares, connected,
// disk topology (V - E + F = 1, rim a single cycle), no forbidden wall
// corner contact, boundary spins pinned exactly at the boundary sites.
std::vector<std::string> validate_surface(const Surface& s);

// Applies one cubic flip. Throws std::invalid_argument when the cube's face
// inventory does not match move.kind (the message names the found pattern)
// or when the flipped surface fails validation.
std::pair<Surface, FactorLedger> apply_flip(const Surface& s, const FlipMove& move,
                                            FactorLedger ledger);

SpinGraph spin_graph(const Surface& s);

std::string surface_to_json(const Surface& s);
Surface surface_from_json(const std::string& text);
void save_surface(const Surface& s, const std::string& path);
Surface load_surface(const std::string& path);

}  // namespace lattice
