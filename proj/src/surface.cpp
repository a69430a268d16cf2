#include "lattice/surface.hpp"

#include <algorithm>
#include <fstream>
#include <queue>
#include <set>
#include <sstream>
#include <stdexcept>

#include "json.hpp"

namespace lattice {

namespace {

const GridPoint kEi{1, 0, 0};
const GridPoint kEj{0, 1, 0};
const GridPoint kEk{0, 0, 1};

GridPoint scaled(const GridPoint& v, int s) { return {v.i * s, v.j * s, v.k * s}; }

void plane_axes(Plane p, GridPoint& u, GridPoint& v) {
    switch (p) {
        case Plane::ij: u = kEi; v = kEj; return;
        case Plane::jk:
        case Plane::kj: u = kEj; v = kEk; return;
        case Plane::ik:
        case Plane::ki: u = kEi; v = kEk; return;
    }
    throw std::logic_error("unknown plane");
}

using Side = std::pair<GridPoint, GridPoint>;

Side make_side(GridPoint a, GridPoint b) {
    if (b < a) std::swap(a, b);
    return {a, b};
}

GridPoint side_midpoint(const Side& s) {
    return {(s.first.i + s.second.i) / 2, (s.first.j + s.second.j) / 2,
            (s.first.k + s.second.k) / 2};
}

bool even_point(const GridPoint& v) {
    return v.i % 2 == 0 && v.j % 2 == 0 && v.k % 2 == 0;
}

std::string side_str(const Side& s) {
    return grid_point_str(s.first) + "-" + grid_point_str(s.second);
}

std::map<Side, int> side_degrees(const std::vector<FourSquare>& squares) {
    std::map<Side, int> deg;
    for (const auto& sq : squares) {
        for (const auto& side : square_sides(sq)) deg[side] += 1;
    }
    return deg;
}

}  // namespace

std::string grid_point_str(const GridPoint& v) {
    std::ostringstream os;
    os << "(" << v.i << "," << v.j << "," << v.k << ")";
    return os.str();
}

const char* plane_name(Plane p) {
    switch (p) {
        case Plane::ij: return "ij";
        case Plane::jk: return "jk";
        case Plane::kj: return "kj";
        case Plane::ki: return "ki";
        case Plane::ik: return "ik";
    }
    throw std::logic_error("unknown plane");
}

Plane plane_from_name(const std::string& name) {
    if (name == "ij") return Plane::ij;
    if (name == "jk") return Plane::jk;
    if (name == "kj") return Plane::kj;
    if (name == "ki") return Plane::ki;
    if (name == "ik") return Plane::ik;
    throw std::runtime_error("unknown plane name: " + name);
}

const char* formulation_name(Formulation f) {
    return f == Formulation::vertex ? "vertex" : "irf";
}

Formulation formulation_from_name(const std::string& name) {
    if (name == "vertex") return Formulation::vertex;
    if (name == "irf") return Formulation::irf;
    throw std::runtime_error("unknown formulation name: " + name);
}

const char* flip_kind_name(FlipKind k) {
    switch (k) {
        case FlipKind::five_for_one: return "five-for-one";
        case FlipKind::three_for_three: return "three-for-three";
        case FlipKind::mixed: return "mixed";
    }
    throw std::logic_error("unknown flip kind");
}

FlipKind flip_kind_from_name(const std::string& name) {
    if (name == "five-for-one") return FlipKind::five_for_one;
    if (name == "three-for-three") return FlipKind::three_for_three;
    if (name == "mixed") return FlipKind::mixed;
    throw std::runtime_error("unknown flip kind: " + name);
}

const char* flip_direction_name(FlipDirection d) {
    return d == FlipDirection::rise ? "rise" : "sink";
}

FlipDirection flip_direction_from_name(const std::string& name) {
    if (name == "rise") return FlipDirection::rise;
    if (name == "sink") return FlipDirection::sink;
    throw std::runtime_error("unknown flip direction: " + name);
}

SquareScheme square_scheme(const FourSquare& sq, Formulation f) {
    const GridPoint n = sq.base;
    auto at = [&](int a, int b, int c) {
        return n + scaled(kEi, a) + scaled(kEj, b) + scaled(kEk, c);
    };
    SquareScheme sch;
    if (f == Formulation::irf) {
        switch (sq.plane) {
            case Plane::ij:
                sch = {{at(0, 2, 0), at(2, 2, 0), at(0, 0, 0), at(2, 0, 0)}, 1, 0, 1};
                break;
            case Plane::jk:
                sch = {{at(0, 2, 2), at(0, 2, 0), at(0, 0, 2), at(0, 0, 0)}, 1, 0, 2};
                break;
            case Plane::kj:
                sch = {{at(0, 2, 2), at(0, 0, 2), at(0, 2, 0), at(0, 0, 0)}, 2, 2, 0};
                break;
            case Plane::ki:
                sch = {{at(0, 0, 2), at(0, 0, 0), at(2, 0, 2), at(2, 0, 0)}, 3, 1, 2};
                break;
            case Plane::ik:
                sch = {{at(0, 0, 2), at(2, 0, 2), at(0, 0, 0), at(2, 0, 0)}, 4, 2, 1};
                break;
        }
    } else {
        switch (sq.plane) {
            case Plane::ij:
                sch = {{at(0, 1, 0), at(1, 0, 0), at(2, 1, 0), at(1, 2, 0)}, 0, 0, 1};
                break;
            case Plane::ik:
                sch = {{at(0, 0, 1), at(1, 0, 0), at(2, 0, 1), at(1, 0, 2)}, 0, 2, 1};
                break;
            case Plane::jk:
                sch = {{at(0, 1, 2), at(0, 0, 1), at(0, 1, 0), at(0, 2, 1)}, 0, 0, 2};
                break;
            case Plane::ki:
                sch = {{at(1, 0, 2), at(2, 0, 1), at(1, 0, 0), at(0, 0, 1)}, 0, 1, 2};
                break;
            case Plane::kj:
                sch = {{at(0, 2, 1), at(0, 1, 0), at(0, 0, 1), at(0, 1, 2)}, 0, 2, 0};
                break;
        }
    }
    return sch;
}

RapidityPair surface_line(const Surface& s, const FourSquare& sq, int code) {
    if (code == 0) return s.p;
    if (code == 1) return s.q;
    if (sq.r_index < 0 || sq.r_index >= static_cast<int>(s.r_lines.size())) {
        throw std::invalid_argument("square at " + grid_point_str(sq.base) +
                                    " references loop line " + std::to_string(sq.r_index) +
                                    " but the surface carries " +
                                    std::to_string(s.r_lines.size()));
    }
    return s.r_lines[static_cast<std::size_t>(sq.r_index)];
}

GridPoint square_center(const FourSquare& sq) {
    GridPoint u, v;
    plane_axes(sq.plane, u, v);
    return sq.base + u + v;
}

std::array<GridPoint, 4> square_corners(const FourSquare& sq) {
    GridPoint u, v;
    plane_axes(sq.plane, u, v);
    std::array<GridPoint, 4> out = {sq.base, sq.base + scaled(u, 2), sq.base + scaled(v, 2),
                                    sq.base + scaled(u, 2) + scaled(v, 2)};
    std::sort(out.begin(), out.end());
    return out;
}

std::array<std::pair<GridPoint, GridPoint>, 4> square_sides(const FourSquare& sq) {
    GridPoint u, v;
    plane_axes(sq.plane, u, v);
    const GridPoint b = sq.base;
    const GridPoint bu = b + scaled(u, 2);
    const GridPoint bv = b + scaled(v, 2);
    const GridPoint buv = bu + scaled(v, 2);
    return {make_side(b, bu), make_side(b, bv), make_side(bu, buv), make_side(bv, buv)};
}

void classify_spin_sites(const Surface& s, std::vector<GridPoint>& interior,
                         std::vector<GridPoint>& boundary) {
    interior.clear();
    boundary.clear();
    auto deg = side_degrees(s.squares);
    if (s.formulation == Formulation::vertex) {
        for (const auto& [side, d] : deg) {
            (d == 2 ? interior : boundary).push_back(side_midpoint(side));
        }
    } else {
        std::set<GridPoint> corners;
        std::set<GridPoint> rim;
        for (const auto& sq : s.squares) {
            for (const auto& c : square_corners(sq)) corners.insert(c);
        }
        for (const auto& [side, d] : deg) {
            if (d == 1) {
                rim.insert(side.first);
                rim.insert(side.second);
            }
        }
        for (const auto& c : corners) {
            (rim.count(c) ? boundary : interior).push_back(c);
        }
    }
    std::sort(interior.begin(), interior.end());
    std::sort(boundary.begin(), boundary.end());
}

std::vector<GridPoint> flat_boundary_sites(int rows, int cols, Formulation f) {
    if (rows < 1 || cols < 1) throw std::invalid_argument("flat surface needs rows, cols >= 1");
    Surface s;
    s.formulation = f;
    for (int a = 0; a < cols; ++a) {
        for (int b = 0; b < rows; ++b) {
            s.squares.push_back(FourSquare{GridPoint{2 * a, 2 * b, 0}, Plane::ij, -1, true});
        }
    }
    std::vector<GridPoint> interior, boundary;
    classify_spin_sites(s, interior, boundary);
    return boundary;
}

Surface build_flat_surface(int rows, int cols, Formulation f, const RapidityPair& p,
                           const RapidityPair& q,
                           const std::map<GridPoint, int>& boundary_spins) {
    Surface s;
    s.formulation = f;
    s.p = p;
    s.q = q;
    if (rows < 1 || cols < 1) throw std::invalid_argument("flat surface needs rows, cols >= 1");
    for (int a = 0; a < cols; ++a) {
        for (int b = 0; b < rows; ++b) {
            s.squares.push_back(FourSquare{GridPoint{2 * a, 2 * b, 0}, Plane::ij, -1, true});
        }
    }
    std::sort(s.squares.begin(), s.squares.end());
    for (const auto& site : flat_boundary_sites(rows, cols, f)) {
        auto it = boundary_spins.find(site);
        if (it == boundary_spins.end()) {
            throw std::invalid_argument("missing boundary spin at " + grid_point_str(site));
        }
        s.boundary_spins[site] = it->second;
    }
    if (s.boundary_spins.size() != boundary_spins.size()) {
        for (const auto& [site, spin] : boundary_spins) {
            (void)spin;
            if (!s.boundary_spins.count(site)) {
                throw std::invalid_argument("spin pinned at non-boundary site " +
                                            grid_point_str(site));
            }
        }
    }
    return s;
}

Surface build_flat_surface_const(int rows, int cols, Formulation f, const RapidityPair& p,
                                 const RapidityPair& q, int spin) {
    std::map<GridPoint, int> pins;
    for (const auto& site : flat_boundary_sites(rows, cols, f)) pins[site] = spin;
    return build_flat_surface(rows, cols, f, p, q, pins);
}

std::vector<std::string> validate_surface(const Surface& s) {
    std::vector<std::string> errs;
    if (s.squares.empty()) {
        errs.push_back("surface has no four-squares");
        return errs;
    }

    std::map<std::pair<GridPoint, int>, int> tag_count;
    for (const auto& sq : s.squares) {
        tag_count[{sq.base, static_cast<int>(sq.plane)}] += 1;
    }
    for (const auto& [tag, n] : tag_count) {
        if (n > 1) {
            errs.push_back("duplicate " + std::string(plane_name(static_cast<Plane>(tag.second))) +
                           " square at " + grid_point_str(tag.first));
        }
    }

    std::map<std::array<GridPoint, 4>, int> block_count;
    for (const auto& sq : s.squares) block_count[square_corners(sq)] += 1;
    for (const auto& [block, n] : block_count) {
        if (n > 1) {
            errs.push_back("two four-squares occupy the block at " + grid_point_str(block[0]));
        }
    }

    for (const auto& sq : s.squares) {
        if (!even_point(sq.base)) {
            errs.push_back("four-square base " + grid_point_str(sq.base) + " is not even");
        }
        if (sq.plane == Plane::ij) {
            if (sq.r_index != -1) {
                errs.push_back("flat square at " + grid_point_str(sq.base) +
                               " must not reference a loop");
            }
        } else if (sq.r_index < 0 || sq.r_index >= static_cast<int>(s.r_lines.size())) {
            errs.push_back("wall at " + grid_point_str(sq.base) + " references loop index " +
                           std::to_string(sq.r_index) + " outside r_lines");
        }
    }

    auto deg = side_degrees(s.squares);
    for (const auto& [side, d] : deg) {
        if (d > 2) {
            errs.push_back("side " + side_str(side) + " is shared by " + std::to_string(d) +
                           " squares");
        }
    }

    // Connectivity over shared sides.
    {
        std::map<Side, std::vector<std::size_t>> by_side;
        for (std::size_t idx = 0; idx < s.squares.size(); ++idx) {
            for (const auto& side : square_sides(s.squares[idx])) by_side[side].push_back(idx);
        }
        std::vector<char> seen(s.squares.size(), 0);
        std::queue<std::size_t> todo;
        todo.push(0);
        seen[0] = 1;
        while (!todo.empty()) {
            std::size_t idx = todo.front();
            todo.pop();
            for (const auto& side : square_sides(s.squares[idx])) {
                for (std::size_t other : by_side[side]) {
                    if (!seen[other]) {
                        seen[other] = 1;
                        todo.push(other);
                    }
                }
            }
        }
        if (std::count(seen.begin(), seen.end(), 1) != static_cast<long>(s.squares.size())) {
            errs.push_back("surface is not connected");
        }
    }

    // Disk topology: Euler characteristic and a single rim cycle.
    {
        std::set<GridPoint> corners;
        for (const auto& sq : s.squares) {
            for (const auto& c : square_corners(sq)) corners.insert(c);
        }
        long euler = static_cast<long>(corners.size()) - static_cast<long>(deg.size()) +
                     static_cast<long>(s.squares.size());
        if (euler != 1) {
            errs.push_back("surface is not a disk (V - E + F = " + std::to_string(euler) + ")");
        }

        std::vector<Side> rim;
        for (const auto& [side, d] : deg) {
            if (d == 1) rim.push_back(side);
        }
        if (rim.empty()) {
            errs.push_back("surface has no rim");
        } else {
            std::map<GridPoint, std::vector<std::size_t>> rim_at;
            for (std::size_t idx = 0; idx < rim.size(); ++idx) {
                rim_at[rim[idx].first].push_back(idx);
                rim_at[rim[idx].second].push_back(idx);
            }
            bool degrees_ok = true;
            for (const auto& [corner, sides] : rim_at) {
                if (sides.size() != 2) {
                    errs.push_back("rim is not a single cycle (corner " + grid_point_str(corner) +
                                   " touches " + std::to_string(sides.size()) + " rim sides)");
                    degrees_ok = false;
                }
            }
            if (degrees_ok) {
                std::vector<char> seen(rim.size(), 0);
                std::queue<std::size_t> todo;
                todo.push(0);
                seen[0] = 1;
                std::size_t reached = 1;
                while (!todo.empty()) {
                    std::size_t idx = todo.front();
                    todo.pop();
                    for (const auto& corner : {rim[idx].first, rim[idx].second}) {
                        for (std::size_t other : rim_at[corner]) {
                            if (!seen[other]) {
                                seen[other] = 1;
                                ++reached;
                                todo.push(other);
                            }
                        }
                    }
                }
                if (reached != rim.size()) {
                    errs.push_back("rim splits into multiple cycles");
                }
            }
        }
    }

    // Forbidden wall contacts around a vertical lattice line.
    {
        std::map<std::pair<GridPoint, int>, const FourSquare*> at;
        for (const auto& sq : s.squares) at[{sq.base, static_cast<int>(sq.plane)}] = &sq;
        auto find = [&](const GridPoint& base, Plane p) -> const FourSquare* {
            auto it = at.find({base, static_cast<int>(p)});
            return it == at.end() ? nullptr : it->second;
        };
        for (const auto& sq : s.squares) {
            if (sq.plane == Plane::ki && sq.r_positive) {
                const FourSquare* other = find(sq.base + scaled(kEi, 2), Plane::kj);
                if (other && other->r_positive) {
                    errs.push_back("corner condition violated: ki wall at " +
                                   grid_point_str(sq.base) + " meets kj wall at " +
                                   grid_point_str(other->base) + " on a positive loop");
                }
            }
            if (sq.plane == Plane::kj && !sq.r_positive) {
                const FourSquare* other = find(sq.base + scaled(kEj, 2), Plane::ki);
                if (other && !other->r_positive) {
                    errs.push_back("corner condition violated: kj wall at " +
                                   grid_point_str(sq.base) + " meets ki wall at " +
                                   grid_point_str(other->base) + " on a negative loop");
                }
            }
        }
    }

    // Boundary spins pinned exactly at the boundary sites.
    {
        std::vector<GridPoint> interior, boundary;
        classify_spin_sites(s, interior, boundary);
        std::set<GridPoint> bset(boundary.begin(), boundary.end());
        for (const auto& site : boundary) {
            if (!s.boundary_spins.count(site)) {
                errs.push_back("boundary site " + grid_point_str(site) + " has no pinned spin");
            }
        }
        for (const auto& [site, spin] : s.boundary_spins) {
            (void)spin;
            if (!bset.count(site)) {
                errs.push_back("pinned spin at non-boundary site " + grid_point_str(site));
            }
        }
    }

    return errs;
}

std::pair<Surface, FactorLedger> apply_flip(const Surface& s, const FlipMove& move,
                                            FactorLedger ledger) {
    if (!even_point(move.location)) {
        throw std::invalid_argument("flip location " + grid_point_str(move.location) +
                                    " must be even");
    }
    {
        auto errs = validate_surface(s);
        if (!errs.empty()) {
            throw std::invalid_argument("flip applied to invalid surface: " + errs.front());
        }
    }

    const GridPoint c = move.location;
    const GridPoint c_top = c + scaled(kEk, 2);
    const bool rise = move.direction == FlipDirection::rise;

    std::map<std::pair<GridPoint, int>, const FourSquare*> at;
    for (const auto& sq : s.squares) at[{sq.base, static_cast<int>(sq.plane)}] = &sq;
    auto find = [&](const GridPoint& base, Plane p) -> const FourSquare* {
        auto it = at.find({base, static_cast<int>(p)});
        return it == at.end() ? nullptr : it->second;
    };
    auto find_wall = [&](const GridPoint& base, Plane a, Plane b) -> const FourSquare* {
        const FourSquare* wa = find(base, a);
        const FourSquare* wb = find(base, b);
        if (wa && wb) {
            throw std::invalid_argument("two walls occupy the cube face at " +
                                        grid_point_str(base));
        }
        return wa ? wa : wb;
    };

    const FourSquare* floor = find(c, Plane::ij);
    const FourSquare* ceiling = find(c_top, Plane::ij);
    if (rise && (!floor || ceiling)) {
        throw std::invalid_argument(
            "rise flip at " + grid_point_str(c) +
            " expects the flat face on the cube floor and a free ceiling");
    }
    if (!rise && (!ceiling || floor)) {
        throw std::invalid_argument(
            "sink flip at " + grid_point_str(c) +
            " expects the flat face on the cube ceiling and a free floor");
    }

    struct CubeFace {
        GridPoint base;
        Plane first;
        Plane second;
        Plane rise_type;
        Plane sink_type;
    };
    const std::array<CubeFace, 4> faces = {
        CubeFace{c, Plane::ik, Plane::ki, Plane::ik, Plane::ki},
        CubeFace{c + scaled(kEi, 2), Plane::jk, Plane::kj, Plane::jk, Plane::kj},
        CubeFace{c + scaled(kEj, 2), Plane::ik, Plane::ki, Plane::ki, Plane::ik},
        CubeFace{c, Plane::jk, Plane::kj, Plane::kj, Plane::jk},
    };

    std::vector<const FourSquare*> walls;
    std::vector<const CubeFace*> free_faces;
    for (const auto& face : faces) {
        const FourSquare* w = find_wall(face.base, face.first, face.second);
        if (w) {
            walls.push_back(w);
        } else {
            free_faces.push_back(&face);
        }
    }

    FlipKind actual;
    int delta = 0;
    if (walls.empty()) {
        actual = FlipKind::five_for_one;
        delta = 1;
    } else if (walls.size() == 4) {
        actual = FlipKind::five_for_one;
        delta = -1;
    } else if (walls.size() == 2) {
        actual = FlipKind::three_for_three;
    } else {
        actual = FlipKind::mixed;
    }
    if (actual != move.kind) {
        throw std::invalid_argument("cube at " + grid_point_str(c) + " carries " +
                                    std::to_string(walls.size()) + " side walls: that is a " +
                                    flip_kind_name(actual) + " move, not " +
                                    flip_kind_name(move.kind));
    }

    std::vector<RapidityPair> r_lines = s.r_lines;
    int loop_index;
    bool loop_positive;
    if (!walls.empty()) {
        loop_index = walls.front()->r_index;
        loop_positive = walls.front()->r_positive;
        for (const FourSquare* w : walls) {
            if (w->r_index != loop_index || w->r_positive != loop_positive) {
                throw std::invalid_argument("consumed walls at cube " + grid_point_str(c) +
                                            " lie on different loops");
            }
        }
    } else {
        loop_positive = rise;
        const RapidityPair pair = move.loop_r.value_or(default_loop_r());
        loop_index = -1;
        for (std::size_t idx = 0; idx < r_lines.size(); ++idx) {
            if (r_lines[idx].value == pair.value && r_lines[idx].primed == pair.primed) {
                loop_index = static_cast<int>(idx);
                break;
            }
        }
        if (loop_index < 0) {
            loop_index = static_cast<int>(r_lines.size());
            r_lines.push_back(pair);
        }
    }

    std::set<FourSquare> consumed;
    consumed.insert(rise ? *floor : *ceiling);
    for (const FourSquare* w : walls) consumed.insert(*w);

    std::vector<FourSquare> squares;
    for (const auto& sq : s.squares) {
        if (!consumed.count(sq)) squares.push_back(sq);
    }
    squares.push_back(FourSquare{rise ? c_top : c, Plane::ij, -1, true});
    for (const CubeFace* face : free_faces) {
        squares.push_back(FourSquare{face->base, rise ? face->rise_type : face->sink_type,
                                     loop_index, loop_positive});
    }
    std::sort(squares.begin(), squares.end());

    if (walls.size() == 4 && loop_index == static_cast<int>(r_lines.size()) - 1) {
        bool referenced = false;
        for (const auto& sq : squares) referenced = referenced || sq.r_index == loop_index;
        if (!referenced) r_lines.pop_back();
    }

    Surface out;
    out.formulation = s.formulation;
    out.p = s.p;
    out.q = s.q;
    out.r_lines = std::move(r_lines);
    out.squares = std::move(squares);
    out.boundary_spins = s.boundary_spins;
    out.ledger.n_power = ledger.n_power + delta;

    auto errs = validate_surface(out);
    if (!errs.empty()) {
        throw std::invalid_argument("flip at " + grid_point_str(c) +
                                    " yields an invalid surface: " + errs.front());
    }
    return {out, out.ledger};
}

SpinGraph spin_graph(const Surface& s) {
    SpinGraph g;
    classify_spin_sites(s, g.interior_sites, g.boundary_sites);

    if (s.formulation == Formulation::vertex) {
        for (const auto& sq : s.squares) {
            const auto sch = square_scheme(sq, Formulation::vertex);
            g.edges.push_back({sch.sites[0], sch.sites[1], "E1", -1});
            g.edges.push_back({sch.sites[2], sch.sites[3], "E2", -1});
            g.edges.push_back({sch.sites[1], sch.sites[2], "E3", -1});
            g.edges.push_back({sch.sites[3], sch.sites[0], "E4", -1});
        }
        return g;
    }

    struct CrossFactor {
        GridPoint from;
        GridPoint to;
        bool forward;  // true: unprimed-to-primed letter order
        int r_index;
    };
    std::map<std::pair<Side, int>, std::vector<CrossFactor>> cross;

    for (const auto& sq : s.squares) {
        const auto sch = square_scheme(sq, Formulation::irf);
        GridPoint u, v;
        plane_axes(sq.plane, u, v);
        const GridPoint center = sq.base + u + v;
        g.center_sites.push_back(center);

        const GridPoint xa = sch.sites[0];
        const GridPoint xb = sch.sites[1];
        const GridPoint xc = sch.sites[2];
        const GridPoint xd = sch.sites[3];
        if (sch.variant == 1 || sch.variant == 4) {
            g.edges.push_back({xc, center, "E3", -1});
            g.edges.push_back({xb, center, "E4", -1});
            g.edges.push_back({center, xa, "E2", -1});
            g.edges.push_back({center, xd, "E1", -1});
        } else {
            g.edges.push_back({center, xb, "E3", -1});
            g.edges.push_back({center, xc, "E4", -1});
            g.edges.push_back({xd, center, "E2", -1});
            g.edges.push_back({xa, center, "E1", -1});
        }
        if (sch.variant == 3) {
            cross[{make_side(xc, xd), sq.r_index}].push_back({xc, xd, true, sq.r_index});
            cross[{make_side(xb, xa), sq.r_index}].push_back({xb, xa, false, sq.r_index});
        } else if (sch.variant == 4) {
            cross[{make_side(xa, xc), sq.r_index}].push_back({xa, xc, true, sq.r_index});
            cross[{make_side(xd, xb), sq.r_index}].push_back({xd, xb, false, sq.r_index});
        }
    }

    // Inverse pairs on a shared side multiply to one and drop out; everything
    // else survives as an explicit crossed edge.
    for (auto& [key, factors] : cross) {
        (void)key;
        std::vector<char> used(factors.size(), 0);
        for (std::size_t a = 0; a < factors.size(); ++a) {
            if (used[a]) continue;
            for (std::size_t b = a + 1; b < factors.size(); ++b) {
                if (used[b]) continue;
                if (factors[a].forward != factors[b].forward &&
                    factors[a].from == factors[b].to && factors[a].to == factors[b].from) {
                    used[a] = used[b] = 1;
                    break;
                }
            }
        }
        for (std::size_t a = 0; a < factors.size(); ++a) {
            if (!used[a]) {
                g.edges.push_back(
                    {factors[a].from, factors[a].to, "rr-crossed", factors[a].r_index});
            }
        }
    }

    std::sort(g.center_sites.begin(), g.center_sites.end());
    return g;
}

namespace {

nlohmann::ordered_json point_json(const GridPoint& v) {
    return nlohmann::ordered_json::array({v.i, v.j, v.k});
}

GridPoint point_from_json(const nlohmann::ordered_json& j) {
    if (!j.is_array() || j.size() != 3) {
        throw std::runtime_error("lattice point must be an array of three integers");
    }
    return {j[0].get<int>(), j[1].get<int>(), j[2].get<int>()};
}

nlohmann::ordered_json pair_json(const RapidityPair& p) {
    return nlohmann::ordered_json::array(
        {p.value.real(), p.value.imag(), p.primed.real(), p.primed.imag()});
}

RapidityPair pair_from_json(const nlohmann::ordered_json& j) {
    if (!j.is_array() || j.size() != 4) {
        throw std::runtime_error("rapidity pair must be an array of four numbers");
    }
    return RapidityPair{{j[0].get<double>(), j[1].get<double>()},
                        {j[2].get<double>(), j[3].get<double>()}};
}

}  // namespace

std::string surface_to_json(const Surface& s) {
    nlohmann::ordered_json j;
    j["schema_version"] = 1;
    j["kind"] = "surface";
    j["formulation"] = formulation_name(s.formulation);
    j["p"] = pair_json(s.p);
    j["q"] = pair_json(s.q);
    j["r_lines"] = nlohmann::ordered_json::array();
    for (const auto& r : s.r_lines) j["r_lines"].push_back(pair_json(r));
    j["squares"] = nlohmann::ordered_json::array();
    for (const auto& sq : s.squares) {
        nlohmann::ordered_json e;
        e["base"] = point_json(sq.base);
        e["plane"] = plane_name(sq.plane);
        e["r_index"] = sq.r_index;
        e["r_positive"] = sq.r_positive;
        j["squares"].push_back(e);
    }
    j["boundary_spins"] = nlohmann::ordered_json::array();
    for (const auto& [site, spin] : s.boundary_spins) {
        nlohmann::ordered_json e;
        e["site"] = point_json(site);
        e["spin"] = spin;
        j["boundary_spins"].push_back(e);
    }
    j["n_power"] = s.ledger.n_power;
    return j.dump(2) + "\n";
}

Surface surface_from_json(const std::string& text) {
    nlohmann::ordered_json j;
    try {
        j = nlohmann::ordered_json::parse(text);
    } catch (const std::exception& e) {
        throw std::runtime_error(std::string("surface parse failure: ") + e.what());
    }
    if (!j.is_object() || j.value("kind", "") != "surface") {
        throw std::runtime_error("not a surface file");
    }
    Surface s;
    s.formulation = formulation_from_name(j.at("formulation").get<std::string>());
    s.p = pair_from_json(j.at("p"));
    s.q = pair_from_json(j.at("q"));
    for (const auto& r : j.at("r_lines")) s.r_lines.push_back(pair_from_json(r));
    for (const auto& e : j.at("squares")) {
        FourSquare sq;
        sq.base = point_from_json(e.at("base"));
        sq.plane = plane_from_name(e.at("plane").get<std::string>());
        sq.r_index = e.at("r_index").get<int>();
        sq.r_positive = e.at("r_positive").get<bool>();
        s.squares.push_back(sq);
    }
    std::sort(s.squares.begin(), s.squares.end());
    for (const auto& e : j.at("boundary_spins")) {
        s.boundary_spins[point_from_json(e.at("site"))] = e.at("spin").get<int>();
    }
    s.ledger.n_power = j.value("n_power", 0);
    return s;
}

void save_surface(const Surface& s, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open " + path + " for writing");
    out << surface_to_json(s);
    if (!out) throw std::runtime_error("failed writing " + path);
}

Surface load_surface(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return surface_from_json(buf.str());
}

}  // namespace lattice
