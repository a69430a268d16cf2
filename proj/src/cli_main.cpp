#include <algorithm>
#include <cstdint>
#include <iostream>
#include <map>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "lattice/classical.hpp"
#include "lattice/partition.hpp"
#include "lattice/quad.hpp"
#include "lattice/relations.hpp"
#include "lattice/report.hpp"
#include "lattice/surface.hpp"
#include "lattice/weights.hpp"

namespace {

using namespace lattice;
using ordered_json = nlohmann::ordered_json;

// Reports never echo the thread count: the same configuration must produce
// the same bytes regardless of how the work was parallelized.

double pick_tol(double flag_tol, double fallback) {
    return flag_tol > 0.0 ? flag_tol : fallback;
}

int finish(ordered_json& doc, const std::string& out) {
    bool ok = true;
    for (const auto& check : doc["checks"]) {
        if (check.contains("within_tolerance") && !check["within_tolerance"].get<bool>()) {
            ok = false;
        }
    }
    doc["all_within_tolerance"] = ok;
    write_report(doc, out);
    return ok ? 0 : 1;
}

// Stream for sweep `index` of a run seeded with `seed`: decorrelated
// deterministically, independent of sweep order.
Rng sweep_rng(std::uint64_t seed, int index) {
    return Rng(seed * 0x9e3779b97f4a7c15ULL + static_cast<std::uint64_t>(index) + 1);
}

std::vector<RapidityPair> default_relation_lines(const WeightModel& model) {
    if (model.family_id() == "exp_table_n2") {
        return {model.line_p(), model.line_q(), model.line_r()};
    }
    return {{cplx(0.31, 0.0), cplx(0.17, 0.0)},
            {cplx(0.47, 0.0), cplx(0.11, 0.0)},
            {cplx(0.59, 0.0), cplx(0.23, 0.0)}};
}

std::vector<RapidityPair> default_classical_lines(const LagrangianModel& m) {
    if (m.family == LagrangianModel::Family::hyperbolic) {
        return {{cplx(0.0, 1.9), cplx(0.0, 1.3)},
                {cplx(0.0, 0.8), cplx(0.0, 0.5)},
                {cplx(0.0, 0.3), cplx(0.0, 0.1)}};
    }
    return {{cplx(1.9, 0.0), cplx(1.3, 0.0)},
            {cplx(0.8, 0.0), cplx(0.5, 0.0)},
            {cplx(0.3, 0.0), cplx(0.1, 0.0)}};
}

std::vector<double> default_classical_boundary(ClassicalRelation kind) {
    switch (kind) {
        case ClassicalRelation::star_star:
        case ClassicalRelation::four_constraints:
            return {0.0, 0.4, 0.7, 0.1};
        case ClassicalRelation::ybe:
            return {1.2, 0.5, 0.2, 0.9, 0.6, 0.1};
        case ClassicalRelation::closure:
            return {0.3, 0.5, 0.0, 0.6, 0.55, 0.7};
    }
    throw std::invalid_argument("unknown classical relation");
}

double default_classical_tol(ClassicalRelation kind) {
    switch (kind) {
        case ClassicalRelation::star_star: return 1e-8;
        case ClassicalRelation::four_constraints: return 1e-8;
        case ClassicalRelation::ybe: return 1e-6;
        case ClassicalRelation::closure: return 1e-6;
    }
    return 1e-8;
}

ordered_json vector_json(const VectorVariable& v) {
    ordered_json arr = ordered_json::array();
    for (cplx c : v) arr.push_back(complex_json(c));
    return arr;
}

GridPoint parse_grid_point(const std::string& text) {
    GridPoint p;
    if (std::sscanf(text.c_str(), "%d,%d,%d", &p.i, &p.j, &p.k) != 3) {
        throw std::invalid_argument("expected a lattice point formatted i,j,k, got \"" +
                                    text + "\"");
    }
    return p;
}

struct QuadDataOptions {
    std::string family = "q1a";
    int delta = 0;
    double m = 0.0;
    int n = 1;
    int seeds = 1;
    std::uint64_t seed = 1;
    double tol = 0.0;
    std::string out;
};

void add_quad_flags(CLI::App* cmd, QuadDataOptions& opt) {
    cmd->add_option("--family", opt.family, "quad family: q1a, q1h, q1e, q3m, scalar-linear");
    cmd->add_option("--delta", opt.delta, "delta parameter of q1a / q1h");
    cmd->add_option("--m", opt.m, "elliptic parameter of q1e");
    cmd->add_option("--n", opt.n, "component count")->check(CLI::PositiveNumber);
    cmd->add_option("--seeds", opt.seeds, "number of random sweeps")->check(CLI::PositiveNumber);
    cmd->add_option("--seed", opt.seed, "base RNG seed");
    cmd->add_option("--tol", opt.tol, "tolerance override");
    cmd->add_option("--out", opt.out, "report path (stdout when omitted)");
}

ordered_json quad_config(const QuadDataOptions& opt, double tol) {
    ordered_json cfg;
    cfg["family"] = opt.family;
    cfg["delta"] = opt.delta;
    cfg["m"] = opt.m;
    cfg["n"] = opt.n;
    cfg["seeds"] = opt.seeds;
    cfg["seed"] = opt.seed;
    cfg["tol"] = tol;
    return cfg;
}

bool is_q3m(const QuadFamily& fam) { return fam.kind == QuadFamily::Kind::q3m; }

VectorVariable draw_corner(const QuadFamily& fam, Rng& rng, int n) {
    return is_q3m(fam) ? random_product_one(rng, n) : random_vector(rng, n);
}

FaceParam draw_face(const QuadFamily& fam, Rng& rng, int n) {
    return {is_q3m(fam) ? random_product_one(rng, n) : random_vector(rng, n)};
}

EdgeParam draw_edge(Rng& rng) {
    return {random_annulus(rng, 0.3, 1.1), random_annulus(rng, 0.3, 1.1)};
}

int run_quad_eval(const QuadDataOptions& opt) {
    const QuadFamily fam = quad_family_from_name(opt.family, opt.delta, opt.m);
    const double tol = pick_tol(opt.tol, 1e-9);
    ordered_json doc = make_report("quad eval");
    doc["config"] = quad_config(opt, tol);
    doc["checks"] = ordered_json::array();
    for (int s = 0; s < opt.seeds; ++s) {
        Rng rng = sweep_rng(opt.seed, s);
        const auto x = draw_corner(fam, rng, opt.n);
        const auto u = draw_corner(fam, rng, opt.n);
        const auto y = draw_corner(fam, rng, opt.n);
        const auto v = draw_corner(fam, rng, opt.n);
        const FaceParam w = draw_face(fam, rng, opt.n);
        const EdgeParam alpha = draw_edge(rng);
        const EdgeParam beta = draw_edge(rng);
        ordered_json entry;
        entry["sweep"] = s;
        if (fam.kind == QuadFamily::Kind::q1a || fam.kind == QuadFamily::Kind::q1h ||
            fam.kind == QuadFamily::Kind::q1e) {
            const auto legs = quad_eval(fam, x, u, y, v, alpha, beta, w, QuadForm::fourleg);
            const auto affine = quad_eval(fam, x, u, y, v, alpha, beta, w, QuadForm::affine);
            double worst = 0.0;
            for (std::size_t k = 0; k < legs.size(); ++k) {
                cplx cleared = legs[k];
                for (int i = 0; i < opt.n; ++i) {
                    const cplx wk = w.components[k];
                    cleared *= (wk - x[static_cast<std::size_t>(i)]) *
                               (wk - u[static_cast<std::size_t>(i)]) *
                               (wk - y[static_cast<std::size_t>(i)]) *
                               (wk - v[static_cast<std::size_t>(i)]);
                }
                worst = std::max(worst, relative_deviation(cleared, affine[k]));
            }
            entry["form_deviation"] = worst;
            entry["within_tolerance"] = worst <= tol;
        } else {
            const auto values = quad_eval(fam, x, u, y, v, alpha, beta, w, QuadForm::fourleg);
            ordered_json mags = ordered_json::array();
            for (cplx c : values) mags.push_back(std::abs(c));
            entry["residual_magnitudes"] = mags;
        }
        doc["checks"].push_back(entry);
    }
    return finish(doc, opt.out);
}

int run_quad_solve(const QuadDataOptions& opt) {
    const QuadFamily fam = quad_family_from_name(opt.family, opt.delta, opt.m);
    const double tol = pick_tol(opt.tol, 1e-11);
    ordered_json doc = make_report("quad solve");
    doc["config"] = quad_config(opt, tol);
    doc["checks"] = ordered_json::array();
    for (int s = 0; s < opt.seeds; ++s) {
        Rng rng = sweep_rng(opt.seed, s);
        const auto x = draw_corner(fam, rng, opt.n);
        const auto u = draw_corner(fam, rng, opt.n);
        const auto y = draw_corner(fam, rng, opt.n);
        const FaceParam w = draw_face(fam, rng, opt.n);
        const EdgeParam alpha = draw_edge(rng);
        const EdgeParam beta = draw_edge(rng);
        const auto v = solve_corner(fam, CornerSlot::v, x, u, y, {}, alpha, beta, w);
        const auto residuals = quad_eval(fam, x, u, y, v, alpha, beta, w, QuadForm::fourleg);
        double worst = 0.0;
        for (cplx r : residuals) worst = std::max(worst, std::abs(r));
        ordered_json entry;
        entry["sweep"] = s;
        entry["solved_v"] = vector_json(v);
        entry["max_abs_residual"] = worst;
        entry["within_tolerance"] = worst <= tol;
        doc["checks"].push_back(entry);
    }
    return finish(doc, opt.out);
}

int run_quad_consistency(const QuadDataOptions& opt) {
    const QuadFamily fam = quad_family_from_name(opt.family, opt.delta, opt.m);
    const double tol = pick_tol(opt.tol, 1e-8);
    ordered_json doc = make_report("quad consistency");
    doc["config"] = quad_config(opt, tol);
    doc["checks"] = ordered_json::array();
    for (int s = 0; s < opt.seeds; ++s) {
        Rng rng = sweep_rng(opt.seed, s);
        const auto x0 = draw_corner(fam, rng, opt.n);
        const auto x1 = draw_corner(fam, rng, opt.n);
        const auto x2 = draw_corner(fam, rng, opt.n);
        const auto x3 = draw_corner(fam, rng, opt.n);
        const FaceParam w = draw_face(fam, rng, opt.n);
        const EdgeParam alpha = draw_edge(rng);
        const EdgeParam beta = draw_edge(rng);
        const EdgeParam gamma = draw_edge(rng);
        const auto report =
            consistency_check(fam, x0, x1, x2, x3, alpha, beta, gamma, w, tol);
        ordered_json entry;
        entry["sweep"] = s;
        entry["verdict"] = report.verdict;
        entry["max_pairwise_deviation"] = report.max_pairwise_deviation;
        if (!report.failure.empty()) entry["failure"] = report.failure;
        entry["x123"] = vector_json(report.x123_ab);
        entry["within_tolerance"] = report.verdict == "consistent";
        doc["checks"].push_back(entry);
    }
    return finish(doc, opt.out);
}

int run_quad_symmetry(const QuadDataOptions& opt) {
    const QuadFamily fam = quad_family_from_name(opt.family, opt.delta, opt.m);
    const double tol = pick_tol(opt.tol, 1e-9);
    ordered_json doc = make_report("quad symmetry");
    doc["config"] = quad_config(opt, tol);
    doc["checks"] = ordered_json::array();
    for (int s = 0; s < opt.seeds; ++s) {
        Rng rng = sweep_rng(opt.seed, s);
        const auto x = draw_corner(fam, rng, opt.n);
        const auto u = draw_corner(fam, rng, opt.n);
        const auto y = draw_corner(fam, rng, opt.n);
        const auto v = draw_corner(fam, rng, opt.n);
        const FaceParam w = draw_face(fam, rng, opt.n);
        const EdgeParam alpha = draw_edge(rng);
        const EdgeParam beta = draw_edge(rng);
        const auto report = symmetry_check(fam, x, u, y, v, alpha, beta, w);
        const double worst = std::max(
            {report.swap_residual, report.hat_beta_residual, report.hat_alpha_residual});
        ordered_json entry;
        entry["sweep"] = s;
        entry["swap_residual"] = report.swap_residual;
        entry["hat_beta_residual"] = report.hat_beta_residual;
        entry["hat_alpha_residual"] = report.hat_alpha_residual;
        entry["within_tolerance"] = worst <= tol;
        doc["checks"].push_back(entry);
    }
    return finish(doc, opt.out);
}

int run_quad_degeneration(const QuadDataOptions& opt) {
    const double tol = pick_tol(opt.tol, 1e-10);
    ordered_json doc = make_report("quad degeneration");
    doc["config"] = quad_config(opt, tol);
    doc["checks"] = ordered_json::array();
    const QuadFamily fam = QuadFamily::q1a(0);

    auto push_instance = [&](const std::string& label, cplx x, cplx u, cplx y, cplx v,
                             cplx w, const EdgeParam& alpha, const EdgeParam& beta) {
        const auto report = degeneration_check(x, u, y, v, w, alpha, beta);
        ordered_json entry;
        entry["instance"] = label;
        entry["input_residual"] = report.input_residual;
        entry["cubic_residual"] = report.cubic_residual;
        entry["grouped_residual"] = report.grouped_residual;
        entry["absorbed_residual"] = report.absorbed_residual;
        entry["absorbed_product_residual"] = report.absorbed_product_residual;
        entry["linear_residual"] = report.linear_residual;
        entry["max_mapped"] = report.max_mapped;
        entry["within_tolerance"] =
            report.input_residual <= tol && report.max_mapped <= tol;
        doc["checks"].push_back(entry);
    };

    push_instance("pinned", cplx(1.0), cplx(2.0), cplx(3.0), cplx(-2.0), cplx(0.0),
                  EdgeParam{cplx(1.0), cplx(3.0)}, EdgeParam{cplx(2.0), cplx(4.0)});
    for (int s = 0; s < opt.seeds; ++s) {
        Rng rng = sweep_rng(opt.seed, s);
        const cplx u = random_annulus(rng);
        const cplx y = random_annulus(rng);
        const cplx v = random_annulus(rng);
        const cplx w = random_annulus(rng);
        const EdgeParam alpha = draw_edge(rng);
        const EdgeParam beta = draw_edge(rng);
        const auto solved = solve_corner(fam, CornerSlot::x, {}, {u}, {y}, {v}, alpha,
                                         beta, FaceParam{{w}});
        push_instance("sweep " + std::to_string(s), solved[0], u, y, v, w, alpha, beta);
    }
    return finish(doc, opt.out);
}

struct RelationsOptions {
    std::string model_path;
    std::vector<std::string> kinds;
    bool fit = false;
    std::string save_model;
    double tol = 0.0;
    int threads = 1;
    std::string out;
};

int run_relations(const RelationsOptions& opt) {
    WeightModel model = WeightModel::load_file(opt.model_path);
    ordered_json doc = make_report("relations");
    doc["config"] = {{"model", opt.model_path},
                     {"fit", opt.fit},
                     {"tol", opt.tol}};
    doc["checks"] = ordered_json::array();

    if (opt.fit) {
        const std::vector<RelationKind> fit_kinds = {
            RelationKind::edge_inversion_w, RelationKind::edge_inversion_wbar,
            RelationKind::irf_inversion, RelationKind::vertex_inversion,
            RelationKind::star_star};
        FitResult fitted = fit_weights(model, fit_kinds);
        model = fitted.model;
        ordered_json entry;
        entry["fit_max_abs_residual"] = fitted.max_abs_residual;
        entry["fit_iterations"] = fitted.iterations;
        entry["fit_converged"] = fitted.converged;
        doc["fit"] = entry;
        if (!opt.save_model.empty()) model.save_file(opt.save_model);
    }

    std::vector<RelationKind> kinds;
    if (opt.kinds.empty()) {
        kinds = all_relation_kinds();
    } else {
        for (const auto& name : opt.kinds) kinds.push_back(relation_kind_from_name(name));
    }
    const auto lines = default_relation_lines(model);
    for (RelationKind kind : kinds) {
        std::vector<RapidityPair> use(lines.begin(),
                                      lines.begin() + relation_arity(kind));
        const ResidualReport r = relation_residual(model, kind, use, opt.threads);
        const bool ybe = kind == RelationKind::ybe_irf || kind == RelationKind::ybe_vertex;
        const double tol = pick_tol(opt.tol, ybe ? 1e-7 : 1e-8);
        ordered_json entry = residual_report_json(relation_kind_name(kind), r);
        entry["tolerance"] = tol;
        entry["within_tolerance"] = r.max_abs_residual <= tol;
        doc["checks"].push_back(entry);
    }
    return finish(doc, opt.out);
}

struct SurfaceBuildOptions {
    int rows = 2;
    int cols = 2;
    std::string formulation = "irf";
    int spin = 0;
    std::string out_surface;
    std::string out;
};

int run_surface_build(const SurfaceBuildOptions& opt) {
    const RapidityPair p{cplx(0.0, 1.9), cplx(0.0, 1.3)};
    const RapidityPair q{cplx(0.0, 0.8), cplx(0.0, 0.5)};
    const Surface s = build_flat_surface_const(opt.rows, opt.cols,
                                               formulation_from_name(opt.formulation),
                                               p, q, opt.spin);
    const auto errors = validate_surface(s);
    if (!errors.empty()) {
        throw std::runtime_error("built surface failed validation: " + errors.front());
    }
    if (!opt.out_surface.empty()) save_surface(s, opt.out_surface);
    std::vector<GridPoint> interior, boundary;
    classify_spin_sites(s, interior, boundary);
    ordered_json doc = make_report("surface build");
    doc["config"] = {{"rows", opt.rows},
                     {"cols", opt.cols},
                     {"formulation", opt.formulation},
                     {"spin", opt.spin}};
    ordered_json entry;
    entry["squares"] = s.squares.size();
    entry["interior_sites"] = interior.size();
    entry["boundary_sites"] = boundary.size();
    entry["within_tolerance"] = true;
    doc["checks"] = ordered_json::array({entry});
    return finish(doc, opt.out);
}

int run_surface_validate(const std::string& surface_path, const std::string& out) {
    const Surface s = load_surface(surface_path);
    const auto errors = validate_surface(s);
    ordered_json doc = make_report("surface validate");
    doc["config"] = {{"surface", surface_path}};
    ordered_json entry;
    entry["errors"] = errors;
    entry["within_tolerance"] = errors.empty();
    doc["checks"] = ordered_json::array({entry});
    return finish(doc, out);
}

struct SurfaceFlipOptions {
    std::string surface_path;
    std::string kind = "five-for-one";
    std::string at = "0,0,0";
    std::string direction = "rise";
    std::string out_surface;
    std::string out;
};

int run_surface_flip(const SurfaceFlipOptions& opt) {
    const Surface s = load_surface(opt.surface_path);
    FlipMove move;
    move.kind = flip_kind_from_name(opt.kind);
    move.location = parse_grid_point(opt.at);
    move.direction = flip_direction_from_name(opt.direction);
    auto [flipped, ledger] = apply_flip(s, move, s.ledger);
    flipped.ledger = ledger;
    if (!opt.out_surface.empty()) save_surface(flipped, opt.out_surface);
    ordered_json doc = make_report("surface flip");
    doc["config"] = {{"surface", opt.surface_path},
                     {"kind", opt.kind},
                     {"at", opt.at},
                     {"direction", opt.direction}};
    ordered_json entry;
    entry["n_power_before"] = s.ledger.n_power;
    entry["n_power_after"] = ledger.n_power;
    entry["squares"] = flipped.squares.size();
    entry["within_tolerance"] = true;
    doc["checks"] = ordered_json::array({entry});
    return finish(doc, opt.out);
}

struct PartitionOptions {
    std::string surface_path;
    std::string model_path;
    std::string mode = "brute";
    double tol = 0.0;
    int threads = 1;
    std::string out;
};

int run_partition(const PartitionOptions& opt) {
    const Surface s = load_surface(opt.surface_path);
    const WeightModel model = opt.model_path.empty() ? WeightModel::trivial()
                                                     : WeightModel::load_file(opt.model_path);
    ordered_json doc = make_report("partition");
    doc["config"] = {{"surface", opt.surface_path},
                     {"model", opt.model_path},
                     {"mode", opt.mode},
                     {"tol", opt.tol}};
    doc["checks"] = ordered_json::array();
    if (opt.mode == "both") {
        const double tol = pick_tol(opt.tol, 1e-12);
        const auto brute = partition_function(s, model, PartitionMode::brute, opt.threads);
        const auto elim = partition_function(s, model, PartitionMode::eliminated, opt.threads);
        const double dev = relative_deviation(brute.value, elim.value);
        ordered_json entry;
        entry["brute"] = complex_json(brute.value);
        entry["eliminated"] = complex_json(elim.value);
        entry["summed_spins"] = brute.summed_spins;
        entry["mode_deviation"] = dev;
        entry["within_tolerance"] = dev <= tol;
        doc["checks"].push_back(entry);
    } else {
        const auto r = partition_function(s, model, partition_mode_from_name(opt.mode),
                                          opt.threads);
        ordered_json entry;
        entry["value"] = complex_json(r.value);
        entry["summed_spins"] = r.summed_spins;
        entry["within_tolerance"] = true;
        doc["checks"].push_back(entry);
    }
    return finish(doc, opt.out);
}

struct ZinvOptions {
    std::vector<std::string> surfaces;
    std::string model_path;
    std::string mode = "brute";
    double tol = 0.0;
    int threads = 1;
    std::string out;
};

int run_zinv(const ZinvOptions& opt) {
    if (opt.surfaces.size() != 2) {
        throw std::invalid_argument("zinv needs exactly two --surface files (sigma, sigma0)");
    }
    const Surface sigma = load_surface(opt.surfaces[0]);
    const Surface sigma0 = load_surface(opt.surfaces[1]);
    const WeightModel model = opt.model_path.empty() ? WeightModel::trivial()
                                                     : WeightModel::load_file(opt.model_path);
    FactorLedger ledger{sigma.ledger.n_power - sigma0.ledger.n_power};
    const double tol = pick_tol(opt.tol, 1e-9);
    const auto r = z_invariance_check(sigma, sigma0, model,
                                      ledger, partition_mode_from_name(opt.mode),
                                      opt.threads);
    ordered_json doc = make_report("zinv");
    doc["config"] = {{"sigma", opt.surfaces[0]},
                     {"sigma0", opt.surfaces[1]},
                     {"model", opt.model_path},
                     {"mode", opt.mode},
                     {"tol", tol}};
    ordered_json entry;
    entry["z_sigma"] = complex_json(r.z_sigma);
    entry["z_sigma0"] = complex_json(r.z_sigma0);
    entry["ratio"] = complex_json(r.ratio);
    entry["expected"] = r.expected;
    entry["rel_deviation"] = r.rel_deviation;
    entry["indeterminate"] = r.indeterminate;
    entry["within_tolerance"] = !r.indeterminate && r.rel_deviation <= tol;
    doc["checks"] = ordered_json::array({entry});
    return finish(doc, opt.out);
}

struct ClassicalRelationOptions {
    std::string relation = "star-star";
    std::string family = "hyperbolic";
    std::vector<double> boundary;
    double tol = 0.0;
    std::string out;
};

int run_classical_relation(const ClassicalRelationOptions& opt) {
    if (opt.family != "rational" && opt.family != "hyperbolic") {
        throw std::invalid_argument("unknown leg family \"" + opt.family + "\"");
    }
    const LagrangianModel m = opt.family == "rational" ? LagrangianModel::rational()
                                                       : LagrangianModel::hyperbolic();
    const ClassicalRelation kind = classical_relation_from_name(opt.relation);
    const auto lines = default_classical_lines(m);
    std::vector<RapidityPair> use(lines.begin(),
                                  lines.begin() + (kind == ClassicalRelation::star_star ||
                                                           kind == ClassicalRelation::four_constraints
                                                       ? 2
                                                       : 3));
    const std::vector<double> boundary =
        opt.boundary.empty() ? default_classical_boundary(kind) : opt.boundary;
    const double tol = pick_tol(opt.tol, default_classical_tol(kind));
    const double residual = classical_relation_residual(m, kind, use, boundary);
    ordered_json doc = make_report("classical relation");
    doc["config"] = {{"relation", opt.relation},
                     {"family", opt.family},
                     {"boundary", boundary},
                     {"tol", tol}};
    ordered_json entry;
    entry["residual"] = residual;
    entry["within_tolerance"] = residual <= tol;
    doc["checks"] = ordered_json::array({entry});
    return finish(doc, opt.out);
}

struct ClassicalZinvOptions {
    std::vector<std::string> surfaces;
    std::string family = "hyperbolic";
    double profile = 0.05;
    double tol = 0.0;
    std::string out;
};

int run_classical_zinv(const ClassicalZinvOptions& opt) {
    if (opt.surfaces.size() != 2) {
        throw std::invalid_argument(
            "classical zinv needs exactly two --surface files (sigma, sigma0)");
    }
    if (opt.family != "rational" && opt.family != "hyperbolic") {
        throw std::invalid_argument("unknown leg family \"" + opt.family + "\"");
    }
    const LagrangianModel m = opt.family == "rational" ? LagrangianModel::rational()
                                                       : LagrangianModel::hyperbolic();
    const Surface sigma = load_surface(opt.surfaces[0]);
    const Surface sigma0 = load_surface(opt.surfaces[1]);
    std::vector<GridPoint> interior, rim;
    classify_spin_sites(sigma0, interior, rim);
    std::map<GridPoint, double> boundary;
    for (const GridPoint& site : rim) {
        boundary[site] = opt.profile * site.i * site.j;
    }
    const double tol = pick_tol(opt.tol, 1e-6);
    const auto r = classical_z_invariance(sigma, sigma0, m, boundary);
    ordered_json doc = make_report("classical zinv");
    doc["config"] = {{"sigma", opt.surfaces[0]},
                     {"sigma0", opt.surfaces[1]},
                     {"family", opt.family},
                     {"profile", opt.profile},
                     {"tol", tol}};
    ordered_json entry;
    entry["action_sigma"] = r.action_sigma;
    entry["action_sigma0"] = r.action_sigma0;
    entry["difference"] = r.difference;
    entry["converged"] = r.converged;
    if (!r.failure.empty()) entry["failure"] = r.failure;
    entry["within_tolerance"] = r.converged && r.difference <= tol;
    doc["checks"] = ordered_json::array({entry});
    return finish(doc, opt.out);
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"lattice integrability workbench"};
    app.require_subcommand(1);
    int rc = 0;

    RelationsOptions rel_opt;
    auto* rel = app.add_subcommand("relations", "check or fit the local weight identities");
    rel->add_option("--model", rel_opt.model_path, "weight model file")->required();
    rel->add_option("--kind", rel_opt.kinds, "relation kinds (default: all seven)");
    rel->add_flag("--fit", rel_opt.fit, "fit the model before checking");
    rel->add_option("--save-model", rel_opt.save_model, "write the fitted model here");
    rel->add_option("--tol", rel_opt.tol, "tolerance override");
    rel->add_option("--threads", rel_opt.threads, "worker threads");
    rel->add_option("--out", rel_opt.out, "report path (stdout when omitted)");
    rel->callback([&]() { rc = run_relations(rel_opt); });

    auto* surf = app.add_subcommand("surface", "build, validate, or flip four-square surfaces");
    surf->require_subcommand(1);

    SurfaceBuildOptions build_opt;
    auto* build = surf->add_subcommand("build", "build a flat surface");
    build->add_option("--rows", build_opt.rows)->check(CLI::PositiveNumber);
    build->add_option("--cols", build_opt.cols)->check(CLI::PositiveNumber);
    build->add_option("--formulation", build_opt.formulation, "irf or vertex");
    build->add_option("--spin", build_opt.spin, "pinned boundary spin");
    build->add_option("--out-surface", build_opt.out_surface, "surface file to write");
    build->add_option("--out", build_opt.out, "report path (stdout when omitted)");
    build->callback([&]() { rc = run_surface_build(build_opt); });

    std::string validate_surface_path;
    std::string validate_out;
    auto* validate = surf->add_subcommand("validate", "validate a surface file");
    validate->add_option("--surface", validate_surface_path, "surface file")->required();
    validate->add_option("--out", validate_out, "report path (stdout when omitted)");
    validate->callback([&]() { rc = run_surface_validate(validate_surface_path, validate_out); });

    SurfaceFlipOptions flip_opt;
    auto* flip = surf->add_subcommand("flip", "apply one cubic flip");
    flip->add_option("--surface", flip_opt.surface_path, "surface file")->required();
    flip->add_option("--kind", flip_opt.kind, "five-for-one, three-for-three, or mixed");
    flip->add_option("--at", flip_opt.at, "cube location i,j,k");
    flip->add_option("--direction", flip_opt.direction, "rise or sink");
    flip->add_option("--out-surface", flip_opt.out_surface, "surface file to write");
    flip->add_option("--out", flip_opt.out, "report path (stdout when omitted)");
    flip->callback([&]() { rc = run_surface_flip(flip_opt); });

    PartitionOptions part_opt;
    auto* part = app.add_subcommand("partition", "exact partition function of a surface");
    part->add_option("--surface", part_opt.surface_path, "surface file")->required();
    part->add_option("--model", part_opt.model_path, "weight model file (default: one-state)");
    part->add_option("--mode", part_opt.mode, "brute, eliminated, or both");
    part->add_option("--tol", part_opt.tol, "tolerance override (mode both)");
    part->add_option("--threads", part_opt.threads, "worker threads");
    part->add_option("--out", part_opt.out, "report path (stdout when omitted)");
    part->callback([&]() { rc = run_partition(part_opt); });

    ZinvOptions zinv_opt;
    auto* zinv = app.add_subcommand("zinv", "partition-function ratio of two surfaces");
    zinv->add_option("--surface", zinv_opt.surfaces, "surface files: sigma then sigma0");
    zinv->add_option("--model", zinv_opt.model_path, "weight model file (default: one-state)");
    zinv->add_option("--mode", zinv_opt.mode, "brute or eliminated");
    zinv->add_option("--tol", zinv_opt.tol, "tolerance override");
    zinv->add_option("--threads", zinv_opt.threads, "worker threads");
    zinv->add_option("--out", zinv_opt.out, "report path (stdout when omitted)");
    zinv->callback([&]() { rc = run_zinv(zinv_opt); });

    auto* classical = app.add_subcommand("classical", "quasi-classical layer checks");
    classical->require_subcommand(1);

    ClassicalRelationOptions crel_opt;
    auto* crel = classical->add_subcommand("relation", "classical action identities");
    crel->add_option("--relation", crel_opt.relation,
                     "star-star, four-constraints, ybe, or closure");
    crel->add_option("--family", crel_opt.family, "hyperbolic or rational");
    crel->add_option("--boundary", crel_opt.boundary, "boundary spins (4 or 6 values)");
    crel->add_option("--tol", crel_opt.tol, "tolerance override");
    crel->add_option("--out", crel_opt.out, "report path (stdout when omitted)");
    crel->callback([&]() { rc = run_classical_relation(crel_opt); });

    ClassicalZinvOptions czinv_opt;
    auto* czinv = classical->add_subcommand("zinv", "classical action invariance");
    czinv->add_option("--surface", czinv_opt.surfaces, "surface files: sigma then sigma0");
    czinv->add_option("--family", czinv_opt.family, "hyperbolic or rational");
    czinv->add_option("--profile", czinv_opt.profile, "boundary profile coefficient");
    czinv->add_option("--tol", czinv_opt.tol, "tolerance override");
    czinv->add_option("--out", czinv_opt.out, "report path (stdout when omitted)");
    czinv->callback([&]() { rc = run_classical_zinv(czinv_opt); });

    auto* quad = app.add_subcommand("quad", "multi-component quad equation checks");
    quad->require_subcommand(1);

    QuadDataOptions eval_opt;
    auto* qeval = quad->add_subcommand("eval", "evaluate residuals and the two forms");
    add_quad_flags(qeval, eval_opt);
    qeval->callback([&]() { rc = run_quad_eval(eval_opt); });

    QuadDataOptions solve_opt;
    auto* qsolve = quad->add_subcommand("solve", "solve a corner and re-check the residual");
    add_quad_flags(qsolve, solve_opt);
    qsolve->callback([&]() { rc = run_quad_solve(solve_opt); });

    QuadDataOptions cons_opt;
    auto* qcons = quad->add_subcommand("consistency", "cube consistency sweep");
    add_quad_flags(qcons, cons_opt);
    qcons->callback([&]() { rc = run_quad_consistency(cons_opt); });

    QuadDataOptions sym_opt;
    auto* qsym = quad->add_subcommand("symmetry", "square symmetry sweep");
    add_quad_flags(qsym, sym_opt);
    qsym->callback([&]() { rc = run_quad_symmetry(sym_opt); });

    QuadDataOptions deg_opt;
    auto* qdeg = quad->add_subcommand("degeneration", "scalar degeneration chain sweep");
    add_quad_flags(qdeg, deg_opt);
    qdeg->callback([&]() { rc = run_quad_degeneration(deg_opt); });

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return rc;
}
