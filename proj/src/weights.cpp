#include "lattice/weights.hpp"

#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "json.hpp"

namespace lattice {

namespace {

constexpr double kComboMatchTol = 1e-9;

nlohmann::ordered_json pair_to_json(RapidityPair p) {
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

WeightModel WeightModel::trivial() {
    WeightModel m;
    m.family_id_ = "trivial";
    m.state_count_ = 1;
    return m;
}

WeightModel WeightModel::all_ones(int state_count) {
    if (state_count < 1) throw std::invalid_argument("state_count must be positive");
    WeightModel m;
    m.family_id_ = "all_ones";
    m.state_count_ = state_count;
    return m;
}

WeightModel WeightModel::exp_table_n2(RapidityPair p, RapidityPair q, RapidityPair r,
                                      std::vector<double> params) {
    WeightModel m;
    m.family_id_ = "exp_table_n2";
    m.state_count_ = 2;
    m.p_ = p;
    m.q_ = q;
    m.r_ = r;
    if (static_cast<int>(params.size()) != param_count_n2()) {
        throw std::invalid_argument("exp_table_n2 expects " +
                                    std::to_string(param_count_n2()) + " parameters, got " +
                                    std::to_string(params.size()));
    }
    m.params_ = std::move(params);
    return m;
}

std::vector<std::pair<cplx, cplx>> WeightModel::w_combos(RapidityPair p, RapidityPair q,
                                                         RapidityPair r) {
    std::vector<std::pair<cplx, cplx>> out;
    const RapidityPair lines[3] = {p, q, r};
    // Ordered distinct line pairs, in a fixed canonical order.
    const int pairs[6][2] = {{0, 1}, {1, 0}, {0, 2}, {2, 0}, {1, 2}, {2, 1}};
    for (const auto& pr : pairs) {
        RapidityPair a = lines[pr[0]];
        RapidityPair b = lines[pr[1]];
        out.emplace_back(a.value, b.primed);
        out.emplace_back(a.primed, b.value);
    }
    for (const auto& line : lines) {
        out.emplace_back(line.value, line.primed);
        out.emplace_back(line.primed, line.value);
    }
    return out;
}

std::vector<std::pair<cplx, cplx>> WeightModel::wbar_combos(RapidityPair p, RapidityPair q,
                                                            RapidityPair r) {
    std::vector<std::pair<cplx, cplx>> out;
    const RapidityPair lines[3] = {p, q, r};
    const int pairs[6][2] = {{0, 1}, {1, 0}, {0, 2}, {2, 0}, {1, 2}, {2, 1}};
    for (const auto& pr : pairs) {
        RapidityPair a = lines[pr[0]];
        RapidityPair b = lines[pr[1]];
        out.emplace_back(a.value, b.value);
        out.emplace_back(a.primed, b.primed);
    }
    return out;
}

int WeightModel::param_count_n2() {
    // 18 direct-weight combos + 12 cross-weight combos, 8 reals each.
    return (18 + 12) * kCoeffsPerCombo;
}

cplx WeightModel::table_eval(bool cross, cplx a, cplx b, int x, int y) const {
    auto combos = cross ? wbar_combos(p_, q_, r_) : w_combos(p_, q_, r_);
    int base = cross ? 18 * kCoeffsPerCombo : 0;
    int idx = -1;
    for (std::size_t c = 0; c < combos.size(); ++c) {
        if (std::abs(combos[c].first - a) < kComboMatchTol &&
            std::abs(combos[c].second - b) < kComboMatchTol) {
            idx = static_cast<int>(c);
            break;
        }
    }
    if (idx < 0) {
        std::ostringstream os;
        os << (cross ? "cross" : "direct") << " weight requested at unknown rapidity "
           << "arguments (" << a.real() << (a.imag() < 0 ? "" : "+") << a.imag() << "i, "
           << b.real() << (b.imag() < 0 ? "" : "+") << b.imag() << "i)";
        throw std::domain_error(os.str());
    }
    const double* z = &params_[base + idx * kCoeffsPerCombo];
    double sx = (x % 2 == 0) ? 1.0 : -1.0;
    double sy = (y % 2 == 0) ? 1.0 : -1.0;
    cplx expo = cplx(z[0], z[1]) + cplx(z[2], z[3]) * sx + cplx(z[4], z[5]) * sy +
                cplx(z[6], z[7]) * (sx * sy);
    return std::exp(expo);
}

cplx WeightModel::w(cplx a, cplx b, int x, int y) const {
    if (x < 0 || x >= state_count_ || y < 0 || y >= state_count_) {
        throw std::out_of_range("spin value outside state range");
    }
    if (family_id_ == "trivial" || family_id_ == "all_ones") return {1.0, 0.0};
    return table_eval(false, a, b, x, y);
}

cplx WeightModel::wbar(cplx a, cplx b, int x, int y) const {
    if (x < 0 || x >= state_count_ || y < 0 || y >= state_count_) {
        throw std::out_of_range("spin value outside state range");
    }
    if (family_id_ == "trivial" || family_id_ == "all_ones") return {1.0, 0.0};
    return table_eval(true, a, b, x, y);
}

std::string WeightModel::to_json() const {
    nlohmann::ordered_json j;
    j["schema_version"] = 1;
    j["family_id"] = family_id_;
    j["state_count"] = state_count_;
    j["params"] = params_;
    if (family_id_ == "exp_table_n2") {
        nlohmann::ordered_json fr;
        fr["p"] = pair_to_json(p_);
        fr["q"] = pair_to_json(q_);
        fr["r"] = pair_to_json(r_);
        j["fixture_rapidities"] = fr;
    }
    return j.dump(2) + "\n";
}

WeightModel WeightModel::from_json(const std::string& text) {
    auto j = nlohmann::ordered_json::parse(text);
    if (!j.contains("family_id")) throw std::runtime_error("model file missing family_id");
    std::string family = j["family_id"].get<std::string>();
    if (family == "trivial") return trivial();
    if (family == "all_ones") {
        return all_ones(j.at("state_count").get<int>());
    }
    if (family == "exp_table_n2") {
        const auto& fr = j.at("fixture_rapidities");
        return exp_table_n2(pair_from_json(fr.at("p")), pair_from_json(fr.at("q")),
                            pair_from_json(fr.at("r")),
                            j.at("params").get<std::vector<double>>());
    }
    throw std::runtime_error("unknown weight family: " + family);
}

WeightModel WeightModel::load_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open model file: " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return from_json(buf.str());
}

void WeightModel::save_file(const std::string& path) const {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write model file: " + path);
    out << to_json();
}

cplx edge_weight(const WeightModel& model, EdgeKind kind, RapidityPair a,
                 RapidityPair b, int x, int y) {
    switch (kind) {
        case EdgeKind::w_p_qprime:
            return model.w(a.value, b.primed, x, y);
        case EdgeKind::w_pprime_q:
            return model.w(a.primed, b.value, x, y);
        case EdgeKind::wbar_p_q:
            return model.wbar(a.value, b.value, x, y);
        case EdgeKind::wbar_pprime_qprime:
            return model.wbar(a.primed, b.primed, x, y);
    }
    throw std::logic_error("unreachable edge kind");
}

cplx irf_weight(const WeightModel& model, int variant, RapidityPair a,
                RapidityPair b, int x_tl, int x_tr, int x_bl, int x_br) {
    const int n = model.state_count();
    auto core = [&](int which) -> cplx {
        KahanSumC acc;
        for (int c = 0; c < n; ++c) {
            cplx term;
            if (which == 1) {
                term = model.wbar(a.value, b.value, x_bl, c) *
                       model.wbar(a.primed, b.primed, x_tr, c) *
                       model.w(a.primed, b.value, c, x_tl) *
                       model.w(a.value, b.primed, c, x_br);
            } else {
                term = model.wbar(a.value, b.value, c, x_tr) *
                       model.wbar(a.primed, b.primed, c, x_bl) *
                       model.w(a.primed, b.value, x_br, c) *
                       model.w(a.value, b.primed, x_tl, c);
            }
            acc.add(term);
        }
        return acc.value();
    };
    switch (variant) {
        case 1:
            return core(1);
        case 2:
            return core(2);
        case 3:
            return model.w(b.value, b.primed, x_bl, x_br) *
                   model.w(b.primed, b.value, x_tr, x_tl) * core(2);
        case 4:
            return model.w(a.value, a.primed, x_tl, x_bl) *
                   model.w(a.primed, a.value, x_br, x_tr) * core(1);
        default:
            throw std::invalid_argument("irf_weight variant must be 1..4");
    }
}

cplx vertex_weight(const WeightModel& model, RapidityPair a, RapidityPair b,
                   int x_i, int x_j, int xo_i, int xo_j) {
    return model.wbar(a.value, b.value, x_j, xo_i) *
           model.wbar(a.primed, b.primed, xo_j, x_i) *
           model.w(a.primed, b.value, xo_i, xo_j) *
           model.w(a.value, b.primed, x_i, x_j);
}

}  // namespace lattice
