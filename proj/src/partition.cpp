#include "lattice/partition.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>
#include <set>
#include <sstream>
#include <stdexcept>

#include "lattice/numerics.hpp"

namespace lattice {

namespace {

cplx scheme_weight(const Surface& s, const FourSquare& sq, const SquareScheme& sch,
                   const WeightModel& model, const std::array<int, 4>& spins) {
    const RapidityPair a = surface_line(s, sq, sch.line_a);
    const RapidityPair b = surface_line(s, sq, sch.line_b);
    if (s.formulation == Formulation::irf) {
        return irf_weight(model, sch.variant, a, b, spins[0], spins[1], spins[2], spins[3]);
    }
    return vertex_weight(model, a, b, spins[0], spins[1], spins[2], spins[3]);
}

struct SquareEval {
    const FourSquare* square;
    SquareScheme scheme;
    // Interior index per slot, or -1 with the pinned spin value instead.
    std::array<int, 4> site_index;
    std::array<int, 4> pinned;
};

std::string assignment_str(const std::vector<GridPoint>& sites, const std::vector<int>& spins) {
    std::ostringstream os;
    for (std::size_t idx = 0; idx < sites.size(); ++idx) {
        if (idx) os << " ";
        os << grid_point_str(sites[idx]) << "=" << spins[idx];
    }
    return os.str();
}

std::vector<SquareEval> prepare_squares(const Surface& s,
                                        const std::vector<GridPoint>& interior) {
    std::map<GridPoint, int> index;
    for (std::size_t idx = 0; idx < interior.size(); ++idx) {
        index[interior[idx]] = static_cast<int>(idx);
    }
    std::vector<SquareEval> out;
    out.reserve(s.squares.size());
    for (const auto& sq : s.squares) {
        SquareEval ev;
        ev.square = &sq;
        ev.scheme = square_scheme(sq, s.formulation);
        for (int slot = 0; slot < 4; ++slot) {
            const GridPoint& site = ev.scheme.sites[slot];
            auto it = index.find(site);
            if (it != index.end()) {
                ev.site_index[slot] = it->second;
                ev.pinned[slot] = 0;
            } else {
                auto pin = s.boundary_spins.find(site);
                if (pin == s.boundary_spins.end()) {
                    throw std::invalid_argument("square at " + grid_point_str(sq.base) +
                                                " reads unpinned site " + grid_point_str(site));
                }
                ev.site_index[slot] = -1;
                ev.pinned[slot] = pin->second;
            }
        }
        out.push_back(ev);
    }
    return out;
}

cplx term_weight(const Surface& s, const WeightModel& model,
                 const std::vector<SquareEval>& evals, const std::vector<GridPoint>& interior,
                 const std::vector<int>& assign) {
    cplx prod(1.0, 0.0);
    for (const auto& ev : evals) {
        std::array<int, 4> spins;
        for (int slot = 0; slot < 4; ++slot) {
            spins[slot] = ev.site_index[slot] >= 0 ? assign[ev.site_index[slot]]
                                                   : ev.pinned[slot];
        }
        prod *= scheme_weight(s, *ev.square, ev.scheme, model, spins);
        if (!std::isfinite(prod.real()) || !std::isfinite(prod.imag())) {
            throw std::runtime_error("non-finite weight at square " +
                                     grid_point_str(ev.square->base) + " with " +
                                     assignment_str(interior, assign));
        }
    }
    return prod;
}

PartitionResult brute_partition(const Surface& s, const WeightModel& model,
                                const std::vector<GridPoint>& interior, int threads) {
    const int m = static_cast<int>(interior.size());
    if (m > 24) {
        throw std::length_error("brute mode refuses " + std::to_string(m) +
                                " summed spins (limit 24)");
    }
    const int n = model.state_count();
    const auto evals = prepare_squares(s, interior);

    // Leading-spin blocks: the first `lead` sites form the block id. The
    // block layout depends only on the problem, never on `threads`, and the
    // final reduction walks blocks in index order, so the result bytes are
    // identical for any thread count.
    int lead = 0;
    std::size_t blocks = 1;
    while (lead < m && blocks < 16) {
        blocks *= static_cast<std::size_t>(n);
        ++lead;
    }
    std::size_t tail = 1;
    for (int idx = lead; idx < m; ++idx) tail *= static_cast<std::size_t>(n);

    std::vector<cplx> partial(blocks, cplx(0.0, 0.0));
    std::exception_ptr failure;
    std::mutex failure_lock;
    parallel_chunks(
        blocks, 1,
        [&](std::size_t, std::size_t begin, std::size_t end) {
            try {
                std::vector<int> assign(m, 0);
                for (std::size_t block = begin; block < end; ++block) {
                    std::size_t rest = block;
                    for (int idx = lead - 1; idx >= 0; --idx) {
                        assign[idx] = static_cast<int>(rest % static_cast<std::size_t>(n));
                        rest /= static_cast<std::size_t>(n);
                    }
                    for (int idx = lead; idx < m; ++idx) assign[idx] = 0;
                    KahanSumC sum;
                    for (std::size_t step = 0; step < tail; ++step) {
                        sum.add(term_weight(s, model, evals, interior, assign));
                        for (int idx = m - 1; idx >= lead; --idx) {
                            if (++assign[idx] < n) break;
                            assign[idx] = 0;
                        }
                    }
                    partial[block] = sum.value();
                }
            } catch (...) {
                std::lock_guard<std::mutex> guard(failure_lock);
                if (!failure) failure = std::current_exception();
            }
        },
        threads);
    if (failure) std::rethrow_exception(failure);

    KahanSumC total;
    for (const cplx& v : partial) total.add(v);
    return PartitionResult{total.value(), m, PartitionMode::brute};
}

struct Tensor {
    std::vector<int> sites;  // interior indices, ascending
    std::vector<cplx> data;  // mixed-radix, first site fastest
};

std::size_t tensor_offset(const Tensor& t, const std::vector<int>& spin_of, int n) {
    std::size_t off = 0;
    std::size_t stride = 1;
    for (int site : t.sites) {
        off += stride * static_cast<std::size_t>(spin_of[site]);
        stride *= static_cast<std::size_t>(n);
    }
    return off;
}

PartitionResult eliminated_partition(const Surface& s, const WeightModel& model,
                                     const std::vector<GridPoint>& interior,
                                     const std::vector<GridPoint>* order_override) {
    const int m = static_cast<int>(interior.size());
    const int n = model.state_count();
    const auto evals = prepare_squares(s, interior);

    std::vector<int> spin_of(m, 0);
    std::vector<Tensor> tensors;
    for (const auto& ev : evals) {
        Tensor t;
        for (int slot = 0; slot < 4; ++slot) {
            if (ev.site_index[slot] >= 0) t.sites.push_back(ev.site_index[slot]);
        }
        std::sort(t.sites.begin(), t.sites.end());
        t.sites.erase(std::unique(t.sites.begin(), t.sites.end()), t.sites.end());
        std::size_t size = 1;
        for (std::size_t idx = 0; idx < t.sites.size(); ++idx) size *= n;
        t.data.resize(size);
        std::vector<int> local(t.sites.size(), 0);
        for (std::size_t entry = 0; entry < size; ++entry) {
            for (std::size_t idx = 0; idx < t.sites.size(); ++idx) {
                spin_of[t.sites[idx]] = local[idx];
            }
            std::array<int, 4> spins;
            for (int slot = 0; slot < 4; ++slot) {
                spins[slot] = ev.site_index[slot] >= 0 ? spin_of[ev.site_index[slot]]
                                                       : ev.pinned[slot];
            }
            cplx w = scheme_weight(s, *ev.square, ev.scheme, model, spins);
            if (!std::isfinite(w.real()) || !std::isfinite(w.imag())) {
                throw std::runtime_error("non-finite weight at square " +
                                         grid_point_str(ev.square->base));
            }
            t.data[entry] = w;
            for (std::size_t idx = 0; idx < t.sites.size(); ++idx) {
                if (++local[idx] < n) break;
                local[idx] = 0;
            }
        }
        tensors.push_back(std::move(t));
    }

    std::vector<int> order;
    if (order_override) {
        if (order_override->size() != interior.size()) {
            throw std::invalid_argument("elimination order must list every interior site");
        }
        std::map<GridPoint, int> index;
        for (int idx = 0; idx < m; ++idx) index[interior[idx]] = idx;
        std::set<int> seen;
        for (const auto& site : *order_override) {
            auto it = index.find(site);
            if (it == index.end() || !seen.insert(it->second).second) {
                throw std::invalid_argument("elimination order must list every interior site");
            }
            order.push_back(it->second);
        }
    }

    std::vector<char> remaining(m, 1);
    for (int step = 0; step < m; ++step) {
        int victim = -1;
        if (order_override) {
            victim = order[step];
        } else {
            // Greedy: eliminate the site whose merged tensor stays smallest,
            // ties broken by site index for determinism.
            std::size_t best = 0;
            for (int cand = 0; cand < m; ++cand) {
                if (!remaining[cand]) continue;
                std::set<int> merged;
                for (const auto& t : tensors) {
                    if (std::find(t.sites.begin(), t.sites.end(), cand) != t.sites.end()) {
                        merged.insert(t.sites.begin(), t.sites.end());
                    }
                }
                std::size_t arity = merged.empty() ? 0 : merged.size() - 1;
                if (victim < 0 || arity < best) {
                    victim = cand;
                    best = arity;
                }
            }
        }
        remaining[victim] = 0;

        std::vector<Tensor> keep;
        std::vector<Tensor> merging;
        for (auto& t : tensors) {
            if (std::find(t.sites.begin(), t.sites.end(), victim) != t.sites.end()) {
                merging.push_back(std::move(t));
            } else {
                keep.push_back(std::move(t));
            }
        }
        Tensor merged;
        {
            std::set<int> sites;
            for (const auto& t : merging) sites.insert(t.sites.begin(), t.sites.end());
            sites.erase(victim);
            merged.sites.assign(sites.begin(), sites.end());
        }
        std::size_t size = 1;
        for (std::size_t idx = 0; idx < merged.sites.size(); ++idx) size *= n;
        merged.data.resize(size);
        std::vector<int> local(merged.sites.size(), 0);
        for (std::size_t entry = 0; entry < size; ++entry) {
            for (std::size_t idx = 0; idx < merged.sites.size(); ++idx) {
                spin_of[merged.sites[idx]] = local[idx];
            }
            KahanSumC sum;
            for (int value = 0; value < n; ++value) {
                spin_of[victim] = value;
                cplx prod(1.0, 0.0);
                for (const auto& t : merging) prod *= t.data[tensor_offset(t, spin_of, n)];
                sum.add(prod);
            }
            merged.data[entry] = sum.value();
            for (std::size_t idx = 0; idx < merged.sites.size(); ++idx) {
                if (++local[idx] < n) break;
                local[idx] = 0;
            }
        }
        keep.push_back(std::move(merged));
        tensors = std::move(keep);
    }

    cplx value(1.0, 0.0);
    for (const auto& t : tensors) {
        if (!t.sites.empty()) throw std::logic_error("unsummed tensor after elimination");
        value *= t.data.at(0);
    }
    return PartitionResult{value, m, PartitionMode::eliminated};
}

}  // namespace

const char* partition_mode_name(PartitionMode m) {
    return m == PartitionMode::brute ? "brute" : "eliminated";
}

PartitionMode partition_mode_from_name(const std::string& name) {
    if (name == "brute") return PartitionMode::brute;
    if (name == "eliminated") return PartitionMode::eliminated;
    throw std::runtime_error("unknown partition mode: " + name);
}

cplx square_weight(const Surface& s, const FourSquare& sq, const WeightModel& model,
                   const std::function<int(const GridPoint&)>& spin_at) {
    const SquareScheme sch = square_scheme(sq, s.formulation);
    std::array<int, 4> spins;
    for (int slot = 0; slot < 4; ++slot) spins[slot] = spin_at(sch.sites[slot]);
    return scheme_weight(s, sq, sch, model, spins);
}

PartitionResult partition_function(const Surface& s, const WeightModel& model,
                                   PartitionMode mode, int threads,
                                   const std::vector<GridPoint>* elimination_order) {
    {
        auto errs = validate_surface(s);
        if (!errs.empty()) {
            throw std::invalid_argument("partition function on invalid surface: " +
                                        errs.front());
        }
    }
    const int n = model.state_count();
    for (const auto& [site, spin] : s.boundary_spins) {
        if (spin < 0 || spin >= n) {
            throw std::invalid_argument("boundary spin " + std::to_string(spin) + " at " +
                                        grid_point_str(site) + " outside 0.." +
                                        std::to_string(n - 1));
        }
    }
    std::vector<GridPoint> interior, boundary;
    classify_spin_sites(s, interior, boundary);
    if (mode == PartitionMode::brute) {
        return brute_partition(s, model, interior, threads);
    }
    return eliminated_partition(s, model, interior, elimination_order);
}

ZInvarianceReport z_invariance_check(const Surface& sigma, const Surface& sigma0,
                                     const WeightModel& model, FactorLedger ledger,
                                     PartitionMode mode, int threads) {
    if (sigma.boundary_spins != sigma0.boundary_spins) {
        throw std::invalid_argument("surfaces pin different boundaries");
    }
    ZInvarianceReport rep;
    rep.z_sigma = partition_function(sigma, model, mode, threads).value;
    rep.z_sigma0 = partition_function(sigma0, model, mode, threads).value;
    rep.expected = std::pow(static_cast<double>(model.state_count()), ledger.n_power);
    if (std::abs(rep.z_sigma0) < 1e-300) {
        rep.indeterminate = true;
        rep.ratio = cplx(0.0, 0.0);
        rep.rel_deviation = 0.0;
        return rep;
    }
    rep.ratio = rep.z_sigma / rep.z_sigma0;
    rep.rel_deviation = std::abs(rep.ratio - cplx(rep.expected, 0.0)) / std::abs(rep.expected);
    return rep;
}

}  // namespace lattice
