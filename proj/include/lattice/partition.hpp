#pragma once

#include <functional>
#include <string>
#include <vector>

#include "lattice/surface.hpp"
#include "lattice/weights.hpp"

namespace lattice {

enum class PartitionMode { brute, eliminated };

const char* partition_mode_name(PartitionMode m);
PartitionMode partition_mode_from_name(const std::string& name);

struct PartitionResult {
    cplx value;
    int summed_spins = 0;
    PartitionMode mode = PartitionMode::brute;
};

// Boltzmann weight of one four-square, with spins supplied by the lookup.
cplx square_weight(const Surface& s, const FourSquare& sq, const WeightModel& model,
                   const std::function<int(const GridPoint&)>& spin_at);

// Sums the product of four-square weights over all interior-spin
// configurations, boundary spins held fixed. Brute mode enumerates every
// configuration (refusing more than 24 summed spins) in leading-spin blocks
// whose boundaries and reduction order never depend on `threads`;
// eliminated mode contracts one interior spin at a time in a greedy
// low-degree order (single-threaded). `elimination_order` overrides that
// order and must list every interior site exactly once.
PartitionResult partition_function(const Surface& s, const WeightModel& model,
                                   PartitionMode mode, int threads = 1,
                                   const std::vector<GridPoint>* elimination_order = nullptr);

struct ZInvarianceReport {
    cplx z_sigma;
    cplx z_sigma0;
    cplx ratio;            // z_sigma / z_sigma0
    double expected = 1.0; // state_count^n_power
    double rel_deviation = 0.0;
    bool indeterminate = false;  // z_sigma0 vanished
};

// Compares Z(sigma)/Z(sigma0) against state_count^ledger.n_power. Both
// surfaces must be valid and pin the same boundary spins.
ZInvarianceReport z_invariance_check(const Surface& sigma, const Surface& sigma0,
                                     const WeightModel& model, FactorLedger ledger,
                                     PartitionMode mode = PartitionMode::brute,
                                     int threads = 1);

}  // namespace lattice
