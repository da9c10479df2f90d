#ifndef PAV_PARAMS_HPP
#define PAV_PARAMS_HPP

#include <cstdint>
#include <optional>
#include <vector>

#include "pav/arith.hpp"

namespace pav {

enum class Mode { theorem, lab };

// Every scalar knob of a run. In theorem mode x, y, z are derived from N; in
// lab mode the caller sets them directly.
struct Parameters {
    Mode mode = Mode::lab;
    double delta = 1e-6;
    double M = 7.0; // > 6 in theorem mode; lab allows >= 2
    int K = 100;    // >= 2
    double xi = 1.01;
    double epsilon = 0.05;
    uint64_t x = 0;
    uint64_t y = 0;
    double z = 2.0;
    bool q_stage_degenerate = false;

    void validate() const; // throws errc::contract on malformed fields
};

struct DeriveOverrides {
    std::optional<double> M;
    std::optional<int> K;
    std::optional<double> xi;
    std::optional<double> epsilon;
    std::optional<uint64_t> y; // adaptive retries re-derive with a smaller y
    bool strict_validation = true;
};

// Both delta inequalities: 12*10^{2 delta} < ln(1/(2 delta)) <= 1000.
// Throws errc::contract outside (0, 1/2).
bool validate_delta(double delta);

// Theorem-mode derivation from N: x = floor(ln(N)/4), y = ceil(x (ln x)^delta),
// z = y (ln ln x)^2 / (ln x)^{1/2} clamped to >= 2.
Parameters derive(const Int& N, double delta, const DeriveOverrides& overrides = {});

// Smallest N the construction accepts (x >= 11).
Int construction_floor();

struct HBlock {
    double H = 1.0;
    int j = 0; // H = xi^j
    std::vector<uint64_t> primes; // Q_H = primes in (y/(xi H), y/H]
};

struct HGrid {
    std::vector<HBlock> blocks; // ascending H
    bool empty() const { return blocks.empty(); }

    std::vector<double> all_H() const;
    std::vector<double> H1() const; // even j
    std::vector<double> H2() const; // odd j
    const HBlock* block_of(uint64_t q) const; // nullptr when q is in no block
    const HBlock* block_at(double H) const;
    std::vector<uint64_t> all_q() const;
};

// Powers of xi in [2y/x, y/(xi z)] with their prime blocks; empty band is the
// degenerate regime, not an error.
HGrid build_hgrid(const Parameters& p);

// Theorem-mode display (H_range): 2 (ln x)^delta <= H <= (ln x)^{1/2}/(lnln x)^2
// for every H in the grid. Vacuously true on an empty grid.
bool check_h_range(const HGrid& grid, const Parameters& p);

// Grid-matched delta for lab parameterizations: ln(1/(2 delta)) is set to
// 2 ln(xi) * sum_{H in H1} 1/ln(H), the exact quantity the C2 asymptotic's
// harmonic-sum step approximates. Throws if the H1 sublist is empty.
double delta_for_grid(const HGrid& grid, double xi);

} // namespace pav

#endif
