#ifndef PAV_ASSEMBLE_HPP
#define PAV_ASSEMBLE_HPP

#include <cstdint>
#include <string>

#include "pav/certify.hpp"
#include "pav/cover.hpp"
#include "pav/params.hpp"

namespace pav {

struct DecomposeOptions {
    double delta = 1e-6;
    DeriveOverrides overrides;
    uint64_t seed = 1;
    Strategy strategy = Strategy::greedy;
    int sample_retry_rounds = 10;
    bool strict = false;           // re-verify with the primality scan
    uint64_t y_floor_override = 0; // 0 = ceil(x/4)
    std::string options_hash;      // recorded in the certificate
};

struct StageStats {
    uint64_t attempts = 0; // y values tried
    uint64_t final_y = 0;
    uint64_t leftovers_i1 = 0, leftovers_i2 = 0;
    bool q_stage_used = false;
    uint64_t q_stage_primes = 0;
};

struct Decomposition {
    Int N;
    Parameters params;
    CoverPlan plan;
    Congruence b; // residue mod P_x
    Int b1, b2, n1, n2;
    uint64_t radius = 0;
    StageStats stats;
};

struct DecomposeResult {
    Decomposition dec;
    Certificate cert;
    std::string log;
};

// derive -> (Q-stage when the H band is nonempty) -> greedy residues on the
// remaining primes <= x/2 -> leftover matching into L1/L2 -> CRT -> shift.
// Capacity failures shrink y by 10% down to the floor ceil(x/4).
DecomposeResult decompose(const Int& N, const DecomposeOptions& options = {});

// Theorem-mode sandwich checks with the widened tolerance band [1/6, 1/2]:
// ln(P_x)/ln(N) and y/(ln N (ln ln N)^delta) both inside.
bool sanity_windows(const Decomposition& d);

} // namespace pav

#endif
