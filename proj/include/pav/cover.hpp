#ifndef PAV_COVER_HPP
#define PAV_COVER_HPP

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "pav/params.hpp"
#include "pav/rng.hpp"
#include "pav/sieve.hpp"
#include "pav/weights.hpp"

namespace pav {

// Full record of how both intervals were annihilated: residues per prime,
// progression bases for the Q-stage, leftover pairings, and which stage
// consumed which primes.
struct CoverPlan {
    ResidueAssignment residues;
    std::map<uint64_t, int64_t> progressions_i1; // q -> n_q
    std::map<uint64_t, int64_t> progressions_i2; // q -> m_q (actual integer, not offset)
    std::map<uint64_t, uint64_t> matching_i1;    // offset t -> prime in L1
    std::map<uint64_t, uint64_t> matching_i2;    // offset t -> prime in L2
    std::map<std::string, std::vector<uint64_t>> ledger; // stage -> primes consumed

    bool ledger_disjoint() const;
};

// For each prime in ascending order, pick the residue killing the most
// currently-alive positions jointly in both intervals (one b residue
// constrains both), ties to the smallest residue. Mutates the sets.
ResidueAssignment greedy_residue_sieve(SurvivorSet& i1, SurvivorSet& i2,
                                       const std::vector<uint64_t>& pool, const Int& N);

enum class Strategy { sampled, greedy };

struct ProgressionPick {
    uint64_t q = 0;
    double H = 1.0;
    int64_t base = 0;
    bool sampled_fallback = false; // zero row forced the greedy choice
};

struct ProgressionResult {
    std::vector<ProgressionPick> picks;
    uint64_t leftovers = 0; // alive targets on this side after the stage
};

// Choose one progression base per Q-stage prime. greedy: descending H then
// descending q, base maximizing coverage of currently-alive targets within
// reach floor(K H_q), ties to the smallest base. sampled: draw each base from
// the lambda distribution, retry whole rounds keeping the fewest-leftovers
// plan. Applies each chosen residue class to `target` as it goes.
ProgressionResult select_progressions(Side side, const std::vector<std::pair<uint64_t, double>>& q_with_H,
                                      const Parameters& p, const ResidueAssignment& small_primes,
                                      SurvivorSet& target, const Int& N, Strategy strategy,
                                      Rng& rng, int retry_rounds = 10);

// Ascending order-preserving pairing of leftovers with band primes. Throws
// capacity_error (with both counts) when the band is too small.
std::map<uint64_t, uint64_t> match_leftovers(const std::vector<uint64_t>& leftover_offsets,
                                             const std::vector<uint64_t>& band);

// Endgame budget per side: count <= x / (5 ln x).
bool leftover_budget_check(uint64_t count, uint64_t x);

} // namespace pav

#endif
