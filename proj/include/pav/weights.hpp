#ifndef PAV_WEIGHTS_HPP
#define PAV_WEIGHTS_HPP

#include <cstdint>
#include <optional>
#include <vector>

#include "pav/arith.hpp"
#include "pav/rng.hpp"
#include "pav/sieve.hpp"

namespace pav {

enum class Side { plain, star };

// Everything lambda(H; q, n) needs: the two-level prime split at H^M, the
// exact sigma2 = sigma_{H^M, z}, and the progression length floor(K H).
struct WeightContext {
    double H = 1.0;
    uint64_t q = 0;
    int K = 2;
    double M = 2.0;
    double z = 2.0;
    int64_t J = 0; // floor(K * H)
    std::vector<uint64_t> level1; // primes <= H^M
    std::vector<uint64_t> level2; // primes in (H^M, z]
    RationalProduct sigma2;
    bool exact = true; // rational weights; double mirror otherwise
};

// exact_override forces the rational/float mode; the default rule keeps
// rationals while floor(KH) * #level2 <= 10^4.
WeightContext make_weight_context(double H, uint64_t q, int K, double M, double z,
                                  std::optional<bool> exact_override = {});

// Residues folded per prime so membership of an integer m is one comparison:
//   plain: m in S_k  <=>  m != r_p (mod p)
//   star:  m in S_k* <=>  m != -N - r_p (mod p)
struct SieveView {
    std::vector<std::pair<uint64_t, uint64_t>> level1; // (p, forbidden residue)
    std::vector<std::pair<uint64_t, uint64_t>> level2;
};

SieveView make_view(const WeightContext& ctx, const ResidueAssignment& assignment, Side side,
                    const Int& N);

// AP(J; q, n) = {n + q h : 1 <= h <= J} cap S1   (plain)
// AP*(J; q, n) = {n - q h : 1 <= h <= J} cap S1* (star)
std::vector<int64_t> ap_set(const WeightContext& ctx, int64_t n,
                            const ResidueAssignment& assignment, Side side = Side::plain,
                            const Int& N = Int(0));

// lambda = sigma2^{-#AP} when AP subset S2, else 0. Encoded as the exponent so
// exact and float materializations share one computation.
struct WeightValue {
    bool zero = false;
    uint32_t exponent = 0;
};

WeightValue lambda(const WeightContext& ctx, int64_t n, const ResidueAssignment& assignment);
WeightValue lambda_star(const WeightContext& ctx, int64_t n, const ResidueAssignment& assignment,
                        const Int& N);
WeightValue lambda_view(const WeightContext& ctx, const SieveView& view, int64_t n, Side side);

Rat weight_exact(const WeightContext& ctx, const WeightValue& w);
double weight_double(const WeightContext& ctx, const WeightValue& w);

// Row sum over the paper's n ranges: (-Ky, y] for plain, [-y, Ky) for star.
// Computed as an exponent histogram, then materialized once, so the exact
// path costs integers plus O(J) rational operations.
struct RowSum {
    bool exact = true;
    Rat value_exact;
    double value = 0.0;
    std::vector<uint64_t> histogram; // histogram[k] = #n with lambda = sigma2^{-k}
    uint64_t zeros = 0;
};

RowSum row_sum(const WeightContext& ctx, const ResidueAssignment& assignment, Side side,
               const Int& N, uint64_t y);

// Draw n with probability lambda(H; q, n) / row_sum, deterministically from
// the rng stream. Throws errc::undefined_distribution on a zero row.
int64_t sample_progression_base(const WeightContext& ctx, const ResidueAssignment& assignment,
                                Side side, const Int& N, uint64_t y, Rng& rng);

// Theorem-mode sanity display: H_q * sigma2^{-K H_q} <= x^{1/10}.
bool hq_inequality_ok(const WeightContext& ctx, uint64_t x);

} // namespace pav

#endif
