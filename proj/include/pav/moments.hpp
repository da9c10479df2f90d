#ifndef PAV_MOMENTS_HPP
#define PAV_MOMENTS_HPP

#include <cstdint>
#include <string>
#include <vector>

#include "pav/params.hpp"
#include "pav/sieve.hpp"
#include "pav/weights.hpp"

namespace pav {

// One measured statistic next to its predicted main term. Exhaustive reports
// carry exact rationals; Monte Carlo reports carry trials, seed and the
// sample standard error.
struct MomentReport {
    std::string statistic;
    std::string params;
    std::string method; // "exhaustive" | "monte_carlo"
    bool exact = false;
    Rat lhs_exact, rhs_exact; // set when exact
    double lhs = 0.0, rhs = 0.0, ratio = 0.0;
    uint64_t trials = 0, seed = 0;
    double stderr_lhs = 0.0; // monte_carlo only
    bool vacuous = false;

    std::string csv_row() const;
    static std::string csv_header();
};

void write_reports_csv(const std::string& path, const std::vector<MomentReport>& reports);

inline constexpr uint64_t kEnumerationBudget = 10'000'000ULL;

// Exact mean of #(S cap [1,y]) (or the starred mirror) over all residue
// classes b mod primorial(z). Lemma-level identity: equals sigma_z * y
// exactly, so ratio is 1 as a rational.
MomentReport exhaustive_first_moment(uint64_t z, uint64_t y, Side side = Side::plain,
                                     const Int& N = Int(0));

// Exact second moment against (sigma_z * y)^2.
MomentReport exhaustive_second_moment(uint64_t z, uint64_t y, Side side = Side::plain,
                                      const Int& N = Int(0));

// Uniform residue per prime <= prime_hi (equivalent to uniform b mod P by CRT).
ResidueAssignment random_assignment(uint64_t prime_hi, Rng& rng);

// Sample mean over random b of sum_q (row_sum_q)^j for the block at H,
// against ((K+1)y)^j * #Q_H. Plain lambda for even-exponent H, starred for
// odd (which is what the starred row needs N for).
MomentReport monte_carlo_lambda_moments(const Parameters& p, const HGrid& grid, double H, int j,
                                        uint64_t trials, uint64_t seed, const Int& N = Int(0));

// Sample mean of sum_{n in S cap [1,y]} (sum_q sum_{h<=KH} lambda(H;q,n-qh))^j
// against (#Q_H K H / sigma2)^j * sigma * y, starred mirror for odd exponents.
MomentReport monte_carlo_ap_moments(const Parameters& p, const HGrid& grid, double H, int j,
                                    uint64_t trials, uint64_t seed, const Int& N = Int(0));

// Lemma 2's filter machinery evaluated directly on one assignment.
struct FilterSets {
    struct PerH {
        double H = 1.0;
        std::vector<uint64_t> good_primes;     // U'_H (plain) or V'_H (star)
        std::vector<uint64_t> bad_primes;      // Q_H minus the good set
        std::vector<uint64_t> bad_offsets_e;   // E_H / R_H as interval offsets
        std::vector<uint64_t> bad_offsets_estr; // E'_H / R'_H
        double threshold_good = 0.0, threshold_e = 0.0, threshold_estr = 0.0;
    };
    Side side = Side::plain;
    std::vector<PerH> per_h;
};

FilterSets build_filter_sets(const Parameters& p, const HGrid& grid,
                             const ResidueAssignment& assignment, Side side,
                             const Int& N = Int(0));

// C2 (even-exponent blocks) and C3 (odd) by direct summation with exact
// #Q_H and sigma2, next to the closed-form asymptotic prediction.
struct CConstants {
    double C2_direct = 0.0, C2_predicted = 0.0;
    double C3_direct = 0.0, C3_predicted = 0.0;
};

CConstants c_constants(const Parameters& p, const HGrid& grid);

} // namespace pav

#endif
