#include "pav/cover.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include "pav/errors.hpp"

namespace pav {

bool CoverPlan::ledger_disjoint() const {
    std::set<uint64_t> seen;
    for (const auto& [stage, primes] : ledger)
        for (uint64_t p : primes)
            if (!seen.insert(p).second) return false;
    return true;
}

ResidueAssignment greedy_residue_sieve(SurvivorSet& i1, SurvivorSet& i2,
                                       const std::vector<uint64_t>& pool, const Int& N) {
    ResidueAssignment out;
    std::vector<uint64_t> primes = pool;
    std::sort(primes.begin(), primes.end());
    for (uint64_t p : primes) {
        // Class populations: killing residue r removes I1 positions t = r (mod p)
        // and I2 positions t = N + r (mod p).
        std::vector<uint64_t> cnt1(p, 0), cnt2(p, 0);
        for (uint64_t t = 1; t <= i1.y(); ++t)
            if (i1.alive(t)) ++cnt1[t % p];
        for (uint64_t t = 1; t <= i2.y(); ++t)
            if (i2.alive(t)) ++cnt2[t % p];
        uint64_t n_mod = mpz_fdiv_ui(N.get_mpz_t(), static_cast<unsigned long>(p));

        uint64_t best_r = 0, best_kills = 0;
        bool first = true;
        for (uint64_t r = 0; r < p; ++r) {
            uint64_t kills = cnt1[r % p] + cnt2[(n_mod + r) % p];
            if (first || kills > best_kills) {
                best_r = r;
                best_kills = kills;
                first = false;
            }
        }
        out.set(p, best_r, Provenance::greedy);
        i1.kill_class(p, best_r % p);
        i2.kill_class(p, (n_mod + best_r) % p);
    }
    return out;
}

namespace {

// Coverage of the finite progression {base + step*h : 1 <= h <= J} against
// the currently-alive offsets of `target` (offsets are the integers for I1,
// mirrored negatives for I2; `actual(n)` maps an integer to its offset).
struct SideFrame {
    Side side;
    IntervalKind kind;
    // integer n represented by offset t: I1: n = t; I2: n = -t.
    static int64_t to_int(IntervalKind k, uint64_t t) {
        return k == IntervalKind::I1 ? static_cast<int64_t>(t) : -static_cast<int64_t>(t);
    }
    static bool to_offset(IntervalKind k, int64_t n, uint64_t y, uint64_t* t) {
        int64_t v = k == IntervalKind::I1 ? n : -n;
        if (v < 1 || v > static_cast<int64_t>(y)) return false;
        *t = static_cast<uint64_t>(v);
        return true;
    }
};

uint64_t progression_coverage(const SurvivorSet& target, int64_t base, int64_t step, int64_t J) {
    uint64_t covered = 0;
    for (int64_t h = 1; h <= J; ++h) {
        uint64_t t;
        if (SideFrame::to_offset(target.kind(), base + step * h, target.y(), &t) &&
            target.alive(t))
            ++covered;
    }
    return covered;
}

// Greedy base for one prime: among all bases that can reach an alive target,
// the one covering the most, ties to the smallest base.
int64_t greedy_base(const SurvivorSet& target, uint64_t q, int64_t J, Side side) {
    int64_t step = side == Side::plain ? static_cast<int64_t>(q) : -static_cast<int64_t>(q);
    std::set<int64_t> candidates;
    for (uint64_t t : target.alive_offsets()) {
        int64_t n = SideFrame::to_int(target.kind(), t);
        for (int64_t h = 1; h <= J; ++h) candidates.insert(n - step * h);
    }
    if (candidates.empty()) return 0;
    int64_t best_base = *candidates.begin();
    uint64_t best_cov = 0;
    for (int64_t base : candidates) {
        uint64_t cov = progression_coverage(target, base, step, J);
        if (cov > best_cov) {
            best_cov = cov;
            best_base = base;
        }
    }
    return best_base;
}

// The residue class mod q that base pins on this side's offsets. For I1 the
// killed offsets satisfy t = base (mod q); for I2 (m = -t, m = base progression
// downward) t = -base (mod q).
uint64_t offset_class(IntervalKind kind, uint64_t q, int64_t base) {
    int64_t v = kind == IntervalKind::I1 ? base : -base;
    int64_t r = v % static_cast<int64_t>(q);
    if (r < 0) r += static_cast<int64_t>(q);
    return static_cast<uint64_t>(r);
}

} // namespace

ProgressionResult select_progressions(Side side,
                                      const std::vector<std::pair<uint64_t, double>>& q_with_H,
                                      const Parameters& p, const ResidueAssignment& small_primes,
                                      SurvivorSet& target, const Int& N, Strategy strategy,
                                      Rng& rng, int retry_rounds) {
    // Fixed processing order: descending H, then descending q.
    auto order = q_with_H;
    std::sort(order.begin(), order.end(), [](const auto& a, const auto& b) {
        if (a.second != b.second) return a.second > b.second;
        return a.first > b.first;
    });

    auto run_greedy = [&](SurvivorSet& tgt) {
        ProgressionResult res;
        for (const auto& [q, H] : order) {
            int64_t J = static_cast<int64_t>(
                std::floor(static_cast<double>(p.K) * H));
            int64_t base = greedy_base(tgt, q, J, side);
            tgt.kill_class(q, offset_class(tgt.kind(), q, base));
            res.picks.push_back({q, H, base, false});
        }
        res.leftovers = tgt.count();
        return res;
    };

    if (strategy == Strategy::greedy) {
        ProgressionResult res = run_greedy(target);
        return res;
    }

    // Sampled strategy: whole-plan rounds, keep the fewest-leftovers round.
    ProgressionResult best;
    bool have_best = false;
    SurvivorSet best_state = target;
    for (int round = 0; round < std::max(1, retry_rounds); ++round) {
        SurvivorSet trial = target;
        ProgressionResult res;
        for (const auto& [q, H] : order) {
            WeightContext ctx = make_weight_context(H, q, p.K, p.M, p.z);
            int64_t base;
            bool fallback = false;
            try {
                base = sample_progression_base(ctx, small_primes, side, N, p.y, rng);
            } catch (const error& e) {
                if (e.code() != errc::undefined_distribution) throw;
                base = greedy_base(trial, q, ctx.J, side);
                fallback = true;
            }
            trial.kill_class(q, offset_class(trial.kind(), q, base));
            res.picks.push_back({q, H, base, fallback});
        }
        res.leftovers = trial.count();
        if (!have_best || res.leftovers < best.leftovers) {
            best = res;
            best_state = trial;
            have_best = true;
        }
    }
    target = best_state;
    return best;
}

std::map<uint64_t, uint64_t> match_leftovers(const std::vector<uint64_t>& leftover_offsets,
                                             const std::vector<uint64_t>& band) {
    if (leftover_offsets.size() > band.size())
        throw capacity_error(leftover_offsets.size(), band.size(),
                             "match_leftovers: " + std::to_string(leftover_offsets.size()) +
                                 " leftovers vs band of " + std::to_string(band.size()));
    std::vector<uint64_t> offs = leftover_offsets;
    std::vector<uint64_t> primes = band;
    std::sort(offs.begin(), offs.end());
    std::sort(primes.begin(), primes.end());
    std::map<uint64_t, uint64_t> out;
    for (size_t i = 0; i < offs.size(); ++i) out[offs[i]] = primes[i];
    return out;
}

bool leftover_budget_check(uint64_t count, uint64_t x) {
    double budget = static_cast<double>(x) / (5.0 * std::log(static_cast<double>(x)));
    return static_cast<double>(count) <= budget;
}

} // namespace pav
