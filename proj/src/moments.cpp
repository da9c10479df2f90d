#include "pav/moments.hpp"

#include <algorithm>
#include <bit>
#include <charconv>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>

#include "pav/errors.hpp"

namespace pav {

namespace {

std::string fmt_double(double v) {
    char buf[64];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
    (void)ec;
    return std::string(buf, ptr);
}

std::string rat_str(const Rat& r) {
    return r.get_num().get_str() + "/" + r.get_den().get_str();
}

} // namespace

std::string MomentReport::csv_header() {
    return "statistic,params,method,lhs,rhs,ratio,lhs_exact,rhs_exact,trials,seed,stderr,vacuous";
}

std::string MomentReport::csv_row() const {
    std::ostringstream os;
    os << statistic << ',' << params << ',' << method << ',' << fmt_double(lhs) << ','
       << fmt_double(rhs) << ',' << fmt_double(ratio) << ',';
    os << (exact ? rat_str(lhs_exact) : std::string("-")) << ',';
    os << (exact ? rat_str(rhs_exact) : std::string("-")) << ',';
    os << trials << ',' << seed << ',' << fmt_double(stderr_lhs) << ',' << (vacuous ? 1 : 0);
    return os.str();
}

void write_reports_csv(const std::string& path, const std::vector<MomentReport>& reports) {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw error(errc::io, "cannot open " + path + " for writing");
    f << MomentReport::csv_header() << '\n';
    for (const auto& r : reports) f << r.csv_row() << '\n';
    if (!f) throw error(errc::io, "write failed: " + path);
}

namespace {

// Shared enumeration core: exact first and second moments of the survivor
// count over every residue class b mod primorial(z), via per-class bit masks.
struct EnumeratedMoments {
    uint64_t P;
    uint64_t sum, sum_sq;
};

EnumeratedMoments enumerate_moments(uint64_t z, uint64_t y, Side side, const Int& N) {
    if (z < 2) throw error(errc::contract, "exhaustive moment: z must be >= 2");
    if (y < 1 || y > 100'000) throw error(errc::contract, "exhaustive moment: y out of range");
    auto primes = primes_in(0, z);
    double logP = 0;
    for (uint64_t p : primes) logP += std::log(static_cast<double>(p));
    if (logP > std::log(static_cast<double>(kEnumerationBudget)) + 1e-9)
        throw error(errc::resource, "exhaustive moment: primorial(z) exceeds enumeration budget");
    uint64_t P = 1;
    for (uint64_t p : primes) P *= p;
    if (P > kEnumerationBudget)
        throw error(errc::resource, "exhaustive moment: primorial(z) exceeds enumeration budget");

    size_t words = (y + 63) / 64;
    // masks[i][c] = positions t in [1,y] with t = c (mod p_i), packed.
    std::vector<std::vector<std::vector<uint64_t>>> masks(primes.size());
    for (size_t i = 0; i < primes.size(); ++i) {
        uint64_t p = primes[i];
        masks[i].assign(p, std::vector<uint64_t>(words, 0));
        for (uint64_t t = 1; t <= y; ++t)
            masks[i][t % p][(t - 1) >> 6] |= 1ULL << ((t - 1) & 63);
    }
    // Starred interval: offset t dies under class b iff t = N + b (mod p).
    std::vector<uint64_t> n_mod(primes.size(), 0);
    if (side == Side::star)
        for (size_t i = 0; i < primes.size(); ++i)
            n_mod[i] = mpz_fdiv_ui(N.get_mpz_t(), static_cast<unsigned long>(primes[i]));

    std::vector<uint64_t> full(words, ~0ULL);
    uint64_t tail = y % 64;
    if (tail) full.back() = (1ULL << tail) - 1;

    std::vector<uint64_t> b_mod(primes.size(), 0);
    std::vector<uint64_t> acc(words);
    uint64_t sum = 0, sum_sq = 0;
    for (uint64_t b = 0; b < P; ++b) {
        acc = full;
        for (size_t i = 0; i < primes.size(); ++i) {
            uint64_t cls = side == Side::plain ? b_mod[i] : (n_mod[i] + b_mod[i]) % primes[i];
            const auto& kill = masks[i][cls];
            for (size_t w = 0; w < words; ++w) acc[w] &= ~kill[w];
        }
        uint64_t c = 0;
        for (uint64_t w : acc) c += static_cast<uint64_t>(std::popcount(w));
        sum += c;
        sum_sq += c * c;
        for (size_t i = 0; i < primes.size(); ++i)
            if (++b_mod[i] == primes[i]) b_mod[i] = 0;
    }
    return {P, sum, sum_sq};
}

std::string zy_params(uint64_t z, uint64_t y, Side side) {
    std::ostringstream os;
    os << "z=" << z << ";y=" << y << ";side=" << (side == Side::plain ? "plain" : "star");
    return os.str();
}

} // namespace

MomentReport exhaustive_first_moment(uint64_t z, uint64_t y, Side side, const Int& N) {
    auto em = enumerate_moments(z, y, side, N);
    MomentReport r;
    r.statistic = side == Side::plain ? "E_S" : "E_S_star";
    r.params = zy_params(z, y, side);
    r.method = "exhaustive";
    r.exact = true;
    r.lhs_exact = Rat(Int(em.sum), Int(em.P));
    r.lhs_exact.canonicalize();
    auto sigma = sigma_product(0, z);
    r.rhs_exact = sigma.value * Rat(static_cast<unsigned long>(y));
    r.rhs_exact.canonicalize();
    r.lhs = r.lhs_exact.get_d();
    r.rhs = r.rhs_exact.get_d();
    r.ratio = r.rhs_exact != 0 ? Rat(r.lhs_exact / r.rhs_exact).get_d() : 0.0;
    return r;
}

MomentReport exhaustive_second_moment(uint64_t z, uint64_t y, Side side, const Int& N) {
    auto em = enumerate_moments(z, y, side, N);
    MomentReport r;
    r.statistic = side == Side::plain ? "D_S" : "D_S_star";
    r.params = zy_params(z, y, side);
    r.method = "exhaustive";
    r.exact = true;
    r.lhs_exact = Rat(Int(em.sum_sq), Int(em.P));
    r.lhs_exact.canonicalize();
    auto sigma = sigma_product(0, z);
    Rat mean_term = sigma.value * Rat(static_cast<unsigned long>(y));
    r.rhs_exact = mean_term * mean_term;
    r.rhs_exact.canonicalize();
    r.lhs = r.lhs_exact.get_d();
    r.rhs = r.rhs_exact.get_d();
    r.ratio = r.rhs_exact != 0 ? Rat(r.lhs_exact / r.rhs_exact).get_d() : 0.0;
    return r;
}

ResidueAssignment random_assignment(uint64_t prime_hi, Rng& rng) {
    ResidueAssignment a;
    for (uint64_t p : primes_in(0, prime_hi)) a.set(p, rng.below(p), Provenance::random);
    return a;
}

namespace {

const HBlock& require_block(const HGrid& grid, double H) {
    const HBlock* b = grid.block_at(H);
    if (!b) throw error(errc::contract, "no H block at the requested H");
    return *b;
}

std::string lab_params(const Parameters& p, double H, int j) {
    std::ostringstream os;
    os << "x=" << p.x << ";y=" << p.y << ";z=" << fmt_double(p.z) << ";xi=" << fmt_double(p.xi)
       << ";K=" << p.K << ";M=" << fmt_double(p.M) << ";H=" << fmt_double(H) << ";j=" << j;
    return os.str();
}

} // namespace

MomentReport monte_carlo_lambda_moments(const Parameters& p, const HGrid& grid, double H, int j,
                                        uint64_t trials, uint64_t seed, const Int& N) {
    p.validate();
    if (j != 1 && j != 2) throw error(errc::contract, "lambda moments: j must be 1 or 2");
    if (trials == 0) throw error(errc::contract, "lambda moments: trials must be >= 1");
    const HBlock& block = require_block(grid, H);
    if (block.primes.empty()) throw error(errc::contract, "lambda moments: empty Q_H block");
    Side side = block.j % 2 == 0 ? Side::plain : Side::star;

    WeightContext tmpl = make_weight_context(H, block.primes.front(), p.K, p.M, p.z);
    std::vector<WeightContext> ctxs;
    for (uint64_t q : block.primes) {
        ctxs.push_back(tmpl);
        ctxs.back().q = q;
    }

    bool exact = tmpl.exact && tmpl.sigma2.exact;
    Rat exact_sum = 0;
    double dsum = 0.0, dsum_sq = 0.0;
    for (uint64_t t = 0; t < trials; ++t) {
        Rng rng(Rng::derive(seed, t));
        ResidueAssignment asg =
            random_assignment(static_cast<uint64_t>(std::floor(p.z)), rng);
        Rat stat_exact = 0;
        double stat = 0.0;
        for (const auto& ctx : ctxs) {
            RowSum rs = row_sum(ctx, asg, side, N, p.y);
            if (exact) {
                Rat v = rs.value_exact;
                if (j == 2) v *= rs.value_exact;
                stat_exact += v;
            }
            stat += j == 2 ? rs.value * rs.value : rs.value;
        }
        if (exact) exact_sum += stat_exact;
        dsum += stat;
        dsum_sq += stat * stat;
    }

    MomentReport r;
    r.statistic = std::string(side == Side::plain ? "lambda_rows" : "lambda_star_rows") +
                  (j == 2 ? "_sq" : "");
    r.params = lab_params(p, H, j);
    r.method = "monte_carlo";
    r.trials = trials;
    r.seed = seed;
    double ky = static_cast<double>(p.K + 1) * static_cast<double>(p.y);
    r.rhs = std::pow(ky, j) * static_cast<double>(block.primes.size());
    if (exact) {
        r.exact = true;
        r.lhs_exact = exact_sum / Rat(Int(trials), Int(1));
        r.lhs_exact.canonicalize();
        Rat kyq = Rat(static_cast<unsigned long>(p.K + 1)) * Rat(static_cast<unsigned long>(p.y));
        Rat rhs = kyq;
        if (j == 2) rhs *= kyq;
        rhs *= Rat(static_cast<unsigned long>(block.primes.size()));
        r.rhs_exact = rhs;
        r.lhs = r.lhs_exact.get_d();
    } else {
        r.lhs = dsum / static_cast<double>(trials);
    }
    r.ratio = r.lhs / r.rhs;
    double mean = dsum / static_cast<double>(trials);
    double var = dsum_sq / static_cast<double>(trials) - mean * mean;
    if (var < 0) var = 0;
    r.stderr_lhs = std::sqrt(var / static_cast<double>(trials));
    return r;
}

namespace {

// T(n) = sum_q sum_{h <= floor(KH)} lambda(H; q, n - qh), the covering weight
// landing on n (starred mirror: n + qh). `include[i]` selects which primes of
// the block participate (all for E_H, the bad ones for E'_H).
double covering_sum(const std::vector<WeightContext>& ctxs, const std::vector<SieveView>& views,
                    Side side, int64_t n, const std::vector<bool>& include) {
    double total = 0.0;
    for (size_t i = 0; i < ctxs.size(); ++i) {
        if (!include[i]) continue;
        const auto& ctx = ctxs[i];
        int64_t step = side == Side::plain ? static_cast<int64_t>(ctx.q)
                                           : -static_cast<int64_t>(ctx.q);
        for (int64_t h = 1; h <= ctx.J; ++h) {
            // lambda evaluated at the base that reaches n in h steps.
            int64_t base = n - step * h;
            WeightValue w = lambda_view(ctx, views[i], base, side);
            if (!w.zero) total += weight_double(ctx, w);
        }
    }
    return total;
}

} // namespace

MomentReport monte_carlo_ap_moments(const Parameters& p, const HGrid& grid, double H, int j,
                                    uint64_t trials, uint64_t seed, const Int& N) {
    p.validate();
    if (j != 1 && j != 2) throw error(errc::contract, "ap moments: j must be 1 or 2");
    if (trials == 0) throw error(errc::contract, "ap moments: trials must be >= 1");
    const HBlock& block = require_block(grid, H);
    Side side = block.j % 2 == 0 ? Side::plain : Side::star;

    MomentReport r;
    r.statistic = std::string(side == Side::plain ? "lambda_ap" : "lambda_ap_star") +
                  (j == 2 ? "_sq" : "");
    r.params = lab_params(p, H, j);
    r.method = "monte_carlo";
    r.trials = trials;
    r.seed = seed;

    uint64_t z_floor = static_cast<uint64_t>(std::floor(p.z));
    auto sigma = sigma_product(0, z_floor);

    if (block.primes.empty()) {
        r.vacuous = true;
        r.lhs = 0.0;
        r.rhs = 0.0;
        r.ratio = 0.0;
        return r;
    }

    WeightContext tmpl = make_weight_context(H, block.primes.front(), p.K, p.M, p.z);
    std::vector<WeightContext> ctxs;
    for (uint64_t q : block.primes) {
        ctxs.push_back(tmpl);
        ctxs.back().q = q;
    }

    double dsum = 0.0, dsum_sq = 0.0;
    for (uint64_t t = 0; t < trials; ++t) {
        Rng rng(Rng::derive(seed, t));
        ResidueAssignment asg = random_assignment(z_floor, rng);
        std::vector<SieveView> views;
        views.reserve(ctxs.size());
        for (const auto& ctx : ctxs) views.push_back(make_view(ctx, asg, side, N));
        IntervalKind kind = side == Side::plain ? IntervalKind::I1 : IntervalKind::I2;
        SurvivorSet s = survivors(asg, 0, z_floor, kind, p.y, N);
        std::vector<bool> all(ctxs.size(), true);
        double stat = 0.0;
        for (uint64_t off : s.alive_offsets()) {
            int64_t n = kind == IntervalKind::I1 ? static_cast<int64_t>(off)
                                                 : -static_cast<int64_t>(off);
            double inner = covering_sum(ctxs, views, side, n, all);
            stat += j == 2 ? inner * inner : inner;
        }
        dsum += stat;
        dsum_sq += stat * stat;
    }

    r.lhs = dsum / static_cast<double>(trials);
    double kh = static_cast<double>(p.K) * H;
    double main = static_cast<double>(block.primes.size()) * kh / tmpl.sigma2.as_double();
    r.rhs = std::pow(main, j) * sigma.as_double() * static_cast<double>(p.y);
    r.ratio = r.rhs != 0 ? r.lhs / r.rhs : 0.0;
    double mean = r.lhs;
    double var = dsum_sq / static_cast<double>(trials) - mean * mean;
    if (var < 0) var = 0;
    r.stderr_lhs = std::sqrt(var / static_cast<double>(trials));
    return r;
}

FilterSets build_filter_sets(const Parameters& p, const HGrid& grid,
                             const ResidueAssignment& assignment, Side side, const Int& N) {
    p.validate();
    FilterSets fs;
    fs.side = side;
    uint64_t z_floor = static_cast<uint64_t>(std::floor(p.z));
    IntervalKind kind = side == Side::plain ? IntervalKind::I1 : IntervalKind::I2;
    SurvivorSet s = survivors(assignment, 0, z_floor, kind, p.y, N);
    auto alive = s.alive_offsets();

    for (const auto& block : grid.blocks) {
        bool wanted = side == Side::plain ? block.j % 2 == 0 : block.j % 2 == 1;
        if (!wanted || block.primes.empty()) continue;
        FilterSets::PerH ph;
        ph.H = block.H;

        WeightContext tmpl = make_weight_context(block.H, block.primes.front(), p.K, p.M, p.z);
        std::vector<WeightContext> ctxs;
        for (uint64_t q : block.primes) {
            ctxs.push_back(tmpl);
            ctxs.back().q = q;
        }
        std::vector<SieveView> views;
        for (const auto& ctx : ctxs) views.push_back(make_view(ctx, assignment, side, N));

        // Good primes: |row_sum - (K+1)y| <= y / H^{1+eps}.
        double ky = static_cast<double>(p.K + 1) * static_cast<double>(p.y);
        ph.threshold_good =
            static_cast<double>(p.y) / std::pow(block.H, 1.0 + p.epsilon);
        std::vector<bool> good_mask(ctxs.size(), false);
        for (size_t i = 0; i < ctxs.size(); ++i) {
            RowSum rs = row_sum(ctxs[i], assignment, side, N, p.y);
            if (std::abs(rs.value - ky) <= ph.threshold_good) {
                good_mask[i] = true;
                ph.good_primes.push_back(ctxs[i].q);
            } else {
                ph.bad_primes.push_back(ctxs[i].q);
            }
        }

        double kh = static_cast<double>(p.K) * block.H;
        double s2 = tmpl.sigma2.as_double();
        double a_term = static_cast<double>(block.primes.size()) * kh / s2;
        ph.threshold_e = a_term / std::pow(block.H, (p.M - 3.0) / 2.0 - p.epsilon);
        ph.threshold_estr = static_cast<double>(block.primes.size()) * kh /
                            (std::pow(block.H, 1.0 + p.epsilon) * s2);

        std::vector<bool> all(ctxs.size(), true);
        std::vector<bool> bad_only(ctxs.size());
        for (size_t i = 0; i < ctxs.size(); ++i) bad_only[i] = !good_mask[i];
        for (uint64_t off : alive) {
            int64_t n = kind == IntervalKind::I1 ? static_cast<int64_t>(off)
                                                 : -static_cast<int64_t>(off);
            double total = covering_sum(ctxs, views, side, n, all);
            if (std::abs(total - a_term) >= ph.threshold_e) ph.bad_offsets_e.push_back(off);
            double bad_total = covering_sum(ctxs, views, side, n, bad_only);
            if (bad_total >= ph.threshold_estr) ph.bad_offsets_estr.push_back(off);
        }
        fs.per_h.push_back(std::move(ph));
    }
    return fs;
}

CConstants c_constants(const Parameters& p, const HGrid& grid) {
    p.validate();
    if (grid.H1().empty()) throw error(errc::contract, "c_constants: empty H1 sublist");

    CConstants c;
    double scale = static_cast<double>(p.K) /
                   (static_cast<double>(p.K + 1) * static_cast<double>(p.y));
    double direct2 = 0.0, direct3 = 0.0;
    bool have3 = false;
    for (const auto& block : grid.blocks) {
        if (block.primes.empty()) continue;
        auto sigma2 = sigma_product_real(std::pow(block.H, p.M), p.z);
        double term = static_cast<double>(block.primes.size()) * block.H / sigma2.as_double();
        if (block.j % 2 == 0) {
            direct2 += term;
        } else {
            direct3 += term;
            have3 = true;
        }
    }
    c.C2_direct = scale * direct2;
    c.C3_direct = have3 ? scale * direct3 : std::numeric_limits<double>::quiet_NaN();

    double pref = static_cast<double>(p.K) * (p.xi - 1.0) /
                  (2.0 * static_cast<double>(p.K + 1) * p.M * p.xi * std::log(p.xi));
    double lninv = std::log(1.0 / (2.0 * p.delta));
    c.C2_predicted = pref * lninv;
    c.C3_predicted = pref * lninv;
    return c;
}

} // namespace pav
