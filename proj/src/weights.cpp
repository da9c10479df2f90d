#include "pav/weights.hpp"

#include <cmath>

#include "pav/errors.hpp"

namespace pav {

WeightContext make_weight_context(double H, uint64_t q, int K, double M, double z,
                                  std::optional<bool> exact_override) {
    if (!(H >= 1.0)) throw error(errc::contract, "make_weight_context: H must be >= 1");
    if (K < 2) throw error(errc::contract, "make_weight_context: K must be >= 2");
    if (!(M >= 2.0)) throw error(errc::contract, "make_weight_context: M must be >= 2");
    WeightContext ctx;
    ctx.H = H;
    ctx.q = q;
    ctx.K = K;
    ctx.M = M;
    ctx.z = z;
    ctx.J = static_cast<int64_t>(std::floor(static_cast<double>(K) * H));
    double split = std::pow(H, M);
    ctx.level1 = primes_in_real(0.0, split);
    ctx.level2 = primes_in_real(split, z);
    ctx.sigma2 = sigma_product_real(split, z);
    if (exact_override) {
        ctx.exact = *exact_override;
    } else {
        ctx.exact = static_cast<uint64_t>(ctx.J) * ctx.level2.size() <= 10'000;
    }
    return ctx;
}

namespace {

uint64_t forbidden_residue(uint64_t p, uint64_t r, Side side, const Int& N) {
    if (side == Side::plain) return r % p;
    // star: m must avoid -N - r (mod p)
    uint64_t n_mod = mpz_fdiv_ui(N.get_mpz_t(), static_cast<unsigned long>(p));
    return (p - (n_mod + r) % p) % p;
}

inline bool avoids(int64_t m, uint64_t p, uint64_t forbidden) {
    int64_t pp = static_cast<int64_t>(p);
    int64_t rem = m % pp;
    if (rem < 0) rem += pp;
    return static_cast<uint64_t>(rem) != forbidden;
}

} // namespace

SieveView make_view(const WeightContext& ctx, const ResidueAssignment& assignment, Side side,
                    const Int& N) {
    SieveView v;
    v.level1.reserve(ctx.level1.size());
    v.level2.reserve(ctx.level2.size());
    for (uint64_t p : ctx.level1)
        v.level1.emplace_back(p, forbidden_residue(p, assignment.residue(p), side, N));
    for (uint64_t p : ctx.level2)
        v.level2.emplace_back(p, forbidden_residue(p, assignment.residue(p), side, N));
    return v;
}

std::vector<int64_t> ap_set(const WeightContext& ctx, int64_t n,
                            const ResidueAssignment& assignment, Side side, const Int& N) {
    SieveView view = make_view(ctx, assignment, side, N);
    std::vector<int64_t> out;
    int64_t step = side == Side::plain ? static_cast<int64_t>(ctx.q)
                                       : -static_cast<int64_t>(ctx.q);
    for (int64_t h = 1; h <= ctx.J; ++h) {
        int64_t m = n + step * h;
        bool in_s1 = true;
        for (const auto& [p, f] : view.level1) {
            if (!avoids(m, p, f)) {
                in_s1 = false;
                break;
            }
        }
        if (in_s1) out.push_back(m);
    }
    return out;
}

WeightValue lambda_view(const WeightContext& ctx, const SieveView& view, int64_t n, Side side) {
    int64_t step = side == Side::plain ? static_cast<int64_t>(ctx.q)
                                       : -static_cast<int64_t>(ctx.q);
    uint32_t k = 0;
    for (int64_t h = 1; h <= ctx.J; ++h) {
        int64_t m = n + step * h;
        bool in_s1 = true;
        for (const auto& [p, f] : view.level1) {
            if (!avoids(m, p, f)) {
                in_s1 = false;
                break;
            }
        }
        if (!in_s1) continue;
        // Level-1 survivor: lambda dies unless it also survives level 2.
        for (const auto& [p, f] : view.level2)
            if (!avoids(m, p, f)) return WeightValue{true, 0};
        ++k;
    }
    return WeightValue{false, k};
}

WeightValue lambda(const WeightContext& ctx, int64_t n, const ResidueAssignment& assignment) {
    SieveView view = make_view(ctx, assignment, Side::plain, Int(0));
    return lambda_view(ctx, view, n, Side::plain);
}

WeightValue lambda_star(const WeightContext& ctx, int64_t n, const ResidueAssignment& assignment,
                        const Int& N) {
    SieveView view = make_view(ctx, assignment, Side::star, N);
    return lambda_view(ctx, view, n, Side::star);
}

Rat weight_exact(const WeightContext& ctx, const WeightValue& w) {
    if (w.zero) return Rat(0);
    if (!ctx.sigma2.exact)
        throw error(errc::contract, "weight_exact: sigma2 not held exactly (factor cap exceeded)");
    Rat s = ctx.sigma2.value;
    Rat inv(s.get_den(), s.get_num()); // sigma2^{-1}
    inv.canonicalize();
    Rat out = 1;
    for (uint32_t i = 0; i < w.exponent; ++i) out *= inv;
    return out;
}

double weight_double(const WeightContext& ctx, const WeightValue& w) {
    if (w.zero) return 0.0;
    return std::pow(ctx.sigma2.as_double(), -static_cast<double>(w.exponent));
}

namespace {

struct NRange {
    int64_t first, last; // inclusive
};

// Plain rows run over (-Ky, y], starred rows over [-y, Ky).
NRange row_range(const WeightContext& ctx, Side side, uint64_t y) {
    int64_t ky = static_cast<int64_t>(ctx.K) * static_cast<int64_t>(y);
    int64_t yy = static_cast<int64_t>(y);
    if (side == Side::plain) return {-ky + 1, yy};
    return {-yy, ky - 1};
}

} // namespace

RowSum row_sum(const WeightContext& ctx, const ResidueAssignment& assignment, Side side,
               const Int& N, uint64_t y) {
    SieveView view = make_view(ctx, assignment, side, N);
    RowSum rs;
    rs.exact = ctx.exact && ctx.sigma2.exact;
    rs.histogram.assign(static_cast<size_t>(ctx.J) + 1, 0);
    NRange r = row_range(ctx, side, y);
    for (int64_t n = r.first; n <= r.last; ++n) {
        WeightValue w = lambda_view(ctx, view, n, side);
        if (w.zero)
            ++rs.zeros;
        else
            ++rs.histogram[w.exponent];
    }
    if (rs.exact) {
        Rat inv(ctx.sigma2.value.get_den(), ctx.sigma2.value.get_num());
        inv.canonicalize();
        Rat acc = 0, power = 1;
        for (size_t k = 0; k < rs.histogram.size(); ++k) {
            if (rs.histogram[k]) acc += Rat(static_cast<unsigned long>(rs.histogram[k])) * power;
            power *= inv;
        }
        rs.value_exact = acc;
        rs.value = acc.get_d();
    } else {
        double s2 = ctx.sigma2.as_double();
        double acc = 0.0;
        for (size_t k = 0; k < rs.histogram.size(); ++k)
            if (rs.histogram[k])
                acc += static_cast<double>(rs.histogram[k]) *
                       std::pow(s2, -static_cast<double>(k));
        rs.value = acc;
    }
    return rs;
}

int64_t sample_progression_base(const WeightContext& ctx, const ResidueAssignment& assignment,
                                Side side, const Int& N, uint64_t y, Rng& rng) {
    SieveView view = make_view(ctx, assignment, side, N);
    NRange r = row_range(ctx, side, y);
    std::vector<std::pair<int64_t, WeightValue>> weights;
    for (int64_t n = r.first; n <= r.last; ++n) {
        WeightValue w = lambda_view(ctx, view, n, side);
        if (!w.zero) weights.emplace_back(n, w);
    }
    if (weights.empty())
        throw error(errc::undefined_distribution,
                    "sample_progression_base: zero row sum for q = " + std::to_string(ctx.q));

    uint64_t u = rng.next();
    if (ctx.sigma2.exact) {
        Rat inv(ctx.sigma2.value.get_den(), ctx.sigma2.value.get_num());
        inv.canonicalize();
        std::vector<Rat> powers(static_cast<size_t>(ctx.J) + 1);
        powers[0] = 1;
        for (size_t k = 1; k < powers.size(); ++k) powers[k] = powers[k - 1] * inv;
        Rat total = 0;
        for (const auto& [n, w] : weights) total += powers[w.exponent];
        // target = total * u / 2^64; walk the cumulative sum.
        Rat target = total * Rat(Int(u), Int(1) << 64);
        target.canonicalize();
        Rat acc = 0;
        for (const auto& [n, w] : weights) {
            acc += powers[w.exponent];
            if (acc > target) return n;
        }
    } else {
        double s2 = ctx.sigma2.as_double();
        double total = 0.0;
        for (const auto& [n, w] : weights) total += std::pow(s2, -static_cast<double>(w.exponent));
        double target = total * (static_cast<double>(u) / 18446744073709551616.0);
        double acc = 0.0;
        for (const auto& [n, w] : weights) {
            acc += std::pow(s2, -static_cast<double>(w.exponent));
            if (acc > target) return n;
        }
    }
    return weights.back().first;
}

bool hq_inequality_ok(const WeightContext& ctx, uint64_t x) {
    double lhs = std::log(ctx.H) -
                 static_cast<double>(ctx.K) * ctx.H * std::log(ctx.sigma2.as_double());
    return lhs <= std::log(static_cast<double>(x)) / 10.0;
}

} // namespace pav
