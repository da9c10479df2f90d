#include "pav/arith.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "pav/errors.hpp"

namespace pav {

namespace {

// Plain sieve of Eratosthenes up to `limit` inclusive.
std::vector<uint64_t> simple_sieve(uint64_t limit) {
    std::vector<uint64_t> primes;
    if (limit < 2) return primes;
    std::vector<uint8_t> composite(limit + 1, 0);
    for (uint64_t i = 2; i * i <= limit; ++i) {
        if (composite[i]) continue;
        for (uint64_t j = i * i; j <= limit; j += i) composite[j] = 1;
    }
    for (uint64_t i = 2; i <= limit; ++i)
        if (!composite[i]) primes.push_back(i);
    return primes;
}

uint64_t isqrt64(uint64_t n) {
    uint64_t r = static_cast<uint64_t>(std::sqrt(static_cast<double>(n)));
    while (r > 0 && r * r > n) --r;
    while ((r + 1) * (r + 1) <= n) ++r;
    return r;
}

} // namespace

PrimeTable PrimeTable::up_to(uint64_t limit) {
    PrimeTable t;
    t.limit = limit;
    t.primes = primes_in(0, limit);
    return t;
}

std::vector<uint64_t> primes_in(uint64_t lo, uint64_t hi, uint64_t budget) {
    if (lo > hi) throw error(errc::contract, "primes_in: lo > hi");
    if (hi > budget)
        throw error(errc::resource, "primes_in: upper bound " + std::to_string(hi) +
                                        " exceeds sieve budget " + std::to_string(budget));
    if (hi < 2 || lo >= hi) return {};

    if (hi <= 4'000'000) {
        auto all = simple_sieve(hi);
        std::vector<uint64_t> out;
        for (uint64_t p : all)
            if (p > lo) out.push_back(p);
        return out;
    }

    // Segmented sieve over (lo, hi] with base primes up to sqrt(hi).
    auto base = simple_sieve(isqrt64(hi));
    std::vector<uint64_t> out;
    constexpr uint64_t kSegment = 1u << 20;
    uint64_t first = std::max<uint64_t>(lo + 1, 2);
    std::vector<uint8_t> composite;
    for (uint64_t seg_lo = first; seg_lo <= hi; seg_lo += kSegment) {
        uint64_t seg_hi = std::min(hi, seg_lo + kSegment - 1);
        composite.assign(seg_hi - seg_lo + 1, 0);
        for (uint64_t p : base) {
            if (p * p > seg_hi) break;
            uint64_t start = std::max(p * p, ((seg_lo + p - 1) / p) * p);
            for (uint64_t j = start; j <= seg_hi; j += p) composite[j - seg_lo] = 1;
        }
        for (uint64_t v = seg_lo; v <= seg_hi; ++v)
            if (!composite[v - seg_lo]) out.push_back(v);
    }
    return out;
}

std::vector<uint64_t> primes_in_real(double lo, double hi, uint64_t budget) {
    if (lo > hi) throw error(errc::contract, "primes_in_real: lo > hi");
    if (hi < 2.0) return {};
    // p > lo  <=>  p >= floor(lo) + 1; p <= hi  <=>  p <= floor(hi).
    uint64_t lo_int = lo < 0 ? 0 : static_cast<uint64_t>(std::floor(lo));
    uint64_t hi_int = static_cast<uint64_t>(std::floor(hi));
    if (hi_int < lo_int) return {};
    return primes_in(lo_int, hi_int, budget);
}

Int primorial(uint64_t x) {
    if (x < 2) throw error(errc::contract, "primorial: x must be >= 2");
    auto ps = primes_in(0, x);
    // Balanced product tree keeps the multiplications near-equal size.
    std::vector<Int> layer;
    layer.reserve(ps.size());
    for (uint64_t p : ps) layer.emplace_back(p);
    while (layer.size() > 1) {
        std::vector<Int> next;
        next.reserve((layer.size() + 1) / 2);
        for (size_t i = 0; i + 1 < layer.size(); i += 2) next.push_back(layer[i] * layer[i + 1]);
        if (layer.size() % 2) next.push_back(layer.back());
        layer.swap(next);
    }
    return layer.empty() ? Int(1) : layer[0];
}

double log_primorial(uint64_t x) {
    auto ps = primes_in(0, x);
    double s = 0.0;
    for (uint64_t p : ps) s += std::log(static_cast<double>(p));
    return s;
}

namespace {

Int product_tree(std::vector<Int> layer) {
    if (layer.empty()) return Int(1);
    while (layer.size() > 1) {
        std::vector<Int> next;
        next.reserve((layer.size() + 1) / 2);
        for (size_t i = 0; i + 1 < layer.size(); i += 2) next.push_back(layer[i] * layer[i + 1]);
        if (layer.size() % 2) next.push_back(layer.back());
        layer.swap(next);
    }
    return layer[0];
}

} // namespace

RationalProduct sigma_product(uint64_t lo, uint64_t hi, uint64_t exact_cap) {
    auto ps = primes_in(lo, hi);
    RationalProduct r;
    if (ps.size() > exact_cap) {
        r.exact = false;
        r.value = 1;
        double acc = 1.0;
        for (uint64_t p : ps) acc *= 1.0 - 1.0 / static_cast<double>(p);
        r.float_view = acc;
        return r;
    }
    std::vector<Int> nums, dens;
    nums.reserve(ps.size());
    dens.reserve(ps.size());
    for (uint64_t p : ps) {
        nums.emplace_back(p - 1);
        dens.emplace_back(p);
    }
    Rat q(product_tree(std::move(nums)), product_tree(std::move(dens)));
    q.canonicalize();
    r.value = q;
    r.float_view = q.get_d();
    r.exact = true;
    return r;
}

RationalProduct sigma_product_real(double lo, double hi, uint64_t exact_cap) {
    if (hi < lo) throw error(errc::contract, "sigma_product_real: hi < lo");
    if (hi < 2.0) return RationalProduct{};
    uint64_t lo_int = lo < 0 ? 0 : static_cast<uint64_t>(std::floor(lo));
    uint64_t hi_int = static_cast<uint64_t>(std::floor(hi));
    if (hi_int < lo_int) return RationalProduct{};
    return sigma_product(lo_int, hi_int, exact_cap);
}

Congruence crt_combine(const std::vector<Congruence>& congruences) {
    if (congruences.empty()) throw error(errc::contract, "crt_combine: empty input");
    Int r = 0, m = 1;
    for (const auto& c : congruences) {
        if (c.modulus <= 0) throw error(errc::contract, "crt_combine: modulus must be positive");
        if (c.residue < 0 || c.residue >= c.modulus)
            throw error(errc::contract, "crt_combine: residue out of [0, modulus)");
        Int g, s, t;
        mpz_gcdext(g.get_mpz_t(), s.get_mpz_t(), t.get_mpz_t(), m.get_mpz_t(),
                   c.modulus.get_mpz_t());
        if (g != 1)
            throw error(errc::contract, "crt_combine: moduli not pairwise coprime (gcd " +
                                            g.get_str() + ")");
        // r' = r + m * ((c.residue - r) * s mod c.modulus)
        Int diff = c.residue - r;
        Int k = (diff * s) % c.modulus;
        if (k < 0) k += c.modulus;
        r += m * k;
        m *= c.modulus;
        r %= m;
        if (r < 0) r += m;
    }
    return {r, m};
}

namespace {

const std::vector<uint64_t>& small_primes_1000() {
    static const std::vector<uint64_t> table = simple_sieve(1000);
    return table;
}

bool miller_rabin_round(const Int& n, const Int& nm1, const Int& d, unsigned s, const Int& base) {
    Int a = base % n;
    if (a <= 1 || a == nm1) return true; // uninformative base
    Int x;
    mpz_powm(x.get_mpz_t(), a.get_mpz_t(), d.get_mpz_t(), n.get_mpz_t());
    if (x == 1 || x == nm1) return true;
    for (unsigned r = 1; r < s; ++r) {
        x = (x * x) % n;
        if (x == nm1) return true;
        if (x == 1) return false;
    }
    return false;
}

// Strong Lucas probable-prime test with Selfridge's method A parameters.
// Expects n odd, > 3, not a perfect square, no small factors.
bool strong_lucas(const Int& n) {
    long d_abs = 5;
    int sign = 1;
    Int D;
    while (true) {
        D = sign > 0 ? Int(d_abs) : Int(-d_abs);
        int j = mpz_jacobi(D.get_mpz_t(), n.get_mpz_t());
        if (j == -1) break;
        if (j == 0 && Int(d_abs) != n) return false; // found a factor
        d_abs += 2;
        sign = -sign;
        if (d_abs > 1'000'000)
            throw error(errc::contract, "strong_lucas: no suitable D (perfect square input?)");
    }
    // P = 1, Q = (1 - D)/4.
    Int Q = (Int(1) - D) / 4;
    Int delta = n + 1;
    unsigned long s = mpz_scan1(delta.get_mpz_t(), 0);
    Int dd = delta >> s;

    // Walk the bits of dd computing (U_k, V_k, Q^k) mod n.
    Int U = 1, V = 1, Qk = Q % n; // k = 1 after the leading bit
    if (Qk < 0) Qk += n;
    size_t bits = mpz_sizeinbase(dd.get_mpz_t(), 2);
    Int inv2 = (n + 1) / 2; // 2^{-1} mod n for odd n
    for (size_t i = bits - 1; i-- > 0;) {
        // double: k -> 2k
        U = (U * V) % n;
        V = (V * V - 2 * Qk) % n;
        if (V < 0) V += n;
        Qk = (Qk * Qk) % n;
        if (mpz_tstbit(dd.get_mpz_t(), static_cast<mp_bitcnt_t>(i))) {
            // increment: k -> k+1 (P = 1)
            Int U2 = ((U + V) * inv2) % n;
            Int V2 = ((D * U + V) * inv2) % n;
            U = U2 % n;
            if (U < 0) U += n;
            V = V2 % n;
            if (V < 0) V += n;
            Qk = (Qk * (Q % n)) % n;
            if (Qk < 0) Qk += n;
        }
    }
    if (U == 0 || V == 0) return true;
    for (unsigned long r = 1; r < s; ++r) {
        V = (V * V - 2 * Qk) % n;
        if (V < 0) V += n;
        if (V == 0) return true;
        Qk = (Qk * Qk) % n;
    }
    return false;
}

} // namespace

bool is_prime(const Int& n, int rounds) {
    if (n < 0) throw error(errc::contract, "is_prime: n must be >= 0");
    if (n < 2) return false;
    for (uint64_t p : small_primes_1000()) {
        if (n == Int(p)) return true;
        if (mpz_divisible_ui_p(n.get_mpz_t(), static_cast<unsigned long>(p))) return false;
    }

    Int nm1 = n - 1;
    unsigned long s = mpz_scan1(nm1.get_mpz_t(), 0);
    Int d = nm1 >> s;

    if (mpz_sizeinbase(n.get_mpz_t(), 2) <= 64) {
        // Deterministic witness set for n < 2^64.
        static const uint64_t witnesses[] = {2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37};
        for (uint64_t w : witnesses)
            if (!miller_rabin_round(n, nm1, d, static_cast<unsigned>(s), Int(w))) return false;
        return true;
    }

    if (mpz_perfect_square_p(n.get_mpz_t())) return false;
    const auto& bases = small_primes_1000();
    int count = std::min<int>(rounds, static_cast<int>(bases.size()));
    for (int i = 0; i < count; ++i)
        if (!miller_rabin_round(n, nm1, d, static_cast<unsigned>(s), Int(bases[i]))) return false;
    return strong_lucas(n);
}

double log_mpz(const Int& n) {
    if (n <= 0) throw error(errc::contract, "log_mpz: n must be positive");
    signed long exp = 0;
    double m = mpz_get_d_2exp(&exp, n.get_mpz_t());
    return std::log(m) + static_cast<double>(exp) * std::log(2.0);
}

} // namespace pav
