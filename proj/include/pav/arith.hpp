#ifndef PAV_ARITH_HPP
#define PAV_ARITH_HPP

#include <cstdint>
#include <vector>

#include <gmpxx.h>

namespace pav {

using Int = mpz_class;
using Rat = mpq_class;

// Hard ceiling for plain sieving requests; anything above is a resource error.
inline constexpr uint64_t kSieveBudget = 1'000'000'000ULL;

// sigma products stay exact rationals up to this many prime factors, then
// fall back to a double product with exact=false.
inline constexpr uint64_t kExactFactorCap = 100'000ULL;

struct PrimeTable {
    uint64_t limit = 0;
    std::vector<uint64_t> primes;

    static PrimeTable up_to(uint64_t limit);
};

// Primes p with lo < p <= hi, ascending. Segmented when the window sits high.
std::vector<uint64_t> primes_in(uint64_t lo, uint64_t hi, uint64_t budget = kSieveBudget);

// Same half-open convention over real endpoints (used for Q_H blocks and the
// H^M level split, whose bounds are powers of real numbers).
std::vector<uint64_t> primes_in_real(double lo, double hi, uint64_t budget = kSieveBudget);

// Product of all primes <= x (x >= 2).
Int primorial(uint64_t x);

// sum of ln p over p <= x, i.e. ln primorial(x), without building the product.
double log_primorial(uint64_t x);

// Exact rational product with a float mirror. exact=false flags the capped
// fallback where only float_view is meaningful.
struct RationalProduct {
    Rat value;         // lowest terms; 1 when !exact
    double float_view = 1.0;
    bool exact = true;

    double as_double() const { return exact ? value.get_d() : float_view; }
};

// prod_{lo < p <= hi} (1 - 1/p), exactly (empty range -> 1).
RationalProduct sigma_product(uint64_t lo, uint64_t hi, uint64_t exact_cap = kExactFactorCap);
RationalProduct sigma_product_real(double lo, double hi, uint64_t exact_cap = kExactFactorCap);

struct Congruence {
    Int residue;
    Int modulus;
};

// Combine pairwise-coprime congruences into the unique residue mod the
// product. Throws errc::contract on non-coprime moduli or out-of-range
// residues.
Congruence crt_combine(const std::vector<Congruence>& congruences);

// Deterministic Miller-Rabin for n < 2^64 (fixed witness set); for larger n,
// `rounds` strong-pseudoprime rounds on fixed bases plus a strong Lucas test.
bool is_prime(const Int& n, int rounds = 64);

// ln n for a positive big integer, via mantissa/exponent split.
double log_mpz(const Int& n);

} // namespace pav

#endif
