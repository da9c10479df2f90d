#ifndef PAV_CERTIFY_HPP
#define PAV_CERTIFY_HPP

#include <cstdint>
#include <string>
#include <vector>

#include "pav/arith.hpp"

namespace pav {

// Self-contained, machine-checkable record of one decomposition. Witnesses
// are small prime factors: entry i of witnesses_n1 covers offset t = i - r
// around n1 and holds a prime p <= x dividing n1 + t; 0 marks the one
// boundary offset per side where the window construction does not apply
// (t = -r for n1, t = +r for n2).
struct Certificate {
    int version = 1;
    Int N;
    double delta = 0.0;
    uint64_t x = 0;
    uint64_t y = 0;
    uint64_t radius = 0;
    Int n1, n2, b2;
    std::vector<uint64_t> witnesses_n1; // size 2*radius + 1
    std::vector<uint64_t> witnesses_n2;
    uint64_t seed = 0;
    std::string options_hash;

    std::string serialize() const; // canonical byte-stable text form
    static Certificate parse(const std::string& text);
    static Certificate load(const std::string& path);
    void save(const std::string& path) const;
};

// f(n) scan: least d with n-d or n+d prime, searching outward; d is capped,
// exceeded=true means "no prime within distance < cap".
struct NearestPrime {
    bool exceeded = false;
    uint64_t distance = 0;
};

NearestPrime nearest_prime_distance(const Int& n, uint64_t cap);

enum class CheckFailure { none, parse, arithmetic, witness, coverage, primality };

struct CheckReport {
    bool ok = true;
    CheckFailure failure = CheckFailure::none;
    std::string detail;
};

const char* check_failure_name(CheckFailure f);

// Full verification: n1 + n2 = N, every witness divides its target with
// p <= x, offsets cover the window, and in strict mode an independent
// primality scan reconfirms f(n_i) >= radius.
CheckReport check(const Certificate& cert, bool strict = false);

} // namespace pav

#endif
