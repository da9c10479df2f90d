#ifndef PAV_SIEVE_HPP
#define PAV_SIEVE_HPP

#include <cstdint>
#include <map>
#include <vector>

#include "pav/arith.hpp"

namespace pav {

enum class Provenance : uint8_t { random, zero, greedy, progression, matching };

// b represented as one residue per prime. Iteration order is ascending prime,
// so CRT assembly and serialization are deterministic.
class ResidueAssignment {
  public:
    struct Entry {
        uint64_t residue;
        Provenance tag;
    };

    void set(uint64_t p, uint64_t r, Provenance tag);         // throws on r >= p or duplicate p
    bool has(uint64_t p) const { return entries_.count(p) != 0; }
    uint64_t residue(uint64_t p) const;                       // throws errc::contract if absent
    const std::map<uint64_t, Entry>& entries() const { return entries_; }
    size_t size() const { return entries_.size(); }

  private:
    std::map<uint64_t, Entry> entries_;
};

// I1 is [1, y]; I2 is [-y, -1] stored in mirrored offsets t = -m, so both
// intervals share the same bit-vector kernel. The huge shift (N for I2)
// enters only through N mod p.
enum class IntervalKind { I1, I2 };

class SurvivorSet {
  public:
    SurvivorSet(IntervalKind kind, uint64_t y, Int shift); // all positions alive

    IntervalKind kind() const { return kind_; }
    uint64_t y() const { return y_; }
    const Int& shift() const { return shift_; }

    bool alive(uint64_t t) const; // 1 <= t <= y
    void kill(uint64_t t);
    void kill_class(uint64_t p, uint64_t c); // kill every t in [1,y] with t = c (mod p)
    uint64_t count() const;
    std::vector<uint64_t> alive_offsets() const;
    bool same_frame(const SurvivorSet& o) const {
        return kind_ == o.kind_ && y_ == o.y_ && shift_ == o.shift_;
    }

    // Offsets killed by residue r of prime p in this frame:
    //   I1: t = r (mod p);  I2: t = N + r (mod p)   [m = -t, m = -N-b (mod p)].
    uint64_t kill_class_for_residue(uint64_t p, uint64_t r);
    uint64_t class_of_residue(uint64_t p, uint64_t r) const;

    void and_with(const SurvivorSet& o); // word-wise AND, same frame required

  private:
    IntervalKind kind_;
    uint64_t y_;
    Int shift_; // 0 for I1; N for I2
    std::vector<uint64_t> words_;
};

// Sieve [1,y] (or the mirrored interval) by every prime in (prime_lo, prime_hi]
// using the assignment's residues. Throws errc::contract when the assignment
// is missing a prime in the range.
SurvivorSet survivors(const ResidueAssignment& assignment, uint64_t prime_lo, uint64_t prime_hi,
                      IntervalKind kind, uint64_t y, const Int& N = Int(0));

// Bitwise AND of two survivor sets over the same frame (S = S1 cap S2).
SurvivorSet intersect_levels(const SurvivorSet& s1, const SurvivorSet& s2);

uint64_t count(const SurvivorSet& s);

} // namespace pav

#endif
