#include "pav/sieve.hpp"

#include <bit>

#include "pav/errors.hpp"

namespace pav {

void ResidueAssignment::set(uint64_t p, uint64_t r, Provenance tag) {
    if (p < 2) throw error(errc::contract, "ResidueAssignment: modulus must be a prime >= 2");
    if (r >= p) throw error(errc::contract, "ResidueAssignment: residue must be < prime");
    auto [it, inserted] = entries_.emplace(p, Entry{r, tag});
    (void)it;
    if (!inserted)
        throw error(errc::contract,
                    "ResidueAssignment: prime " + std::to_string(p) + " assigned twice");
}

uint64_t ResidueAssignment::residue(uint64_t p) const {
    auto it = entries_.find(p);
    if (it == entries_.end())
        throw error(errc::contract, "ResidueAssignment: no residue for prime " + std::to_string(p));
    return it->second.residue;
}

SurvivorSet::SurvivorSet(IntervalKind kind, uint64_t y, Int shift)
    : kind_(kind), y_(y), shift_(std::move(shift)), words_((y + 63) / 64, ~0ULL) {
    if (y_ == 0) throw error(errc::contract, "SurvivorSet: y must be >= 1");
    // Mask tail bits beyond y.
    uint64_t tail = y_ % 64;
    if (tail) words_.back() = (1ULL << tail) - 1;
}

bool SurvivorSet::alive(uint64_t t) const {
    if (t < 1 || t > y_) throw error(errc::contract, "SurvivorSet: offset out of [1, y]");
    uint64_t i = t - 1;
    return (words_[i >> 6] >> (i & 63)) & 1ULL;
}

void SurvivorSet::kill(uint64_t t) {
    if (t < 1 || t > y_) throw error(errc::contract, "SurvivorSet: offset out of [1, y]");
    uint64_t i = t - 1;
    words_[i >> 6] &= ~(1ULL << (i & 63));
}

void SurvivorSet::kill_class(uint64_t p, uint64_t c) {
    uint64_t start = c == 0 ? p : c;
    for (uint64_t t = start; t <= y_; t += p) kill(t);
}

uint64_t SurvivorSet::count() const {
    uint64_t n = 0;
    for (uint64_t w : words_) n += static_cast<uint64_t>(std::popcount(w));
    return n;
}

std::vector<uint64_t> SurvivorSet::alive_offsets() const {
    std::vector<uint64_t> out;
    for (uint64_t t = 1; t <= y_; ++t)
        if (alive(t)) out.push_back(t);
    return out;
}

uint64_t SurvivorSet::class_of_residue(uint64_t p, uint64_t r) const {
    if (kind_ == IntervalKind::I1) return r % p;
    uint64_t n_mod = mpz_fdiv_ui(shift_.get_mpz_t(), static_cast<unsigned long>(p));
    return (n_mod + r) % p;
}

uint64_t SurvivorSet::kill_class_for_residue(uint64_t p, uint64_t r) {
    uint64_t c = class_of_residue(p, r);
    uint64_t before = count();
    kill_class(p, c);
    return before - count();
}

SurvivorSet survivors(const ResidueAssignment& assignment, uint64_t prime_lo, uint64_t prime_hi,
                      IntervalKind kind, uint64_t y, const Int& N) {
    SurvivorSet s(kind, y, kind == IntervalKind::I2 ? N : Int(0));
    auto range = primes_in(prime_lo, prime_hi);
    for (uint64_t p : range) {
        if (!assignment.has(p))
            throw error(errc::contract,
                        "survivors: assignment missing prime " + std::to_string(p));
        s.kill_class(p, s.class_of_residue(p, assignment.residue(p)));
    }
    return s;
}

void SurvivorSet::and_with(const SurvivorSet& o) {
    if (!same_frame(o)) throw error(errc::contract, "and_with: mismatched interval frames");
    for (size_t i = 0; i < words_.size(); ++i) words_[i] &= o.words_[i];
}

SurvivorSet intersect_levels(const SurvivorSet& s1, const SurvivorSet& s2) {
    SurvivorSet out = s1;
    out.and_with(s2);
    return out;
}

uint64_t count(const SurvivorSet& s) { return s.count(); }

} // namespace pav
