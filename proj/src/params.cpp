#include "pav/params.hpp"

#include <cmath>

#include "pav/errors.hpp"

namespace pav {

void Parameters::validate() const {
    if (!(delta > 0.0 && delta < 0.5))
        throw error(errc::contract, "Parameters: delta outside (0, 1/2)");
    double m_floor = mode == Mode::theorem ? 6.0 : 2.0;
    if (!(M >= m_floor))
        throw error(errc::contract, "Parameters: M below mode floor");
    if (K < 2) throw error(errc::contract, "Parameters: K must be >= 2");
    if (!(xi > 1.0)) throw error(errc::contract, "Parameters: xi must be > 1");
    if (!(epsilon > 0.0)) throw error(errc::contract, "Parameters: epsilon must be > 0");
    if (x < 2 || y < 1) throw error(errc::contract, "Parameters: x, y not set");
    if (!(z >= 2.0)) throw error(errc::contract, "Parameters: z must be >= 2");
}

bool validate_delta(double delta) {
    if (!(delta > 0.0 && delta < 0.5))
        throw error(errc::contract, "validate_delta: delta outside (0, 1/2)");
    double lhs = 12.0 * std::pow(10.0, 2.0 * delta);
    double rhs = std::log(1.0 / (2.0 * delta));
    return lhs < rhs && rhs <= 1000.0;
}

Int construction_floor() {
    // Smallest N with floor(ln(N)/4) >= 11, i.e. ln N >= 44.
    Int n;
    mpz_ui_pow_ui(n.get_mpz_t(), 10, 20); // e^44 ~ 1.29e19 < 10^20
    return n;
}

Parameters derive(const Int& N, double delta, const DeriveOverrides& overrides) {
    if (!(delta > 0.0 && delta < 0.5))
        throw error(errc::contract, "derive: delta outside (0, 1/2)");
    if (overrides.strict_validation && !validate_delta(delta))
        throw error(errc::contract, "derive: delta fails the validity inequalities");
    if (N < 2) throw error(errc::input, "derive: N below construction floor (minimum ~1e20)");

    double lnN = log_mpz(N);
    uint64_t x = static_cast<uint64_t>(std::floor(lnN / 4.0));
    if (x < 11)
        throw error(errc::input,
                    "derive: N below construction floor (need ln(N)/4 >= 11, i.e. N >= ~e^44)");

    Parameters p;
    p.mode = Mode::theorem;
    p.delta = delta;
    p.M = overrides.M.value_or(7.0);
    p.K = overrides.K.value_or(100);
    p.xi = overrides.xi.value_or(1.01);
    p.epsilon = overrides.epsilon.value_or(0.05);
    p.x = x;

    double lnx = std::log(static_cast<double>(x));
    if (overrides.y) {
        p.y = *overrides.y;
    } else {
        p.y = static_cast<uint64_t>(std::ceil(static_cast<double>(x) * std::pow(lnx, delta)));
    }
    double lnlnx = std::log(lnx);
    double z = static_cast<double>(p.y) * lnlnx * lnlnx / std::sqrt(lnx);
    p.z = std::max(2.0, z);

    // Empty H band <=> the Q-stage degenerates to greedy + matching.
    double lower = 2.0 * static_cast<double>(p.y) / static_cast<double>(p.x);
    double upper = static_cast<double>(p.y) / (p.xi * p.z);
    p.q_stage_degenerate = lower > upper;

    p.validate();
    return p;
}

std::vector<double> HGrid::all_H() const {
    std::vector<double> v;
    for (const auto& b : blocks) v.push_back(b.H);
    return v;
}

std::vector<double> HGrid::H1() const {
    std::vector<double> v;
    for (const auto& b : blocks)
        if (b.j % 2 == 0) v.push_back(b.H);
    return v;
}

std::vector<double> HGrid::H2() const {
    std::vector<double> v;
    for (const auto& b : blocks)
        if (b.j % 2 == 1) v.push_back(b.H);
    return v;
}

const HBlock* HGrid::block_of(uint64_t q) const {
    for (const auto& b : blocks)
        for (uint64_t p : b.primes)
            if (p == q) return &b;
    return nullptr;
}

const HBlock* HGrid::block_at(double H) const {
    for (const auto& b : blocks)
        if (b.H == H) return &b;
    return nullptr;
}

std::vector<uint64_t> HGrid::all_q() const {
    std::vector<uint64_t> v;
    for (const auto& b : blocks) v.insert(v.end(), b.primes.begin(), b.primes.end());
    return v;
}

HGrid build_hgrid(const Parameters& p) {
    p.validate();
    HGrid grid;
    double y = static_cast<double>(p.y);
    double lower = 2.0 * y / static_cast<double>(p.x);
    double upper = y / (p.xi * p.z);
    if (lower > upper) return grid;

    for (int j = 0;; ++j) {
        double H = std::pow(p.xi, j);
        if (H > upper) break;
        if (H < lower) continue;
        HBlock b;
        b.H = H;
        b.j = j;
        b.primes = primes_in_real(y / (p.xi * H), y / H);
        grid.blocks.push_back(std::move(b));
    }
    return grid;
}

bool check_h_range(const HGrid& grid, const Parameters& p) {
    if (p.mode != Mode::theorem)
        throw error(errc::contract, "check_h_range: theorem mode only");
    double lnx = std::log(static_cast<double>(p.x));
    double lnlnx = std::log(lnx);
    double lo = 2.0 * std::pow(lnx, p.delta);
    double hi = std::sqrt(lnx) / (lnlnx * lnlnx);
    for (const auto& b : grid.blocks)
        if (!(lo <= b.H && b.H <= hi)) return false;
    return true;
}

double delta_for_grid(const HGrid& grid, double xi) {
    double s = 0.0;
    size_t n = 0;
    for (const auto& b : grid.blocks) {
        if (b.j % 2 != 0) continue;
        if (b.H <= 1.0)
            throw error(errc::contract, "delta_for_grid: H = 1 block has no defined 1/ln(H)");
        s += 1.0 / std::log(b.H);
        ++n;
    }
    if (n == 0) throw error(errc::contract, "delta_for_grid: empty H1 sublist");
    double ln_inv_2delta = 2.0 * std::log(xi) * s;
    return std::exp(-ln_inv_2delta) / 2.0;
}

} // namespace pav
