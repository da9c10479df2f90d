#include "pav/certify.hpp"

#include <charconv>
#include <fstream>
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

std::string witness_line(const std::vector<uint64_t>& w) {
    std::ostringstream os;
    for (size_t i = 0; i < w.size(); ++i) {
        if (i) os << ' ';
        os << w[i];
    }
    return os.str();
}

} // namespace

std::string Certificate::serialize() const {
    std::ostringstream os;
    os << "version " << version << '\n';
    os << "N " << N.get_str() << '\n';
    os << "delta " << fmt_double(delta) << '\n';
    os << "x " << x << '\n';
    os << "y " << y << '\n';
    os << "radius " << radius << '\n';
    os << "n1 " << n1.get_str() << '\n';
    os << "n2 " << n2.get_str() << '\n';
    os << "b2 " << b2.get_str() << '\n';
    os << "witnesses_n1 " << witness_line(witnesses_n1) << '\n';
    os << "witnesses_n2 " << witness_line(witnesses_n2) << '\n';
    os << "seed " << seed << '\n';
    os << "options_hash " << options_hash << '\n';
    return os.str();
}

namespace {

[[noreturn]] void parse_fail(int line_no, const std::string& why) {
    throw error(errc::input,
                "certificate parse error at line " + std::to_string(line_no) + ": " + why);
}

Int parse_int(const std::string& s, int line_no) {
    if (s.empty()) parse_fail(line_no, "empty integer");
    try {
        return Int(s);
    } catch (const std::invalid_argument&) {
        parse_fail(line_no, "bad integer '" + s + "'");
    }
}

uint64_t parse_u64(const std::string& s, int line_no) {
    uint64_t v = 0;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || ptr != s.data() + s.size())
        parse_fail(line_no, "bad unsigned value '" + s + "'");
    return v;
}

} // namespace

Certificate Certificate::parse(const std::string& text) {
    Certificate c;
    std::istringstream is(text);
    std::string line;
    int line_no = 0;
    static const char* expected[] = {"version", "N",  "delta", "x",  "y",
                                     "radius",  "n1", "n2",    "b2", "witnesses_n1",
                                     "witnesses_n2", "seed", "options_hash"};
    size_t field = 0;
    while (std::getline(is, line)) {
        ++line_no;
        if (line.empty()) continue;
        auto sp = line.find(' ');
        std::string key = sp == std::string::npos ? line : line.substr(0, sp);
        std::string val = sp == std::string::npos ? "" : line.substr(sp + 1);
        if (field >= std::size(expected) || key != expected[field])
            parse_fail(line_no, "unexpected field '" + key + "'");
        switch (field) {
            case 0: c.version = static_cast<int>(parse_u64(val, line_no)); break;
            case 1: c.N = parse_int(val, line_no); break;
            case 2: {
                char* end = nullptr;
                c.delta = std::strtod(val.c_str(), &end);
                if (end != val.c_str() + val.size()) parse_fail(line_no, "bad delta");
                break;
            }
            case 3: c.x = parse_u64(val, line_no); break;
            case 4: c.y = parse_u64(val, line_no); break;
            case 5: c.radius = parse_u64(val, line_no); break;
            case 6: c.n1 = parse_int(val, line_no); break;
            case 7: c.n2 = parse_int(val, line_no); break;
            case 8: c.b2 = parse_int(val, line_no); break;
            case 9:
            case 10: {
                std::vector<uint64_t> w;
                std::istringstream ws(val);
                std::string tok;
                while (ws >> tok) w.push_back(parse_u64(tok, line_no));
                (field == 9 ? c.witnesses_n1 : c.witnesses_n2) = std::move(w);
                break;
            }
            case 11: c.seed = parse_u64(val, line_no); break;
            case 12: c.options_hash = val; break;
        }
        ++field;
    }
    if (field != std::size(expected)) parse_fail(line_no, "truncated certificate");
    return c;
}

Certificate Certificate::load(const std::string& path) {
    std::ifstream f(path, std::ios::binary);
    if (!f) throw error(errc::io, "cannot open certificate file " + path);
    std::ostringstream ss;
    ss << f.rdbuf();
    return parse(ss.str());
}

void Certificate::save(const std::string& path) const {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw error(errc::io, "cannot open " + path + " for writing");
    f << serialize();
    if (!f) throw error(errc::io, "write failed: " + path);
}

NearestPrime nearest_prime_distance(const Int& n, uint64_t cap) {
    if (n < 2) throw error(errc::contract, "nearest_prime_distance: n must be >= 2");
    for (uint64_t d = 0; d < cap; ++d) {
        Int lo = n - static_cast<unsigned long>(d);
        if (lo >= 2 && is_prime(lo)) return {false, d};
        if (d > 0) {
            Int hi = n + static_cast<unsigned long>(d);
            if (is_prime(hi)) return {false, d};
        }
    }
    return {true, cap};
}

const char* check_failure_name(CheckFailure f) {
    switch (f) {
        case CheckFailure::none: return "none";
        case CheckFailure::parse: return "parse";
        case CheckFailure::arithmetic: return "arithmetic";
        case CheckFailure::witness: return "witness";
        case CheckFailure::coverage: return "coverage";
        case CheckFailure::primality: return "primality";
    }
    return "?";
}

namespace {

CheckReport fail(CheckFailure f, const std::string& detail) {
    return {false, f, detail};
}

} // namespace

CheckReport check(const Certificate& cert, bool strict) {
    // Arithmetic layer.
    if (cert.n1 + cert.n2 != cert.N) return fail(CheckFailure::arithmetic, "n1 + n2 != N");
    if (cert.n1 <= 0 || cert.n2 <= 0)
        return fail(CheckFailure::arithmetic, "n1, n2 must be positive");
    if (cert.radius == 0) return fail(CheckFailure::arithmetic, "radius must be >= 1");
    if (cert.radius > cert.y)
        return fail(CheckFailure::arithmetic, "radius exceeds window half-width y");

    // Coverage layer: arrays span offsets -r..r; the single non-applicable
    // slot is t = -r for n1 and t = +r for n2.
    uint64_t r = cert.radius;
    size_t want = 2 * r + 1;
    if (cert.witnesses_n1.size() != want || cert.witnesses_n2.size() != want)
        return fail(CheckFailure::coverage, "witness array size != 2*radius + 1");
    for (size_t i = 0; i < want; ++i) {
        int64_t t = static_cast<int64_t>(i) - static_cast<int64_t>(r);
        bool applicable1 = t != -static_cast<int64_t>(r);
        bool applicable2 = t != static_cast<int64_t>(r);
        if (applicable1 != (cert.witnesses_n1[i] != 0))
            return fail(CheckFailure::coverage,
                        "n1 witness coverage wrong at offset " + std::to_string(t));
        if (applicable2 != (cert.witnesses_n2[i] != 0))
            return fail(CheckFailure::coverage,
                        "n2 witness coverage wrong at offset " + std::to_string(t));
    }

    // Witness layer: each prime divides its target and is <= x.
    for (size_t i = 0; i < want; ++i) {
        int64_t t = static_cast<int64_t>(i) - static_cast<int64_t>(r);
        if (cert.witnesses_n1[i]) {
            uint64_t p = cert.witnesses_n1[i];
            if (p < 2 || p > cert.x)
                return fail(CheckFailure::witness, "n1 witness out of range at offset " +
                                                       std::to_string(t));
            Int target = cert.n1 + t;
            if (!mpz_divisible_ui_p(target.get_mpz_t(), static_cast<unsigned long>(p)))
                return fail(CheckFailure::witness,
                            "n1 witness does not divide target at offset " + std::to_string(t));
        }
        if (cert.witnesses_n2[i]) {
            uint64_t p = cert.witnesses_n2[i];
            if (p < 2 || p > cert.x)
                return fail(CheckFailure::witness, "n2 witness out of range at offset " +
                                                       std::to_string(t));
            Int target = cert.n2 + t;
            if (!mpz_divisible_ui_p(target.get_mpz_t(), static_cast<unsigned long>(p)))
                return fail(CheckFailure::witness,
                            "n2 witness does not divide target at offset " + std::to_string(t));
        }
    }

    // Strict layer: independent primality scan of both windows.
    if (strict) {
        NearestPrime f1 = nearest_prime_distance(cert.n1, r);
        if (!f1.exceeded)
            return fail(CheckFailure::primality,
                        "prime at distance " + std::to_string(f1.distance) + " from n1");
        NearestPrime f2 = nearest_prime_distance(cert.n2, r);
        if (!f2.exceeded)
            return fail(CheckFailure::primality,
                        "prime at distance " + std::to_string(f2.distance) + " from n2");
    }
    return {true, CheckFailure::none, ""};
}

} // namespace pav
