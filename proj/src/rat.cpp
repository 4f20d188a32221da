#include "stacky/rat.hpp"

#include <cctype>
#include <limits>
#include <numeric>

#include "stacky/error.hpp"

namespace stacky {

Rat make_rat(long long a, long long b) {
    if (b == 0) throw Error("scalar", "DivisionByZero", "zero denominator");
    Rat r{BigInt(static_cast<long>(a)), BigInt(static_cast<long>(b))};
    r.canonicalize();
    return r;
}

std::string to_string(const BigInt& z) { return z.get_str(); }

std::string to_string(const Rat& r) {
    if (r.get_den() == 1) return r.get_num().get_str();
    return r.get_num().get_str() + "/" + r.get_den().get_str();
}

Rat parse_rat(const std::string& raw) {
    std::string s;
    for (char c : raw)
        if (!std::isspace(static_cast<unsigned char>(c))) s.push_back(c);
    auto valid_int = [](const std::string& t) {
        if (t.empty()) return false;
        std::size_t i = (t[0] == '-' || t[0] == '+') ? 1 : 0;
        if (i == t.size()) return false;
        for (; i < t.size(); ++i)
            if (!std::isdigit(static_cast<unsigned char>(t[i]))) return false;
        return true;
    };
    auto slash = s.find('/');
    std::string p = s.substr(0, slash);
    std::string q = slash == std::string::npos ? "1" : s.substr(slash + 1);
    if (!p.empty() && p[0] == '+') p.erase(0, 1);
    if (!valid_int(p) || !valid_int(q) || q[0] == '-')
        throw Error("scalar", "ParseError", "not a rational: '" + raw + "'");
    BigInt num(p), den(q);
    if (den == 0) throw Error("scalar", "ParseError", "zero denominator: '" + raw + "'");
    Rat r(num, den);
    r.canonicalize();
    return r;
}

BigInt floor_of(const Rat& r) {
    BigInt out;
    mpz_fdiv_q(out.get_mpz_t(), r.get_num_mpz_t(), r.get_den_mpz_t());
    return out;
}

Rat frac_of(const Rat& r) { return r - Rat(floor_of(r)); }

long long to_ll(const BigInt& z) {
    if (!z.fits_slong_p()) throw Error("scalar", "Overflow", "integer does not fit in 64 bits");
    return z.get_si();
}

double to_double(const Rat& r) { return r.get_d(); }

long long gcd_ll(long long a, long long b) { return std::gcd(a, b); }
long long lcm_ll(long long a, long long b) { return (a == 0 || b == 0) ? 0 : std::lcm(a, b); }

}  // namespace stacky
