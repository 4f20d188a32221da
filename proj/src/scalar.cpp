#include "stacky/scalar.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numbers>
#include <sstream>

#include "stacky/error.hpp"

namespace stacky {

namespace {

using Coords = cyc::Coords;
using IntPoly = std::vector<BigInt>;  // dense, degree 0 upward

IntPoly int_mul(const IntPoly& a, const IntPoly& b) {
    IntPoly out(a.size() + b.size() - 1, BigInt(0));
    for (std::size_t i = 0; i < a.size(); ++i) {
        if (a[i] == 0) continue;
        for (std::size_t j = 0; j < b.size(); ++j)
            if (b[j] != 0) out[i + j] += a[i] * b[j];
    }
    return out;
}

IntPoly phi_int(long long e) {
    const auto& p = cyc::phi_poly(e);
    IntPoly out;
    out.reserve(p.size());
    for (long long c : p) out.emplace_back(static_cast<long>(c));
    return out;
}

// Phi_e(t^k) = prod of Phi_j(t) over j | e k with j / gcd(j, k) = e.
std::vector<long long> split_phi(long long e, long long k) {
    std::vector<long long> out;
    for (long long j : cyc::divisors(e * k))
        if (j / gcd_ll(j, k) == e) out.push_back(j);
    return out;
}

std::vector<ExactScalar::DenEntry> normalize_den(std::map<long long, int> m) {
    std::vector<ExactScalar::DenEntry> out;
    for (auto [e, k] : m)
        if (k > 0) out.emplace_back(e, k);
    return out;
}

// Dense copy of a sparse numerator shifted so the lowest exponent is 0.
std::vector<Coords> to_dense(const std::vector<ExactScalar::Term>& num, int phi, long long& shift) {
    shift = num.front().exp;
    std::size_t len = static_cast<std::size_t>(num.back().exp - shift + 1);
    std::vector<Coords> out(len, Coords(phi, Rat(0)));
    for (const auto& t : num) out[static_cast<std::size_t>(t.exp - shift)] = t.coeff;
    return out;
}

std::vector<ExactScalar::Term> from_dense(const std::vector<Coords>& d, long long shift) {
    std::vector<ExactScalar::Term> out;
    for (std::size_t i = 0; i < d.size(); ++i)
        if (!cyc::is_zero(d[i])) out.push_back({static_cast<long long>(i) + shift, d[i]});
    return out;
}

// Phi_e(t) | P(t) over Q(zeta_M), decided on P mod (t^e - 1).
bool divisible_by_phi(const std::vector<ExactScalar::Term>& num, int phi, long long e) {
    std::vector<Coords> fold(e, Coords(phi, Rat(0)));
    for (const auto& t : num) cyc::add_to(fold[((t.exp % e) + e) % e], t.coeff);
    const auto& P = cyc::phi_poly(e);
    long long d = static_cast<long long>(P.size()) - 1;
    for (long long i = e - 1; i >= d; --i) {
        if (cyc::is_zero(fold[i])) continue;
        Coords c = fold[i];
        for (long long j = 0; j <= d; ++j)
            if (P[j] != 0) cyc::add_scaled(fold[i - d + j], c, make_rat(-P[j], 1));
    }
    for (long long i = 0; i < d && i < e; ++i)
        if (!cyc::is_zero(fold[i])) return false;
    return true;
}

// Exact quotient P / Phi_e; caller has established divisibility.
std::vector<ExactScalar::Term> divide_by_phi(const std::vector<ExactScalar::Term>& num, int phi, long long e) {
    long long shift = 0;
    auto d = to_dense(num, phi, shift);
    const auto& P = cyc::phi_poly(e);
    std::size_t dd = P.size() - 1;
    std::vector<Coords> quo(d.size() - dd, Coords(phi, Rat(0)));
    for (std::size_t i = d.size(); i-- > dd;) {
        if (cyc::is_zero(d[i])) continue;
        Coords c = d[i];
        quo[i - dd] = c;
        for (std::size_t j = 0; j <= dd; ++j)
            if (P[j] != 0) cyc::add_scaled(d[i - dd + j], c, make_rat(-P[j], 1));
    }
    return from_dense(quo, shift);
}

std::vector<ExactScalar::Term> mul_int_poly(const std::vector<ExactScalar::Term>& num, const IntPoly& p) {
    std::map<long long, Coords> acc;
    for (const auto& t : num)
        for (std::size_t j = 0; j < p.size(); ++j) {
            if (p[j] == 0) continue;
            auto [it, fresh] = acc.try_emplace(t.exp + static_cast<long long>(j), Coords(t.coeff.size(), Rat(0)));
            cyc::add_scaled(it->second, t.coeff, Rat(p[j]));
        }
    std::vector<ExactScalar::Term> out;
    for (auto& [e, c] : acc)
        if (!cyc::is_zero(c)) out.push_back({e, std::move(c)});
    return out;
}

IntPoly den_product(const std::map<long long, int>& m) {
    IntPoly out{BigInt(1)};
    for (auto [e, k] : m)
        for (int i = 0; i < k; ++i) out = int_mul(out, phi_int(e));
    return out;
}

bool perfect_power(const BigInt& z, unsigned long k, BigInt& root) {
    if (z < 0) return false;
    return mpz_root(root.get_mpz_t(), z.get_mpz_t(), k) != 0;
}

std::string coeff_string(int M, const Coords& c) {
    if (cyc::is_rational(c)) return stacky::to_string(c[0]);
    std::string s = "(";
    bool first = true;
    for (std::size_t j = 0; j < c.size(); ++j) {
        if (c[j] == 0) continue;
        std::string part;
        if (j == 0) part = stacky::to_string(c[j]);
        else {
            std::string z = "z" + std::to_string(M) + (j == 1 ? "" : "^" + std::to_string(j));
            if (c[j] == 1) part = z;
            else if (c[j] == -1) part = "-" + z;
            else part = stacky::to_string(c[j]) + "*" + z;
        }
        if (!first && part[0] != '-') s += "+";
        s += part;
        first = false;
    }
    return s + ")";
}

std::string qexp_string(const Rat& e) {
    if (e == 0) return "";
    if (e == 1) return "q";
    if (e.get_den() == 1) return "q^" + stacky::to_string(e);
    return "q^(" + stacky::to_string(e) + ")";
}

}  // namespace

ExactScalar::ExactScalar(long long v) : ExactScalar(make_rat(v, 1)) {}

ExactScalar::ExactScalar(const Rat& r) {
    if (r != 0) num_.push_back({0, Coords{r}});
}

ExactScalar ExactScalar::raw(int M, int D, std::vector<Term> num, std::vector<DenEntry> den) {
    ExactScalar s;
    s.M_ = M;
    s.D_ = D;
    s.num_ = std::move(num);
    s.den_ = std::move(den);
    s.canonicalize();
    return s;
}

bool ExactScalar::plain_rational() const {
    return M_ == 1 && D_ == 1 && den_.empty() && (num_.empty() || (num_.size() == 1 && num_[0].exp == 0));
}

ExactScalar ExactScalar::root_of_unity(const Rat& a) {
    Rat f = frac_of(a);
    long long M = to_ll(f.get_den());
    long long j = to_ll(f.get_num());
    if (M > 100000) throw Error("scalar", "ConductorTooLarge", "root of unity of order " + std::to_string(M));
    return raw(static_cast<int>(M), 1, {{0, cyc::zeta_power(static_cast<int>(M), j)}}, {});
}

ExactScalar ExactScalar::q_power(const Rat& e) {
    long long D = to_ll(e.get_den());
    return raw(1, static_cast<int>(D), {{to_ll(e.get_num()), Coords{Rat(1)}}}, {});
}

ExactScalar ExactScalar::inv_q_power_minus_one(const Rat& a) {
    if (a <= 0) throw Error("scalar", "NotInvertible", "1/(q^a - 1) needs a > 0");
    long long D = to_ll(a.get_den());
    long long k = to_ll(a.get_num());
    std::map<long long, int> den;
    for (long long j : cyc::divisors(k)) den[j] += 1;
    return raw(1, static_cast<int>(D), {{0, Coords{Rat(1)}}}, normalize_den(den));
}

void ExactScalar::merge_terms() {
    std::sort(num_.begin(), num_.end(), [](const Term& a, const Term& b) { return a.exp < b.exp; });
    std::vector<Term> out;
    for (auto& t : num_) {
        if (!out.empty() && out.back().exp == t.exp) cyc::add_to(out.back().coeff, t.coeff);
        else out.push_back(std::move(t));
    }
    num_.clear();
    for (auto& t : out)
        if (!cyc::is_zero(t.coeff)) num_.push_back(std::move(t));
}

void ExactScalar::cancel_denominator() {
    int phi = static_cast<int>(cyc::euler_phi(M_));
    for (auto& [e, k] : den_) {
        while (k > 0 && divisible_by_phi(num_, phi, e)) {
            num_ = divide_by_phi(num_, phi, e);
            --k;
        }
    }
    std::erase_if(den_, [](const DenEntry& d) { return d.second == 0; });
}

void ExactScalar::descend_conductor() {
    bool changed = true;
    while (changed && M_ > 1) {
        changed = false;
        for (long long p : cyc::prime_factors(M_)) {
            int Ms = M_ / static_cast<int>(p);
            std::vector<Coords> cs;
            cs.reserve(num_.size());
            bool ok = true;
            for (const auto& t : num_) {
                auto r = cyc::restrict_to(t.coeff, M_, Ms);
                if (!r) { ok = false; break; }
                cs.push_back(std::move(*r));
            }
            if (!ok) continue;
            for (std::size_t i = 0; i < num_.size(); ++i) num_[i].coeff = std::move(cs[i]);
            M_ = Ms;
            changed = true;
            break;
        }
    }
}

void ExactScalar::descend_q_denominator() {
    bool changed = true;
    while (changed && D_ > 1) {
        changed = false;
        for (long long p : cyc::prime_factors(D_)) {
            bool ok = std::all_of(num_.begin(), num_.end(), [p](const Term& t) { return t.exp % p == 0; });
            if (!ok) continue;
            std::map<long long, int> rem(den_.begin(), den_.end());
            std::map<long long, int> fresh;
            for (auto it = rem.begin(); it != rem.end() && ok; ++it) {
                auto [j, k] = *it;
                if (k == 0) continue;
                if (j % p != 0) {
                    auto partner = rem.find(j * p);
                    if (partner == rem.end() || partner->second != k) { ok = false; break; }
                    partner->second = 0;
                    fresh[j] += k;
                } else {
                    long long e = j / p;
                    if (e % p != 0) { ok = false; break; }
                    fresh[e] += k;
                }
            }
            if (!ok) continue;
            for (auto& t : num_) t.exp /= p;
            den_ = normalize_den(fresh);
            D_ /= static_cast<int>(p);
            changed = true;
            break;
        }
    }
}

void ExactScalar::canonicalize() {
    merge_terms();
    if (num_.empty()) {
        M_ = 1;
        D_ = 1;
        den_.clear();
        return;
    }
    if (!den_.empty()) cancel_denominator();
    if (M_ > 1) descend_conductor();
    if (D_ > 1) descend_q_denominator();
}

void ExactScalar::rebase(int M, int D) {
    if (D != D_) {
        long long k = D / D_;
        for (auto& t : num_) t.exp *= k;
        std::map<long long, int> den;
        for (auto [e, m] : den_)
            for (long long j : split_phi(e, k)) den[j] += m;
        den_ = normalize_den(den);
        D_ = D;
    }
    if (M != M_) {
        for (auto& t : num_) t.coeff = cyc::embed(t.coeff, M_, M);
        M_ = M;
    }
}

ExactScalar ExactScalar::operator+(const ExactScalar& o) const {
    if (is_zero()) return o;
    if (o.is_zero()) return *this;
    if (plain_rational() && o.plain_rational()) return ExactScalar(num_[0].coeff[0] + o.num_[0].coeff[0]);
    int M = static_cast<int>(lcm_ll(M_, o.M_));
    int D = static_cast<int>(lcm_ll(D_, o.D_));
    ExactScalar a = *this, b = o;
    a.rebase(M, D);
    b.rebase(M, D);
    std::map<long long, int> da(a.den_.begin(), a.den_.end()), db(b.den_.begin(), b.den_.end());
    std::map<long long, int> L = da;
    for (auto [e, k] : db) L[e] = std::max(L[e], k);
    std::map<long long, int> ma, mb;
    for (auto [e, k] : L) {
        ma[e] = k - (da.count(e) ? da[e] : 0);
        mb[e] = k - (db.count(e) ? db[e] : 0);
    }
    std::vector<Term> na = a.num_, nb = b.num_;
    if (da != L) na = mul_int_poly(na, den_product(ma));
    if (db != L) nb = mul_int_poly(nb, den_product(mb));
    na.insert(na.end(), std::make_move_iterator(nb.begin()), std::make_move_iterator(nb.end()));
    return raw(M, D, std::move(na), normalize_den(L));
}

ExactScalar& ExactScalar::operator+=(const ExactScalar& o) {
    if (o.is_zero()) return *this;
    if (plain_rational() && o.plain_rational() && !is_zero()) {
        num_[0].coeff[0] += o.num_[0].coeff[0];
        if (num_[0].coeff[0] == 0) num_.clear();
        return *this;
    }
    return *this = *this + o;
}

ExactScalar& ExactScalar::operator*=(const ExactScalar& o) {
    if (is_zero()) return *this;
    if (plain_rational() && o.plain_rational()) {
        if (o.is_zero()) num_.clear();
        else num_[0].coeff[0] *= o.num_[0].coeff[0];
        return *this;
    }
    return *this = *this * o;
}

ExactScalar& ExactScalar::add_product(const ExactScalar& a, const ExactScalar& b) {
    if (a.is_zero() || b.is_zero()) return *this;
    if (plain_rational() && a.plain_rational() && b.plain_rational() && !is_zero()) {
        num_[0].coeff[0] += a.num_[0].coeff[0] * b.num_[0].coeff[0];
        if (num_[0].coeff[0] == 0) num_.clear();
        return *this;
    }
    return *this += a * b;
}

ExactScalar ExactScalar::operator-() const {
    ExactScalar s = *this;
    for (auto& t : s.num_)
        for (auto& c : t.coeff) c = -c;
    return s;
}

ExactScalar ExactScalar::operator-(const ExactScalar& o) const { return *this + (-o); }

ExactScalar ExactScalar::operator*(const ExactScalar& o) const {
    if (is_zero() || o.is_zero()) return ExactScalar();
    if (plain_rational() && o.plain_rational()) return ExactScalar(num_[0].coeff[0] * o.num_[0].coeff[0]);
    int M = static_cast<int>(lcm_ll(M_, o.M_));
    int D = static_cast<int>(lcm_ll(D_, o.D_));
    ExactScalar a = *this, b = o;
    a.rebase(M, D);
    b.rebase(M, D);
    std::map<long long, Coords> acc;
    for (const auto& x : a.num_)
        for (const auto& y : b.num_) {
            Coords c = (M == 1) ? Coords{x.coeff[0] * y.coeff[0]} : cyc::mul(M, x.coeff, y.coeff);
            auto [it, fresh] = acc.try_emplace(x.exp + y.exp, Coords(c.size(), Rat(0)));
            cyc::add_to(it->second, c);
        }
    std::vector<Term> num;
    for (auto& [e, c] : acc) num.push_back({e, std::move(c)});
    std::map<long long, int> den(a.den_.begin(), a.den_.end());
    for (auto [e, k] : b.den_) den[e] += k;
    return raw(M, D, std::move(num), normalize_den(den));
}

ExactScalar ExactScalar::inverse() const {
    if (is_zero()) throw Error("scalar", "NotInvertible", "division by zero");
    if (plain_rational()) return ExactScalar(1 / num_[0].coeff[0]);
    int phi = static_cast<int>(cyc::euler_phi(M_));
    std::vector<Term> rest = num_;
    long long shift = rest.front().exp;
    for (auto& t : rest) t.exp -= shift;
    std::map<long long, int> factors;
    // candidate Phi_j need phi(j) <= degree, and phi(j) >= sqrt(j/2)
    long long deg = rest.back().exp;
    for (long long j = 1; deg > 0 && j <= 2 * deg * deg + 2; ++j) {
        if (cyc::euler_phi(j) > deg) continue;
        while (deg > 0 && divisible_by_phi(rest, phi, j)) {
            rest = divide_by_phi(rest, phi, j);
            long long s = rest.front().exp;
            for (auto& t : rest) t.exp -= s;
            deg = rest.back().exp;
            factors[j] += 1;
        }
    }
    if (rest.size() != 1)
        throw Error("scalar", "NotInvertible", "numerator is not a product of cyclotomic polynomials: " + to_string());
    Coords cinv = cyc::inverse(M_, rest[0].coeff);
    std::map<long long, int> den_map(den_.begin(), den_.end());
    std::vector<Term> num{{-shift, cinv}};
    num = mul_int_poly(num, den_product(den_map));
    return raw(M_, D_, std::move(num), normalize_den(factors));
}

ExactScalar ExactScalar::operator/(const ExactScalar& o) const {
    if (o.plain_rational() && !o.is_zero()) {
        Rat inv = 1 / o.num_[0].coeff[0];
        ExactScalar s = *this;
        for (auto& t : s.num_) cyc::scale(t.coeff, inv);
        return s;
    }
    return *this * o.inverse();
}

ExactScalar ExactScalar::pow(long long k) const {
    if (k < 0) return inverse().pow(-k);
    ExactScalar out(1), base = *this;
    while (k > 0) {
        if (k & 1) out *= base;
        k >>= 1;
        if (k > 0) base *= base;
    }
    return out;
}

ExactScalar ExactScalar::dilate_q(long long k) const {
    if (k < 1) throw Error("scalar", "InvalidArgument", "dilation factor must be positive");
    if (k == 1 || is_zero()) return *this;
    std::vector<Term> num = num_;
    for (auto& t : num) t.exp *= k;
    std::map<long long, int> den;
    for (auto [e, m] : den_)
        for (long long j : split_phi(e, k)) den[j] += m;
    return raw(M_, D_, std::move(num), normalize_den(den));
}

bool ExactScalar::operator==(const ExactScalar& o) const {
    if (M_ != o.M_ || D_ != o.D_ || den_ != o.den_ || num_.size() != o.num_.size()) return false;
    for (std::size_t i = 0; i < num_.size(); ++i)
        if (num_[i].exp != o.num_[i].exp || num_[i].coeff != o.num_[i].coeff) return false;
    return true;
}

bool ExactScalar::is_rational() const { return plain_rational(); }

std::optional<Rat> ExactScalar::as_rational() const {
    if (!plain_rational()) return std::nullopt;
    return num_.empty() ? Rat(0) : num_[0].coeff[0];
}

bool ExactScalar::is_integer_laurent_in_q() const {
    if (!den_.empty() || M_ != 1 || D_ != 1) return false;
    for (const auto& t : num_)
        if (t.coeff[0].get_den() != 1) return false;
    return true;
}

std::optional<std::vector<std::pair<Rat, Rat>>> ExactScalar::rational_terms() const {
    if (!den_.empty() || M_ != 1) return std::nullopt;
    std::vector<std::pair<Rat, Rat>> out;
    for (const auto& t : num_) out.emplace_back(make_rat(t.exp, D_), t.coeff[0]);
    return out;
}

std::complex<long double> ExactScalar::eval_numeric(long double q0) const {
    long double t0 = std::pow(q0, 1.0L / D_);
    std::complex<long double> num = 0;
    for (const auto& t : num_) num += cyc::eval(M_, t.coeff) * std::pow(t0, static_cast<long double>(t.exp));
    long double den = 1;
    for (auto [e, k] : den_) {
        const auto& P = cyc::phi_poly(e);
        long double v = 0;
        for (std::size_t i = P.size(); i-- > 0;) v = v * t0 + static_cast<long double>(P[i]);
        den *= std::pow(v, static_cast<long double>(k));
    }
    return num / den;
}

bool ExactScalar::vanishes_at(const Rat& q0) const {
    if (q0 <= 1) throw Error("scalar", "InvalidArgument", "vanishes_at needs q0 > 1");
    if (is_zero()) return true;
    int phi = static_cast<int>(cyc::euler_phi(M_));
    auto qpow = [&](long long a) {
        Rat r = 1;
        BigInt n = q0.get_num(), d = q0.get_den();
        BigInt pn, pd;
        unsigned long ua = static_cast<unsigned long>(a < 0 ? -a : a);
        mpz_pow_ui(pn.get_mpz_t(), n.get_mpz_t(), ua);
        mpz_pow_ui(pd.get_mpz_t(), d.get_mpz_t(), ua);
        r = a < 0 ? Rat(pd, pn) : Rat(pn, pd);
        r.canonicalize();
        return r;
    };
    // exact D-th root of q0, when it exists
    BigInt rn, rd;
    bool rational_root = perfect_power(q0.get_num(), D_, rn) && perfect_power(q0.get_den(), D_, rd);
    if (rational_root) {
        Rat t0(rn, rd);
        Coords acc(phi, Rat(0));
        for (const auto& t : num_) {
            Rat v = 1;
            Rat base = t.exp < 0 ? 1 / t0 : t0;
            for (long long i = 0; i < (t.exp < 0 ? -t.exp : t.exp); ++i) v *= base;
            cyc::add_scaled(acc, t.coeff, v);
        }
        return cyc::is_zero(acc);
    }
    std::vector<Coords> bucket(D_, Coords(phi, Rat(0)));
    for (const auto& t : num_) {
        long long r = ((t.exp % D_) + D_) % D_;
        long long a = (t.exp - r) / D_;
        cyc::add_scaled(bucket[r], t.coeff, qpow(a));
    }
    int nonzero = 0;
    for (int r = 1; r < D_; ++r)
        if (!cyc::is_zero(bucket[r])) ++nonzero;
    if (nonzero == 0) return cyc::is_zero(bucket[0]);
    if (D_ != 2)
        throw Error("scalar", "Unsupported", "exact specialization needs q-denominator at most 2");
    // a + b sqrt(q0) = 0 iff c = -a/b squares to q0 and is the positive root
    Coords c = cyc::mul(M_, cyc::neg(bucket[0]), cyc::inverse(M_, bucket[1]));
    Coords sq = cyc::mul(M_, c, c);
    if (sq != cyc::from_rat(M_, q0)) return false;
    return cyc::eval(M_, c).real() > 0;
}

std::string ExactScalar::to_string() const {
    if (num_.empty()) return "0";
    std::string s;
    bool first = true;
    for (auto it = num_.rbegin(); it != num_.rend(); ++it) {
        Rat e = make_rat(it->exp, D_);
        std::string qs = qexp_string(e);
        std::string cs = coeff_string(M_, it->coeff);
        std::string part;
        if (qs.empty()) part = cs;
        else if (cs == "1") part = qs;
        else if (cs == "-1") part = "-" + qs;
        else part = cs + "*" + qs;
        if (!first && part[0] != '-') s += "+";
        s += part;
        first = false;
    }
    if (den_.empty()) return s;
    std::string v = D_ == 1 ? "q" : "q^(1/" + std::to_string(D_) + ")";
    std::string d;
    for (auto [e, k] : den_) {
        std::string f;
        if (e == 1) f = "(" + v + "-1)";
        else if (e == 2) f = "(" + v + "+1)";
        else f = "Phi" + std::to_string(e) + "(" + v + ")";
        if (k > 1) f += "^" + std::to_string(k);
        d += f;
    }
    return "(" + s + ")/(" + d + ")";
}

nlohmann::json ExactScalar::to_json() const {
    nlohmann::json terms = nlohmann::json::array();
    std::string zeta = M_ == 1 ? "0" : "1/" + std::to_string(M_);
    for (const auto& t : num_) {
        nlohmann::json coeff = nlohmann::json::array();
        for (const auto& c : t.coeff) coeff.push_back(stacky::to_string(c));
        Rat e = make_rat(t.exp, D_);
        terms.push_back({{"zeta", zeta}, {"qexp", stacky::to_string(e)}, {"coeff", coeff}});
    }
    if (den_.empty()) return terms;
    nlohmann::json den = nlohmann::json::array();
    for (auto [e, k] : den_) den.push_back({{"cyclotomic", e}, {"power", k}});
    return {{"numerator", terms}, {"denominator", den}, {"qroot", D_}};
}

namespace {

Rat json_rat(const nlohmann::json& j) {
    if (j.is_number_integer()) return make_rat(j.get<long long>(), 1);
    if (j.is_string()) return parse_rat(j.get<std::string>());
    throw Error("scalar", "ParseError", "expected an integer or \"p/q\" string");
}

ExactScalar terms_from_json(const nlohmann::json& arr) {
    ExactScalar out;
    for (const auto& t : arr) {
        if (!t.is_object() || !t.contains("coeff"))
            throw Error("scalar", "ParseError", "scalar term needs zeta, qexp, coeff");
        Rat zeta = t.contains("zeta") ? frac_of(json_rat(t["zeta"])) : Rat(0);
        Rat qexp = t.contains("qexp") ? json_rat(t["qexp"]) : Rat(0);
        ExactScalar c;
        long long i = 0;
        for (const auto& x : t["coeff"]) {
            c += ExactScalar(json_rat(x)) * ExactScalar::root_of_unity(zeta * make_rat(i, 1));
            ++i;
        }
        out += c * ExactScalar::q_power(qexp);
    }
    return out;
}

}  // namespace

ExactScalar ExactScalar::from_json(const nlohmann::json& j) {
    if (j.is_number_integer() || j.is_string()) return ExactScalar(json_rat(j));
    if (j.is_array()) return terms_from_json(j);
    if (j.is_object() && j.contains("numerator")) {
        ExactScalar num = terms_from_json(j["numerator"]);
        long long D = j.value("qroot", 1LL);
        if (D < 1) throw Error("scalar", "ParseError", "qroot must be positive");
        ExactScalar den(1);
        for (const auto& d : j.value("denominator", nlohmann::json::array())) {
            long long e = d.at("cyclotomic").get<long long>();
            long long k = d.value("power", 1LL);
            if (e < 1 || k < 0) throw Error("scalar", "ParseError", "bad cyclotomic factor");
            // Phi_e(q^(1/D)) built from its integer coefficients
            ExactScalar f;
            const auto& P = cyc::phi_poly(e);
            for (std::size_t i = 0; i < P.size(); ++i)
                if (P[i] != 0)
                    f += ExactScalar(P[i]) * ExactScalar::q_power(make_rat(static_cast<long long>(i), D));
            den *= f.pow(k);
        }
        return num / den;
    }
    throw Error("scalar", "ParseError", "unrecognized scalar encoding");
}

ExactScalar root_of_unity(const Rat& a) { return ExactScalar::root_of_unity(a); }

ExactScalar q_power(const Rat& e) { return ExactScalar::q_power(e); }

ExactScalar half_L_level(long long n, const HalfLConvention& conv) {
    if (n < 1) throw Error("scalar", "InvalidArgument", "level must be positive");
    if ((conv.b1 & 1) != (conv.b2 & 1))
        throw Error("scalar", "InconsistentConvention",
                    "b1 != b2 is incompatible with (L^(1/2))_1 = q^(1/2) under psi_1 = id");
    int sign = ((conv.b1 + conv.b2 * n) % 2 == 0) ? 1 : -1;
    return ExactScalar(sign) * ExactScalar::q_power(make_rat(n, 2));
}

std::complex<long double> eval_numeric(const ExactScalar& s, long double q0) { return s.eval_numeric(q0); }

}  // namespace stacky
