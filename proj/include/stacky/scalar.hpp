#pragma once

#include <complex>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "stacky/cyclotomic.hpp"
#include "stacky/rat.hpp"

namespace stacky {

struct HalfLConvention {
    int b1 = 1;
    int b2 = 1;
};

// Exact element of Q(roots of unity)(q^(1/D)) with q a formal symbol.
// Stored as P(t) / prod_e Phi_e(t)^(k_e), t = q^(1/D), P a Laurent polynomial
// with coefficients in Q(zeta_M). The constructor-visible state is always
// canonical: no Phi_e of the denominator divides P, and M and D are minimal,
// so operator== is mathematical equality.
class ExactScalar {
public:
    struct Term {
        long long exp;      // power of t
        cyc::Coords coeff;  // in Q(zeta_M), never zero
    };
    using DenEntry = std::pair<long long, int>;  // (e, multiplicity)

    ExactScalar() = default;
    ExactScalar(long long v);  // NOLINT(google-explicit-constructor)
    ExactScalar(const Rat& r);  // NOLINT(google-explicit-constructor)

    static ExactScalar root_of_unity(const Rat& a);
    static ExactScalar q_power(const Rat& e);
    // 1 / (q^a - 1) for a positive rational a.
    static ExactScalar inv_q_power_minus_one(const Rat& a);
    static ExactScalar inv_q_power_minus_one(long long a) { return inv_q_power_minus_one(make_rat(a, 1)); }

    ExactScalar operator+(const ExactScalar& o) const;
    ExactScalar operator-(const ExactScalar& o) const;
    ExactScalar operator*(const ExactScalar& o) const;
    ExactScalar operator/(const ExactScalar& o) const;
    ExactScalar operator-() const;
    ExactScalar& operator+=(const ExactScalar& o);
    ExactScalar& operator-=(const ExactScalar& o) { return *this = *this - o; }
    ExactScalar& operator*=(const ExactScalar& o);
    // *this += a * b
    ExactScalar& add_product(const ExactScalar& a, const ExactScalar& b);
    ExactScalar& operator/=(const ExactScalar& o) { return *this = *this / o; }
    bool operator==(const ExactScalar& o) const;
    bool operator!=(const ExactScalar& o) const { return !(*this == o); }

    // Throws Error("scalar", "NotInvertible") unless the numerator is a
    // monomial times a product of cyclotomic polynomials in t.
    ExactScalar inverse() const;
    ExactScalar pow(long long k) const;
    // Replaces q by q^k (k >= 1), leaving roots of unity untouched.
    ExactScalar dilate_q(long long k) const;

    bool is_zero() const { return num_.empty(); }
    bool is_rational() const;
    std::optional<Rat> as_rational() const;
    bool has_trivial_denominator() const { return den_.empty(); }
    // Polynomial in q, q^-1 with rational integer coefficients.
    bool is_integer_laurent_in_q() const;
    // Coefficients (q exponent, rational coefficient) when the value has
    // trivial denominator and lies in Q(q^(1/D)).
    std::optional<std::vector<std::pair<Rat, Rat>>> rational_terms() const;

    int conductor() const { return M_; }
    int q_denominator() const { return D_; }
    const std::vector<Term>& numerator() const { return num_; }
    const std::vector<DenEntry>& denominator() const { return den_; }

    // Substitutes q -> q0 (positive real root) and zeta^a -> exp(2 pi i a).
    std::complex<long double> eval_numeric(long double q0) const;
    // Exact test whether the value vanishes after q -> q0 > 1. Supports
    // q-denominators D <= 2 after reduction modulo t^D - q0.
    bool vanishes_at(const Rat& q0) const;

    std::string to_string() const;
    nlohmann::json to_json() const;
    static ExactScalar from_json(const nlohmann::json& j);

private:
    int M_ = 1;
    int D_ = 1;
    std::vector<Term> num_;     // sorted by exp, unique
    std::vector<DenEntry> den_; // sorted by e, multiplicity > 0

    static ExactScalar raw(int M, int D, std::vector<Term> num, std::vector<DenEntry> den);
    void canonicalize();
    void merge_terms();
    void cancel_denominator();
    void descend_conductor();
    void descend_q_denominator();
    void rebase(int M, int D);
    bool plain_rational() const;
};

ExactScalar root_of_unity(const Rat& a);
ExactScalar q_power(const Rat& e);
inline ExactScalar q_power(long long e) { return q_power(make_rat(e, 1)); }
// Level-n component of L^(1/2): (-1)^(b1 + b2 n) q^(n/2).
// Throws Error("scalar", "InconsistentConvention") when b1 != b2.
ExactScalar half_L_level(long long n, const HalfLConvention& conv = {});
std::complex<long double> eval_numeric(const ExactScalar& s, long double q0);

}  // namespace stacky
