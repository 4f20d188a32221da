#include "stacky/ratfun.hpp"

#include "stacky/error.hpp"

namespace stacky {

namespace {

// Coefficients of (1 - T^delta)^D as a sparse list (degree, value).
std::vector<std::pair<long long, BigInt>> denominator_terms(long long delta, long long D) {
    std::vector<std::pair<long long, BigInt>> out;
    BigInt binom = 1;
    for (long long j = 0; j <= D; ++j) {
        out.emplace_back(j * delta, (j % 2 == 0) ? binom : BigInt(-binom));
        binom = binom * static_cast<long>(D - j) / static_cast<long>(j + 1);
    }
    return out;
}

}  // namespace

nlohmann::json SeriesT::to_json() const {
    nlohmann::json arr = nlohmann::json::array();
    for (const auto& c : coeffs) arr.push_back(c.to_json());
    return arr;
}

long long RationalFunctionFit::degree() const {
    for (long long i = static_cast<long long>(numerator.size()) - 1; i >= 0; --i)
        if (!numerator[i].is_zero()) return i;
    return -1;
}

SeriesT RationalFunctionFit::expand(long long R) const {
    // s = g / (1-T^delta)^D via s_k = g_k - sum_{j>=1} c_j s_{k - j delta}
    auto den = denominator_terms(delta, D);
    std::vector<ExactScalar> s(R + 1);
    for (long long k = 0; k <= R; ++k) {
        ExactScalar v = k < static_cast<long long>(numerator.size()) ? numerator[k] : ExactScalar();
        for (std::size_t j = 1; j < den.size(); ++j) {
            long long idx = k - den[j].first;
            if (idx < 0) break;
            if (!s[idx].is_zero()) v -= ExactScalar(Rat(den[j].second)) * s[idx];
        }
        s[k] = v;
    }
    if (!s[0].is_zero()) throw Error("ratfun", "InvalidFit", "numerator has a constant term");
    SeriesT out;
    out.coeffs.assign(s.begin() + 1, s.end());
    return out;
}

std::string RationalFunctionFit::to_string() const {
    std::string g;
    for (std::size_t i = 0; i < numerator.size(); ++i) {
        if (numerator[i].is_zero()) continue;
        std::string c = numerator[i].to_string();
        bool compound = c.find_first_of("+-", 1) != std::string::npos || c[0] == '(';
        std::string mono = i == 0 ? "" : (i == 1 ? "T" : "T^" + std::to_string(i));
        std::string part;
        if (mono.empty()) part = compound ? "(" + c + ")" : c;
        else if (c == "1") part = mono;
        else if (c == "-1") part = "-" + mono;
        else part = (compound ? "(" + c + ")" : c) + "*" + mono;
        if (!g.empty() && part[0] != '-') g += "+";
        g += part;
    }
    if (g.empty()) g = "0";
    std::string d = delta == 1 ? "T" : "T^" + std::to_string(delta);
    return "(" + g + ") / (1-" + d + ")^" + std::to_string(D);
}

nlohmann::json RationalFunctionFit::to_json() const {
    nlohmann::json num = nlohmann::json::array();
    for (const auto& c : numerator) num.push_back(c.to_json());
    return {{"numerator", num}, {"delta", delta}, {"D", D}, {"witnessed_order", witnessed_order},
            {"display", to_string()}};
}

RationalFunctionFit fit_rational(const SeriesT& s, long long delta, long long D) {
    if (delta < 1 || D < 0) throw Error("ratfun", "InvalidArgument", "need delta >= 1 and D >= 0");
    long long R = s.order();
    long long top = delta * D;
    if (R < top + delta + 2)
        throw Error("ratfun", "InsufficientCoefficients",
                    "need " + std::to_string(top + delta + 2) + " coefficients, got " + std::to_string(R));
    auto den = denominator_terms(delta, D);
    auto coef = [&](long long k) {
        ExactScalar v;
        for (const auto& [deg, c] : den) {
            long long idx = k - deg;
            if (idx < 1) break;
            const ExactScalar& sv = s.at(idx);
            if (!sv.is_zero()) v += ExactScalar(Rat(c)) * sv;
        }
        return v;
    };
    RationalFunctionFit fit;
    fit.delta = delta;
    fit.D = D;
    fit.numerator.assign(static_cast<std::size_t>(top + 1), ExactScalar());
    for (long long k = 1; k <= top; ++k) fit.numerator[k] = coef(k);
    for (long long k = top + 1; k <= R; ++k)
        if (!coef(k).is_zero())
            throw Error("ratfun", "NoRationalFit",
                        "coefficient " + std::to_string(k) + " violates the (1-T^" + std::to_string(delta) + ")^" +
                            std::to_string(D) + " ansatz");
    while (!fit.numerator.empty() && fit.numerator.back().is_zero()) fit.numerator.pop_back();
    fit.witnessed_order = R;
    return fit;
}

ExactScalar limit_at_infinity(const RationalFunctionFit& f) {
    long long deg = f.degree();
    long long top = f.delta * f.D;
    if (deg < top) return ExactScalar();
    if (deg > top) throw Error("ratfun", "DegreePositive", "numerator degree exceeds delta*D");
    ExactScalar lc = f.numerator[deg];
    return (f.D % 2 == 0) ? lc : -lc;
}

}  // namespace stacky
