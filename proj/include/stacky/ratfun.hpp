#pragma once

#include <string>
#include <vector>

#include <json.hpp>

#include "stacky/scalar.hpp"

namespace stacky {

// Truncated series sum_{r=1}^{R} c_r T^r; coeffs[r-1] holds c_r.
struct SeriesT {
    std::vector<ExactScalar> coeffs;

    long long order() const { return static_cast<long long>(coeffs.size()); }
    const ExactScalar& at(long long r) const { return coeffs.at(static_cast<std::size_t>(r - 1)); }
    nlohmann::json to_json() const;
};

// numerator(T) / (1 - T^delta)^D; numerator[i] is the coefficient of T^i.
struct RationalFunctionFit {
    std::vector<ExactScalar> numerator;
    long long delta = 1;
    long long D = 0;
    long long witnessed_order = 0;

    // Degree of the numerator, -1 for the zero polynomial.
    long long degree() const;
    SeriesT expand(long long R) const;
    std::string to_string() const;
    nlohmann::json to_json() const;
};

// Throws Error("ratfun", "InsufficientCoefficients") when R < delta*D + delta + 2
// and Error("ratfun", "NoRationalFit") when a verification coefficient fails.
RationalFunctionFit fit_rational(const SeriesT& s, long long delta, long long D);

// Value at T = infinity; Error("ratfun", "DegreePositive") when deg > delta*D.
ExactScalar limit_at_infinity(const RationalFunctionFit& f);

}  // namespace stacky
