#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <string>

namespace stacky {

using Rat = mpq_class;
using BigInt = mpz_class;

// a/b in lowest terms; b != 0.
Rat make_rat(long long a, long long b);

// "p/q" in lowest terms, "/q" omitted when q = 1.
std::string to_string(const Rat& r);
std::string to_string(const BigInt& z);

// Accepts "p", "p/q", "-p/q" (whitespace tolerated); throws Error("scalar", "ParseError").
Rat parse_rat(const std::string& s);

BigInt floor_of(const Rat& r);
// r - floor(r), in [0, 1).
Rat frac_of(const Rat& r);

long long to_ll(const BigInt& z);
double to_double(const Rat& r);

long long gcd_ll(long long a, long long b);
long long lcm_ll(long long a, long long b);

}  // namespace stacky
