#pragma once

#include <complex>
#include <optional>
#include <vector>

#include "stacky/rat.hpp"

// Arithmetic in Q(zeta_M), elements stored in the power basis
// 1, z, ..., z^(phi(M)-1) with z = exp(2 pi i / M).
namespace stacky::cyc {

using Coords = std::vector<Rat>;

long long euler_phi(long long n);
std::vector<long long> divisors(long long n);
std::vector<long long> prime_factors(long long n);
int mobius(long long n);

// Phi_e, coefficients from degree 0 upward; monic of degree phi(e).
const std::vector<long long>& phi_poly(long long e);

Coords zero(int M);
Coords one(int M);
Coords from_rat(int M, const Rat& r);
Coords zeta_power(int M, long long j);

bool is_zero(const Coords& a);
bool is_rational(const Coords& a);
void add_to(Coords& a, const Coords& b);
void sub_from(Coords& a, const Coords& b);
void add_scaled(Coords& a, const Coords& b, const Rat& s);
Coords mul(int M, const Coords& a, const Coords& b);
void scale(Coords& a, const Rat& s);
Coords neg(const Coords& a);

// Q(zeta_M) -> Q(zeta_Mbig) for M | Mbig.
Coords embed(const Coords& a, int M, int Mbig);
// Inverse of embed when a lies in the subfield, nullopt otherwise.
std::optional<Coords> restrict_to(const Coords& a, int M, int Msmall);

Coords inverse(int M, const Coords& a);
std::complex<long double> eval(int M, const Coords& a);

}  // namespace stacky::cyc
