#pragma once

#include <optional>
#include <vector>

#include "stacky/rat.hpp"

namespace stacky::linalg {

using RatVec = std::vector<Rat>;
using RatMat = std::vector<RatVec>;
using IntMat = std::vector<std::vector<long long>>;

int rank(const RatMat& a);
// Basis of {x : a x = 0}; cols is the ambient dimension (needed when a is empty).
std::vector<RatVec> kernel(const RatMat& a, int cols);
// Unique solution of the square system a x = b, nullopt when a is singular.
std::optional<RatVec> solve_unique(const RatMat& a, const RatVec& b);
// Indices of a maximal linearly independent subset of the rows.
std::vector<int> independent_rows(const RatMat& a);

Rat dot(const RatVec& a, const RatVec& b);

// Invariant factors of the quotient Z^cols / (row lattice of m): returns
// (free rank, torsion orders > 1).
struct SmithForm {
    int free_rank = 0;
    std::vector<long long> torsion;
};
SmithForm smith_quotient(const IntMat& m, int cols);

// Whether p lies in the convex hull of pts, by Caratheodory: some affinely
// independent subset of at most dim+1 points carries p with nonnegative
// barycentric coordinates.
bool in_convex_hull(const RatVec& p, const std::vector<RatVec>& pts);

// Whether v is a nonnegative combination of gens (Caratheodory for cones).
bool in_cone(const RatVec& v, const std::vector<RatVec>& gens);

// All k-subsets of {0, ..., n-1} in lexicographic order.
std::vector<std::vector<int>> subsets(int n, int k);

}  // namespace stacky::linalg
