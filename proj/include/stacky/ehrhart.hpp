#pragma once

#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "stacky/linalg.hpp"
#include "stacky/ratfun.hpp"

namespace stacky {

// Bounded rational polytope {x : A x >= b} with its vertices and bounding box.
class RationalPolytope {
public:
    // Throws Error("ehrhart", "Unbounded") when the polyhedron has a recession direction.
    static RationalPolytope from_hrep(linalg::RatMat A, linalg::RatVec b);
    // Convex hull of the given points; the H-rep is built from affine hull
    // equations and facet hyperplanes.
    static RationalPolytope from_vertices(const std::vector<linalg::RatVec>& pts);
    // {A, b} or {vertices}; entries are ints or "p/q" strings.
    static RationalPolytope from_json(const nlohmann::json& j);

    int dimension() const { return dim_; }
    bool empty() const { return vertices_.empty(); }
    const linalg::RatMat& A() const { return A_; }
    const linalg::RatVec& b() const { return b_; }
    const std::vector<linalg::RatVec>& vertices() const { return vertices_; }
    const std::optional<std::vector<linalg::RatVec>>& vrep() const { return vrep_; }
    const linalg::RatVec& box_lo() const { return lo_; }
    const linalg::RatVec& box_hi() const { return hi_; }

    bool contains(const linalg::RatVec& x) const;
    // Smallest delta with delta * P integral.
    long long vertex_denominator() const;
    nlohmann::json to_json() const;

private:
    int dim_ = 0;
    linalg::RatMat A_;
    linalg::RatVec b_;
    std::vector<linalg::RatVec> vertices_;
    std::optional<std::vector<linalg::RatVec>> vrep_;
    linalg::RatVec lo_, hi_;
};

// #((1/r) Z^d ∩ P) by enumeration over the scaled bounding box.
long long count_dilation(const RationalPolytope& P, long long r);
// Same count, testing membership in conv(vertices) point by point; used as
// the dual-description cross-check.
long long count_dilation_vrep(const RationalPolytope& P, long long r);

SeriesT ehrhart_series(const RationalPolytope& P, long long R);
// R = 0 picks the smallest order admitted by fit_rational plus a margin.
RationalFunctionFit ehrhart_fit(const RationalPolytope& P, long long R = 0);
ExactScalar ehrhart_limit(const RationalPolytope& P, long long R = 0);

// {theta in R^k : <chi_j, theta> >= -vals_j}; chi_j is column j of the k x n matrix.
RationalPolytope fiber_polytope(const std::vector<std::vector<long long>>& weights, const linalg::RatVec& vals);

struct DeltaRegion {
    long long m = 1;
    long long s = 1;
};

enum class DeltaMode { Differences, Orbits, Lattice };

DeltaMode parse_delta_mode(const std::string& s);
std::string to_string(DeltaMode mode);

// Differences: #{(d_1..d_{s-1}) in ((1/r)Z_{>0})^{s-1} : sum d_i < 1/m}.
// Orbits: translation orbits of (Q/Z)[r] on Delta_{m,s}[r]; the translation
// w_i -> w_i + w (mod 1/m) is defined only when m | r, and the count is 0 otherwise.
// Lattice: the differences count when the window end 1/m lies in (1/r)Z, else 0.
long long delta_count(const DeltaRegion& region, long long r, DeltaMode mode);
// delta used when fitting the generating series of delta_count.
long long delta_period(const DeltaRegion& region, DeltaMode mode);
SeriesT delta_series(const DeltaRegion& region, DeltaMode mode, long long R);
RationalFunctionFit delta_fit(const DeltaRegion& region, DeltaMode mode, long long R = 0);
ExactScalar delta_limit(const DeltaRegion& region, DeltaMode mode, long long R = 0);

}  // namespace stacky
