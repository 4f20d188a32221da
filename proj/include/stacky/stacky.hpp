#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "stacky/ehrhart.hpp"
#include "stacky/lambdaring.hpp"
#include "stacky/monoids.hpp"
#include "stacky/ratfun.hpp"
#include "stacky/scalar.hpp"

namespace stacky {

// [A^n / G] with G = G_m^k x prod mu_{d_i}; column j of weights is the
// character chi_j in Z^k + sum Z/d_i.
struct ToricStackDatum {
    int n = 0;
    int torus_rank = 0;
    std::vector<long long> finite_orders;
    std::vector<std::vector<long long>> weights;  // (k + l) x n
    long long q = 2;
    // "origin": the fiber over the image of 0 (the nullcone). "point": the
    // fiber through fiber_point, which needs full support, a closed orbit and
    // trivial stabilizer.
    std::string fiber = "origin";
    std::vector<long long> fiber_point;
    // Character c of G defining the gerbe function alpha(x, phi) = <c, phi>.
    std::vector<long long> gerbe_character;

    int group_rank() const { return torus_rank + static_cast<int>(finite_orders.size()); }
    // NonSplitFiniteGroup, NoBasePoint, SchemaViolation, UnsupportedFiber.
    void validate() const;
    static ToricStackDatum from_json(const nlohmann::json& j);
    nlohmann::json to_json() const;
};

enum class FBar { One, Gerbe };
FBar parse_fbar(const std::string& s);

// A class of points of the inertia stack over the fiber. All G(F_q)-orbits
// with the given support share the same data, so one record stands for
// orbit_count of them.
struct InertiaPoint {
    std::vector<long long> orbit_rep;
    std::vector<int> support;
    long long q = 2;
    ExactScalar orbit_count;
    long long r = 1;
    std::vector<Rat> phi;                 // values on the generators of X(G), in [0, 1)
    std::vector<Rat> tangent_characters;  // <chi_j, phi> read in (0, 1]
    Rat weight;
    long long phi_order = 1;
    // X(Stab) = Z^stab_free_rank + sum Z/stab_torsion_i
    int stab_free_rank = 0;
    std::vector<long long> stab_torsion;
    Rat gerbe;           // alpha = <c, phi> mod 1 at level 1
    Rat gerbe_modified;  // no Euler-pairing sign on a toric datum, equal to gerbe

    // |Aut(y)(F_{q^level})|
    ExactScalar aut_order(int level) const;
    Rat gerbe_at(int level) const;
    nlohmann::json to_json() const;
};

std::vector<InertiaPoint> inertia_points(const ToricStackDatum& X, long long r);
// sum_y fbar(y) q^{-w(y)} |orbits| / |Aut(y)(F_q)| over the inertia points at r.
ExactScalar inertia_mass(const ToricStackDatum& X, long long r, FBar fbar);
SeriesT volume_series(const ToricStackDatum& X, FBar fbar, long long R);

struct VolumeResult {
    SeriesT series;
    RationalFunctionFit fit;
    ExactScalar volume;
    nlohmann::json to_json() const;
};

// delta starts at the lcm of stabilizer exponents and doubles up to delta_cap
// on NoRationalFit; D = k + l + 1. R = 0 chooses the order automatically.
VolumeResult orbifold_volume(const ToricStackDatum& X, FBar fbar, long long R = 0, long long delta_cap = 64);
// Finite orbifold sum over I_{mu-hat} for a datum without torus factors.
ExactScalar dm_inertia_sum(const ToricStackDatum& X, FBar fbar);

// Configuration of the Vect weighted inertia computations.
struct PlidConfig {
    HalfLConvention conv{};
    DeltaMode mode = DeltaMode::Lattice;
};

// Coefficient of T^r in the weighted inertia series of x = k^N at level n,
// through the (m, s, d, y) parametrization.
ExactScalar weighted_inertia_parametrized(long long N, int level, long long r, const PlidConfig& cfg);

struct BruteForceClass {
    std::vector<long long> representative;  // row-major N x N over F_p
    long long centralizer_order = 0;        // in PGL_N(F_p)
    long long centralizer_dim = 0;          // sum of squared eigenspace dimensions
    Rat gerbe;
    long long gerbe_order = 1;
};

struct BruteForceResult {
    ExactScalar coefficient;
    std::vector<BruteForceClass> classes;
    long long group_order = 0;
    nlohmann::json to_json() const;
};

// Enumerates PGL_N(F_p) at level 1; requires p prime and r | p - 1.
// Errors: UnsupportedAutGroup, BruteForceTooLarge.
BruteForceResult weighted_inertia_bruteforce(long long N, long long p, long long r, const PlidConfig& cfg,
                                             long long max_group = 1000000);

enum class InertiaPath { Parametrized, BruteForce };

SeriesT weighted_inertia_series(long long N, int level, long long R, InertiaPath path, const PlidConfig& cfg,
                                long long p = 0);
// Fitting data for the parametrized series of k^N.
long long weighted_inertia_period(long long N, DeltaMode mode);

// F(k^N) per level 1..levels.
VolumeElem bps_counting_function(long long N, int levels, const PlidConfig& cfg);

struct PlidEntry {
    long long grade = 0;
    int level = 0;
    ExactScalar lhs;          // F / (L^(1/2) - L^(-1/2))
    ExactScalar rhs_pleth;    // pleth_log
    ExactScalar rhs_direct;   // log_direct
    ExactScalar diff_pleth;
    ExactScalar diff_direct;
};

struct PlidReport {
    std::vector<PlidEntry> entries;
    bool exact_zero = true;
    nlohmann::json to_json() const;
};

PlidReport plid_residual(int grade_bound, int level_bound, const PlidConfig& cfg);

struct QuiverBPSResult {
    Quiver quiver;
    int gamma_bound = 0;
    int level_bound = 0;
    HalfLConvention conv{};
    std::map<Element, VolumeElem> omega;
    nlohmann::json to_json() const;
};

QuiverBPSResult quiver_bps(const Quiver& Q, int gamma_bound, int level_bound, const HalfLConvention& conv = {});
// pleth_sym(Omega / (L^(1/2) - L^(-1/2))) equals the stacky count function.
bool quiver_sym_round_trip(const QuiverBPSResult& res);

struct IntegralityCheck {
    bool integral = true;       // Omega * L^(-parity/2) is an integer Laurent polynomial in L
    bool level_compatible = true;  // level n is the level-1 polynomial at q^n
    bool positive = true;       // all coefficients nonnegative (recorded only)
};
IntegralityCheck quiver_integrality(const QuiverBPSResult& res);

}  // namespace stacky
