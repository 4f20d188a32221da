#pragma once

#include <array>
#include <memory>
#include <string>
#include <tuple>
#include <vector>

#include <json.hpp>

#include "stacky/lambdaring.hpp"

namespace stacky {

// N^g with trivial Frobenius.
class DiscreteLattice : public GradedGaloisMonoid {
public:
    explicit DiscreteLattice(int g);

    std::string name() const override;
    int rank() const override { return g_; }
    std::vector<int> grading(const Element& x) const override { return x; }
    Element zero() const override { return Element(g_, 0); }
    std::vector<Element> fixed_elements(int n, int grade_bound) const override;
    Element add(const Element& x, const Element& y) const override;
    Element frobenius(const Element& x) const override { return x; }
    bool is_fixed(const Element&, int) const override { return true; }
    Element trace(const Element& y, int n, int m) const override;
    std::vector<std::pair<Element, Element>> add_fibers(const Element& x, int n) const override;
    std::vector<Element> trace_fibers(const Element& x, int n, int m) const override;
    std::vector<std::vector<Element>> decompositions(const Element& x, int n, int s) const override;
    nlohmann::json element_to_json(const Element& x) const override;

private:
    int g_;
};

// Free commutative monoid on a Galois set given by its orbit census: census[d-1]
// orbits of size d. Geometric points are (d, orbit, offset) with Frobenius
// advancing the offset; elements are sorted multisets of point ids.
class FreeOrbitMonoid : public GradedGaloisMonoid {
public:
    struct Point {
        int degree;
        long long orbit;
        int offset;
    };

    FreeOrbitMonoid(std::vector<long long> census, std::string label);
    // Closed points of the affine line over F_q up to the given degree.
    static std::shared_ptr<FreeOrbitMonoid> affine_line(long long q, int max_degree);
    // Number of monic irreducible polynomials of degree d over F_q.
    static long long irreducible_count(long long q, int d);

    std::string name() const override { return label_; }
    int rank() const override { return 1; }
    std::vector<int> grading(const Element& x) const override { return {static_cast<int>(x.size())}; }
    int grade(const Element& x) const override { return static_cast<int>(x.size()); }
    Element zero() const override { return {}; }
    std::vector<Element> fixed_elements(int n, int grade_bound) const override;
    Element add(const Element& x, const Element& y) const override;
    Element frobenius(const Element& x) const override;
    bool is_fixed(const Element& x, int n) const override;
    std::vector<std::pair<Element, Element>> add_fibers(const Element& x, int n) const override;
    std::vector<Element> trace_fibers(const Element& x, int n, int m) const override;
    nlohmann::json element_to_json(const Element& x) const override;

    int max_degree() const { return static_cast<int>(census_.size()); }
    const std::vector<long long>& census() const { return census_; }
    Point point(int id) const;
    int point_id(int degree, long long orbit, int offset) const;

private:
    struct Atom {
        int degree;
        long long orbit;
        int residue;  // offsets congruent to residue mod gcd(degree, level)
        bool operator<(const Atom& o) const {
            return std::tie(degree, orbit, residue) < std::tie(o.degree, o.orbit, o.residue);
        }
    };
    std::vector<std::pair<Atom, int>> atoms_of(const Element& x, int n) const;
    std::vector<int> atom_points(const Atom& a, int level) const;

    std::vector<long long> census_;
    std::vector<long long> base_;  // first point id of each degree
    std::string label_;
};

// Symmetric quiver: arrows[i][j] = number of arrows i -> j.
struct Quiver {
    int vertices = 1;
    std::vector<std::vector<long long>> arrows;

    static Quiver loops(long long m);
    // {vertices: g, arrows: [[i, j, count], ...]}; NotSymmetric for asymmetric input.
    static Quiver from_json(const nlohmann::json& j);
    nlohmann::json to_json() const;
    void validate() const;
};

// Dimension vectors of a symmetric quiver (Vect = one vertex, no arrows).
class LinearObjectsMonoid : public DiscreteLattice {
public:
    explicit LinearObjectsMonoid(Quiver q, bool vect_variant = false);
    static std::shared_ptr<LinearObjectsMonoid> vect();
    static std::shared_ptr<LinearObjectsMonoid> symmetric_quiver(const Quiver& q);

    std::string name() const override;
    bool is_vect() const { return vect_; }
    const Quiver& quiver() const { return quiver_; }

    long long euler_pairing(const Element& a, const Element& b) const;
    // sum over arrows i -> j of a_i b_j
    long long arrow_pairing(const Element& a, const Element& b) const;
    // |GL_gamma(F_{q^n})| as a polynomial in q.
    ExactScalar aut_order(const Element& gamma, int n) const;
    // (L^(1/2))_n^{(gamma,gamma)} q^{n sum_a gamma_i gamma_j} / |GL_gamma(F_{q^n})|.
    ExactScalar stacky_count(const Element& gamma, int n, const HalfLConvention& conv) const;

private:
    Quiver quiver_;
    bool vect_;
};

using LinearPtr = std::shared_ptr<const LinearObjectsMonoid>;

// |GL_n(F_{q^level})| = q^{level n(n-1)/2} prod_{i=1}^n (q^{level i} - 1).
ExactScalar gl_order(long long n, long long level);
// 1 / |GL_n(F_{q^level})|.
ExactScalar inverse_gl_order(long long n, long long level);

CountingFunction stacky_function(const LinearPtr& m, Truncation trunc, const HalfLConvention& conv);

}  // namespace stacky
