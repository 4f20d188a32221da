#pragma once

#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <string>
#include <tuple>
#include <utility>
#include <vector>

#include <json.hpp>

#include "stacky/scalar.hpp"

namespace stacky {

// Element of the volume ring: levels[n-1] is the level-n component.
struct VolumeElem {
    std::vector<ExactScalar> levels;

    long long truncation() const { return static_cast<long long>(levels.size()); }
    const ExactScalar& at(long long n) const { return levels.at(static_cast<std::size_t>(n - 1)); }
    // (v_{mn})_n for mn <= N; the result has floor(N/m) levels.
    VolumeElem adams(long long m) const;
    VolumeElem operator+(const VolumeElem& o) const;
    VolumeElem operator*(const VolumeElem& o) const;
    bool operator==(const VolumeElem& o) const { return levels == o.levels; }
    nlohmann::json to_json() const;
};

// Monoid elements are opaque integer keys owned by the monoid instance.
using Element = std::vector<int>;

class GradedGaloisMonoid {
public:
    virtual ~GradedGaloisMonoid() = default;

    virtual std::string name() const = 0;
    virtual int rank() const = 0;
    virtual std::vector<int> grading(const Element& x) const = 0;
    virtual int grade(const Element& x) const;
    virtual Element zero() const = 0;
    // Duplicate-free, sorted list of sigma^n-fixed elements of grade <= bound.
    virtual std::vector<Element> fixed_elements(int n, int grade_bound) const = 0;
    virtual Element add(const Element& x, const Element& y) const = 0;
    virtual Element frobenius(const Element& x) const = 0;
    virtual bool is_fixed(const Element& x, int n) const;
    // sum_{i=1}^{m} sigma^{in}(y) for y fixed at level nm.
    virtual Element trace(const Element& y, int n, int m) const;
    // Pairs (x', x'') of level-n fixed elements with x' + x'' = x.
    virtual std::vector<std::pair<Element, Element>> add_fibers(const Element& x, int n) const = 0;
    // All y fixed at level nm with trace(y, n, m) = x.
    virtual std::vector<Element> trace_fibers(const Element& x, int n, int m) const = 0;
    // Ordered s-tuples of level-n fixed elements summing to x.
    virtual std::vector<std::vector<Element>> decompositions(const Element& x, int n, int s) const;
    virtual nlohmann::json element_to_json(const Element& x) const;

    // Memoized fixed_elements; the reference stays valid for the monoid's lifetime.
    const std::vector<Element>& fixed_cached(int n, int grade_bound) const;
    // add_fibers in index form over fixed_cached(n, grade_bound): entry i
    // lists the pairs (a, b) with x_a + x_b = x_i.
    using AddTable = std::vector<std::vector<std::pair<int, int>>>;
    const AddTable& add_table(int n, int grade_bound) const;
    // trace_fibers in index form: entry i lists the positions in
    // fixed_cached(nm, bound_nm) of the y with trace(y, n, m) = x_i.
    using TraceTable = std::vector<std::vector<int>>;
    const TraceTable& trace_table(int n, int m, int grade_bound, int bound_nm) const;

private:
    mutable std::mutex cache_mutex_;
    mutable std::map<std::pair<int, int>, std::unique_ptr<std::vector<Element>>> fixed_cache_;
    mutable std::map<std::pair<int, int>, std::unique_ptr<AddTable>> add_cache_;
    mutable std::map<std::tuple<int, int, int, int>, std::unique_ptr<TraceTable>> trace_cache_;
};

using MonoidPtr = std::shared_ptr<const GradedGaloisMonoid>;

// Values are stored on pairs (x, n) with grade(x) <= grade and
// n * grade(x) <= weight; the zero element is stored at levels n <= weight.
// This region is closed under convolution, Adams operations and Log.
struct Truncation {
    int grade = 1;
    int weight = 1;
    bool operator==(const Truncation& o) const { return grade == o.grade && weight == o.weight; }
    int max_grade_at(int n) const { return std::min(grade, weight / n); }
};

class CountingFunction {
public:
    CountingFunction(MonoidPtr monoid, Truncation trunc);

    static CountingFunction zero(MonoidPtr monoid, Truncation trunc);
    // Characteristic function of the zero element (the convolution unit).
    static CountingFunction unit(MonoidPtr monoid, Truncation trunc);
    // f(x)_n = value(x, n) on the whole truncation region.
    static CountingFunction from(MonoidPtr monoid, Truncation trunc,
                                 const std::function<ExactScalar(const Element&, int)>& value);

    const GradedGaloisMonoid& monoid() const { return *monoid_; }
    const MonoidPtr& monoid_ptr() const { return monoid_; }
    const Truncation& truncation() const { return trunc_; }

    bool in_range(const Element& x, int n) const;
    ExactScalar value(const Element& x, int n) const;
    // Throws TruncationExceeded outside the region and OutsideSupport when x
    // is not fixed at level n.
    void set(const Element& x, int n, const ExactScalar& v);
    void add_to(const Element& x, int n, const ExactScalar& v);
    // Nonzero values at level n in element order.
    std::vector<std::pair<Element, ExactScalar>> level(int n) const;
    // Stored nonzero value, or null when zero or outside the region.
    const ExactScalar* find(const Element& x, int n) const;
    // Elements of the region at level n and their values, index-aligned.
    const std::vector<Element>& elements(int n) const { return *elems_.at(n - 1); }
    const std::vector<ExactScalar>& values(int n) const { return values_.at(n - 1); }
    std::vector<ExactScalar>& values(int n) { return values_.at(n - 1); }
    bool level_zero(int n) const;

    CountingFunction& operator+=(const CountingFunction& o);
    CountingFunction& scale(const ExactScalar& c);
    CountingFunction operator+(const CountingFunction& o) const;
    CountingFunction operator-(const CountingFunction& o) const;
    CountingFunction scaled(const ExactScalar& c) const;
    // Pointwise product with a counting function (not the convolution).
    CountingFunction pointwise(const CountingFunction& o) const;
    bool operator==(const CountingFunction& o) const;
    bool operator!=(const CountingFunction& o) const { return !(*this == o); }

    // Pairs on which the two functions differ, as (element, level, difference).
    std::vector<std::tuple<Element, int, ExactScalar>> differences(const CountingFunction& o) const;
    nlohmann::json to_json() const;

private:
    MonoidPtr monoid_;
    Truncation trunc_;
    std::vector<const std::vector<Element>*> elems_;  // fixed_cached per level
    std::vector<std::vector<ExactScalar>> values_;

    long long index_of(const Element& x, int n) const;
};

CountingFunction convolve(const CountingFunction& f, const CountingFunction& g);
CountingFunction adams(const CountingFunction& f, int m);
// exp requires f(0) = 0; log requires F(0) = 1 (NotAugmented otherwise).
CountingFunction exp_series(const CountingFunction& f);
CountingFunction log_series(const CountingFunction& F);
CountingFunction pleth_sym(const CountingFunction& f);
CountingFunction pleth_log(const CountingFunction& F);
// Log through the closed Moebius formula over decompositions and trace fibers.
CountingFunction log_direct(const CountingFunction& F);

// Graded, Frobenius-equivariant monoid morphism.
class MonoidMorphism {
public:
    virtual ~MonoidMorphism() = default;
    virtual MonoidPtr source() const = 0;
    virtual MonoidPtr target() const = 0;
    virtual Element apply(const Element& x) const = 0;
    virtual bool injective() const = 0;
    // Image closed under decomposition: x' + x'' in im => x', x'' in im.
    virtual bool full() const = 0;
    virtual bool sigma_finite() const = 0;
};

using MorphismPtr = std::shared_ptr<const MonoidMorphism>;

MorphismPtr identity_morphism(MonoidPtr m);
// x -> grading(x) into the discrete lattice of the same rank.
MorphismPtr grading_morphism(MonoidPtr source, MonoidPtr lattice);
// N^a -> N^b, x -> (x, 0, ..., 0).
MorphismPtr inclusion_morphism(MonoidPtr source, MonoidPtr target);
// Everything to zero: not sigma-finite.
MorphismPtr collapse_morphism(MonoidPtr source, MonoidPtr target);

CountingFunction pushforward(const MonoidMorphism& phi, const CountingFunction& f);
CountingFunction pullback(const MonoidMorphism& phi, const CountingFunction& g);

}  // namespace stacky
