#include "stacky/lambdaring.hpp"

#include <algorithm>

#include "stacky/error.hpp"
#include "stacky/parallel.hpp"

namespace stacky {

// ---------------------------------------------------------------- VolumeElem

VolumeElem VolumeElem::adams(long long m) const {
    if (m < 1) throw Error("lambdaring", "InvalidArgument", "Adams index must be positive");
    VolumeElem out;
    for (long long n = 1; n * m <= truncation(); ++n) out.levels.push_back(at(n * m));
    return out;
}

VolumeElem VolumeElem::operator+(const VolumeElem& o) const {
    if (o.truncation() != truncation()) throw Error("lambdaring", "TruncationMismatch", "volume elements differ in length");
    VolumeElem out = *this;
    for (std::size_t i = 0; i < levels.size(); ++i) out.levels[i] += o.levels[i];
    return out;
}

VolumeElem VolumeElem::operator*(const VolumeElem& o) const {
    if (o.truncation() != truncation()) throw Error("lambdaring", "TruncationMismatch", "volume elements differ in length");
    VolumeElem out = *this;
    for (std::size_t i = 0; i < levels.size(); ++i) out.levels[i] *= o.levels[i];
    return out;
}

nlohmann::json VolumeElem::to_json() const {
    nlohmann::json arr = nlohmann::json::array();
    for (const auto& v : levels) arr.push_back(v.to_json());
    return arr;
}

// ------------------------------------------------------- GradedGaloisMonoid

int GradedGaloisMonoid::grade(const Element& x) const {
    int g = 0;
    for (int v : grading(x)) g += v;
    return g;
}

bool GradedGaloisMonoid::is_fixed(const Element& x, int n) const {
    Element y = x;
    for (int i = 0; i < n; ++i) y = frobenius(y);
    return y == x;
}

Element GradedGaloisMonoid::trace(const Element& y, int n, int m) const {
    Element acc = zero();
    Element cur = y;
    for (int i = 1; i <= m; ++i) {
        for (int k = 0; k < n; ++k) cur = frobenius(cur);
        acc = add(acc, cur);
    }
    return acc;
}

std::vector<std::vector<Element>> GradedGaloisMonoid::decompositions(const Element& x, int n, int s) const {
    if (s < 1) return {};
    if (s == 1) return {{x}};
    std::vector<std::vector<Element>> out;
    for (const auto& [a, b] : add_fibers(x, n))
        for (auto& tail : decompositions(b, n, s - 1)) {
            std::vector<Element> t{a};
            t.insert(t.end(), tail.begin(), tail.end());
            out.push_back(std::move(t));
        }
    return out;
}

nlohmann::json GradedGaloisMonoid::element_to_json(const Element& x) const { return x; }

const std::vector<Element>& GradedGaloisMonoid::fixed_cached(int n, int grade_bound) const {
    std::lock_guard<std::mutex> lock(cache_mutex_);
    auto key = std::make_pair(n, grade_bound);
    auto it = fixed_cache_.find(key);
    if (it == fixed_cache_.end())
        it = fixed_cache_.emplace(key, std::make_unique<std::vector<Element>>(fixed_elements(n, grade_bound))).first;
    return *it->second;
}

namespace {

int position(const std::vector<Element>& xs, const Element& x) {
    auto it = std::lower_bound(xs.begin(), xs.end(), x);
    return it == xs.end() || *it != x ? -1 : static_cast<int>(it - xs.begin());
}

}  // namespace

const GradedGaloisMonoid::AddTable& GradedGaloisMonoid::add_table(int n, int grade_bound) const {
    auto key = std::make_pair(n, grade_bound);
    {
        std::lock_guard<std::mutex> lock(cache_mutex_);
        auto it = add_cache_.find(key);
        if (it != add_cache_.end()) return *it->second;
    }
    const auto& xs = fixed_cached(n, grade_bound);
    auto rows = parallel_map<std::vector<std::pair<int, int>>>(xs.size(), [&](std::size_t i) {
        std::vector<std::pair<int, int>> row;
        for (const auto& [a, b] : add_fibers(xs[i], n)) row.emplace_back(position(xs, a), position(xs, b));
        return row;
    });
    std::lock_guard<std::mutex> lock(cache_mutex_);
    auto it = add_cache_.emplace(key, std::make_unique<AddTable>(std::move(rows))).first;
    return *it->second;
}

const GradedGaloisMonoid::TraceTable& GradedGaloisMonoid::trace_table(int n, int m, int grade_bound, int bound_nm) const {
    auto key = std::make_tuple(n, m, grade_bound, bound_nm);
    {
        std::lock_guard<std::mutex> lock(cache_mutex_);
        auto it = trace_cache_.find(key);
        if (it != trace_cache_.end()) return *it->second;
    }
    const auto& xs = fixed_cached(n, grade_bound);
    const auto& ys = fixed_cached(n * m, bound_nm);
    auto rows = parallel_map<std::vector<int>>(xs.size(), [&](std::size_t i) {
        std::vector<int> row;
        for (const auto& y : trace_fibers(xs[i], n, m)) {
            int j = position(ys, y);
            if (j >= 0) row.push_back(j);
        }
        return row;
    });
    std::lock_guard<std::mutex> lock(cache_mutex_);
    auto it = trace_cache_.emplace(key, std::make_unique<TraceTable>(std::move(rows))).first;
    return *it->second;
}

// --------------------------------------------------------- CountingFunction

CountingFunction::CountingFunction(MonoidPtr monoid, Truncation trunc)
    : monoid_(std::move(monoid)), trunc_(trunc) {
    if (!monoid_) throw Error("lambdaring", "InvalidArgument", "null monoid");
    if (trunc_.grade < 0 || trunc_.weight < 1)
        throw Error("lambdaring", "InvalidArgument", "truncation needs grade >= 0 and weight >= 1");
    for (int n = 1; n <= trunc_.weight; ++n) {
        elems_.push_back(&monoid_->fixed_cached(n, trunc_.max_grade_at(n)));
        values_.emplace_back(elems_.back()->size());
    }
}

CountingFunction CountingFunction::zero(MonoidPtr monoid, Truncation trunc) {
    return CountingFunction(std::move(monoid), trunc);
}

CountingFunction CountingFunction::unit(MonoidPtr monoid, Truncation trunc) {
    CountingFunction f(std::move(monoid), trunc);
    Element z = f.monoid().zero();
    for (int n = 1; n <= trunc.weight; ++n) f.set(z, n, ExactScalar(1));
    return f;
}

CountingFunction CountingFunction::from(MonoidPtr monoid, Truncation trunc,
                                        const std::function<ExactScalar(const Element&, int)>& value) {
    CountingFunction f(std::move(monoid), trunc);
    for (int n = 1; n <= trunc.weight; ++n) {
        const auto& xs = f.elements(n);
        auto& vs = f.values(n);
        for (std::size_t i = 0; i < xs.size(); ++i) vs[i] = value(xs[i], n);
    }
    return f;
}

bool CountingFunction::in_range(const Element& x, int n) const {
    if (n < 1 || n > trunc_.weight) return false;
    int g = monoid_->grade(x);
    return g <= trunc_.grade && static_cast<long long>(n) * g <= trunc_.weight;
}

long long CountingFunction::index_of(const Element& x, int n) const { return position(*elems_[n - 1], x); }

const ExactScalar* CountingFunction::find(const Element& x, int n) const {
    if (n < 1 || n > trunc_.weight) return nullptr;
    long long i = index_of(x, n);
    if (i < 0) return nullptr;
    const ExactScalar& v = values_[n - 1][i];
    return v.is_zero() ? nullptr : &v;
}

ExactScalar CountingFunction::value(const Element& x, int n) const {
    if (!in_range(x, n))
        throw Error("lambdaring", "TruncationExceeded",
                    "value requested at level " + std::to_string(n) + " outside the truncation");
    const ExactScalar* v = find(x, n);
    return v ? *v : ExactScalar();
}

std::vector<std::pair<Element, ExactScalar>> CountingFunction::level(int n) const {
    std::vector<std::pair<Element, ExactScalar>> out;
    const auto& xs = elements(n);
    const auto& vs = values(n);
    for (std::size_t i = 0; i < xs.size(); ++i)
        if (!vs[i].is_zero()) out.emplace_back(xs[i], vs[i]);
    return out;
}

bool CountingFunction::level_zero(int n) const {
    for (const auto& v : values(n))
        if (!v.is_zero()) return false;
    return true;
}

void CountingFunction::set(const Element& x, int n, const ExactScalar& v) {
    if (!in_range(x, n)) throw Error("lambdaring", "TruncationExceeded", "assignment outside the truncation");
    long long i = index_of(x, n);
    if (i < 0 || !monoid_->is_fixed(x, n))
        throw Error("lambdaring", "OutsideSupport", "element is not Frobenius-fixed at level " + std::to_string(n));
    values_[n - 1][i] = v;
}

void CountingFunction::add_to(const Element& x, int n, const ExactScalar& v) {
    if (v.is_zero()) return;
    if (!in_range(x, n)) throw Error("lambdaring", "TruncationExceeded", "assignment outside the truncation");
    long long i = index_of(x, n);
    if (i < 0) throw Error("lambdaring", "OutsideSupport", "element is not Frobenius-fixed at level " + std::to_string(n));
    values_[n - 1][i] += v;
}

namespace {

void require_same(const CountingFunction& f, const CountingFunction& g) {
    if (f.monoid_ptr() != g.monoid_ptr())
        throw Error("lambdaring", "MonoidMismatch", f.monoid().name() + " vs " + g.monoid().name());
    if (!(f.truncation() == g.truncation()))
        throw Error("lambdaring", "MonoidMismatch", "counting functions carry different truncations");
}

// Evaluates value(x, n) over every stored pair (x, n) of the truncation.
CountingFunction tabulate(const MonoidPtr& m, Truncation trunc,
                          const std::function<ExactScalar(const Element&, int)>& value) {
    CountingFunction out(m, trunc);
    for (int n = 1; n <= trunc.weight; ++n) {
        const auto& xs = out.elements(n);
        out.values(n) = parallel_map<ExactScalar>(xs.size(), [&](std::size_t i) { return value(xs[i], n); });
    }
    return out;
}

}  // namespace

CountingFunction& CountingFunction::operator+=(const CountingFunction& o) {
    require_same(*this, o);
    for (int n = 1; n <= trunc_.weight; ++n) {
        auto& a = values_[n - 1];
        const auto& b = o.values_[n - 1];
        for (std::size_t i = 0; i < a.size(); ++i)
            if (!b[i].is_zero()) a[i] += b[i];
    }
    return *this;
}

CountingFunction& CountingFunction::scale(const ExactScalar& c) {
    if (c == ExactScalar(1)) return *this;
    for (auto& lv : values_)
        for (auto& v : lv)
            if (!v.is_zero()) v *= c;
    return *this;
}

CountingFunction CountingFunction::operator+(const CountingFunction& o) const {
    CountingFunction out = *this;
    out += o;
    return out;
}

CountingFunction CountingFunction::operator-(const CountingFunction& o) const { return *this + o.scaled(ExactScalar(-1)); }

CountingFunction CountingFunction::scaled(const ExactScalar& c) const {
    CountingFunction out = *this;
    out.scale(c);
    return out;
}

CountingFunction CountingFunction::pointwise(const CountingFunction& o) const {
    require_same(*this, o);
    CountingFunction out = *this;
    for (int n = 1; n <= trunc_.weight; ++n) {
        auto& a = out.values_[n - 1];
        const auto& b = o.values_[n - 1];
        for (std::size_t i = 0; i < a.size(); ++i)
            if (!a[i].is_zero()) a[i] *= b[i];
    }
    return out;
}

bool CountingFunction::operator==(const CountingFunction& o) const {
    if (monoid_ != o.monoid_ || !(trunc_ == o.trunc_)) return false;
    return values_ == o.values_;
}

std::vector<std::tuple<Element, int, ExactScalar>> CountingFunction::differences(const CountingFunction& o) const {
    require_same(*this, o);
    std::vector<std::tuple<Element, int, ExactScalar>> out;
    for (int n = 1; n <= trunc_.weight; ++n) {
        const auto& xs = elements(n);
        const auto& a = values_[n - 1];
        const auto& b = o.values_[n - 1];
        for (std::size_t i = 0; i < xs.size(); ++i)
            if (a[i] != b[i]) out.emplace_back(xs[i], n, a[i] - b[i]);
    }
    return out;
}

nlohmann::json CountingFunction::to_json() const {
    nlohmann::json arr = nlohmann::json::array();
    for (int n = 1; n <= trunc_.weight; ++n)
        for (const auto& [x, v] : level(n))
            arr.push_back({{"element", monoid_->element_to_json(x)}, {"level", n}, {"value", v.to_json()}});
    return arr;
}

// ------------------------------------------------------------- operations

CountingFunction convolve(const CountingFunction& f, const CountingFunction& g) {
    require_same(f, g);
    const auto& M = f.monoid();
    const Truncation t = f.truncation();
    CountingFunction out(f.monoid_ptr(), t);
    for (int n = 1; n <= t.weight; ++n) {
        if (f.level_zero(n) || g.level_zero(n)) continue;
        const auto& fib = M.add_table(n, t.max_grade_at(n));
        const auto& fv = f.values(n);
        const auto& gv = g.values(n);
        out.values(n) = parallel_map<ExactScalar>(fib.size(), [&](std::size_t i) {
            ExactScalar acc;
            for (auto [a, b] : fib[i]) acc.add_product(fv[a], gv[b]);
            return acc;
        });
    }
    return out;
}

namespace {

// f(0) at level k, extended beyond the truncation only when f(0) is constant.
ExactScalar zero_value(const CountingFunction& f, long long k) {
    const auto& M = f.monoid();
    Element z = M.zero();
    if (k <= f.truncation().weight) return f.value(z, static_cast<int>(k));
    ExactScalar c = f.value(z, 1);
    for (int n = 2; n <= f.truncation().weight; ++n)
        if (f.value(z, n) != c)
            throw Error("lambdaring", "TruncationExceeded",
                        "value at zero needed at level " + std::to_string(k) + " and is not constant");
    return c;
}

void require_zero_value(const CountingFunction& f, const ExactScalar& expected, const char* what) {
    Element z = f.monoid().zero();
    for (int n = 1; n <= f.truncation().weight; ++n)
        if (f.value(z, n) != expected) throw Error("lambdaring", "NotAugmented", what);
}

}  // namespace

CountingFunction adams(const CountingFunction& f, int m) {
    if (m < 1) throw Error("lambdaring", "InvalidArgument", "Adams index must be positive");
    if (m == 1) return f;
    const auto& M = f.monoid();
    const Truncation t = f.truncation();
    Element z = M.zero();
    CountingFunction out(f.monoid_ptr(), t);
    for (int n = 1; n <= t.weight; ++n) {
        const auto& xs = out.elements(n);
        auto& vals = out.values(n);
        int zi = position(xs, z);
        if (zi >= 0) vals[zi] = zero_value(f, static_cast<long long>(n) * m);
        int nm = n * m;
        if (nm > t.weight) continue;
        const auto& tr = M.trace_table(n, m, t.max_grade_at(n), t.max_grade_at(nm));
        const auto& fv = f.values(nm);
        for (std::size_t i = 0; i < xs.size(); ++i) {
            if (static_cast<int>(i) == zi) continue;
            for (int j : tr[i]) vals[i] += fv[j];
        }
    }
    return out;
}

CountingFunction exp_series(const CountingFunction& f) {
    require_zero_value(f, ExactScalar(), "exp needs f(0) = 0");
    CountingFunction out = CountingFunction::unit(f.monoid_ptr(), f.truncation());
    CountingFunction power = out;
    for (int k = 1; k <= f.truncation().grade; ++k) {
        power = convolve(power, f);
        power.scale(ExactScalar(make_rat(1, k)));
        out += power;
    }
    return out;
}

CountingFunction log_series(const CountingFunction& F) {
    require_zero_value(F, ExactScalar(1), "log needs F(0) = 1");
    CountingFunction g = F;
    g.set(F.monoid().zero(), 1, ExactScalar());
    for (int n = 2; n <= F.truncation().weight; ++n) g.set(F.monoid().zero(), n, ExactScalar());
    CountingFunction out = CountingFunction::zero(F.monoid_ptr(), F.truncation());
    CountingFunction power = g;
    for (int k = 1; k <= F.truncation().grade; ++k) {
        if (k > 1) power = convolve(power, g);
        out += power.scaled(ExactScalar(make_rat(k % 2 == 1 ? 1 : -1, k)));
    }
    return out;
}

CountingFunction pleth_sym(const CountingFunction& f) {
    require_zero_value(f, ExactScalar(), "Sym needs f(0) = 0");
    CountingFunction s = CountingFunction::zero(f.monoid_ptr(), f.truncation());
    for (int k = 1; k <= f.truncation().grade; ++k) s += adams(f, k).scale(ExactScalar(make_rat(1, k)));
    return exp_series(s);
}

CountingFunction pleth_log(const CountingFunction& F) {
    CountingFunction L = log_series(F);
    CountingFunction out = CountingFunction::zero(F.monoid_ptr(), F.truncation());
    for (int m = 1; m <= F.truncation().grade; ++m) {
        int mu = cyc::mobius(m);
        if (mu == 0) continue;
        out += adams(L, m).scale(ExactScalar(make_rat(mu, m)));
    }
    return out;
}

CountingFunction log_direct(const CountingFunction& F) {
    require_zero_value(F, ExactScalar(1), "Log needs F(0) = 1");
    const auto& M = F.monoid();
    const Truncation t = F.truncation();
    Element z = M.zero();
    CountingFunction out(F.monoid_ptr(), t);
    for (int n = 1; n <= t.weight; ++n) {
        const int gb = t.max_grade_at(n);
        const auto& xs = out.elements(n);
        const auto& fib = M.add_table(n, gb);
        const int zi = position(xs, z);
        std::vector<int> grades(xs.size());
        for (std::size_t i = 0; i < xs.size(); ++i) grades[i] = M.grade(xs[i]);
        // mass[m][i]: sum of F(y)_{nm} over nonzero y in S_{nm} with Tr(y) = x_i
        std::vector<std::vector<ExactScalar>> mass(static_cast<std::size_t>(gb) + 1);
        for (int m = 1; m <= gb; ++m) {
            if (cyc::mobius(m) == 0) continue;
            const int nm = n * m;
            const auto& ys = F.elements(nm);
            const auto& tr = M.trace_table(n, m, gb, t.max_grade_at(nm));
            const auto& fv = F.values(nm);
            const int zy = position(ys, z);
            mass[m] = parallel_map<ExactScalar>(xs.size(), [&](std::size_t i) {
                ExactScalar acc;
                for (int j : tr[i])
                    if (j != zy) acc += fv[j];
                return acc;
            });
        }
        out.values(n) = parallel_map<ExactScalar>(xs.size(), [&](std::size_t i) {
            ExactScalar total;
            if (static_cast<int>(i) == zi) return total;
            const int g = grades[i];
            for (int m = 1; m <= g; ++m) {
                const int mu = cyc::mobius(m);
                if (mu == 0) continue;
                const auto& ms = mass[m];
                // products of mass over ordered tuples of s nonzero parts summing to x_i
                std::function<void(int, int, const ExactScalar&, ExactScalar&)> walk =
                    [&](int x, int s, const ExactScalar& prefix, ExactScalar& acc) {
                        if (s == 1) {
                            acc.add_product(prefix, ms[x]);
                            return;
                        }
                        for (auto [a, b] : fib[x]) {
                            if (a == zi || b == zi || grades[b] < s - 1 || ms[a].is_zero()) continue;
                            walk(b, s - 1, prefix * ms[a], acc);
                        }
                    };
                for (int s = 1; s <= g; ++s) {
                    ExactScalar inner;
                    walk(static_cast<int>(i), s, ExactScalar(1), inner);
                    if (inner.is_zero()) continue;
                    long long sign = (s % 2 == 1) ? 1 : -1;
                    total += inner * ExactScalar(make_rat(sign * mu, static_cast<long long>(m) * s));
                }
            }
            return total;
        });
    }
    return out;
}

// --------------------------------------------------------------- morphisms

namespace {

class BasicMorphism : public MonoidMorphism {
public:
    BasicMorphism(MonoidPtr s, MonoidPtr t, std::function<Element(const Element&)> f, bool inj, bool full, bool sf)
        : s_(std::move(s)), t_(std::move(t)), f_(std::move(f)), inj_(inj), full_(full), sf_(sf) {}
    MonoidPtr source() const override { return s_; }
    MonoidPtr target() const override { return t_; }
    Element apply(const Element& x) const override { return f_(x); }
    bool injective() const override { return inj_; }
    bool full() const override { return full_; }
    bool sigma_finite() const override { return sf_; }

private:
    MonoidPtr s_, t_;
    std::function<Element(const Element&)> f_;
    bool inj_, full_, sf_;
};

}  // namespace

MorphismPtr identity_morphism(MonoidPtr m) {
    return std::make_shared<BasicMorphism>(m, m, [](const Element& x) { return x; }, true, true, true);
}

MorphismPtr grading_morphism(MonoidPtr source, MonoidPtr lattice) {
    if (source->rank() != lattice->rank())
        throw Error("lambdaring", "MonoidMismatch", "grading target must have the source's rank");
    const GradedGaloisMonoid* s = source.get();
    return std::make_shared<BasicMorphism>(
        source, lattice, [s](const Element& x) { return s->grading(x); }, false, false, true);
}

MorphismPtr inclusion_morphism(MonoidPtr source, MonoidPtr target) {
    int a = source->rank(), b = target->rank();
    if (a > b) throw Error("lambdaring", "MonoidMismatch", "inclusion needs rank(source) <= rank(target)");
    return std::make_shared<BasicMorphism>(
        source, target,
        [b](const Element& x) {
            Element y(b, 0);
            std::copy(x.begin(), x.end(), y.begin());
            return y;
        },
        true, true, true);
}

MorphismPtr collapse_morphism(MonoidPtr source, MonoidPtr target) {
    Element z = target->zero();
    return std::make_shared<BasicMorphism>(source, target, [z](const Element&) { return z; }, false, false, false);
}

CountingFunction pushforward(const MonoidMorphism& phi, const CountingFunction& f) {
    if (phi.source() != f.monoid_ptr()) throw Error("lambdaring", "MonoidMismatch", "morphism source differs");
    if (!phi.sigma_finite()) throw Error("lambdaring", "NotSigmaFinite", "pushforward needs sigma-finite fibers");
    CountingFunction out(phi.target(), f.truncation());
    const auto& T = *phi.target();
    for (int n = 1; n <= f.truncation().weight; ++n)
        for (const auto& [x, v] : f.level(n)) {
            Element y = phi.apply(x);
            if (T.grade(y) != f.monoid().grade(x))
                throw Error("lambdaring", "NotGraded", "pushforward needs a grade-preserving morphism");
            out.add_to(y, n, v);
        }
    return out;
}

CountingFunction pullback(const MonoidMorphism& phi, const CountingFunction& g) {
    if (phi.target() != g.monoid_ptr()) throw Error("lambdaring", "MonoidMismatch", "morphism target differs");
    if (!phi.injective() || !phi.full())
        throw Error("lambdaring", "NotFullSubmonoid", "pullback needs an injective morphism with full image");
    return tabulate(phi.source(), g.truncation(), [&](const Element& x, int n) {
        Element y = phi.apply(x);
        return g.in_range(y, n) ? g.value(y, n) : ExactScalar();
    });
}

}  // namespace stacky
