#include "stacky/monoids.hpp"

#include <algorithm>
#include <map>
#include <numeric>

#include "stacky/error.hpp"

namespace stacky {

// --------------------------------------------------------- DiscreteLattice

DiscreteLattice::DiscreteLattice(int g) : g_(g) {
    if (g < 1) throw Error("monoids", "InvalidArgument", "lattice rank must be positive");
}

std::string DiscreteLattice::name() const { return "N^" + std::to_string(g_); }

std::vector<Element> DiscreteLattice::fixed_elements(int, int grade_bound) const {
    std::vector<Element> out;
    Element cur(g_, 0);
    std::function<void(int, int)> rec = [&](int i, int left) {
        if (i == g_) {
            out.push_back(cur);
            return;
        }
        for (int v = 0; v <= left; ++v) {
            cur[i] = v;
            rec(i + 1, left - v);
        }
        cur[i] = 0;
    };
    rec(0, grade_bound);
    std::sort(out.begin(), out.end());
    return out;
}

Element DiscreteLattice::add(const Element& x, const Element& y) const {
    Element out(g_);
    for (int i = 0; i < g_; ++i) out[i] = x[i] + y[i];
    return out;
}

Element DiscreteLattice::trace(const Element& y, int, int m) const {
    Element out = y;
    for (int& v : out) v *= m;
    return out;
}

std::vector<std::pair<Element, Element>> DiscreteLattice::add_fibers(const Element& x, int) const {
    std::vector<std::pair<Element, Element>> out;
    Element a(g_, 0);
    std::function<void(int)> rec = [&](int i) {
        if (i == g_) {
            Element b(g_);
            for (int k = 0; k < g_; ++k) b[k] = x[k] - a[k];
            out.emplace_back(a, b);
            return;
        }
        for (int v = 0; v <= x[i]; ++v) {
            a[i] = v;
            rec(i + 1);
        }
        a[i] = 0;
    };
    rec(0);
    return out;
}

std::vector<Element> DiscreteLattice::trace_fibers(const Element& x, int, int m) const {
    Element y(g_);
    for (int i = 0; i < g_; ++i) {
        if (x[i] % m != 0) return {};
        y[i] = x[i] / m;
    }
    return {y};
}

std::vector<std::vector<Element>> DiscreteLattice::decompositions(const Element& x, int n, int s) const {
    return GradedGaloisMonoid::decompositions(x, n, s);
}

nlohmann::json DiscreteLattice::element_to_json(const Element& x) const {
    if (g_ == 1) return x[0];
    return x;
}

// ---------------------------------------------------------- FreeOrbitMonoid

long long FreeOrbitMonoid::irreducible_count(long long q, int d) {
    // (1/d) sum_{e | d} mu(e) q^{d/e}
    BigInt acc = 0;
    for (long long e : cyc::divisors(d)) {
        int mu = cyc::mobius(e);
        if (mu == 0) continue;
        BigInt p;
        mpz_ui_pow_ui(p.get_mpz_t(), static_cast<unsigned long>(q), static_cast<unsigned long>(d / e));
        acc += mu * p;
    }
    return to_ll(acc / d);
}

FreeOrbitMonoid::FreeOrbitMonoid(std::vector<long long> census, std::string label)
    : census_(std::move(census)), label_(std::move(label)) {
    long long total = 0;
    base_.push_back(0);
    for (std::size_t d = 1; d <= census_.size(); ++d) {
        if (census_[d - 1] < 0) throw Error("monoids", "InvalidArgument", "negative orbit count");
        total += census_[d - 1] * static_cast<long long>(d);
        base_.push_back(total);
    }
    if (total > 50000000) throw Error("monoids", "TooLarge", "Galois set has too many geometric points");
}

std::shared_ptr<FreeOrbitMonoid> FreeOrbitMonoid::affine_line(long long q, int max_degree) {
    std::vector<long long> census;
    for (int d = 1; d <= max_degree; ++d) census.push_back(irreducible_count(q, d));
    return std::make_shared<FreeOrbitMonoid>(census, "A1/F_" + std::to_string(q));
}

FreeOrbitMonoid::Point FreeOrbitMonoid::point(int id) const {
    auto it = std::upper_bound(base_.begin(), base_.end(), static_cast<long long>(id));
    int d = static_cast<int>(it - base_.begin());
    long long local = id - base_[d - 1];
    return {d, local / d, static_cast<int>(local % d)};
}

int FreeOrbitMonoid::point_id(int degree, long long orbit, int offset) const {
    if (degree < 1 || degree > max_degree()) throw Error("monoids", "TruncationExceeded", "point degree beyond census");
    return static_cast<int>(base_[degree - 1] + orbit * degree + offset);
}

std::vector<int> FreeOrbitMonoid::atom_points(const Atom& a, int level) const {
    int g = std::gcd(a.degree, level);
    std::vector<int> out;
    for (int j = a.residue; j < a.degree; j += g) out.push_back(point_id(a.degree, a.orbit, j));
    return out;
}

std::vector<std::pair<FreeOrbitMonoid::Atom, int>> FreeOrbitMonoid::atoms_of(const Element& x, int n) const {
    std::map<Atom, int> counts;
    for (int id : x) {
        Point p = point(id);
        int g = std::gcd(p.degree, n);
        counts[{p.degree, p.orbit, p.offset % g}] += 1;
    }
    std::vector<std::pair<Atom, int>> out;
    for (auto [a, c] : counts) {
        int size = a.degree / std::gcd(a.degree, n);
        if (c % size != 0) throw Error("monoids", "OutsideSupport", "element is not fixed at this level");
        out.emplace_back(a, c / size);
    }
    return out;
}

std::vector<Element> FreeOrbitMonoid::fixed_elements(int n, int grade_bound) const {
    // sigma^n-orbits of size <= bound
    std::vector<std::vector<int>> atoms;
    for (int d = 1; d <= max_degree(); ++d) {
        int g = std::gcd(d, n);
        if (d / g > grade_bound) continue;
        for (long long o = 0; o < census_[d - 1]; ++o)
            for (int r = 0; r < g; ++r) atoms.push_back(atom_points({d, o, r}, n));
    }
    std::stable_sort(atoms.begin(), atoms.end(),
                     [](const std::vector<int>& a, const std::vector<int>& b) { return a.size() < b.size(); });
    bool complete = true;
    for (int d = max_degree() + 1; d <= n * grade_bound; ++d)
        if (d / std::gcd(d, n) <= grade_bound) complete = false;
    if (!complete)
        throw Error("monoids", "TruncationExceeded",
                    "census up to degree " + std::to_string(max_degree()) + " cannot list level " + std::to_string(n) +
                        " elements of grade " + std::to_string(grade_bound));
    std::vector<Element> out;
    Element cur;
    std::function<void(std::size_t, int)> rec = [&](std::size_t start, int left) {
        Element sorted = cur;
        std::sort(sorted.begin(), sorted.end());
        out.push_back(std::move(sorted));
        for (std::size_t i = start; i < atoms.size(); ++i) {
            int sz = static_cast<int>(atoms[i].size());
            if (sz > left) break;
            cur.insert(cur.end(), atoms[i].begin(), atoms[i].end());
            rec(i, left - sz);
            cur.resize(cur.size() - atoms[i].size());
        }
    };
    rec(0, grade_bound);
    std::sort(out.begin(), out.end());
    return out;
}

Element FreeOrbitMonoid::add(const Element& x, const Element& y) const {
    Element out;
    out.reserve(x.size() + y.size());
    std::merge(x.begin(), x.end(), y.begin(), y.end(), std::back_inserter(out));
    return out;
}

Element FreeOrbitMonoid::frobenius(const Element& x) const {
    Element out;
    out.reserve(x.size());
    for (int id : x) {
        Point p = point(id);
        out.push_back(point_id(p.degree, p.orbit, (p.offset + 1) % p.degree));
    }
    std::sort(out.begin(), out.end());
    return out;
}

bool FreeOrbitMonoid::is_fixed(const Element& x, int n) const {
    Element out;
    out.reserve(x.size());
    for (int id : x) {
        Point p = point(id);
        out.push_back(point_id(p.degree, p.orbit, static_cast<int>((p.offset + n) % p.degree)));
    }
    std::sort(out.begin(), out.end());
    return out == x;
}

std::vector<std::pair<Element, Element>> FreeOrbitMonoid::add_fibers(const Element& x, int n) const {
    auto atoms = atoms_of(x, n);
    std::vector<std::vector<int>> pts;
    for (const auto& [a, c] : atoms) pts.push_back(atom_points(a, n));
    std::vector<std::pair<Element, Element>> out;
    std::vector<int> pick(atoms.size(), 0);
    while (true) {
        Element a, b;
        for (std::size_t i = 0; i < atoms.size(); ++i) {
            for (int k = 0; k < pick[i]; ++k) a.insert(a.end(), pts[i].begin(), pts[i].end());
            for (int k = pick[i]; k < atoms[i].second; ++k) b.insert(b.end(), pts[i].begin(), pts[i].end());
        }
        std::sort(a.begin(), a.end());
        std::sort(b.begin(), b.end());
        out.emplace_back(std::move(a), std::move(b));
        std::size_t i = 0;
        while (i < atoms.size() && pick[i] == atoms[i].second) pick[i++] = 0;
        if (i == atoms.size()) break;
        ++pick[i];
    }
    return out;
}

std::vector<Element> FreeOrbitMonoid::trace_fibers(const Element& x, int n, int m) const {
    // A sigma^{nm}-orbit B inside the sigma^n-orbit A traces to (m/t) A, where
    // t = gcd(d, nm)/gcd(d, n) counts the sigma^{nm}-orbits contained in A.
    auto atoms = atoms_of(x, n);
    std::vector<std::vector<Element>> per_atom;
    for (const auto& [a, k] : atoms) {
        int g = std::gcd(a.degree, n);
        int g2 = std::gcd(a.degree, n * m);
        int t = g2 / g;
        int mult = m / t;
        if (k % mult != 0) return {};
        int K = k / mult;
        std::vector<std::vector<int>> subs;
        for (int r = a.residue; r < g2; r += g) subs.push_back(atom_points({a.degree, a.orbit, r}, n * m));
        // multisets of size K drawn from the t sub-orbits
        std::vector<Element> opts;
        std::vector<int> cnt(t, 0);
        std::function<void(int, int)> rec = [&](int i, int left) {
            if (i == t - 1) {
                cnt[i] = left;
                Element e;
                for (int j = 0; j < t; ++j)
                    for (int c = 0; c < cnt[j]; ++c) e.insert(e.end(), subs[j].begin(), subs[j].end());
                opts.push_back(std::move(e));
                return;
            }
            for (int v = 0; v <= left; ++v) {
                cnt[i] = v;
                rec(i + 1, left - v);
            }
        };
        rec(0, K);
        per_atom.push_back(std::move(opts));
    }
    std::vector<Element> out{Element{}};
    for (const auto& opts : per_atom) {
        std::vector<Element> next;
        for (const auto& base : out)
            for (const auto& o : opts) {
                Element e = base;
                e.insert(e.end(), o.begin(), o.end());
                next.push_back(std::move(e));
            }
        out = std::move(next);
    }
    for (auto& e : out) std::sort(e.begin(), e.end());
    std::sort(out.begin(), out.end());
    return out;
}

nlohmann::json FreeOrbitMonoid::element_to_json(const Element& x) const {
    nlohmann::json arr = nlohmann::json::array();
    for (int id : x) {
        Point p = point(id);
        arr.push_back({p.degree, p.orbit, p.offset});
    }
    return arr;
}

// ------------------------------------------------------------------ Quiver

Quiver Quiver::loops(long long m) {
    Quiver q;
    q.vertices = 1;
    q.arrows = {{m}};
    return q;
}

void Quiver::validate() const {
    if (vertices < 1) throw Error("monoids", "InvalidQuiver", "quiver needs at least one vertex");
    if (static_cast<int>(arrows.size()) != vertices)
        throw Error("monoids", "InvalidQuiver", "arrow matrix has the wrong size");
    for (int i = 0; i < vertices; ++i) {
        if (static_cast<int>(arrows[i].size()) != vertices)
            throw Error("monoids", "InvalidQuiver", "arrow matrix has the wrong size");
        for (int j = 0; j < vertices; ++j) {
            if (arrows[i][j] < 0) throw Error("monoids", "InvalidQuiver", "negative arrow count");
            if (arrows[i][j] != arrows[j][i])
                throw Error("monoids", "NotSymmetric",
                            "arrows " + std::to_string(i) + "->" + std::to_string(j) + " and back differ");
        }
    }
}

Quiver Quiver::from_json(const nlohmann::json& j) {
    if (!j.is_object() || !j.contains("vertices") || !j["vertices"].is_number_integer())
        throw Error("monoids", "InvalidQuiver", "quiver JSON needs integer 'vertices'");
    Quiver q;
    q.vertices = j["vertices"].get<int>();
    if (q.vertices < 1 || q.vertices > 16) throw Error("monoids", "InvalidQuiver", "vertex count out of range");
    q.arrows.assign(q.vertices, std::vector<long long>(q.vertices, 0));
    for (const auto& a : j.value("arrows", nlohmann::json::array())) {
        if (!a.is_array() || a.size() != 3) throw Error("monoids", "InvalidQuiver", "arrows are [i, j, count] triples");
        int s = a[0].get<int>(), t = a[1].get<int>();
        long long c = a[2].get<long long>();
        if (s < 0 || t < 0 || s >= q.vertices || t >= q.vertices)
            throw Error("monoids", "InvalidQuiver", "arrow endpoint out of range");
        q.arrows[s][t] += c;
    }
    q.validate();
    return q;
}

nlohmann::json Quiver::to_json() const {
    nlohmann::json arr = nlohmann::json::array();
    for (int i = 0; i < vertices; ++i)
        for (int j = 0; j < vertices; ++j)
            if (arrows[i][j] != 0) arr.push_back({i, j, arrows[i][j]});
    return {{"vertices", vertices}, {"arrows", arr}};
}

// ------------------------------------------------------- LinearObjectsMonoid

LinearObjectsMonoid::LinearObjectsMonoid(Quiver q, bool vect_variant)
    : DiscreteLattice(q.vertices), quiver_(std::move(q)), vect_(vect_variant) {
    quiver_.validate();
    if (vect_ && (quiver_.vertices != 1 || quiver_.arrows[0][0] != 0))
        throw Error("monoids", "InvalidQuiver", "Vect is the one-vertex quiver without arrows");
}

std::shared_ptr<LinearObjectsMonoid> LinearObjectsMonoid::vect() {
    return std::make_shared<LinearObjectsMonoid>(Quiver::loops(0), true);
}

std::shared_ptr<LinearObjectsMonoid> LinearObjectsMonoid::symmetric_quiver(const Quiver& q) {
    return std::make_shared<LinearObjectsMonoid>(q, false);
}

std::string LinearObjectsMonoid::name() const {
    if (vect_) return "Vect";
    return "Quiver" + quiver_.to_json().dump();
}

long long LinearObjectsMonoid::arrow_pairing(const Element& a, const Element& b) const {
    long long s = 0;
    for (int i = 0; i < quiver_.vertices; ++i)
        for (int j = 0; j < quiver_.vertices; ++j) s += quiver_.arrows[i][j] * a[i] * b[j];
    return s;
}

long long LinearObjectsMonoid::euler_pairing(const Element& a, const Element& b) const {
    long long s = 0;
    for (int i = 0; i < quiver_.vertices; ++i) s += static_cast<long long>(a[i]) * b[i];
    return s - arrow_pairing(a, b);
}

ExactScalar LinearObjectsMonoid::aut_order(const Element& gamma, int n) const {
    ExactScalar out(1);
    for (int v : gamma) out *= gl_order(v, n);
    return out;
}

ExactScalar LinearObjectsMonoid::stacky_count(const Element& gamma, int n, const HalfLConvention& conv) const {
    ExactScalar out = half_L_level(n, conv).pow(euler_pairing(gamma, gamma));
    out *= q_power(static_cast<long long>(n) * arrow_pairing(gamma, gamma));
    for (int v : gamma) out *= inverse_gl_order(v, n);
    return out;
}

ExactScalar gl_order(long long n, long long level) {
    ExactScalar out = q_power(level * n * (n - 1) / 2);
    ExactScalar one(1);
    for (long long i = 1; i <= n; ++i) out *= q_power(level * i) - one;
    return out;
}

ExactScalar inverse_gl_order(long long n, long long level) {
    ExactScalar out = q_power(-level * n * (n - 1) / 2);
    for (long long i = 1; i <= n; ++i) out *= ExactScalar::inv_q_power_minus_one(level * i);
    return out;
}

CountingFunction stacky_function(const LinearPtr& m, Truncation trunc, const HalfLConvention& conv) {
    return CountingFunction::from(m, trunc, [&](const Element& g, int n) { return m->stacky_count(g, n, conv); });
}

}  // namespace stacky
