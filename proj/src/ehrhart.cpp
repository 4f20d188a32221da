#include "stacky/ehrhart.hpp"

#include <algorithm>
#include <set>

#include "stacky/error.hpp"
#include "stacky/parallel.hpp"

namespace stacky {

using linalg::RatMat;
using linalg::RatVec;

namespace {

Rat rat_from_json(const nlohmann::json& j) {
    if (j.is_number_integer()) return Rat(static_cast<long>(j.get<long long>()));
    if (j.is_string()) return parse_rat(j.get<std::string>());
    throw Error("ehrhart", "SchemaViolation", "expected an integer or a \"p/q\" string");
}

RatVec vec_from_json(const nlohmann::json& j) {
    if (!j.is_array()) throw Error("ehrhart", "SchemaViolation", "expected an array");
    RatVec v;
    for (const auto& e : j) v.push_back(rat_from_json(e));
    return v;
}

nlohmann::json vec_to_json(const RatVec& v) {
    auto a = nlohmann::json::array();
    for (const auto& x : v) a.push_back(to_string(x));
    return a;
}

bool satisfies(const RatMat& A, const RatVec& b, const RatVec& x) {
    for (std::size_t i = 0; i < A.size(); ++i)
        if (linalg::dot(A[i], x) < b[i]) return false;
    return true;
}

// Vertices of {A x >= b} for A of full column rank cols.
std::vector<RatVec> vertices_full_rank(const RatMat& A, const RatVec& b, int cols) {
    std::set<RatVec> found;
    if (cols == 0) {
        for (const auto& v : b)
            if (v > 0) return {};
        return {RatVec{}};
    }
    for (const auto& sub : linalg::subsets(static_cast<int>(A.size()), cols)) {
        RatMat M;
        RatVec rhs;
        for (int i : sub) {
            M.push_back(A[i]);
            rhs.push_back(b[i]);
        }
        auto x = linalg::solve_unique(M, rhs);
        if (x && satisfies(A, b, *x)) found.insert(*x);
    }
    return {found.begin(), found.end()};
}

bool feasible(const RatMat& A, const RatVec& b, int cols) {
    int rk = linalg::rank(A);
    if (rk == cols) return !vertices_full_rank(A, b, cols).empty();
    // x = B^T z over a basis B of the row space keeps A x unchanged
    std::vector<int> rows = linalg::independent_rows(A);
    RatMat Ar(A.size(), RatVec(rows.size()));
    for (std::size_t i = 0; i < A.size(); ++i)
        for (std::size_t c = 0; c < rows.size(); ++c) Ar[i][c] = linalg::dot(A[i], A[rows[c]]);
    return !vertices_full_rank(Ar, b, rk).empty();
}

RatVec normalized(RatVec n) {
    for (const auto& x : n)
        if (x != 0) {
            Rat s = abs(x);
            for (auto& y : n) y /= s;
            break;
        }
    return n;
}

Rat ceil_of(const Rat& x) { return Rat(-floor_of(-x)); }

}  // namespace

RationalPolytope RationalPolytope::from_hrep(RatMat A, RatVec b) {
    if (A.empty()) throw Error("ehrhart", "Unbounded", "no inequalities");
    if (A.size() != b.size()) throw Error("ehrhart", "SchemaViolation", "A and b have different lengths");
    const int d = static_cast<int>(A[0].size());
    for (const auto& row : A)
        if (static_cast<int>(row.size()) != d) throw Error("ehrhart", "SchemaViolation", "ragged matrix A");
    RationalPolytope P;
    P.dim_ = d;
    P.A_ = std::move(A);
    P.b_ = std::move(b);
    if (linalg::rank(P.A_) < d) {
        if (feasible(P.A_, P.b_, d))
            throw Error("ehrhart", "Unbounded", "the inequalities leave a lineality direction");
        return P;
    }
    P.vertices_ = vertices_full_rank(P.A_, P.b_, d);
    if (P.vertices_.empty()) return P;
    // extreme rays of the recession cone {A y >= 0} have d-1 independent tight rows
    for (const auto& sub : linalg::subsets(static_cast<int>(P.A_.size()), d - 1)) {
        RatMat M;
        for (int i : sub) M.push_back(P.A_[i]);
        auto ker = linalg::kernel(M, d);
        if (ker.size() != 1) continue;
        for (int sign : {1, -1}) {
            RatVec y = ker[0];
            for (auto& v : y) v *= sign;
            if (satisfies(P.A_, RatVec(P.A_.size(), Rat(0)), y))
                throw Error("ehrhart", "Unbounded", "recession direction found");
        }
    }
    P.lo_ = P.vertices_[0];
    P.hi_ = P.vertices_[0];
    for (const auto& v : P.vertices_)
        for (int i = 0; i < d; ++i) {
            if (v[i] < P.lo_[i]) P.lo_[i] = v[i];
            if (v[i] > P.hi_[i]) P.hi_[i] = v[i];
        }
    return P;
}

RationalPolytope RationalPolytope::from_vertices(const std::vector<RatVec>& input) {
    if (input.empty()) throw Error("ehrhart", "SchemaViolation", "empty vertex list");
    std::set<RatVec> uniq(input.begin(), input.end());
    std::vector<RatVec> pts(uniq.begin(), uniq.end());
    const int d = static_cast<int>(pts[0].size());
    for (const auto& p : pts)
        if (static_cast<int>(p.size()) != d) throw Error("ehrhart", "SchemaViolation", "ragged vertex list");
    const int n = static_cast<int>(pts.size());
    RatMat diffs;
    for (int i = 1; i < n; ++i) {
        RatVec u(static_cast<std::size_t>(d));
        for (int c = 0; c < d; ++c) u[c] = pts[i][c] - pts[0][c];
        diffs.push_back(u);
    }
    RatMat L;
    for (int i : linalg::independent_rows(diffs)) L.push_back(diffs[i]);
    const int e = static_cast<int>(L.size());

    std::set<std::pair<RatVec, Rat>> rows;
    for (const auto& nrm : linalg::kernel(L, d)) {
        RatVec nn = normalized(nrm);
        Rat t = linalg::dot(nn, pts[0]);
        rows.insert({nn, t});
        RatVec neg = nn;
        for (auto& x : neg) x = -x;
        rows.insert({neg, -t});
    }
    if (e >= 1) {
        for (const auto& sub : linalg::subsets(n, e)) {
            RatMat M;
            for (int i = 1; i < e; ++i) {
                RatVec u(static_cast<std::size_t>(d));
                for (int c = 0; c < d; ++c) u[c] = pts[sub[i]][c] - pts[sub[0]][c];
                RatVec row(static_cast<std::size_t>(e));
                for (int j = 0; j < e; ++j) row[j] = linalg::dot(L[j], u);
                M.push_back(row);
            }
            auto ker = linalg::kernel(M, e);
            if (ker.size() != 1) continue;
            RatVec nrm(static_cast<std::size_t>(d), Rat(0));
            for (int j = 0; j < e; ++j)
                for (int c = 0; c < d; ++c) nrm[c] += ker[0][j] * L[j][c];
            Rat t = linalg::dot(nrm, pts[sub[0]]);
            bool pos = true, neg = true;
            for (const auto& p : pts) {
                Rat v = linalg::dot(nrm, p) - t;
                if (v < 0) pos = false;
                if (v > 0) neg = false;
            }
            if (pos == neg) continue;
            if (neg) {
                for (auto& x : nrm) x = -x;
                t = -t;
            }
            Rat s = 0;
            for (const auto& x : nrm)
                if (x != 0) {
                    s = abs(x);
                    break;
                }
            for (auto& x : nrm) x /= s;
            rows.insert({nrm, t / s});
        }
    }
    RatMat A;
    RatVec b;
    for (const auto& [a, t] : rows) {
        A.push_back(a);
        b.push_back(t);
    }
    RationalPolytope P;
    P.dim_ = d;
    P.A_ = std::move(A);
    P.b_ = std::move(b);
    if (P.A_.empty()) {
        // d = 0: the single point of R^0
        P.vertices_ = pts;
    } else {
        for (int i = 0; i < n; ++i) {
            std::vector<RatVec> others;
            for (int j = 0; j < n; ++j)
                if (j != i) others.push_back(pts[j]);
            if (!linalg::in_convex_hull(pts[i], others)) P.vertices_.push_back(pts[i]);
        }
    }
    P.vrep_ = pts;
    P.lo_ = pts[0];
    P.hi_ = pts[0];
    for (const auto& v : pts)
        for (int i = 0; i < d; ++i) {
            if (v[i] < P.lo_[i]) P.lo_[i] = v[i];
            if (v[i] > P.hi_[i]) P.hi_[i] = v[i];
        }
    return P;
}

RationalPolytope RationalPolytope::from_json(const nlohmann::json& j) {
    if (!j.is_object()) throw Error("ehrhart", "SchemaViolation", "polytope must be an object");
    if (j.contains("vertices")) {
        std::vector<RatVec> pts;
        for (const auto& v : j.at("vertices")) pts.push_back(vec_from_json(v));
        return from_vertices(pts);
    }
    if (j.contains("A") && j.contains("b")) {
        RatMat A;
        for (const auto& row : j.at("A")) A.push_back(vec_from_json(row));
        return from_hrep(std::move(A), vec_from_json(j.at("b")));
    }
    throw Error("ehrhart", "SchemaViolation", "polytope needs {A, b} or {vertices}");
}

bool RationalPolytope::contains(const RatVec& x) const {
    if (empty()) return false;
    return satisfies(A_, b_, x);
}

long long RationalPolytope::vertex_denominator() const {
    long long l = 1;
    for (const auto& v : vertices_)
        for (const auto& x : v) l = lcm_ll(l, to_ll(BigInt(x.get_den())));
    return l;
}

nlohmann::json RationalPolytope::to_json() const {
    nlohmann::json j;
    j["dimension"] = dim_;
    auto A = nlohmann::json::array();
    for (const auto& row : A_) A.push_back(vec_to_json(row));
    j["A"] = A;
    j["b"] = vec_to_json(b_);
    auto V = nlohmann::json::array();
    for (const auto& v : vertices_) V.push_back(vec_to_json(v));
    j["vertices"] = V;
    return j;
}

long long count_dilation(const RationalPolytope& P, long long r) {
    if (r < 1) throw Error("ehrhart", "SchemaViolation", "dilation must be positive");
    if (P.empty()) return 0;
    const int d = P.dimension();
    if (d == 0) return 1;
    // clear denominators row by row: a . z >= r * c with z = r x integral
    std::vector<std::vector<long long>> a;
    std::vector<long long> c;
    for (std::size_t i = 0; i < P.A().size(); ++i) {
        BigInt l = P.b()[i].get_den();
        for (const auto& x : P.A()[i]) l = lcm(l, BigInt(x.get_den()));
        std::vector<long long> row;
        for (const auto& x : P.A()[i]) row.push_back(to_ll(BigInt(x * Rat(l))));
        a.push_back(row);
        c.push_back(to_ll(BigInt(P.b()[i] * Rat(l))) * r);
    }
    std::vector<long long> lo(static_cast<std::size_t>(d)), hi(static_cast<std::size_t>(d));
    for (int i = 0; i < d; ++i) {
        lo[i] = to_ll(BigInt(ceil_of(P.box_lo()[i] * Rat(static_cast<long>(r)))));
        hi[i] = to_ll(floor_of(P.box_hi()[i] * Rat(static_cast<long>(r))));
    }
    const std::size_t m = a.size();
    std::vector<long long> z(static_cast<std::size_t>(d));
    std::vector<long long> partial(m, 0);  // sum over fixed coordinates
    long long total = 0;
    auto floor_div = [](long long p, long long q) {
        long long t = p / q;
        if ((p % q != 0) && ((p < 0) != (q < 0))) --t;
        return t;
    };
    auto rec = [&](auto&& self, int k) -> void {
        if (k == d - 1) {
            long long zl = lo[k], zh = hi[k];
            for (std::size_t i = 0; i < m && zl <= zh; ++i) {
                long long rhs = c[i] - partial[i];
                long long ak = a[i][k];
                if (ak > 0) {
                    zl = std::max(zl, -floor_div(-rhs, ak));
                } else if (ak < 0) {
                    zh = std::min(zh, floor_div(-rhs, -ak));
                } else if (rhs > 0) {
                    zh = zl - 1;
                }
            }
            if (zh >= zl) total += zh - zl + 1;
            return;
        }
        for (long long v = lo[k]; v <= hi[k]; ++v) {
            for (std::size_t i = 0; i < m; ++i) partial[i] += a[i][k] * v;
            self(self, k + 1);
            for (std::size_t i = 0; i < m; ++i) partial[i] -= a[i][k] * v;
        }
    };
    rec(rec, 0);
    return total;
}

long long count_dilation_vrep(const RationalPolytope& P, long long r) {
    if (P.empty()) return 0;
    const int d = P.dimension();
    const std::vector<RatVec>& pts = P.vertices();
    std::vector<long long> lo(static_cast<std::size_t>(d)), hi(static_cast<std::size_t>(d));
    for (int i = 0; i < d; ++i) {
        lo[i] = to_ll(BigInt(ceil_of(P.box_lo()[i] * Rat(static_cast<long>(r)))));
        hi[i] = to_ll(floor_of(P.box_hi()[i] * Rat(static_cast<long>(r))));
    }
    long long total = 0;
    RatVec x(static_cast<std::size_t>(d));
    auto rec = [&](auto&& self, int k) -> void {
        if (k == d) {
            if (linalg::in_convex_hull(x, pts)) ++total;
            return;
        }
        for (long long v = lo[k]; v <= hi[k]; ++v) {
            x[k] = make_rat(v, r);
            self(self, k + 1);
        }
    };
    rec(rec, 0);
    return total;
}

SeriesT ehrhart_series(const RationalPolytope& P, long long R) {
    auto counts = parallel_map<long long>(static_cast<std::size_t>(R),
                                          [&](std::size_t i) { return count_dilation(P, static_cast<long long>(i) + 1); });
    SeriesT s;
    for (long long c : counts) s.coeffs.emplace_back(c);
    return s;
}

RationalFunctionFit ehrhart_fit(const RationalPolytope& P, long long R) {
    long long delta = P.vertex_denominator();
    long long D = P.dimension() + 1;
    if (R <= 0) R = delta * D + delta + 4;
    return fit_rational(ehrhart_series(P, R), delta, D);
}

ExactScalar ehrhart_limit(const RationalPolytope& P, long long R) { return limit_at_infinity(ehrhart_fit(P, R)); }

RationalPolytope fiber_polytope(const std::vector<std::vector<long long>>& weights, const RatVec& vals) {
    if (weights.empty()) throw Error("ehrhart", "SchemaViolation", "empty weight matrix");
    const std::size_t k = weights.size();
    const std::size_t n = weights[0].size();
    if (vals.size() != n) throw Error("ehrhart", "SchemaViolation", "vals must have one entry per weight column");
    RatMat A(n, RatVec(k));
    RatVec b(n);
    for (std::size_t j = 0; j < n; ++j) {
        for (std::size_t i = 0; i < k; ++i) A[j][i] = Rat(static_cast<long>(weights[i].at(j)));
        b[j] = -vals[j];
    }
    return RationalPolytope::from_hrep(std::move(A), std::move(b));
}

DeltaMode parse_delta_mode(const std::string& s) {
    if (s == "differences") return DeltaMode::Differences;
    if (s == "orbits") return DeltaMode::Orbits;
    if (s == "lattice") return DeltaMode::Lattice;
    throw Error("ehrhart", "SchemaViolation", "delta mode must be differences, orbits or lattice");
}

std::string to_string(DeltaMode mode) {
    switch (mode) {
        case DeltaMode::Differences: return "differences";
        case DeltaMode::Orbits: return "orbits";
        default: return "lattice";
    }
}

long long delta_count(const DeltaRegion& region, long long r, DeltaMode mode) {
    const long long m = region.m, s = region.s;
    if (m < 1 || s < 1 || r < 1) throw Error("ehrhart", "SchemaViolation", "m, s and r must be positive");
    if (mode == DeltaMode::Lattice && r % m != 0) return 0;
    if (mode != DeltaMode::Orbits) {
        // tuples of s-1 positive integers e_i with m * sum e_i < r
        const long long K = (r - 1) / m;
        std::vector<long long> ways(static_cast<std::size_t>(K + 1), 0);
        ways[0] = 1;
        for (long long i = 0; i < s - 1; ++i) {
            std::vector<long long> next(static_cast<std::size_t>(K + 1), 0);
            for (long long t = 0; t <= K; ++t)
                if (ways[t])
                    for (long long e = 1; t + e <= K; ++e) next[t + e] += ways[t];
            ways = std::move(next);
        }
        long long total = 0;
        for (long long w : ways) total += w;
        return total;
    }
    if (r % m != 0) return 0;
    // weights a/r with 1 <= a <= R = r/m; translation acts as rotation of Z/R
    const long long R = r / m;
    if (s > R) return 0;
    long long orbits = 0;
    for (const auto& sub : linalg::subsets(static_cast<int>(R), static_cast<int>(s))) {
        bool minimal = true;
        std::vector<int> rot(sub.size());
        for (long long c = 1; c < R && minimal; ++c) {
            for (std::size_t i = 0; i < sub.size(); ++i) rot[i] = static_cast<int>((sub[i] + c) % R);
            std::sort(rot.begin(), rot.end());
            if (rot < sub) minimal = false;
        }
        if (minimal) ++orbits;
    }
    return orbits;
}

long long delta_period(const DeltaRegion& region, DeltaMode mode) {
    return mode == DeltaMode::Orbits ? region.m * region.s : region.m;
}

SeriesT delta_series(const DeltaRegion& region, DeltaMode mode, long long R) {
    auto counts = parallel_map<long long>(static_cast<std::size_t>(R), [&](std::size_t i) {
        return delta_count(region, static_cast<long long>(i) + 1, mode);
    });
    SeriesT s;
    for (long long c : counts) s.coeffs.emplace_back(c);
    return s;
}

RationalFunctionFit delta_fit(const DeltaRegion& region, DeltaMode mode, long long R) {
    long long delta = delta_period(region, mode);
    long long D = region.s;
    if (R <= 0) R = delta * D + delta + 4;
    return fit_rational(delta_series(region, mode, R), delta, D);
}

ExactScalar delta_limit(const DeltaRegion& region, DeltaMode mode, long long R) {
    return limit_at_infinity(delta_fit(region, mode, R));
}

}  // namespace stacky
