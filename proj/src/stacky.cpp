#include "stacky/stacky.hpp"

#include <algorithm>
#include <functional>
#include <numeric>
#include <set>

#include "stacky/error.hpp"
#include "stacky/linalg.hpp"
#include "stacky/parallel.hpp"

namespace stacky {

namespace {

[[noreturn]] void fail(const std::string& name, const std::string& detail) { throw Error("stacky", name, detail); }

bool is_prime(long long p) {
    if (p < 2) return false;
    for (long long d = 2; d * d <= p; ++d)
        if (p % d == 0) return false;
    return true;
}

bool is_prime_power(long long q) {
    if (q < 2) return false;
    long long p = 2;
    while (q % p != 0) ++p;
    while (q % p == 0) q /= p;
    return q == 1;
}

long long mod(long long a, long long m) { return ((a % m) + m) % m; }

long long pow_mod(long long b, long long e, long long m) {
    long long r = 1 % m;
    b = mod(b, m);
    while (e > 0) {
        if (e & 1) r = static_cast<long long>(static_cast<__int128>(r) * b % m);
        b = static_cast<long long>(static_cast<__int128>(b) * b % m);
        e >>= 1;
    }
    return r;
}

ExactScalar scalar_ll(long long v) { return ExactScalar(v); }

// Column j of the weight matrix: the character chi_j.
std::vector<long long> character(const ToricStackDatum& X, int j) {
    std::vector<long long> c;
    for (const auto& row : X.weights) c.push_back(row[j]);
    return c;
}

std::vector<long long> gerbe_char(const ToricStackDatum& X) {
    if (!X.gerbe_character.empty()) return X.gerbe_character;
    return std::vector<long long>(static_cast<std::size_t>(X.group_rank()), 1);
}

// Relations presenting X(Stab) for points with the given support.
linalg::SmithForm stabilizer(const ToricStackDatum& X, const std::vector<int>& support) {
    const int g = X.group_rank();
    linalg::IntMat rel;
    for (int j : support) rel.push_back(character(X, j));
    for (std::size_t i = 0; i < X.finite_orders.size(); ++i) {
        std::vector<long long> row(static_cast<std::size_t>(g), 0);
        row[X.torus_rank + i] = X.finite_orders[i];
        rel.push_back(row);
    }
    return linalg::smith_quotient(rel, g);
}

linalg::RatVec torus_part(const ToricStackDatum& X, int j) {
    linalg::RatVec v;
    for (int i = 0; i < X.torus_rank; ++i) v.emplace_back(static_cast<long>(X.weights[i][j]));
    return v;
}

// Supports S of the F_q-points over the origin: 0 lies outside the convex
// hull of the torus parts of chi_j, j in S.
std::vector<std::vector<int>> nullcone_supports(const ToricStackDatum& X) {
    std::vector<std::vector<int>> out;
    linalg::RatVec origin(static_cast<std::size_t>(X.torus_rank), Rat(0));
    for (int k = 0; k <= X.n; ++k)
        for (const auto& S : linalg::subsets(X.n, k)) {
            if (X.torus_rank == 0 && !S.empty()) continue;
            std::vector<linalg::RatVec> pts;
            for (int j : S) pts.push_back(torus_part(X, j));
            if (!S.empty() && linalg::in_convex_hull(origin, pts)) continue;
            out.push_back(S);
        }
    return out;
}

std::vector<int> full_support(int n) {
    std::vector<int> s(static_cast<std::size_t>(n));
    std::iota(s.begin(), s.end(), 0);
    return s;
}

ExactScalar stab_count(int free_rank, const std::vector<long long>& torsion, long long q, int level) {
    ExactScalar out = (q_power(level) - ExactScalar(1)).pow(free_rank);
    long long mq = 1;
    for (int i = 0; i < level; ++i) mq *= q;
    for (long long e : torsion) out *= scalar_ll(std::gcd(e, mq - 1));
    return out;
}

ExactScalar group_count(const ToricStackDatum& X) {
    ExactScalar out = (q_power(1) - ExactScalar(1)).pow(X.torus_rank);
    for (long long d : X.finite_orders) out *= scalar_ll(d);
    return out;
}

nlohmann::json rats_json(const std::vector<Rat>& v) {
    nlohmann::json a = nlohmann::json::array();
    for (const auto& x : v) a.push_back(to_string(x));
    return a;
}

}  // namespace

// ---------------------------------------------------------------- toric data

void ToricStackDatum::validate() const {
    if (n < 0 || torus_rank < 0) fail("SchemaViolation", "n and torusRank must be nonnegative");
    const int g = group_rank();
    if (static_cast<int>(weights.size()) != g)
        fail("SchemaViolation", "weights needs torusRank + #finiteOrders rows");
    for (const auto& row : weights)
        if (static_cast<int>(row.size()) != n) fail("SchemaViolation", "every weight row needs n entries");
    if (!is_prime_power(q)) fail("SchemaViolation", "q must be a prime power");
    for (long long d : finite_orders) {
        if (d < 1) fail("SchemaViolation", "finite orders must be positive");
        if ((q - 1) % d != 0) fail("NonSplitFiniteGroup", "mu_" + std::to_string(d) + " is not split over F_" + std::to_string(q));
    }
    if (!gerbe_character.empty() && static_cast<int>(gerbe_character.size()) != g)
        fail("SchemaViolation", "gerbeCharacter needs one entry per group factor");
    auto generic = stabilizer(*this, full_support(n));
    if (generic.free_rank != 0 || !generic.torsion.empty())
        fail("SchemaViolation", "the action has a nontrivial generic stabilizer");
    if (fiber.empty()) fail("NoBasePoint", "fiber specification is empty");
    if (fiber == "origin") return;
    if (fiber != "point") fail("SchemaViolation", "fiber must be \"origin\" or \"point\"");
    if (static_cast<int>(fiber_point.size()) != n) fail("NoBasePoint", "fiberPoint needs n coordinates");
    for (long long x : fiber_point)
        if (mod(x, q) == 0) fail("UnsupportedFiber", "fiber points need full support");
    std::vector<linalg::RatVec> gens;
    for (int j = 0; j < n; ++j) gens.push_back(torus_part(*this, j));
    for (int j = 0; j < n; ++j) {
        linalg::RatVec neg = gens[j];
        for (auto& x : neg) x = -x;
        if (!linalg::in_cone(neg, gens)) fail("UnsupportedFiber", "the orbit of the fiber point is not closed");
    }
}

ToricStackDatum ToricStackDatum::from_json(const nlohmann::json& j) {
    if (!j.is_object()) fail("SchemaViolation", "toric datum must be an object");
    ToricStackDatum X;
    try {
        X.n = j.at("n").get<int>();
        X.torus_rank = j.value("torusRank", 0);
        X.finite_orders = j.value("finiteOrders", std::vector<long long>{});
        X.weights = j.at("weights").get<std::vector<std::vector<long long>>>();
        X.q = j.at("q").get<long long>();
        if (j.contains("fiber")) {
            const auto& f = j.at("fiber");
            if (f.is_null()) X.fiber.clear();
            else X.fiber = f.get<std::string>();
        }
        X.fiber_point = j.value("fiberPoint", std::vector<long long>{});
        X.gerbe_character = j.value("gerbeCharacter", std::vector<long long>{});
    } catch (const nlohmann::json::exception& e) {
        fail("SchemaViolation", e.what());
    }
    X.validate();
    return X;
}

nlohmann::json ToricStackDatum::to_json() const {
    nlohmann::json j = {{"n", n},         {"torusRank", torus_rank}, {"finiteOrders", finite_orders},
                        {"weights", weights}, {"q", q},              {"fiber", fiber}};
    if (fiber == "point") j["fiberPoint"] = fiber_point;
    if (!gerbe_character.empty()) j["gerbeCharacter"] = gerbe_character;
    return j;
}

FBar parse_fbar(const std::string& s) {
    if (s == "one") return FBar::One;
    if (s == "gerbe") return FBar::Gerbe;
    fail("SchemaViolation", "fbar must be \"one\" or \"gerbe\"");
}

// ------------------------------------------------------------------- inertia

ExactScalar InertiaPoint::aut_order(int level) const { return stab_count(stab_free_rank, stab_torsion, q, level); }

Rat InertiaPoint::gerbe_at(int level) const { return frac_of(gerbe * Rat(level)); }

nlohmann::json InertiaPoint::to_json() const {
    return {{"orbitRep", orbit_rep},
            {"support", support},
            {"orbitCount", orbit_count.to_json()},
            {"r", r},
            {"phi", rats_json(phi)},
            {"tangentCharacters", rats_json(tangent_characters)},
            {"weight", to_string(weight)},
            {"phiOrder", phi_order},
            {"autOrder", aut_order(1).to_json()},
            {"stabilizer", {{"freeRank", stab_free_rank}, {"torsion", stab_torsion}}},
            {"gerbe", to_string(gerbe)},
            {"gerbeModified", to_string(gerbe_modified)}};
}

std::vector<InertiaPoint> inertia_points(const ToricStackDatum& X, long long r) {
    X.validate();
    if (r < 1) fail("SchemaViolation", "r must be positive");
    const int g = X.group_rank();
    const bool point = X.fiber == "point";
    std::vector<std::vector<int>> supports = point ? std::vector<std::vector<int>>{full_support(X.n)} : nullcone_supports(X);
    const auto c = gerbe_char(X);
    std::vector<InertiaPoint> out;
    for (const auto& S : supports) {
        auto stab = stabilizer(X, S);
        InertiaPoint base;
        base.q = X.q;
        base.support = S;
        base.r = r;
        base.stab_free_rank = stab.free_rank;
        base.stab_torsion = stab.torsion;
        base.orbit_rep.assign(static_cast<std::size_t>(X.n), 0);
        for (int j : S) base.orbit_rep[j] = point ? mod(X.fiber_point[j], X.q) : 1;
        if (point) {
            base.orbit_count = ExactScalar(1);
        } else {
            base.orbit_count = (q_power(1) - ExactScalar(1)).pow(static_cast<long long>(S.size())) *
                               stab_count(stab.free_rank, stab.torsion, X.q, 1) / group_count(X);
        }
        // phi <-> a in (Z/r)^g killing the relations of X(Stab)
        std::vector<long long> a(static_cast<std::size_t>(g), 0);
        while (true) {
            bool ok = true;
            for (std::size_t i = 0; i < X.finite_orders.size() && ok; ++i)
                if (X.finite_orders[i] * a[X.torus_rank + i] % r != 0) ok = false;
            for (int j : S) {
                if (!ok) break;
                long long v = 0;
                for (int i = 0; i < g; ++i) v += X.weights[i][j] * a[i];
                if (mod(v, r) != 0) ok = false;
            }
            if (ok) {
                InertiaPoint p = base;
                long long gg = r;
                for (int i = 0; i < g; ++i) {
                    p.phi.push_back(make_rat(a[i], r));
                    gg = std::gcd(gg, a[i]);
                }
                p.phi_order = r / gg;
                Rat w = Rat(-X.torus_rank);
                for (int j = 0; j < X.n; ++j) {
                    long long v = 0;
                    for (int i = 0; i < g; ++i) v += X.weights[i][j] * a[i];
                    Rat t = make_rat(mod(v, r), r);
                    if (t == 0) t = 1;
                    p.tangent_characters.push_back(t);
                    w += t;
                }
                p.weight = w;
                long long cv = 0;
                for (int i = 0; i < g; ++i) cv += c[i] * a[i];
                p.gerbe = make_rat(mod(cv, r), r);
                p.gerbe_modified = p.gerbe;
                out.push_back(std::move(p));
            }
            int i = 0;
            while (i < g && ++a[i] == r) a[i++] = 0;
            if (i == g) break;
        }
    }
    return out;
}

ExactScalar inertia_mass(const ToricStackDatum& X, long long r, FBar fbar) {
    ExactScalar sum;
    for (const auto& p : inertia_points(X, r)) {
        ExactScalar term = p.orbit_count / p.aut_order(1) * q_power(-p.weight);
        if (fbar == FBar::Gerbe) term *= root_of_unity(p.gerbe_modified);
        sum += term;
    }
    return sum;
}

SeriesT volume_series(const ToricStackDatum& X, FBar fbar, long long R) {
    X.validate();
    SeriesT s;
    s.coeffs = parallel_map<ExactScalar>(static_cast<std::size_t>(std::max(0LL, R)), [&](std::size_t i) {
        return inertia_mass(X, static_cast<long long>(i) + 1, fbar);
    });
    return s;
}

nlohmann::json VolumeResult::to_json() const {
    return {{"coefficients", series.to_json()}, {"fit", fit.to_json()}, {"volume", volume.to_json()}};
}

VolumeResult orbifold_volume(const ToricStackDatum& X, FBar fbar, long long R, long long delta_cap) {
    X.validate();
    long long delta = 1;
    for (long long d : X.finite_orders) delta = lcm_ll(delta, d);
    std::vector<std::vector<int>> supports = X.fiber == "point" ? std::vector<std::vector<int>>{full_support(X.n)} : nullcone_supports(X);
    for (const auto& S : supports)
        for (long long e : stabilizer(X, S).torsion) delta = lcm_ll(delta, e);
    const long long D = X.group_rank() + 1;
    SeriesT series;
    auto extend = [&](long long order) {
        if (order <= series.order()) return;
        long long start = series.order();
        auto more = parallel_map<ExactScalar>(static_cast<std::size_t>(order - start), [&](std::size_t i) {
            return inertia_mass(X, start + static_cast<long long>(i) + 1, fbar);
        });
        series.coeffs.insert(series.coeffs.end(), more.begin(), more.end());
    };
    while (true) {
        long long order = std::max(R, delta * D + delta + 4);
        extend(order);
        SeriesT used;
        used.coeffs.assign(series.coeffs.begin(), series.coeffs.begin() + order);
        try {
            VolumeResult res;
            res.fit = fit_rational(used, delta, D);
            res.series = used;
            res.volume = -limit_at_infinity(res.fit);
            return res;
        } catch (const Error& e) {
            if (e.name() != "NoRationalFit" || delta * 2 > delta_cap) throw;
            delta *= 2;
        }
    }
}

ExactScalar dm_inertia_sum(const ToricStackDatum& X, FBar fbar) {
    X.validate();
    if (X.torus_rank != 0) fail("SchemaViolation", "the finite inertia sum needs torusRank 0");
    long long L = 1;
    for (long long d : X.finite_orders) L = lcm_ll(L, d);
    return inertia_mass(X, L, fbar);
}

// ------------------------------------------------------------- Vect inertia

namespace {

void compositions(long long total, long long parts, std::vector<long long>& cur,
                  const std::function<void(const std::vector<long long>&)>& fn) {
    if (parts == 0) {
        if (total == 0) fn(cur);
        return;
    }
    for (long long v = 1; v <= total - (parts - 1); ++v) {
        cur.push_back(v);
        compositions(total - v, parts - 1, cur, fn);
        cur.pop_back();
    }
}

}  // namespace

ExactScalar weighted_inertia_parametrized(long long N, int level, long long r, const PlidConfig& cfg) {
    if (N < 1 || level < 1 || r < 1) fail("SchemaViolation", "N, level and r must be positive");
    half_L_level(level, cfg.conv);  // convention check
    const long long n = level;
    ExactScalar sum;
    for (long long m = 1; m <= N; ++m) {
        if (N % m != 0) continue;
        const long long M = N / m;
        ExactScalar gsum;
        for (long long d = 0; d < m; ++d)
            if (std::gcd(d, m) == 1) gsum += root_of_unity(make_rat(d, m));
        const ExactScalar sign((cfg.conv.b1 * M * M) % 2 == 0 ? 1 : -1);
        for (long long s = 1; s <= M; ++s) {
            long long cnt = delta_count({m, s}, r, cfg.mode);
            if (cnt == 0) continue;
            ExactScalar ysum;
            std::vector<long long> cur;
            compositions(M, s, cur, [&](const std::vector<long long>& y) {
                long long sq = 0;
                for (long long v : y) sq += v * v;
                ExactScalar t = q_power(make_rat(n * (N * N + m * sq), 2));
                for (long long v : y) t *= inverse_gl_order(v, n * m);
                ysum += t;
            });
            sum += ExactScalar(make_rat(cnt, m * s)) * sign * gsum * ysum;
        }
    }
    return (q_power(n) - ExactScalar(1)) * sum;
}

namespace {

using Mat = std::vector<long long>;  // row-major N x N over F_p

Mat mat_mul(const Mat& a, const Mat& b, int N, long long p) {
    Mat c(static_cast<std::size_t>(N * N), 0);
    for (int i = 0; i < N; ++i)
        for (int k = 0; k < N; ++k) {
            long long x = a[i * N + k];
            if (x == 0) continue;
            for (int j = 0; j < N; ++j) c[i * N + j] = (c[i * N + j] + x * b[k * N + j]) % p;
        }
    return c;
}

// Rank of a rows x cols matrix over F_p.
int rank_mod(std::vector<long long> a, int rows, int cols, long long p) {
    int rk = 0;
    for (int c = 0; c < cols && rk < rows; ++c) {
        int piv = -1;
        for (int i = rk; i < rows; ++i)
            if (a[i * cols + c] != 0) {
                piv = i;
                break;
            }
        if (piv < 0) continue;
        for (int j = 0; j < cols; ++j) std::swap(a[rk * cols + j], a[piv * cols + j]);
        long long inv = pow_mod(a[rk * cols + c], p - 2, p);
        for (int j = 0; j < cols; ++j) a[rk * cols + j] = a[rk * cols + j] * inv % p;
        for (int i = 0; i < rows; ++i) {
            if (i == rk || a[i * cols + c] == 0) continue;
            long long f = a[i * cols + c];
            for (int j = 0; j < cols; ++j) a[i * cols + j] = mod(a[i * cols + j] - f * a[rk * cols + j], p);
        }
        ++rk;
    }
    return rk;
}

std::optional<Mat> inverse_mod(const Mat& g, int N, long long p) {
    std::vector<long long> a(static_cast<std::size_t>(N * 2 * N), 0);
    for (int i = 0; i < N; ++i) {
        for (int j = 0; j < N; ++j) a[i * 2 * N + j] = g[i * N + j];
        a[i * 2 * N + N + i] = 1;
    }
    const int W = 2 * N;
    for (int c = 0; c < N; ++c) {
        int piv = -1;
        for (int i = c; i < N; ++i)
            if (a[i * W + c] != 0) {
                piv = i;
                break;
            }
        if (piv < 0) return std::nullopt;
        for (int j = 0; j < W; ++j) std::swap(a[c * W + j], a[piv * W + j]);
        long long inv = pow_mod(a[c * W + c], p - 2, p);
        for (int j = 0; j < W; ++j) a[c * W + j] = a[c * W + j] * inv % p;
        for (int i = 0; i < N; ++i) {
            if (i == c || a[i * W + c] == 0) continue;
            long long f = a[i * W + c];
            for (int j = 0; j < W; ++j) a[i * W + j] = mod(a[i * W + j] - f * a[c * W + j], p);
        }
    }
    Mat out(static_cast<std::size_t>(N * N));
    for (int i = 0; i < N; ++i)
        for (int j = 0; j < N; ++j) out[i * N + j] = a[i * W + N + j];
    return out;
}

// Scale so that the first nonzero entry is 1: the canonical lift to GL_N.
Mat normalize(Mat g, long long p) {
    for (long long x : g)
        if (x != 0) {
            long long inv = pow_mod(x, p - 2, p);
            for (auto& y : g) y = y * inv % p;
            break;
        }
    return g;
}

long long primitive_root(long long p) {
    std::vector<long long> fac;
    long long m = p - 1;
    for (long long d = 2; d * d <= m; ++d)
        if (m % d == 0) {
            fac.push_back(d);
            while (m % d == 0) m /= d;
        }
    if (m > 1) fac.push_back(m);
    for (long long g = 1; g < p; ++g) {
        bool ok = true;
        for (long long f : fac)
            if (pow_mod(g, (p - 1) / f, p) == 1) ok = false;
        if (ok) return g;
    }
    return 1;
}

}  // namespace

nlohmann::json BruteForceResult::to_json() const {
    nlohmann::json cls = nlohmann::json::array();
    for (const auto& c : classes)
        cls.push_back({{"representative", c.representative},
                       {"centralizerOrder", c.centralizer_order},
                       {"centralizerDim", c.centralizer_dim},
                       {"gerbe", to_string(c.gerbe)},
                       {"gerbeOrder", c.gerbe_order}});
    return {{"coefficient", coefficient.to_json()}, {"classes", cls}, {"groupOrder", group_order}};
}

BruteForceResult weighted_inertia_bruteforce(long long N, long long p, long long r, const PlidConfig& cfg,
                                             long long max_group) {
    if (N < 1 || r < 1) fail("SchemaViolation", "N and r must be positive");
    if (!is_prime(p)) fail("UnsupportedAutGroup", "brute force enumerates PGL_N over prime fields only");
    if ((p - 1) % r != 0) fail("UnsupportedAutGroup", "brute force needs r | p - 1");
    half_L_level(1, cfg.conv);
    // |PGL_N(F_p)| = p^{N(N-1)/2} prod_{i=2}^{N} (p^i - 1)
    __int128 order = 1;
    for (long long i = 0; i < N * (N - 1) / 2; ++i) {
        order *= p;
        if (order > max_group) fail("BruteForceTooLarge", "|PGL_N(F_p)| exceeds the enumeration bound");
    }
    for (long long i = 2; i <= N; ++i) {
        __int128 pi = 1;
        for (long long k = 0; k < i; ++k) pi *= p;
        order *= pi - 1;
        if (order > max_group) fail("BruteForceTooLarge", "|PGL_N(F_p)| exceeds the enumeration bound");
    }
    const int n = static_cast<int>(N);
    const int NN = n * n;
    // normalized invertible matrices, one per element of PGL_N(F_p)
    std::vector<Mat> group;
    {
        Mat g(static_cast<std::size_t>(NN), 0);
        long long total = 1;
        for (int i = 0; i < NN; ++i) total *= p;
        for (long long code = 0; code < total; ++code) {
            long long c = code;
            for (int i = 0; i < NN; ++i) {
                g[i] = c % p;
                c /= p;
            }
            long long first = 0;
            for (long long x : g)
                if (x != 0) {
                    first = x;
                    break;
                }
            if (first != 1) continue;
            if (rank_mod(g, n, n, p) == n) group.push_back(g);
        }
    }
    std::sort(group.begin(), group.end());
    BruteForceResult res;
    res.group_order = static_cast<long long>(group.size());
    const long long gen = primitive_root(p);
    std::vector<long long> dlog(static_cast<std::size_t>(p), -1);
    for (long long k = 0, x = 1; k < p - 1; ++k, x = x * gen % p) dlog[x] = k;
    std::vector<Mat> inverses;
    for (const auto& h : group) inverses.push_back(*inverse_mod(h, n, p));

    std::set<Mat> seen;
    for (const auto& g : group) {
        if (seen.count(g)) continue;
        Mat pw(static_cast<std::size_t>(NN), 0);
        for (int i = 0; i < n; ++i) pw[i * n + i] = 1;
        for (long long k = 0; k < r; ++k) pw = mat_mul(pw, g, n, p);
        long long t = pw[0];
        bool scalar = t != 0;
        for (int i = 0; i < n && scalar; ++i)
            for (int j = 0; j < n; ++j)
                if (pw[i * n + j] != (i == j ? t : 0)) {
                    scalar = false;
                    break;
                }
        // conjugacy orbit, recorded whether or not g qualifies
        std::set<Mat> orbit;
        for (std::size_t h = 0; h < group.size(); ++h)
            orbit.insert(normalize(mat_mul(mat_mul(group[h], g, n, p), inverses[h], n, p), p));
        seen.insert(orbit.begin(), orbit.end());
        if (!scalar) continue;
        BruteForceClass cls;
        cls.representative = g;
        cls.centralizer_order = res.group_order / static_cast<long long>(orbit.size());
        // centralizer dimension: kernel of X -> gX - Xg
        std::vector<long long> ad(static_cast<std::size_t>(NN * NN), 0);
        for (int col = 0; col < NN; ++col) {
            Mat e(static_cast<std::size_t>(NN), 0);
            e[col] = 1;
            Mat a = mat_mul(g, e, n, p), b = mat_mul(e, g, n, p);
            for (int row = 0; row < NN; ++row) ad[row * NN + col] = mod(a[row] - b[row], p);
        }
        cls.centralizer_dim = NN - rank_mod(ad, NN, NN, p);
        cls.gerbe = frac_of(make_rat(-dlog[t], r));
        cls.gerbe_order = to_ll(cls.gerbe.get_den());
        if ((N * N) % (cls.gerbe_order * cls.gerbe_order) != 0)
            fail("GerbeOrderViolation", "gerbe order squared does not divide (x, x)");
        res.classes.push_back(cls);
    }
    ExactScalar sum;
    const ExactScalar qp(static_cast<long>(p));
    for (const auto& cls : res.classes) {
        long long o = cls.gerbe_order;
        ExactScalar sign((cfg.conv.b1 * (N * N / (o * o))) % 2 == 0 ? 1 : -1);
        // N^2 + c is even: c is a sum of squared eigenvalue multiplicities
        ExactScalar val = qp.pow((N * N + cls.centralizer_dim) / 2);
        sum += root_of_unity(cls.gerbe) * sign * val / ExactScalar(cls.centralizer_order);
    }
    res.coefficient = sum;
    return res;
}

long long weighted_inertia_period(long long N, DeltaMode mode) {
    long long delta = 1;
    for (long long m = 1; m <= N; ++m) {
        if (N % m != 0) continue;
        for (long long s = 1; s <= N / m; ++s) delta = lcm_ll(delta, delta_period({m, s}, mode));
    }
    return delta;
}

SeriesT weighted_inertia_series(long long N, int level, long long R, InertiaPath path, const PlidConfig& cfg,
                                long long p) {
    SeriesT s;
    if (path == InertiaPath::BruteForce) {
        if (level != 1) fail("UnsupportedAutGroup", "brute force runs at level 1 only");
        for (long long r = 1; r <= R; ++r) s.coeffs.push_back(weighted_inertia_bruteforce(N, p, r, cfg).coefficient);
        return s;
    }
    s.coeffs = parallel_map<ExactScalar>(static_cast<std::size_t>(std::max(0LL, R)), [&](std::size_t i) {
        return weighted_inertia_parametrized(N, level, static_cast<long long>(i) + 1, cfg);
    });
    return s;
}

VolumeElem bps_counting_function(long long N, int levels, const PlidConfig& cfg) {
    VolumeElem out;
    out.levels.assign(static_cast<std::size_t>(std::max(0, levels)), ExactScalar());
    if (N == 0) return out;
    const long long delta = weighted_inertia_period(N, cfg.mode);
    const long long D = N;
    const long long R = delta * D + delta + 4;
    for (int n = 1; n <= levels; ++n) {
        SeriesT s = weighted_inertia_series(N, n, R, InertiaPath::Parametrized, cfg);
        ExactScalar lim = limit_at_infinity(fit_rational(s, delta, D));
        ExactScalar sign((cfg.conv.b2 * N * N) % 2 == 0 ? 1 : -1);
        out.levels[n - 1] = -sign * half_L_level(n, cfg.conv).pow(-N * N - 1) * lim;
    }
    return out;
}

nlohmann::json PlidReport::to_json() const {
    nlohmann::json es = nlohmann::json::array();
    for (const auto& e : entries)
        es.push_back({{"grade", e.grade},
                      {"level", e.level},
                      {"lhs", e.lhs.to_json()},
                      {"rhsPleth", e.rhs_pleth.to_json()},
                      {"rhsDirect", e.rhs_direct.to_json()},
                      {"diffPleth", e.diff_pleth.to_json()},
                      {"diffDirect", e.diff_direct.to_json()}});
    return {{"entries", es}, {"exactZero", exact_zero}};
}

PlidReport plid_residual(int grade_bound, int level_bound, const PlidConfig& cfg) {
    if (grade_bound < 1 || level_bound < 1) fail("SchemaViolation", "bounds must be positive");
    LinearPtr vect = LinearObjectsMonoid::vect();
    Truncation trunc{grade_bound, grade_bound * level_bound};
    CountingFunction F = stacky_function(vect, trunc, cfg.conv);
    CountingFunction lp = pleth_log(F);
    CountingFunction ld = log_direct(F);
    std::vector<VolumeElem> bps = parallel_map<VolumeElem>(static_cast<std::size_t>(grade_bound), [&](std::size_t i) {
        return bps_counting_function(static_cast<long long>(i) + 1, level_bound, cfg);
    });
    PlidReport rep;
    for (int N = 1; N <= grade_bound; ++N)
        for (int n = 1; n <= level_bound; ++n) {
            PlidEntry e;
            e.grade = N;
            e.level = n;
            ExactScalar h = half_L_level(n, cfg.conv);
            e.lhs = bps[N - 1].at(n) / (h - h.inverse());
            e.rhs_pleth = lp.value({N}, n);
            e.rhs_direct = ld.value({N}, n);
            e.diff_pleth = e.lhs - e.rhs_pleth;
            e.diff_direct = e.lhs - e.rhs_direct;
            if (!e.diff_pleth.is_zero() || !e.diff_direct.is_zero()) rep.exact_zero = false;
            rep.entries.push_back(std::move(e));
        }
    return rep;
}

// --------------------------------------------------------------- quiver BPS

nlohmann::json QuiverBPSResult::to_json() const {
    nlohmann::json table = nlohmann::json::array();
    for (const auto& [gamma, v] : omega) {
        VolumeElem shown;
        for (int n = 1; n <= std::min<long long>(level_bound, v.truncation()); ++n) shown.levels.push_back(v.at(n));
        table.push_back({{"gamma", gamma}, {"omega", shown.to_json()}});
    }
    return {{"quiver", quiver.to_json()},
            {"gammaBound", gamma_bound},
            {"levelBound", level_bound},
            {"halfL", {conv.b1, conv.b2}},
            {"omega", table}};
}

QuiverBPSResult quiver_bps(const Quiver& Q, int gamma_bound, int level_bound, const HalfLConvention& conv) {
    Q.validate();
    if (gamma_bound < 1 || level_bound < 1) fail("SchemaViolation", "bounds must be positive");
    LinearPtr mon = LinearObjectsMonoid::symmetric_quiver(Q);
    Truncation trunc{gamma_bound, gamma_bound * level_bound};
    CountingFunction L = pleth_log(stacky_function(mon, trunc, conv));
    QuiverBPSResult res;
    res.quiver = Q;
    res.gamma_bound = gamma_bound;
    res.level_bound = level_bound;
    res.conv = conv;
    for (const auto& gamma : mon->fixed_elements(1, gamma_bound)) {
        const int g = mon->grade(gamma);
        if (g == 0) continue;
        VolumeElem v;
        for (int n = 1; n * g <= trunc.weight; ++n) {
            ExactScalar h = half_L_level(n, conv);
            v.levels.push_back(L.value(gamma, n) * (h - h.inverse()));
        }
        res.omega[gamma] = v;
    }
    return res;
}

bool quiver_sym_round_trip(const QuiverBPSResult& res) {
    LinearPtr mon = LinearObjectsMonoid::symmetric_quiver(res.quiver);
    Truncation trunc{res.gamma_bound, res.gamma_bound * res.level_bound};
    CountingFunction f = CountingFunction::from(mon, trunc, [&](const Element& gamma, int n) {
        auto it = res.omega.find(gamma);
        if (it == res.omega.end()) return ExactScalar();
        ExactScalar h = half_L_level(n, res.conv);
        return it->second.at(n) / (h - h.inverse());
    });
    return pleth_sym(f) == stacky_function(mon, trunc, res.conv);
}

IntegralityCheck quiver_integrality(const QuiverBPSResult& res) {
    IntegralityCheck out;
    LinearPtr mon = LinearObjectsMonoid::symmetric_quiver(res.quiver);
    for (const auto& [gamma, v] : res.omega) {
        long long parity = mod(mon->euler_pairing(gamma, gamma) + 1, 2);
        std::optional<ExactScalar> first;
        for (int n = 1; n <= std::min<long long>(res.level_bound, v.truncation()); ++n) {
            ExactScalar p = v.at(n) * half_L_level(n, res.conv).pow(-parity);
            auto terms = p.rational_terms();
            if (!terms) {
                out.integral = false;
                continue;
            }
            for (const auto& [e, c] : *terms) {
                if (c.get_den() != 1 || e.get_den() != 1 || e.get_num() % n != 0) out.integral = false;
                if (c < 0) out.positive = false;
            }
            if (!first) first = p;
            else if (first->dilate_q(n) != p) out.level_compatible = false;
        }
    }
    return out;
}

}  // namespace stacky
