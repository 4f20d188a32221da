#include "stacky/cyclotomic.hpp"

#include <cmath>
#include <map>
#include <memory>
#include <mutex>
#include <numbers>

#include "stacky/error.hpp"

namespace stacky::cyc {

long long euler_phi(long long n) {
    long long out = n;
    for (long long p : prime_factors(n)) out = out / p * (p - 1);
    return out;
}

std::vector<long long> divisors(long long n) {
    std::vector<long long> lo, hi;
    for (long long d = 1; d * d <= n; ++d)
        if (n % d == 0) {
            lo.push_back(d);
            if (d * d != n) hi.push_back(n / d);
        }
    lo.insert(lo.end(), hi.rbegin(), hi.rend());
    return lo;
}

std::vector<long long> prime_factors(long long n) {
    std::vector<long long> out;
    for (long long p = 2; p * p <= n; ++p)
        if (n % p == 0) {
            out.push_back(p);
            while (n % p == 0) n /= p;
        }
    if (n > 1) out.push_back(n);
    return out;
}

int mobius(long long n) {
    int sign = 1;
    for (long long p = 2; p * p <= n; ++p)
        if (n % p == 0) {
            n /= p;
            if (n % p == 0) return 0;
            sign = -sign;
        }
    if (n > 1) sign = -sign;
    return sign;
}

namespace {

std::mutex g_mutex;

std::vector<long long> compute_phi_poly(long long e) {
    // x^e - 1 divided by Phi_d for every proper divisor d.
    std::vector<long long> num(e + 1, 0);
    num[0] = -1;
    num[e] = 1;
    for (long long d : divisors(e)) {
        if (d == e) continue;
        const auto& den = phi_poly(d);
        std::size_t dd = den.size() - 1;
        std::vector<long long> quo(num.size() - dd, 0);
        for (std::size_t i = num.size() - 1; i + 1 > dd; --i) {
            long long c = num[i];
            quo[i - dd] = c;
            if (c != 0)
                for (std::size_t j = 0; j <= dd; ++j) num[i - dd + j] -= c * den[j];
            if (i == dd) break;
        }
        num = quo;
    }
    return num;
}

struct Table {
    int M = 1;
    int phi = 1;
    std::vector<std::vector<long>> pow;  // reduced z^j, j in [0, M)
};

const Table& table(int M) {
    static std::map<int, std::unique_ptr<Table>> cache;
    {
        std::lock_guard<std::mutex> lock(g_mutex);
        auto it = cache.find(M);
        if (it != cache.end()) return *it->second;
    }
    const auto& P = phi_poly(M);
    auto t = std::make_unique<Table>();
    t->M = M;
    t->phi = static_cast<int>(P.size() - 1);
    int phi = t->phi;
    t->pow.assign(M, std::vector<long>(phi, 0));
    std::vector<long> cur(phi, 0);
    cur[0] = 1;
    for (int j = 0; j < M; ++j) {
        t->pow[j] = cur;
        // multiply by x and reduce the degree-phi term with the monic Phi_M.
        long top = cur[phi - 1];
        for (int k = phi - 1; k > 0; --k) cur[k] = cur[k - 1];
        cur[0] = 0;
        if (top != 0)
            for (int k = 0; k < phi; ++k) cur[k] -= top * P[k];
    }
    std::lock_guard<std::mutex> lock(g_mutex);
    auto [it, inserted] = cache.emplace(M, std::move(t));
    return *it->second;
}

// Solves A x = b over Q for square invertible A (row-major).
std::vector<Rat> solve(std::vector<std::vector<Rat>> A, std::vector<Rat> b) {
    std::size_t n = A.size();
    for (std::size_t c = 0; c < n; ++c) {
        std::size_t piv = c;
        while (piv < n && A[piv][c] == 0) ++piv;
        if (piv == n) throw Error("scalar", "NotInvertible", "singular cyclotomic system");
        std::swap(A[piv], A[c]);
        std::swap(b[piv], b[c]);
        Rat inv = 1 / A[c][c];
        for (std::size_t j = c; j < n; ++j) A[c][j] *= inv;
        b[c] *= inv;
        for (std::size_t r = 0; r < n; ++r) {
            if (r == c || A[r][c] == 0) continue;
            Rat f = A[r][c];
            for (std::size_t j = c; j < n; ++j) A[r][j] -= f * A[c][j];
            b[r] -= f * b[c];
        }
    }
    return b;
}

struct Restriction {
    std::vector<int> rows;             // pivot coordinates of the big field
    std::vector<std::vector<Rat>> inv; // inverse of the pivot block
};

const Restriction& restriction(int M, int Ms) {
    static std::map<std::pair<int, int>, std::unique_ptr<Restriction>> cache;
    {
        std::lock_guard<std::mutex> lock(g_mutex);
        auto it = cache.find({M, Ms});
        if (it != cache.end()) return *it->second;
    }
    const Table& T = table(M);
    int ps = static_cast<int>(euler_phi(Ms));
    int step = M / Ms;
    // basis images as columns
    std::vector<std::vector<Rat>> B(T.phi, std::vector<Rat>(ps));
    for (int j = 0; j < ps; ++j)
        for (int k = 0; k < T.phi; ++k) B[k][j] = Rat(T.pow[(j * step) % M][k]);
    // pick independent rows greedily by elimination on a copy
    auto R = std::make_unique<Restriction>();
    std::vector<std::vector<Rat>> basis;  // reduced rows kept
    std::vector<int> pivcol;
    for (int k = 0; k < T.phi && static_cast<int>(R->rows.size()) < ps; ++k) {
        std::vector<Rat> row = B[k];
        for (std::size_t i = 0; i < basis.size(); ++i) {
            if (row[pivcol[i]] == 0) continue;
            Rat f = row[pivcol[i]] / basis[i][pivcol[i]];
            for (int j = 0; j < ps; ++j) row[j] -= f * basis[i][j];
        }
        int pc = -1;
        for (int j = 0; j < ps; ++j)
            if (row[j] != 0) { pc = j; break; }
        if (pc < 0) continue;
        basis.push_back(row);
        pivcol.push_back(pc);
        R->rows.push_back(k);
    }
    // inverse of the selected square block
    R->inv.assign(ps, std::vector<Rat>(ps));
    std::vector<std::vector<Rat>> block(ps, std::vector<Rat>(ps));
    for (int i = 0; i < ps; ++i) block[i] = B[R->rows[i]];
    for (int c = 0; c < ps; ++c) {
        std::vector<Rat> e(ps, 0);
        e[c] = 1;
        auto x = solve(block, e);
        for (int r = 0; r < ps; ++r) R->inv[r][c] = x[r];
    }
    std::lock_guard<std::mutex> lock(g_mutex);
    auto [it, inserted] = cache.emplace(std::make_pair(M, Ms), std::move(R));
    return *it->second;
}

}  // namespace

const std::vector<long long>& phi_poly(long long e) {
    static std::map<long long, std::unique_ptr<std::vector<long long>>> cache;
    {
        std::lock_guard<std::mutex> lock(g_mutex);
        auto it = cache.find(e);
        if (it != cache.end()) return *it->second;
    }
    std::vector<long long> p;
    if (e == 1) p = {-1, 1};
    else p = compute_phi_poly(e);
    std::lock_guard<std::mutex> lock(g_mutex);
    auto [it, inserted] = cache.emplace(e, std::make_unique<std::vector<long long>>(std::move(p)));
    return *it->second;
}

Coords zero(int M) { return Coords(euler_phi(M), Rat(0)); }

Coords one(int M) { return from_rat(M, Rat(1)); }

Coords from_rat(int M, const Rat& r) {
    Coords c = zero(M);
    c[0] = r;
    return c;
}

Coords zeta_power(int M, long long j) {
    const Table& T = table(M);
    long long k = ((j % M) + M) % M;
    Coords c(T.phi);
    for (int i = 0; i < T.phi; ++i) c[i] = Rat(T.pow[k][i]);
    return c;
}

bool is_zero(const Coords& a) {
    for (const auto& x : a)
        if (x != 0) return false;
    return true;
}

bool is_rational(const Coords& a) {
    for (std::size_t i = 1; i < a.size(); ++i)
        if (a[i] != 0) return false;
    return true;
}

void add_to(Coords& a, const Coords& b) {
    for (std::size_t i = 0; i < a.size(); ++i)
        if (b[i] != 0) a[i] += b[i];
}

void sub_from(Coords& a, const Coords& b) {
    for (std::size_t i = 0; i < a.size(); ++i)
        if (b[i] != 0) a[i] -= b[i];
}

void add_scaled(Coords& a, const Coords& b, const Rat& s) {
    for (std::size_t i = 0; i < a.size(); ++i)
        if (b[i] != 0) a[i] += b[i] * s;
}

Coords mul(int M, const Coords& a, const Coords& b) {
    if (M == 1) return Coords{a[0] * b[0]};
    const Table& T = table(M);
    int phi = T.phi;
    std::vector<Rat> buf(2 * phi - 1, Rat(0));
    for (int i = 0; i < phi; ++i) {
        if (a[i] == 0) continue;
        for (int j = 0; j < phi; ++j)
            if (b[j] != 0) buf[i + j] += a[i] * b[j];
    }
    Coords out(phi, Rat(0));
    for (int k = 0; k < 2 * phi - 1; ++k) {
        if (buf[k] == 0) continue;
        const auto& p = T.pow[k % M];
        for (int i = 0; i < phi; ++i)
            if (p[i] != 0) out[i] += buf[k] * p[i];
    }
    return out;
}

void scale(Coords& a, const Rat& s) {
    for (auto& x : a)
        if (x != 0) x *= s;
}

Coords neg(const Coords& a) {
    Coords out = a;
    for (auto& x : out) x = -x;
    return out;
}

Coords embed(const Coords& a, int M, int Mbig) {
    if (M == Mbig) return a;
    if (Mbig % M != 0) throw Error("scalar", "ConductorMismatch", "embedding requires M | M'");
    const Table& T = table(Mbig);
    int step = Mbig / M;
    Coords out(T.phi, Rat(0));
    for (std::size_t j = 0; j < a.size(); ++j) {
        if (a[j] == 0) continue;
        const auto& p = T.pow[(static_cast<long long>(j) * step) % Mbig];
        for (int i = 0; i < T.phi; ++i)
            if (p[i] != 0) out[i] += a[j] * p[i];
    }
    return out;
}

std::optional<Coords> restrict_to(const Coords& a, int M, int Ms) {
    if (M == Ms) return a;
    if (Ms == 1) {
        if (!is_rational(a)) return std::nullopt;
        return Coords{a[0]};
    }
    const Restriction& R = restriction(M, Ms);
    std::size_t ps = R.rows.size();
    Coords x(ps, Rat(0));
    for (std::size_t r = 0; r < ps; ++r)
        for (std::size_t c = 0; c < ps; ++c)
            if (R.inv[r][c] != 0 && a[R.rows[c]] != 0) x[r] += R.inv[r][c] * a[R.rows[c]];
    if (embed(x, Ms, M) != a) return std::nullopt;
    return x;
}

Coords inverse(int M, const Coords& a) {
    if (is_zero(a)) throw Error("scalar", "NotInvertible", "division by zero");
    if (M == 1) return Coords{1 / a[0]};
    const Table& T = table(M);
    int phi = T.phi;
    // column j of the multiplication-by-a matrix is a * z^j
    std::vector<std::vector<Rat>> A(phi, std::vector<Rat>(phi));
    for (int j = 0; j < phi; ++j) {
        Coords col = mul(M, a, zeta_power(M, j));
        for (int i = 0; i < phi; ++i) A[i][j] = col[i];
    }
    std::vector<Rat> e(phi, Rat(0));
    e[0] = 1;
    return solve(A, e);
}

std::complex<long double> eval(int M, const Coords& a) {
    std::complex<long double> out = 0;
    for (std::size_t j = 0; j < a.size(); ++j) {
        if (a[j] == 0) continue;
        long double ang = 2.0L * std::numbers::pi_v<long double> * static_cast<long double>(j) / M;
        out += static_cast<long double>(a[j].get_d()) * std::polar(1.0L, ang);
    }
    return out;
}

}  // namespace stacky::cyc
