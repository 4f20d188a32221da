#include "stacky/linalg.hpp"

#include <algorithm>
#include <cstdlib>
#include <utility>

namespace stacky::linalg {

namespace {

// Reduced row echelon form in place, pivoting on the first cols columns only;
// returns pivot columns.
std::vector<int> echelon(RatMat& a, int cols) {
    std::vector<int> pivots;
    int row = 0;
    const int rows = static_cast<int>(a.size());
    for (int c = 0; c < cols && row < rows; ++c) {
        int p = -1;
        for (int i = row; i < rows; ++i)
            if (a[i][c] != 0) {
                p = i;
                break;
            }
        if (p < 0) continue;
        std::swap(a[row], a[p]);
        Rat inv = 1 / a[row][c];
        const int width = static_cast<int>(a[row].size());
        for (int j = c; j < width; ++j) a[row][j] *= inv;
        for (int i = 0; i < rows; ++i) {
            if (i == row || a[i][c] == 0) continue;
            Rat f = a[i][c];
            for (int j = c; j < width; ++j) a[i][j] -= f * a[row][j];
        }
        pivots.push_back(c);
        ++row;
    }
    return pivots;
}

}  // namespace

int rank(const RatMat& a) {
    if (a.empty()) return 0;
    RatMat b = a;
    return static_cast<int>(echelon(b, static_cast<int>(a[0].size())).size());
}

std::vector<RatVec> kernel(const RatMat& a, int cols) {
    RatMat b = a;
    std::vector<int> piv = a.empty() ? std::vector<int>{} : echelon(b, cols);
    std::vector<bool> is_piv(static_cast<std::size_t>(cols), false);
    for (int c : piv) is_piv[c] = true;
    std::vector<RatVec> out;
    for (int f = 0; f < cols; ++f) {
        if (is_piv[f]) continue;
        RatVec v(static_cast<std::size_t>(cols), Rat(0));
        v[f] = 1;
        for (std::size_t i = 0; i < piv.size(); ++i) v[piv[i]] = -b[i][f];
        out.push_back(std::move(v));
    }
    return out;
}

std::optional<RatVec> solve_unique(const RatMat& a, const RatVec& b) {
    const int n = static_cast<int>(a.size());
    RatMat aug(a.size());
    for (int i = 0; i < n; ++i) {
        aug[i] = a[i];
        aug[i].push_back(b[i]);
    }
    std::vector<int> piv = echelon(aug, n);
    if (static_cast<int>(piv.size()) < n) return std::nullopt;
    RatVec x(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) x[i] = aug[i][n];
    return x;
}

std::vector<int> independent_rows(const RatMat& a) {
    std::vector<int> out;
    RatMat chosen;
    for (int i = 0; i < static_cast<int>(a.size()); ++i) {
        chosen.push_back(a[i]);
        if (rank(chosen) == static_cast<int>(chosen.size()))
            out.push_back(i);
        else
            chosen.pop_back();
    }
    return out;
}

Rat dot(const RatVec& a, const RatVec& b) {
    Rat s = 0;
    for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
}

SmithForm smith_quotient(const IntMat& m, int cols) {
    std::vector<std::vector<BigInt>> a;
    for (const auto& row : m) {
        std::vector<BigInt> r;
        for (long long v : row) r.emplace_back(static_cast<long>(v));
        a.push_back(std::move(r));
    }
    const int rows = static_cast<int>(a.size());
    std::vector<BigInt> diag;
    int t = 0;
    while (t < rows && t < cols) {
        // pivot: smallest nonzero absolute value in the remaining block
        int pr = -1, pc = -1;
        for (int i = t; i < rows; ++i)
            for (int j = t; j < cols; ++j)
                if (a[i][j] != 0 && (pr < 0 || abs(a[i][j]) < abs(a[pr][pc]))) {
                    pr = i;
                    pc = j;
                }
        if (pr < 0) break;
        std::swap(a[t], a[pr]);
        for (int i = 0; i < rows; ++i) std::swap(a[i][t], a[i][pc]);
        bool clean = false;
        while (!clean) {
            clean = true;
            for (int i = t + 1; i < rows; ++i) {
                if (a[i][t] == 0) continue;
                BigInt qt = a[i][t] / a[t][t];
                for (int j = t; j < cols; ++j) a[i][j] -= qt * a[t][j];
                if (a[i][t] != 0) {
                    std::swap(a[t], a[i]);
                    clean = false;
                }
            }
            for (int j = t + 1; j < cols; ++j) {
                if (a[t][j] == 0) continue;
                BigInt qt = a[t][j] / a[t][t];
                for (int i = t; i < rows; ++i) a[i][j] -= qt * a[i][t];
                if (a[t][j] != 0) {
                    for (int i = 0; i < rows; ++i) std::swap(a[i][t], a[i][j]);
                    clean = false;
                }
            }
            if (clean) {
                // divisibility: fold any entry not divisible by the pivot into row t
                for (int i = t + 1; i < rows && clean; ++i)
                    for (int j = t + 1; j < cols; ++j)
                        if (a[i][j] % a[t][t] != 0) {
                            for (int jj = t; jj < cols; ++jj) a[t][jj] += a[i][jj];
                            clean = false;
                            break;
                        }
            }
        }
        diag.push_back(abs(a[t][t]));
        ++t;
    }
    SmithForm out;
    out.free_rank = cols - static_cast<int>(diag.size());
    for (const auto& d : diag)
        if (d > 1) out.torsion.push_back(d.get_si());
    return out;
}

std::vector<std::vector<int>> subsets(int n, int k) {
    std::vector<std::vector<int>> out;
    if (k < 0 || k > n) return out;
    std::vector<int> cur(static_cast<std::size_t>(k));
    for (int i = 0; i < k; ++i) cur[i] = i;
    while (true) {
        out.push_back(cur);
        int i = k - 1;
        while (i >= 0 && cur[i] == n - k + i) --i;
        if (i < 0) break;
        ++cur[i];
        for (int j = i + 1; j < k; ++j) cur[j] = cur[j - 1] + 1;
    }
    return out;
}

bool in_convex_hull(const RatVec& p, const std::vector<RatVec>& pts) {
    const int d = static_cast<int>(p.size());
    const int n = static_cast<int>(pts.size());
    for (int k = 1; k <= std::min(n, d + 1); ++k) {
        for (const auto& sub : subsets(n, k)) {
            // sum lambda_i pts_i = p, sum lambda_i = 1, lambda unique when
            // the subset is affinely independent
            RatMat a(static_cast<std::size_t>(d + 1), RatVec(static_cast<std::size_t>(k)));
            RatVec b(static_cast<std::size_t>(d + 1));
            for (int r = 0; r < d; ++r) {
                for (int i = 0; i < k; ++i) a[r][i] = pts[sub[i]][r];
                b[r] = p[r];
            }
            for (int i = 0; i < k; ++i) a[d][i] = 1;
            b[d] = 1;
            if (rank(a) < k) continue;
            // least-squares free: pick k independent rows and verify the rest
            std::vector<int> rows = independent_rows(a);
            RatMat sq;
            RatVec sb;
            for (int r : rows) {
                sq.push_back(a[r]);
                sb.push_back(b[r]);
            }
            auto lam = solve_unique(sq, sb);
            if (!lam) continue;
            bool ok = true;
            for (int r = 0; r <= d && ok; ++r)
                if (dot(a[r], *lam) != b[r]) ok = false;
            for (const auto& l : *lam)
                if (l < 0) ok = false;
            if (ok) return true;
        }
    }
    return false;
}

bool in_cone(const RatVec& v, const std::vector<RatVec>& gens) {
    const int d = static_cast<int>(v.size());
    bool zero = true;
    for (const auto& x : v)
        if (x != 0) zero = false;
    if (zero) return true;
    const int n = static_cast<int>(gens.size());
    for (int k = 1; k <= std::min(n, d); ++k) {
        for (const auto& sub : subsets(n, k)) {
            RatMat a(static_cast<std::size_t>(d), RatVec(static_cast<std::size_t>(k)));
            for (int r = 0; r < d; ++r)
                for (int i = 0; i < k; ++i) a[r][i] = gens[sub[i]][r];
            if (rank(a) < k) continue;
            RatMat sq;
            RatVec sb;
            for (int r : independent_rows(a)) {
                sq.push_back(a[r]);
                sb.push_back(v[r]);
            }
            auto lam = solve_unique(sq, sb);
            if (!lam) continue;
            bool ok = true;
            for (int r = 0; r < d && ok; ++r)
                if (dot(a[r], *lam) != v[r]) ok = false;
            for (const auto& l : *lam)
                if (l < 0) ok = false;
            if (ok) return true;
        }
    }
    return false;
}

}  // namespace stacky::linalg
