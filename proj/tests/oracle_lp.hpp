// Test-only LP oracle: classic dense simplex for max c'x s.t. Ax <= b,
// x >= 0 (the well-known KACTL formulation), plus a converter from
// MilpInstance. Kept independent of the library's simplex on purpose.
#pragma once

#include <cmath>
#include <limits>
#include <utility>
#include <vector>

#include "pebfcs/milp/instance.hpp"

namespace oracle {

struct StandardLp {
    // max c'x s.t. Ax <= b, x >= 0
    std::vector<std::vector<double>> A;
    std::vector<double> b, c;
};

class SimplexOracle {
public:
    using vd = std::vector<double>;
    using vi = std::vector<int>;

    SimplexOracle(const StandardLp& lp)
        : m((int)lp.b.size()), n((int)lp.c.size()), N(n + 1), B(m),
          D(m + 2, vd(n + 2)) {
        for (int i = 0; i < m; i++)
            for (int j = 0; j < n; j++) D[i][j] = lp.A[i][j];
        for (int i = 0; i < m; i++) {
            B[i] = n + i;
            D[i][n] = -1;
            D[i][n + 1] = lp.b[i];
        }
        for (int j = 0; j < n; j++) {
            N[j] = j;
            D[m][j] = -lp.c[j];
        }
        N[n] = -1;
        D[m + 1][n] = 1;
    }

    // returns inf if unbounded, -inf if infeasible
    double solve(vd& x) {
        int r = 0;
        for (int i = 1; i < m; i++)
            if (D[i][n + 1] < D[r][n + 1]) r = i;
        if (D[r][n + 1] < -eps) {
            pivot(r, n);
            if (!simplex(2) || D[m + 1][n + 1] < -eps)
                return -std::numeric_limits<double>::infinity();
            for (int i = 0; i < m; i++)
                if (B[i] == -1) {
                    int s = 0;
                    for (int j = 1; j <= n; j++)
                        if (s == -1 || std::make_pair(D[i][j], N[j]) <
                                           std::make_pair(D[i][s], N[s]))
                            s = j;
                    pivot(i, s);
                }
        }
        bool ok = simplex(1);
        x.assign(n, 0);
        for (int i = 0; i < m; i++)
            if (B[i] < n) x[B[i]] = D[i][n + 1];
        return ok ? D[m][n + 1] : std::numeric_limits<double>::infinity();
    }

private:
    static constexpr double eps = 1e-10;
    int m, n;
    vi N, B;
    std::vector<vd> D;

    void pivot(int r, int s) {
        double* a = D[r].data();
        double inv = 1 / a[s];
        for (int i = 0; i < m + 2; i++)
            if (i != r && std::abs(D[i][s]) > eps) {
                double* bm = D[i].data();
                double binv = bm[s] * inv;
                for (int j = 0; j < n + 2; j++) bm[j] -= a[j] * binv;
                bm[s] = a[s] * binv;
            }
        for (int j = 0; j < n + 2; j++)
            if (j != s) D[r][j] *= inv;
        for (int i = 0; i < m + 2; i++)
            if (i != r) D[i][s] *= -inv;
        D[r][s] = inv;
        std::swap(B[r], N[s]);
    }

    bool simplex(int phase) {
        int x = m + phase - 1;
        for (;;) {
            int s = -1;
            for (int j = 0; j <= n; j++) {
                if (N[j] == -phase) continue;
                if (s == -1 || std::make_pair(D[x][j], N[j]) <
                                   std::make_pair(D[x][s], N[s]))
                    s = j;
            }
            if (D[x][s] >= -eps) return true;
            int r = -1;
            for (int i = 0; i < m; i++) {
                if (D[i][s] <= eps) continue;
                if (r == -1 ||
                    std::make_pair(D[i][n + 1] / D[i][s], B[i]) <
                        std::make_pair(D[r][n + 1] / D[r][s], B[r]))
                    r = i;
            }
            if (r == -1) return false;
            pivot(r, s);
        }
    }
};

// Converts a MilpInstance with finite variable bounds into standard form by
// the shift x = y + lower; equalities become two inequalities.
inline double solve_lp_oracle(const pebfcs::milp::MilpInstance& inst) {
    using namespace pebfcs::milp;
    const int n = (int)inst.vars.size();
    StandardLp lp;
    lp.c.assign(n, 0.0);
    double constant = inst.objective_constant;
    std::vector<double> shift(n);
    for (int j = 0; j < n; j++) shift[j] = inst.vars[j].lower;
    for (auto [j, c] : inst.objective) {
        lp.c[j] -= c;  // maximize the negated objective
        constant += c * shift[j];
    }

    auto add_le = [&](const std::vector<std::pair<int, double>>& terms, double rhs) {
        std::vector<double> row(n, 0.0);
        for (auto [j, c] : terms) {
            row[j] += c;
            rhs -= c * shift[j];
        }
        lp.A.push_back(std::move(row));
        lp.b.push_back(rhs);
    };
    auto negate = [&](std::vector<std::pair<int, double>> terms) {
        for (auto& [j, c] : terms) c = -c;
        return terms;
    };

    for (const auto& con : inst.cons) {
        if (con.sense != Sense::ge) add_le(con.coeffs, con.rhs);
        if (con.sense != Sense::le) add_le(negate(con.coeffs), -con.rhs);
    }
    for (int j = 0; j < n; j++) add_le({{j, 1.0}}, inst.vars[j].upper);

    SimplexOracle solver(lp);
    std::vector<double> y;
    double value = solver.solve(y);
    // Back to minimization: +inf means infeasible, -inf unbounded.
    return -value + constant;
}

}  // namespace oracle
