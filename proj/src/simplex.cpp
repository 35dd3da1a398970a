#include <algorithm>
#include <chrono>
#include <cmath>
#include <queue>

#include "pebfcs/milp/solver.hpp"

namespace pebfcs::milp {

namespace {

constexpr double kPivotTol = 1e-9;

enum class ColState { basic, at_lower, at_upper, free_zero };

/// Bounded-variable primal simplex on a dense tableau, two phases with
/// artificial variables. Columns: structural | slacks | artificials.
class Tableau {
public:
    Tableau(const MilpInstance& inst, const std::vector<double>& lo,
            const std::vector<double>& up, const SolverConfig& config)
        : m_(static_cast<int>(inst.cons.size())),
          n_struct_(static_cast<int>(inst.vars.size())),
          config_(config) {
        const int n_slack_end = n_struct_ + m_;
        std::vector<double> slo(n_slack_end), sup(n_slack_end);
        for (int j = 0; j < n_struct_; ++j) {
            slo[j] = lo[j];
            sup[j] = up[j];
        }
        for (int i = 0; i < m_; ++i) {
            switch (inst.cons[i].sense) {
                case Sense::le: slo[n_struct_ + i] = 0.0; sup[n_struct_ + i] = kInf; break;
                case Sense::ge: slo[n_struct_ + i] = -kInf; sup[n_struct_ + i] = 0.0; break;
                case Sense::eq: slo[n_struct_ + i] = 0.0; sup[n_struct_ + i] = 0.0; break;
            }
        }

        // Nonbasic start: every structural/slack at the finite bound nearer
        // zero; variables free on both sides sit at zero.
        auto start_state = [&](int j) {
            if (std::isfinite(slo[j]) && std::isfinite(sup[j]))
                return (std::abs(slo[j]) <= std::abs(sup[j])) ? ColState::at_lower
                                                              : ColState::at_upper;
            if (std::isfinite(slo[j])) return ColState::at_lower;
            if (std::isfinite(sup[j])) return ColState::at_upper;
            return ColState::free_zero;
        };
        auto start_value = [&](int j) {
            switch (start_state(j)) {
                case ColState::at_lower: return slo[j];
                case ColState::at_upper: return sup[j];
                default: return 0.0;
            }
        };

        // A row whose start residual already fits its slack bounds begins
        // with that slack basic; only the others get an artificial column.
        std::vector<double> residual(m_);
        std::vector<int> art_of(m_, -1);
        int n_art = 0;
        for (int i = 0; i < m_; ++i) {
            double r = inst.cons[i].rhs;
            for (const auto& [j, c] : inst.cons[i].coeffs) r -= c * start_value(j);
            residual[i] = r;
            if (!(r >= slo[n_struct_ + i] && r <= sup[n_struct_ + i]))
                art_of[i] = n_slack_end + n_art++;
        }

        n_total_ = n_slack_end + n_art;
        lo_.assign(n_total_, 0.0);
        up_.assign(n_total_, 0.0);
        cost_.assign(n_total_, 0.0);
        state_.assign(n_total_, ColState::at_lower);
        for (int j = 0; j < n_slack_end; ++j) {
            lo_[j] = slo[j];
            up_[j] = sup[j];
            state_[j] = start_state(j);
        }
        for (const auto& [j, c] : inst.objective) cost_[j] += c;

        tab_.assign(static_cast<size_t>(m_) * n_total_, 0.0);
        rhs_.resize(m_);
        for (int i = 0; i < m_; ++i) {
            for (const auto& [j, c] : inst.cons[i].coeffs) row(i)[j] += c;
            row(i)[n_struct_ + i] = 1.0;  // slack
            rhs_[i] = inst.cons[i].rhs;
        }

        basis_.resize(m_);
        xb_.resize(m_);
        phase1_cost_.assign(n_total_, 0.0);
        for (int i = 0; i < m_; ++i) {
            double r = residual[i];
            if (art_of[i] < 0) {
                int s = n_struct_ + i;
                basis_[i] = s;
                state_[s] = ColState::basic;
            } else {
                int a = art_of[i];
                row(i)[a] = 1.0;
                if (r >= 0.0) {
                    lo_[a] = 0.0;
                    up_[a] = kInf;
                    phase1_cost_[a] = 1.0;
                } else {
                    lo_[a] = -kInf;
                    up_[a] = 0.0;
                    phase1_cost_[a] = -1.0;
                }
                basis_[i] = a;
                state_[a] = ColState::basic;
            }
            xb_[i] = r;
        }
    }

    SolveStatus solve() {
        n_active_ = n_total_;  // artificials may enter in phase 1
        setup_costs(phase1_cost_);
        SolveStatus s = iterate(/*phase1=*/true);
        if (s != SolveStatus::optimal) return s;
        if (obj_ > 1e-7 * (1.0 + rhs_scale())) return SolveStatus::infeasible;

        // Freeze artificials at zero and switch to the real objective.
        for (int j = n_struct_ + m_; j < n_total_; ++j) {
            lo_[j] = 0.0;
            up_[j] = 0.0;
            if (state_[j] != ColState::basic) state_[j] = ColState::at_lower;
        }
        for (int i = 0; i < m_; ++i)
            if (basis_[i] >= n_struct_ + m_ && std::abs(xb_[i]) <= 1e-7) xb_[i] = 0.0;
        n_active_ = n_struct_ + m_;  // artificials excluded from pricing
        setup_costs(cost_);
        return iterate(/*phase1=*/false);
    }

    std::vector<double> extract() const {
        std::vector<double> x(n_struct_, 0.0);
        for (int j = 0; j < n_struct_; ++j)
            if (state_[j] != ColState::basic) x[j] = nonbasic_value(j);
        for (int i = 0; i < m_; ++i)
            if (basis_[i] < n_struct_) x[basis_[i]] = xb_[i];
        return x;
    }

    double objective() const { return obj_; }
    long iterations() const { return total_iters_; }

private:
    double* row(int i) { return tab_.data() + static_cast<size_t>(i) * n_total_; }
    const double* row(int i) const { return tab_.data() + static_cast<size_t>(i) * n_total_; }

    double nonbasic_value(int j) const {
        switch (state_[j]) {
            case ColState::at_lower: return lo_[j];
            case ColState::at_upper: return up_[j];
            default: return 0.0;
        }
    }

    double rhs_scale() const {
        double s = 0.0;
        for (double r : rhs_) s = std::max(s, std::abs(r));
        return s;
    }

    void setup_costs(const std::vector<double>& c) {
        active_cost_ = &c;
        red_.assign(n_total_, 0.0);
        for (int j = 0; j < n_active_; ++j) red_[j] = c[j];
        for (int i = 0; i < m_; ++i) {
            double cb = c[basis_[i]];
            if (cb == 0.0) continue;
            const double* r = row(i);
            for (int j = 0; j < n_active_; ++j) red_[j] -= cb * r[j];
        }
        obj_ = 0.0;
        for (int i = 0; i < m_; ++i) obj_ += c[basis_[i]] * xb_[i];
        for (int j = 0; j < n_total_; ++j)
            if (state_[j] != ColState::basic) obj_ += c[j] * nonbasic_value(j);
    }

    // Entering column under the current pricing rule; dir = +1 (increase)
    // or -1 (decrease). Returns -1 at optimality.
    int price(bool bland, int& dir) const {
        int best = -1;
        double best_score = 1e-7;
        for (int j = 0; j < n_active_; ++j) {
            ColState st = state_[j];
            if (st == ColState::basic) continue;
            if (lo_[j] == up_[j]) continue;  // fixed, can never move
            double d = red_[j];
            int cand_dir = 0;
            if ((st == ColState::at_lower || st == ColState::free_zero) && d < -1e-7)
                cand_dir = +1;
            else if ((st == ColState::at_upper || st == ColState::free_zero) && d > 1e-7)
                cand_dir = -1;
            if (cand_dir == 0) continue;
            if (bland) {
                dir = cand_dir;
                return j;
            }
            if (std::abs(d) > best_score) {
                best_score = std::abs(d);
                best = j;
                dir = cand_dir;
            }
        }
        return best;
    }

    SolveStatus iterate(bool phase1) {
        const long max_iters = 50'000 + 200L * (m_ + n_total_);
        const long stall_threshold = 3L * (m_ + n_total_);
        long stall = 0;
        double last_obj = obj_;
        for (;;) {
            if (++total_iters_ > max_iters)
                throw SolverNumericalError("simplex iteration limit exceeded");
            bool bland = stall > stall_threshold;
            int dir = 0;
            int enter = price(bland, dir);
            if (enter < 0) return SolveStatus::optimal;

            // Ratio test: step until a basic variable or the entering
            // variable itself hits a bound.
            double flip_limit = kInf;
            if (dir > 0 && std::isfinite(up_[enter]))
                flip_limit = up_[enter] - nonbasic_value(enter);
            else if (dir < 0 && std::isfinite(lo_[enter]))
                flip_limit = nonbasic_value(enter) - lo_[enter];

            double t = flip_limit;
            int leave_row = -1;
            int leave_to_upper = 0;
            for (int i = 0; i < m_; ++i) {
                double a = row(i)[enter];
                if (std::abs(a) < kPivotTol) continue;
                double rate = -dir * a;  // d(xb_i)/dt
                int b = basis_[i];
                double ti;
                int to_upper;
                if (rate < 0.0) {
                    if (!std::isfinite(lo_[b])) continue;
                    ti = (xb_[i] - lo_[b]) / (-rate);
                    to_upper = 0;
                } else {
                    if (!std::isfinite(up_[b])) continue;
                    ti = (up_[b] - xb_[i]) / rate;
                    to_upper = 1;
                }
                if (ti < 0.0) ti = 0.0;
                if (ti < t - 1e-9) {
                    t = ti;
                    leave_row = i;
                    leave_to_upper = to_upper;
                } else if (leave_row >= 0 && ti < t + 1e-9) {
                    // Tie: prefer the larger pivot, then the lower basis index.
                    double cur = std::abs(row(leave_row)[enter]);
                    double cand = std::abs(a);
                    if (cand > cur + 1e-12 || (cand > cur - 1e-12 && b < basis_[leave_row])) {
                        leave_row = i;
                        leave_to_upper = to_upper;
                    }
                }
            }

            if (!std::isfinite(t)) return phase1 ? SolveStatus::infeasible : SolveStatus::unbounded;

            if (leave_row < 0) {
                // Bound flip, no basis change.
                t = flip_limit;
                apply_step(enter, dir, t);
                state_[enter] =
                    (state_[enter] == ColState::at_lower) ? ColState::at_upper : ColState::at_lower;
            } else {
                double enter_val = nonbasic_value(enter) + dir * t;
                apply_step(enter, dir, t);
                pivot(leave_row, enter, enter_val, leave_to_upper);
            }

            if (obj_ < last_obj - 1e-9 * (1.0 + std::abs(last_obj))) {
                stall = 0;
                last_obj = obj_;
            } else {
                ++stall;
            }
        }
    }

    void apply_step(int enter, int dir, double t) {
        if (t == 0.0) return;
        for (int i = 0; i < m_; ++i) {
            double a = row(i)[enter];
            if (a != 0.0) xb_[i] -= dir * t * a;
        }
        obj_ += red_[enter] * dir * t;
    }

    void pivot(int r, int enter, double enter_val, int leave_to_upper) {
        // Columns past n_active_ are frozen and can never enter again, so
        // their tableau entries may go stale without harm.
        int leave = basis_[r];
        double piv = row(r)[enter];
        double* pr = row(r);
        double inv = 1.0 / piv;
        for (int j = 0; j < n_active_; ++j) pr[j] *= inv;
        for (int i = 0; i < m_; ++i) {
            if (i == r) continue;
            double f = row(i)[enter];
            if (f == 0.0) continue;
            double* ri = row(i);
            for (int j = 0; j < n_active_; ++j) ri[j] -= f * pr[j];
        }
        double fd = red_[enter];
        if (fd != 0.0)
            for (int j = 0; j < n_active_; ++j) red_[j] -= fd * pr[j];

        state_[leave] = leave_to_upper ? ColState::at_upper : ColState::at_lower;
        // Clamp the leaving variable exactly onto its bound.
        basis_[r] = enter;
        state_[enter] = ColState::basic;
        xb_[r] = enter_val;
    }

    int m_;
    int n_struct_;
    int n_total_ = 0;
    int n_active_ = 0;
    SolverConfig config_;
    std::vector<double> tab_;
    std::vector<double> rhs_;
    std::vector<double> lo_, up_;
    std::vector<double> cost_, phase1_cost_;
    std::vector<double> red_;
    std::vector<double> xb_;
    std::vector<int> basis_;
    std::vector<ColState> state_;
    const std::vector<double>* active_cost_ = nullptr;
    double obj_ = 0.0;
    long total_iters_ = 0;
};

}  // namespace

MilpSolution solve_lp_with_bounds(const MilpInstance& inst, const std::vector<double>& lo,
                                  const std::vector<double>& up, const SolverConfig& config) {
    inst.check_well_formed();
    for (size_t j = 0; j < lo.size(); ++j)
        if (lo[j] > up[j] + 1e-12) {
            MilpSolution sol;
            sol.status = SolveStatus::infeasible;
            return sol;
        }

    auto start = std::chrono::steady_clock::now();
    Tableau tab(inst, lo, up, config);
    MilpSolution sol;
    sol.status = tab.solve();
    sol.wall_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (sol.status != SolveStatus::optimal) return sol;

    sol.values = tab.extract();
    sol.objective = objective_value(inst, sol.values);
    sol.bound = sol.objective;

    double viol = max_constraint_violation(inst, sol.values);
    double scale = 1.0;
    for (const auto& c : inst.cons) scale = std::max(scale, std::abs(c.rhs));
    if (viol > 1e-5 * scale)
        throw SolverNumericalError("simplex terminated with residual violation " +
                                   std::to_string(viol));
    return sol;
}

MilpSolution solve_lp(const MilpInstance& inst, const SolverConfig& config) {
    std::vector<double> lo(inst.vars.size()), up(inst.vars.size());
    for (size_t j = 0; j < inst.vars.size(); ++j) {
        lo[j] = inst.vars[j].lower;
        up[j] = inst.vars[j].upper;
    }
    return solve_lp_with_bounds(inst, lo, up, config);
}

}  // namespace pebfcs::milp
