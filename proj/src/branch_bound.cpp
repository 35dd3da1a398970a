#include <algorithm>
#include <chrono>
#include <cmath>
#include <queue>

#include "pebfcs/milp/solver.hpp"

namespace pebfcs::milp {

MilpSolution solve_lp_with_bounds(const MilpInstance& inst, const std::vector<double>& lo,
                                  const std::vector<double>& up, const SolverConfig& config);

namespace {

struct Node {
    double bound;  // parent LP value, lower bound on the subtree
    long id;
    std::vector<std::pair<int, int>> fixings;  // (binary var, 0/1)

    bool operator>(const Node& other) const {
        if (bound != other.bound) return bound > other.bound;
        return id > other.id;  // FIFO on ties
    }
};

// Most-fractional binary; ties by lowest variable index.
int pick_branching(const MilpInstance& inst, const std::vector<double>& x, double tol) {
    int best = -1;
    double best_frac = tol;
    for (size_t j = 0; j < inst.vars.size(); ++j) {
        if (inst.vars[j].kind != VarKind::binary) continue;
        double f = std::min(x[j], 1.0 - x[j]);
        if (f > best_frac + 1e-12) {
            best_frac = f;
            best = static_cast<int>(j);
        }
    }
    return best;
}

void snap_binaries(const MilpInstance& inst, std::vector<double>& x, double tol) {
    for (size_t j = 0; j < inst.vars.size(); ++j)
        if (inst.vars[j].kind == VarKind::binary) {
            if (x[j] < tol) x[j] = 0.0;
            else if (x[j] > 1.0 - tol) x[j] = 1.0;
        }
}

}  // namespace

MilpSolution solve_milp(const MilpInstance& inst, const SolverConfig& config) {
    inst.check_well_formed();
    auto start = std::chrono::steady_clock::now();
    auto elapsed = [&] {
        return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    };

    std::vector<double> base_lo(inst.vars.size()), base_up(inst.vars.size());
    for (size_t j = 0; j < inst.vars.size(); ++j) {
        base_lo[j] = inst.vars[j].lower;
        base_up[j] = inst.vars[j].upper;
    }

    MilpSolution result;
    result.status = SolveStatus::infeasible;
    double incumbent = kInf;
    std::vector<double> incumbent_x;

    std::priority_queue<Node, std::vector<Node>, std::greater<Node>> open;
    long next_id = 0;
    open.push({-kInf, next_id++, {}});
    double best_open_bound = -kInf;
    long nodes = 0;

    std::vector<double> lo = base_lo, up = base_up;

    // Rounding dive: fix fractional binaries to their nearest value one at a
    // time. Any integral leaf becomes the first incumbent, which lets the
    // best-bound search prune from the start.
    for (;;) {
        if (config.time_limit_seconds > 0.0 && elapsed() > config.time_limit_seconds) break;
        MilpSolution relax = solve_lp_with_bounds(inst, lo, up, config);
        if (relax.status != SolveStatus::optimal) break;
        int branch = pick_branching(inst, relax.values, config.integrality_tol);
        if (branch < 0) {
            snap_binaries(inst, relax.values, config.integrality_tol);
            if (max_constraint_violation(inst, relax.values) <= config.feasibility_tol * 10.0) {
                incumbent = objective_value(inst, relax.values);
                incumbent_x = relax.values;
            }
            break;
        }
        double v = relax.values[branch] >= 0.5 ? 1.0 : 0.0;
        lo[branch] = up[branch] = v;
    }
    while (!open.empty()) {
        Node node = open.top();
        open.pop();
        best_open_bound = node.bound;
        if (std::isfinite(incumbent)) {
            double gap_cut = incumbent - config.relative_gap * std::max(1.0, std::abs(incumbent));
            if (node.bound >= gap_cut) break;  // proven within gap
        }

        lo = base_lo;
        up = base_up;
        for (auto [j, v] : node.fixings) {
            lo[j] = v;
            up[j] = v;
        }

        ++nodes;
        if (nodes > config.node_limit ||
            (config.time_limit_seconds > 0.0 && elapsed() > config.time_limit_seconds)) {
            result.status =
                nodes > config.node_limit ? SolveStatus::node_limit : SolveStatus::gap_limit;
            break;
        }

        MilpSolution relax = solve_lp_with_bounds(inst, lo, up, config);
        if (relax.status == SolveStatus::unbounded) {
            // Unbounded relaxation at the root means an unbounded MILP for
            // our model class (bounded binaries cannot repair it).
            result.status = SolveStatus::unbounded;
            result.node_count = nodes;
            result.wall_seconds = elapsed();
            return result;
        }
        if (relax.status != SolveStatus::optimal) continue;
        if (std::isfinite(incumbent) &&
            relax.objective >= incumbent - config.relative_gap * std::max(1.0, std::abs(incumbent)))
            continue;

        int branch = pick_branching(inst, relax.values, config.integrality_tol);
        if (branch < 0) {
            snap_binaries(inst, relax.values, config.integrality_tol);
            if (max_constraint_violation(inst, relax.values) <= config.feasibility_tol * 10.0) {
                double obj = objective_value(inst, relax.values);
                if (obj < incumbent - 1e-12) {
                    incumbent = obj;
                    incumbent_x = relax.values;
                }
            }
            continue;
        }
        auto fix0 = node.fixings;
        fix0.emplace_back(branch, 0);
        auto fix1 = node.fixings;
        fix1.emplace_back(branch, 1);
        open.push({relax.objective, next_id++, std::move(fix0)});
        open.push({relax.objective, next_id++, std::move(fix1)});
    }

    result.node_count = nodes;
    result.wall_seconds = elapsed();
    if (!incumbent_x.empty()) {
        result.values = std::move(incumbent_x);
        result.objective = incumbent;
        if (result.status != SolveStatus::node_limit && result.status != SolveStatus::gap_limit)
            result.status = SolveStatus::optimal;
        result.bound = open.empty() ? incumbent : std::min(incumbent, best_open_bound);
        if (result.status == SolveStatus::optimal) result.bound = incumbent;
    } else if (result.status == SolveStatus::node_limit ||
               result.status == SolveStatus::gap_limit) {
        result.bound = best_open_bound;
    }
    return result;
}

MilpSolution brute_force_binary(const MilpInstance& inst, const SolverConfig& config) {
    inst.check_well_formed();
    std::vector<int> binaries;
    for (size_t j = 0; j < inst.vars.size(); ++j)
        if (inst.vars[j].kind == VarKind::binary) binaries.push_back(static_cast<int>(j));
    if (binaries.size() > 24)
        throw std::invalid_argument("brute_force_binary: more than 24 binary variables");

    std::vector<double> lo(inst.vars.size()), up(inst.vars.size());
    for (size_t j = 0; j < inst.vars.size(); ++j) {
        lo[j] = inst.vars[j].lower;
        up[j] = inst.vars[j].upper;
    }

    // Interval-arithmetic feasibility: with the current partial fixing, can
    // the constraint still be satisfied for some completion within bounds?
    auto prune = [&](const Constraint& con) {
        double min_lhs = 0.0, max_lhs = 0.0;
        for (const auto& [j, c] : con.coeffs) {
            double a = c * lo[j], b = c * up[j];
            min_lhs += std::min(a, b);
            max_lhs += std::max(a, b);
        }
        switch (con.sense) {
            case Sense::le: return min_lhs > con.rhs + 1e-9;
            case Sense::ge: return max_lhs < con.rhs - 1e-9;
            case Sense::eq: return min_lhs > con.rhs + 1e-9 || max_lhs < con.rhs - 1e-9;
        }
        return false;
    };

    MilpSolution best;
    best.status = SolveStatus::infeasible;
    double best_obj = kInf;

    auto recurse = [&](auto&& self, size_t depth) -> void {
        for (const auto& con : inst.cons)
            if (prune(con)) return;
        if (depth == binaries.size()) {
            MilpSolution sub = solve_lp_with_bounds(inst, lo, up, config);
            if (sub.status == SolveStatus::optimal && sub.objective < best_obj - 1e-12) {
                best_obj = sub.objective;
                best.status = SolveStatus::optimal;
                best.objective = sub.objective;
                best.values = sub.values;
            }
            return;
        }
        int j = binaries[depth];
        for (int v = 0; v <= 1; ++v) {
            lo[j] = v;
            up[j] = v;
            self(self, depth + 1);
        }
        lo[j] = inst.vars[j].lower;
        up[j] = inst.vars[j].upper;
    };
    recurse(recurse, 0);

    best.bound = best.status == SolveStatus::optimal ? best.objective : kInf;
    return best;
}

}  // namespace pebfcs::milp
