#pragma once

#include "pebfcs/milp/instance.hpp"

namespace pebfcs::milp {

/// LP relaxation (binaries treated as continuous within their bounds),
/// bounded-variable primal simplex on a dense tableau.
MilpSolution solve_lp(const MilpInstance& inst, const SolverConfig& config = {});

/// Branch-and-bound on the binary variables: most-fractional branching,
/// best-bound node selection, deterministic tie-breaks.
MilpSolution solve_milp(const MilpInstance& inst, const SolverConfig& config = {});

/// Exhaustive enumeration over binary assignments (with interval-arithmetic
/// pruning of provably infeasible subtrees); continuous variables resolved
/// by solve_lp. Refuses instances with more than 24 binaries.
MilpSolution brute_force_binary(const MilpInstance& inst, const SolverConfig& config = {});

}  // namespace pebfcs::milp
