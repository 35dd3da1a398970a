#pragma once

#include <string>

#include "pebfcs/milp/instance.hpp"

namespace pebfcs::milp {

/// Fixed-format MPS text. Row/column names are mangled deterministically to
/// fit eight characters: objective row COST, constraint i -> R<i+1>,
/// variable j -> X<j+1> (zero-padded).
std::string write_mps(const MilpInstance& inst);

/// Minimal MPS reader for the writer's output (and other whitespace-separated
/// MPS files with NAME/ROWS/COLUMNS/RHS/BOUNDS/ENDATA and INTORG markers).
MilpInstance parse_mps(const std::string& text);

/// Deterministic mangled names used by the writer.
std::string mps_var_name(int index);
std::string mps_row_name(int index);

struct ExternalSolverUnavailable : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct ExternalSolverFailure : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct ExternalSolutionParseError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Writes the instance as MPS, runs `<command> <model.mps> <solution_out>`
/// and parses the solution file back. Accepted solution formats: plain
/// `name value` lines, or CBC's native solution file (status header line
/// followed by `index name value reducedcost` rows).
MilpSolution solve_external(const MilpInstance& inst, const std::string& solver_command,
                            const SolverConfig& config = {});

}  // namespace pebfcs::milp
