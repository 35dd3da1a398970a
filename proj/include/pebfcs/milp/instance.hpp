#pragma once

#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

namespace pebfcs::milp {

constexpr double kInf = std::numeric_limits<double>::infinity();

enum class VarKind { continuous, binary };

struct Variable {
    std::string name;
    double lower = 0.0;
    double upper = kInf;
    VarKind kind = VarKind::continuous;
};

enum class Sense { le, eq, ge };

struct Constraint {
    std::string name;
    std::vector<std::pair<int, double>> coeffs;  // (variable id, coefficient)
    Sense sense = Sense::le;
    double rhs = 0.0;
};

/// Minimization model: min c'x + c0  s.t.  Ax {<=,=,>=} b,  l <= x <= u.
struct MilpInstance {
    std::vector<Variable> vars;
    std::vector<Constraint> cons;
    std::vector<std::pair<int, double>> objective;  // sparse
    double objective_constant = 0.0;

    int add_continuous(std::string name, double lower, double upper);
    int add_binary(std::string name);
    void add_constraint(std::string name, std::vector<std::pair<int, double>> coeffs, Sense sense,
                        double rhs);
    void add_objective_term(int var, double coeff);

    int binary_count() const;
    /// Throws std::invalid_argument on malformed data (bad ids, NaN/inf
    /// coefficients, binary bounds outside [0,1]).
    void check_well_formed() const;
};

enum class SolveStatus { optimal, infeasible, unbounded, gap_limit, node_limit };

struct MilpSolution {
    SolveStatus status = SolveStatus::infeasible;
    double objective = 0.0;
    std::vector<double> values;
    double bound = -kInf;  // best proven lower bound (minimization)
    long node_count = 0;
    double wall_seconds = 0.0;
};

struct SolverConfig {
    double feasibility_tol = 1e-6;
    double integrality_tol = 1e-6;
    double relative_gap = 1e-4;
    long node_limit = 2'000'000;
    double time_limit_seconds = 0.0;  // 0: no limit
};

const char* to_string(SolveStatus s);

/// Largest constraint violation of `values` over the instance (0 if feasible).
double max_constraint_violation(const MilpInstance& inst, const std::vector<double>& values);

/// Objective value of `values` including the constant term.
double objective_value(const MilpInstance& inst, const std::vector<double>& values);

/// Numerical breakdown inside the simplex; never reported as a wrong verdict.
struct SolverNumericalError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

}  // namespace pebfcs::milp
