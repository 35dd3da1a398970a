#include <cmath>
#include <stdexcept>

#include "pebfcs/milp/instance.hpp"

namespace pebfcs::milp {

int MilpInstance::add_continuous(std::string name, double lower, double upper) {
    vars.push_back({std::move(name), lower, upper, VarKind::continuous});
    return static_cast<int>(vars.size()) - 1;
}

int MilpInstance::add_binary(std::string name) {
    vars.push_back({std::move(name), 0.0, 1.0, VarKind::binary});
    return static_cast<int>(vars.size()) - 1;
}

void MilpInstance::add_constraint(std::string name, std::vector<std::pair<int, double>> coeffs,
                                  Sense sense, double rhs) {
    cons.push_back({std::move(name), std::move(coeffs), sense, rhs});
}

void MilpInstance::add_objective_term(int var, double coeff) {
    objective.emplace_back(var, coeff);
}

int MilpInstance::binary_count() const {
    int count = 0;
    for (const auto& v : vars)
        if (v.kind == VarKind::binary) ++count;
    return count;
}

void MilpInstance::check_well_formed() const {
    const int n = static_cast<int>(vars.size());
    for (const auto& v : vars) {
        if (std::isnan(v.lower) || std::isnan(v.upper))
            throw std::invalid_argument("variable " + v.name + " has NaN bound");
        if (v.kind == VarKind::binary && (v.lower < -1e-12 || v.upper > 1.0 + 1e-12))
            throw std::invalid_argument("binary " + v.name + " has bounds outside [0,1]");
    }
    auto check_terms = [&](const std::vector<std::pair<int, double>>& terms,
                           const std::string& where) {
        for (const auto& [j, c] : terms) {
            if (j < 0 || j >= n)
                throw std::invalid_argument(where + " references unknown variable");
            if (!std::isfinite(c))
                throw std::invalid_argument(where + " has non-finite coefficient");
        }
    };
    check_terms(objective, "objective");
    for (const auto& con : cons) {
        check_terms(con.coeffs, "constraint " + con.name);
        if (!std::isfinite(con.rhs))
            throw std::invalid_argument("constraint " + con.name + " has non-finite rhs");
    }
}

const char* to_string(SolveStatus s) {
    switch (s) {
        case SolveStatus::optimal: return "optimal";
        case SolveStatus::infeasible: return "infeasible";
        case SolveStatus::unbounded: return "unbounded";
        case SolveStatus::gap_limit: return "gap_limit";
        case SolveStatus::node_limit: return "node_limit";
    }
    return "?";
}

double max_constraint_violation(const MilpInstance& inst, const std::vector<double>& values) {
    double worst = 0.0;
    for (const auto& con : inst.cons) {
        double lhs = 0.0;
        for (const auto& [j, c] : con.coeffs) lhs += c * values[j];
        double v = 0.0;
        switch (con.sense) {
            case Sense::le: v = lhs - con.rhs; break;
            case Sense::ge: v = con.rhs - lhs; break;
            case Sense::eq: v = std::abs(lhs - con.rhs); break;
        }
        worst = std::max(worst, v);
    }
    for (size_t j = 0; j < inst.vars.size(); ++j) {
        worst = std::max(worst, inst.vars[j].lower - values[j]);
        worst = std::max(worst, values[j] - inst.vars[j].upper);
    }
    return worst;
}

double objective_value(const MilpInstance& inst, const std::vector<double>& values) {
    double obj = inst.objective_constant;
    for (const auto& [j, c] : inst.objective) obj += c * values[j];
    return obj;
}

}  // namespace pebfcs::milp
