#include <array>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>
#include <sys/wait.h>
#include <unistd.h>

#include "pebfcs/milp/mps.hpp"

namespace pebfcs::milp {

namespace {

std::string num(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.12g", v);
    return buf;
}

// Fixed-format field layout: fields 2/3 at columns 5-12 / 15-22, values at
// 25-36 and 50-61.
void put_field(std::string& line, size_t col, const std::string& text) {
    if (line.size() < col + text.size()) line.resize(col + text.size(), ' ');
    line.replace(col, text.size(), text);
}

std::string entry(const std::string& f1, const std::string& f2, const std::string& f3 = "",
                  const std::string& f4 = "", const std::string& f5 = "") {
    std::string line;
    put_field(line, 1, f1);
    put_field(line, 4, f2);
    if (!f3.empty()) put_field(line, 14, f3);
    if (!f4.empty()) put_field(line, 24, f4);
    if (!f5.empty()) put_field(line, 39, f5);
    return line;
}

}  // namespace

std::string mps_var_name(int index) {
    char buf[16];
    std::snprintf(buf, sizeof(buf), "X%07d", index + 1);
    return buf;
}

std::string mps_row_name(int index) {
    char buf[16];
    std::snprintf(buf, sizeof(buf), "R%07d", index + 1);
    return buf;
}

std::string write_mps(const MilpInstance& inst) {
    inst.check_well_formed();
    const int n = static_cast<int>(inst.vars.size());
    const int m = static_cast<int>(inst.cons.size());

    // Column-major coefficient map; duplicate terms are merged.
    std::vector<std::map<int, double>> columns(n);  // var -> row(-1: objective) -> coeff
    for (const auto& [j, c] : inst.objective) columns[j][-1] += c;
    for (int i = 0; i < m; ++i)
        for (const auto& [j, c] : inst.cons[i].coeffs) columns[j][i] += c;

    std::ostringstream out;
    out << "NAME          PEBFCS\n";
    out << "ROWS\n";
    out << entry("N", "COST") << "\n";
    for (int i = 0; i < m; ++i) {
        const char* sense = inst.cons[i].sense == Sense::le   ? "L"
                            : inst.cons[i].sense == Sense::ge ? "G"
                                                              : "E";
        out << entry(sense, mps_row_name(i)) << "\n";
    }

    out << "COLUMNS\n";
    bool in_int = false;
    int marker = 0;
    for (int j = 0; j < n; ++j) {
        bool is_int = inst.vars[j].kind == VarKind::binary;
        if (is_int != in_int) {
            char mbuf[16];
            std::snprintf(mbuf, sizeof(mbuf), "M%07d", ++marker);
            out << entry("", mbuf, "'MARKER'", "", is_int ? "'INTORG'" : "'INTEND'") << "\n";
            in_int = is_int;
        }
        const std::string vname = mps_var_name(j);
        for (const auto& [i, c] : columns[j]) {
            if (c == 0.0) continue;
            out << entry("", vname, i < 0 ? "COST" : mps_row_name(i), num(c)) << "\n";
        }
        if (columns[j].empty()) out << entry("", vname, "COST", "0") << "\n";
    }
    if (in_int) {
        char mbuf[16];
        std::snprintf(mbuf, sizeof(mbuf), "M%07d", ++marker);
        out << entry("", mbuf, "'MARKER'", "", "'INTEND'") << "\n";
    }

    out << "RHS\n";
    for (int i = 0; i < m; ++i)
        if (inst.cons[i].rhs != 0.0)
            out << entry("", "RHS", mps_row_name(i), num(inst.cons[i].rhs)) << "\n";
    if (inst.objective_constant != 0.0)
        out << entry("", "RHS", "COST", num(-inst.objective_constant)) << "\n";

    out << "BOUNDS\n";
    for (int j = 0; j < n; ++j) {
        const auto& v = inst.vars[j];
        const std::string vname = mps_var_name(j);
        if (v.kind == VarKind::binary && v.lower == 0.0 && v.upper == 1.0) {
            out << entry("BV", "BND", vname) << "\n";
            continue;
        }
        bool lo_fin = std::isfinite(v.lower), up_fin = std::isfinite(v.upper);
        if (lo_fin && up_fin && v.lower == v.upper) {
            out << entry("FX", "BND", vname, num(v.lower)) << "\n";
            continue;
        }
        if (!lo_fin && !up_fin) {
            out << entry("FR", "BND", vname) << "\n";
            continue;
        }
        if (!lo_fin)
            out << entry("MI", "BND", vname) << "\n";
        else if (v.lower != 0.0)
            out << entry("LO", "BND", vname, num(v.lower)) << "\n";
        if (up_fin) out << entry("UP", "BND", vname, num(v.upper)) << "\n";
    }
    out << "ENDATA\n";
    return out.str();
}

MilpInstance parse_mps(const std::string& text) {
    MilpInstance inst;
    std::map<std::string, int> row_ids;  // -1 reserved for objective
    std::map<std::string, int> var_ids;
    std::string obj_row;

    enum Section { none, rows, cols, rhs, ranges, bounds } section = none;
    bool in_int = false;

    std::istringstream in(text);
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty() || line[0] == '*') continue;
        std::istringstream ls(line);
        std::vector<std::string> tok;
        std::string t;
        while (ls >> t) tok.push_back(t);
        if (tok.empty()) continue;

        if (line[0] != ' ' && line[0] != '\t') {
            const std::string& head = tok[0];
            if (head == "NAME") section = none;
            else if (head == "ROWS") section = rows;
            else if (head == "COLUMNS") section = cols;
            else if (head == "RHS") section = rhs;
            else if (head == "RANGES") section = ranges;
            else if (head == "BOUNDS") section = bounds;
            else if (head == "ENDATA") break;
            else throw std::runtime_error("parse_mps: unknown section " + head);
            continue;
        }

        switch (section) {
            case rows: {
                if (tok.size() < 2) throw std::runtime_error("parse_mps: bad ROWS line");
                if (tok[0] == "N") {
                    if (obj_row.empty()) obj_row = tok[1];
                } else {
                    Sense s = tok[0] == "L" ? Sense::le : tok[0] == "G" ? Sense::ge : Sense::eq;
                    row_ids[tok[1]] = static_cast<int>(inst.cons.size());
                    inst.cons.push_back({tok[1], {}, s, 0.0});
                }
                break;
            }
            case cols: {
                if (tok.size() >= 3 && tok[1] == "'MARKER'") {
                    in_int = tok.back() == "'INTORG'";
                    break;
                }
                auto var_of = [&](const std::string& name) {
                    auto it = var_ids.find(name);
                    if (it != var_ids.end()) return it->second;
                    int id = in_int ? inst.add_binary(name)
                                    : inst.add_continuous(name, 0.0, kInf);
                    var_ids[name] = id;
                    return id;
                };
                int j = var_of(tok[0]);
                for (size_t p = 1; p + 1 < tok.size(); p += 2) {
                    double c = std::stod(tok[p + 1]);
                    if (tok[p] == obj_row) inst.objective.emplace_back(j, c);
                    else inst.cons[row_ids.at(tok[p])].coeffs.emplace_back(j, c);
                }
                break;
            }
            case rhs: {
                for (size_t p = 1; p + 1 < tok.size(); p += 2) {
                    double v = std::stod(tok[p + 1]);
                    if (tok[p] == obj_row) inst.objective_constant = -v;
                    else inst.cons[row_ids.at(tok[p])].rhs = v;
                }
                break;
            }
            case bounds: {
                if (tok.size() < 3) throw std::runtime_error("parse_mps: bad BOUNDS line");
                auto it = var_ids.find(tok[2]);
                if (it == var_ids.end())
                    throw std::runtime_error("parse_mps: bound for unknown column " + tok[2]);
                Variable& v = inst.vars[it->second];
                const std::string& kind = tok[0];
                double val = tok.size() >= 4 ? std::stod(tok[3]) : 0.0;
                if (kind == "UP") v.upper = val;
                else if (kind == "LO") v.lower = val;
                else if (kind == "FX") v.lower = v.upper = val;
                else if (kind == "FR") { v.lower = -kInf; v.upper = kInf; }
                else if (kind == "MI") v.lower = -kInf;
                else if (kind == "PL") v.upper = kInf;
                else if (kind == "BV") { v.kind = VarKind::binary; v.lower = 0.0; v.upper = 1.0; }
                else if (kind == "UI") v.upper = val;
                else if (kind == "LI") v.lower = val;
                else throw std::runtime_error("parse_mps: unknown bound kind " + kind);
                break;
            }
            default: break;
        }
    }
    inst.check_well_formed();
    return inst;
}

namespace {

MilpSolution parse_solution_file(const MilpInstance& inst, const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ExternalSolutionParseError("cannot open solution file " + path);

    std::map<std::string, int> var_ids;
    for (size_t j = 0; j < inst.vars.size(); ++j) var_ids[mps_var_name(static_cast<int>(j))] = static_cast<int>(j);

    MilpSolution sol;
    sol.values.assign(inst.vars.size(), 0.0);
    bool any = false;
    bool status_seen = false;
    std::string line;
    while (std::getline(in, line)) {
        std::istringstream ls(line);
        std::vector<std::string> tok;
        std::string t;
        while (ls >> t) tok.push_back(t);
        if (tok.empty()) continue;

        // CBC-style header: "Optimal - objective value 14" or "Infeasible ...".
        if (!status_seen && var_ids.find(tok[0]) == var_ids.end() &&
            (tok[0] == "Optimal" || tok[0] == "Infeasible" || tok[0] == "Unbounded" ||
             tok[0] == "Stopped")) {
            status_seen = true;
            if (tok[0] == "Infeasible") sol.status = SolveStatus::infeasible;
            else if (tok[0] == "Unbounded") sol.status = SolveStatus::unbounded;
            else sol.status = SolveStatus::optimal;
            continue;
        }

        // Either "name value" or CBC's "index name value reducedcost".
        std::string name;
        double value = 0.0;
        if (tok.size() >= 2 && var_ids.count(tok[0])) {
            name = tok[0];
            value = std::stod(tok[1]);
        } else if (tok.size() >= 3 && var_ids.count(tok[1])) {
            name = tok[1];
            value = std::stod(tok[2]);
        } else {
            continue;
        }
        sol.values[var_ids.at(name)] = value;
        any = true;
    }
    if (!status_seen) sol.status = SolveStatus::optimal;
    if (sol.status == SolveStatus::optimal && !any)
        throw ExternalSolutionParseError("solution file " + path + " holds no variable values");
    if (sol.status == SolveStatus::optimal) {
        sol.objective = objective_value(inst, sol.values);
        sol.bound = sol.objective;
    }
    return sol;
}

}  // namespace

MilpSolution solve_external(const MilpInstance& inst, const std::string& solver_command,
                            const SolverConfig& config) {
    namespace fs = std::filesystem;
    (void)config;
    fs::path dir = fs::temp_directory_path() /
                   ("pebfcs-" + std::to_string(static_cast<long>(::getpid())) + "-" +
                    std::to_string(reinterpret_cast<uintptr_t>(&inst) & 0xffff));
    fs::create_directories(dir);
    fs::path model = dir / "model.mps";
    fs::path solution = dir / "model.sol";
    {
        std::ofstream out(model);
        out << write_mps(inst);
    }

    std::string cmd = solver_command + " \"" + model.string() + "\" \"" + solution.string() +
                      "\" > \"" + (dir / "solver.log").string() + "\" 2>&1";
    int rc = std::system(cmd.c_str());
    int exit_code = WIFEXITED(rc) ? WEXITSTATUS(rc) : -1;
    if (exit_code == 127)
        throw ExternalSolverUnavailable("solver unavailable: " + solver_command);
    if (exit_code != 0)
        throw ExternalSolverFailure("external solver exited with code " +
                                    std::to_string(exit_code));
    if (!fs::exists(solution))
        throw ExternalSolutionParseError("external solver produced no solution file");
    return parse_solution_file(inst, solution.string());
}

}  // namespace pebfcs::milp
