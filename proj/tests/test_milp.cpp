#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <random>

#include "oracle_lp.hpp"
#include "pebfcs/milp/mps.hpp"
#include "pebfcs/milp/solver.hpp"

using namespace pebfcs::milp;

namespace {

MilpInstance knapsack() {
    // max 10a + 6b + 4c s.t. 5a + 4b + 3c <= 8 -> minimize the negation.
    MilpInstance inst;
    int a = inst.add_binary("a"), b = inst.add_binary("b"), c = inst.add_binary("c");
    inst.add_constraint("cap", {{a, 5.0}, {b, 4.0}, {c, 3.0}}, Sense::le, 8.0);
    inst.add_objective_term(a, -10.0);
    inst.add_objective_term(b, -6.0);
    inst.add_objective_term(c, -4.0);
    return inst;
}

MilpInstance random_lp(std::mt19937_64& rng, int rows, int cols) {
    std::uniform_real_distribution<double> coeff(-3.0, 3.0);
    std::uniform_real_distribution<double> width(0.5, 4.0);
    std::uniform_int_distribution<int> sense_pick(0, 5);
    MilpInstance inst;
    for (int j = 0; j < cols; ++j) {
        double lo = coeff(rng);
        inst.add_continuous("x" + std::to_string(j), lo, lo + width(rng));
        inst.add_objective_term(j, coeff(rng));
    }
    for (int i = 0; i < rows; ++i) {
        std::vector<std::pair<int, double>> terms;
        for (int j = 0; j < cols; ++j) {
            double c = coeff(rng);
            if (std::abs(c) > 0.8) terms.emplace_back(j, c);
        }
        if (terms.empty()) terms.emplace_back(0, 1.0);
        int s = sense_pick(rng);
        Sense sense = s == 0 ? Sense::ge : Sense::le;  // a few >= rows
        inst.add_constraint("r" + std::to_string(i), std::move(terms), sense,
                            coeff(rng) * 2.0 + (sense == Sense::le ? 3.0 : -3.0));
    }
    return inst;
}

MilpInstance random_milp(std::mt19937_64& rng, int binaries, int continuous, int rows) {
    MilpInstance inst = random_lp(rng, rows, continuous);
    std::uniform_real_distribution<double> coeff(-3.0, 3.0);
    for (int b = 0; b < binaries; ++b) {
        int j = inst.add_binary("z" + std::to_string(b));
        inst.add_objective_term(j, coeff(rng));
        // Couple the binary into a couple of rows.
        for (auto& con : inst.cons)
            if ((static_cast<int>(con.coeffs.size()) + b) % 3 == 0)
                con.coeffs.emplace_back(j, coeff(rng));
    }
    return inst;
}

}  // namespace

TEST_CASE("solve_lp on one-variable floor") {
    MilpInstance inst;
    int x = inst.add_continuous("x", 0.0, 10.0);
    inst.add_constraint("floor", {{x, 1.0}}, Sense::ge, 3.0);
    inst.add_objective_term(x, 1.0);
    auto sol = solve_lp(inst);
    REQUIRE(sol.status == SolveStatus::optimal);
    CHECK(sol.objective == doctest::Approx(3.0).epsilon(1e-9));
    CHECK(sol.values[x] == doctest::Approx(3.0).epsilon(1e-9));
}

TEST_CASE("solve_lp on symmetric facet") {
    MilpInstance inst;
    int x = inst.add_continuous("x", 0.0, 1.0);
    int y = inst.add_continuous("y", 0.0, 1.0);
    inst.add_constraint("cap", {{x, 1.0}, {y, 1.0}}, Sense::le, 1.0);
    inst.add_objective_term(x, -1.0);
    inst.add_objective_term(y, -1.0);
    auto sol = solve_lp(inst);
    REQUIRE(sol.status == SolveStatus::optimal);
    CHECK(sol.objective == doctest::Approx(-1.0).epsilon(1e-9));
}

TEST_CASE("solve_lp detects infeasibility and unboundedness") {
    MilpInstance infeas;
    int x = infeas.add_continuous("x", 0.0, 1.0);
    infeas.add_constraint("hi", {{x, 1.0}}, Sense::ge, 2.0);
    CHECK(solve_lp(infeas).status == SolveStatus::infeasible);

    MilpInstance unb;
    int y = unb.add_continuous("y", 0.0, kInf);
    unb.add_objective_term(y, -1.0);
    CHECK(solve_lp(unb).status == SolveStatus::unbounded);
}

TEST_CASE("solve_lp matches the independent oracle on random LPs") {
    std::mt19937_64 rng(20240517);
    int feasible_seen = 0;
    for (int trial = 0; trial < 120; ++trial) {
        MilpInstance inst = random_lp(rng, 5, 8);
        double expect = oracle::solve_lp_oracle(inst);
        auto sol = solve_lp(inst);
        if (!std::isfinite(expect)) {
            CHECK(sol.status != SolveStatus::optimal);
            continue;
        }
        ++feasible_seen;
        REQUIRE(sol.status == SolveStatus::optimal);
        CHECK(sol.objective == doctest::Approx(expect).epsilon(1e-6));
        CHECK(max_constraint_violation(inst, sol.values) < 1e-6);
    }
    CHECK(feasible_seen > 40);  // the generator must actually exercise the solver
}

TEST_CASE("knapsack optimum via branch and bound and brute force") {
    MilpInstance inst = knapsack();
    auto milp = solve_milp(inst);
    REQUIRE(milp.status == SolveStatus::optimal);
    CHECK(milp.objective == doctest::Approx(-14.0).epsilon(1e-9));
    CHECK(milp.values[0] == doctest::Approx(1.0));
    CHECK(milp.values[1] == doctest::Approx(0.0));
    CHECK(milp.values[2] == doctest::Approx(1.0));

    auto brute = brute_force_binary(inst);
    REQUIRE(brute.status == SolveStatus::optimal);
    CHECK(brute.objective == doctest::Approx(-14.0).epsilon(1e-9));
}

TEST_CASE("brute force equals solve_lp when no binaries") {
    std::mt19937_64 rng(7);
    MilpInstance inst = random_lp(rng, 4, 5);
    auto lp = solve_lp(inst);
    auto brute = brute_force_binary(inst);
    REQUIRE(lp.status == brute.status);
    if (lp.status == SolveStatus::optimal)
        CHECK(brute.objective == doctest::Approx(lp.objective).epsilon(1e-9));
}

TEST_CASE("brute force refuses oversized instances") {
    MilpInstance inst;
    for (int i = 0; i < 25; ++i) inst.add_binary("b" + std::to_string(i));
    CHECK_THROWS_AS(brute_force_binary(inst), std::invalid_argument);
}

TEST_CASE("LP-integral instance solves at the root") {
    // Assignment-style totally unimodular toy.
    MilpInstance inst;
    int x00 = inst.add_binary("x00"), x01 = inst.add_binary("x01");
    int x10 = inst.add_binary("x10"), x11 = inst.add_binary("x11");
    inst.add_constraint("r0", {{x00, 1.0}, {x01, 1.0}}, Sense::eq, 1.0);
    inst.add_constraint("r1", {{x10, 1.0}, {x11, 1.0}}, Sense::eq, 1.0);
    inst.add_constraint("c0", {{x00, 1.0}, {x10, 1.0}}, Sense::eq, 1.0);
    inst.add_constraint("c1", {{x01, 1.0}, {x11, 1.0}}, Sense::eq, 1.0);
    inst.add_objective_term(x00, 1.0);
    inst.add_objective_term(x01, 2.0);
    inst.add_objective_term(x10, 4.0);
    inst.add_objective_term(x11, 1.0);
    auto sol = solve_milp(inst);
    REQUIRE(sol.status == SolveStatus::optimal);
    CHECK(sol.objective == doctest::Approx(2.0));
    CHECK(sol.node_count == 1);
}

TEST_CASE("solve_milp equals brute force on random small MILPs") {
    std::mt19937_64 rng(99123);
    int solved = 0;
    for (int trial = 0; trial < 40; ++trial) {
        MilpInstance inst = random_milp(rng, 8, 4, 6);
        auto brute = brute_force_binary(inst);
        auto milp = solve_milp(inst);
        REQUIRE(milp.status == brute.status);
        if (brute.status != SolveStatus::optimal) continue;
        ++solved;
        CHECK(milp.objective == doctest::Approx(brute.objective).epsilon(1e-6));
        CHECK(max_constraint_violation(inst, milp.values) < 1e-6);
        // LP relaxation is a valid lower bound.
        auto lp = solve_lp(inst);
        REQUIRE(lp.status == SolveStatus::optimal);
        CHECK(lp.objective <= milp.objective + 1e-6);
    }
    CHECK(solved > 15);
}

TEST_CASE("solver is deterministic") {
    std::mt19937_64 rng(4242);
    MilpInstance inst = random_milp(rng, 10, 5, 7);
    auto a = solve_milp(inst);
    auto b = solve_milp(inst);
    REQUIRE(a.status == b.status);
    if (a.status == SolveStatus::optimal) {
        CHECK(a.objective == b.objective);
        CHECK(a.values == b.values);
        CHECK(a.node_count == b.node_count);
    }
}

TEST_CASE("MPS round trip is coefficient-identical") {
    std::mt19937_64 rng(555);
    for (int trial = 0; trial < 10; ++trial) {
        MilpInstance inst = random_milp(rng, 4, 4, 5);
        inst.objective_constant = 2.5;
        MilpInstance back = parse_mps(write_mps(inst));
        REQUIRE(back.vars.size() == inst.vars.size());
        REQUIRE(back.cons.size() == inst.cons.size());
        CHECK(back.objective_constant == doctest::Approx(inst.objective_constant));
        for (size_t j = 0; j < inst.vars.size(); ++j) {
            CHECK(back.vars[j].kind == inst.vars[j].kind);
            CHECK(back.vars[j].lower == doctest::Approx(inst.vars[j].lower));
            CHECK(back.vars[j].upper == doctest::Approx(inst.vars[j].upper));
        }
        // Compare dense coefficient matrices (duplicates merged either way).
        auto dense = [&](const MilpInstance& m) {
            std::vector<std::vector<double>> d(m.cons.size() + 1,
                                               std::vector<double>(m.vars.size(), 0.0));
            for (auto [j, c] : m.objective) d[0][j] += c;
            for (size_t i = 0; i < m.cons.size(); ++i)
                for (auto [j, c] : m.cons[i].coeffs) d[i + 1][j] += c;
            return d;
        };
        auto da = dense(inst), db = dense(back);
        for (size_t i = 0; i < da.size(); ++i)
            for (size_t j = 0; j < da[i].size(); ++j)
                CHECK(db[i][j] == doctest::Approx(da[i][j]).epsilon(1e-10));
        for (size_t i = 0; i < inst.cons.size(); ++i) {
            CHECK(back.cons[i].sense == inst.cons[i].sense);
            CHECK(back.cons[i].rhs == doctest::Approx(inst.cons[i].rhs));
        }
    }
}

TEST_CASE("MPS writer emits one INTORG/INTEND pair per binary run") {
    MilpInstance inst;
    inst.add_continuous("x", 0.0, 2.0);
    inst.add_binary("b1");
    inst.add_binary("b2");
    inst.add_continuous("y", 0.0, 2.0);
    inst.add_binary("b3");
    inst.add_objective_term(0, 1.0);
    std::string text = write_mps(inst);
    size_t orgs = 0, ends = 0, pos = 0;
    while ((pos = text.find("'INTORG'", pos)) != std::string::npos) { ++orgs; pos += 8; }
    pos = 0;
    while ((pos = text.find("'INTEND'", pos)) != std::string::npos) { ++ends; pos += 8; }
    CHECK(orgs == 2);
    CHECK(ends == 2);
    CHECK(text.find("ENDATA") != std::string::npos);
}

TEST_CASE("MPS handles an empty objective") {
    MilpInstance inst;
    int x = inst.add_continuous("x", 0.0, 1.0);
    inst.add_constraint("r", {{x, 1.0}}, Sense::le, 1.0);
    MilpInstance back = parse_mps(write_mps(inst));
    CHECK(back.objective.size() <= 1);  // at most the explicit zero entry
    auto sol = solve_lp(back);
    CHECK(sol.status == SolveStatus::optimal);
    CHECK(sol.objective == doctest::Approx(0.0));
}

TEST_CASE("solve_external reports a missing solver distinctly") {
    MilpInstance inst = knapsack();
    CHECK_THROWS_AS(solve_external(inst, "pebfcs-no-such-solver-xyz"), ExternalSolverUnavailable);
}

TEST_CASE("solve_external parses a name/value solution file") {
    namespace fs = std::filesystem;
    fs::path script = fs::temp_directory_path() / "pebfcs_fake_solver.sh";
    {
        std::ofstream out(script);
        out << "#!/bin/sh\n"
            << "printf 'X0000001 1\\nX0000002 0\\nX0000003 1\\n' > \"$2\"\n";
    }
    fs::permissions(script, fs::perms::owner_all);
    MilpInstance inst = knapsack();
    auto sol = solve_external(inst, script.string());
    REQUIRE(sol.status == SolveStatus::optimal);
    CHECK(sol.objective == doctest::Approx(-14.0));
    fs::remove(script);
}

TEST_CASE("solve_external round trip through a real solver when present") {
    bool have_cbc = std::system("command -v cbc > /dev/null 2>&1") == 0;
    if (!have_cbc) return;  // optional dependency; skip silently
    namespace fs = std::filesystem;
    fs::path script = fs::temp_directory_path() / "pebfcs_cbc.sh";
    {
        std::ofstream out(script);
        out << "#!/bin/sh\ncbc \"$1\" solve solu \"$2\" > /dev/null\n";
    }
    fs::permissions(script, fs::perms::owner_all);
    auto sol = solve_external(knapsack(), script.string());
    REQUIRE(sol.status == SolveStatus::optimal);
    CHECK(sol.objective == doctest::Approx(-14.0).epsilon(1e-6));
    fs::remove(script);
}
