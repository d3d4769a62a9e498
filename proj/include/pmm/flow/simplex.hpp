#pragma once

#include <cstddef>
#include <vector>

namespace pmm::flow {

/* Dense linear program:
 *   min c.x   s.t.   eq_lhs x = eq_rhs,  ub_lhs x <= ub_rhs,  x >= 0.
 * Solved by two-phase primal simplex with Bland's rule; redundant
 * equality rows are tolerated. Sized for the desk-scale instances the
 * routing solvers emit (a few hundred rows and columns). */
struct LpProblem {
    size_t num_vars = 0;
    std::vector<double> c;
    std::vector<std::vector<double>> eq_lhs;
    std::vector<double> eq_rhs;
    std::vector<std::vector<double>> ub_lhs;
    std::vector<double> ub_rhs;

    size_t add_var(double cost);
    void check() const;  // throws std::invalid_argument on shape mismatch
};

enum class LpStatus { Optimal, Infeasible, Unbounded };

struct LpSolution {
    LpStatus status = LpStatus::Infeasible;
    std::vector<double> x;
    double objective = 0.0;
    /* Duals of the original rows: optimal solutions satisfy
     * objective == eq_rhs.eq_dual + ub_rhs.ub_dual, ub_dual <= 0, and
     * eq_lhs'.eq_dual + ub_lhs'.ub_dual <= c componentwise. */
    std::vector<double> eq_dual;
    std::vector<double> ub_dual;
};

LpSolution lp_solve(const LpProblem& p);

}  // namespace pmm::flow
