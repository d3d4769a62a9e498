#include "pmm/flow/simplex.hpp"

#include <cmath>
#include <stdexcept>

namespace pmm::flow {

size_t LpProblem::add_var(double cost) {
    c.push_back(cost);
    return num_vars++;
}

void LpProblem::check() const {
    if (c.size() != num_vars) throw std::invalid_argument("lp: cost vector size");
    if (eq_lhs.size() != eq_rhs.size()) throw std::invalid_argument("lp: eq row count");
    if (ub_lhs.size() != ub_rhs.size()) throw std::invalid_argument("lp: ub row count");
    for (const auto& row : eq_lhs)
        if (row.size() != num_vars) throw std::invalid_argument("lp: eq row width");
    for (const auto& row : ub_lhs)
        if (row.size() != num_vars) throw std::invalid_argument("lp: ub row width");
}

namespace {

constexpr double kPivotTol = 1e-9;
constexpr double kFeasTol = 1e-7;

struct Tableau {
    size_t rows, cols;  // cols includes the rhs column
    std::vector<double> cells;
    std::vector<size_t> basis;
    std::vector<double> cost;  // reduced-cost row, cost[cols-1] == -objective

    double& at(size_t r, size_t c) { return cells[r * cols + c]; }
    double at(size_t r, size_t c) const { return cells[r * cols + c]; }

    void pivot(size_t prow, size_t pcol) {
        double p = at(prow, pcol);
        for (size_t j = 0; j < cols; j++) at(prow, j) /= p;
        for (size_t i = 0; i < rows; i++) {
            if (i == prow) continue;
            double f = at(i, pcol);
            if (std::fabs(f) < kPivotTol) continue;
            for (size_t j = 0; j < cols; j++) at(i, j) -= f * at(prow, j);
        }
        double f = cost[pcol];
        if (std::fabs(f) >= kPivotTol)
            for (size_t j = 0; j < cols; j++) cost[j] -= f * at(prow, j);
        basis[prow] = pcol;
    }

    void load_costs(const std::vector<double>& c) {
        cost.assign(cols, 0.0);
        for (size_t j = 0; j < c.size(); j++) cost[j] = c[j];
        for (size_t i = 0; i < rows; i++) {
            double cb = basis[i] < c.size() ? c[basis[i]] : 0.0;
            if (std::fabs(cb) < kPivotTol) continue;
            for (size_t j = 0; j < cols; j++) cost[j] -= cb * at(i, j);
        }
    }

    /* Bland's rule keeps the walk cycle-free: smallest eligible entering
     * column, leaving row breaking ratio ties by smallest basic column. */
    enum class Step { Optimal, Unbounded };
    Step run(size_t allowed_cols) {
        for (;;) {
            size_t enter = allowed_cols;
            for (size_t j = 0; j < allowed_cols; j++)
                if (cost[j] < -kFeasTol) {
                    enter = j;
                    break;
                }
            if (enter == allowed_cols) return Step::Optimal;

            size_t leave = rows;
            double best = 0;
            for (size_t i = 0; i < rows; i++) {
                double a = at(i, enter);
                if (a <= kPivotTol) continue;
                double ratio = at(i, cols - 1) / a;
                if (leave == rows || ratio < best - kPivotTol ||
                    (ratio < best + kPivotTol && basis[i] < basis[leave])) {
                    leave = i;
                    best = ratio;
                }
            }
            if (leave == rows) return Step::Unbounded;
            pivot(leave, enter);
        }
    }
};

}  // namespace

LpSolution lp_solve(const LpProblem& p) {
    p.check();
    const size_t n_eq = p.eq_lhs.size(), n_ub = p.ub_lhs.size();
    const size_t m = n_eq + n_ub;
    const size_t n_struct = p.num_vars + n_ub;  // vars then slacks
    const size_t n_total = n_struct + m;        // then artificials

    Tableau t;
    t.rows = m;
    t.cols = n_total + 1;
    t.cells.assign(t.rows * t.cols, 0.0);
    t.basis.resize(m);

    std::vector<double> row_sign(m, 1.0);
    for (size_t i = 0; i < m; i++) {
        const auto& lhs = i < n_eq ? p.eq_lhs[i] : p.ub_lhs[i - n_eq];
        double rhs = i < n_eq ? p.eq_rhs[i] : p.ub_rhs[i - n_eq];
        for (size_t j = 0; j < p.num_vars; j++) t.at(i, j) = lhs[j];
        if (i >= n_eq) t.at(i, p.num_vars + (i - n_eq)) = 1.0;  // slack
        if (rhs < 0) {
            row_sign[i] = -1.0;
            for (size_t j = 0; j < n_struct; j++) t.at(i, j) = -t.at(i, j);
            rhs = -rhs;
        }
        t.at(i, n_total) = rhs;
        t.at(i, n_struct + i) = 1.0;  // artificial
        t.basis[i] = n_struct + i;
    }

    std::vector<double> phase1(n_total, 0.0);
    for (size_t i = 0; i < m; i++) phase1[n_struct + i] = 1.0;
    t.load_costs(phase1);
    if (t.run(n_struct) == Tableau::Step::Unbounded)
        throw std::logic_error("lp_solve: phase 1 cannot be unbounded");

    LpSolution sol;
    if (-t.cost[n_total] > kFeasTol) {
        sol.status = LpStatus::Infeasible;
        return sol;
    }

    /* Pivot leftover artificials onto structural columns when the row
     * still carries one; rows that cannot (all-zero) are redundant and
     * stay parked on their artificial at level zero. */
    for (size_t i = 0; i < m; i++) {
        if (t.basis[i] < n_struct) continue;
        for (size_t j = 0; j < n_struct; j++)
            if (std::fabs(t.at(i, j)) > 1e-7) {
                t.pivot(i, j);
                break;
            }
    }

    std::vector<double> phase2(n_total, 0.0);
    for (size_t j = 0; j < p.num_vars; j++) phase2[j] = p.c[j];
    t.load_costs(phase2);
    if (t.run(n_struct) == Tableau::Step::Unbounded) {
        sol.status = LpStatus::Unbounded;
        return sol;
    }

    sol.status = LpStatus::Optimal;
    sol.x.assign(p.num_vars, 0.0);
    for (size_t i = 0; i < m; i++)
        if (t.basis[i] < p.num_vars) sol.x[t.basis[i]] = t.at(i, n_total);
    sol.objective = 0.0;
    for (size_t j = 0; j < p.num_vars; j++) sol.objective += p.c[j] * sol.x[j];

    /* The artificial block started as the identity, so its final state
     * is B^{-1}; y = c_B B^{-1}, undoing any row negation. */
    std::vector<double> y(m, 0.0);
    for (size_t i = 0; i < m; i++) {
        double acc = 0.0;
        for (size_t k = 0; k < m; k++) {
            double cb = t.basis[k] < p.num_vars ? p.c[t.basis[k]] : 0.0;
            if (cb != 0.0) acc += cb * t.at(k, n_struct + i);
        }
        y[i] = row_sign[i] * acc;
    }
    sol.eq_dual.assign(y.begin(), y.begin() + n_eq);
    sol.ub_dual.assign(y.begin() + n_eq, y.end());
    return sol;
}

}  // namespace pmm::flow
