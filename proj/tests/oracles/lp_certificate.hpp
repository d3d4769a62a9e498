#pragma once

/* Weak-duality audit of a claimed LP optimum: primal feasibility, dual
 * feasibility, and matching objectives certify optimality without
 * trusting the solver's pivot path. Residual arithmetic only. */

#include <algorithm>
#include <cmath>

#include "pmm/flow/simplex.hpp"

namespace oracle {

struct CertificateReport {
    double primal_eq = 0, primal_ub = 0, primal_neg = 0;
    double dual_sign = 0, dual_slack = 0;
    double gap = 0;

    double worst() const {
        return std::max({primal_eq, primal_ub, primal_neg, dual_sign, dual_slack, gap});
    }
};

inline CertificateReport audit_lp_certificate(const pmm::flow::LpProblem& p,
                                              const pmm::flow::LpSolution& sol) {
    CertificateReport rep;
    for (double v : sol.x) rep.primal_neg = std::max(rep.primal_neg, -v);
    for (size_t i = 0; i < p.eq_lhs.size(); i++) {
        double lhs = 0;
        for (size_t j = 0; j < p.num_vars; j++) lhs += p.eq_lhs[i][j] * sol.x[j];
        rep.primal_eq = std::max(rep.primal_eq, std::fabs(lhs - p.eq_rhs[i]));
    }
    for (size_t i = 0; i < p.ub_lhs.size(); i++) {
        double lhs = 0;
        for (size_t j = 0; j < p.num_vars; j++) lhs += p.ub_lhs[i][j] * sol.x[j];
        rep.primal_ub = std::max(rep.primal_ub, lhs - p.ub_rhs[i]);
    }

    for (double w : sol.ub_dual) rep.dual_sign = std::max(rep.dual_sign, w);
    for (size_t j = 0; j < p.num_vars; j++) {
        double lhs = 0;
        for (size_t i = 0; i < p.eq_lhs.size(); i++) lhs += p.eq_lhs[i][j] * sol.eq_dual[i];
        for (size_t i = 0; i < p.ub_lhs.size(); i++) lhs += p.ub_lhs[i][j] * sol.ub_dual[i];
        rep.dual_slack = std::max(rep.dual_slack, lhs - p.c[j]);
    }

    double primal_obj = 0;
    for (size_t j = 0; j < p.num_vars; j++) primal_obj += p.c[j] * sol.x[j];
    double dual_obj = 0;
    for (size_t i = 0; i < p.eq_rhs.size(); i++) dual_obj += p.eq_rhs[i] * sol.eq_dual[i];
    for (size_t i = 0; i < p.ub_rhs.size(); i++) dual_obj += p.ub_rhs[i] * sol.ub_dual[i];
    double scale = std::max(1.0, std::fabs(primal_obj));
    rep.gap = std::fabs(primal_obj - dual_obj) / scale;
    return rep;
}

}  // namespace oracle
