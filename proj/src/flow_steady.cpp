#include "pmm/flow/steady.hpp"

#include <cmath>
#include <cstdio>
#include <sstream>

namespace pmm::flow {

std::vector<double> SteadyFlow::total_edge_flow(size_t num_edges) const {
    std::vector<double> total(num_edges, 0.0);
    for (const auto& field : passenger)
        for (size_t e = 0; e < num_edges && e < field.size(); e++) total[e] += field[e];
    for (size_t e = 0; e < num_edges && e < rebalance.size(); e++) total[e] += rebalance[e];
    return total;
}

std::string SteadyFlow::to_table() const {
    std::ostringstream out;
    char buf[64];
    for (size_t k = 0; k < commodities.size(); k++)
        for (size_t e = 0; e < passenger[k].size(); e++)
            if (std::fabs(passenger[k][e]) > 5e-7) {
                std::snprintf(buf, sizeof buf, "pair %u %u edge %zu %.6f",
                              commodities[k].first, commodities[k].second, e, passenger[k][e]);
                out << buf << "\n";
            }
    for (size_t e = 0; e < rebalance.size(); e++)
        if (std::fabs(rebalance[e]) > 5e-7) {
            std::snprintf(buf, sizeof buf, "rebalance edge %zu %.6f", e, rebalance[e]);
            out << buf << "\n";
        }
    return out.str();
}

SteadyResiduals check_steady_feasibility(const net::Network& net, const net::DemandMatrix& demand,
                                         const SteadyFlow& flow) {
    SteadyResiduals res;
    size_t E = net.edges.size();
    auto total = flow.total_edge_flow(E);

    for (uint32_t u = 0; u < net.n; u++) {
        double div = 0;
        for (uint32_t e : net.out_edges[u]) div += total[e];
        for (uint32_t e : net.in_edges[u]) div -= total[e];
        res.vehicle_conservation = std::max(res.vehicle_conservation, std::fabs(div));
    }

    for (size_t k = 0; k < flow.commodities.size(); k++) {
        auto [i, j] = flow.commodities[k];
        double rate = demand.at(i, j);
        for (uint32_t u = 0; u < net.n; u++) {
            double div = 0;
            for (uint32_t e : net.out_edges[u]) div += flow.passenger[k][e];
            for (uint32_t e : net.in_edges[u]) div -= flow.passenger[k][e];
            double want = (u == i ? rate : 0.0) - (u == j ? rate : 0.0);
            res.commodity_conservation =
                std::max(res.commodity_conservation, std::fabs(div - want));
        }
    }

    for (const auto& field : flow.passenger)
        for (double v : field) res.negativity = std::max(res.negativity, -v);
    for (double v : flow.rebalance) res.negativity = std::max(res.negativity, -v);
    return res;
}

SteadyProgram build_steady_program(const net::Network& net, const net::DemandMatrix& demand,
                                   const MpEconomics& econ) {
    demand.check();
    if (demand.n != net.n) throw std::invalid_argument("build_steady_program: size mismatch");
    const size_t E = net.edges.size();

    SteadyProgram prog;
    for (uint32_t i = 0; i < net.n; i++)
        for (uint32_t j = 0; j < net.n; j++)
            if (demand.at(i, j) > 0) prog.commodities.push_back({i, j});

    LpProblem& lp = prog.lp;
    auto var_cost = [&](uint32_t e) { return econ.cost_per_length * net.edges[e].length; };
    // Passenger variables [k][e] then rebalancing [e].
    prog.pvar.assign(prog.commodities.size(), std::vector<size_t>(E));
    for (size_t k = 0; k < prog.commodities.size(); k++)
        for (uint32_t e = 0; e < E; e++) prog.pvar[k][e] = lp.add_var(var_cost(e));
    prog.rvar.resize(E);
    for (uint32_t e = 0; e < E; e++) prog.rvar[e] = lp.add_var(var_cost(e));

    auto blank_row = [&]() { return std::vector<double>(lp.num_vars, 0.0); };

    for (size_t k = 0; k < prog.commodities.size(); k++) {
        auto [i, j] = prog.commodities[k];
        double rate = demand.at(i, j);
        for (uint32_t u = 0; u < net.n; u++) {
            auto row = blank_row();
            for (uint32_t e : net.out_edges[u]) row[prog.pvar[k][e]] += 1;
            for (uint32_t e : net.in_edges[u]) row[prog.pvar[k][e]] -= 1;
            lp.eq_lhs.push_back(std::move(row));
            lp.eq_rhs.push_back((u == i ? rate : 0.0) - (u == j ? rate : 0.0));
        }
    }
    for (uint32_t u = 0; u < net.n; u++) {
        auto row = blank_row();
        for (uint32_t e : net.out_edges[u]) {
            for (size_t k = 0; k < prog.commodities.size(); k++) row[prog.pvar[k][e]] += 1;
            row[prog.rvar[e]] += 1;
        }
        for (uint32_t e : net.in_edges[u]) {
            for (size_t k = 0; k < prog.commodities.size(); k++) row[prog.pvar[k][e]] -= 1;
            row[prog.rvar[e]] -= 1;
        }
        lp.eq_lhs.push_back(std::move(row));
        lp.eq_rhs.push_back(0.0);
    }
    return prog;
}

SteadyResult extract_steady_result(const SteadyProgram& prog, const LpSolution& sol,
                                   const net::DemandMatrix& demand, const MpEconomics& econ) {
    SteadyResult result;
    result.status = sol.status;
    if (sol.status != LpStatus::Optimal) return result;
    const size_t E = prog.rvar.size();

    result.flow.commodities = prog.commodities;
    result.flow.passenger.assign(prog.commodities.size(), std::vector<double>(E, 0.0));
    for (size_t k = 0; k < prog.commodities.size(); k++)
        for (uint32_t e = 0; e < E; e++) result.flow.passenger[k][e] = sol.x[prog.pvar[k][e]];
    result.flow.rebalance.assign(E, 0.0);
    for (uint32_t e = 0; e < E; e++) result.flow.rebalance[e] = sol.x[prog.rvar[e]];

    result.revenue = econ.fare_per_request * demand.total();
    result.operating_cost = sol.objective;
    result.profit = result.revenue - result.operating_cost;
    return result;
}

SteadyResult solve_mp_routing(const net::Network& net, const net::DemandMatrix& demand,
                              const MpEconomics& econ) {
    SteadyProgram prog = build_steady_program(net, demand, econ);
    return extract_steady_result(prog, lp_solve(prog.lp), demand, econ);
}

double CertResiduals::worst() const {
    return std::max({primal_eq, primal_ub, primal_neg, dual_sign, dual_slack, gap});
}

CertResiduals certificate_residuals(const LpProblem& p, const std::vector<double>& x,
                                    const std::vector<double>& eq_dual,
                                    const std::vector<double>& ub_dual) {
    CertResiduals rep;
    if (x.size() != p.num_vars || eq_dual.size() != p.eq_lhs.size() ||
        ub_dual.size() != p.ub_lhs.size()) {
        rep.primal_eq = rep.dual_slack = std::numeric_limits<double>::infinity();
        return rep;
    }
    for (double v : x) rep.primal_neg = std::max(rep.primal_neg, -v);
    for (size_t i = 0; i < p.eq_lhs.size(); i++) {
        double lhs = 0;
        for (size_t j = 0; j < p.num_vars; j++) lhs += p.eq_lhs[i][j] * x[j];
        rep.primal_eq = std::max(rep.primal_eq, std::fabs(lhs - p.eq_rhs[i]));
    }
    for (size_t i = 0; i < p.ub_lhs.size(); i++) {
        double lhs = 0;
        for (size_t j = 0; j < p.num_vars; j++) lhs += p.ub_lhs[i][j] * x[j];
        rep.primal_ub = std::max(rep.primal_ub, lhs - p.ub_rhs[i]);
    }
    for (double w : ub_dual) rep.dual_sign = std::max(rep.dual_sign, w);
    for (size_t j = 0; j < p.num_vars; j++) {
        double lhs = 0;
        for (size_t i = 0; i < p.eq_lhs.size(); i++) lhs += p.eq_lhs[i][j] * eq_dual[i];
        for (size_t i = 0; i < p.ub_lhs.size(); i++) lhs += p.ub_lhs[i][j] * ub_dual[i];
        rep.dual_slack = std::max(rep.dual_slack, lhs - p.c[j]);
    }
    double primal_obj = 0;
    for (size_t j = 0; j < p.num_vars; j++) primal_obj += p.c[j] * x[j];
    double dual_obj = 0;
    for (size_t i = 0; i < p.eq_rhs.size(); i++) dual_obj += p.eq_rhs[i] * eq_dual[i];
    for (size_t i = 0; i < p.ub_rhs.size(); i++) dual_obj += p.ub_rhs[i] * ub_dual[i];
    rep.gap = std::fabs(primal_obj - dual_obj) / std::max(1.0, std::fabs(primal_obj));
    return rep;
}

}  // namespace pmm::flow
