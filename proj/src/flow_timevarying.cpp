#include "pmm/flow/timevarying.hpp"

#include <cmath>
#include <cstdio>
#include <sstream>

namespace pmm::flow {

std::string TimeVaryingFlow::to_table() const {
    std::ostringstream out;
    char buf[96];
    for (size_t k = 0; k < commodities.size(); k++)
        for (int64_t t = 0; t <= T; t++)
            for (size_t e = 0; e < num_edges; e++) {
                double v = passenger[k][slot(t, static_cast<uint32_t>(e))];
                if (std::fabs(v) > 5e-7) {
                    std::snprintf(buf, sizeof buf, "pair %u %u t %lld edge %zu %.6f",
                                  commodities[k].first, commodities[k].second,
                                  static_cast<long long>(t), e, v);
                    out << buf << "\n";
                }
            }
    for (int64_t t = 0; t <= T; t++)
        for (size_t e = 0; e < num_edges; e++) {
            double v = rebalance[slot(t, static_cast<uint32_t>(e))];
            if (std::fabs(v) > 5e-7) {
                std::snprintf(buf, sizeof buf, "rebalance t %lld edge %zu %.6f",
                              static_cast<long long>(t), e, v);
                out << buf << "\n";
            }
        }
    return out.str();
}

TvResiduals check_tv_feasibility(const net::Network& net, const net::DemandTensor& demand,
                                 const std::vector<double>& fleet, const TimeVaryingFlow& flow) {
    TvResiduals res;
    const int64_t T = flow.T;

    auto pax = [&](size_t k, int64_t t, uint32_t e) { return flow.passenger[k][flow.slot(t, e)]; };
    auto reb = [&](int64_t t, uint32_t e) { return flow.rebalance[flow.slot(t, e)]; };
    auto everyone = [&](int64_t t, uint32_t e) {
        double v = reb(t, e);
        for (size_t k = 0; k < flow.commodities.size(); k++) v += pax(k, t, e);
        return v;
    };

    for (uint32_t u = 0; u < net.n; u++)
        for (int64_t t = 1; t <= T; t++) {
            double balance = 0;
            for (uint32_t e : net.in_edges[u]) {
                int64_t dep = t - net.edges[e].free_flow_steps();
                if (dep >= 0) balance += everyone(dep, e);
            }
            for (uint32_t e : net.out_edges[u]) balance -= everyone(t, e);
            res.node_balance = std::max(res.node_balance, std::fabs(balance));
        }

    for (size_t k = 0; k < flow.commodities.size(); k++) {
        auto [i, j] = flow.commodities[k];
        for (uint32_t u = 0; u < net.n; u++) {
            if (u == i || u == j) continue;
            for (int64_t t = 0; t <= T; t++) {
                double balance = 0;
                for (uint32_t e : net.in_edges[u]) {
                    int64_t dep = t - net.edges[e].free_flow_steps();
                    if (dep >= 0) balance += pax(k, dep, e);
                }
                for (uint32_t e : net.out_edges[u]) balance -= pax(k, t, e);
                res.commodity_balance = std::max(res.commodity_balance, std::fabs(balance));
            }
        }

        double cum_net_out = 0, cum_demand = 0;
        for (int64_t t = 0; t <= T; t++) {
            for (uint32_t e : net.out_edges[i]) cum_net_out += pax(k, t, e);
            for (uint32_t e : net.in_edges[i]) {
                int64_t dep = t - net.edges[e].free_flow_steps();
                if (dep >= 0) cum_net_out -= pax(k, dep, e);
            }
            cum_demand += demand.at(i, j, t);
            res.cumulative_service =
                std::max(res.cumulative_service, cum_net_out - cum_demand);
        }

        for (int64_t t = 0; t <= T; t++)
            for (uint32_t e : net.out_edges[j])
                res.destination_departure =
                    std::max(res.destination_departure, std::fabs(pax(k, t, e)));
    }

    for (uint32_t u = 0; u < net.n; u++) {
        double dep0 = 0;
        for (uint32_t e : net.out_edges[u]) dep0 += everyone(0, e);
        res.initial_fleet = std::max(res.initial_fleet, std::fabs(dep0 - fleet[u]));
    }

    for (const auto& field : flow.passenger)
        for (double v : field) res.negativity = std::max(res.negativity, -v);
    for (double v : flow.rebalance) res.negativity = std::max(res.negativity, -v);
    return res;
}

TvProgram build_tv_program(const net::Network& net, const net::DemandTensor& demand,
                           const std::vector<double>& fleet, const MpEconomics& econ) {
    demand.check();
    if (demand.n != net.n || demand.T != net.horizon)
        throw std::invalid_argument("build_tv_program: demand shape mismatch");
    if (fleet.size() != net.n) throw std::invalid_argument("build_tv_program: fleet size");
    const size_t E = net.edges.size();
    const int64_t T = net.horizon;
    const size_t slots = size_t(T + 1) * E;

    TvProgram prog;
    for (uint32_t i = 0; i < net.n; i++)
        for (uint32_t j = 0; j < net.n; j++) {
            double total = 0;
            for (int64_t t = 0; t <= T; t++) total += demand.at(i, j, t);
            if (total > 0) prog.commodities.push_back({i, j});
        }

    LpProblem& lp = prog.lp;
    auto op_cost = [&](uint32_t e) { return econ.cost_per_length * net.edges[e].length; };
    auto arrival_in_horizon = [&](int64_t t, uint32_t e) {
        return t + net.edges[e].free_flow_steps() <= T;
    };

    prog.pvar.assign(prog.commodities.size(), std::vector<size_t>(slots, SIZE_MAX));
    for (size_t k = 0; k < prog.commodities.size(); k++) {
        uint32_t j = prog.commodities[k].second;
        for (int64_t t = 0; t <= T; t++)
            for (uint32_t e = 0; e < E; e++) {
                if (net.edges[e].src == j) continue;  // arrivals at j are terminal
                double c = op_cost(e);
                if (net.edges[e].dst == j && arrival_in_horizon(t, e))
                    c -= econ.fare_per_request;
                prog.pvar[k][size_t(t) * E + e] = lp.add_var(c);
            }
    }
    prog.rvar.assign(slots, 0);
    for (int64_t t = 0; t <= T; t++)
        for (uint32_t e = 0; e < E; e++) prog.rvar[size_t(t) * E + e] = lp.add_var(op_cost(e));

    auto blank = [&]() { return std::vector<double>(lp.num_vars, 0.0); };
    auto add_pax = [&](std::vector<double>& row, size_t k, int64_t t, uint32_t e, double coef) {
        size_t v = prog.pvar[k][size_t(t) * E + e];
        if (v != SIZE_MAX) row[v] += coef;
    };

    for (uint32_t u = 0; u < net.n; u++)
        for (int64_t t = 1; t <= T; t++) {
            auto row = blank();
            for (uint32_t e : net.in_edges[u]) {
                int64_t dep = t - net.edges[e].free_flow_steps();
                if (dep < 0) continue;
                for (size_t k = 0; k < prog.commodities.size(); k++) add_pax(row, k, dep, e, 1);
                row[prog.rvar[size_t(dep) * E + e]] += 1;
            }
            for (uint32_t e : net.out_edges[u]) {
                for (size_t k = 0; k < prog.commodities.size(); k++) add_pax(row, k, t, e, -1);
                row[prog.rvar[size_t(t) * E + e]] -= 1;
            }
            lp.eq_lhs.push_back(std::move(row));
            lp.eq_rhs.push_back(0.0);
        }

    for (size_t k = 0; k < prog.commodities.size(); k++) {
        auto [i, j] = prog.commodities[k];
        for (uint32_t u = 0; u < net.n; u++) {
            if (u == i || u == j) continue;
            for (int64_t t = 0; t <= T; t++) {
                auto row = blank();
                for (uint32_t e : net.in_edges[u]) {
                    int64_t dep = t - net.edges[e].free_flow_steps();
                    if (dep >= 0) add_pax(row, k, dep, e, 1);
                }
                for (uint32_t e : net.out_edges[u]) add_pax(row, k, t, e, -1);
                lp.eq_lhs.push_back(std::move(row));
                lp.eq_rhs.push_back(0.0);
            }
        }

        auto cumulative = blank();
        double cum_demand = 0;
        for (int64_t t = 0; t <= T; t++) {
            for (uint32_t e : net.out_edges[i]) add_pax(cumulative, k, t, e, 1);
            for (uint32_t e : net.in_edges[i]) {
                int64_t dep = t - net.edges[e].free_flow_steps();
                if (dep >= 0) add_pax(cumulative, k, dep, e, -1);
            }
            cum_demand += demand.at(i, j, t);
            lp.ub_lhs.push_back(cumulative);
            lp.ub_rhs.push_back(cum_demand);
        }
    }

    for (uint32_t u = 0; u < net.n; u++) {
        auto row = blank();
        for (uint32_t e : net.out_edges[u]) {
            for (size_t k = 0; k < prog.commodities.size(); k++) add_pax(row, k, 0, e, 1);
            row[prog.rvar[e]] += 1;
        }
        lp.eq_lhs.push_back(std::move(row));
        lp.eq_rhs.push_back(fleet[u]);
    }
    return prog;
}

TvResult solve_mp_routing_tv(const net::Network& net, const net::DemandTensor& demand,
                             const std::vector<double>& fleet, const MpEconomics& econ) {
    TvProgram prog = build_tv_program(net, demand, fleet, econ);
    auto sol = lp_solve(prog.lp);

    TvResult result;
    result.status = sol.status;
    if (sol.status != LpStatus::Optimal) return result;

    const size_t E = net.edges.size();
    const int64_t T = net.horizon;
    TimeVaryingFlow& flow = result.flow;
    flow.commodities = prog.commodities;
    flow.T = T;
    flow.num_edges = E;
    flow.passenger.assign(prog.commodities.size(),
                          std::vector<double>(size_t(T + 1) * E, 0.0));
    for (size_t k = 0; k < prog.commodities.size(); k++)
        for (size_t s = 0; s < size_t(T + 1) * E; s++)
            if (prog.pvar[k][s] != SIZE_MAX) flow.passenger[k][s] = sol.x[prog.pvar[k][s]];
    flow.rebalance.assign(size_t(T + 1) * E, 0.0);
    for (size_t s = 0; s < size_t(T + 1) * E; s++) flow.rebalance[s] = sol.x[prog.rvar[s]];

    for (size_t k = 0; k < prog.commodities.size(); k++) {
        uint32_t j = prog.commodities[k].second;
        for (int64_t t = 0; t <= T; t++)
            for (uint32_t e = 0; e < E; e++)
                if (net.edges[e].dst == j && t + net.edges[e].free_flow_steps() <= T)
                    result.served += flow.passenger[k][flow.slot(t, e)];
    }
    result.revenue = econ.fare_per_request * result.served;
    double cost = 0;
    for (int64_t t = 0; t <= T; t++)
        for (uint32_t e = 0; e < E; e++) {
            double units = flow.rebalance[flow.slot(t, e)];
            for (size_t k = 0; k < prog.commodities.size(); k++)
                units += flow.passenger[k][flow.slot(t, e)];
            cost += units * econ.cost_per_length * net.edges[e].length;
        }
    result.operating_cost = cost;
    result.profit = result.revenue - result.operating_cost;
    return result;
}

}  // namespace pmm::flow
