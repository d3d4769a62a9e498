#pragma once

#include <string>
#include <utility>
#include <vector>

#include "pmm/flow/simplex.hpp"
#include "pmm/net/demand.hpp"
#include "pmm/net/network.hpp"

namespace pmm::flow {

struct MpEconomics {
    double fare_per_request = 10.0;  // revenue per unit of demand served
    double cost_per_length = 1.0;    // operating cost per unit flow-length
};

/* Steady-state fleet routing: one flow field per origin-destination
 * pair with positive demand, plus an empty-vehicle rebalancing field.
 * Passenger fields conserve at intermediate nodes and emit/absorb the
 * demand rate at their endpoints; the joint field (passengers plus
 * rebalancing) conserves everywhere, which is what forces empties to
 * drive back against the demand imbalance. */
struct SteadyFlow {
    std::vector<std::pair<uint32_t, uint32_t>> commodities;
    std::vector<std::vector<double>> passenger;  // [commodity][edge]
    std::vector<double> rebalance;               // [edge]

    std::vector<double> total_edge_flow(size_t num_edges) const;
    std::string to_table() const;  // fixed-precision text for golden tests
};

struct SteadyResiduals {
    double vehicle_conservation = 0;    // joint row, max abs
    double commodity_conservation = 0;  // per-pair rows, max abs
    double negativity = 0;              // most negative entry, as magnitude

    bool feasible(double tol) const {
        return vehicle_conservation <= tol && commodity_conservation <= tol && negativity <= tol;
    }
};

SteadyResiduals check_steady_feasibility(const net::Network& net, const net::DemandMatrix& demand,
                                         const SteadyFlow& flow);

struct SteadyResult {
    LpStatus status = LpStatus::Infeasible;
    SteadyFlow flow;
    double revenue = 0;
    double operating_cost = 0;
    double profit = 0;  // revenue - operating_cost
};

/* The assembled routing program, exposed so optimality certificates
 * can be audited against the raw rows. */
struct SteadyProgram {
    LpProblem lp;
    std::vector<std::pair<uint32_t, uint32_t>> commodities;
    std::vector<std::vector<size_t>> pvar;  // [commodity][edge]
    std::vector<size_t> rvar;               // [edge]
};

SteadyProgram build_steady_program(const net::Network& net, const net::DemandMatrix& demand,
                                   const MpEconomics& econ);

SteadyResult extract_steady_result(const SteadyProgram& prog, const LpSolution& sol,
                                   const net::DemandMatrix& demand, const MpEconomics& econ);

/* Cheapest feasible service of the full demand matrix. Returns status
 * Infeasible when some demanded pair has no connecting route or the
 * imbalance cannot be rebalanced. */
SteadyResult solve_mp_routing(const net::Network& net, const net::DemandMatrix& demand,
                              const MpEconomics& econ);

/* Residual audit of a claimed optimum for an assembled program: primal
 * feasibility, dual feasibility, and the duality gap. All residuals
 * near zero certify optimality by weak duality. */
struct CertResiduals {
    double primal_eq = 0, primal_ub = 0, primal_neg = 0;
    double dual_sign = 0, dual_slack = 0;
    double gap = 0;  // relative to max(1, |objective|)

    double worst() const;
};

CertResiduals certificate_residuals(const LpProblem& p, const std::vector<double>& x,
                                    const std::vector<double>& eq_dual,
                                    const std::vector<double>& ub_dual);

}  // namespace pmm::flow
