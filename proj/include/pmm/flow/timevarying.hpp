#pragma once

#include <string>
#include <utility>
#include <vector>

#include "pmm/flow/simplex.hpp"
#include "pmm/flow/steady.hpp"
#include "pmm/net/demand.hpp"
#include "pmm/net/network.hpp"

namespace pmm::flow {

/* Flows over the time-expanded network. A departure on edge e at step t
 * arrives free-flow steps later; arrivals past the horizon fall off the
 * end (the departure is allowed and costed, but earns no fare).
 *
 * Conventions where the formulation leaves slack:
 *  - node balance (arrivals == departures) binds at every node for
 *    t in {1..T}; there is no idling, so time-varying networks need an
 *    outgoing edge wherever vehicles can arrive;
 *  - per-pair conservation at intermediate nodes also binds at t == 0,
 *    which stops passenger flow from materializing mid-route;
 *  - the initial fleet y_u caps all departures at t == 0, rebalancing
 *    included;
 *  - cumulative net passenger departures from the origin stay at or
 *    under cumulative demand (service may be partial or late). */
struct TimeVaryingFlow {
    std::vector<std::pair<uint32_t, uint32_t>> commodities;
    int64_t T = 0;
    size_t num_edges = 0;
    std::vector<std::vector<double>> passenger;  // [commodity][t * E + e]
    std::vector<double> rebalance;               // [t * E + e]

    size_t slot(int64_t t, uint32_t e) const { return size_t(t) * num_edges + e; }
    std::string to_table() const;
};

struct TvResiduals {
    double node_balance = 0;
    double commodity_balance = 0;
    double cumulative_service = 0;   // amount over cumulative demand
    double destination_departure = 0;  // flow leaving its own destination
    double initial_fleet = 0;
    double negativity = 0;

    bool feasible(double tol) const {
        return node_balance <= tol && commodity_balance <= tol && cumulative_service <= tol &&
               destination_departure <= tol && initial_fleet <= tol && negativity <= tol;
    }
};

TvResiduals check_tv_feasibility(const net::Network& net, const net::DemandTensor& demand,
                                 const std::vector<double>& fleet, const TimeVaryingFlow& flow);

struct TvResult {
    LpStatus status = LpStatus::Infeasible;
    TimeVaryingFlow flow;
    double served = 0;  // demand units delivered within the horizon
    double revenue = 0;
    double operating_cost = 0;
    double profit = 0;
};

/* The assembled program, exposed so optimality certificates can be
 * audited against the raw rows. */
struct TvProgram {
    LpProblem lp;
    std::vector<std::pair<uint32_t, uint32_t>> commodities;
    std::vector<std::vector<size_t>> pvar;  // [commodity][t * E + e], SIZE_MAX if pinned to 0
    std::vector<size_t> rvar;               // [t * E + e]
    double fare_constant = 0;               // profit == fare_constant - lp objective? (0 here)
};

TvProgram build_tv_program(const net::Network& net, const net::DemandTensor& demand,
                           const std::vector<double>& fleet, const MpEconomics& econ);

TvResult solve_mp_routing_tv(const net::Network& net, const net::DemandTensor& demand,
                             const std::vector<double>& fleet, const MpEconomics& econ);

}  // namespace pmm::flow
