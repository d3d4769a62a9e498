#pragma once

#include <cstddef>
#include <functional>
#include <string>
#include <vector>

#include "pmm/flow/steady.hpp"
#include "pmm/net/network.hpp"

namespace pmm::flow {

/* Infrastructure proposals are edit scripts against a base network:
 *
 *   project express-link
 *   add_edge 0 2 affine 3 0.5 length 2
 *   add_train_edge 2 4 6
 *   set_delay 1 bpr 1 0.15 10
 *   end
 *
 * Several `project` blocks may share one file. */
struct ProjectEdit {
    enum class Kind { AddEdge, SetDelay };
    Kind kind = Kind::AddEdge;
    net::Edge edge;           // AddEdge payload
    uint32_t edge_index = 0;  // SetDelay target
    net::DelayFn delay;       // SetDelay payload
};

struct Project {
    std::string name;
    std::vector<ProjectEdit> edits;
};

std::vector<Project> parse_projects(const std::string& text);
std::string projects_to_text(const std::vector<Project>& projects);

net::Network apply_project(const net::Network& base, const Project& proj);

/* Welfare of a routed network from the regulator's side. The default
 * scores a project by the negated total travel time of the realized
 * flow (passengers plus empties), so less congestion wins. */
using MaObjective = std::function<double(const net::Network&, const SteadyFlow&)>;
double neg_total_travel_time(const net::Network& net, const SteadyFlow& flow);

struct SopOutcome {
    size_t winner = SIZE_MAX;        // SIZE_MAX when every project is infeasible
    std::vector<double> utility;     // -inf marks an unroutable project
    std::vector<SteadyResult> routing;
    std::vector<LpSolution> solutions;  // raw LP output, kept for audits
};

/* Pick the best affordable project: route the fleet optimally on each
 * candidate network, score the outcome with the regulator's welfare
 * function, and take the argmax (ties to the lowest index). */
SopOutcome solve_sop(const net::Network& base, const std::vector<Project>& projects,
                     const net::DemandMatrix& demand, const MpEconomics& econ,
                     const MaObjective& welfare = neg_total_travel_time);

}  // namespace pmm::flow
