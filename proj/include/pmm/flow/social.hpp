#pragma once

#include <utility>
#include <vector>

#include "pmm/net/demand.hpp"
#include "pmm/net/network.hpp"

namespace pmm::flow {

/* System-optimal traffic assignment: route every demand rate through
 * the network minimizing total travel time sum_e x_e f_e(x_e), f convex
 * nondecreasing. Solved by Frank-Wolfe with exact line search; the
 * linearization gap upper-bounds suboptimality, so `gap` is a true
 * quality certificate for the returned flow. */
struct SocialFlow {
    std::vector<std::pair<uint32_t, uint32_t>> commodities;
    std::vector<std::vector<double>> passenger;  // [commodity][edge]
    std::vector<double> aggregate;               // [edge]
};

struct SocialResult {
    bool feasible = false;  // false when some demanded pair is unreachable
    SocialFlow flow;
    double total_travel_time = 0;
    double gap = 0;  // absolute bound on J(x) - J*
    int iterations = 0;
    /* Per-commodity node potentials under marginal costs at the final
     * flow; unreachable nodes hold +inf. Together with the flow these
     * form the optimality certificate. */
    std::vector<std::vector<double>> potentials;
};

SocialResult solve_social_optimum_tt(const net::Network& net, const net::DemandMatrix& demand,
                                     double rel_tol = 1e-6, int max_iter = 200000);

/* Marginal-cost prices p_e = x_e f_e'(x_e): facing them, selfish users
 * reproduce the social optimum. */
std::vector<double> compute_tolls(const net::Network& net, const std::vector<double>& aggregate);

/* Marginal cost of one extra unit on e at aggregate flow x. */
double marginal_cost(const net::Edge& edge, double x);

struct KktCertificate {
    std::vector<std::pair<uint32_t, uint32_t>> commodities;
    std::vector<std::vector<double>> passenger;   // [commodity][edge]
    std::vector<std::vector<double>> potentials;  // [commodity][node]
};

struct KktReport {
    double conservation = 0;  // worst per-commodity balance residual
    double negativity = 0;
    double dual_feasibility = 0;  // worst (pi_v - pi_u) - mc_e overshoot
    double complementarity = 0;   // sum x |mc - dpi|, relative to objective scale

    bool ok(double tol) const {
        return conservation <= tol && negativity <= tol && dual_feasibility <= tol &&
               complementarity <= tol;
    }
};

/* First-order optimality audit: a flow passes iff it is feasible and
 * every used edge lies on a marginal-cost-shortest path certified by
 * the potentials. Accepts exactly the (tolerance-ball around the)
 * social optimum; fabricated potentials cannot rescue a suboptimal
 * flow because used-path costs then exceed the potential gap. */
KktReport check_kkt(const net::Network& net, const net::DemandMatrix& demand,
                    const KktCertificate& cert);

}  // namespace pmm::flow
