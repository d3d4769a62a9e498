#include "pmm/flow/social.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace pmm::flow {

double marginal_cost(const net::Edge& edge, double x) {
    return edge.delay(x) + x * edge.delay.deriv(x);
}

static std::vector<double> marginal_costs(const net::Network& net,
                                          const std::vector<double>& aggregate) {
    std::vector<double> mc(net.edges.size());
    for (size_t e = 0; e < net.edges.size(); e++)
        mc[e] = marginal_cost(net.edges[e], aggregate[e]);
    return mc;
}

static double travel_time(const net::Network& net, const std::vector<double>& aggregate) {
    double j = 0;
    for (size_t e = 0; e < net.edges.size(); e++)
        j += aggregate[e] * net.edges[e].delay(aggregate[e]);
    return j;
}

SocialResult solve_social_optimum_tt(const net::Network& net, const net::DemandMatrix& demand,
                                     double rel_tol, int max_iter) {
    demand.check();
    if (demand.n != net.n) throw std::invalid_argument("solve_social_optimum_tt: size mismatch");
    const size_t E = net.edges.size();

    SocialResult result;
    auto& flow = result.flow;
    for (uint32_t i = 0; i < net.n; i++)
        for (uint32_t j = 0; j < net.n; j++)
            if (demand.at(i, j) > 0) flow.commodities.push_back({i, j});

    flow.passenger.assign(flow.commodities.size(), std::vector<double>(E, 0.0));
    flow.aggregate.assign(E, 0.0);

    /* All-or-nothing load under the given edge costs; returns false if
     * some demanded destination is unreachable. */
    auto assign_aon = [&](const std::vector<double>& costs,
                          std::vector<std::vector<double>>& out) {
        for (size_t k = 0; k < flow.commodities.size(); k++) {
            auto [i, j] = flow.commodities[k];
            auto sp = net::shortest_paths(net, i, costs);
            if (!sp.reachable(j)) return false;
            std::fill(out[k].begin(), out[k].end(), 0.0);
            for (uint32_t e : sp.path_to(j, net)) out[k][e] += demand.at(i, j);
        }
        return true;
    };

    std::vector<double> mc = marginal_costs(net, flow.aggregate);
    if (!assign_aon(mc, flow.passenger)) return result;  // feasible stays false
    for (size_t k = 0; k < flow.commodities.size(); k++)
        for (size_t e = 0; e < E; e++) flow.aggregate[e] += flow.passenger[k][e];
    result.feasible = true;

    std::vector<std::vector<double>> target(flow.commodities.size(), std::vector<double>(E));
    std::vector<double> target_agg(E), direction(E);

    for (int iter = 0; iter < max_iter; iter++) {
        result.iterations = iter;
        mc = marginal_costs(net, flow.aggregate);
        assign_aon(mc, target);
        std::fill(target_agg.begin(), target_agg.end(), 0.0);
        for (size_t k = 0; k < flow.commodities.size(); k++)
            for (size_t e = 0; e < E; e++) target_agg[e] += target[k][e];

        double gap = 0;
        for (size_t e = 0; e < E; e++) gap += mc[e] * (flow.aggregate[e] - target_agg[e]);
        result.gap = gap;
        double j_now = travel_time(net, flow.aggregate);
        if (gap <= rel_tol * std::max(1.0, std::fabs(j_now))) break;

        for (size_t e = 0; e < E; e++) direction[e] = target_agg[e] - flow.aggregate[e];
        /* phi'(gamma) = sum_e d_e mc_e(x + gamma d) is nondecreasing in
         * gamma for convex delays; bisect for its root. */
        auto dphi = [&](double gamma) {
            double v = 0;
            for (size_t e = 0; e < E; e++) {
                double xe = flow.aggregate[e] + gamma * direction[e];
                v += direction[e] * marginal_cost(net.edges[e], xe);
            }
            return v;
        };
        double gamma = 1.0;
        if (dphi(1.0) > 0) {
            double lo = 0, hi = 1;
            for (int b = 0; b < 80; b++) {
                double mid = 0.5 * (lo + hi);
                (dphi(mid) > 0 ? hi : lo) = mid;
            }
            gamma = 0.5 * (lo + hi);
        }
        if (gamma <= 0) break;

        for (size_t k = 0; k < flow.commodities.size(); k++)
            for (size_t e = 0; e < E; e++)
                flow.passenger[k][e] += gamma * (target[k][e] - flow.passenger[k][e]);
        for (size_t e = 0; e < E; e++) flow.aggregate[e] += gamma * direction[e];
    }

    result.total_travel_time = travel_time(net, flow.aggregate);
    mc = marginal_costs(net, flow.aggregate);
    result.potentials.assign(flow.commodities.size(), {});
    for (size_t k = 0; k < flow.commodities.size(); k++) {
        auto sp = net::shortest_paths(net, flow.commodities[k].first, mc);
        result.potentials[k] = sp.dist;
    }
    return result;
}

std::vector<double> compute_tolls(const net::Network& net, const std::vector<double>& aggregate) {
    if (aggregate.size() != net.edges.size())
        throw std::invalid_argument("compute_tolls: aggregate size mismatch");
    std::vector<double> tolls(net.edges.size());
    for (size_t e = 0; e < net.edges.size(); e++)
        tolls[e] = aggregate[e] * net.edges[e].delay.deriv(aggregate[e]);
    return tolls;
}

KktReport check_kkt(const net::Network& net, const net::DemandMatrix& demand,
                    const KktCertificate& cert) {
    KktReport rep;
    const size_t E = net.edges.size();
    if (cert.passenger.size() != cert.commodities.size() ||
        cert.potentials.size() != cert.commodities.size()) {
        rep.conservation = std::numeric_limits<double>::infinity();
        return rep;
    }

    std::vector<double> aggregate(E, 0.0);
    for (size_t k = 0; k < cert.commodities.size(); k++) {
        if (cert.passenger[k].size() != E || cert.potentials[k].size() != net.n) {
            rep.conservation = std::numeric_limits<double>::infinity();
            return rep;
        }
        for (size_t e = 0; e < E; e++) {
            aggregate[e] += cert.passenger[k][e];
            rep.negativity = std::max(rep.negativity, -cert.passenger[k][e]);
        }
    }

    /* Every demanded pair must appear; a certificate that silently
     * drops one is rejected through the conservation residual. */
    for (uint32_t i = 0; i < net.n; i++)
        for (uint32_t j = 0; j < net.n; j++) {
            if (demand.at(i, j) <= 0) continue;
            bool found = false;
            for (auto& c : cert.commodities) found |= (c.first == i && c.second == j);
            if (!found) rep.conservation = std::max(rep.conservation, demand.at(i, j));
        }

    for (size_t k = 0; k < cert.commodities.size(); k++) {
        auto [i, j] = cert.commodities[k];
        double rate = demand.at(i, j);
        for (uint32_t u = 0; u < net.n; u++) {
            double div = 0;
            for (uint32_t e : net.out_edges[u]) div += cert.passenger[k][e];
            for (uint32_t e : net.in_edges[u]) div -= cert.passenger[k][e];
            double want = (u == i ? rate : 0.0) - (u == j ? rate : 0.0);
            rep.conservation = std::max(rep.conservation, std::fabs(div - want));
        }
    }

    std::vector<double> mc = marginal_costs(net, aggregate);
    double slack_sum = 0;
    for (size_t k = 0; k < cert.commodities.size(); k++) {
        const auto& pi = cert.potentials[k];
        for (size_t e = 0; e < E; e++) {
            double pu = pi[net.edges[e].src], pv = pi[net.edges[e].dst];
            double x = cert.passenger[k][e];
            if (std::isfinite(pu) && std::isfinite(pv))
                rep.dual_feasibility = std::max(rep.dual_feasibility, (pv - pu) - mc[e]);
            if (x > 1e-12) {
                if (!std::isfinite(pu) || !std::isfinite(pv)) {
                    rep.complementarity = std::numeric_limits<double>::infinity();
                    return rep;
                }
                slack_sum += x * std::fabs(mc[e] - (pv - pu));
            }
        }
    }
    double scale = std::max(1.0, travel_time(net, aggregate));
    rep.complementarity = std::fabs(slack_sum) / scale;
    return rep;
}

}  // namespace pmm::flow
