#pragma once

/* Combinatorial reference for the steady-state routing cost. Passenger
 * commodities ship along shortest paths (per-unit cost is unaffected by
 * other commodities since nothing is capacitated), and the induced node
 * imbalance is repaired by a minimum-cost empty-vehicle flow found with
 * successive shortest paths on the residual graph. Bellman-Ford
 * throughout; no code shared with the library's Dijkstra or simplex.
 * Callers keep demand integral so unit augmentations terminate. */

#include <cmath>
#include <optional>
#include <vector>

#include "pmm/net/demand.hpp"
#include "pmm/net/network.hpp"

namespace oracle {

struct ResidualArc {
    uint32_t to;
    double cost;
    double cap;
    size_t twin;  // index of the reverse arc
};

struct ResidualGraph {
    std::vector<std::vector<size_t>> adj;
    std::vector<ResidualArc> arcs;

    void add(uint32_t u, uint32_t v, double cost, double cap) {
        adj[u].push_back(arcs.size());
        arcs.push_back({v, cost, cap, arcs.size() + 1});
        adj[v].push_back(arcs.size());
        arcs.push_back({u, -cost, 0.0, arcs.size() - 1});
    }
};

inline std::vector<double> bellman_ford(const pmm::net::Network& net, uint32_t src,
                                        const std::vector<double>& w) {
    const double inf = std::numeric_limits<double>::infinity();
    std::vector<double> dist(net.n, inf);
    dist[src] = 0;
    for (uint32_t pass = 0; pass + 1 < net.n; pass++)
        for (size_t e = 0; e < net.edges.size(); e++) {
            uint32_t a = net.edges[e].src, b = net.edges[e].dst;
            if (dist[a] + w[e] < dist[b]) dist[b] = dist[a] + w[e];
        }
    return dist;
}

/* Min-cost flow shipping `supply` (positive = excess vehicles) to
 * balance; nullopt when some excess cannot reach a deficit. When
 * edge_flow_out is given it receives the per-edge shipped amounts. */
inline std::optional<double> min_cost_rebalance(const pmm::net::Network& net,
                                                const std::vector<double>& w,
                                                std::vector<double> supply,
                                                std::vector<double>* edge_flow_out = nullptr) {
    uint32_t S = net.n, D = net.n + 1;
    ResidualGraph g;
    g.adj.resize(net.n + 2);
    double total = 0;
    for (uint32_t u = 0; u < net.n; u++) {
        if (supply[u] > 1e-9) {
            g.add(S, u, 0, supply[u]);
            total += supply[u];
        } else if (supply[u] < -1e-9) {
            g.add(u, D, 0, -supply[u]);
        }
    }
    double big = total + 1;
    std::vector<size_t> net_arc(net.edges.size());
    for (const auto& e : net.edges) {
        net_arc[&e - net.edges.data()] = g.arcs.size();
        g.add(e.src, e.dst, w[&e - net.edges.data()], big);
    }

    double cost = 0, shipped = 0;
    const double inf = std::numeric_limits<double>::infinity();
    while (shipped + 1e-9 < total) {
        size_t n = g.adj.size();
        std::vector<double> dist(n, inf);
        std::vector<size_t> via(n, SIZE_MAX);
        dist[S] = 0;
        for (size_t pass = 0; pass + 1 < n + 2; pass++) {
            bool changed = false;
            for (size_t a = 0; a < g.arcs.size(); a++) {
                const auto& arc = g.arcs[a];
                if (arc.cap <= 1e-9) continue;
                uint32_t from = 0;
                // twin arcs are adjacent; even index pairs with odd
                from = g.arcs[arc.twin].to;
                if (dist[from] + arc.cost < dist[arc.to] - 1e-12) {
                    dist[arc.to] = dist[from] + arc.cost;
                    via[arc.to] = a;
                    changed = true;
                }
            }
            if (!changed) break;
        }
        if (dist[D] == inf) return std::nullopt;

        double push = total - shipped;
        for (size_t a = via[D]; a != SIZE_MAX; a = via[g.arcs[g.arcs[a].twin].to])
            push = std::min(push, g.arcs[a].cap);
        for (size_t a = via[D]; a != SIZE_MAX; a = via[g.arcs[g.arcs[a].twin].to]) {
            g.arcs[a].cap -= push;
            g.arcs[g.arcs[a].twin].cap += push;
            cost += push * g.arcs[a].cost;
        }
        shipped += push;
    }
    if (edge_flow_out) {
        edge_flow_out->assign(net.edges.size(), 0.0);
        for (size_t e = 0; e < net.edges.size(); e++)
            (*edge_flow_out)[e] = big - g.arcs[net_arc[e]].cap;
    }
    return cost;
}

/* Total operating cost of the cheapest feasible steady routing, or
 * nullopt when the instance is infeasible. */
inline std::optional<double> steady_cost_ref(const pmm::net::Network& net,
                                             const pmm::net::DemandMatrix& demand,
                                             double cost_per_length) {
    std::vector<double> w(net.edges.size());
    for (size_t e = 0; e < net.edges.size(); e++) w[e] = cost_per_length * net.edges[e].length;

    double passenger_cost = 0;
    std::vector<double> supply(net.n, 0.0);
    for (uint32_t i = 0; i < net.n; i++) {
        std::vector<double> dist;
        for (uint32_t j = 0; j < net.n; j++) {
            if (demand.at(i, j) <= 0) continue;
            if (dist.empty()) dist = bellman_ford(net, i, w);
            if (std::isinf(dist[j])) return std::nullopt;
            passenger_cost += demand.at(i, j) * dist[j];
            supply[i] -= demand.at(i, j);
            supply[j] += demand.at(i, j);
        }
    }
    auto rebalance_cost = min_cost_rebalance(net, w, supply);
    if (!rebalance_cost) return std::nullopt;
    return passenger_cost + *rebalance_cost;
}

/* Cheapest steady routing with the realized per-edge totals
 * (passengers plus empties), for welfare evaluations. */
struct SteadyFlowsRef {
    double cost = 0;
    std::vector<double> edge_flow;
};

inline std::optional<SteadyFlowsRef> steady_flows_ref(const pmm::net::Network& net,
                                                      const pmm::net::DemandMatrix& demand,
                                                      double cost_per_length) {
    std::vector<double> w(net.edges.size());
    for (size_t e = 0; e < net.edges.size(); e++) w[e] = cost_per_length * net.edges[e].length;

    SteadyFlowsRef out;
    out.edge_flow.assign(net.edges.size(), 0.0);
    std::vector<double> supply(net.n, 0.0);
    const double inf = std::numeric_limits<double>::infinity();
    for (uint32_t i = 0; i < net.n; i++) {
        std::vector<double> dist;
        std::vector<size_t> via;
        for (uint32_t j = 0; j < net.n; j++) {
            if (demand.at(i, j) <= 0) continue;
            if (dist.empty()) {
                dist.assign(net.n, inf);
                via.assign(net.n, SIZE_MAX);
                dist[i] = 0;
                for (uint32_t pass = 0; pass + 1 < net.n; pass++)
                    for (size_t e = 0; e < net.edges.size(); e++) {
                        uint32_t a = net.edges[e].src, b = net.edges[e].dst;
                        if (dist[a] + w[e] < dist[b] - 1e-15) {
                            dist[b] = dist[a] + w[e];
                            via[b] = e;
                        }
                    }
            }
            if (std::isinf(dist[j])) return std::nullopt;
            out.cost += demand.at(i, j) * dist[j];
            for (uint32_t v = j; v != i; v = net.edges[via[v]].src)
                out.edge_flow[via[v]] += demand.at(i, j);
            supply[i] -= demand.at(i, j);
            supply[j] += demand.at(i, j);
        }
    }
    std::vector<double> reb;
    auto rebalance_cost = min_cost_rebalance(net, w, supply, &reb);
    if (!rebalance_cost) return std::nullopt;
    out.cost += *rebalance_cost;
    for (size_t e = 0; e < net.edges.size(); e++) out.edge_flow[e] += reb[e];
    return out;
}

}  // namespace oracle
