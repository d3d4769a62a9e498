#pragma once

#include <cstdint>
#include <limits>
#include <string>
#include <vector>

#include "pmm/bytes.hpp"

namespace pmm::net {

/* Convex nondecreasing edge delay as a function of flow. */
struct DelayFn {
    enum class Kind { Affine, Bpr };
    Kind kind = Kind::Affine;
    double a = 1.0;     // free-flow delay, > 0
    double b = 0.0;     // affine slope, >= 0
    double beta = 0.0;  // bpr shape, >= 0
    double cap = 1.0;   // bpr capacity, > 0

    double operator()(double x) const;
    double deriv(double x) const;

    static DelayFn affine(double a, double b);
    static DelayFn bpr(double a, double beta, double cap);
};

struct Edge {
    uint32_t src = 0;
    uint32_t dst = 0;
    DelayFn delay;
    double length = 1.0;

    /* Whole time steps one traversal takes at free flow; the discrete
     * scheduling grain for trips and time-expanded flows. */
    int64_t free_flow_steps() const;
};

struct Network {
    uint32_t n = 0;      // vertices are 0..n-1
    int64_t horizon = 0;  // last time index T
    std::vector<Edge> edges;
    std::vector<std::vector<uint32_t>> out_edges, in_edges;

    void finalize();  // builds adjacency, throws on dangling endpoints

    /* Plain-text form, one directive per line ('#' comments):
     *   nodes <n>
     *   horizon <T>
     *   edge <src> <dst> affine <a> <b> [length <len>]
     *   edge <src> <dst> bpr <a> <beta> <cap> [length <len>]
     *   edge <src> <dst> train <a> [length <len>]       (constant delay)
     */
    static Network parse(const std::string& text);
};

struct ShortestPaths {
    std::vector<double> dist;           // from source, +inf if unreachable
    std::vector<uint32_t> parent_edge;  // entering edge on a shortest path, or npos
    static constexpr uint32_t npos = std::numeric_limits<uint32_t>::max();

    bool reachable(uint32_t v) const { return dist[v] < std::numeric_limits<double>::infinity(); }
    std::vector<uint32_t> path_to(uint32_t v, const Network& net) const;  // edge ids
};

/* Dijkstra with caller-supplied nonnegative edge weights. */
ShortestPaths shortest_paths(const Network& net, uint32_t source,
                             const std::vector<double>& edge_weight);

std::vector<double> free_flow_weights(const Network& net);

}  // namespace pmm::net
