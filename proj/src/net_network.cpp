#include "pmm/net/network.hpp"

#include <cmath>
#include <queue>
#include <sstream>
#include <stdexcept>

namespace pmm::net {

double DelayFn::operator()(double x) const {
    switch (kind) {
        case Kind::Affine: return a + b * x;
        case Kind::Bpr: {
            double r = x / cap;
            return a * (1.0 + beta * r * r * r * r);
        }
    }
    return a;
}

double DelayFn::deriv(double x) const {
    switch (kind) {
        case Kind::Affine: return b;
        case Kind::Bpr: {
            double r = x / cap;
            return 4.0 * a * beta * r * r * r / cap;
        }
    }
    return 0.0;
}

DelayFn DelayFn::affine(double a, double b) {
    if (a < 0 || b < 0) throw std::invalid_argument("DelayFn::affine: need a >= 0, b >= 0");
    DelayFn f;
    f.kind = Kind::Affine;
    f.a = a;
    f.b = b;
    return f;
}

DelayFn DelayFn::bpr(double a, double beta, double cap) {
    if (a <= 0 || beta < 0 || cap <= 0)
        throw std::invalid_argument("DelayFn::bpr: need a > 0, beta >= 0, cap > 0");
    DelayFn f;
    f.kind = Kind::Bpr;
    f.a = a;
    f.beta = beta;
    f.cap = cap;
    return f;
}

int64_t Edge::free_flow_steps() const {
    double steps = std::ceil(delay.a - 1e-9);
    return steps < 1.0 ? 1 : static_cast<int64_t>(steps);
}

void Network::finalize() {
    out_edges.assign(n, {});
    in_edges.assign(n, {});
    for (uint32_t e = 0; e < edges.size(); e++) {
        if (edges[e].src >= n || edges[e].dst >= n)
            throw std::invalid_argument("Network: edge endpoint out of range");
        out_edges[edges[e].src].push_back(e);
        in_edges[edges[e].dst].push_back(e);
    }
}

Network Network::parse(const std::string& text) {
    Network net;
    std::istringstream in(text);
    std::string line;
    int lineno = 0;
    auto fail = [&](const std::string& why) {
        throw DecodeError("network line " + std::to_string(lineno) + ": " + why);
    };
    while (std::getline(in, line)) {
        lineno++;
        auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        std::istringstream ls(line);
        std::string word;
        if (!(ls >> word)) continue;
        if (word == "nodes") {
            if (!(ls >> net.n)) fail("nodes wants a count");
        } else if (word == "horizon") {
            if (!(ls >> net.horizon)) fail("horizon wants a time index");
        } else if (word == "edge") {
            Edge e;
            std::string kind;
            if (!(ls >> e.src >> e.dst >> kind)) fail("edge wants: src dst kind params");
            if (kind == "affine") {
                double a, b;
                if (!(ls >> a >> b)) fail("affine wants: a b");
                e.delay = DelayFn::affine(a, b);
            } else if (kind == "bpr") {
                double a, beta, cap;
                if (!(ls >> a >> beta >> cap)) fail("bpr wants: a beta cap");
                e.delay = DelayFn::bpr(a, beta, cap);
            } else if (kind == "train") {
                double a;
                if (!(ls >> a)) fail("train wants: a");
                e.delay = DelayFn::affine(a, 0.0);
            } else {
                fail("unknown delay kind '" + kind + "'");
            }
            std::string opt;
            while (ls >> opt) {
                if (opt == "length") {
                    if (!(ls >> e.length) || e.length <= 0) fail("length wants a positive value");
                } else {
                    fail("unknown edge option '" + opt + "'");
                }
            }
            net.edges.push_back(e);
        } else {
            fail("unknown directive '" + word + "'");
        }
    }
    if (net.n == 0) throw DecodeError("network: missing nodes directive");
    net.finalize();
    return net;
}

std::vector<uint32_t> ShortestPaths::path_to(uint32_t v, const Network& net) const {
    std::vector<uint32_t> rev;
    while (parent_edge[v] != npos) {
        uint32_t e = parent_edge[v];
        rev.push_back(e);
        v = net.edges[e].src;
    }
    return {rev.rbegin(), rev.rend()};
}

ShortestPaths shortest_paths(const Network& net, uint32_t source,
                             const std::vector<double>& edge_weight) {
    if (edge_weight.size() != net.edges.size())
        throw std::invalid_argument("shortest_paths: weight count mismatch");
    const double inf = std::numeric_limits<double>::infinity();
    ShortestPaths sp;
    sp.dist.assign(net.n, inf);
    sp.parent_edge.assign(net.n, ShortestPaths::npos);
    sp.dist[source] = 0;

    using Item = std::pair<double, uint32_t>;
    std::priority_queue<Item, std::vector<Item>, std::greater<>> heap;
    heap.push({0.0, source});
    while (!heap.empty()) {
        auto [d, u] = heap.top();
        heap.pop();
        if (d > sp.dist[u]) continue;
        for (uint32_t e : net.out_edges[u]) {
            double w = edge_weight[e];
            if (w < 0) throw std::invalid_argument("shortest_paths: negative weight");
            uint32_t v = net.edges[e].dst;
            if (sp.dist[u] + w < sp.dist[v]) {
                sp.dist[v] = sp.dist[u] + w;
                sp.parent_edge[v] = e;
                heap.push({sp.dist[v], v});
            }
        }
    }
    return sp;
}

std::vector<double> free_flow_weights(const Network& net) {
    std::vector<double> w(net.edges.size());
    for (size_t e = 0; e < net.edges.size(); e++)
        w[e] = static_cast<double>(net.edges[e].free_flow_steps());
    return w;
}

}  // namespace pmm::net
