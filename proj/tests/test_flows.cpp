#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "oracles/flow_ref.hpp"
#include "oracles/lp_bruteforce.hpp"
#include "oracles/lp_certificate.hpp"
#include "pmm/flow/steady.hpp"
#include "pmm/flow/timevarying.hpp"
#include "pmm/rng.hpp"

using namespace pmm;
using namespace pmm::flow;

static net::Network two_cycle() {
    return net::Network::parse(
        "nodes 2\n"
        "horizon 2\n"
        "edge 0 1 affine 1 0\n"
        "edge 1 0 affine 1 0\n");
}

TEST_CASE("steady two-node cycle: passengers forward, empties back") {
    net::Network netw = two_cycle();
    net::DemandMatrix demand(2);
    demand.at(0, 1) = 1.0;
    MpEconomics econ{10.0, 1.0};

    auto result = solve_mp_routing(netw, demand, econ);
    REQUIRE(result.status == LpStatus::Optimal);
    CHECK(result.operating_cost == doctest::Approx(2.0));
    CHECK(result.revenue == doctest::Approx(10.0));
    CHECK(result.profit == doctest::Approx(8.0));
    CHECK(result.flow.passenger[0][0] == doctest::Approx(1.0));
    CHECK(result.flow.rebalance[1] == doctest::Approx(1.0));

    auto res = check_steady_feasibility(netw, demand, result.flow);
    CHECK(res.feasible(1e-7));

    CHECK(result.flow.to_table() ==
          "pair 0 1 edge 0 1.000000\n"
          "rebalance edge 1 1.000000\n");
}

TEST_CASE("dropping the rebalancing leg breaks vehicle conservation") {
    net::Network netw = two_cycle();
    net::DemandMatrix demand(2);
    demand.at(0, 1) = 1.0;

    SteadyFlow flow;
    flow.commodities = {{0, 1}};
    flow.passenger = {{1.0, 0.0}};
    flow.rebalance = {0.0, 0.0};
    auto res = check_steady_feasibility(netw, demand, flow);
    CHECK(res.commodity_conservation == doctest::Approx(0.0));
    CHECK(res.vehicle_conservation == doctest::Approx(1.0));
    CHECK_FALSE(res.feasible(1e-7));
}

TEST_CASE("steady routing is infeasible without a return route") {
    auto netw = net::Network::parse("nodes 3\nhorizon 2\nedge 0 1 affine 1 0\n");
    net::DemandMatrix demand(3);
    demand.at(0, 1) = 1.0;
    CHECK(solve_mp_routing(netw, demand, {}).status == LpStatus::Infeasible);

    net::DemandMatrix d2(3);
    d2.at(0, 2) = 1.0;
    CHECK(solve_mp_routing(netw, d2, {}).status == LpStatus::Infeasible);
}

static net::Network random_steady_net(Rng& rng, uint32_t n) {
    std::ostringstream spec;
    spec << "nodes " << n << "\nhorizon 4\n";
    for (uint32_t u = 0; u < n; u++)
        spec << "edge " << u << " " << (u + 1) % n << " affine 1 0 length "
             << 1 + rng.below(3) << "\n";
    size_t extra = rng.below(n);
    for (size_t k = 0; k < extra; k++) {
        uint32_t a = static_cast<uint32_t>(rng.below(n));
        uint32_t b = static_cast<uint32_t>(rng.below(n));
        if (a == b) continue;
        spec << "edge " << a << " " << b << " affine 1 0 length " << 1 + rng.below(3) << "\n";
    }
    return net::Network::parse(spec.str());
}

TEST_CASE("random steady instances match the combinatorial reference") {
    Rng rng(2024);
    for (int iter = 0; iter < 40; iter++) {
        uint32_t n = 3 + static_cast<uint32_t>(rng.below(4));
        net::Network netw = random_steady_net(rng, n);
        net::DemandMatrix demand(n);
        size_t pairs = 1 + rng.below(3);
        for (size_t k = 0; k < pairs; k++) {
            uint32_t i = static_cast<uint32_t>(rng.below(n));
            uint32_t j = static_cast<uint32_t>(rng.below(n));
            if (i != j) demand.at(i, j) += 1 + rng.below(3);
        }
        MpEconomics econ{20.0, 1.0};
        auto result = solve_mp_routing(netw, demand, econ);
        auto ref = oracle::steady_cost_ref(netw, demand, econ.cost_per_length);
        REQUIRE(result.status == LpStatus::Optimal);
        REQUIRE(ref.has_value());
        CHECK(result.operating_cost == doctest::Approx(*ref).epsilon(1e-9).scale(1.0));
        CHECK(check_steady_feasibility(netw, demand, result.flow).feasible(1e-7));
    }
}

TEST_CASE("time-varying two-node run: serve, return, roll off the horizon") {
    net::Network netw = two_cycle();
    net::DemandTensor demand(2, 2);
    demand.at(0, 1, 0) = 1.0;
    std::vector<double> fleet = {1.0, 0.0};
    MpEconomics econ{10.0, 1.0};

    auto result = solve_mp_routing_tv(netw, demand, fleet, econ);
    REQUIRE(result.status == LpStatus::Optimal);
    CHECK(result.served == doctest::Approx(1.0));
    CHECK(result.operating_cost == doctest::Approx(3.0));
    CHECK(result.profit == doctest::Approx(7.0));
    CHECK(result.flow.passenger[0][result.flow.slot(0, 0)] == doctest::Approx(1.0));
    CHECK(result.flow.rebalance[result.flow.slot(1, 1)] == doctest::Approx(1.0));

    auto res = check_tv_feasibility(netw, demand, fleet, result.flow);
    CHECK(res.feasible(1e-7));
}

TEST_CASE("time-varying solver refuses demand it cannot reach in time") {
    /* Same cycle but the only vehicle starts at the far node; T = 1
     * leaves no time to reposition and serve, so nothing is served and
     * the fleet just burns one hop per step. */
    auto netw = net::Network::parse(
        "nodes 2\nhorizon 1\nedge 0 1 affine 1 0\nedge 1 0 affine 1 0\n");
    net::DemandTensor demand(2, 1);
    demand.at(0, 1, 0) = 1.0;
    std::vector<double> fleet = {0.0, 1.0};
    auto result = solve_mp_routing_tv(netw, demand, fleet, {10.0, 1.0});
    REQUIRE(result.status == LpStatus::Optimal);
    CHECK(result.served == doctest::Approx(0.0));
    CHECK(result.operating_cost == doctest::Approx(2.0));
}

TEST_CASE("tiny time-varying program matches the exhaustive reference") {
    net::Network netw = two_cycle();
    net::DemandTensor demand(2, 2);
    demand.at(0, 1, 0) = 1.0;
    std::vector<double> fleet = {1.0, 0.0};
    MpEconomics econ{10.0, 1.0};

    TvProgram prog = build_tv_program(netw, demand, fleet, econ);
    auto sol = lp_solve(prog.lp);
    REQUIRE(sol.status == LpStatus::Optimal);
    auto ref = oracle::brute_force_min(prog.lp);
    REQUIRE(ref.has_value());
    CHECK(sol.objective == doctest::Approx(*ref).epsilon(1e-8));
    CHECK(sol.objective == doctest::Approx(-7.0));  // negative profit
}

static void random_tv_instance(Rng& rng, net::Network& netw, net::DemandTensor& demand,
                               std::vector<double>& fleet) {
    uint32_t n = 2 + static_cast<uint32_t>(rng.below(2));
    int64_t T = 3 + rng.int_range(0, 2);
    std::ostringstream spec;
    spec << "nodes " << n << "\nhorizon " << T << "\n";
    for (uint32_t u = 0; u < n; u++) spec << "edge " << u << " " << (u + 1) % n << " affine 1 0\n";
    if (n == 3 && rng.chance(0.5)) spec << "edge 2 0 affine 1 0\n";
    netw = net::Network::parse(spec.str());

    demand = net::DemandTensor(n, T);
    size_t entries = 1 + rng.below(2);
    for (size_t k = 0; k < entries; k++) {
        uint32_t i = static_cast<uint32_t>(rng.below(n));
        uint32_t j = static_cast<uint32_t>(rng.below(n));
        if (i != j) demand.at(i, j, rng.int_range(0, T / 2)) += 1 + rng.below(2);
    }
    fleet.assign(n, 0.0);
    for (uint32_t u = 0; u < n; u++) fleet[u] = rng.below(3);
    fleet[0] += 1;  // never an empty system
}

TEST_CASE("random time-varying optima carry a clean duality certificate") {
    Rng rng(777);
    for (int iter = 0; iter < 25; iter++) {
        net::Network netw;
        net::DemandTensor demand;
        std::vector<double> fleet;
        random_tv_instance(rng, netw, demand, fleet);
        MpEconomics econ{15.0, 1.0};

        TvProgram prog = build_tv_program(netw, demand, fleet, econ);
        auto sol = lp_solve(prog.lp);
        REQUIRE(sol.status == LpStatus::Optimal);
        CHECK(oracle::audit_lp_certificate(prog.lp, sol).worst() < 1e-6);

        auto result = solve_mp_routing_tv(netw, demand, fleet, econ);
        REQUIRE(result.status == LpStatus::Optimal);
        CHECK(check_tv_feasibility(netw, demand, fleet, result.flow).feasible(1e-6));
        CHECK(result.profit == doctest::Approx(-sol.objective).epsilon(1e-7).scale(1.0));
    }
}

TEST_CASE("flow tables serialize stably") {
    net::Network netw = two_cycle();
    net::DemandTensor demand(2, 2);
    demand.at(0, 1, 0) = 1.0;
    auto result = solve_mp_routing_tv(netw, demand, {1.0, 0.0}, {10.0, 1.0});
    REQUIRE(result.status == LpStatus::Optimal);
    CHECK(result.flow.to_table() ==
          "pair 0 1 t 0 edge 0 1.000000\n"
          "rebalance t 1 edge 1 1.000000\n"
          "rebalance t 2 edge 0 1.000000\n");
}
