#pragma once

#include <string>
#include <vector>

#include "pmm/protocol/authority.hpp"
#include "pmm/protocol/proofsys.hpp"
#include "pmm/protocol/provider.hpp"

namespace pmm::sim {

/* One experiment, line-directive text like the network and project
 * scripts ('#' starts a comment):
 *
 *   backend transparent | opaque-sealed
 *   network ... end                    (network directives verbatim)
 *   projects ... end                   (project scripts, for sop-selection)
 *   request <origin> <dest> <t>
 *   requests random <count> tmax <t>   (drawn from the run seed)
 *   receipts all | none | <trip id...>
 *   mp fare <v> | mp wage <alpha> <beta> | mp whitelist <kind...>
 *   strategy honest
 *   strategy omit <trip id...>
 *   strategy inject <count>            (fabricated at run time)
 *   strategy tamper <id> [fare <v>] [wage <v>] [dropoff <t>]
 *   strategy misreport <id> <delay>
 *   ara <eps> [dropout <q>]
 *   rra <p> <round_len> <rounds>
 *   fine rider <v> | fine floor <v> | fine margin <v>
 *   econ <u_dishonest> <u_honest> <detect_p>
 *   routing-econ <fare_per_request> <cost_per_length>
 *   background <per-edge flow...>
 *   query trip-count
 *   query wage [<alpha> <beta>]
 *   query wait-equity <tau> regions <region per node...>
 *   query congestion-pricing
 *   query sop-selection
 *   query congestion-contribution <share>
 *   query emissions <limit>
 *   query regulation [wait <tau>] [contribution <share>] [speed <limit>]
 *                    [period2 <delay>] [emissions <limit>]
 *   query raw-demand
 */
struct Scenario {
    std::string name;
    protocol::Backend backend = protocol::Backend::Transparent;
    net::Network network;

    std::vector<net::Request> requests;
    uint32_t random_requests = 0;
    int64_t random_tmax = 0;

    enum class Receipts { All, None, Listed };
    Receipts receipts = Receipts::All;
    std::vector<uint64_t> receipt_ids;

    protocol::ProviderConfig mp;
    protocol::Strategy strategy = protocol::Honest{};
    uint32_t inject_count = 0;  // nonzero: strategy is injection, fabricated per run

    bool use_ara = false;
    protocol::AraConfig ara;
    bool use_rra = false;
    protocol::RraConfig rra;

    protocol::FineSchedule fines;
    protocol::FineInputs econ{0, 0, 1.0};
    flow::MpEconomics routing_econ;
    std::vector<double> background;

    std::vector<protocol::Query> queries;
    std::vector<flow::Project> projects;

    /* Throws DecodeError naming the offending line. */
    static Scenario parse(const std::string& text, const std::string& name = "scenario");
};

Scenario load_scenario(const std::string& path);  // reads the file, name = stem

}  // namespace pmm::sim
