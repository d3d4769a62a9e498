#include "pmm/sim/scenario.hpp"

#include <fstream>
#include <sstream>
#include <stdexcept>

namespace pmm::sim {

namespace {

[[noreturn]] void bad(const std::string& what, int line_no) {
    throw DecodeError("scenario: " + what + " on line " + std::to_string(line_no));
}

/* Collects the raw lines of a `network`/`projects` section up to its
 * matching `end`, for the section's own parser.  Project scripts close
 * each inner `project` with an `end` of their own, so those are depth
 * counted and kept. */
std::string take_block(std::istringstream& stream, const std::string& opener, int& line_no) {
    std::string block, line;
    const int opened_at = line_no;
    int depth = 0;
    while (std::getline(stream, line)) {
        line_no++;
        std::istringstream probe(line);
        std::string word;
        probe >> word;
        if (word == "project") depth++;
        if (word == "end") {
            if (depth == 0) return block;
            depth--;
        }
        block += line + "\n";
    }
    bad("unterminated " + opener + " section opened", opened_at);
}

protocol::Query parse_query(std::istringstream& in, const Scenario& sc, int line_no) {
    std::string kind_name;
    if (!(in >> kind_name)) bad("query needs a kind", line_no);
    if (kind_name == "regulation") kind_name = "regulation-bundle";  // directive shorthand
    const auto kind = protocol::query_kind_from_string(kind_name);
    if (!kind) bad("unknown query kind '" + kind_name + "'", line_no);

    protocol::Query query;
    query.kind = *kind;
    switch (*kind) {
        case protocol::QueryKind::TripCount:
        case protocol::QueryKind::CongestionPricing:
        case protocol::QueryKind::RawDemand:
            break;
        case protocol::QueryKind::SopSelection:
            query.projects = sc.projects;
            if (query.projects.empty()) bad("sop-selection needs a projects block first", line_no);
            break;
        case protocol::QueryKind::Wage:
            if (in >> query.wage_alpha) {
                if (!(in >> query.wage_beta)) bad("wage takes both rates or neither", line_no);
            }
            break;
        case protocol::QueryKind::WaitEquity: {
            std::string word;
            if (!(in >> query.wait_tau)) bad("wait-equity needs a tolerance", line_no);
            if (!(in >> word) || word != "regions") bad("wait-equity needs regions", line_no);
            uint32_t region;
            while (in >> region) query.region_of.push_back(region);
            break;
        }
        case protocol::QueryKind::CongestionContribution:
            if (!(in >> query.share_limit)) bad("congestion-contribution needs a share", line_no);
            break;
        case protocol::QueryKind::Emissions:
            if (!(in >> query.emission_limit)) bad("emissions needs a limit", line_no);
            break;
        case protocol::QueryKind::RegulationBundle: {
            std::string word;
            while (in >> word) {
                protocol::RegPredicate pred;
                if (word == "wait") {
                    pred.kind = protocol::RegPredicate::Kind::WaitTimeEquity;
                    if (!(in >> pred.tau)) bad("regulation wait needs a tolerance", line_no);
                } else if (word == "contribution") {
                    pred.kind = protocol::RegPredicate::Kind::CongestionContribution;
                    if (!(in >> pred.share_limit)) bad("regulation contribution needs a share", line_no);
                } else if (word == "speed") {
                    pred.kind = protocol::RegPredicate::Kind::SpeedLimit;
                    double limit;
                    if (!(in >> limit)) bad("regulation speed needs a limit", line_no);
                    if (sc.network.edges.empty()) bad("regulation speed needs the network first", line_no);
                    pred.speed_limit.assign(sc.network.edges.size(), limit);
                } else if (word == "period2") {
                    pred.kind = protocol::RegPredicate::Kind::Period2Accuracy;
                    if (!(in >> pred.max_match_delay)) bad("regulation period2 needs a delay", line_no);
                } else if (word == "emissions") {
                    pred.kind = protocol::RegPredicate::Kind::EmissionsLimit;
                    if (!(in >> pred.emission_limit)) bad("regulation emissions needs a limit", line_no);
                } else {
                    bad("unknown regulation clause '" + word + "'", line_no);
                }
                query.predicates.push_back(std::move(pred));
            }
            if (query.predicates.empty()) bad("regulation needs at least one clause", line_no);
            break;
        }
    }
    return query;
}

}  // namespace

Scenario Scenario::parse(const std::string& text, const std::string& name) {
    Scenario sc;
    sc.name = name;
    bool saw_network = false, saw_strategy = false;

    std::istringstream stream(text);
    std::string line;
    int line_no = 0;
    while (std::getline(stream, line)) {
        line_no++;
        auto hash = line.find('#');
        if (hash != std::string::npos) line.resize(hash);
        std::istringstream in(line);
        std::string word;
        if (!(in >> word)) continue;

        if (word == "backend") {
            std::string which;
            if (!(in >> which)) bad("backend needs a name", line_no);
            const auto backend = protocol::backend_from_string(which);
            if (!backend) bad("unknown backend '" + which + "'", line_no);
            sc.backend = *backend;
        } else if (word == "network") {
            sc.network = net::Network::parse(take_block(stream, "network", line_no));
            saw_network = true;
        } else if (word == "projects") {
            sc.projects = flow::parse_projects(take_block(stream, "projects", line_no));
        } else if (word == "request") {
            net::Request req;
            if (!(in >> req.origin >> req.dest >> req.t)) bad("request needs origin dest t", line_no);
            sc.requests.push_back(req);
        } else if (word == "requests") {
            std::string mode;
            if (!(in >> mode) || mode != "random") bad("requests only come in 'random'", line_no);
            std::string tmax;
            if (!(in >> sc.random_requests >> tmax) || tmax != "tmax" || !(in >> sc.random_tmax))
                bad("requests random needs a count and tmax", line_no);
        } else if (word == "receipts") {
            std::string who;
            if (!(in >> who)) bad("receipts needs a policy", line_no);
            if (who == "all") {
                sc.receipts = Receipts::All;
            } else if (who == "none") {
                sc.receipts = Receipts::None;
            } else {
                sc.receipts = Receipts::Listed;
                uint64_t id;
                std::istringstream first(who);
                if (!(first >> id)) bad("receipts needs 'all', 'none', or trip ids", line_no);
                sc.receipt_ids.push_back(id);
                while (in >> id) sc.receipt_ids.push_back(id);
            }
        } else if (word == "mp") {
            std::string field;
            if (!(in >> field)) bad("mp needs a field", line_no);
            if (field == "fare") {
                if (!(in >> sc.mp.trip_fare)) bad("mp fare needs a value", line_no);
            } else if (field == "wage") {
                if (!(in >> sc.mp.wage_alpha >> sc.mp.wage_beta)) bad("mp wage needs two rates", line_no);
            } else if (field == "whitelist") {
                std::string kind_name;
                while (in >> kind_name) {
                    const auto kind = protocol::query_kind_from_string(kind_name);
                    if (!kind) bad("unknown query kind '" + kind_name + "'", line_no);
                    sc.mp.whitelist.push_back(*kind);
                }
                if (sc.mp.whitelist.empty()) bad("mp whitelist needs at least one kind", line_no);
            } else {
                bad("unknown mp field '" + field + "'", line_no);
            }
        } else if (word == "strategy") {
            std::string which;
            if (!(in >> which)) bad("strategy needs a name", line_no);
            saw_strategy = true;
            if (which == "honest") {
                sc.strategy = protocol::Honest{};
            } else if (which == "omit") {
                protocol::OmitTrips omit;
                uint64_t id;
                while (in >> id) omit.trip_ids.push_back(id);
                if (omit.trip_ids.empty()) bad("strategy omit needs trip ids", line_no);
                sc.strategy = omit;
            } else if (which == "inject") {
                if (!(in >> sc.inject_count) || sc.inject_count == 0)
                    bad("strategy inject needs a count", line_no);
                sc.strategy = protocol::InjectTrips{};
            } else if (which == "tamper") {
                protocol::TamperTrip tamper;
                if (!(in >> tamper.trip_id)) bad("strategy tamper needs a trip id", line_no);
                std::string field;
                while (in >> field) {
                    int64_t value;
                    if (!(in >> value)) bad("tamper " + field + " needs a value", line_no);
                    if (field == "fare")
                        tamper.trip_fare = value;
                    else if (field == "wage")
                        tamper.driver_wage = value;
                    else if (field == "dropoff")
                        tamper.dropoff_time = value;
                    else
                        bad("unknown tamper field '" + field + "'", line_no);
                }
                if (!tamper.trip_fare && !tamper.driver_wage && !tamper.dropoff_time)
                    bad("tamper changes nothing", line_no);
                sc.strategy = tamper;
            } else if (which == "misreport") {
                protocol::MisreportPeriod mis;
                if (!(in >> mis.trip_id >> mis.delay)) bad("strategy misreport needs id and delay", line_no);
                sc.strategy = mis;
            } else {
                bad("unknown strategy '" + which + "'", line_no);
            }
        } else if (word == "ara") {
            sc.use_ara = true;
            if (!(in >> sc.ara.eps)) bad("ara needs a tolerance", line_no);
            std::string opt;
            if (in >> opt) {
                if (opt != "dropout" || !(in >> sc.ara.gps_dropout)) bad("bad ara option", line_no);
            }
        } else if (word == "rra") {
            sc.use_rra = true;
            if (!(in >> sc.rra.p >> sc.rra.round_len >> sc.rra.rounds))
                bad("rra needs p, round length, and rounds", line_no);
        } else if (word == "fine") {
            std::string field;
            int64_t value;
            if (!(in >> field >> value)) bad("fine needs a field and value", line_no);
            if (field == "rider")
                sc.fines.rider_witness_fine = value;
            else if (field == "floor")
                sc.fines.floor = value;
            else if (field == "margin")
                sc.fines.margin = value;
            else
                bad("unknown fine field '" + field + "'", line_no);
        } else if (word == "econ") {
            if (!(in >> sc.econ.u_dishonest >> sc.econ.u_honest >> sc.econ.detect_p))
                bad("econ needs three values", line_no);
        } else if (word == "routing-econ") {
            if (!(in >> sc.routing_econ.fare_per_request >> sc.routing_econ.cost_per_length))
                bad("routing-econ needs two values", line_no);
        } else if (word == "background") {
            double flow;
            while (in >> flow) sc.background.push_back(flow);
        } else if (word == "query") {
            sc.queries.push_back(parse_query(in, sc, line_no));
        } else {
            bad("unknown directive '" + word + "'", line_no);
        }
    }

    if (!saw_network) throw DecodeError("scenario: no network block");
    if (!saw_strategy) throw DecodeError("scenario: no strategy directive");
    if (sc.requests.empty() && sc.random_requests == 0)
        throw DecodeError("scenario: no requests");
    for (const auto& query : sc.queries)
        if (query.kind == protocol::QueryKind::WaitEquity &&
            query.region_of.size() != sc.network.n)
            throw DecodeError("scenario: wait-equity regions must cover every node");
    if (!sc.background.empty() && sc.background.size() != sc.network.edges.size())
        throw DecodeError("scenario: background must cover every edge");
    return sc;
}

Scenario load_scenario(const std::string& path) {
    std::ifstream file(path);
    if (!file) throw std::runtime_error("cannot open scenario: " + path);
    std::stringstream buffer;
    buffer << file.rdbuf();
    auto slash = path.find_last_of('/');
    std::string stem = slash == std::string::npos ? path : path.substr(slash + 1);
    auto dot = stem.rfind('.');
    if (dot != std::string::npos) stem.resize(dot);
    return Scenario::parse(buffer.str(), stem);
}

}  // namespace pmm::sim
