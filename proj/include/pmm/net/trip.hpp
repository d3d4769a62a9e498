#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "pmm/bytes.hpp"
#include "pmm/net/network.hpp"

namespace pmm::net {

/* "You have been matched to vehicle <id> at time <t>", signed by the
 * provider at match time and embedded in the record so downstream
 * checks can compare the declared match time against the committed
 * timestamps without any extra data flow. */
struct MatchNotice {
    std::string message;
    std::array<uint8_t, 64> signature{};

    bool present() const { return !message.empty(); }
    static std::string format(uint64_t vehicle_id, int64_t time);
    /* Parses "<vehicle_id> <time>" back out of the fixed phrasing;
     * false if the message deviates from it. */
    static bool parse(const std::string& message, uint64_t& vehicle_id, int64_t& time);
};

struct VehicleInfo {
    uint64_t vehicle_id = 0;
    std::string make_model;
    int64_t emission_rate = 0;  // per edge traversed
};

struct Traverse {
    uint32_t edge = 0;
    int64_t entry = 0;
};

/* One completed trip. Timestamps are whole simulation steps and money
 * fields are integer currency units, so every downstream predicate is
 * exact. The trajectory covers the vehicle's movement from match to
 * dropoff; the pickup time splits it into the approach (period 2) and
 * the ride (period 3). */
struct TripRecord {
    uint64_t trip_id = 0;
    uint32_t pickup_loc = 0;
    uint32_t dropoff_loc = 0;
    int64_t request_time = 0;
    int64_t match_time = 0;
    int64_t pickup_time = 0;
    int64_t dropoff_time = 0;
    int64_t trip_fare = 0;
    int64_t driver_wage = 0;
    VehicleInfo vehicle;
    std::vector<Traverse> trajectory;
    MatchNotice notice;

    int64_t wait_time() const { return pickup_time - request_time; }
};

enum class TripViolation {
    TimestampOrder,   // request <= match <= pickup <= dropoff broken
    UnknownEdge,      // trajectory references an edge not in the network
    BrokenPath,       // consecutive edges not head-to-tail
    SpanMismatch,     // trajectory does not cover [match, dropoff)
    EndpointMismatch,  // path does not meet the pickup/dropoff vertices
};

const char* to_string(TripViolation v);

std::vector<TripViolation> validate_trip(const TripRecord& trip, const Network& net);

/* An edge traversal entered strictly before pickup belongs to period 2
 * (approach); at or after pickup, period 3 (ride). */
int period_of(const TripRecord& trip, int64_t entry_time);

struct PeriodTraverse {
    uint32_t edge;
    int64_t entry;
    int period;  // 2 or 3
};
std::vector<PeriodTraverse> traversals(const TripRecord& trip);

/* Canonical injective encoding: fixed-width little-endian integers in
 * declaration order, strings and lists carrying their lengths. Every
 * commitment, receipt, and witness uses exactly these bytes. */
Bytes encode_trip(const TripRecord& trip);
TripRecord decode_trip(std::span<const uint8_t> data);  // throws DecodeError

Bytes encode_trips(const std::vector<TripRecord>& trips);
std::vector<TripRecord> decode_trips(std::span<const uint8_t> data);

struct Request {
    uint32_t origin = 0;
    uint32_t dest = 0;
    int64_t t = 0;
};

}  // namespace pmm::net
