#include "pmm/net/trip.hpp"

#include <algorithm>
#include <sstream>

namespace pmm::net {

std::string MatchNotice::format(uint64_t vehicle_id, int64_t time) {
    std::ostringstream out;
    out << "You have been matched to vehicle " << vehicle_id << " at time " << time;
    return out.str();
}

bool MatchNotice::parse(const std::string& message, uint64_t& vehicle_id, int64_t& time) {
    std::istringstream in(message);
    std::string w;
    auto expect = [&](const char* tok) { return (in >> w) && w == tok; };
    if (!expect("You") || !expect("have") || !expect("been") || !expect("matched") ||
        !expect("to") || !expect("vehicle"))
        return false;
    if (!(in >> vehicle_id)) return false;
    if (!expect("at") || !expect("time")) return false;
    if (!(in >> time)) return false;
    return !(in >> w);  // nothing may follow
}

const char* to_string(TripViolation v) {
    switch (v) {
        case TripViolation::TimestampOrder: return "timestamp-order";
        case TripViolation::UnknownEdge: return "unknown-edge";
        case TripViolation::BrokenPath: return "broken-path";
        case TripViolation::SpanMismatch: return "span-mismatch";
        case TripViolation::EndpointMismatch: return "endpoint-mismatch";
    }
    return "?";
}

int period_of(const TripRecord& trip, int64_t entry_time) {
    return entry_time < trip.pickup_time ? 2 : 3;
}

std::vector<PeriodTraverse> traversals(const TripRecord& trip) {
    std::vector<PeriodTraverse> out;
    out.reserve(trip.trajectory.size());
    for (const Traverse& t : trip.trajectory)
        out.push_back({t.edge, t.entry, period_of(trip, t.entry)});
    return out;
}

std::vector<TripViolation> validate_trip(const TripRecord& trip, const Network& net) {
    std::vector<TripViolation> out;
    if (!(trip.request_time <= trip.match_time && trip.match_time <= trip.pickup_time &&
          trip.pickup_time <= trip.dropoff_time))
        out.push_back(TripViolation::TimestampOrder);

    bool edges_known = true;
    for (const Traverse& t : trip.trajectory)
        if (t.edge >= net.edges.size()) edges_known = false;
    if (!edges_known) {
        out.push_back(TripViolation::UnknownEdge);
        return out;  // the path checks below would index out of range
    }

    for (size_t k = 0; k + 1 < trip.trajectory.size(); k++)
        if (net.edges[trip.trajectory[k].edge].dst != net.edges[trip.trajectory[k + 1].edge].src) {
            out.push_back(TripViolation::BrokenPath);
            break;
        }

    bool span_ok = true;
    if (trip.match_time < trip.dropoff_time) {
        if (trip.trajectory.empty()) span_ok = false;
        if (span_ok && trip.trajectory.front().entry != trip.match_time) span_ok = false;
        for (size_t k = 0; span_ok && k < trip.trajectory.size(); k++) {
            int64_t entry = trip.trajectory[k].entry;
            if (entry < trip.match_time || entry >= trip.dropoff_time) span_ok = false;
            if (k > 0 && entry <= trip.trajectory[k - 1].entry) span_ok = false;
        }
    } else if (!trip.trajectory.empty()) {
        span_ok = false;  // zero-duration trip cannot move
    }
    if (!span_ok) out.push_back(TripViolation::SpanMismatch);

    if (!trip.trajectory.empty()) {
        if (net.edges[trip.trajectory.back().edge].dst != trip.dropoff_loc)
            out.push_back(TripViolation::EndpointMismatch);
        else {
            for (const Traverse& t : trip.trajectory)
                if (t.entry >= trip.pickup_time) {
                    if (net.edges[t.edge].src != trip.pickup_loc)
                        out.push_back(TripViolation::EndpointMismatch);
                    break;
                }
        }
    }
    return out;
}

Bytes encode_trip(const TripRecord& trip) {
    ByteWriter w;
    w.u64(trip.trip_id);
    w.u32(trip.pickup_loc);
    w.u32(trip.dropoff_loc);
    w.i64(trip.request_time);
    w.i64(trip.match_time);
    w.i64(trip.pickup_time);
    w.i64(trip.dropoff_time);
    w.i64(trip.trip_fare);
    w.i64(trip.driver_wage);
    w.u64(trip.vehicle.vehicle_id);
    w.lp_string(trip.vehicle.make_model);
    w.i64(trip.vehicle.emission_rate);
    w.u32(static_cast<uint32_t>(trip.trajectory.size()));
    for (const Traverse& t : trip.trajectory) {
        w.u32(t.edge);
        w.i64(t.entry);
    }
    w.lp_string(trip.notice.message);
    if (trip.notice.present())
        w.lp_bytes(trip.notice.signature);
    else
        w.lp_bytes({});
    return w.take();
}

static TripRecord decode_one(ByteReader& r) {
    TripRecord trip;
    trip.trip_id = r.u64();
    trip.pickup_loc = r.u32();
    trip.dropoff_loc = r.u32();
    trip.request_time = r.i64();
    trip.match_time = r.i64();
    trip.pickup_time = r.i64();
    trip.dropoff_time = r.i64();
    trip.trip_fare = r.i64();
    trip.driver_wage = r.i64();
    trip.vehicle.vehicle_id = r.u64();
    trip.vehicle.make_model = r.lp_string();
    trip.vehicle.emission_rate = r.i64();
    uint32_t steps = r.u32();
    trip.trajectory.reserve(steps);
    for (uint32_t i = 0; i < steps; i++) {
        Traverse t;
        t.edge = r.u32();
        t.entry = r.i64();
        trip.trajectory.push_back(t);
    }
    trip.notice.message = r.lp_string();
    Bytes sig = r.lp_bytes();
    if (!sig.empty()) {
        if (sig.size() != 64) throw DecodeError("trip: notice signature must be 64 bytes");
        std::copy(sig.begin(), sig.end(), trip.notice.signature.begin());
    }
    return trip;
}

TripRecord decode_trip(std::span<const uint8_t> data) {
    ByteReader r(data);
    TripRecord trip = decode_one(r);
    r.expect_end();
    return trip;
}

Bytes encode_trips(const std::vector<TripRecord>& trips) {
    ByteWriter w;
    w.u32(static_cast<uint32_t>(trips.size()));
    for (const TripRecord& t : trips) w.lp_bytes(encode_trip(t));
    return w.take();
}

std::vector<TripRecord> decode_trips(std::span<const uint8_t> data) {
    ByteReader r(data);
    uint32_t count = r.u32();
    std::vector<TripRecord> out;
    out.reserve(count);
    for (uint32_t i = 0; i < count; i++) {
        Bytes one = r.lp_bytes();
        out.push_back(decode_trip(one));
    }
    r.expect_end();
    return out;
}

}  // namespace pmm::net
