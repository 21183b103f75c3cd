#include <doctest.h>

#include <sstream>

#include "atrace/trace_io.hpp"

using namespace atrace;

namespace {

std::string dump(std::uint64_t p, const std::vector<Packet>& packets) {
    std::ostringstream out;
    write_trace(out, p, packets);
    return out.str();
}

} // namespace

TEST_CASE("trace dumps round-trip") {
    const std::vector<Packet> packets{
        {1, 3, 2, 9}, {0, 3, 0, 0}, {1, 10, 65536, 12345},
    };
    std::istringstream in(dump(65537, packets));
    const TraceFile file = read_trace(in);
    CHECK(file.p == 65537);
    CHECK(file.packets == packets);
}

TEST_CASE("trace dumps are fixed-width binary") {
    CHECK(dump(11, {}).size() == 10);                   // header only
    CHECK(dump(11, {{1, 3, 2, 9}}).size() == 10 + 11);  // one record
    CHECK(dump(11, std::vector<Packet>(7)).size() == 10 + 7 * 11);
}

TEST_CASE("corrupted traces are rejected with a format error") {
    const std::string good = dump(11, {{1, 3, 2, 9}});

    SUBCASE("bad magic") {
        std::string bad = good;
        bad[0] = 'X';
        std::istringstream in(bad);
        CHECK_THROWS_AS(read_trace(in), FormatError);
    }
    SUBCASE("unknown version") {
        std::string bad = good;
        bad[4] = 0x7f;
        std::istringstream in(bad);
        CHECK_THROWS_AS(read_trace(in), FormatError);
    }
    SUBCASE("truncated record") {
        std::istringstream in(good.substr(0, good.size() - 3));
        CHECK_THROWS_AS(read_trace(in), FormatError);
    }
    SUBCASE("truncated header") {
        std::istringstream in(good.substr(0, 6));
        CHECK_THROWS_AS(read_trace(in), FormatError);
    }
}

TEST_CASE("scenario JSON parses the documented schema") {
    const Scenario sc = parse_scenario(R"({
        "p": 65537,
        "path": [3, 5, 2],
        "events": [
            {"kind": "add", "position": 2, "id": 7, "at_packet": 10},
            {"kind": "delete", "position": 1, "at_packet": 30},
            {"kind": "none", "at_packet": 50}
        ],
        "seed": 9, "n_packets": 100, "delta": 1,
        "mode": "randomized", "scheme": "uniform", "q": 0.2
    })");
    CHECK(sc.p == 65537);
    CHECK(sc.initial_path == Path({3, 5, 2}));
    REQUIRE(sc.events.size() == 3);
    CHECK(sc.events[0].event == ChangeEvent::added(2, 7));
    CHECK(sc.events[0].at_packet == 10);
    CHECK(sc.events[1].event == ChangeEvent::deleted(1));
    CHECK(sc.events[2].event == ChangeEvent::none());
    CHECK(sc.seed == 9);
    CHECK(sc.n_packets == 100);
    CHECK(sc.delta == 1);
    CHECK(sc.mode == SimMode::Randomized);
    CHECK(sc.config.scheme == MarkingConfig::Scheme::Uniform);
    CHECK(sc.config.q == doctest::Approx(0.2));
}

TEST_CASE("scenarios survive a JSON round trip") {
    Scenario sc;
    sc.p = 11;
    sc.initial_path = Path({3, 5, 2});
    sc.events = {{ChangeEvent::added(2, 7), 10}, {ChangeEvent::none(), 40}};
    sc.seed = 77;
    sc.n_packets = 500;
    sc.mode = SimMode::Randomized;
    sc.config = MarkingConfig::geometric(0.5, 4);

    const Scenario back = parse_scenario(scenario_to_json(sc));
    CHECK(back.p == sc.p);
    CHECK(back.initial_path == sc.initial_path);
    REQUIRE(back.events.size() == sc.events.size());
    for (std::size_t i = 0; i < sc.events.size(); ++i) {
        CHECK(back.events[i].event == sc.events[i].event);
        CHECK(back.events[i].at_packet == sc.events[i].at_packet);
    }
    CHECK(back.seed == sc.seed);
    CHECK(back.n_packets == sc.n_packets);
    CHECK(back.mode == sc.mode);
    CHECK(back.config.scheme == sc.config.scheme);
    CHECK(back.config.alpha == doctest::Approx(sc.config.alpha));
    CHECK(back.config.h0 == sc.config.h0);
}

TEST_CASE("malformed scenarios name the offending field") {
    CHECK_THROWS_AS(parse_scenario("not json"), FormatError);
    CHECK_THROWS_AS(parse_scenario(R"({"path": [3]})"), FormatError);
    CHECK_THROWS_AS(
        parse_scenario(
            R"({"p": 11, "path": [3], "events": [{"kind": "replace", "at_packet": 1}]})"),
        FormatError);
    // event times must strictly increase
    CHECK_THROWS_AS(
        parse_scenario(R"({"p": 11, "path": [3], "events": [
            {"kind": "none", "at_packet": 5},
            {"kind": "none", "at_packet": 5}]})"),
        FormatError);
}
