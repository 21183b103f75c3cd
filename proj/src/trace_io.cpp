#include "atrace/trace_io.hpp"

#include <array>
#include <fstream>
#include <istream>
#include <ostream>

#include <json.hpp>

#include "atrace/errors.hpp"

namespace atrace {

namespace {

constexpr std::array<char, 4> kMagic{'A', 'T', 'R', 'C'};

void put_le(std::ostream& out, std::uint64_t value, std::size_t bytes) {
    for (std::size_t i = 0; i < bytes; ++i)
        out.put(static_cast<char>((value >> (8 * i)) & 0xff));
}

std::uint64_t get_le(std::istream& in, std::size_t bytes, const char* what) {
    std::uint64_t value = 0;
    for (std::size_t i = 0; i < bytes; ++i) {
        const int c = in.get();
        if (c == std::char_traits<char>::eof())
            throw FormatError(std::string("truncated trace: ") + what);
        value |= static_cast<std::uint64_t>(static_cast<unsigned char>(c)) << (8 * i);
    }
    return value;
}

} // namespace

void write_trace(std::ostream& out, std::uint64_t p, const std::vector<Packet>& packets) {
    out.write(kMagic.data(), kMagic.size());
    put_le(out, kTraceVersion, 2);
    put_le(out, p, 4);
    for (const Packet& pkt : packets) {
        put_le(out, pkt.flag, 1);
        put_le(out, pkt.hop, 2);
        put_le(out, pkt.x, 4);
        put_le(out, pkt.y, 4);
    }
}

TraceFile read_trace(std::istream& in) {
    std::array<char, 4> magic{};
    in.read(magic.data(), magic.size());
    if (in.gcount() != static_cast<std::streamsize>(magic.size()) || magic != kMagic)
        throw FormatError("bad trace magic");
    const auto version = get_le(in, 2, "version");
    if (version != kTraceVersion)
        throw FormatError("unsupported trace version " + std::to_string(version));

    TraceFile file;
    file.p = get_le(in, 4, "modulus");
    for (;;) {
        const int first = in.peek();
        if (first == std::char_traits<char>::eof()) break;
        Packet pkt;
        pkt.flag = static_cast<std::uint8_t>(get_le(in, 1, "flag"));
        pkt.hop = static_cast<std::uint32_t>(get_le(in, 2, "hop"));
        pkt.x = get_le(in, 4, "x");
        pkt.y = get_le(in, 4, "y");
        file.packets.push_back(pkt);
    }
    return file;
}

namespace {

using nlohmann::json;

ChangeEvent::Kind parse_kind(const std::string& kind) {
    if (kind == "add") return ChangeEvent::Kind::Added;
    if (kind == "delete") return ChangeEvent::Kind::Deleted;
    if (kind == "none") return ChangeEvent::Kind::NoChange;
    throw FormatError("unknown event kind \"" + kind + "\"");
}

std::string kind_name(ChangeEvent::Kind kind) {
    switch (kind) {
    case ChangeEvent::Kind::Added: return "add";
    case ChangeEvent::Kind::Deleted: return "delete";
    case ChangeEvent::Kind::NoChange: return "none";
    }
    return "none";
}

MarkingConfig::Scheme parse_scheme(const std::string& scheme) {
    if (scheme == "uniform") return MarkingConfig::Scheme::Uniform;
    if (scheme == "cutoff") return MarkingConfig::Scheme::Cutoff;
    if (scheme == "geometric") return MarkingConfig::Scheme::Geometric;
    if (scheme == "deterministic") return MarkingConfig::Scheme::Deterministic;
    throw FormatError("unknown scheme \"" + scheme + "\"");
}

std::string scheme_name(MarkingConfig::Scheme scheme) {
    switch (scheme) {
    case MarkingConfig::Scheme::Uniform: return "uniform";
    case MarkingConfig::Scheme::Cutoff: return "cutoff";
    case MarkingConfig::Scheme::Geometric: return "geometric";
    case MarkingConfig::Scheme::Deterministic: return "deterministic";
    }
    return "uniform";
}

} // namespace

Scenario parse_scenario(const std::string& json_text) {
    json doc;
    try {
        doc = json::parse(json_text);
    } catch (const json::parse_error& err) {
        throw FormatError(std::string("scenario is not valid JSON: ") + err.what());
    }

    try {
        Scenario sc;
        sc.p = doc.at("p").get<std::uint64_t>();
        sc.initial_path.nodes = doc.at("path").get<std::vector<fe>>();
        if (sc.initial_path.nodes.empty()) throw FormatError("\"path\" must be nonempty");

        for (const json& ev : doc.value("events", json::array())) {
            TimedEvent timed;
            timed.at_packet = ev.at("at_packet").get<std::size_t>();
            const auto kind = parse_kind(ev.at("kind").get<std::string>());
            switch (kind) {
            case ChangeEvent::Kind::Added:
                timed.event = ChangeEvent::added(ev.at("position").get<std::size_t>(),
                                                 ev.at("id").get<fe>());
                break;
            case ChangeEvent::Kind::Deleted:
                timed.event = ChangeEvent::deleted(ev.at("position").get<std::size_t>());
                break;
            case ChangeEvent::Kind::NoChange:
                timed.event = ChangeEvent::none();
                break;
            }
            sc.events.push_back(timed);
        }
        for (std::size_t i = 1; i < sc.events.size(); ++i)
            if (sc.events[i].at_packet <= sc.events[i - 1].at_packet)
                throw FormatError("event packet indices must be strictly increasing");

        sc.seed = doc.value("seed", sc.seed);
        sc.n_packets = doc.value("n_packets", sc.n_packets);
        sc.delta = doc.value("delta", sc.delta);
        if (doc.contains("mode")) {
            const auto mode = doc["mode"].get<std::string>();
            if (mode == "deterministic") sc.mode = SimMode::Deterministic;
            else if (mode == "randomized") sc.mode = SimMode::Randomized;
            else throw FormatError("unknown mode \"" + mode + "\"");
        }
        if (doc.contains("scheme")) sc.config.scheme = parse_scheme(doc["scheme"].get<std::string>());
        else if (sc.mode == SimMode::Randomized) sc.config.scheme = MarkingConfig::Scheme::Uniform;
        sc.config.q = doc.value("q", sc.config.q);
        sc.config.alpha = doc.value("alpha", sc.config.alpha);
        sc.config.h0 = doc.value("h0", sc.config.h0);
        return sc;
    } catch (const json::exception& err) {
        throw FormatError(std::string("bad scenario: ") + err.what());
    }
}

Scenario load_scenario(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw FormatError("cannot open scenario file " + path);
    std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    return parse_scenario(text);
}

std::string scenario_to_json(const Scenario& scenario) {
    json doc;
    doc["p"] = scenario.p;
    doc["path"] = scenario.initial_path.nodes;
    json events = json::array();
    for (const TimedEvent& timed : scenario.events) {
        json ev;
        ev["kind"] = kind_name(timed.event.kind);
        ev["at_packet"] = timed.at_packet;
        if (timed.event.kind == ChangeEvent::Kind::Added) {
            ev["position"] = timed.event.position;
            ev["id"] = timed.event.id;
        } else if (timed.event.kind == ChangeEvent::Kind::Deleted) {
            ev["position"] = timed.event.position;
        }
        events.push_back(ev);
    }
    doc["events"] = events;
    doc["seed"] = scenario.seed;
    doc["n_packets"] = scenario.n_packets;
    doc["delta"] = scenario.delta;
    doc["mode"] = scenario.mode == SimMode::Deterministic ? "deterministic" : "randomized";
    doc["scheme"] = scheme_name(scenario.config.scheme);
    doc["q"] = scenario.config.q;
    doc["alpha"] = scenario.config.alpha;
    doc["h0"] = scenario.config.h0;
    return doc.dump(2);
}

} // namespace atrace
