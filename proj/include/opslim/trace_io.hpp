#pragma once

#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>

#include <json.hpp>

#include "opslim/trace.hpp"

namespace opslim {

// Trace files are newline-delimited JSON, one frame per line; schema in
// docs/trace-format.md.

inline nlohmann::json frame_to_json(const Frame &f) {
    nlohmann::json j;
    j["t"] = f.t;
    nlohmann::json hands = nlohmann::json::object();
    for (const auto &[hid, hf] : f.hands) {
        nlohmann::json h;
        h["pos"] = {hf.pos.x, hf.pos.y, hf.pos.z};
        h["fingers_open"] = hf.fingers_open;
        if (hf.attached_object)
            h["attached_object"] = *hf.attached_object;
        else
            h["attached_object"] = nullptr;
        hands[hid] = std::move(h);
    }
    j["hands"] = std::move(hands);
    nlohmann::json objects = nlohmann::json::object();
    for (const auto &[oid, pos] : f.objects) objects[oid] = {pos.x, pos.y, pos.z};
    j["objects"] = std::move(objects);
    nlohmann::json contacts = nlohmann::json::array();
    for (const auto &[a, b] : f.contacts) contacts.push_back({a, b});
    j["contacts"] = std::move(contacts);
    return j;
}

inline Frame frame_from_json(const nlohmann::json &j) {
    Frame f;
    f.t = j.at("t").get<double>();
    for (const auto &[hid, h] : j.at("hands").items()) {
        HandFrame hf;
        const auto &p = h.at("pos");
        hf.pos = {p.at(0).get<double>(), p.at(1).get<double>(), p.at(2).get<double>()};
        hf.fingers_open = h.at("fingers_open").get<bool>();
        if (h.contains("attached_object") && !h.at("attached_object").is_null())
            hf.attached_object = h.at("attached_object").get<std::string>();
        f.hands[hid] = std::move(hf);
    }
    for (const auto &[oid, p] : j.at("objects").items())
        f.objects[oid] = {p.at(0).get<double>(), p.at(1).get<double>(), p.at(2).get<double>()};
    if (j.contains("contacts"))
        for (const auto &c : j.at("contacts"))
            f.contacts.insert(unordered_pair(c.at(0).get<std::string>(),
                                             c.at(1).get<std::string>()));
    for (const auto &[hid, hf] : f.hands)
        if (hf.attached_object && !f.objects.count(*hf.attached_object))
            throw std::runtime_error("trace frame: attached object '" +
                                     *hf.attached_object + "' does not exist");
    return f;
}

inline void write_trace(std::ostream &os, const ContinuousTrace &trace) {
    for (const Frame &f : trace) os << frame_to_json(f).dump() << '\n';
}

inline void write_trace_file(const std::string &path, const ContinuousTrace &trace) {
    std::ofstream os(path);
    if (!os) throw std::runtime_error("cannot write trace file: " + path);
    write_trace(os, trace);
}

inline ContinuousTrace read_trace(std::istream &is) {
    ContinuousTrace trace;
    std::string line;
    size_t lineno = 0;
    double last_t = -1.0;
    while (std::getline(is, line)) {
        ++lineno;
        if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
        Frame f;
        try {
            f = frame_from_json(nlohmann::json::parse(line));
        } catch (const std::exception &e) {
            throw std::runtime_error("trace line " + std::to_string(lineno) + ": " + e.what());
        }
        if (f.t <= last_t)
            throw std::runtime_error("trace line " + std::to_string(lineno) +
                                     ": timestamps must strictly increase");
        last_t = f.t;
        trace.push_back(std::move(f));
    }
    if (trace.empty()) throw std::runtime_error("trace file holds no frames");
    return trace;
}

inline ContinuousTrace read_trace_file(const std::string &path) {
    std::ifstream is(path);
    if (!is) throw std::runtime_error("cannot open trace file: " + path);
    return read_trace(is);
}

}  // namespace opslim
