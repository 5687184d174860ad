#pragma once

#include <fstream>
#include <stdexcept>
#include <string>

#include <json.hpp>

#include "opslim/operators.hpp"

namespace opslim {

inline constexpr const char *kLibraryFormat = "oplib-1";

inline nlohmann::json library_to_json(const OperatorLibrary &lib) {
    nlohmann::json j;
    j["format"] = kLibraryFormat;
    nlohmann::json totals = nlohmann::json::object();
    for (const auto &[type, n] : lib.type_totals()) totals[to_string(type)] = n;
    j["type_totals"] = std::move(totals);

    auto lits_to_json = [](const std::vector<Literal> &lits) {
        nlohmann::json arr = nlohmann::json::array();
        for (const Literal &l : lits) {
            nlohmann::json e;
            e["pred"] = to_string(l.pred);
            e["args"] = l.args;
            e["neg"] = l.negated;
            arr.push_back(std::move(e));
        }
        return arr;
    };

    nlohmann::json ops = nlohmann::json::array();
    for (const LiftedOperator &op : lib.operators) {
        nlohmann::json o;
        o["name"] = op.name;
        o["activity"] = to_string(op.activity);
        o["count"] = op.count;
        nlohmann::json params = nlohmann::json::array();
        for (const TypedVar &v : op.params)
            params.push_back({{"name", v.name}, {"type", to_string(v.type)}});
        o["params"] = std::move(params);
        o["pre"] = lits_to_json(op.preconditions);
        o["eff"] = lits_to_json(op.effects);
        ops.push_back(std::move(o));
    }
    j["operators"] = std::move(ops);
    return j;
}

inline OperatorLibrary library_from_json(const nlohmann::json &j) {
    if (!j.contains("format") || j.at("format").get<std::string>() != kLibraryFormat)
        throw std::runtime_error("library file: unsupported format tag");

    auto lits_from_json = [](const nlohmann::json &arr) {
        std::vector<Literal> lits;
        for (const auto &e : arr) {
            Literal l;
            l.pred = predicate_from_string(e.at("pred").get<std::string>());
            l.args = e.at("args").get<std::vector<std::string>>();
            l.negated = e.at("neg").get<bool>();
            lits.push_back(std::move(l));
        }
        return lits;
    };

    OperatorLibrary lib;
    for (const auto &o : j.at("operators")) {
        LiftedOperator op;
        op.name = o.at("name").get<std::string>();
        op.activity = activity_from_string(o.at("activity").get<std::string>());
        op.count = o.at("count").get<long long>();
        if (op.count < 1) throw std::runtime_error("library file: count must be >= 1");
        for (const auto &p : o.at("params"))
            op.params.push_back({p.at("name").get<std::string>(),
                                 obj_type_from_string(p.at("type").get<std::string>())});
        op.preconditions = lits_from_json(o.at("pre"));
        op.effects = lits_from_json(o.at("eff"));
        validate_operator(op);
        lib.operators.push_back(std::move(op));
    }
    lib.assign_names();
    return lib;
}

inline void write_library_file(const std::string &path, const OperatorLibrary &lib) {
    std::ofstream os(path);
    if (!os) throw std::runtime_error("cannot write library file: " + path);
    os << library_to_json(lib).dump(2) << '\n';
}

inline OperatorLibrary read_library_file(const std::string &path) {
    std::ifstream is(path);
    if (!is) throw std::runtime_error("cannot open library file: " + path);
    nlohmann::json j;
    try {
        is >> j;
    } catch (const std::exception &e) {
        throw std::runtime_error("library file " + path + ": " + e.what());
    }
    return library_from_json(j);
}

}  // namespace opslim
