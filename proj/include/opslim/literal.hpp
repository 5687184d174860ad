#pragma once

#include <array>
#include <compare>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace opslim {

enum class Predicate : uint8_t {
    InHand,     // (hand, cube)
    ActedOn,    // (hand, cube)
    HandMove,   // (hand)
    Graspable,  // (hand, cube)
    HandOpen,   // (hand)
    InTouch,    // (thing, thing)
    OnTop,      // (thing, thing)
};

inline const char *to_string(Predicate p) {
    switch (p) {
        case Predicate::InHand: return "inHand";
        case Predicate::ActedOn: return "actedOn";
        case Predicate::HandMove: return "handMove";
        case Predicate::Graspable: return "graspable";
        case Predicate::HandOpen: return "handOpen";
        case Predicate::InTouch: return "inTouch";
        case Predicate::OnTop: return "onTop";
    }
    return "?";
}

inline Predicate predicate_from_string(const std::string &s) {
    for (Predicate p : {Predicate::InHand, Predicate::ActedOn, Predicate::HandMove,
                        Predicate::Graspable, Predicate::HandOpen, Predicate::InTouch,
                        Predicate::OnTop})
        if (s == to_string(p)) return p;
    throw std::runtime_error("unknown predicate '" + s + "'");
}

inline int predicate_arity(Predicate p) {
    switch (p) {
        case Predicate::HandMove:
        case Predicate::HandOpen: return 1;
        default: return 2;
    }
}

enum class ObjType : uint8_t { Hand, Cube, Table, Thing };

inline const char *to_string(ObjType t) {
    switch (t) {
        case ObjType::Hand: return "hand";
        case ObjType::Cube: return "cube";
        case ObjType::Table: return "table";
        case ObjType::Thing: return "thing";
    }
    return "?";
}

inline ObjType obj_type_from_string(const std::string &s) {
    for (ObjType t : {ObjType::Hand, ObjType::Cube, ObjType::Table, ObjType::Thing})
        if (s == to_string(t)) return t;
    throw std::runtime_error("unknown object type '" + s + "'");
}

// Object typing for trace constants: hands are known from the trace's hand
// list; everything else is classified from its id prefix. Documented as part
// of the trace format.
inline ObjType classify_object_id(const std::string &id, bool is_hand) {
    if (is_hand) return ObjType::Hand;
    if (id.rfind("cube", 0) == 0) return ObjType::Cube;
    if (id.rfind("table", 0) == 0) return ObjType::Table;
    return ObjType::Thing;
}

// A ground or lifted literal. Args hold object ids or variable names
// (variables start with '?').
struct Literal {
    Predicate pred = Predicate::InHand;
    std::vector<std::string> args;
    bool negated = false;

    auto operator<=>(const Literal &) const = default;

    std::string str() const {
        std::string s = negated ? "¬" : "";
        s += to_string(pred);
        s += '(';
        for (size_t i = 0; i < args.size(); ++i) {
            if (i) s += ',';
            s += args[i];
        }
        s += ')';
        return s;
    }
};

inline Literal lit(Predicate p, std::vector<std::string> args, bool negated = false) {
    return Literal{p, std::move(args), negated};
}

inline bool is_variable(const std::string &term) {
    return !term.empty() && term.front() == '?';
}

struct TypedVar {
    std::string name;  // "?h"
    ObjType type = ObjType::Thing;

    auto operator<=>(const TypedVar &) const = default;
};

}  // namespace opslim
