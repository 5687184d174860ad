#pragma once

#include <algorithm>
#include <map>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include "opslim/activity.hpp"
#include "opslim/literal.hpp"
#include "opslim/operators.hpp"
#include "opslim/trace.hpp"

namespace opslim {

// Transliterates one observed state into ground literals: positive for facts
// that hold, negative for facts over the same scope that do not. The scope
// set must contain the acting hand; relation literals range over the
// non-hand members.
inline std::vector<Literal> state_to_predicates(const std::string &hand,
                                                const HandState &hs, const EnvState &env,
                                                const std::set<std::string> &scope) {
    if (scope.empty()) throw std::runtime_error("state_to_predicates: empty scope");

    std::vector<Literal> out;
    out.push_back(lit(Predicate::HandMove, {hand}, !hs.hand_move));
    out.push_back(lit(Predicate::HandOpen, {hand}, !hs.hand_open));

    std::vector<std::string> objects, cubes;
    for (const auto &id : scope) {
        if (id == hand) continue;
        objects.push_back(id);
        if (classify_object_id(id, false) == ObjType::Cube) cubes.push_back(id);
    }

    for (const auto &c : cubes) {
        out.push_back(lit(Predicate::InHand, {hand, c}, hs.in_hand != c));
        out.push_back(lit(Predicate::ActedOn, {hand, c}, hs.acted_on != c));
        out.push_back(lit(Predicate::Graspable, {hand, c}, hs.graspable.count(c) == 0));
    }
    for (const auto &a : objects)
        for (const auto &b : objects) {
            if (a == b) continue;
            out.push_back(lit(Predicate::InTouch, {a, b}, env.in_touch.count({a, b}) == 0));
            out.push_back(lit(Predicate::OnTop, {a, b}, env.on_top.count({a, b}) == 0));
        }
    std::sort(out.begin(), out.end());
    return out;
}

// One observed operator application, still ground.
struct GroundInstance {
    Activity activity = Activity::Idle;
    std::string hand;
    size_t transition_frame = 0;              // first frame of the segment
    std::vector<Literal> pre;                 // filtered ground preconditions
    std::vector<Literal> eff;                 // ground net-change literals
    std::set<std::string> mentioned_objects;  // held/acted-on/effect objects
};

namespace detail {

inline std::optional<bool> hand_atom_value(const HandState &hs, Predicate p,
                                           const std::string &cube) {
    switch (p) {
        case Predicate::InHand: return hs.in_hand == cube;
        case Predicate::ActedOn: return hs.acted_on == cube;
        case Predicate::Graspable: return hs.graspable.count(cube) > 0;
        default: return std::nullopt;
    }
}

inline bool env_atom_value(const EnvState &env, Predicate p, const ObjectPair &pair) {
    const auto &rel = (p == Predicate::InTouch) ? env.in_touch : env.on_top;
    return rel.count(pair) > 0;
}

}  // namespace detail

// Picks the hand responsible for an environment change: the hand whose most
// recent operator instance mentions one of the changed objects; if several
// or none qualify, the hand closest to the changed objects. Candidate hands
// are those that already own at least one instance.
inline std::string attribute_env_change(
    const std::set<std::string> &delta_objects,
    const std::map<std::string, std::set<std::string>> &recent_mentions,
    const std::map<std::string, Vec3> &hand_pos,
    const std::map<std::string, Vec3> &object_pos) {
    if (delta_objects.empty())
        throw std::runtime_error("attribute_env_change: empty delta");
    if (recent_mentions.empty())
        throw std::runtime_error("attribute_env_change: no hand has an operator instance");

    std::vector<std::string> mentioning;
    for (const auto &[hand, objs] : recent_mentions)
        for (const auto &o : delta_objects)
            if (objs.count(o)) {
                mentioning.push_back(hand);
                break;
            }
    if (mentioning.size() == 1) return mentioning.front();

    // Fallback (and tie-break): nearest hand to the centroid of the changed
    // objects at the change frame.
    const auto &pool = mentioning.empty()
                           ? [&] {
                                 std::vector<std::string> all;
                                 for (const auto &[hand, objs] : recent_mentions)
                                     all.push_back(hand);
                                 return all;
                             }()
                           : mentioning;
    Vec3 centroid{};
    int n = 0;
    for (const auto &o : delta_objects) {
        auto it = object_pos.find(o);
        if (it == object_pos.end()) continue;
        centroid = centroid + it->second;
        ++n;
    }
    if (n > 0) centroid = centroid * (1.0 / n);

    std::string best;
    double best_d = 0.0;
    for (const auto &hand : pool) {
        auto it = hand_pos.find(hand);
        double d = it != hand_pos.end() ? distance(it->second, centroid) : 0.0;
        if (best.empty() || d < best_d || (d == best_d && hand < best)) {
            best = hand;
            best_d = d;
        }
    }
    return best;
}

// Extracts one ground operator instance per activity transition per hand.
// Preconditions come from the state one frame before the transition; effects
// are the atoms whose value at the segment's last frame differs from that
// pre-state. Environment changes are attributed to the responsible hand's
// instance covering the change frame.
inline std::vector<GroundInstance> extract(
    const SymbolicTrace &trace,
    const std::map<std::string, std::vector<ActivitySegment>> &segments) {
    std::set<std::string> scope(trace.object_ids.begin(), trace.object_ids.end());

    struct WorkItem {
        GroundInstance inst;
        size_t seg_start = 0, seg_end = 0;
        std::set<Literal> attributed;  // positive-form env atoms touched
    };
    // per hand: index of segment covering each frame, and its work items
    std::map<std::string, std::vector<WorkItem>> work;
    std::map<std::string, std::vector<int>> frame_item;  // -1: no instance

    for (const auto &[hand, segs] : segments) {
        if (!segs.empty() &&
            (segs.front().start_index != 0 || segs.back().end_index != trace.size() - 1))
            throw std::runtime_error("extract: segments do not cover the trace");
        auto &items = work[hand];
        auto &fmap = frame_item[hand];
        fmap.assign(trace.size(), -1);
        std::set<std::string> hand_scope = scope;
        hand_scope.insert(hand);

        for (size_t k = 1; k < segs.size(); ++k) {
            const ActivitySegment &seg = segs[k];
            if (seg.start_index == 0 || seg.end_index >= trace.size())
                throw std::runtime_error("extract: segment out of trace bounds");
            const SymbolicRecord &pre_rec = trace.records[seg.start_index - 1];
            const SymbolicRecord &end_rec = trace.records[seg.end_index];
            const HandState &pre_hs = pre_rec.hands.at(hand);
            const HandState &end_hs = end_rec.hands.at(hand);

            WorkItem item;
            item.seg_start = seg.start_index;
            item.seg_end = seg.end_index;
            item.inst.activity = seg.activity;
            item.inst.hand = hand;
            item.inst.transition_frame = seg.start_index;
            item.inst.pre = state_to_predicates(hand, pre_hs, pre_rec.env, hand_scope);

            // Net hand-state changes over the segment.
            if (pre_hs.hand_move != end_hs.hand_move)
                item.inst.eff.push_back(lit(Predicate::HandMove, {hand}, !end_hs.hand_move));
            if (pre_hs.hand_open != end_hs.hand_open)
                item.inst.eff.push_back(lit(Predicate::HandOpen, {hand}, !end_hs.hand_open));
            for (const auto &c : trace.object_ids) {
                if (classify_object_id(c, false) != ObjType::Cube) continue;
                for (Predicate p :
                     {Predicate::InHand, Predicate::ActedOn, Predicate::Graspable}) {
                    bool before = *detail::hand_atom_value(pre_hs, p, c);
                    bool after = *detail::hand_atom_value(end_hs, p, c);
                    if (before != after) item.inst.eff.push_back(lit(p, {hand, c}, !after));
                }
            }

            // Objects this instance is about: whatever the hand held or acted
            // on around the transition, plus everything its effects touch.
            for (const auto *hs : {&pre_hs, &end_hs}) {
                if (hs->in_hand) item.inst.mentioned_objects.insert(*hs->in_hand);
                if (hs->acted_on) item.inst.mentioned_objects.insert(*hs->acted_on);
            }
            for (const Literal &e : item.inst.eff)
                for (const auto &a : e.args)
                    if (a != hand) item.inst.mentioned_objects.insert(a);

            for (size_t f = seg.start_index; f <= seg.end_index; ++f)
                fmap[f] = static_cast<int>(items.size());
            items.push_back(std::move(item));
        }
    }

    // Attribute environment changes frame by frame.
    for (size_t t = 1; t < trace.size(); ++t) {
        const EnvState &before = trace.records[t - 1].env;
        const EnvState &after = trace.records[t].env;
        if (before == after) continue;

        std::set<Literal> delta;  // positive-form atoms that changed
        std::set<std::string> delta_objects;
        for (Predicate p : {Predicate::InTouch, Predicate::OnTop}) {
            const auto &rb = (p == Predicate::InTouch) ? before.in_touch : before.on_top;
            const auto &ra = (p == Predicate::InTouch) ? after.in_touch : after.on_top;
            for (const auto &pr : rb)
                if (!ra.count(pr)) delta.insert(lit(p, {pr.first, pr.second}));
            for (const auto &pr : ra)
                if (!rb.count(pr)) delta.insert(lit(p, {pr.first, pr.second}));
        }
        for (const Literal &l : delta)
            for (const auto &a : l.args) delta_objects.insert(a);

        std::map<std::string, std::set<std::string>> recent;
        for (const auto &[hand, fmap] : frame_item)
            if (fmap[t] >= 0) recent[hand] = work[hand][fmap[t]].inst.mentioned_objects;
        if (recent.empty()) continue;  // change before any transition: no owner

        std::string hand = attribute_env_change(delta_objects, recent,
                                                trace.records[t].hand_pos,
                                                trace.records[t].object_pos);
        WorkItem &item = work[hand][frame_item[hand][t]];
        for (const Literal &l : delta) item.attributed.insert(l);
    }

    // Finalize: attributed atoms enter effects with their net change over the
    // segment; preconditions are then filtered down to literals whose every
    // argument is the hand or a referenced object. Relation literals must
    // additionally mention the manipulated object itself (the held cube, or
    // the acted-on one when nothing is held) — relations among bystanders
    // are scene state, not operator state.
    std::vector<GroundInstance> result;
    for (auto &[hand, items] : work) {
        for (WorkItem &item : items) {
            const EnvState &pre_env = trace.records[item.seg_start - 1].env;
            const EnvState &end_env = trace.records[item.seg_end].env;
            const HandState &pre_hs = trace.records[item.seg_start - 1].hands.at(hand);
            const HandState &end_hs = trace.records[item.seg_end].hands.at(hand);
            for (const Literal &atom : item.attributed) {
                ObjectPair pr{atom.args[0], atom.args[1]};
                bool before = detail::env_atom_value(pre_env, atom.pred, pr);
                bool after = detail::env_atom_value(end_env, atom.pred, pr);
                if (before == after) continue;
                item.inst.eff.push_back(lit(atom.pred, atom.args, !after));
                for (const auto &a : atom.args) item.inst.mentioned_objects.insert(a);
            }
            std::sort(item.inst.eff.begin(), item.inst.eff.end());

            std::set<std::string> anchors;
            for (const auto *hs : {&pre_hs, &end_hs})
                if (hs->in_hand) anchors.insert(*hs->in_hand);
            if (anchors.empty())
                for (const auto *hs : {&pre_hs, &end_hs})
                    if (hs->acted_on) anchors.insert(*hs->acted_on);

            std::set<std::string> relevant = item.inst.mentioned_objects;
            relevant.insert(hand);
            std::erase_if(item.inst.pre, [&](const Literal &l) {
                bool in_scope =
                    std::all_of(l.args.begin(), l.args.end(),
                                [&](const std::string &a) { return relevant.count(a) > 0; });
                if (!in_scope) return true;
                if (l.pred == Predicate::InTouch || l.pred == Predicate::OnTop) {
                    bool anchored =
                        std::any_of(l.args.begin(), l.args.end(),
                                    [&](const std::string &a) { return anchors.count(a) > 0; });
                    if (!anchored) return true;
                }
                return false;
            });
            result.push_back(std::move(item.inst));
        }
    }
    std::sort(result.begin(), result.end(), [](const GroundInstance &a, const GroundInstance &b) {
        if (a.transition_frame != b.transition_frame)
            return a.transition_frame < b.transition_frame;
        return a.hand < b.hand;
    });
    return result;
}

// ---- Lifting ---------------------------------------------------------------

namespace detail {

struct TermInfo {
    std::string term;
    ObjType type = ObjType::Thing;
};

inline std::string serialize_op(const std::vector<Literal> &pre,
                                const std::vector<Literal> &eff) {
    std::string s;
    for (const Literal &l : pre) s += l.str() + ";";
    s += "|";
    for (const Literal &l : eff) s += l.str() + ";";
    return s;
}

// Candidate orderings of the non-hand terms: structural signatures first,
// permutations of ties enumerated exhaustively (instances mention at most a
// handful of objects).
inline void enumerate_orders(std::vector<std::vector<std::string>> &out,
                             const std::vector<std::vector<std::string>> &groups,
                             std::vector<std::string> prefix, size_t gi) {
    if (gi == groups.size()) {
        out.push_back(std::move(prefix));
        return;
    }
    std::vector<std::string> g = groups[gi];
    std::sort(g.begin(), g.end());
    do {
        auto next = prefix;
        next.insert(next.end(), g.begin(), g.end());
        enumerate_orders(out, groups, std::move(next), gi + 1);
    } while (std::next_permutation(g.begin(), g.end()));
}

inline LiftedOperator canonicalize(Activity activity, const std::string &acting_hand,
                                   const std::vector<Literal> &pre,
                                   const std::vector<Literal> &eff,
                                   const std::map<std::string, ObjType> &types) {
    // Structural colors: refine per-term signatures over both literal sets.
    std::map<std::string, std::string> color;
    for (const auto &[term, type] : types)
        color[term] = (term == acting_hand) ? "@acting" : to_string(type);
    for (int round = 0; round < 3; ++round) {
        std::map<std::string, std::string> next;
        for (const auto &[term, type] : types) {
            std::vector<std::string> sig;
            auto scan = [&](const std::vector<Literal> &lits, const char *tag) {
                for (const Literal &l : lits)
                    for (size_t i = 0; i < l.args.size(); ++i) {
                        if (l.args[i] != term) continue;
                        std::string entry = std::string(tag) + to_string(l.pred) +
                                            (l.negated ? "-" : "+") + std::to_string(i);
                        for (size_t j = 0; j < l.args.size(); ++j)
                            if (j != i) entry += "/" + color.at(l.args[j]);
                        sig.push_back(std::move(entry));
                    }
            };
            scan(pre, "P:");
            scan(eff, "E:");
            std::sort(sig.begin(), sig.end());
            std::string joined = color.at(term);
            for (const auto &e : sig) joined += "|" + e;
            next[term] = std::move(joined);
        }
        color = std::move(next);
    }

    // Group non-hand terms by color, ordered by color string.
    std::map<std::string, std::vector<std::string>> by_color;
    for (const auto &[term, type] : types)
        if (term != acting_hand) by_color[color.at(term)].push_back(term);
    std::vector<std::vector<std::string>> groups;
    for (auto &[c, terms] : by_color) groups.push_back(terms);

    std::vector<std::vector<std::string>> orders;
    enumerate_orders(orders, groups, {}, 0);

    LiftedOperator best;
    std::string best_key;
    for (const auto &order : orders) {
        std::map<std::string, std::string> rename;
        std::vector<TypedVar> params;
        rename[acting_hand] = "?h";
        params.push_back({"?h", ObjType::Hand});
        std::map<ObjType, int> counters;
        for (const auto &term : order) {
            ObjType t = types.at(term);
            if (t == ObjType::Table) t = ObjType::Thing;  // tables lift to things
            int n = ++counters[t];
            std::string base = (t == ObjType::Cube) ? "?c" : (t == ObjType::Hand) ? "?h" : "?t";
            std::string name = n == 1 && t != ObjType::Hand ? base : base + std::to_string(n + (t == ObjType::Hand ? 1 : 0));
            rename[term] = name;
            params.push_back({name, t});
        }
        auto apply = [&](std::vector<Literal> lits) {
            for (Literal &l : lits)
                for (auto &a : l.args) a = rename.at(a);
            std::sort(lits.begin(), lits.end());
            return lits;
        };
        LiftedOperator cand;
        cand.activity = activity;
        cand.params = params;
        cand.preconditions = apply(pre);
        cand.effects = apply(eff);
        cand.count = 1;
        std::string key = serialize_op(cand.preconditions, cand.effects);
        if (best_key.empty() || key < best_key) {
            best_key = std::move(key);
            best = std::move(cand);
        }
    }
    best.name = to_string(activity);
    return best;
}

}  // namespace detail

// Generalizes a ground instance into its alpha-canonical lifted operator:
// every distinct constant becomes a typed variable, named so that
// structurally identical instances lift to the identical operator.
inline LiftedOperator lift(const GroundInstance &inst) {
    std::map<std::string, ObjType> types;
    types[inst.hand] = ObjType::Hand;
    for (const auto *lits : {&inst.pre, &inst.eff})
        for (const Literal &l : *lits)
            for (const auto &a : l.args)
                if (!types.count(a)) types[a] = classify_object_id(a, a == inst.hand);
    return detail::canonicalize(inst.activity, inst.hand, inst.pre, inst.eff, types);
}

// Re-canonicalization of an already lifted operator (used to check
// idempotence and to normalize hand-constructed operators).
inline LiftedOperator canonical_form(const LiftedOperator &op) {
    std::map<std::string, ObjType> types;
    for (const TypedVar &v : op.params) types[v.name] = v.type;
    std::string acting = op.params.empty() ? "?h" : op.params.front().name;
    LiftedOperator out = detail::canonicalize(op.activity, acting, op.preconditions,
                                              op.effects, types);
    out.count = op.count;
    out.name = op.name;
    return out;
}

// Full pipeline for one demonstration: ground, segment, extract, lift, merge.
inline size_t learn_trace(OperatorLibrary &lib, const ContinuousTrace &trace,
                          const GroundingConfig &gcfg = {}, const SegmentConfig &scfg = {}) {
    SymbolicTrace st = ground_trace(trace, gcfg);
    auto segs = segment(st, scfg);
    auto instances = extract(st, segs);
    for (const auto &inst : instances) lib.merge(lift(inst));
    return instances.size();
}

}  // namespace opslim
