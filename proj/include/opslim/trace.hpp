#pragma once

#include <algorithm>
#include <cmath>
#include <map>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace opslim {

struct Vec3 {
    double x = 0.0, y = 0.0, z = 0.0;

    Vec3 operator+(const Vec3 &o) const { return {x + o.x, y + o.y, z + o.z}; }
    Vec3 operator-(const Vec3 &o) const { return {x - o.x, y - o.y, z - o.z}; }
    Vec3 operator*(double s) const { return {x * s, y * s, z * s}; }
    double dot(const Vec3 &o) const { return x * o.x + y * o.y + z * o.z; }
    double norm() const { return std::sqrt(dot(*this)); }
};

inline double distance(const Vec3 &a, const Vec3 &b) { return (a - b).norm(); }

// One object-id pair in canonical (upper, lower) orientation; see make_contact.
using ObjectPair = std::pair<std::string, std::string>;

// Unordered storage form used by raw frames: lexicographic.
inline ObjectPair unordered_pair(std::string a, std::string b) {
    if (b < a) std::swap(a, b);
    return {std::move(a), std::move(b)};
}

struct HandFrame {
    Vec3 pos;
    bool fingers_open = true;
    std::optional<std::string> attached_object;
};

// A single timestamped sample of the continuous demonstration signal.
struct Frame {
    double t = 0.0;
    std::map<std::string, HandFrame> hands;
    std::map<std::string, Vec3> objects;
    std::set<ObjectPair> contacts;  // unordered (lexicographic) pairs
};

using ContinuousTrace = std::vector<Frame>;

// Grounding thresholds. Defaults follow the tuned values used during
// demonstration recording; all of them were picked heuristically, so they
// stay overridable.
struct GroundingConfig {
    double acted_on_dist = 0.16;   // m
    double graspable_dist = 0.10;  // m
    double move_speed = 0.10;      // m/s
};

struct HandState {
    std::optional<std::string> in_hand;
    std::optional<std::string> acted_on;
    bool hand_move = false;
    std::set<std::string> graspable;
    bool hand_open = true;

    bool operator==(const HandState &) const = default;
};

struct EnvState {
    // Both relations store (upper, lower) oriented pairs; on_top is the
    // subset where the height difference is strict.
    std::set<ObjectPair> in_touch;
    std::set<ObjectPair> on_top;

    bool operator==(const EnvState &) const = default;
};

struct SymbolicRecord {
    double t = 0.0;
    std::map<std::string, HandState> hands;
    EnvState env;
    // Geometry carried along for env-change attribution.
    std::map<std::string, Vec3> hand_pos;
    std::map<std::string, Vec3> object_pos;
};

struct SymbolicTrace {
    std::vector<SymbolicRecord> records;
    std::vector<std::string> hand_ids;
    std::vector<std::string> object_ids;

    size_t size() const { return records.size(); }
};

inline HandState derive_hand_state(const Frame &frame, const std::string &hand,
                                   const Frame *prev_frame,
                                   const GroundingConfig &cfg = {}) {
    auto it = frame.hands.find(hand);
    if (it == frame.hands.end())
        throw std::runtime_error("derive_hand_state: unknown hand id '" + hand + "'");
    const HandFrame &hf = it->second;

    Vec3 velocity{};
    if (prev_frame != nullptr) {
        auto pit = prev_frame->hands.find(hand);
        if (pit == prev_frame->hands.end())
            throw std::runtime_error("derive_hand_state: hand '" + hand +
                                     "' missing from previous frame");
        double dt = frame.t - prev_frame->t;
        if (dt > 0.0) velocity = (hf.pos - pit->second.pos) * (1.0 / dt);
    }

    HandState hs;
    hs.hand_open = hf.fingers_open;
    hs.in_hand = hf.attached_object;
    hs.hand_move = velocity.norm() > cfg.move_speed;

    for (const auto &[oid, opos] : frame.objects)
        if (distance(hf.pos, opos) < cfg.graspable_dist) hs.graspable.insert(oid);

    // actedOn: nearest object inside the acted-on radius that the hand is
    // moving towards. The held object is not a candidate (a held cube is not
    // acted on; the stacking target is).
    std::optional<std::string> best;
    double best_dist = cfg.acted_on_dist;
    for (const auto &[oid, opos] : frame.objects) {
        if (hs.in_hand && *hs.in_hand == oid) continue;
        double d = distance(hf.pos, opos);
        if (d >= cfg.acted_on_dist) continue;
        Vec3 dir = opos - hf.pos;
        double dn = dir.norm();
        if (dn > 0.0 && velocity.dot(dir * (1.0 / dn)) <= 0.0) continue;
        if (dn == 0.0 && velocity.norm() == 0.0) continue;
        if (d < best_dist || (d == best_dist && (!best || oid < *best))) {
            best = oid;
            best_dist = d;
        }
    }
    // Zero velocity can never point towards anything.
    if (velocity.norm() == 0.0) best.reset();
    hs.acted_on = best;
    return hs;
}

inline EnvState derive_env_state(const Frame &frame) {
    EnvState env;
    for (const auto &[a, b] : frame.contacts) {
        auto za = frame.objects.find(a);
        auto zb = frame.objects.find(b);
        if (za == frame.objects.end() || zb == frame.objects.end())
            throw std::runtime_error("derive_env_state: contact names unknown object");
        if (za->second.z > zb->second.z) {
            env.in_touch.emplace(a, b);
            env.on_top.emplace(a, b);
        } else if (zb->second.z > za->second.z) {
            env.in_touch.emplace(b, a);
            env.on_top.emplace(b, a);
        } else {
            env.in_touch.emplace(a, b);  // z-tie: keep lexicographic, no onTop
        }
    }
    return env;
}

inline SymbolicTrace ground_trace(const ContinuousTrace &trace,
                                  const GroundingConfig &cfg = {}) {
    if (trace.empty()) throw std::runtime_error("ground_trace: empty trace");

    SymbolicTrace out;
    for (const auto &[hid, hf] : trace.front().hands) out.hand_ids.push_back(hid);
    for (const auto &[oid, pos] : trace.front().objects) out.object_ids.push_back(oid);

    out.records.reserve(trace.size());
    for (size_t i = 0; i < trace.size(); ++i) {
        const Frame &f = trace[i];
        const Frame *prev = i > 0 ? &trace[i - 1] : nullptr;
        SymbolicRecord rec;
        rec.t = f.t;
        rec.env = derive_env_state(f);
        for (const auto &hid : out.hand_ids) {
            rec.hands[hid] = derive_hand_state(f, hid, prev, cfg);
            rec.hand_pos[hid] = f.hands.at(hid).pos;
        }
        rec.object_pos = f.objects;
        out.records.push_back(std::move(rec));
    }
    return out;
}

}  // namespace opslim
