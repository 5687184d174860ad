#pragma once

#include <array>
#include <stdexcept>
#include <string>
#include <vector>

#include "opslim/trace.hpp"

namespace opslim {

enum class Activity { Stack, Idle, Reach, Put, Take };

inline const char *to_string(Activity a) {
    switch (a) {
        case Activity::Stack: return "Stack";
        case Activity::Idle: return "Idle";
        case Activity::Reach: return "Reach";
        case Activity::Put: return "Put";
        case Activity::Take: return "Take";
    }
    return "?";
}

inline Activity activity_from_string(const std::string &s) {
    for (Activity a : {Activity::Stack, Activity::Idle, Activity::Reach,
                       Activity::Put, Activity::Take})
        if (s == to_string(a)) return a;
    throw std::runtime_error("unknown activity '" + s + "'");
}

// Rule table over (handMove, actedOn != nil, inHand != nil):
//   Stack: (T, T, T)   Reach: (T, T, F)   Put: (T, F, T)   Take: (F, F, T)
//   Idle:  (T|F, F, F)
// The two combinations the table leaves open, (F, T, F) and (F, T, T), fall
// back to Idle: actedOn presupposes motion towards an object, so a
// motionless actedOn reading is transient noise.
inline Activity classify(const HandState &hs) {
    bool acted = hs.acted_on.has_value();
    bool held = hs.in_hand.has_value();
    if (hs.hand_move && acted && held) return Activity::Stack;
    if (hs.hand_move && acted && !held) return Activity::Reach;
    if (hs.hand_move && !acted && held) return Activity::Put;
    if (!hs.hand_move && !acted && held) return Activity::Take;
    return Activity::Idle;
}

struct ActivitySegment {
    std::string hand;
    Activity activity = Activity::Idle;
    size_t start_index = 0;
    size_t end_index = 0;  // inclusive
    HandState start_hand_state, end_hand_state;
    EnvState start_env, end_env;

    size_t length() const { return end_index - start_index + 1; }
};

struct SegmentConfig {
    // Segments shorter than this many frames are folded into their
    // predecessor to suppress single-frame jitter. 1 disables filtering.
    size_t min_frames = 2;
};

inline std::vector<ActivitySegment> segment_hand(const SymbolicTrace &trace,
                                                 const std::string &hand,
                                                 const SegmentConfig &cfg = {}) {
    if (trace.records.empty()) throw std::runtime_error("segment: empty trace");

    std::vector<Activity> labels;
    labels.reserve(trace.size());
    for (const auto &rec : trace.records) labels.push_back(classify(rec.hands.at(hand)));

    // Run-length encode.
    struct Run { Activity a; size_t start, end; };
    std::vector<Run> runs;
    for (size_t i = 0; i < labels.size(); ++i) {
        if (!runs.empty() && runs.back().a == labels[i]) {
            runs.back().end = i;
        } else {
            runs.push_back({labels[i], i, i});
        }
    }

    // Duration filter: short runs melt into the preceding run; a short
    // leading run (no predecessor) is adopted by its successor instead.
    // Adjacent equal runs re-coalesce as part of the same pass.
    if (cfg.min_frames > 1) {
        std::vector<Run> filtered;
        for (const Run &r : runs) {
            if (!filtered.empty()) {
                Run &prev = filtered.back();
                if (prev.end - prev.start + 1 < cfg.min_frames) {
                    prev.a = r.a;  // only the leading run can be pending-short
                    prev.end = r.end;
                    continue;
                }
                if (r.end - r.start + 1 < cfg.min_frames || prev.a == r.a) {
                    prev.end = r.end;
                    continue;
                }
            }
            filtered.push_back(r);
        }
        runs = std::move(filtered);
    }

    std::vector<ActivitySegment> segments;
    segments.reserve(runs.size());
    for (const Run &r : runs) {
        ActivitySegment seg;
        seg.hand = hand;
        seg.activity = r.a;
        seg.start_index = r.start;
        seg.end_index = r.end;
        seg.start_hand_state = trace.records[r.start].hands.at(hand);
        seg.end_hand_state = trace.records[r.end].hands.at(hand);
        seg.start_env = trace.records[r.start].env;
        seg.end_env = trace.records[r.end].env;
        segments.push_back(std::move(seg));
    }
    return segments;
}

inline std::map<std::string, std::vector<ActivitySegment>> segment(
    const SymbolicTrace &trace, const SegmentConfig &cfg = {}) {
    std::map<std::string, std::vector<ActivitySegment>> out;
    for (const auto &hand : trace.hand_ids) out[hand] = segment_hand(trace, hand, cfg);
    return out;
}

}  // namespace opslim
