#pragma once

#include <cmath>
#include <cstdint>
#include <map>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

#include "opslim/trace.hpp"

namespace opslim {

enum class Style { PickAndPlace, DirectPut, StackTwo, IdleHeavy };

inline const char *to_string(Style s) {
    switch (s) {
        case Style::PickAndPlace: return "pick-and-place";
        case Style::DirectPut: return "direct-put";
        case Style::StackTwo: return "stack-two";
        case Style::IdleHeavy: return "idle-heavy";
    }
    return "?";
}

inline Style style_from_string(const std::string &s) {
    for (Style st : {Style::PickAndPlace, Style::DirectPut, Style::StackTwo,
                     Style::IdleHeavy})
        if (s == to_string(st)) return st;
    throw std::runtime_error("unknown style '" + s + "'");
}

struct DemoSpec {
    int n_cubes = 2;
    Style style = Style::PickAndPlace;
    std::string hand = "left";
    uint64_t seed = 1;
    double frame_rate = 30.0;
    double noise_sigma = 0.002;
};

namespace synth_detail {

// Scene constants. The table centroid sits deep under the surface so the
// hand never enters its acted-on radius; placing on the table therefore
// reads as Put, never Stack.
constexpr double kCubeHalf = 0.025;
constexpr double kTableTop = 0.0;
constexpr double kRestZ = kTableTop + kCubeHalf;
constexpr double kGripOffset = 0.01;   // hand hovers this far above a held cube's center
constexpr double kAltitude = 0.30;     // travel height
constexpr double kHoverDist = 0.18;    // empty-hand hover above a cube (outside 0.16)
constexpr double kContactGap = 0.004;
constexpr double kSpeed = 0.85;

struct DemoBuilder {
    const DemoSpec &spec;
    double dt;
    std::mt19937_64 rng;
    std::normal_distribution<double> gauss{0.0, 1.0};

    Vec3 hand;
    bool fingers_open = true;
    std::optional<std::string> attached;
    std::map<std::string, Vec3> cube_pos;          // clean positions
    std::map<std::string, std::string> support;    // resting cube → support id
    Vec3 table_centroid;
    double t = 0.0;

    // AR(1) drift per tracked body; keeps the jitter's spectrum slow enough
    // that finite-difference speeds stay well under the 0.1 m/s rule.
    std::map<std::string, Vec3> drift;
    double drift_rho = 0.9;

    ContinuousTrace frames;

    explicit DemoBuilder(const DemoSpec &s) : spec(s), dt(1.0 / s.frame_rate), rng(s.seed) {
        if (s.n_cubes < 1) throw std::runtime_error("synth_demo: n_cubes must be >= 1");
        if (s.frame_rate <= 0) throw std::runtime_error("synth_demo: frame_rate must be > 0");
        for (int i = 1; i <= s.n_cubes; ++i)
            cube_pos["cube" + std::to_string(i)] = {0.25 * (i - 1), 0.0, kRestZ};
        for (auto &[c, p] : cube_pos) support[c] = "table1";
        table_centroid = {0.25 * (s.n_cubes - 1) / 2.0, 0.0, -0.2};
        hand = {-0.25, 0.20, kAltitude};
        drift["hand"] = {};
        for (auto &[c, p] : cube_pos) drift[c] = {};
    }

    Vec3 next_drift(const std::string &id) {
        Vec3 &d = drift[id];
        double innov = spec.noise_sigma * std::sqrt(1.0 - drift_rho * drift_rho);
        d = d * drift_rho + Vec3{gauss(rng) * innov, gauss(rng) * innov, gauss(rng) * innov};
        return d;
    }

    double cube_top(const std::string &id) const { return cube_pos.at(id).z + kCubeHalf; }

    void emit() {
        Frame f;
        f.t = t;
        t += dt;

        Vec3 noisy_hand = hand + next_drift("hand");
        HandFrame hf;
        hf.pos = noisy_hand;
        hf.fingers_open = fingers_open;
        hf.attached_object = attached;
        f.hands[spec.hand] = hf;

        for (const auto &[c, p] : cube_pos) {
            if (attached && *attached == c)
                f.objects[c] = noisy_hand - Vec3{0, 0, kGripOffset};
            else
                f.objects[c] = p + next_drift(c);
        }
        f.objects["table1"] = table_centroid;

        // Contact bookkeeping from clean geometry.
        for (const auto &[c, p] : cube_pos) {
            if (attached && *attached == c) {
                double bottom = p.z - kCubeHalf;
                if (bottom < kTableTop + kContactGap)
                    f.contacts.insert(unordered_pair(c, "table1"));
                for (const auto &[o, q] : cube_pos) {
                    if (o == c) continue;
                    double dx = p.x - q.x, dy = p.y - q.y;
                    if (std::abs(bottom - (q.z + kCubeHalf)) < kContactGap &&
                        std::sqrt(dx * dx + dy * dy) < 2 * kCubeHalf)
                        f.contacts.insert(unordered_pair(c, o));
                }
            } else {
                f.contacts.insert(unordered_pair(c, support.at(c)));
            }
        }
        frames.push_back(std::move(f));
    }

    void rest(int n) {
        for (int i = 0; i < n; ++i) emit();
    }

    void move_to(const Vec3 &target, double speed = kSpeed) {
        double dist = distance(hand, target);
        if (dist < 1e-9) return;
        int n = std::max(1, static_cast<int>(std::ceil(dist / (speed * dt))));
        Vec3 start = hand;
        Vec3 step = (target - start) * (1.0 / n);
        for (int k = 1; k <= n; ++k) {
            hand = start + step * k;
            if (attached) cube_pos[*attached] = hand - Vec3{0, 0, kGripOffset};
            emit();
        }
    }

    void attach(const std::string &cube) {
        attached = cube;
        fingers_open = false;
    }

    void release_onto(const std::string &target) {
        std::string cube = *attached;
        double top = (target == "table1") ? kTableTop : cube_top(target);
        Vec3 base = (target == "table1") ? Vec3{hand.x, hand.y, 0.0} : cube_pos.at(target);
        cube_pos[cube] = {base.x, base.y, top + kCubeHalf};
        support[cube] = target;
        attached.reset();
        fingers_open = true;
    }

    // Travel at altitude and come to rest hovering above the cube, outside
    // the acted-on radius; the following descent then opens the Reach
    // segment from a motionless pre-state.
    void travel_and_hover(const std::string &cube) {
        const Vec3 c = cube_pos.at(cube);
        move_to({hand.x, hand.y, kAltitude});
        move_to({c.x, c.y, kAltitude}, 1.0);
        move_to({c.x, c.y, c.z + kHoverDist});
        rest(3);
    }

    // Detour used by some demonstrations: dip towards a bystander cube close
    // enough to read as a short Reach, then pull away.
    void flyby(const std::string &cube) {
        const Vec3 c = cube_pos.at(cube);
        move_to({c.x, c.y, kAltitude}, 1.0);
        move_to({c.x, c.y, c.z + 0.125});
        move_to({c.x, c.y, kAltitude});
    }

    void descend_to_grasp(const std::string &cube) {
        const Vec3 c = cube_pos.at(cube);
        move_to({c.x, c.y, c.z + kGripOffset});
    }

    void grasp_rest(const std::string &cube, int frames_held = 4) {
        attach(cube);
        rest(frames_held);
    }

    // Demonstrators slide cubes along the table instead of carrying them:
    // the held cube keeps its table contact through the transport, and the
    // lift happens over the target, inside the acted-on radius. That puts
    // the support change into the Stack segment, where it belongs.
    void transport_to_place(const std::string &target, bool pause_midway = false) {
        if (target == "table1") {
            Vec3 dst = {hand.x + 0.22, hand.y + 0.18, kRestZ + kGripOffset};
            if (pause_midway) {
                move_to({(hand.x + dst.x) / 2, (hand.y + dst.y) / 2, dst.z}, 1.0);
                rest(4);
            }
            move_to(dst, 1.0);
            return;
        }
        const Vec3 tc = cube_pos.at(target);
        double dx = tc.x - hand.x, dy = tc.y - hand.y;
        double len = std::sqrt(dx * dx + dy * dy);
        double ux = dx / len, uy = dy / len;
        Vec3 staging = {tc.x - 0.14 * ux, tc.y - 0.14 * uy, kRestZ + kGripOffset};
        if (pause_midway) {
            move_to({(hand.x + staging.x) / 2, (hand.y + staging.y) / 2, staging.z}, 1.0);
            rest(4);
        }
        move_to(staging, 1.0);
        // climb beside the target, then slide the cube onto it across the top
        // face: every leg keeps the hand moving towards the target, so the
        // Stack reading holds until touchdown
        double place_z = tc.z + 2 * kCubeHalf + kGripOffset;
        move_to({tc.x - 0.06 * ux, tc.y - 0.06 * uy, place_z});
        // stop a whisker short of dead centre so the final frame still moves
        // towards the target; the release settles the cube into place
        move_to({tc.x - 0.02 * ux, tc.y - 0.02 * uy, place_z}, 0.6);
    }

    void release_and_retract(const std::string &target) {
        release_onto(target);
        // retract all the way to travel height: resting near the fresh stack
        // would leave the released cube inside the acted-on radius
        move_to({hand.x, hand.y, kAltitude});
    }

    // One full stacking step: cube onto target (a cube id or "table1").
    void step(const std::string &cube, const std::string &target, bool direct,
              bool pause_reach, bool pause_transport) {
        travel_and_hover(cube);
        if (pause_reach) {
            const Vec3 c = cube_pos.at(cube);
            move_to({c.x, c.y, c.z + 0.124});
            rest(3);
        }
        descend_to_grasp(cube);
        if (!direct) grasp_rest(cube);  // scooping grab closes fingers mid-motion
        else attach(cube);
        transport_to_place(target, pause_transport);
        release_and_retract(target);
    }
};

}  // namespace synth_detail

// Builds one kinematically plausible demonstration trace. Deterministic for
// a fixed spec.
inline ContinuousTrace synth_demo(const DemoSpec &spec) {
    using synth_detail::DemoBuilder;
    DemoBuilder b(spec);

    const bool has_target = spec.n_cubes >= 2;
    const std::string target = has_target ? "cube2" : "table1";
    // Seed-derived scenario flourishes, fixed per spec.
    const bool cramped = spec.style == Style::PickAndPlace && spec.n_cubes >= 4 &&
                         spec.seed % 2 == 1;
    const bool detour = spec.style == Style::PickAndPlace && spec.n_cubes >= 3 && !cramped;
    if (cramped) {
        // bystander parked next to the stacking target
        b.cube_pos["cube4"] = b.cube_pos.at("cube2") + Vec3{0.075, 0.0, 0.0};
    }

    b.rest(4);
    switch (spec.style) {
        case Style::PickAndPlace:
            if (detour) b.flyby("cube3");
            b.step("cube1", target, false, false, false);
            break;
        case Style::DirectPut:
            b.step("cube1", target, true, false, false);
            break;
        case Style::StackTwo:
            if (spec.n_cubes < 4)
                throw std::runtime_error("synth_demo: stack-two needs >= 4 cubes");
            b.step("cube1", "cube2", false, false, false);
            b.step("cube3", "cube4", false, false, false);
            break;
        case Style::IdleHeavy:
            // drawn-out demonstration: long rests, a paused approach and a
            // paused transport, and a scooping grab without a rest
            b.rest(8);
            b.step("cube1", target, true, true, true);
            break;
    }
    b.rest(4);
    return std::move(b.frames);
}

struct StyleMix {
    double pick_and_place = 6;
    double direct_put = 2;
    double stack_two = 2;
    double idle_heavy = 2;
};

// Deterministic corpus: styles apportioned to the weights (largest
// remainder), interleaved in a fixed rotation; per-demo cube counts follow a
// fixed pattern per style so the learned library gets both table placements
// and cluttered scenes.
inline std::vector<DemoSpec> corpus_specs(int n_demos, const StyleMix &mix = {},
                                          uint64_t seed = 42) {
    if (n_demos < 1) throw std::runtime_error("synth_corpus: n_demos must be >= 1");
    const double wsum =
        mix.pick_and_place + mix.direct_put + mix.stack_two + mix.idle_heavy;
    if (wsum <= 0 || mix.pick_and_place < 0 || mix.direct_put < 0 || mix.stack_two < 0 ||
        mix.idle_heavy < 0)
        throw std::runtime_error("synth_corpus: weights must be nonnegative, not all zero");

    const Style styles[4] = {Style::PickAndPlace, Style::DirectPut, Style::StackTwo,
                             Style::IdleHeavy};
    const double weights[4] = {mix.pick_and_place, mix.direct_put, mix.stack_two,
                               mix.idle_heavy};
    int counts[4];
    int assigned = 0;
    double fracs[4];
    for (int i = 0; i < 4; ++i) {
        double exact = weights[i] * n_demos / wsum;
        counts[i] = static_cast<int>(exact);
        fracs[i] = exact - counts[i];
        assigned += counts[i];
    }
    while (assigned < n_demos) {  // largest remainder, ties to lower index
        int best = 0;
        for (int i = 1; i < 4; ++i)
            if (fracs[i] > fracs[best]) best = i;
        ++counts[best];
        fracs[best] = -1;
        ++assigned;
    }

    // cube-count rotation per style
    const std::vector<int> pp_cubes = {2, 4, 1, 4, 3, 3};
    std::vector<DemoSpec> specs;
    int remaining[4] = {counts[0], counts[1], counts[2], counts[3]};
    int used[4] = {0, 0, 0, 0};
    int i = 0;
    while (static_cast<int>(specs.size()) < n_demos) {
        int s = i % 4;
        ++i;
        if (remaining[s] == 0) continue;
        --remaining[s];
        DemoSpec d;
        d.style = styles[s];
        switch (d.style) {
            case Style::PickAndPlace: d.n_cubes = pp_cubes[used[s] % pp_cubes.size()]; break;
            case Style::DirectPut: d.n_cubes = 2; break;
            case Style::StackTwo: d.n_cubes = 4; break;
            case Style::IdleHeavy: d.n_cubes = 2; break;
        }
        d.hand = (specs.size() % 2 == 0) ? "left" : "right";
        d.seed = seed * 1000 + specs.size();
        ++used[s];
        specs.push_back(d);
    }
    return specs;
}

inline std::vector<ContinuousTrace> synth_corpus(int n_demos, const StyleMix &mix = {},
                                                 uint64_t seed = 42) {
    std::vector<ContinuousTrace> out;
    for (const DemoSpec &d : corpus_specs(n_demos, mix, seed)) out.push_back(synth_demo(d));
    return out;
}

}  // namespace opslim
