#pragma once

#include <algorithm>
#include <cstdint>
#include <map>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include "opslim/pddl.hpp"

namespace opslim {

// Packed fact-set; facts are dense indices into GroundedTask::fact_names.
struct State {
    std::vector<uint64_t> words;

    explicit State(size_t num_facts = 0) : words((num_facts + 63) / 64, 0) {}

    void set(int i) { words[i >> 6] |= uint64_t(1) << (i & 63); }
    void clear(int i) { words[i >> 6] &= ~(uint64_t(1) << (i & 63)); }
    bool test(int i) const { return words[i >> 6] >> (i & 63) & 1; }

    bool contains_all(const std::vector<int> &facts) const {
        for (int f : facts)
            if (!test(f)) return false;
        return true;
    }

    bool operator==(const State &) const = default;
};

struct StateHash {
    size_t operator()(const State &s) const {
        uint64_t h = 1469598103934665603ull;
        for (uint64_t w : s.words) {
            h ^= w;
            h *= 1099511628211ull;
        }
        return static_cast<size_t>(h);
    }
};

struct GroundAction {
    std::string name;  // "(Reach left cube1)"
    std::vector<int> pre;  // includes compiled not-facts
    std::vector<int> add;
    std::vector<int> del;
    long long cost = 0;

    bool applicable(const State &s) const { return s.contains_all(pre); }

    State apply(const State &s) const {
        State out = s;
        for (int f : del) out.clear(f);
        for (int f : add) out.set(f);
        return out;
    }
};

// Propositional STRIPS task. Negative preconditions are compiled away into
// complementary "not-…" facts, so search and heuristics see positive
// preconditions only.
struct GroundedTask {
    std::vector<std::string> fact_names;
    std::vector<GroundAction> actions;
    std::vector<int> init;
    std::vector<int> goal;
    bool relaxed_goal_reachable = true;

    size_t num_facts() const { return fact_names.size(); }

    State initial_state() const {
        State s(num_facts());
        for (int f : init) s.set(f);
        return s;
    }

    bool goal_satisfied(const State &s) const { return s.contains_all(goal); }

    const GroundAction *find_action(const std::string &name) const {
        for (const auto &a : actions)
            if (a.name == name) return &a;
        return nullptr;
    }
};

namespace ground_detail {

inline std::string atom_name(const pddl::Atom &a) {
    std::string s = "(" + a.pred;
    for (const auto &arg : a.args) s += " " + arg;
    return s + ")";
}

struct AtomTable {
    std::map<std::string, int> index;
    std::vector<std::string> names;

    int intern(const pddl::Atom &a) {
        std::string key = atom_name(a);
        auto it = index.find(key);
        if (it != index.end()) return it->second;
        int id = static_cast<int>(names.size());
        index.emplace(std::move(key), id);
        names.push_back(atom_name(a));
        return id;
    }
};

}  // namespace ground_detail

// Instantiates the domain over the problem's objects, compiles negative
// preconditions, and prunes facts/actions that delete-relaxed reachability
// from the initial state rules out. Goal facts are always kept.
inline GroundedTask ground(const pddl::Domain &domain, const pddl::Problem &problem) {
    using ground_detail::AtomTable;

    // objects per type (subtype closure)
    std::map<std::string, std::vector<std::string>> objects_of;
    for (const auto &obj : problem.objects) {
        if (!domain.type_parent.count(obj.type))
            throw std::runtime_error("ground: object '" + obj.name + "' has unknown type '" +
                                     obj.type + "'");
        for (const auto &[type, parent] : domain.type_parent)
            if (domain.is_subtype(obj.type, type)) objects_of[type].push_back(obj.name);
        objects_of["object"].push_back(obj.name);
    }
    std::set<std::string> object_ids;
    for (const auto &obj : problem.objects) {
        if (!object_ids.insert(obj.name).second)
            throw std::runtime_error("ground: duplicate object '" + obj.name + "'");
    }

    auto check_ground_atom = [&](const pddl::Atom &a, const char *where) {
        const pddl::PredicateDef *pd = domain.find_predicate(a.pred);
        if (!pd)
            throw std::runtime_error(std::string("ground: unknown predicate '") + a.pred +
                                     "' in " + where);
        if (pd->params.size() != a.args.size())
            throw std::runtime_error(std::string("ground: arity mismatch for '") + a.pred +
                                     "' in " + where);
        for (const auto &arg : a.args)
            if (!object_ids.count(arg))
                throw std::runtime_error(std::string("ground: unknown object '") + arg +
                                         "' in " + where);
    };

    AtomTable atoms;
    std::vector<int> init_atoms, goal_atoms;
    for (const auto &a : problem.init) {
        check_ground_atom(a, "init");
        init_atoms.push_back(atoms.intern(a));
    }
    for (const auto &a : problem.goal) {
        check_ground_atom(a, "goal");
        goal_atoms.push_back(atoms.intern(a));
    }

    struct RawAction {
        std::string name;
        std::vector<int> pre_pos, pre_neg, add, del;
        long long cost = 0;
    };
    std::vector<RawAction> raw;

    for (const pddl::ActionDef &schema : domain.actions) {
        std::vector<const std::vector<std::string> *> domains;
        for (const auto &p : schema.params) {
            auto it = objects_of.find(p.type);
            static const std::vector<std::string> empty;
            domains.push_back(it == objects_of.end() ? &empty : &it->second);
        }
        std::vector<size_t> idx(schema.params.size(), 0);
        bool any_empty = std::any_of(domains.begin(), domains.end(),
                                     [](const auto *d) { return d->empty(); });
        if (any_empty && !schema.params.empty()) continue;

        while (true) {
            std::map<std::string, std::string> binding;
            for (size_t i = 0; i < schema.params.size(); ++i)
                binding[schema.params[i].name] = (*domains[i])[idx[i]];

            auto instantiate = [&](const pddl::Atom &a) {
                pddl::Atom g;
                g.pred = a.pred;
                for (const auto &arg : a.args) {
                    if (!arg.empty() && arg[0] == '?') {
                        g.args.push_back(binding.at(arg));
                    } else {
                        if (!object_ids.count(arg))
                            throw std::runtime_error("ground: unknown constant '" + arg + "'");
                        g.args.push_back(arg);
                    }
                }
                return g;
            };

            RawAction ra;
            ra.name = "(" + schema.name;
            for (size_t i = 0; i < schema.params.size(); ++i)
                ra.name += " " + binding.at(schema.params[i].name);
            ra.name += ")";
            ra.cost = schema.cost;
            for (const auto &c : schema.preconditions) {
                int id = atoms.intern(instantiate(c.atom));
                (c.negated ? ra.pre_neg : ra.pre_pos).push_back(id);
            }
            for (const auto &c : schema.effects) {
                int id = atoms.intern(instantiate(c.atom));
                (c.negated ? ra.del : ra.add).push_back(id);
            }
            for (auto *v : {&ra.pre_pos, &ra.pre_neg, &ra.add, &ra.del}) {
                std::sort(v->begin(), v->end());
                v->erase(std::unique(v->begin(), v->end()), v->end());
            }
            // Degenerate bindings can add and delete the same atom; PDDL
            // applies deletes before adds, so the add wins.
            std::erase_if(ra.del, [&](int f) {
                return std::binary_search(ra.add.begin(), ra.add.end(), f);
            });
            raw.push_back(std::move(ra));

            size_t k = 0;
            while (k < idx.size() && ++idx[k] == domains[k]->size()) idx[k++] = 0;
            if (k == idx.size()) break;
        }
    }

    // Complementary facts for atoms that occur under negation.
    std::set<int> negated_atoms;
    for (const auto &ra : raw)
        for (int f : ra.pre_neg) negated_atoms.insert(f);

    std::map<int, int> not_fact;  // atom → its "not-" twin
    std::vector<std::string> all_names = atoms.names;
    for (int f : negated_atoms) {
        not_fact[f] = static_cast<int>(all_names.size());
        all_names.push_back("(not-" + atoms.names[f].substr(1));
    }

    std::set<int> init_set(init_atoms.begin(), init_atoms.end());
    std::vector<int> full_init = init_atoms;
    for (int f : negated_atoms)
        if (!init_set.count(f)) full_init.push_back(not_fact[f]);

    std::vector<GroundAction> compiled;
    compiled.reserve(raw.size());
    for (const auto &ra : raw) {
        GroundAction ga;
        ga.name = ra.name;
        ga.cost = ra.cost;
        ga.pre = ra.pre_pos;
        for (int f : ra.pre_neg) ga.pre.push_back(not_fact.at(f));
        ga.add = ra.add;
        ga.del = ra.del;
        for (int f : ra.add)
            if (negated_atoms.count(f)) ga.del.push_back(not_fact.at(f));
        for (int f : ra.del)
            if (negated_atoms.count(f)) ga.add.push_back(not_fact.at(f));
        for (auto *v : {&ga.pre, &ga.add, &ga.del}) std::sort(v->begin(), v->end());
        compiled.push_back(std::move(ga));
    }

    // Delete-relaxed reachability fixpoint.
    std::vector<char> reached(all_names.size(), 0);
    for (int f : full_init) reached[f] = 1;
    std::vector<char> applied(compiled.size(), 0);
    bool changed = true;
    while (changed) {
        changed = false;
        for (size_t i = 0; i < compiled.size(); ++i) {
            if (applied[i]) continue;
            const auto &a = compiled[i];
            bool ok = std::all_of(a.pre.begin(), a.pre.end(),
                                  [&](int f) { return reached[f]; });
            if (!ok) continue;
            applied[i] = 1;
            changed = true;
            for (int f : a.add)
                if (!reached[f]) reached[f] = 1;
        }
    }

    bool goal_reachable = std::all_of(goal_atoms.begin(), goal_atoms.end(),
                                      [&](int f) { return reached[f]; });

    // Renumber: keep reachable facts plus goal facts.
    std::vector<int> remap(all_names.size(), -1);
    GroundedTask task;
    for (size_t f = 0; f < all_names.size(); ++f) {
        bool keep = reached[f] ||
                    std::find(goal_atoms.begin(), goal_atoms.end(), static_cast<int>(f)) !=
                        goal_atoms.end();
        if (!keep) continue;
        remap[f] = static_cast<int>(task.fact_names.size());
        task.fact_names.push_back(all_names[f]);
    }
    for (size_t i = 0; i < compiled.size(); ++i) {
        if (!applied[i]) continue;
        GroundAction &a = compiled[i];
        for (auto *v : {&a.pre, &a.add, &a.del})
            for (int &f : *v) f = remap[f];
        // deletes of pruned facts are vacuous
        std::erase_if(a.del, [](int f) { return f < 0; });
        task.actions.push_back(std::move(a));
    }
    for (int f : full_init) task.init.push_back(remap[f]);
    for (int f : goal_atoms) task.goal.push_back(remap[f]);
    std::sort(task.init.begin(), task.init.end());
    std::sort(task.goal.begin(), task.goal.end());
    task.goal.erase(std::unique(task.goal.begin(), task.goal.end()), task.goal.end());
    task.relaxed_goal_reachable = goal_reachable;
    return task;
}

}  // namespace opslim
