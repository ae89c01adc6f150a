#include "rmrcpsp/network.hpp"

#include <algorithm>
#include <functional>
#include <numeric>
#include <queue>
#include <string>

namespace rmrcpsp {

std::vector<std::pair<int, int>> ExtendedRelation::edges() const {
    std::vector<std::pair<int, int>> out;
    for (int i = 0; i < size_; ++i)
        for (int j = 0; j < size_; ++j)
            if (before(i, j)) out.emplace_back(i, j);
    return out;
}

namespace {

void warshall(ExtendedRelation& rel) {
    const int v = rel.size();
    for (int p = 0; p < v; ++p)
        for (int i = 0; i < v; ++i) {
            if (!rel.before(i, p)) continue;
            for (int j = 0; j < v; ++j)
                if (rel.before(p, j)) rel.set(i, j);
        }
}

void check_acyclic(const ExtendedRelation& rel) {
    for (int i = 0; i < rel.size(); ++i)
        if (rel.before(i, i))
            throw CycleError("precedence relation contains a cycle through activity " +
                             std::to_string(i));
}

// Kahn's algorithm, lowest index first among ready vertices; valid for any
// acyclic relation, closed or not.
std::vector<int> topological_order(const ExtendedRelation& rel) {
    const int v = rel.size();
    std::vector<int> pred_count(static_cast<size_t>(v), 0);
    for (int j = 0; j < v; ++j)
        for (int i = 0; i < v; ++i)
            if (rel.before(i, j)) ++pred_count[static_cast<size_t>(j)];
    std::priority_queue<int, std::vector<int>, std::greater<>> ready;
    for (int i = 0; i < v; ++i)
        if (pred_count[static_cast<size_t>(i)] == 0) ready.push(i);
    std::vector<int> order;
    order.reserve(static_cast<size_t>(v));
    while (!ready.empty()) {
        int i = ready.top();
        ready.pop();
        order.push_back(i);
        for (int j = 0; j < v; ++j)
            if (rel.before(i, j) && --pred_count[static_cast<size_t>(j)] == 0) ready.push(j);
    }
    return order;
}

} // namespace

ExtendedRelation transitive_closure(const std::vector<std::pair<int, int>>& edges,
                                    int num_vertices) {
    ExtendedRelation rel(num_vertices);
    for (auto [i, j] : edges) rel.set(i, j);
    warshall(rel);
    check_acyclic(rel);
    return rel;
}

ExtendedRelation extend_closure(const ExtendedRelation& relation,
                                const std::vector<std::pair<int, int>>& extra) {
    ExtendedRelation rel = relation;
    for (auto [i, j] : extra) rel.set(i, j);
    warshall(rel);
    check_acyclic(rel);
    return rel;
}

std::optional<std::vector<int>> find_forbidden_set(const Instance& inst, const ModeVector& modes,
                                                   const ExtendedRelation& relation) {
    const int nr = inst.num_renewable();
    std::vector<int> candidates;
    for (int i = 0; i < inst.num_activities(); ++i) {
        const Mode& m = chosen_mode(inst, modes, i);
        for (int k = 0; k < nr; ++k)
            if (m.renewable_req[static_cast<size_t>(k)] > 0) {
                candidates.push_back(i);
                break;
            }
    }
    const int c = static_cast<int>(candidates.size());
    // max_tail[k][p] = largest request of resource k among candidates[p..].
    std::vector<std::vector<long long>> max_tail(
        static_cast<size_t>(nr), std::vector<long long>(static_cast<size_t>(c) + 1, 0));
    for (int k = 0; k < nr; ++k)
        for (int p = c - 1; p >= 0; --p)
            max_tail[static_cast<size_t>(k)][static_cast<size_t>(p)] =
                std::max(max_tail[static_cast<size_t>(k)][static_cast<size_t>(p) + 1],
                         static_cast<long long>(chosen_mode(inst, modes, candidates[static_cast<size_t>(p)])
                                                    .renewable_req[static_cast<size_t>(k)]));

    std::vector<int> members;
    std::vector<long long> usage(static_cast<size_t>(nr), 0);

    // Antichains are enumerated in increasing size so the first hit is minimal.
    std::function<std::optional<std::vector<int>>(int, int)> search =
        [&](int next, int want) -> std::optional<std::vector<int>> {
        if (static_cast<int>(members.size()) == want) {
            for (int k = 0; k < nr; ++k)
                if (usage[static_cast<size_t>(k)] > inst.renewable_caps[static_cast<size_t>(k)])
                    return members;
            return std::nullopt;
        }
        const int missing = want - static_cast<int>(members.size());
        for (int p = next; p + missing <= c; ++p) {
            bool exceed_possible = false;
            for (int k = 0; k < nr && !exceed_possible; ++k)
                exceed_possible =
                    usage[static_cast<size_t>(k)] +
                        missing * max_tail[static_cast<size_t>(k)][static_cast<size_t>(p)] >
                    inst.renewable_caps[static_cast<size_t>(k)];
            if (!exceed_possible) break; // requests only shrink from here on
            int i = candidates[static_cast<size_t>(p)];
            bool antichain = true;
            for (int j : members)
                if (relation.comparable(i, j)) {
                    antichain = false;
                    break;
                }
            if (!antichain) continue;
            members.push_back(i);
            const Mode& m = chosen_mode(inst, modes, i);
            for (int k = 0; k < nr; ++k)
                usage[static_cast<size_t>(k)] += m.renewable_req[static_cast<size_t>(k)];
            auto found = search(p + 1, want);
            for (int k = 0; k < nr; ++k)
                usage[static_cast<size_t>(k)] -= m.renewable_req[static_cast<size_t>(k)];
            members.pop_back();
            if (found) return found;
        }
        return std::nullopt;
    };

    for (int want = 2; want <= c; ++want)
        if (auto found = search(0, want)) return found;
    return std::nullopt;
}

ScheduleResult earliest_start_schedule(const Instance& inst, const ExtendedRelation& relation,
                                       const std::vector<Time>& durations) {
    ScheduleResult result;
    result.start.assign(static_cast<size_t>(inst.num_activities()), 0);
    for (int j : topological_order(relation)) {
        Time s = 0;
        for (int i = 0; i < relation.size(); ++i)
            if (relation.before(i, j))
                s = std::max(s, result.start[static_cast<size_t>(i)] +
                                    durations[static_cast<size_t>(i)]);
        result.start[static_cast<size_t>(j)] = s;
    }
    result.makespan = result.start[static_cast<size_t>(inst.sink())];
    return result;
}

WorstCaseResult worst_case_longest_path(const Instance& inst, const ModeVector& modes,
                                        const ExtendedRelation& relation, BudgetGamma gamma) {
    const int v = inst.num_activities();
    const int levels = gamma.value + 1;
    std::vector<Time> dbar = nominal_durations(inst, modes);
    std::vector<Time> dhat(static_cast<size_t>(v));
    for (int i = 0; i < v; ++i)
        dhat[static_cast<size_t>(i)] = chosen_mode(inst, modes, i).max_deviation;

    auto idx = [&](int i, int g) {
        return static_cast<size_t>(i) * static_cast<size_t>(levels) + static_cast<size_t>(g);
    };
    std::vector<Time> value(static_cast<size_t>(v) * static_cast<size_t>(levels), 0);
    std::vector<int> from(value.size(), -1);
    std::vector<char> from_delayed(value.size(), 0);

    // Ascending predecessor scan with strict improvement: ties resolve to the
    // lowest activity index and, within an index, to the undelayed choice.
    for (int j : topological_order(relation)) {
        for (int g = 0; g < levels; ++g) {
            Time best = -1;
            int best_from = -1;
            char best_delayed = 0;
            for (int i = 0; i < v; ++i) {
                if (!relation.before(i, j)) continue;
                Time plain = value[idx(i, g)] + dbar[static_cast<size_t>(i)];
                if (plain > best) {
                    best = plain;
                    best_from = i;
                    best_delayed = 0;
                }
                if (g > 0) {
                    Time delayed = value[idx(i, g - 1)] + dbar[static_cast<size_t>(i)] +
                                   dhat[static_cast<size_t>(i)];
                    if (delayed > best) {
                        best = delayed;
                        best_from = i;
                        best_delayed = 1;
                    }
                }
            }
            value[idx(j, g)] = std::max<Time>(best, 0);
            from[idx(j, g)] = best_from;
            from_delayed[idx(j, g)] = best_delayed;
        }
    }

    WorstCaseResult result;
    result.makespan = value[idx(inst.sink(), gamma.value)];
    result.delayed.assign(static_cast<size_t>(v), 0);
    int j = inst.sink();
    int g = gamma.value;
    result.critical_path.push_back(j);
    while (from[idx(j, g)] >= 0) {
        int i = from[idx(j, g)];
        if (from_delayed[idx(j, g)]) {
            result.delayed[static_cast<size_t>(i)] = 1;
            --g;
        }
        j = i;
        result.critical_path.push_back(j);
    }
    std::reverse(result.critical_path.begin(), result.critical_path.end());
    return result;
}

bool max_parallel_resource_check(const Instance& inst, const ModeVector& modes,
                                 const ExtendedRelation& relation,
                                 const std::vector<Time>& durations) {
    ScheduleResult ess = earliest_start_schedule(inst, relation, durations);
    const int v = inst.num_activities();
    for (int probe = 0; probe < v; ++probe) {
        if (durations[static_cast<size_t>(probe)] == 0) continue;
        Time t = ess.start[static_cast<size_t>(probe)];
        for (int k = 0; k < inst.num_renewable(); ++k) {
            long long used = 0;
            for (int i = 0; i < v; ++i) {
                if (durations[static_cast<size_t>(i)] == 0) continue;
                Time s = ess.start[static_cast<size_t>(i)];
                if (s <= t && t < s + durations[static_cast<size_t>(i)])
                    used += chosen_mode(inst, modes, i).renewable_req[static_cast<size_t>(k)];
            }
            if (used > inst.renewable_caps[static_cast<size_t>(k)]) return false;
        }
    }
    return true;
}

} // namespace rmrcpsp
