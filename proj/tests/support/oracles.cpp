#include "support/oracles.hpp"

#include <algorithm>
#include <functional>
#include <stdexcept>

namespace rmrcpsp::testing {

Time worst_case_by_delay_enumeration(const Instance& inst, const ModeVector& modes,
                                     const ExtendedRelation& relation, int gamma) {
    const int v = inst.num_activities();
    std::vector<Time> nominal = nominal_durations(inst, modes);
    Time best = 0;
    std::vector<int> chosen;
    std::function<void(int, int)> recurse = [&](int next, int remaining) {
        std::vector<Time> durations = nominal;
        for (int i : chosen)
            durations[static_cast<size_t>(i)] +=
                chosen_mode(inst, modes, i).max_deviation;
        best = std::max(best, earliest_start_schedule(inst, relation, durations).makespan);
        if (remaining == 0) return;
        for (int i = next; i < v; ++i) {
            chosen.push_back(i);
            recurse(i + 1, remaining - 1);
            chosen.pop_back();
        }
    };
    recurse(0, std::min(gamma, v));
    return best;
}

Time makespan_by_path_enumeration(const Instance& inst, const ExtendedRelation& relation,
                                  const std::vector<Time>& durations) {
    Time best = 0;
    std::vector<int> path{inst.source()};
    std::function<void(int, Time)> walk = [&](int at, Time length) {
        if (at == inst.sink()) {
            best = std::max(best, length);
            return;
        }
        for (int j = 0; j < relation.size(); ++j)
            if (relation.before(at, j)) walk(j, length + durations[static_cast<size_t>(at)]);
    };
    walk(inst.source(), 0);
    return best;
}

RandomFirstStage random_first_stage(const Instance& inst, InstanceGen& gen) {
    RandomFirstStage out;
    out.modes.mode.assign(static_cast<size_t>(inst.num_activities()), 0);
    for (int attempt = 0; attempt < 1000; ++attempt) {
        for (int i = 1; i <= inst.n; ++i)
            out.modes[i] = gen.range(
                0, static_cast<int>(inst.activities[static_cast<size_t>(i)].modes.size()) - 1);
        if (nonrenewable_feasible(inst, out.modes)) break;
        if (attempt == 999)
            throw std::runtime_error("could not sample a non-renewable-feasible mode vector");
    }
    out.relation = transitive_closure(inst.precedences, inst.num_activities());
    for (int round = 0; round < 10000; ++round) {
        auto forbidden = find_forbidden_set(inst, out.modes, out.relation);
        if (!forbidden) return out;
        for (int attempt = 0; attempt < 100; ++attempt) {
            size_t a = static_cast<size_t>(gen.range(0, static_cast<int>(forbidden->size()) - 1));
            size_t b = static_cast<size_t>(gen.range(0, static_cast<int>(forbidden->size()) - 1));
            if (a == b) continue;
            try {
                out.relation =
                    extend_closure(out.relation, {{(*forbidden)[a], (*forbidden)[b]}});
                break;
            } catch (const CycleError&) {
            }
        }
    }
    throw std::runtime_error("could not resolve forbidden sets");
}

} // namespace rmrcpsp::testing
