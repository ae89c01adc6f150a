#pragma once

#include <vector>

#include "rmrcpsp/instance.hpp"

namespace rmrcpsp::testing {

inline Mode make_mode(Time duration, Time deviation, std::vector<int> renewable = {},
                      std::vector<int> nonrenewable = {}) {
    Mode m;
    m.nominal_duration = duration;
    m.max_deviation = deviation;
    m.renewable_req = std::move(renewable);
    m.nonrenewable_req = std::move(nonrenewable);
    return m;
}

/// Instance from per-real-activity mode lists; dummies and their edges are
/// attached automatically (source before heads, tails before sink).
inline Instance make_instance(std::vector<std::vector<Mode>> real_activities,
                              std::vector<std::pair<int, int>> real_edges,
                              std::vector<int> renewable_caps,
                              std::vector<int> nonrenewable_caps = {}) {
    Instance inst;
    inst.n = static_cast<int>(real_activities.size());
    inst.renewable_caps = std::move(renewable_caps);
    inst.nonrenewable_caps = std::move(nonrenewable_caps);
    inst.activities.resize(static_cast<size_t>(inst.n + 2));
    Mode dummy;
    dummy.renewable_req.assign(inst.renewable_caps.size(), 0);
    dummy.nonrenewable_req.assign(inst.nonrenewable_caps.size(), 0);
    inst.activities[0].modes = {dummy};
    inst.activities[static_cast<size_t>(inst.n + 1)].modes = {dummy};
    for (int i = 0; i < inst.n; ++i)
        inst.activities[static_cast<size_t>(i + 1)].modes = std::move(real_activities[static_cast<size_t>(i)]);

    inst.precedences = std::move(real_edges);
    std::vector<char> has_pred(static_cast<size_t>(inst.n + 2), 0),
        has_succ(static_cast<size_t>(inst.n + 2), 0);
    for (auto [a, b] : inst.precedences) {
        has_succ[static_cast<size_t>(a)] = 1;
        has_pred[static_cast<size_t>(b)] = 1;
    }
    for (int i = 1; i <= inst.n; ++i) {
        if (!has_pred[static_cast<size_t>(i)]) inst.precedences.emplace_back(0, i);
        if (!has_succ[static_cast<size_t>(i)]) inst.precedences.emplace_back(i, inst.n + 1);
    }
    return inst;
}

inline ModeVector all_first_modes(const Instance& inst) {
    ModeVector m;
    m.mode.assign(static_cast<size_t>(inst.num_activities()), 0);
    return m;
}

} // namespace rmrcpsp::testing
