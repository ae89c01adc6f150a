#include "rmrcpsp/instance_gen.hpp"

#include <algorithm>
#include <string>

namespace rmrcpsp {

std::uint64_t InstanceGen::raw() {
    // splitmix64
    std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ull);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
}

int InstanceGen::range(int lo, int hi) {
    return lo + static_cast<int>(raw() % static_cast<std::uint64_t>(hi - lo + 1));
}

namespace {

void attach_dummies(Instance& inst) {
    const int v = inst.num_activities();
    const int sink = inst.sink();
    std::vector<char> has_pred(static_cast<size_t>(v), 0), has_succ(static_cast<size_t>(v), 0);
    for (auto [a, b] : inst.precedences) {
        has_succ[static_cast<size_t>(a)] = 1;
        has_pred[static_cast<size_t>(b)] = 1;
    }
    for (int i = 1; i <= inst.n; ++i) {
        if (!has_pred[static_cast<size_t>(i)]) inst.precedences.emplace_back(0, i);
        if (!has_succ[static_cast<size_t>(i)]) inst.precedences.emplace_back(i, sink);
    }
    Mode dummy;
    dummy.renewable_req.assign(static_cast<size_t>(inst.num_renewable()), 0);
    dummy.nonrenewable_req.assign(static_cast<size_t>(inst.num_nonrenewable()), 0);
    inst.activities[0].modes = {dummy};
    inst.activities[static_cast<size_t>(sink)].modes = {dummy};
}

} // namespace

Instance InstanceGen::tiny(int n, int max_modes) {
    Instance inst;
    inst.n = n;
    inst.name = "tiny_n" + std::to_string(n);
    inst.activities.resize(static_cast<size_t>(n + 2));
    const int nr = range(1, 2);
    inst.renewable_caps.resize(static_cast<size_t>(nr));
    for (int k = 0; k < nr; ++k) inst.renewable_caps[static_cast<size_t>(k)] = range(3, 6);
    inst.nonrenewable_caps.resize(1);

    long long min_nonrenewable = 0;
    for (int i = 1; i <= n; ++i) {
        Activity& act = inst.activities[static_cast<size_t>(i)];
        const int mode_count = range(1, max_modes);
        long long cheapest = 1 << 20;
        for (int m = 0; m < mode_count; ++m) {
            Mode mode;
            mode.nominal_duration = range(0, 9);
            mode.max_deviation = range(0, 6);
            mode.renewable_req.resize(static_cast<size_t>(nr));
            for (int k = 0; k < nr; ++k)
                mode.renewable_req[static_cast<size_t>(k)] =
                    range(0, inst.renewable_caps[static_cast<size_t>(k)]);
            mode.nonrenewable_req = {range(0, 5)};
            cheapest = std::min<long long>(cheapest, mode.nonrenewable_req[0]);
            act.modes.push_back(std::move(mode));
        }
        min_nonrenewable += cheapest;
    }
    inst.nonrenewable_caps[0] = static_cast<int>(min_nonrenewable + range(0, 3));

    for (int i = 1; i <= n; ++i)
        for (int j = i + 1; j <= n; ++j)
            if (range(0, 99) < 35) inst.precedences.emplace_back(i, j);
    attach_dummies(inst);
    return inst;
}

Instance InstanceGen::psplib_style(int n) {
    Instance inst;
    inst.n = n;
    inst.name = "synth_j" + std::to_string(n);
    inst.activities.resize(static_cast<size_t>(n + 2));
    inst.renewable_caps = {range(8, 14), range(8, 14)};
    inst.nonrenewable_caps.resize(2);

    long long min_nonrenewable[2] = {0, 0};
    for (int i = 1; i <= n; ++i) {
        Activity& act = inst.activities[static_cast<size_t>(i)];
        long long cheapest[2] = {1 << 20, 1 << 20};
        for (int m = 0; m < 3; ++m) {
            Mode mode;
            mode.nominal_duration = range(1, 10);
            mode.renewable_req.resize(2);
            for (int k = 0; k < 2; ++k)
                mode.renewable_req[static_cast<size_t>(k)] =
                    range(0, inst.renewable_caps[static_cast<size_t>(k)] - 2);
            mode.nonrenewable_req = {range(0, 8), range(0, 8)};
            act.modes.push_back(std::move(mode));
        }
        // PSPLIB-style time/resource tradeoff: slower modes are cheaper.
        std::sort(act.modes.begin(), act.modes.end(),
                  [](const Mode& a, const Mode& b) { return a.nominal_duration < b.nominal_duration; });
        for (size_t m = 0; m + 1 < act.modes.size(); ++m)
            for (int k = 0; k < 2; ++k)
                if (act.modes[m + 1].renewable_req[static_cast<size_t>(k)] >
                    act.modes[m].renewable_req[static_cast<size_t>(k)])
                    std::swap(act.modes[m + 1].renewable_req[static_cast<size_t>(k)],
                              act.modes[m].renewable_req[static_cast<size_t>(k)]);
        for (const Mode& mode : act.modes)
            for (int k = 0; k < 2; ++k)
                cheapest[k] = std::min<long long>(cheapest[k],
                                                  mode.nonrenewable_req[static_cast<size_t>(k)]);
        for (int k = 0; k < 2; ++k) min_nonrenewable[k] += cheapest[k];
    }
    for (int k = 0; k < 2; ++k)
        inst.nonrenewable_caps[static_cast<size_t>(k)] =
            static_cast<int>(min_nonrenewable[k] + range(2, 10));

    for (int i = 1; i <= n; ++i)
        for (int j = i + 1; j <= n; ++j) {
            int gap = j - i;
            int chance = gap <= 2 ? 30 : (gap <= 4 ? 12 : 4);
            if (range(0, 99) < chance) inst.precedences.emplace_back(i, j);
        }
    attach_dummies(inst);
    return inst;
}

} // namespace rmrcpsp
