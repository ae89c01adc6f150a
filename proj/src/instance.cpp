#include "rmrcpsp/instance.hpp"

#include <algorithm>
#include <queue>
#include <stdexcept>

namespace rmrcpsp {

const Mode& chosen_mode(const Instance& inst, const ModeVector& m, int activity) {
    return inst.activities[static_cast<size_t>(activity)]
        .modes[static_cast<size_t>(m[activity])];
}

std::vector<Time> nominal_durations(const Instance& inst, const ModeVector& m) {
    std::vector<Time> d(static_cast<size_t>(inst.num_activities()));
    for (int i = 0; i < inst.num_activities(); ++i)
        d[static_cast<size_t>(i)] = chosen_mode(inst, m, i).nominal_duration;
    return d;
}

std::vector<Time> worst_case_durations(const Instance& inst, const ModeVector& m) {
    std::vector<Time> d(static_cast<size_t>(inst.num_activities()));
    for (int i = 0; i < inst.num_activities(); ++i)
        d[static_cast<size_t>(i)] = chosen_mode(inst, m, i).worst_case_duration();
    return d;
}

bool nonrenewable_feasible(const Instance& inst, const ModeVector& m) {
    for (int k = 0; k < inst.num_nonrenewable(); ++k) {
        long long used = 0;
        for (int i = 0; i < inst.num_activities(); ++i)
            used += chosen_mode(inst, m, i).nonrenewable_req[static_cast<size_t>(k)];
        if (used > inst.nonrenewable_caps[static_cast<size_t>(k)]) return false;
    }
    return true;
}

namespace {

void add_issue(ValidationReport& report, ValidationIssue::Kind kind, std::string message) {
    report.issues.push_back({kind, std::move(message)});
}

// Kahn's algorithm; returns false if a cycle exists.
bool topological_order(int v, const std::vector<std::pair<int, int>>& edges,
                       std::vector<int>& order) {
    std::vector<int> indegree(static_cast<size_t>(v), 0);
    std::vector<std::vector<int>> succ(static_cast<size_t>(v));
    for (auto [a, b] : edges) {
        succ[static_cast<size_t>(a)].push_back(b);
        ++indegree[static_cast<size_t>(b)];
    }
    std::priority_queue<int, std::vector<int>, std::greater<>> ready;
    for (int i = 0; i < v; ++i)
        if (indegree[static_cast<size_t>(i)] == 0) ready.push(i);
    order.clear();
    while (!ready.empty()) {
        int i = ready.top();
        ready.pop();
        order.push_back(i);
        for (int j : succ[static_cast<size_t>(i)])
            if (--indegree[static_cast<size_t>(j)] == 0) ready.push(j);
    }
    return static_cast<int>(order.size()) == v;
}

} // namespace

ValidationReport validate(const Instance& inst) {
    ValidationReport report;
    const int v = inst.num_activities();
    if (v != inst.n + 2) {
        add_issue(report, ValidationIssue::Kind::BadIndex,
                  "expected " + std::to_string(inst.n + 2) + " activities, found " +
                      std::to_string(v));
        return report;
    }

    for (auto [a, b] : inst.precedences) {
        if (a < 0 || a >= v || b < 0 || b >= v) {
            add_issue(report, ValidationIssue::Kind::BadIndex,
                      "precedence (" + std::to_string(a) + "," + std::to_string(b) +
                          ") out of range");
            return report;
        }
    }

    for (int i = 0; i < v; ++i) {
        const Activity& act = inst.activities[static_cast<size_t>(i)];
        if (act.modes.empty()) {
            add_issue(report, ValidationIssue::Kind::EmptyModeList,
                      "activity " + std::to_string(i) + " has no modes");
            continue;
        }
        for (size_t mi = 0; mi < act.modes.size(); ++mi) {
            const Mode& mode = act.modes[mi];
            if (mode.nominal_duration < 0 || mode.max_deviation < 0)
                add_issue(report, ValidationIssue::Kind::NegativeQuantity,
                          "activity " + std::to_string(i) + " mode " + std::to_string(mi + 1) +
                              " has a negative duration");
            if (static_cast<int>(mode.renewable_req.size()) != inst.num_renewable() ||
                static_cast<int>(mode.nonrenewable_req.size()) != inst.num_nonrenewable()) {
                add_issue(report, ValidationIssue::Kind::BadIndex,
                          "activity " + std::to_string(i) + " mode " + std::to_string(mi + 1) +
                              " has mismatched resource vectors");
                continue;
            }
            for (int k = 0; k < inst.num_renewable(); ++k) {
                int req = mode.renewable_req[static_cast<size_t>(k)];
                if (req < 0)
                    add_issue(report, ValidationIssue::Kind::NegativeQuantity,
                              "activity " + std::to_string(i) + " has negative renewable request");
                // Retained but flagged: such a mode can never be scheduled.
                if (req > inst.renewable_caps[static_cast<size_t>(k)])
                    add_issue(report, ValidationIssue::Kind::ModeExceedsCapacity,
                              "activity " + std::to_string(i) + " mode " + std::to_string(mi + 1) +
                                  " requests " + std::to_string(req) + " of renewable " +
                                  std::to_string(k + 1) + " > capacity " +
                                  std::to_string(inst.renewable_caps[static_cast<size_t>(k)]));
            }
            for (int k = 0; k < inst.num_nonrenewable(); ++k)
                if (mode.nonrenewable_req[static_cast<size_t>(k)] < 0)
                    add_issue(report, ValidationIssue::Kind::NegativeQuantity,
                              "activity " + std::to_string(i) +
                                  " has negative non-renewable request");
        }
        if (inst.is_dummy(i)) {
            bool trivial = act.modes.size() == 1;
            if (trivial) {
                const Mode& mode = act.modes[0];
                trivial = mode.nominal_duration == 0 && mode.max_deviation == 0;
                for (int r : mode.renewable_req) trivial = trivial && r == 0;
                for (int r : mode.nonrenewable_req) trivial = trivial && r == 0;
            }
            if (!trivial)
                add_issue(report, ValidationIssue::Kind::DummyNotTrivial,
                          "dummy activity " + std::to_string(i) +
                              " must have a single zero mode");
        }
    }

    std::vector<int> order;
    if (!topological_order(v, inst.precedences, order)) {
        add_issue(report, ValidationIssue::Kind::Cycle, "precedence graph contains a cycle");
        return report;
    }

    // Reachability: 0 must reach every activity and every activity must reach n+1.
    std::vector<std::vector<int>> succ(static_cast<size_t>(v)), pred(static_cast<size_t>(v));
    for (auto [a, b] : inst.precedences) {
        succ[static_cast<size_t>(a)].push_back(b);
        pred[static_cast<size_t>(b)].push_back(a);
    }
    auto reachable = [v](int from, const std::vector<std::vector<int>>& adj) {
        std::vector<char> seen(static_cast<size_t>(v), 0);
        std::vector<int> stack{from};
        seen[static_cast<size_t>(from)] = 1;
        while (!stack.empty()) {
            int i = stack.back();
            stack.pop_back();
            for (int j : adj[static_cast<size_t>(i)])
                if (!seen[static_cast<size_t>(j)]) {
                    seen[static_cast<size_t>(j)] = 1;
                    stack.push_back(j);
                }
        }
        return seen;
    };
    std::vector<char> from_source = reachable(inst.source(), succ);
    std::vector<char> to_sink = reachable(inst.sink(), pred);
    for (int i = 0; i < v; ++i) {
        if (!from_source[static_cast<size_t>(i)])
            add_issue(report, ValidationIssue::Kind::Unreachable,
                      "activity " + std::to_string(i) + " is not reachable from the source");
        if (!to_sink[static_cast<size_t>(i)])
            add_issue(report, ValidationIssue::Kind::Unreachable,
                      "activity " + std::to_string(i) + " does not reach the sink");
    }
    return report;
}

Time upper_bound_N(const Instance& inst) {
    Time total = 0;
    for (const Activity& act : inst.activities) {
        Time worst = 0;
        for (const Mode& mode : act.modes)
            worst = std::max(worst, mode.worst_case_duration());
        total += worst;
    }
    return total;
}

int flow_bound_P(const Instance& inst, int i, int j, int k) {
    auto max_req = [&](int activity) {
        int best = 0;
        for (const Mode& mode : inst.activities[static_cast<size_t>(activity)].modes)
            best = std::max(best, mode.renewable_req[static_cast<size_t>(k)]);
        return best;
    };
    return std::min(max_req(i), max_req(j));
}

BudgetGamma BudgetGamma::for_instance(long long gamma, const Instance& inst) {
    if (gamma < 0) throw std::invalid_argument("robustness budget must be nonnegative");
    return BudgetGamma{static_cast<int>(std::min<long long>(gamma, inst.n))};
}

} // namespace rmrcpsp
