#pragma once

#include <string>
#include <utility>
#include <vector>

namespace rmrcpsp {

/// Integer time unit. All duration arithmetic in the suite is exact.
using Time = long long;

/// One processing mode of an activity: nominal duration, maximum
/// durational deviation and per-resource requirements.
struct Mode {
    Time nominal_duration = 0;
    Time max_deviation = 0;
    std::vector<int> renewable_req;
    std::vector<int> nonrenewable_req;

    Time worst_case_duration() const { return nominal_duration + max_deviation; }
};

struct Activity {
    std::vector<Mode> modes;
};

/// A project instance. Activities are indexed 0..n+1 where 0 is the dummy
/// source and n+1 the dummy sink; both dummies are materialized explicitly
/// with a single zero mode.
struct Instance {
    std::string name;
    int n = 0;                                   // non-dummy activity count
    std::vector<Activity> activities;            // size n+2
    std::vector<std::pair<int, int>> precedences; // edge set E
    std::vector<int> renewable_caps;             // R_k
    std::vector<int> nonrenewable_caps;          // R'_k

    int num_activities() const { return static_cast<int>(activities.size()); }
    int source() const { return 0; }
    int sink() const { return n + 1; }
    bool is_dummy(int i) const { return i == 0 || i == n + 1; }
    int num_renewable() const { return static_cast<int>(renewable_caps.size()); }
    int num_nonrenewable() const { return static_cast<int>(nonrenewable_caps.size()); }
};

/// Chosen mode index per activity (dummies included, always mode 0).
struct ModeVector {
    std::vector<int> mode;

    int operator[](int i) const { return mode[static_cast<size_t>(i)]; }
    int& operator[](int i) { return mode[static_cast<size_t>(i)]; }
    int size() const { return static_cast<int>(mode.size()); }
};

const Mode& chosen_mode(const Instance& inst, const ModeVector& m, int activity);

/// Nominal durations under a mode choice, indexed by activity.
std::vector<Time> nominal_durations(const Instance& inst, const ModeVector& m);
/// Worst-case (nominal + deviation) durations under a mode choice.
std::vector<Time> worst_case_durations(const Instance& inst, const ModeVector& m);

/// True iff the mode choice respects every non-renewable budget.
bool nonrenewable_feasible(const Instance& inst, const ModeVector& m);

struct ValidationIssue {
    enum class Kind {
        Cycle,
        Unreachable,
        DummyNotTrivial,
        ModeExceedsCapacity,
        EmptyModeList,
        BadIndex,
        NegativeQuantity,
    };
    Kind kind;
    std::string message;
};

struct ValidationReport {
    std::vector<ValidationIssue> issues;
    bool ok() const { return issues.empty(); }
};

/// Structural validation. Violations are reported as data, never thrown;
/// an empty report means the instance is well-formed.
ValidationReport validate(const Instance& inst);

/// N = sum_i max_m (nominal + deviation): an upper bound on the minimum
/// makespan, used as the big-M constant in the MILP formulations.
Time upper_bound_N(const Instance& inst);

/// P_ijk = min(max_m r_imk, max_m r_jmk): the largest amount of renewable
/// resource k that could flow from activity i into activity j.
int flow_bound_P(const Instance& inst, int i, int j, int k);

/// Robustness budget. Values above n carry no extra adversarial power and
/// are clamped; negative values are rejected.
struct BudgetGamma {
    int value = 0;

    static BudgetGamma for_instance(long long gamma, const Instance& inst);
};

} // namespace rmrcpsp
