#pragma once

#include <optional>
#include <stdexcept>
#include <utility>
#include <vector>

#include "rmrcpsp/instance.hpp"

namespace rmrcpsp {

/// Transitive extended precedence relation over V x V. before(i,j) is true
/// iff i must finish before j starts. Irreflexive, antisymmetric, contains E.
class ExtendedRelation {
public:
    ExtendedRelation() = default;
    explicit ExtendedRelation(int num_vertices)
        : size_(num_vertices),
          before_(static_cast<size_t>(num_vertices) * static_cast<size_t>(num_vertices), 0) {}

    int size() const { return size_; }
    bool before(int i, int j) const {
        return before_[static_cast<size_t>(i) * static_cast<size_t>(size_) +
                       static_cast<size_t>(j)] != 0;
    }
    void set(int i, int j, bool value = true) {
        before_[static_cast<size_t>(i) * static_cast<size_t>(size_) + static_cast<size_t>(j)] =
            value ? 1 : 0;
    }
    bool comparable(int i, int j) const { return before(i, j) || before(j, i); }

    std::vector<std::pair<int, int>> edges() const;
    bool operator==(const ExtendedRelation& other) const = default;

private:
    int size_ = 0;
    std::vector<char> before_;
};

struct CycleError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Smallest transitive relation containing the edge set. Throws CycleError
/// if the edges contain a directed cycle.
ExtendedRelation transitive_closure(const std::vector<std::pair<int, int>>& edges,
                                    int num_vertices);

/// Closure of an existing relation plus extra edges.
ExtendedRelation extend_closure(const ExtendedRelation& relation,
                                const std::vector<std::pair<int, int>>& extra);

struct ScheduleResult {
    std::vector<Time> start; // S_i
    Time makespan = 0;       // S_{n+1}
};

struct WorstCaseResult {
    Time makespan = 0;
    std::vector<char> delayed;      // binary xi per activity
    std::vector<int> critical_path; // activity sequence 0 .. n+1
};

/// Searches for a minimal antichain of the relation whose combined renewable
/// demand exceeds some capacity. Returns nullopt iff the relation is a
/// sufficient selection for the given modes.
std::optional<std::vector<int>> find_forbidden_set(const Instance& inst, const ModeVector& modes,
                                                   const ExtendedRelation& relation);

/// CPM forward pass: S_i = longest path from the source to i under the given
/// per-activity durations. Optimal second stage for fixed durations.
ScheduleResult earliest_start_schedule(const Instance& inst, const ExtendedRelation& relation,
                                       const std::vector<Time>& durations);

/// Exact worst case over the budgeted uncertainty set, via dynamic
/// programming over (activity, delays used) states of the layered network.
WorstCaseResult worst_case_longest_path(const Instance& inst, const ModeVector& modes,
                                        const ExtendedRelation& relation, BudgetGamma gamma);

/// Simulates the earliest-start schedule for the sampled durations and
/// checks per-time-unit renewable usage against every capacity.
bool max_parallel_resource_check(const Instance& inst, const ModeVector& modes,
                                 const ExtendedRelation& relation,
                                 const std::vector<Time>& durations);

} // namespace rmrcpsp
