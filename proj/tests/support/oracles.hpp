#pragma once

#include "rmrcpsp/instance.hpp"
#include "rmrcpsp/instance_gen.hpp"
#include "rmrcpsp/network.hpp"

namespace rmrcpsp::testing {

/// Independent worst-case oracle: tries every binary delay subset of size at
/// most gamma and reruns the CPM forward pass for each. Exponential; meant
/// for n <= 10 and gamma <= 3.
Time worst_case_by_delay_enumeration(const Instance& inst, const ModeVector& modes,
                                     const ExtendedRelation& relation, int gamma);

/// Independent makespan oracle: explicit enumeration of every source-to-sink
/// path in the relation, maximizing the summed durations.
Time makespan_by_path_enumeration(const Instance& inst, const ExtendedRelation& relation,
                                  const std::vector<Time>& durations);

struct RandomFirstStage {
    ModeVector modes;
    ExtendedRelation relation;
};

/// Random non-renewable-feasible mode vector plus a random sufficient
/// selection, produced by repeatedly ordering a pair of whichever forbidden
/// set is found until none remains.
RandomFirstStage random_first_stage(const Instance& inst, InstanceGen& gen);

} // namespace rmrcpsp::testing
