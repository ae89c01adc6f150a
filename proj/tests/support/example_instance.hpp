#pragma once

#include "rmrcpsp/instance.hpp"

namespace rmrcpsp::testing {

/// Five-activity single-resource instance (R_1 = 4, activities 2 and 5 have
/// two modes) whose nominal optimum is 11 and whose robust optimum at
/// Gamma = 2 is 15, reached with every activity in its first mode and the
/// extra ordering of activity 3 before activity 2; the worst case delays
/// activity 1 together with any one other activity.
Instance example_instance();

} // namespace rmrcpsp::testing
