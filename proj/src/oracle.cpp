#include "rmrcpsp/oracle.hpp"

#include <algorithm>
#include <stdexcept>
#include <unordered_set>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace rmrcpsp {

namespace {

struct ModeBest {
    bool found = false;
    Time makespan = 0;
    std::vector<std::pair<int, int>> selection;
};

uint64_t relation_key(const ExtendedRelation& rel) {
    // Fits because the guard rails cap V at 8 vertices.
    uint64_t key = 0;
    int bit = 0;
    for (int i = 0; i < rel.size(); ++i)
        for (int j = 0; j < rel.size(); ++j, ++bit)
            if (rel.before(i, j)) key |= (uint64_t{1} << bit);
    return key;
}

// Depth-first search over selections: whenever the current relation still
// contains a forbidden antichain, branch on ordering one of its pairs. Every
// minimal sufficient selection is reachable this way, and extending a
// sufficient relation only lengthens paths, so search stops at sufficiency.
void search_selections(const Instance& inst, const ModeVector& modes, BudgetGamma gamma,
                       const ExtendedRelation& relation, std::vector<std::pair<int, int>>& added,
                       std::unordered_set<uint64_t>& seen, ModeBest& best) {
    if (!seen.insert(relation_key(relation)).second) return;

    WorstCaseResult coarse = worst_case_longest_path(inst, modes, relation, gamma);
    if (best.found && coarse.makespan >= best.makespan) return; // edges only lengthen paths

    auto forbidden = find_forbidden_set(inst, modes, relation);
    if (!forbidden) {
        best.found = true;
        best.makespan = coarse.makespan;
        best.selection = added;
        return;
    }
    for (size_t a = 0; a < forbidden->size(); ++a)
        for (size_t b = 0; b < forbidden->size(); ++b) {
            if (a == b) continue;
            int from = (*forbidden)[a];
            int to = (*forbidden)[b];
            ExtendedRelation next;
            try {
                next = extend_closure(relation, {{from, to}});
            } catch (const CycleError&) {
                continue;
            }
            added.emplace_back(from, to);
            search_selections(inst, modes, gamma, next, added, seen, best);
            added.pop_back();
        }
}

ModeBest evaluate_mode_vector(const Instance& inst, const ModeVector& modes, BudgetGamma gamma,
                              const ExtendedRelation& base) {
    ModeBest best;
    if (!nonrenewable_feasible(inst, modes)) return best;
    std::vector<std::pair<int, int>> added;
    std::unordered_set<uint64_t> seen;
    search_selections(inst, modes, gamma, base, added, seen, best);
    return best;
}

std::vector<ModeVector> feasible_mode_vectors(const Instance& inst) {
    const int v = inst.num_activities();
    long long combos = 1;
    for (int i = 1; i <= inst.n; ++i) {
        combos *= static_cast<long long>(inst.activities[static_cast<size_t>(i)].modes.size());
        if (combos > 64) throw std::invalid_argument("oracle guard rail: > 64 mode combinations");
    }
    if (inst.n > 6) throw std::invalid_argument("oracle guard rail: n > 6");

    std::vector<ModeVector> out;
    ModeVector modes;
    modes.mode.assign(static_cast<size_t>(v), 0);
    while (true) {
        out.push_back(modes);
        int i = 1;
        for (; i <= inst.n; ++i) {
            int count = static_cast<int>(inst.activities[static_cast<size_t>(i)].modes.size());
            if (modes[i] + 1 < count) {
                ++modes[i];
                break;
            }
            modes[i] = 0;
        }
        if (i > inst.n) break;
    }
    return out;
}

OracleResult pick_best(const Instance& inst, const std::vector<ModeVector>& vectors,
                       const std::vector<ModeBest>& bests) {
    OracleResult result;
    bool found = false;
    for (size_t c = 0; c < vectors.size(); ++c) {
        if (!bests[c].found) continue;
        if (!found || bests[c].makespan < result.makespan) {
            found = true;
            result.makespan = bests[c].makespan;
            result.modes = vectors[c];
            result.selection = bests[c].selection;
        }
    }
    if (!found) throw std::runtime_error("no feasible mode vector (invalid instance?)");
    return result;
}

} // namespace

OracleResult brute_force_solve(const Instance& inst, BudgetGamma gamma) {
    ExtendedRelation base = transitive_closure(inst.precedences, inst.num_activities());
    std::vector<ModeVector> vectors = feasible_mode_vectors(inst);
    std::vector<ModeBest> bests(vectors.size());
    for (size_t c = 0; c < vectors.size(); ++c)
        bests[c] = evaluate_mode_vector(inst, vectors[c], gamma, base);
    return pick_best(inst, vectors, bests);
}

OracleResult brute_force_solve_parallel(const Instance& inst, BudgetGamma gamma) {
    ExtendedRelation base = transitive_closure(inst.precedences, inst.num_activities());
    std::vector<ModeVector> vectors = feasible_mode_vectors(inst);
    std::vector<ModeBest> bests(vectors.size());
#ifdef _OPENMP
#pragma omp parallel for schedule(dynamic)
#endif
    for (long long c = 0; c < static_cast<long long>(vectors.size()); ++c)
        bests[static_cast<size_t>(c)] =
            evaluate_mode_vector(inst, vectors[static_cast<size_t>(c)], gamma, base);
    return pick_best(inst, vectors, bests);
}

} // namespace rmrcpsp
