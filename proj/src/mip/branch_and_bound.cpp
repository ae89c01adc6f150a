#include "rmrcpsp/mip/branch_and_bound.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <queue>

#include "rmrcpsp/mip/simplex.hpp"

namespace rmrcpsp::mip {

namespace {

constexpr double kIntTol = 1e-6;
constexpr double kFeasTol = 1e-6;
constexpr double kInf = std::numeric_limits<double>::infinity();

struct Row {
    std::vector<std::pair<int, double>> terms;
    double lo = -kInf;
    double hi = kInf;
};

struct Bounds {
    std::vector<double> lo;
    std::vector<double> hi;
};

double clamp_inf(double v) {
    if (v >= kInfinity) return kInf;
    if (v <= -kInfinity) return -kInf;
    return v;
}

// One round of interval propagation over every row; returns false on proven
// infeasibility, sets changed when a bound moved.
bool propagate_once(const std::vector<Row>& rows, const std::vector<char>& integer,
                    Bounds& b, bool& changed) {
    for (const Row& row : rows) {
        double min_fin = 0.0, max_fin = 0.0;
        int min_inf = 0, max_inf = 0;
        for (auto [j, a] : row.terms) {
            double lo = b.lo[static_cast<size_t>(j)], hi = b.hi[static_cast<size_t>(j)];
            double cmin = a > 0 ? a * lo : a * hi;
            double cmax = a > 0 ? a * hi : a * lo;
            if (std::isfinite(cmin)) min_fin += cmin; else ++min_inf;
            if (std::isfinite(cmax)) max_fin += cmax; else ++max_inf;
        }
        double min_act = min_inf > 0 ? -kInf : min_fin;
        double max_act = max_inf > 0 ? kInf : max_fin;
        if (min_act > row.hi + kFeasTol || max_act < row.lo - kFeasTol) return false;

        for (auto [j, a] : row.terms) {
            double lo = b.lo[static_cast<size_t>(j)], hi = b.hi[static_cast<size_t>(j)];
            double cmin = a > 0 ? a * lo : a * hi;
            double cmax = a > 0 ? a * hi : a * lo;
            double rest_min, rest_max;
            if (std::isfinite(cmin))
                rest_min = min_inf > 0 ? -kInf : min_fin - cmin;
            else
                rest_min = min_inf > 1 ? -kInf : min_fin;
            if (std::isfinite(cmax))
                rest_max = max_inf > 0 ? kInf : max_fin - cmax;
            else
                rest_max = max_inf > 1 ? kInf : max_fin;

            double new_lo = lo, new_hi = hi;
            if (std::isfinite(rest_min) && row.hi < kInf) {
                double v = (row.hi - rest_min) / a;
                if (a > 0) new_hi = std::min(new_hi, v); else new_lo = std::max(new_lo, v);
            }
            if (std::isfinite(rest_max) && row.lo > -kInf) {
                double v = (row.lo - rest_max) / a;
                if (a > 0) new_lo = std::max(new_lo, v); else new_hi = std::min(new_hi, v);
            }
            if (integer[static_cast<size_t>(j)]) {
                if (std::isfinite(new_lo)) new_lo = std::ceil(new_lo - kIntTol);
                if (std::isfinite(new_hi)) new_hi = std::floor(new_hi + kIntTol);
            }
            if (new_lo > lo + 1e-9) {
                b.lo[static_cast<size_t>(j)] = new_lo;
                changed = true;
            }
            if (new_hi < hi - 1e-9) {
                b.hi[static_cast<size_t>(j)] = new_hi;
                changed = true;
            }
            if (b.lo[static_cast<size_t>(j)] > b.hi[static_cast<size_t>(j)] + kFeasTol)
                return false;
        }
    }
    return true;
}

bool propagate(const std::vector<Row>& rows, const std::vector<char>& integer, Bounds& b) {
    for (int round = 0; round < 16; ++round) {
        bool changed = false;
        if (!propagate_once(rows, integer, b, changed)) return false;
        if (!changed) return true;
    }
    return true;
}

struct Node {
    double bound;
    int depth;
    long long seq;
    std::vector<std::pair<int, std::pair<double, double>>> changes; // (var, (lo, hi))
};

struct NodeOrder {
    bool operator()(const Node& a, const Node& b) const {
        if (a.bound != b.bound) return a.bound > b.bound; // min-heap on bound
        if (a.depth != b.depth) return a.depth < b.depth; // deeper first
        return a.seq > b.seq;
    }
};

} // namespace

SolveOutcome BranchAndBoundBackend::solve(const MipModel& model, const SolveParams& params) {
    const auto started = std::chrono::steady_clock::now();
    auto elapsed = [&] {
        return std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
    };

    const int n = model.num_variables();
    const bool maximize = model.objective_sense() == ObjectiveSense::Maximize;
    std::vector<double> cost(static_cast<size_t>(n), 0.0);
    for (auto [j, c] : model.objective()) cost[static_cast<size_t>(j)] += maximize ? -c : c;

    std::vector<char> integer(static_cast<size_t>(n), 0);
    Bounds root;
    root.lo.resize(static_cast<size_t>(n));
    root.hi.resize(static_cast<size_t>(n));
    for (int j = 0; j < n; ++j) {
        const Variable& v = model.variables()[static_cast<size_t>(j)];
        integer[static_cast<size_t>(j)] = v.integer ? 1 : 0;
        root.lo[static_cast<size_t>(j)] = clamp_inf(v.lower);
        root.hi[static_cast<size_t>(j)] = clamp_inf(v.upper);
    }

    std::vector<Row> rows;
    rows.reserve(static_cast<size_t>(model.num_constraints()));
    for (const Constraint& c : model.constraints()) {
        Row row;
        row.terms = c.terms;
        switch (c.sense) {
            case Sense::LessEqual: row.hi = c.rhs; break;
            case Sense::GreaterEqual: row.lo = c.rhs; break;
            case Sense::Equal: row.lo = row.hi = c.rhs; break;
        }
        rows.push_back(std::move(row));
    }

    SolveOutcome outcome;
    auto fail = [&](SolveStatus status, const std::string& message) {
        outcome.status = status;
        outcome.message = message;
        outcome.wall_seconds = elapsed();
        return outcome;
    };

    // Builds the node LP over the non-fixed columns, folding fixed variables
    // into the row ranges and the objective constant. Returns false if a
    // constant row is violated.
    std::vector<int> to_lp(static_cast<size_t>(n));
    auto build_lp = [&](const Bounds& b, LpProblem& lp, std::vector<int>& lp_to_model,
                        double& fixed_cost) {
        lp = LpProblem{};
        lp_to_model.clear();
        fixed_cost = 0.0;
        for (int j = 0; j < n; ++j) {
            if (b.hi[static_cast<size_t>(j)] - b.lo[static_cast<size_t>(j)] <= 1e-12) {
                to_lp[static_cast<size_t>(j)] = -1;
                fixed_cost += cost[static_cast<size_t>(j)] * b.lo[static_cast<size_t>(j)];
                continue;
            }
            to_lp[static_cast<size_t>(j)] = static_cast<int>(lp_to_model.size());
            lp_to_model.push_back(j);
            lp.cost.push_back(cost[static_cast<size_t>(j)]);
            lp.lower.push_back(std::max(b.lo[static_cast<size_t>(j)], -kLpInfinity));
            lp.upper.push_back(std::min(b.hi[static_cast<size_t>(j)], kLpInfinity));
        }
        for (const Row& row : rows) {
            LpRow out;
            double shift = 0.0;
            for (auto [j, a] : row.terms) {
                int lj = to_lp[static_cast<size_t>(j)];
                if (lj < 0)
                    shift += a * b.lo[static_cast<size_t>(j)];
                else
                    out.terms.emplace_back(lj, a);
            }
            double lo = row.lo > -kInf ? row.lo - shift : -kLpInfinity;
            double hi = row.hi < kInf ? row.hi - shift : kLpInfinity;
            if (out.terms.empty()) {
                if (lo > kFeasTol || hi < -kFeasTol) return false;
                continue;
            }
            out.lo = lo;
            out.hi = hi;
            lp.rows.push_back(std::move(out));
        }
        return true;
    };

    double incumbent_obj = kInf;
    std::vector<double> incumbent;

    auto objective_of = [&](const std::vector<double>& values) {
        double obj = 0.0;
        for (int j = 0; j < n; ++j) obj += cost[static_cast<size_t>(j)] * values[static_cast<size_t>(j)];
        return obj;
    };

    auto satisfies_all = [&](const std::vector<double>& values) {
        for (int j = 0; j < n; ++j) {
            double v = values[static_cast<size_t>(j)];
            if (v < root.lo[static_cast<size_t>(j)] - kFeasTol ||
                v > root.hi[static_cast<size_t>(j)] + kFeasTol)
                return false;
            if (integer[static_cast<size_t>(j)] && std::abs(v - std::round(v)) > kIntTol)
                return false;
        }
        for (const Row& row : rows) {
            double act = 0.0;
            for (auto [j, a] : row.terms) act += a * values[static_cast<size_t>(j)];
            if (act < row.lo - 1e-5 || act > row.hi + 1e-5) return false;
        }
        return true;
    };

    if (params.warm_start && static_cast<int>(params.warm_start->size()) == n &&
        satisfies_all(*params.warm_start)) {
        incumbent = *params.warm_start;
        for (int j = 0; j < n; ++j)
            if (integer[static_cast<size_t>(j)])
                incumbent[static_cast<size_t>(j)] = std::round(incumbent[static_cast<size_t>(j)]);
        incumbent_obj = objective_of(incumbent);
    }

    // Dual bounds may be lifted to the next integer when every feasible
    // objective value is integral.
    auto strengthen = [&](double bound) {
        return model.objective_integral ? std::ceil(bound - 1e-6) : bound;
    };
    auto prunable = [&](double bound) {
        if (!std::isfinite(incumbent_obj)) return false;
        if (model.objective_integral) return bound >= incumbent_obj - 0.5;
        return bound >= incumbent_obj - 1e-9;
    };

    std::priority_queue<Node, std::vector<Node>, NodeOrder> open;
    long long seq = 0;
    open.push({-kInf, 0, seq++, {}});
    long long nodes = 0;
    bool hit_limit = false;
    double best_open_bound = -kInf;

    LpProblem lp;
    std::vector<int> lp_to_model;
    Bounds b;

    while (!open.empty()) {
        if (params.time_limit_s > 0 && elapsed() > params.time_limit_s) {
            hit_limit = true;
            best_open_bound = open.top().bound;
            break;
        }
        Node node = open.top();
        open.pop();
        ++nodes;
        if (prunable(node.bound)) continue;

        b = root;
        for (auto [j, lohi] : node.changes) {
            b.lo[static_cast<size_t>(j)] = std::max(b.lo[static_cast<size_t>(j)], lohi.first);
            b.hi[static_cast<size_t>(j)] = std::min(b.hi[static_cast<size_t>(j)], lohi.second);
        }
        if (!propagate(rows, integer, b)) continue;
        double fixed_cost = 0.0;
        if (!build_lp(b, lp, lp_to_model, fixed_cost)) continue;

        LpResult rel = solve_lp(lp);
        if (rel.status == LpStatus::Infeasible) continue;
        if (rel.status == LpStatus::Unbounded) {
            if (node.depth == 0 && !std::isfinite(incumbent_obj))
                return fail(SolveStatus::Unbounded, "LP relaxation is unbounded");
            continue; // bounded overall once an incumbent exists
        }
        if (rel.status == LpStatus::IterLimit)
            return fail(SolveStatus::Error, "simplex iteration limit reached");

        double bound = strengthen(rel.objective + fixed_cost);
        if (prunable(bound)) continue;

        // Assemble full-space values: fixed vars at their bound.
        std::vector<double> values(static_cast<size_t>(n));
        for (int j = 0; j < n; ++j)
            values[static_cast<size_t>(j)] =
                to_lp[static_cast<size_t>(j)] < 0
                    ? b.lo[static_cast<size_t>(j)]
                    : rel.x[static_cast<size_t>(to_lp[static_cast<size_t>(j)])];

        int branch_var = -1;
        double branch_val = 0.0;
        double best_frac = kIntTol;
        for (int j = 0; j < n; ++j) {
            if (!integer[static_cast<size_t>(j)]) continue;
            double v = values[static_cast<size_t>(j)];
            double frac = std::abs(v - std::round(v));
            double score = 0.5 - std::abs(v - std::floor(v) - 0.5);
            if (frac > kIntTol && score > best_frac) {
                best_frac = score;
                branch_var = j;
                branch_val = v;
            }
        }

        if (branch_var < 0) {
            for (int j = 0; j < n; ++j)
                if (integer[static_cast<size_t>(j)])
                    values[static_cast<size_t>(j)] = std::round(values[static_cast<size_t>(j)]);
            double obj = objective_of(values);
            if (obj < incumbent_obj - 1e-9) {
                incumbent_obj = obj;
                incumbent = values;
            }
            continue;
        }

        Node down{bound, node.depth + 1, seq++, node.changes};
        down.changes.emplace_back(branch_var,
                                  std::make_pair(-kInf, std::floor(branch_val)));
        Node up{bound, node.depth + 1, seq++, node.changes};
        up.changes.emplace_back(branch_var, std::make_pair(std::ceil(branch_val), kInf));
        // Explore the side the fractional value leans toward first.
        if (branch_val - std::floor(branch_val) <= 0.5) {
            open.push(std::move(down));
            open.push(std::move(up));
        } else {
            open.push(std::move(up));
            open.push(std::move(down));
        }
    }

    outcome.wall_seconds = elapsed();
    if (!std::isfinite(incumbent_obj)) {
        if (hit_limit) return fail(SolveStatus::Error, "time limit reached without a solution");
        return fail(SolveStatus::Infeasible, "");
    }
    outcome.values = incumbent;
    double obj = incumbent_obj;
    double bnd = hit_limit ? std::min(best_open_bound, incumbent_obj) : incumbent_obj;
    outcome.objective = maximize ? -obj : obj;
    outcome.best_bound = maximize ? -bnd : bnd;
    outcome.status = hit_limit ? SolveStatus::Feasible : SolveStatus::Optimal;
    if (hit_limit) outcome.message = "time limit reached";
    outcome.wall_seconds = elapsed();
    return outcome;
}

} // namespace rmrcpsp::mip
