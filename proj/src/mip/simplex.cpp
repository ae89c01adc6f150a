#include "rmrcpsp/mip/simplex.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace rmrcpsp::mip {

namespace {

constexpr double kFeasTol = 1e-7;
constexpr double kCostTol = 1e-9;

// Bounded-variable primal simplex over the system s_i = A_i.x, where each
// logical s_i carries the row bounds [lo_i, hi_i]. Rows are stored as
// s_i - A_i.x = 0, so the initial logical basis matrix is the identity and
// the dense tableau always holds T = B^-1 [-A | I].
class Tableau {
public:
    explicit Tableau(const LpProblem& p) : m_(static_cast<int>(p.rows.size())), n_(p.num_vars()) {
        cols_ = n_ + m_;
        lower_.assign(static_cast<size_t>(cols_), 0.0);
        upper_.assign(static_cast<size_t>(cols_), 0.0);
        cost_.assign(static_cast<size_t>(cols_), 0.0);
        for (int j = 0; j < n_; ++j) {
            lower_[static_cast<size_t>(j)] = p.lower[static_cast<size_t>(j)];
            upper_[static_cast<size_t>(j)] = p.upper[static_cast<size_t>(j)];
            cost_[static_cast<size_t>(j)] = p.cost[static_cast<size_t>(j)];
        }
        for (int i = 0; i < m_; ++i) {
            lower_[static_cast<size_t>(n_ + i)] = p.rows[static_cast<size_t>(i)].lo;
            upper_[static_cast<size_t>(n_ + i)] = p.rows[static_cast<size_t>(i)].hi;
        }
        tab_.assign(static_cast<size_t>(m_) * static_cast<size_t>(cols_), 0.0);
        for (int i = 0; i < m_; ++i) {
            for (auto [j, a] : p.rows[static_cast<size_t>(i)].terms) at(i, j) -= a;
            at(i, n_ + i) = 1.0;
        }
        basis_.resize(static_cast<size_t>(m_));
        in_basis_.assign(static_cast<size_t>(cols_), 0);
        value_.assign(static_cast<size_t>(cols_), 0.0);
        for (int j = 0; j < n_; ++j) value_[static_cast<size_t>(j)] = start_value(j);
        for (int i = 0; i < m_; ++i) {
            basis_[static_cast<size_t>(i)] = n_ + i;
            in_basis_[static_cast<size_t>(n_ + i)] = 1;
        }
        recompute_basics();
    }

    LpResult run(int iteration_limit) {
        if (iteration_limit <= 0) iteration_limit = 5000 + 80 * (m_ + n_);
        LpResult result;
        int stall = 0;
        bool bland = false;
        bool in_phase2 = false;
        for (int iter = 0; iter < iteration_limit; ++iter) {
            // Hysteresis on the phase switch so rounding drift cannot bounce
            // the loop between phases.
            double infeas = max_infeasibility();
            bool phase2 = in_phase2 ? infeas <= 50 * kFeasTol : infeas <= kFeasTol;
            if (phase2 != in_phase2) {
                in_phase2 = phase2;
                stall = 0;
                bland = false;
            }
            int entering = -1;
            int direction = 0;
            if (phase2)
                price_phase2(bland, entering, direction);
            else
                price_phase1(bland, entering, direction);
            if (entering < 0) {
                if (!phase2) {
                    result.status = LpStatus::Infeasible;
                    return result;
                }
                if (infeas > kFeasTol) {
                    // Drifted out while optimal: clean up in phase 1.
                    in_phase2 = false;
                    continue;
                }
                result.status = LpStatus::Optimal;
                finish(result);
                return result;
            }
            double before = phase2 ? objective_value() : total_infeasibility();
            if (!step(entering, direction, phase2, bland)) {
                result.status = LpStatus::Unbounded;
                return result;
            }
            double after = phase2 ? objective_value() : total_infeasibility();
            if (after < before - 1e-7) {
                stall = 0;
                bland = false;
            } else if (++stall > 30) {
                bland = true; // Bland entering and leaving until real progress
            }
        }
        result.status = LpStatus::IterLimit;
        return result;
    }

private:
    double& at(int i, int j) {
        return tab_[static_cast<size_t>(i) * static_cast<size_t>(cols_) + static_cast<size_t>(j)];
    }
    double at(int i, int j) const {
        return tab_[static_cast<size_t>(i) * static_cast<size_t>(cols_) + static_cast<size_t>(j)];
    }

    double start_value(int j) const {
        double lo = lower_[static_cast<size_t>(j)];
        double hi = upper_[static_cast<size_t>(j)];
        if (lo > -kLpInfinity) return lo;
        if (hi < kLpInfinity) return hi;
        return 0.0;
    }

    // z_B = -T_N z_N from the homogeneous system T z = 0.
    void recompute_basics() {
        std::vector<double> acc(static_cast<size_t>(m_), 0.0);
        for (int j = 0; j < cols_; ++j) {
            if (in_basis_[static_cast<size_t>(j)]) continue;
            double v = value_[static_cast<size_t>(j)];
            if (v == 0.0) continue;
            for (int i = 0; i < m_; ++i) acc[static_cast<size_t>(i)] += at(i, j) * v;
        }
        for (int i = 0; i < m_; ++i)
            value_[static_cast<size_t>(basis_[static_cast<size_t>(i)])] =
                -acc[static_cast<size_t>(i)];
    }

    double infeasibility(int j) const {
        double v = value_[static_cast<size_t>(j)];
        if (v < lower_[static_cast<size_t>(j)]) return lower_[static_cast<size_t>(j)] - v;
        if (v > upper_[static_cast<size_t>(j)]) return v - upper_[static_cast<size_t>(j)];
        return 0.0;
    }

    double max_infeasibility() const {
        double worst = 0.0;
        for (int i = 0; i < m_; ++i)
            worst = std::max(worst, infeasibility(basis_[static_cast<size_t>(i)]));
        return worst;
    }

    double total_infeasibility() const {
        double total = 0.0;
        for (int i = 0; i < m_; ++i) total += infeasibility(basis_[static_cast<size_t>(i)]);
        return total;
    }

    double objective_value() const {
        double obj = 0.0;
        for (int j = 0; j < n_; ++j)
            obj += cost_[static_cast<size_t>(j)] * value_[static_cast<size_t>(j)];
        return obj;
    }

    // g_j = sum_i w_i T_ij for the given row weights.
    void weighted_columns(const std::vector<double>& w, std::vector<double>& g) const {
        g.assign(static_cast<size_t>(cols_), 0.0);
        for (int i = 0; i < m_; ++i) {
            double wi = w[static_cast<size_t>(i)];
            if (wi == 0.0) continue;
            const double* row = &tab_[static_cast<size_t>(i) * static_cast<size_t>(cols_)];
            for (int j = 0; j < cols_; ++j) g[static_cast<size_t>(j)] += wi * row[j];
        }
    }

    // Phase 1 minimizes total bound violation of the basics. Moving a
    // nonbasic j changes basic i at rate -dir*T_ij, so the violation
    // derivative along +x_j is -sum_i w_i T_ij with w_i = +-1 on violated
    // rows; increasing x_j improves iff g_j > 0 for g = w.T.
    void price_phase1(bool bland, int& entering, int& direction) const {
        std::vector<double> w(static_cast<size_t>(m_), 0.0);
        for (int i = 0; i < m_; ++i) {
            int b = basis_[static_cast<size_t>(i)];
            double v = value_[static_cast<size_t>(b)];
            if (v < lower_[static_cast<size_t>(b)] - kFeasTol)
                w[static_cast<size_t>(i)] = -1.0;
            else if (v > upper_[static_cast<size_t>(b)] + kFeasTol)
                w[static_cast<size_t>(i)] = 1.0;
        }
        std::vector<double> g;
        weighted_columns(w, g);
        select_entering(g, bland, entering, direction);
    }

    // Phase 2: reduced cost z_j = c_j - c_B.T_j; increasing x_j improves iff
    // z_j < 0, i.e. g_j = -z_j > 0, matching the phase-1 convention.
    void price_phase2(bool bland, int& entering, int& direction) const {
        std::vector<double> w(static_cast<size_t>(m_), 0.0);
        for (int i = 0; i < m_; ++i)
            w[static_cast<size_t>(i)] = cost_[static_cast<size_t>(basis_[static_cast<size_t>(i)])];
        std::vector<double> g;
        weighted_columns(w, g);
        for (int j = 0; j < cols_; ++j)
            g[static_cast<size_t>(j)] -= cost_[static_cast<size_t>(j)];
        select_entering(g, bland, entering, direction);
    }

    void select_entering(const std::vector<double>& g, bool bland, int& entering,
                         int& direction) const {
        entering = -1;
        direction = 0;
        double best = kCostTol;
        for (int j = 0; j < cols_; ++j) {
            if (in_basis_[static_cast<size_t>(j)]) continue;
            if (lower_[static_cast<size_t>(j)] == upper_[static_cast<size_t>(j)]) continue;
            double v = value_[static_cast<size_t>(j)];
            bool at_lower = lower_[static_cast<size_t>(j)] > -kLpInfinity &&
                            v <= lower_[static_cast<size_t>(j)] + kFeasTol;
            bool at_upper = upper_[static_cast<size_t>(j)] < kLpInfinity &&
                            v >= upper_[static_cast<size_t>(j)] - kFeasTol;
            bool free_var = !at_lower && !at_upper;
            double gj = g[static_cast<size_t>(j)];
            if ((at_lower || free_var) && gj > best) {
                entering = j;
                direction = 1;
                if (bland) return;
                best = gj;
            } else if ((at_upper || free_var) && -gj > best) {
                entering = j;
                direction = -1;
                if (bland) return;
                best = -gj;
            }
        }
    }

    // Moves entering by t >= 0 in the given direction until the first bound
    // crossing. Basic i moves at rate delta_i = -direction * T_i,entering.
    // Ties on the blocking row break toward the larger pivot for stability,
    // or toward the lowest basis index under Bland's rule.
    bool step(int entering, int direction, bool feasible_phase, bool bland) {
        double limit = std::numeric_limits<double>::infinity();
        int leaving_row = -1;
        double range =
            upper_[static_cast<size_t>(entering)] - lower_[static_cast<size_t>(entering)];
        if (range < kLpInfinity) limit = range;

        for (int i = 0; i < m_; ++i) {
            double coef = at(i, entering);
            if (std::abs(coef) < 1e-11) continue;
            double delta = -direction * coef;
            int b = basis_[static_cast<size_t>(i)];
            double v = value_[static_cast<size_t>(b)];
            double lo = lower_[static_cast<size_t>(b)];
            double hi = upper_[static_cast<size_t>(b)];
            double cap = std::numeric_limits<double>::infinity();
            if (delta > 0) {
                if (v < lo - kFeasTol)
                    cap = (lo - v) / delta; // crossing back into feasibility
                else if (v <= hi + kFeasTol && hi < kLpInfinity)
                    cap = (hi - v) / delta;
                // already above hi and climbing: no crossing ahead
            } else {
                if (v > hi + kFeasTol)
                    cap = (hi - v) / delta;
                else if (v >= lo - kFeasTol && lo > -kLpInfinity)
                    cap = (lo - v) / delta;
            }
            if (!std::isfinite(cap)) continue;
            if (cap < 0.0) cap = 0.0;
            bool take = false;
            if (cap < limit - 1e-12) {
                take = true;
            } else if (leaving_row >= 0 && cap < limit + 1e-12) {
                if (bland)
                    take = b < basis_[static_cast<size_t>(leaving_row)];
                else
                    take = std::abs(coef) > std::abs(at(leaving_row, entering));
            }
            if (take) {
                limit = cap;
                leaving_row = i;
            }
        }

        if (!std::isfinite(limit)) {
            if (feasible_phase) return false; // unbounded objective
            limit = 0.0; // unreachable: phase-1 violation is bounded below by 0
        }
        double t = limit;

        value_[static_cast<size_t>(entering)] += direction * t;
        if (t != 0.0)
            for (int i = 0; i < m_; ++i) {
                double coef = at(i, entering);
                if (coef == 0.0) continue;
                value_[static_cast<size_t>(basis_[static_cast<size_t>(i)])] -=
                    direction * coef * t;
            }

        if (leaving_row < 0) return true; // bound flip only

        int leaving = basis_[static_cast<size_t>(leaving_row)];
        double lv = value_[static_cast<size_t>(leaving)];
        double lo = lower_[static_cast<size_t>(leaving)];
        double hi = upper_[static_cast<size_t>(leaving)];
        value_[static_cast<size_t>(leaving)] = std::abs(lv - lo) <= std::abs(lv - hi) ? lo : hi;

        double pivot = at(leaving_row, entering);
        const size_t row_off = static_cast<size_t>(leaving_row) * static_cast<size_t>(cols_);
        double inv = 1.0 / pivot;
        for (int j = 0; j < cols_; ++j) tab_[row_off + static_cast<size_t>(j)] *= inv;
        for (int i = 0; i < m_; ++i) {
            if (i == leaving_row) continue;
            double f = at(i, entering);
            if (std::abs(f) < 1e-13) continue;
            const size_t off = static_cast<size_t>(i) * static_cast<size_t>(cols_);
            for (int j = 0; j < cols_; ++j)
                tab_[off + static_cast<size_t>(j)] -= f * tab_[row_off + static_cast<size_t>(j)];
            at(i, entering) = 0.0;
        }
        in_basis_[static_cast<size_t>(leaving)] = 0;
        in_basis_[static_cast<size_t>(entering)] = 1;
        basis_[static_cast<size_t>(leaving_row)] = entering;
        recompute_basics();
        return true;
    }

    void finish(LpResult& result) const {
        result.objective = 0.0;
        result.x.assign(static_cast<size_t>(n_), 0.0);
        for (int j = 0; j < n_; ++j) {
            result.x[static_cast<size_t>(j)] = value_[static_cast<size_t>(j)];
            result.objective += cost_[static_cast<size_t>(j)] * value_[static_cast<size_t>(j)];
        }
    }

    int m_;
    int n_;
    int cols_ = 0;
    std::vector<double> tab_;
    std::vector<double> lower_, upper_, cost_;
    std::vector<double> value_;
    std::vector<int> basis_;
    std::vector<char> in_basis_;
};

} // namespace

LpResult solve_lp(const LpProblem& problem, int iteration_limit) {
    if (problem.rows.empty()) {
        LpResult result;
        result.status = LpStatus::Optimal;
        result.x.assign(static_cast<size_t>(problem.num_vars()), 0.0);
        result.objective = 0.0;
        for (int j = 0; j < problem.num_vars(); ++j) {
            double c = problem.cost[static_cast<size_t>(j)];
            double lo = problem.lower[static_cast<size_t>(j)];
            double hi = problem.upper[static_cast<size_t>(j)];
            double v;
            if (c > 0)
                v = lo;
            else if (c < 0)
                v = hi;
            else
                v = lo > -kLpInfinity ? lo : (hi < kLpInfinity ? hi : 0.0);
            if (v <= -kLpInfinity || v >= kLpInfinity) {
                result.status = LpStatus::Unbounded;
                return result;
            }
            result.x[static_cast<size_t>(j)] = v;
            result.objective += c * v;
        }
        return result;
    }
    Tableau tableau(problem);
    return tableau.run(iteration_limit);
}

} // namespace rmrcpsp::mip
