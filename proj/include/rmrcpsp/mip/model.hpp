#pragma once

#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

namespace rmrcpsp::mip {

constexpr double kInfinity = 1e30;

struct Variable {
    std::string name;
    double lower = 0.0;
    double upper = kInfinity;
    bool integer = false;
};

enum class Sense { LessEqual, Equal, GreaterEqual };

struct Constraint {
    std::string name;
    std::vector<std::pair<int, double>> terms; // (variable index, coefficient)
    Sense sense = Sense::LessEqual;
    double rhs = 0.0;
};

enum class ObjectiveSense { Minimize, Maximize };

/// Backend-agnostic linear model. The builder is append-only; names must be
/// unique and every term must reference a declared variable.
class MipModel {
public:
    int add_variable(const std::string& name, double lower, double upper, bool integer);
    int add_binary(const std::string& name) { return add_variable(name, 0.0, 1.0, true); }
    int add_continuous(const std::string& name, double lower, double upper) {
        return add_variable(name, lower, upper, false);
    }
    void add_constraint(const std::string& name, std::vector<std::pair<int, double>> terms,
                        Sense sense, double rhs);
    void set_objective(ObjectiveSense sense, std::vector<std::pair<int, double>> terms);

    void fix_variable(int index, double value);

    int num_variables() const { return static_cast<int>(variables_.size()); }
    int num_constraints() const { return static_cast<int>(constraints_.size()); }
    const std::vector<Variable>& variables() const { return variables_; }
    const std::vector<Constraint>& constraints() const { return constraints_; }
    ObjectiveSense objective_sense() const { return objective_sense_; }
    const std::vector<std::pair<int, double>>& objective() const { return objective_; }

    /// Hint for backends: every integer-feasible point has an integral
    /// objective value, so dual bounds may be rounded up safely.
    bool objective_integral = false;

private:
    std::vector<Variable> variables_;
    std::vector<Constraint> constraints_;
    std::unordered_map<std::string, int> variable_index_;
    std::unordered_map<std::string, int> constraint_index_;
    std::vector<std::pair<int, double>> objective_;
    ObjectiveSense objective_sense_ = ObjectiveSense::Minimize;
};

/// CPLEX-style LP text: objective, Subject To, Bounds, Generals/Binaries.
/// Deterministic (declaration order); integral coefficients are rendered as
/// exact decimal integers.
std::string write_lp(const MipModel& model);

} // namespace rmrcpsp::mip
