#include "rmrcpsp/mip/model.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

namespace rmrcpsp::mip {

int MipModel::add_variable(const std::string& name, double lower, double upper, bool integer) {
    if (name.empty()) throw std::invalid_argument("variable name must not be empty");
    if (lower > upper)
        throw std::invalid_argument("variable " + name + " has lower bound above upper bound");
    auto [it, inserted] = variable_index_.emplace(name, num_variables());
    if (!inserted) throw std::invalid_argument("duplicate variable name: " + name);
    variables_.push_back({name, lower, upper, integer});
    return it->second;
}

void MipModel::add_constraint(const std::string& name,
                              std::vector<std::pair<int, double>> terms, Sense sense,
                              double rhs) {
    if (name.empty()) throw std::invalid_argument("constraint name must not be empty");
    auto [it, inserted] = constraint_index_.emplace(name, num_constraints());
    (void)it;
    if (!inserted) throw std::invalid_argument("duplicate constraint name: " + name);
    for (auto [index, coef] : terms) {
        (void)coef;
        if (index < 0 || index >= num_variables())
            throw std::invalid_argument("constraint " + name +
                                        " references unknown variable index " +
                                        std::to_string(index));
    }
    constraints_.push_back({name, std::move(terms), sense, rhs});
}

void MipModel::set_objective(ObjectiveSense sense, std::vector<std::pair<int, double>> terms) {
    for (auto [index, coef] : terms) {
        (void)coef;
        if (index < 0 || index >= num_variables())
            throw std::invalid_argument("objective references unknown variable index " +
                                        std::to_string(index));
    }
    objective_sense_ = sense;
    objective_ = std::move(terms);
}

void MipModel::fix_variable(int index, double value) {
    Variable& var = variables_[static_cast<size_t>(index)];
    var.lower = value;
    var.upper = value;
}

namespace {

std::string format_number(double value) {
    if (std::abs(value) < 1e18 && value == std::floor(value)) {
        std::ostringstream out;
        out << static_cast<long long>(value);
        return out.str();
    }
    std::ostringstream out;
    out.precision(17);
    out << value;
    return out.str();
}

void append_terms(std::ostringstream& out, const MipModel& model,
                  const std::vector<std::pair<int, double>>& terms) {
    if (terms.empty()) {
        out << " 0 " << (model.num_variables() > 0 ? model.variables()[0].name : "dummy");
        return;
    }
    bool first = true;
    for (auto [index, coef] : terms) {
        if (first) {
            out << ' ';
            if (coef < 0) out << "- ";
            first = false;
        } else {
            out << (coef < 0 ? " - " : " + ");
        }
        double magnitude = std::abs(coef);
        if (magnitude != 1.0) out << format_number(magnitude) << ' ';
        out << model.variables()[static_cast<size_t>(index)].name;
    }
}

} // namespace

std::string write_lp(const MipModel& model) {
    std::ostringstream out;
    out << (model.objective_sense() == ObjectiveSense::Minimize ? "Minimize" : "Maximize")
        << "\n obj:";
    if (model.objective().empty() && model.num_variables() == 0)
        out << " 0";
    else
        append_terms(out, model, model.objective());
    out << "\nSubject To\n";
    for (const Constraint& c : model.constraints()) {
        out << ' ' << c.name << ':';
        append_terms(out, model, c.terms);
        switch (c.sense) {
            case Sense::LessEqual: out << " <= "; break;
            case Sense::Equal: out << " = "; break;
            case Sense::GreaterEqual: out << " >= "; break;
        }
        out << format_number(c.rhs) << '\n';
    }
    out << "Bounds\n";
    for (const Variable& v : model.variables()) {
        if (v.lower == v.upper) {
            out << ' ' << v.name << " = " << format_number(v.lower) << '\n';
        } else if (v.upper >= kInfinity && v.lower <= -kInfinity) {
            out << ' ' << v.name << " free\n";
        } else if (v.upper >= kInfinity) {
            if (v.lower != 0.0) out << ' ' << v.name << " >= " << format_number(v.lower) << '\n';
        } else if (v.lower <= -kInfinity) {
            out << " -inf <= " << v.name << " <= " << format_number(v.upper) << '\n';
        } else {
            out << ' ' << format_number(v.lower) << " <= " << v.name << " <= "
                << format_number(v.upper) << '\n';
        }
    }
    std::string generals;
    std::string binaries;
    for (const Variable& v : model.variables()) {
        if (!v.integer) continue;
        if (v.lower == 0.0 && v.upper == 1.0)
            binaries += ' ' + v.name + '\n';
        else
            generals += ' ' + v.name + '\n';
    }
    if (!generals.empty()) out << "Generals\n" << generals;
    if (!binaries.empty()) out << "Binaries\n" << binaries;
    out << "End\n";
    return out.str();
}

} // namespace rmrcpsp::mip
