#pragma once

#include <istream>
#include <string>
#include <utility>
#include <vector>

#include "rmrcpsp/instance.hpp"

namespace rmrcpsp {

struct ParseError : std::runtime_error {
    int line = 0;
    ParseError(int line_no, const std::string& what)
        : std::runtime_error("line " + std::to_string(line_no) + ": " + what), line(line_no) {}
};

/// Exact nonnegative rational, used so deviation factors like 0.7 never pass
/// through binary floating point before the floor is taken.
struct Rational {
    long long num = 0;
    long long den = 1;

    static Rational from_decimal_string(const std::string& text);
    long long floor_times(long long value) const { return num * value / den; }
};

/// Parses a PSPLIB multi-mode `.mm` file. Jobs 1..J map onto activities
/// 0..n+1 (job 1 = dummy source, job J = dummy sink). Durations load as
/// nominal; every max_deviation starts at zero.
Instance parse_mm(std::istream& in, const std::string& name = "");
Instance parse_mm_file(const std::string& path);

/// Serializes an instance back into `.mm` text. Round-trips all numeric
/// content of parse_mm (not byte-identical whitespace).
std::string write_mm(const Instance& inst);

/// New instance with max_deviation = floor(factor * nominal) on every mode
/// of every non-dummy activity; dummies stay at zero.
Instance apply_deviation_rule(const Instance& inst, const Rational& factor);

struct InstanceSet {
    std::vector<std::pair<std::string, Instance>> instances; // sorted by name
    std::vector<std::pair<std::string, std::string>> failures; // (name, error)
};

/// Loads every file in `directory` whose name matches `pattern` ('*' and '?'
/// wildcards). Parse failures are collected per file, never fatal.
InstanceSet load_instance_set(const std::string& directory, const std::string& pattern = "*.mm");

/// Canonical JSON serialization (stable key order, 2-space indent, sorted
/// precedence list, trailing newline). Byte-stable for identical instances.
std::string instance_to_canonical_json(const Instance& inst);

} // namespace rmrcpsp
