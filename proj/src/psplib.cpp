#include "rmrcpsp/psplib.hpp"

#include <algorithm>
#include <cctype>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

namespace rmrcpsp {

namespace {

struct Cursor {
    std::vector<std::string> lines;
    int pos = 0; // zero-based; reported line numbers are 1-based

    bool done() const { return pos >= static_cast<int>(lines.size()); }
    const std::string& line() const { return lines[static_cast<size_t>(pos)]; }
    int line_no() const { return pos + 1; }
};

bool contains(const std::string& haystack, const std::string& needle) {
    return haystack.find(needle) != std::string::npos;
}

std::string squeeze_spaces(const std::string& s) {
    std::string out;
    bool space = false;
    for (char c : s) {
        if (std::isspace(static_cast<unsigned char>(c))) {
            space = !out.empty();
        } else {
            if (space) out += ' ';
            out += c;
            space = false;
        }
    }
    return out;
}

std::vector<std::string> tokens_of(const std::string& line) {
    std::vector<std::string> out;
    std::istringstream in(line);
    std::string tok;
    while (in >> tok) out.push_back(tok);
    return out;
}

long long parse_int(const std::string& tok, int line_no) {
    size_t used = 0;
    long long value = 0;
    try {
        value = std::stoll(tok, &used);
    } catch (const std::exception&) {
        throw ParseError(line_no, "expected an integer, found '" + tok + "'");
    }
    if (used != tok.size())
        throw ParseError(line_no, "expected an integer, found '" + tok + "'");
    return value;
}

// Reads `count` integers starting at the cursor's token list tail, consuming
// continuation lines as needed.
std::vector<long long> read_ints(Cursor& cur, std::vector<std::string> tail, size_t count) {
    std::vector<long long> out;
    int line_no = cur.line_no();
    while (out.size() < count) {
        for (const std::string& tok : tail) {
            out.push_back(parse_int(tok, line_no));
            if (out.size() == count) return out;
        }
        ++cur.pos;
        if (cur.done()) throw ParseError(line_no, "unexpected end of file inside a table row");
        tail = tokens_of(cur.line());
        line_no = cur.line_no();
    }
    return out;
}

void seek_line_containing(Cursor& cur, const std::string& needle) {
    while (!cur.done()) {
        if (contains(cur.line(), needle)) return;
        ++cur.pos;
    }
    throw ParseError(static_cast<int>(cur.lines.size()),
                     "missing section header '" + needle + "'");
}

long long header_value(const std::string& line, int line_no) {
    auto colon = line.find(':');
    if (colon == std::string::npos) throw ParseError(line_no, "expected 'name : value'");
    auto toks = tokens_of(line.substr(colon + 1));
    if (toks.empty()) throw ParseError(line_no, "missing value after ':'");
    return parse_int(toks[0], line_no);
}

} // namespace

Rational Rational::from_decimal_string(const std::string& text) {
    std::string digits;
    long long den = 1;
    bool seen_dot = false;
    bool any = false;
    for (char c : text) {
        if (c == '.') {
            if (seen_dot) throw std::invalid_argument("bad decimal '" + text + "'");
            seen_dot = true;
        } else if (std::isdigit(static_cast<unsigned char>(c))) {
            digits += c;
            if (seen_dot) den *= 10;
            any = true;
        } else {
            throw std::invalid_argument("bad decimal '" + text + "'");
        }
    }
    if (!any) throw std::invalid_argument("bad decimal '" + text + "'");
    Rational r;
    r.num = digits.empty() ? 0 : std::stoll(digits);
    r.den = den;
    return r;
}

Instance parse_mm(std::istream& in, const std::string& name) {
    Cursor cur;
    std::string line;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        cur.lines.push_back(line);
    }

    seek_line_containing(cur, "jobs (incl. supersource/sink");
    const long long total_jobs = header_value(cur.line(), cur.line_no());
    if (total_jobs < 2) throw ParseError(cur.line_no(), "need at least the two dummy jobs");

    seek_line_containing(cur, "renewable");
    const long long renewable_count = header_value(cur.line(), cur.line_no());
    seek_line_containing(cur, "nonrenewable");
    const long long nonrenewable_count = header_value(cur.line(), cur.line_no());
    seek_line_containing(cur, "doubly constrained");
    if (header_value(cur.line(), cur.line_no()) != 0)
        throw ParseError(cur.line_no(),
                         "doubly constrained resources are not supported by this model");

    Instance inst;
    inst.name = name;
    inst.n = static_cast<int>(total_jobs - 2);
    inst.activities.resize(static_cast<size_t>(total_jobs));
    inst.renewable_caps.assign(static_cast<size_t>(renewable_count), 0);
    inst.nonrenewable_caps.assign(static_cast<size_t>(nonrenewable_count), 0);

    // PRECEDENCE RELATIONS: jobnr. #modes #successors successors...
    seek_line_containing(cur, "PRECEDENCE RELATIONS");
    ++cur.pos; // column header line
    ++cur.pos;
    std::vector<int> declared_modes(static_cast<size_t>(total_jobs), 0);
    for (long long row = 0; row < total_jobs; ++row) {
        if (cur.done()) throw ParseError(static_cast<int>(cur.lines.size()),
                                         "precedence table ended early");
        auto toks = tokens_of(cur.line());
        if (toks.size() < 3) throw ParseError(cur.line_no(), "malformed precedence row");
        const int line_no = cur.line_no();
        long long job = parse_int(toks[0], line_no);
        long long modes = parse_int(toks[1], line_no);
        long long succ_count = parse_int(toks[2], line_no);
        if (job != row + 1)
            throw ParseError(line_no, "expected job " + std::to_string(row + 1) + ", found " +
                                          std::to_string(job));
        if (modes < 1) throw ParseError(line_no, "job must have at least one mode");
        declared_modes[static_cast<size_t>(row)] = static_cast<int>(modes);
        std::vector<std::string> tail(toks.begin() + 3, toks.end());
        for (long long s : read_ints(cur, tail, static_cast<size_t>(succ_count))) {
            if (s < 1 || s > total_jobs)
                throw ParseError(cur.line_no(), "successor out of range: " + std::to_string(s));
            inst.precedences.emplace_back(static_cast<int>(job - 1), static_cast<int>(s - 1));
        }
        ++cur.pos;
    }

    // REQUESTS/DURATIONS: column header fixes the renewable/nonrenewable order.
    seek_line_containing(cur, "REQUESTS/DURATIONS");
    auto header_toks = tokens_of(cur.line());
    std::vector<char> column_kind; // 'R' or 'N', in file order
    for (size_t t = 0; t < header_toks.size(); ++t) {
        if (header_toks[t] == "R" || header_toks[t] == "N" || header_toks[t] == "D") {
            if (header_toks[t] == "D")
                throw ParseError(cur.line_no(), "doubly constrained resource column");
            column_kind.push_back(header_toks[t][0]);
        }
    }
    if (column_kind.empty()) {
        ++cur.pos; // some files put the column header on the next line
        for (const std::string& tok : tokens_of(cur.line()))
            if (tok == "R" || tok == "N") column_kind.push_back(tok[0]);
    }
    if (static_cast<long long>(std::count(column_kind.begin(), column_kind.end(), 'R')) !=
            renewable_count ||
        static_cast<long long>(std::count(column_kind.begin(), column_kind.end(), 'N')) !=
            nonrenewable_count)
        throw ParseError(cur.line_no(), "request table columns disagree with RESOURCES section");
    ++cur.pos;
    while (!cur.done() && (tokens_of(cur.line()).empty() || contains(cur.line(), "---")))
        ++cur.pos;

    long long current_job = 0;
    while (current_job < total_jobs) {
        if (cur.done())
            throw ParseError(static_cast<int>(cur.lines.size()), "request table ended early");
        auto toks = tokens_of(cur.line());
        if (toks.empty()) {
            ++cur.pos;
            continue;
        }
        const int line_no = cur.line_no();
        const size_t res_cols = column_kind.size();
        long long job, mode_no;
        size_t first_value;
        if (toks.size() == res_cols + 3) {
            job = parse_int(toks[0], line_no);
            mode_no = parse_int(toks[1], line_no);
            first_value = 2;
        } else if (toks.size() == res_cols + 2) {
            job = current_job;
            mode_no = parse_int(toks[0], line_no);
            first_value = 1;
        } else {
            throw ParseError(line_no, "malformed request/duration row");
        }
        if (job < 1 || job > total_jobs)
            throw ParseError(line_no, "job number out of range: " + std::to_string(job));
        if (job != current_job && job != current_job + 1)
            throw ParseError(line_no, "request rows out of order at job " + std::to_string(job));
        current_job = job;
        Activity& act = inst.activities[static_cast<size_t>(job - 1)];
        if (mode_no != static_cast<long long>(act.modes.size()) + 1)
            throw ParseError(line_no, "mode numbers must be consecutive from 1");

        Mode mode;
        mode.nominal_duration = parse_int(toks[first_value], line_no);
        mode.renewable_req.assign(static_cast<size_t>(renewable_count), 0);
        mode.nonrenewable_req.assign(static_cast<size_t>(nonrenewable_count), 0);
        size_t r_at = 0, n_at = 0;
        for (size_t k = 0; k < res_cols; ++k) {
            long long value = parse_int(toks[first_value + 1 + k], line_no);
            if (column_kind[k] == 'R')
                mode.renewable_req[r_at++] = static_cast<int>(value);
            else
                mode.nonrenewable_req[n_at++] = static_cast<int>(value);
        }
        act.modes.push_back(std::move(mode));
        ++cur.pos;
        if (job == total_jobs &&
            static_cast<int>(act.modes.size()) == declared_modes[static_cast<size_t>(job - 1)])
            break;
    }
    for (long long j = 0; j < total_jobs; ++j)
        if (static_cast<int>(inst.activities[static_cast<size_t>(j)].modes.size()) !=
            declared_modes[static_cast<size_t>(j)])
            throw ParseError(cur.line_no(), "job " + std::to_string(j + 1) +
                                                " mode count disagrees between sections");

    seek_line_containing(cur, "RESOURCEAVAILABILITIES");
    ++cur.pos; // marker header row
    std::vector<char> avail_kind;
    for (const std::string& tok : tokens_of(cur.line()))
        if (tok == "R" || tok == "N" || tok == "D") avail_kind.push_back(tok[0]);
    if (avail_kind.size() != column_kind.size()) avail_kind = column_kind;
    ++cur.pos;
    if (cur.done()) throw ParseError(static_cast<int>(cur.lines.size()),
                                     "missing resource availability values");
    {
        auto values = read_ints(cur, tokens_of(cur.line()), avail_kind.size());
        size_t r_at = 0, n_at = 0;
        for (size_t k = 0; k < avail_kind.size(); ++k) {
            if (avail_kind[k] == 'R')
                inst.renewable_caps[r_at++] = static_cast<int>(values[k]);
            else
                inst.nonrenewable_caps[n_at++] = static_cast<int>(values[k]);
        }
    }
    return inst;
}

Instance parse_mm_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open " + path);
    return parse_mm(in, std::filesystem::path(path).stem().string());
}

std::string write_mm(const Instance& inst) {
    std::ostringstream out;
    const int total_jobs = inst.num_activities();
    out << "************************************************************************\n";
    out << "projects                      :  1\n";
    out << "jobs (incl. supersource/sink ):  " << total_jobs << "\n";
    out << "horizon                       :  " << upper_bound_N(inst) << "\n";
    out << "RESOURCES\n";
    out << "  - renewable                 :  " << inst.num_renewable() << "   R\n";
    out << "  - nonrenewable              :  " << inst.num_nonrenewable() << "   N\n";
    out << "  - doubly constrained        :  0   D\n";
    out << "************************************************************************\n";
    out << "PRECEDENCE RELATIONS:\n";
    out << "jobnr.    #modes  #successors   successors\n";
    std::vector<std::vector<int>> succ(static_cast<size_t>(total_jobs));
    for (auto [i, j] : inst.precedences) succ[static_cast<size_t>(i)].push_back(j);
    for (auto& s : succ) std::sort(s.begin(), s.end());
    for (int j = 0; j < total_jobs; ++j) {
        out << "  " << j + 1 << "  "
            << inst.activities[static_cast<size_t>(j)].modes.size() << "  "
            << succ[static_cast<size_t>(j)].size() << "  ";
        for (int s : succ[static_cast<size_t>(j)]) out << ' ' << s + 1;
        out << '\n';
    }
    out << "************************************************************************\n";
    out << "REQUESTS/DURATIONS:\n";
    out << "jobnr. mode duration";
    for (int k = 0; k < inst.num_renewable(); ++k) out << "  R " << k + 1;
    for (int k = 0; k < inst.num_nonrenewable(); ++k) out << "  N " << k + 1;
    out << "\n------------------------------------------------------------------------\n";
    for (int j = 0; j < total_jobs; ++j) {
        const Activity& act = inst.activities[static_cast<size_t>(j)];
        for (size_t m = 0; m < act.modes.size(); ++m) {
            if (m == 0)
                out << "  " << j + 1 << "  " << m + 1;
            else
                out << "     " << m + 1;
            const Mode& mode = act.modes[m];
            out << "  " << mode.nominal_duration;
            for (int r : mode.renewable_req) out << "  " << r;
            for (int r : mode.nonrenewable_req) out << "  " << r;
            out << '\n';
        }
    }
    out << "************************************************************************\n";
    out << "RESOURCEAVAILABILITIES:\n";
    out << ' ';
    for (int k = 0; k < inst.num_renewable(); ++k) out << "  R " << k + 1;
    for (int k = 0; k < inst.num_nonrenewable(); ++k) out << "  N " << k + 1;
    out << "\n ";
    for (int cap : inst.renewable_caps) out << "  " << cap;
    for (int cap : inst.nonrenewable_caps) out << "  " << cap;
    out << "\n************************************************************************\n";
    return out.str();
}

Instance apply_deviation_rule(const Instance& inst, const Rational& factor) {
    if (factor.num < 0 || factor.den <= 0)
        throw std::invalid_argument("deviation factor must be nonnegative");
    Instance out = inst;
    for (int i = 1; i <= out.n; ++i)
        for (Mode& mode : out.activities[static_cast<size_t>(i)].modes)
            mode.max_deviation = factor.floor_times(mode.nominal_duration);
    return out;
}

namespace {

bool wildcard_match(const std::string& pattern, const std::string& text) {
    size_t p = 0, t = 0, star = std::string::npos, mark = 0;
    while (t < text.size()) {
        if (p < pattern.size() && (pattern[p] == '?' || pattern[p] == text[t])) {
            ++p;
            ++t;
        } else if (p < pattern.size() && pattern[p] == '*') {
            star = p++;
            mark = t;
        } else if (star != std::string::npos) {
            p = star + 1;
            t = ++mark;
        } else {
            return false;
        }
    }
    while (p < pattern.size() && pattern[p] == '*') ++p;
    return p == pattern.size();
}

} // namespace

InstanceSet load_instance_set(const std::string& directory, const std::string& pattern) {
    namespace fs = std::filesystem;
    if (!fs::is_directory(directory))
        throw std::runtime_error("not a readable directory: " + directory);
    std::vector<std::string> names;
    for (const auto& entry : fs::directory_iterator(directory)) {
        if (!entry.is_regular_file()) continue;
        std::string name = entry.path().filename().string();
        if (wildcard_match(pattern, name)) names.push_back(name);
    }
    std::sort(names.begin(), names.end());
    InstanceSet set;
    for (const std::string& name : names) {
        try {
            set.instances.emplace_back(name, parse_mm_file((fs::path(directory) / name).string()));
        } catch (const std::exception& err) {
            set.failures.emplace_back(name, err.what());
        }
    }
    return set;
}

std::string instance_to_canonical_json(const Instance& inst) {
    nlohmann::ordered_json j;
    j["name"] = inst.name;
    j["n"] = inst.n;
    j["renewable_caps"] = inst.renewable_caps;
    j["nonrenewable_caps"] = inst.nonrenewable_caps;
    auto precedences = inst.precedences;
    std::sort(precedences.begin(), precedences.end());
    j["precedences"] = nlohmann::ordered_json::array();
    for (auto [a, b] : precedences) j["precedences"].push_back({a, b});
    j["activities"] = nlohmann::ordered_json::array();
    for (const Activity& act : inst.activities) {
        nlohmann::ordered_json ja;
        ja["modes"] = nlohmann::ordered_json::array();
        for (const Mode& mode : act.modes) {
            nlohmann::ordered_json jm;
            jm["nominal_duration"] = mode.nominal_duration;
            jm["max_deviation"] = mode.max_deviation;
            jm["renewable_req"] = mode.renewable_req;
            jm["nonrenewable_req"] = mode.nonrenewable_req;
            ja["modes"].push_back(std::move(jm));
        }
        j["activities"].push_back(std::move(ja));
    }
    return j.dump(2) + "\n";
}

} // namespace rmrcpsp
