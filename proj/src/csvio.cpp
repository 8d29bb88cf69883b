#include "timepar/csvio.hpp"

#include "timepar/errors.hpp"

#include <cerrno>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

namespace timepar {

std::string format_double(double v, bool hex) {
    char buf[64];
    const int len = std::snprintf(buf, sizeof buf, hex ? "%a" : "%.17g", v);
    if (len < 0 || std::size_t(len) >= sizeof buf)
        throw std::runtime_error("failed to format a double");
    return std::string(buf, std::size_t(len));
}

double parse_double(const std::string& text) {
    if (text.empty())
        throw config_error("empty numeric field");
    errno = 0;
    char* end = nullptr;
    const double v = std::strtod(text.c_str(), &end);
    if (end != text.c_str() + text.size())
        throw config_error("malformed numeric field '" + text + "'");
    if (errno == ERANGE && (v == HUGE_VAL || v == -HUGE_VAL))
        throw config_error("numeric field out of range '" + text + "'");
    return v;
}

namespace {

std::size_t parse_count(const std::string& text) {
    if (text.empty())
        throw config_error("empty count field");
    errno = 0;
    char* end = nullptr;
    const unsigned long long v = std::strtoull(text.c_str(), &end, 10);
    if (end != text.c_str() + text.size() || errno == ERANGE)
        throw config_error("malformed count field '" + text + "'");
    return std::size_t(v);
}

std::vector<std::string> split_fields(const std::string& line) {
    std::vector<std::string> fields;
    std::size_t start = 0;
    while (true) {
        const std::size_t comma = line.find(',', start);
        if (comma == std::string::npos) {
            fields.push_back(line.substr(start));
            break;
        }
        fields.push_back(line.substr(start, comma - start));
        start = comma + 1;
    }
    return fields;
}

// Data lines of a CSV file: comment lines (#) and blank lines skipped,
// trailing carriage returns stripped.
std::vector<std::string> read_lines(const std::string& path) {
    std::ifstream in(path);
    if (!in)
        throw std::runtime_error("cannot open '" + path + "' for reading");
    std::vector<std::string> lines;
    std::string line;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty() || line.front() == '#') continue;
        lines.push_back(line);
    }
    return lines;
}

}  // namespace

void write_text_atomic(const std::string& path, const std::string& content) {
    namespace fs = std::filesystem;
    const fs::path target(path);
    fs::path tmp = target;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out)
            throw std::runtime_error("cannot open '" + tmp.string() + "' for writing");
        out << content;
        out.flush();
        if (!out)
            throw std::runtime_error("failed writing '" + tmp.string() + "'");
    }
    std::error_code ec;
    fs::rename(tmp, target, ec);
    if (ec) {
        fs::remove(tmp);
        throw std::runtime_error("cannot rename '" + tmp.string() + "' to '" + path +
                                 "': " + ec.message());
    }
}

void write_trajectory_csv(const std::string& path, const Trajectory& traj, bool hex) {
    std::ostringstream out;
    const std::size_t r = traj.states.empty() ? 1 : traj.states.front().dof();
    if (r == 1) {
        out << "t,p,q,energy\n";
    } else {
        out << "t";
        for (std::size_t l = 0; l < r; ++l) out << ",p" << l;
        for (std::size_t l = 0; l < r; ++l) out << ",q" << l;
        out << ",energy\n";
    }
    for (std::size_t i = 0; i < traj.states.size(); ++i) {
        const State& y = traj.states[i];
        out << format_double(y.t, hex);
        for (double v : y.p) out << ',' << format_double(v, hex);
        for (double v : y.q) out << ',' << format_double(v, hex);
        out << ',' << format_double(traj.energies.at(i), hex) << '\n';
    }
    write_text_atomic(path, out.str());
}

Trajectory read_trajectory_csv(const std::string& path) {
    const std::vector<std::string> lines = read_lines(path);
    if (lines.empty())
        throw config_error("trajectory file '" + path + "' has no header");
    const std::size_t cols = split_fields(lines.front()).size();
    if (cols < 4 || cols % 2 != 0)
        throw config_error("trajectory file '" + path + "' has a malformed header");
    const std::size_t r = (cols - 2) / 2;

    Trajectory traj;
    for (std::size_t i = 1; i < lines.size(); ++i) {
        const std::vector<std::string> fields = split_fields(lines[i]);
        if (fields.size() != cols)
            throw config_error("trajectory row with " + std::to_string(fields.size()) +
                               " fields, expected " + std::to_string(cols));
        State y;
        y.t = parse_double(fields[0]);
        y.p.reserve(r);
        y.q.reserve(r);
        for (std::size_t l = 0; l < r; ++l) y.p.push_back(parse_double(fields[1 + l]));
        for (std::size_t l = 0; l < r; ++l) y.q.push_back(parse_double(fields[1 + r + l]));
        traj.states.push_back(std::move(y));
        traj.energies.push_back(parse_double(fields[1 + 2 * r]));
    }
    if (!traj.states.empty()) traj.t0 = traj.states.front().t;
    return traj;
}

void write_iteration_log_csv(const std::string& path,
                             const std::vector<IterationRecord>& log, bool hex) {
    std::ostringstream out;
    out << "iter,frontier,conv,max_correction\n";
    for (const IterationRecord& rec : log)
        out << rec.iteration << ',' << rec.frontier << ',' << rec.converged << ','
            << format_double(rec.max_correction, hex) << '\n';
    write_text_atomic(path, out.str());
}

std::vector<IterationRecord> read_iteration_log_csv(const std::string& path) {
    const std::vector<std::string> lines = read_lines(path);
    if (lines.empty())
        throw config_error("iteration log '" + path + "' has no header");
    std::vector<IterationRecord> log;
    for (std::size_t i = 1; i < lines.size(); ++i) {
        const std::vector<std::string> fields = split_fields(lines[i]);
        if (fields.size() != 4)
            throw config_error("iteration log row needs 4 fields");
        IterationRecord rec;
        rec.iteration = parse_count(fields[0]);
        rec.frontier = parse_count(fields[1]);
        rec.converged = parse_count(fields[2]);
        rec.max_correction = parse_double(fields[3]);
        log.push_back(rec);
    }
    return log;
}

void write_sweep_csv(const std::string& path, const std::vector<SweepRow>& rows, bool hex) {
    std::ostringstream out;
    out << "P,C_dt,I_dtP,k_dtP\n";
    for (const SweepRow& row : rows)
        out << row.window << ',' << format_double(row.mean_converged, hex) << ','
            << format_double(row.cost_factor, hex) << ',' << row.iterations << '\n';
    write_text_atomic(path, out.str());
}

std::vector<SweepRow> read_sweep_csv(const std::string& path) {
    const std::vector<std::string> lines = read_lines(path);
    if (lines.empty())
        throw config_error("sweep file '" + path + "' has no header");
    std::vector<SweepRow> rows;
    for (std::size_t i = 1; i < lines.size(); ++i) {
        const std::vector<std::string> fields = split_fields(lines[i]);
        if (fields.size() != 4)
            throw config_error("sweep row needs 4 fields");
        SweepRow row;
        row.window = parse_count(fields[0]);
        row.mean_converged = parse_double(fields[1]);
        row.cost_factor = parse_double(fields[2]);
        row.iterations = parse_count(fields[3]);
        rows.push_back(row);
    }
    return rows;
}

void write_speedup_csv(const std::string& path,
                       const std::vector<std::pair<std::size_t, double>>& curve,
                       bool hex) {
    std::ostringstream out;
    out << "P,S\n";
    for (const auto& [p, s] : curve)
        out << p << ',' << format_double(s, hex) << '\n';
    write_text_atomic(path, out.str());
}

void write_summary(const std::string& path,
                   const std::vector<std::pair<std::string, std::string>>& entries) {
    std::ostringstream out;
    for (const auto& [key, value] : entries) out << key << '=' << value << '\n';
    write_text_atomic(path, out.str());
}

}  // namespace timepar
