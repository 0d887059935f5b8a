#include "pilotshare/io.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace pilotshare {

std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

namespace {

[[noreturn]] void fail(const std::string& what) {
    throw std::runtime_error("parse error: " + what);
}

// Next non-empty, non-comment line; false at EOF.
bool next_line(std::istream& is, std::string& line) {
    while (std::getline(is, line)) {
        const auto pos = line.find_first_not_of(" \t\r");
        if (pos == std::string::npos) continue;
        if (line[pos] == '#') continue;
        if (pos > 0) line.erase(0, pos);
        while (!line.empty() && (line.back() == '\r' || line.back() == ' '))
            line.pop_back();
        return true;
    }
    return false;
}

// Expects "key rest..." and returns rest.
std::string expect_key(std::istream& is, const std::string& key) {
    std::string line;
    if (!next_line(is, line)) fail("missing '" + key + "' line");
    std::istringstream ls(line);
    std::string head;
    ls >> head;
    if (head != key) fail("expected '" + key + "', found '" + head + "'");
    std::string rest;
    std::getline(ls, rest);
    const auto pos = rest.find_first_not_of(" \t");
    return pos == std::string::npos ? std::string() : rest.substr(pos);
}

double parse_double(const std::string& s) { return std::stod(s); }

std::vector<int> parse_ints(const std::string& s) {
    std::vector<int> out;
    std::istringstream ls(s);
    int v;
    while (ls >> v) out.push_back(v);
    return out;
}

std::string join_labels(const std::vector<int>& labels) {
    std::string out;
    for (std::size_t i = 0; i < labels.size(); ++i) {
        if (i) out += ' ';
        out += std::to_string(labels[i]);
    }
    return out;
}

std::string join_cells(const std::vector<std::size_t>& cells) {
    if (cells.empty()) return "-";
    std::string out;
    for (std::size_t i = 0; i < cells.size(); ++i) {
        if (i) out += ',';
        out += std::to_string(cells[i]);
    }
    return out;
}

std::vector<std::size_t> split_cells(const std::string& s) {
    std::vector<std::size_t> out;
    if (s == "-") return out;
    std::istringstream ls(s);
    std::string tok;
    while (std::getline(ls, tok, ',')) out.push_back(std::stoull(tok));
    return out;
}

} // namespace

void write_deployment(std::ostream& os, const Deployment& dep) {
    os << "# pilotshare deployment v1\n";
    os << "side " << format_double(dep.side) << "\n";
    os << "alpha " << format_double(dep.alpha) << "\n";
    os << "min_dist " << format_double(dep.min_dist) << "\n";
    for (const Point& p : dep.bs_positions)
        os << format_double(p.x) << " " << format_double(p.y) << "\n";
}

Deployment read_deployment(std::istream& is) {
    Deployment dep;
    dep.side = parse_double(expect_key(is, "side"));
    dep.alpha = parse_double(expect_key(is, "alpha"));
    dep.min_dist = parse_double(expect_key(is, "min_dist"));
    std::string line;
    while (next_line(is, line)) {
        std::istringstream ls(line);
        Point p;
        if (!(ls >> p.x >> p.y)) fail("bad BS position line: " + line);
        dep.bs_positions.push_back(p);
    }
    dep.validate();
    return dep;
}

void write_propagation(std::ostream& os, const PropagationTable& table) {
    os << "# pilotshare propagation table v1\n";
    os << "cells " << table.cells << "\n";
    os << "samples_per_cell " << table.samples_per_cell << "\n";
    os << "seed " << table.seed << "\n";
    char hex[32];
    std::snprintf(hex, sizeof hex, "%016llx",
                  static_cast<unsigned long long>(table.source_hash));
    os << "deployment_hash " << hex << "\n";
    for (const char* name : {"mu1", "mu2"}) {
        os << name << "\n";
        const std::vector<double>& m =
            name[2] == '1' ? table.mu1 : table.mu2;
        for (std::size_t j = 0; j < table.cells; ++j) {
            for (std::size_t l = 0; l < table.cells; ++l) {
                if (l) os << " ";
                os << format_double(m[j * table.cells + l]);
            }
            os << "\n";
        }
    }
}

PropagationTable read_propagation(std::istream& is) {
    PropagationTable t;
    t.cells = std::stoull(expect_key(is, "cells"));
    t.samples_per_cell = std::stoull(expect_key(is, "samples_per_cell"));
    t.seed = std::stoull(expect_key(is, "seed"));
    t.source_hash = std::stoull(expect_key(is, "deployment_hash"), nullptr, 16);
    for (const char* name : {"mu1", "mu2"}) {
        expect_key(is, name);
        std::vector<double>& m = name[2] == '1' ? t.mu1 : t.mu2;
        m.resize(t.cells * t.cells);
        std::string line;
        for (std::size_t j = 0; j < t.cells; ++j) {
            if (!next_line(is, line)) fail("truncated matrix");
            std::istringstream ls(line);
            for (std::size_t l = 0; l < t.cells; ++l) {
                if (!(ls >> m[j * t.cells + l])) fail("short matrix row");
            }
        }
    }
    t.validate();
    return t;
}

void write_structure(std::ostream& os, const CoalitionStructure& c) {
    os << "# pilotshare coalition structure v1\n";
    os << "labels " << join_labels(c.labels()) << "\n";
}

CoalitionStructure read_structure(std::istream& is) {
    return CoalitionStructure(parse_ints(expect_key(is, "labels")));
}

void write_trace(std::ostream& os, const FormationTrace& trace) {
    os << "# pilotshare formation trace v1\n";
    os << "cells " << trace.initial.cells() << "\n";
    os << "initial " << join_labels(trace.initial.labels()) << "\n";
    os << "budgets " << join_labels(trace.budgets) << "\n";
    for (const DeviationEvent& ev : trace.events) {
        os << "deviation t=" << ev.t << " cell=" << ev.cell
           << " source=" << join_cells(ev.source)
           << " target=" << join_cells(ev.target) << "\n";
    }
    os << "final " << join_labels(trace.final_structure.labels()) << "\n";
    os << "eta " << join_labels(trace.eta) << "\n";
    os << "deviations " << trace.deviations << "\n";
    os << "stable " << (trace.stable ? 1 : 0) << "\n";
}

FormationTrace read_trace(std::istream& is) {
    FormationTrace trace;
    expect_key(is, "cells");
    trace.initial = CoalitionStructure(parse_ints(expect_key(is, "initial")));
    trace.budgets = parse_ints(expect_key(is, "budgets"));
    std::string line;
    while (next_line(is, line)) {
        std::istringstream ls(line);
        std::string head;
        ls >> head;
        if (head == "deviation") {
            DeviationEvent ev;
            std::string field;
            while (ls >> field) {
                const auto eq = field.find('=');
                if (eq == std::string::npos) fail("bad deviation field: " + field);
                const std::string key = field.substr(0, eq);
                const std::string val = field.substr(eq + 1);
                if (key == "t") ev.t = std::stoi(val);
                else if (key == "cell") ev.cell = std::stoull(val);
                else if (key == "source") ev.source = split_cells(val);
                else if (key == "target") ev.target = split_cells(val);
                else fail("unknown deviation field: " + key);
            }
            trace.events.push_back(std::move(ev));
        } else if (head == "final") {
            std::string rest;
            std::getline(ls, rest);
            trace.final_structure = CoalitionStructure(parse_ints(rest));
        } else if (head == "eta") {
            std::string rest;
            std::getline(ls, rest);
            trace.eta = parse_ints(rest);
        } else if (head == "deviations") {
            ls >> trace.deviations;
        } else if (head == "stable") {
            int v = 0;
            ls >> v;
            trace.stable = v != 0;
        } else {
            fail("unknown trace line: " + line);
        }
    }
    return trace;
}

namespace {

template <typename T, typename WriteFn>
void save_to(const std::string& path, const T& value, WriteFn fn) {
    std::ofstream os(path);
    if (!os) throw std::runtime_error("cannot open for writing: " + path);
    fn(os, value);
    if (!os) throw std::runtime_error("write failed: " + path);
}

template <typename ReadFn>
auto load_from(const std::string& path, ReadFn fn) {
    std::ifstream is(path);
    if (!is) throw std::runtime_error("cannot open: " + path);
    return fn(is);
}

} // namespace

void save_deployment(const std::string& path, const Deployment& dep) {
    save_to(path, dep, [](std::ostream& os, const Deployment& d) { write_deployment(os, d); });
}
Deployment load_deployment(const std::string& path) {
    return load_from(path, [](std::istream& is) { return read_deployment(is); });
}
void save_propagation(const std::string& path, const PropagationTable& table) {
    save_to(path, table, [](std::ostream& os, const PropagationTable& t) { write_propagation(os, t); });
}
PropagationTable load_propagation(const std::string& path) {
    return load_from(path, [](std::istream& is) { return read_propagation(is); });
}
void save_structure(const std::string& path, const CoalitionStructure& c) {
    save_to(path, c, [](std::ostream& os, const CoalitionStructure& s) { write_structure(os, s); });
}
CoalitionStructure load_structure(const std::string& path) {
    return load_from(path, [](std::istream& is) { return read_structure(is); });
}
void save_trace(const std::string& path, const FormationTrace& trace) {
    save_to(path, trace, [](std::ostream& os, const FormationTrace& t) { write_trace(os, t); });
}
FormationTrace load_trace(const std::string& path) {
    return load_from(path, [](std::istream& is) { return read_trace(is); });
}

} // namespace pilotshare
