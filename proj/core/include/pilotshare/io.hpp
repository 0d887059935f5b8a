#pragma once

#include <iosfwd>
#include <string>

#include "pilotshare/game.hpp"
#include "pilotshare/geometry.hpp"
#include "pilotshare/partition.hpp"
#include "pilotshare/propagation.hpp"

namespace pilotshare {

// Plain-text, full-precision formats so runs can be replayed and diffed.
// Lines starting with '#' are comments. Readers throw std::runtime_error on
// malformed input.

void write_deployment(std::ostream& os, const Deployment& dep);
Deployment read_deployment(std::istream& is);

void write_propagation(std::ostream& os, const PropagationTable& table);
PropagationTable read_propagation(std::istream& is);

void write_structure(std::ostream& os, const CoalitionStructure& c);
CoalitionStructure read_structure(std::istream& is);

/// One deviation per line, with initial/final structures, eta and budgets, so
/// a trace can be replayed and re-certified offline.
void write_trace(std::ostream& os, const FormationTrace& trace);
FormationTrace read_trace(std::istream& is);

// Path-based convenience wrappers.
void save_deployment(const std::string& path, const Deployment& dep);
Deployment load_deployment(const std::string& path);
void save_propagation(const std::string& path, const PropagationTable& table);
PropagationTable load_propagation(const std::string& path);
void save_structure(const std::string& path, const CoalitionStructure& c);
CoalitionStructure load_structure(const std::string& path);
void save_trace(const std::string& path, const FormationTrace& trace);
FormationTrace load_trace(const std::string& path);

/// "%.17g" — shortest text form that round-trips a double exactly.
std::string format_double(double v);

} // namespace pilotshare
