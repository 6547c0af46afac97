#pragma once

#include <iosfwd>
#include <string>

#include "phc/config.hpp"
#include "phc/contrast.hpp"

namespace phc {

/// Library version string.
const char* version();

/// 17 significant digits, enough to round-trip a double.
std::string format_double(double x);

/// '#'-prefixed run header: tool version, command, seed and every resolved
/// configuration key. Contains no timestamps so identical runs produce
/// identical files.
void write_metadata(std::ostream& out, const ConfigLayers& layers,
                    const std::string& command);

/// Header block of scalar results followed by a "k,omega,term" table.
void write_report(std::ostream& out, const ContrastReport& report);

}  // namespace phc
