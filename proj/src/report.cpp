#include "phc/report.hpp"

#include <ostream>

#include <fmt/format.h>

namespace phc {

const char* version() { return PHC_VERSION; }

std::string format_double(double x) { return fmt::format("{:.17g}", x); }

void write_metadata(std::ostream& out, const ConfigLayers& layers,
                    const std::string& command) {
    out << "# phcontrast " << version() << "\n";
    out << "# command = " << command << "\n";
    layers.echo(out);
}

void write_report(std::ostream& out, const ContrastReport& r) {
    out << "# regime = " << to_string(r.regime) << "\n";
    out << "# spectrum_path = " << to_string(r.spectrum_path) << "\n";
    out << "# prefactor = " << format_double(r.prefactor) << "\n";
    out << "# minus_log_C = " << format_double(r.minus_log_C) << "\n";
    out << "# contrast = " << format_double(r.contrast()) << "\n";
    out << "# estimate = " << format_double(r.estimate_fS) << "\n";
    out << "# estimate_delta_z = " << format_double(r.estimate_delta_z) << "\n";
    for (const auto& [k, v] : r.params_echo) out << "# param." << k << " = " << v << "\n";
    for (const auto& note : r.notes) out << "# note: " << note << "\n";
    out << "k,omega,term\n";
    for (const auto& m : r.per_mode_terms)
        out << m.k << "," << format_double(m.omega) << "," << format_double(m.term) << "\n";
}

}  // namespace phc
