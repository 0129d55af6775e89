#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "gelfand/circle_model.hpp"
#include "gelfand/radial_core.hpp"
#include "gelfand/spectral.hpp"
#include "gelfand/tube_grid.hpp"

namespace gelfand {

/// 12 significant digits; non-finite values as nan/inf.
std::string format_number(double x);

void write_diagram_csv(std::ostream& os, const BifurcationDiagram& d);
void write_diagram_json(std::ostream& os, const BifurcationDiagram& d);

void write_spectrum_json(std::ostream& os, const LinearizedSpectrum& s);

void write_resonance_json(std::ostream& os, const ResonanceReport& r);
void write_resonance_csv(std::ostream& os, const ResonanceReport& r);  // eps,delta,index

/// Header `t,z1,value` (m = 1) or `t,z1,z2,value` (m = 2), one row per node in storage order.
void write_field_csv(std::ostream& os, const TubeField& field);

inline constexpr std::uint32_t kFieldFormatVersion = 1;

/// "GTUB", u32 version, u32 m, u32 N_t, u32 n1, u32 n2, f64 eps, f64 curvature, f64 length,
/// then size() little-endian f64 values, t-major.
void write_field_binary(std::ostream& os, const TubeField& field);
TubeField read_field_binary(std::istream& is);

/// One JSON object per line: {"iter":..,"increment":..,"residual":..}.
class JsonLinesLog {
public:
    explicit JsonLinesLog(std::ostream& os) : os_(&os) {}
    void operator()(std::size_t iter, double increment, double residual) const;

private:
    std::ostream* os_;
};

}  // namespace gelfand
