#include "gelfand/export.hpp"

#include <algorithm>
#include <bit>
#include <cstdio>
#include <cmath>
#include <cstring>
#include <istream>
#include <limits>
#include <ostream>

#include <nlohmann/json.hpp>

#include "gelfand/errors.hpp"

namespace gelfand {

namespace {

using nlohmann::ordered_json;

// nlohmann prints doubles at full precision; route values through 12-digit text first.
ordered_json num(double x) {
    if (!std::isfinite(x)) return nullptr;
    return ordered_json::parse(format_number(x));
}

ordered_json nums(const std::vector<double>& xs) {
    ordered_json a = ordered_json::array();
    for (double x : xs) a.push_back(num(x));
    return a;
}

template <typename T>
void put(std::ostream& os, T value) {
    static_assert(std::endian::native == std::endian::little || std::endian::native == std::endian::big);
    unsigned char bytes[sizeof(T)];
    std::memcpy(bytes, &value, sizeof(T));
    if constexpr (std::endian::native == std::endian::big) std::reverse(bytes, bytes + sizeof(T));
    os.write(reinterpret_cast<const char*>(bytes), sizeof(T));
}

template <typename T>
T get(std::istream& is) {
    unsigned char bytes[sizeof(T)];
    if (!is.read(reinterpret_cast<char*>(bytes), sizeof(T))) throw InvalidArgument("binary field: truncated input");
    if constexpr (std::endian::native == std::endian::big) std::reverse(bytes, bytes + sizeof(T));
    T value;
    std::memcpy(&value, bytes, sizeof(T));
    return value;
}

}  // namespace

std::string format_number(double x) {
    if (std::isnan(x)) return "nan";
    if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
    if (x == 0.0) return "0";
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.12g", x);
    return buf;
}

void write_diagram_csv(std::ostream& os, const BifurcationDiagram& d) {
    os << "a,lambda,mu1,index,stable\n";
    for (const auto& p : d.points)
        os << format_number(p.a) << ',' << format_number(p.lambda) << ',' << format_number(p.mu1) << ',' << p.index << ','
           << (p.stable ? 1 : 0) << '\n';
}

void write_diagram_json(std::ostream& os, const BifurcationDiagram& d) {
    ordered_json j;
    j["m"] = d.m;
    j["a_max"] = num(d.a_max);
    j["lambda_star"] = num(d.lambda_star);
    j["level_crossings"] = d.level_crossings;
    ordered_json folds = ordered_json::array();
    for (const auto& f : d.folds) folds.push_back({{"a", num(f.a)}, {"lambda", num(f.lambda)}, {"maximum", f.maximum}});
    j["folds"] = folds;
    ordered_json pts = ordered_json::array();
    for (const auto& p : d.points)
        pts.push_back({{"a", num(p.a)}, {"lambda", num(p.lambda)}, {"mu1", num(p.mu1)}, {"index", p.index}, {"stable", p.stable}});
    j["points"] = pts;
    os << j.dump(2) << '\n';
}

void write_spectrum_json(std::ostream& os, const LinearizedSpectrum& s) {
    ordered_json j;
    j["m"] = s.m;
    j["count"] = s.count;
    ordered_json modes = ordered_json::array();
    for (const auto& mode : s.modes)
        modes.push_back({{"l", mode.l}, {"multiplicity", mode.multiplicity}, {"eigenvalues", nums(mode.eigenvalues)}});
    j["modes"] = modes;
    j["merged"] = nums(s.merged);
    os << j.dump(2) << '\n';
}

void write_resonance_json(std::ostream& os, const ResonanceReport& r) {
    ordered_json j;
    j["mu1"] = num(r.mu1);
    j["length"] = num(r.length);
    j["exponent"] = r.exponent;
    j["resonant"] = nums(r.resonant);
    ordered_json sweep = ordered_json::array();
    for (const auto& row : r.sweep) sweep.push_back({{"eps", num(row.eps)}, {"delta", num(row.delta)}, {"index", row.index}});
    j["sweep"] = sweep;
    ordered_json sets = ordered_json::array();
    for (const auto& a : r.nonresonant) {
        ordered_json iv = ordered_json::array();
        for (const auto& [lo, hi] : a.intervals) iv.push_back({num(lo), num(hi)});
        sets.push_back({{"eps", num(a.eps)},
                        {"exponent", a.exponent},
                        {"measure", num(a.measure)},
                        {"deficiency", num(a.deficiency)},
                        {"intervals", iv},
                        {"excluded_centres", nums(a.excluded_centres)}});
    }
    j["nonresonant"] = sets;
    os << j.dump(2) << '\n';
}

void write_resonance_csv(std::ostream& os, const ResonanceReport& r) {
    os << "eps,delta,index\n";
    for (const auto& row : r.sweep) os << format_number(row.eps) << ',' << format_number(row.delta) << ',' << row.index << '\n';
}

void write_field_csv(std::ostream& os, const TubeField& field) {
    const TubeGrid& g = field.grid;
    const std::size_t nf = g.fiber_size();
    os << (g.m() == 1 ? "t,z1,value\n" : "t,z1,z2,value\n");
    for (std::size_t j = 0; j < g.n_t; ++j)
        for (std::size_t f = 0; f < nf; ++f) {
            os << format_number(g.t(j)) << ',' << format_number(g.z1(f)) << ',';
            if (g.m() == 2) os << format_number(g.z2(f)) << ',';
            os << format_number(field.values[j * nf + f]) << '\n';
        }
}

void write_field_binary(std::ostream& os, const TubeField& field) {
    const TubeGrid& g = field.grid;
    os.write("GTUB", 4);
    put<std::uint32_t>(os, kFieldFormatVersion);
    put<std::uint32_t>(os, static_cast<std::uint32_t>(g.m()));
    put<std::uint32_t>(os, static_cast<std::uint32_t>(g.n_t));
    put<std::uint32_t>(os, static_cast<std::uint32_t>(g.n1));
    put<std::uint32_t>(os, static_cast<std::uint32_t>(g.n2));
    put<double>(os, g.eps);
    put<double>(os, g.geometry.curvature);
    put<double>(os, g.geometry.length);
    for (double v : field.values) put<double>(os, v);
}

TubeField read_field_binary(std::istream& is) {
    char magic[4];
    if (!is.read(magic, 4) || std::memcmp(magic, "GTUB", 4) != 0) throw InvalidArgument("binary field: bad magic");
    const auto version = get<std::uint32_t>(is);
    if (version != kFieldFormatVersion) throw InvalidArgument("binary field: unsupported version " + std::to_string(version));
    const auto m = get<std::uint32_t>(is);
    const auto nt = get<std::uint32_t>(is);
    const auto n1 = get<std::uint32_t>(is);
    const auto n2 = get<std::uint32_t>(is);
    const double eps = get<double>(is);
    const double kappa = get<double>(is);
    const double length = get<double>(is);
    if (m != 1 && m != 2) throw InvalidArgument("binary field: fiber dimension must be 1 or 2");
    const CircleGeometry geom = kappa > 0.0 ? CircleGeometry::circle(1.0 / kappa, static_cast<int>(m))
                                            : CircleGeometry::flat(length, static_cast<int>(m));
    TubeField f;
    f.grid = TubeGrid::make(geom, eps, nt, n1, n2);
    f.values.resize(f.grid.size());
    for (auto& v : f.values) v = get<double>(is);
    return f;
}

void JsonLinesLog::operator()(std::size_t iter, double increment, double residual) const {
    *os_ << "{\"iter\":" << iter << ",\"increment\":" << format_number(increment) << ",\"residual\":" << format_number(residual)
         << "}\n";
}

}  // namespace gelfand
