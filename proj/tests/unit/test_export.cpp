#include <gtest/gtest.h>

#include <nlohmann/json.hpp>
#include <numbers>
#include <sstream>

#include "gelfand/errors.hpp"
#include "gelfand/export.hpp"

using namespace gelfand;

TEST(Export, NumberFormat) {
    EXPECT_EQ(format_number(1.0 / 3.0), "0.333333333333");
    EXPECT_EQ(format_number(0.0), "0");
    EXPECT_EQ(format_number(2.0), "2");
    EXPECT_EQ(format_number(1e-20), "1e-20");
}

TEST(Export, DiagramCsvAndJson) {
    SweepOptions o;
    o.spectral_intervals = 128;
    const auto d = sweep_branch(2, 3.0, 7, o);
    std::ostringstream csv, csv2, js;
    write_diagram_csv(csv, d);
    write_diagram_csv(csv2, d);
    EXPECT_EQ(csv.str(), csv2.str());
    EXPECT_EQ(csv.str().rfind("a,lambda,mu1,index,stable\n", 0), 0u);
    std::size_t rows = 0;
    for (char c : csv.str()) rows += c == '\n';
    EXPECT_EQ(rows, 8u);
    write_diagram_json(js, d);
    const auto j = nlohmann::json::parse(js.str());
    EXPECT_EQ(j["m"], 2);
    EXPECT_EQ(j["points"].size(), 7u);
    EXPECT_NEAR(j["points"][6]["lambda"].get<double>(), d.points[6].lambda, 1e-11 * d.points[6].lambda);
}

TEST(Export, SpectrumAndResonanceJson) {
    std::ostringstream s;
    write_spectrum_json(s, full_spectrum(2, zero_potential(RadialGrid::uniform(128)), 4));
    const auto j = nlohmann::json::parse(s.str());
    EXPECT_EQ(j["count"], 4);
    EXPECT_EQ(j["merged"].size(), 4u);
    EXPECT_EQ(j["modes"][1]["multiplicity"], 2);

    const std::vector<double> mu{-1.0}, eps{0.1, 0.05};
    const auto rep = resonance_report(mu, 2.0 * std::numbers::pi, eps, 3, 0.02);
    std::ostringstream rj, rc;
    write_resonance_json(rj, rep);
    write_resonance_csv(rc, rep);
    const auto r = nlohmann::json::parse(rj.str());
    EXPECT_EQ(r["sweep"].size(), 2u);
    EXPECT_EQ(r["nonresonant"][0]["exponent"], 3);
    EXPECT_EQ(rc.str().rfind("eps,delta,index\n", 0), 0u);
}

TEST(Export, FieldBinaryRoundTrip) {
    const auto g = TubeGrid::make(CircleGeometry::circle(2.0, 2), 0.1, 4, 3, 8);
    TubeField f = TubeField::zeros(g);
    for (std::size_t i = 0; i < f.values.size(); ++i) f.values[i] = std::sin(0.1 * static_cast<double>(i));
    std::stringstream bin;
    write_field_binary(bin, f);
    EXPECT_EQ(bin.str().substr(0, 4), "GTUB");
    EXPECT_EQ(bin.str().size(), 4 + 5 * 4 + 3 * 8 + f.values.size() * 8);
    const auto back = read_field_binary(bin);
    EXPECT_EQ(back.values, f.values);
    EXPECT_EQ(back.grid.n2, 8u);
    EXPECT_DOUBLE_EQ(back.grid.geometry.curvature, 0.5);

    std::stringstream bad("XXXX");
    EXPECT_THROW(read_field_binary(bad), InvalidArgument);

    std::ostringstream csv;
    write_field_csv(csv, f);
    EXPECT_EQ(csv.str().rfind("t,z1,z2,value\n", 0), 0u);
}
