#pragma once

#include <cstddef>
#include <limits>
#include <string>
#include <vector>

namespace gelfand::cli {

struct RunConfig {
    std::string subcommand;
    std::string dims_text;
    std::vector<int> dims;
    double lambda = std::numeric_limits<double>::quiet_NaN();
    int branch = 0;  // 0: command default (lower branch, or the first unstable one)
    std::vector<double> eps;
    double radius = 1.0;
    bool flat = false;
    double amax = 40.0;
    std::size_t grid = 0;    // command specific; 0 picks the default
    std::size_t nt = 0;
    std::size_t ntheta = 0;
    std::size_t count = 8;
    int exponent = 3;
    double eps_min = 1e-3;
    double tol = 1e-10;
    unsigned threads = 0;
    std::string out;
    std::string format = "csv";
    std::string field_out;
    std::string log_out;
};

/// "1..12", "2", "1,3,5" or a mix such as "1,4..6".
std::vector<int> parse_dims(const std::string& text);

/// Throws gelfand::InvalidArgument naming the offending field.
void validate(RunConfig& cfg);

int run(const RunConfig& cfg);

}  // namespace gelfand::cli
