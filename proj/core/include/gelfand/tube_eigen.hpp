#pragma once

#include <cstddef>
#include <vector>

#include "gelfand/fermi_operator.hpp"

namespace gelfand {

struct TubeEigenOptions {
    double tol = 1e-8;                 // relative eigen-residual for the generic path
    std::size_t max_iterations = 400;  // subspace iterations (generic path)
    bool force_generic = false;        // skip the Fourier block path even when it applies
};

/// Eigenpairs of the pencil (K, M), i.e. of L itself, which is self-adjoint in the
/// h-weighted product. Multiplying by the volume factor (the operator a L) leaves the
/// inertia unchanged, so negative counts are those of either form.
struct TubeEigenResult {
    std::vector<double> values;               // ascending
    std::vector<std::vector<double>> fields;  // M-orthonormal
    std::vector<std::size_t> wavenumbers;     // Fourier mode q in t (block path only)
    bool block_path = true;
    bool slow_convergence = false;            // generic path hit max_iterations
    std::size_t iterations = 0;
};

TubeEigenResult tube_eigs(const FermiOperator& op, std::size_t k, const TubeEigenOptions& opts = {});

/// Number of negative eigenvalues of L (tube Morse index).
std::size_t negative_count(const FermiOperator& op);

}  // namespace gelfand
