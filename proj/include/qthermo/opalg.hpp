#pragma once

// Dense complex operator algebra for N-qubit registers.
//
// Basis convention: qubit 0 is the leftmost tensor factor, so in a
// computational-basis index it is the most significant bit.

#include <Eigen/Dense>

#include <complex>
#include <span>
#include <vector>

namespace qthermo {

using Complex = std::complex<double>;
using OperatorMatrix = Eigen::MatrixXcd;
using RealVector = Eigen::VectorXd;

// Linear map acting on one qubit's 2x2 block, in the row-major basis
// (|0><0|, |0><1|, |1><0|, |1><1|).
using LocalSuperop = Eigen::Matrix4cd;

inline constexpr double kHermitianTol = 1e-10;
inline constexpr double kTraceTol = 1e-10;
inline constexpr double kPsdTol = 1e-10;

// Hermitian, unit-trace, positive semidefinite matrix of dimension 2^N.
class DensityMatrix {
public:
    // Validates every invariant; throws ContractViolation on failure.
    explicit DensityMatrix(OperatorMatrix entries);

    // Skips the spectral checks. Only for outputs of maps known to be CPTP.
    static DensityMatrix trusted(OperatorMatrix entries);

    int n_qubits() const noexcept { return n_qubits_; }
    Eigen::Index dim() const noexcept { return entries_.rows(); }
    const OperatorMatrix& matrix() const noexcept { return entries_; }
    Complex operator()(Eigen::Index i, Eigen::Index j) const { return entries_(i, j); }

private:
    struct TrustedTag {};
    DensityMatrix(OperatorMatrix entries, TrustedTag);

    OperatorMatrix entries_;
    int n_qubits_ = 0;
};

struct EigenDecomposition {
    RealVector eigenvalues;        // ascending
    OperatorMatrix eigenvectors;   // columns, unitary
};

// Number of qubits for a 2^N x 2^N matrix; throws DomainError otherwise.
int qubit_count(const OperatorMatrix& m);

double max_abs(const OperatorMatrix& m);
double hermiticity_defect(const OperatorMatrix& m);

OperatorMatrix kron(const OperatorMatrix& a, const OperatorMatrix& b);
OperatorMatrix kron_all(std::span<const OperatorMatrix> factors);

// Reduced state on the qubits in `keep` (kept in ascending index order).
DensityMatrix partial_trace(const DensityMatrix& rho, std::span<const int> keep);
DensityMatrix partial_trace(const DensityMatrix& rho, std::initializer_list<int> keep);

// Transpose of the `qubit` factor only. Works for any 2^N-dimensional operator.
OperatorMatrix partial_transpose(const OperatorMatrix& m, int qubit);
OperatorMatrix partial_transpose(const DensityMatrix& rho, int qubit);

// Requires Hermitian input within 1e-8.
EigenDecomposition herm_eig(const OperatorMatrix& h);

// Largest singular value, from the spectrum of A^dagger A.
double op_norm(const OperatorMatrix& a);

// Sum_k K rho K^dagger as a LocalSuperop.
LocalSuperop superop_from_kraus(std::span<const OperatorMatrix> kraus);

// Apply a one-qubit linear map to `qubit` of an arbitrary 2^N operator.
OperatorMatrix apply_local_superop(const OperatorMatrix& m, const LocalSuperop& map, int qubit);

// Kraus set must satisfy sum K^dagger K = I within 1e-10.
DensityMatrix apply_local_kraus(const DensityMatrix& rho, std::span<const OperatorMatrix> kraus,
                                int qubit);

double trace_completeness_residual(std::span<const OperatorMatrix> kraus);

}  // namespace qthermo
