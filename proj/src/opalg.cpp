#include "qthermo/opalg.hpp"

#include "qthermo/errors.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <string>

namespace qthermo {

namespace {

constexpr double kEigInputTol = 1e-8;

std::size_t bit_of(int n_qubits, int qubit) {
    return std::size_t{1} << (n_qubits - 1 - qubit);
}

void check_qubit(int n_qubits, int qubit, const char* what) {
    if (qubit < 0 || qubit >= n_qubits) {
        throw DomainError(std::string(what) + ": qubit index " + std::to_string(qubit) +
                          " out of range for " + std::to_string(n_qubits) + " qubits");
    }
}

}  // namespace

int qubit_count(const OperatorMatrix& m) {
    if (m.rows() != m.cols() || m.rows() < 1) {
        throw DomainError("operator must be square and non-empty");
    }
    const auto d = static_cast<std::size_t>(m.rows());
    if (!std::has_single_bit(d)) {
        throw DomainError("dimension " + std::to_string(d) + " is not a power of two");
    }
    return std::countr_zero(d);
}

double max_abs(const OperatorMatrix& m) {
    return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff();
}

double hermiticity_defect(const OperatorMatrix& m) {
    return max_abs(m - m.adjoint());
}

DensityMatrix::DensityMatrix(OperatorMatrix entries, TrustedTag)
    : entries_(std::move(entries)), n_qubits_(qubit_count(entries_)) {}

DensityMatrix DensityMatrix::trusted(OperatorMatrix entries) {
    return DensityMatrix(std::move(entries), TrustedTag{});
}

DensityMatrix::DensityMatrix(OperatorMatrix entries)
    : DensityMatrix(std::move(entries), TrustedTag{}) {
    const double herm = hermiticity_defect(entries_);
    if (herm > kHermitianTol) {
        throw ContractViolation("density matrix not Hermitian (defect " + std::to_string(herm) + ")");
    }
    const Complex tr = entries_.trace();
    if (std::abs(tr - Complex(1.0, 0.0)) > kTraceTol) {
        throw ContractViolation("density matrix trace " + std::to_string(tr.real()) + " != 1");
    }
    const OperatorMatrix sym = 0.5 * (entries_ + entries_.adjoint());
    Eigen::SelfAdjointEigenSolver<OperatorMatrix> es(sym, Eigen::EigenvaluesOnly);
    if (es.eigenvalues().minCoeff() < -kPsdTol) {
        throw ContractViolation("density matrix has negative eigenvalue " +
                                std::to_string(es.eigenvalues().minCoeff()));
    }
}

OperatorMatrix kron(const OperatorMatrix& a, const OperatorMatrix& b) {
    OperatorMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
    for (Eigen::Index i = 0; i < a.rows(); ++i) {
        for (Eigen::Index j = 0; j < a.cols(); ++j) {
            out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
        }
    }
    return out;
}

OperatorMatrix kron_all(std::span<const OperatorMatrix> factors) {
    OperatorMatrix out = OperatorMatrix::Identity(1, 1);
    for (const auto& f : factors) {
        out = kron(out, f);
    }
    return out;
}

DensityMatrix partial_trace(const DensityMatrix& rho, std::span<const int> keep) {
    const int n = rho.n_qubits();
    if (keep.empty()) {
        throw DomainError("partial_trace: keep set must be nonempty");
    }
    std::vector<int> kept(keep.begin(), keep.end());
    std::sort(kept.begin(), kept.end());
    if (std::adjacent_find(kept.begin(), kept.end()) != kept.end()) {
        throw DomainError("partial_trace: duplicate qubit in keep set");
    }
    for (int q : kept) {
        check_qubit(n, q, "partial_trace");
    }

    std::size_t keep_mask = 0;
    for (int q : kept) {
        keep_mask |= bit_of(n, q);
    }
    // Compress the kept bits of a full index into a reduced index.
    auto reduced_index = [&](std::size_t full) {
        std::size_t r = 0;
        for (int q : kept) {
            r = (r << 1) | ((full & bit_of(n, q)) ? 1u : 0u);
        }
        return static_cast<Eigen::Index>(r);
    };

    const auto dim = static_cast<std::size_t>(rho.dim());
    const Eigen::Index rdim = Eigen::Index{1} << kept.size();
    OperatorMatrix out = OperatorMatrix::Zero(rdim, rdim);
    const OperatorMatrix& m = rho.matrix();
    for (std::size_t i = 0; i < dim; ++i) {
        const std::size_t env_i = i & ~keep_mask;
        const Eigen::Index ri = reduced_index(i);
        for (std::size_t j = 0; j < dim; ++j) {
            if ((j & ~keep_mask) != env_i) {
                continue;
            }
            out(ri, reduced_index(j)) += m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
        }
    }
    return DensityMatrix::trusted(std::move(out));
}

DensityMatrix partial_trace(const DensityMatrix& rho, std::initializer_list<int> keep) {
    return partial_trace(rho, std::span<const int>(keep.begin(), keep.size()));
}

OperatorMatrix partial_transpose(const OperatorMatrix& m, int qubit) {
    const int n = qubit_count(m);
    check_qubit(n, qubit, "partial_transpose");
    const std::size_t b = bit_of(n, qubit);
    const auto dim = static_cast<std::size_t>(m.rows());
    OperatorMatrix out(m.rows(), m.cols());
    for (std::size_t i = 0; i < dim; ++i) {
        for (std::size_t j = 0; j < dim; ++j) {
            // Swap the chosen qubit's bra and ket bits.
            const std::size_t bi = i & b;
            const std::size_t bj = j & b;
            const std::size_t ti = (i & ~b) | bj;
            const std::size_t tj = (j & ~b) | bi;
            out(static_cast<Eigen::Index>(ti), static_cast<Eigen::Index>(tj)) =
                m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
        }
    }
    return out;
}

OperatorMatrix partial_transpose(const DensityMatrix& rho, int qubit) {
    return partial_transpose(rho.matrix(), qubit);
}

EigenDecomposition herm_eig(const OperatorMatrix& h) {
    if (h.rows() != h.cols()) {
        throw ContractViolation("herm_eig: matrix not square");
    }
    const double defect = hermiticity_defect(h);
    if (defect > kEigInputTol) {
        throw ContractViolation("herm_eig: matrix not Hermitian (defect " + std::to_string(defect) + ")");
    }
    const OperatorMatrix sym = 0.5 * (h + h.adjoint());
    Eigen::SelfAdjointEigenSolver<OperatorMatrix> es(sym);
    if (es.info() != Eigen::Success) {
        throw NumericError("herm_eig: eigensolver did not converge");
    }
    return {es.eigenvalues(), es.eigenvectors()};
}

double op_norm(const OperatorMatrix& a) {
    if (a.size() == 0) {
        return 0.0;
    }
    const OperatorMatrix gram = a.adjoint() * a;
    const auto eig = herm_eig(gram);
    return std::sqrt(std::max(0.0, eig.eigenvalues.maxCoeff()));
}

double trace_completeness_residual(std::span<const OperatorMatrix> kraus) {
    if (kraus.empty()) {
        return 1.0;
    }
    OperatorMatrix sum = OperatorMatrix::Zero(kraus.front().cols(), kraus.front().cols());
    for (const auto& k : kraus) {
        sum += k.adjoint() * k;
    }
    return max_abs(sum - OperatorMatrix::Identity(sum.rows(), sum.cols()));
}

LocalSuperop superop_from_kraus(std::span<const OperatorMatrix> kraus) {
    LocalSuperop s = LocalSuperop::Zero();
    for (const auto& k : kraus) {
        if (k.rows() != 2 || k.cols() != 2) {
            throw ContractViolation("local Kraus operators must be 2x2");
        }
        for (int i = 0; i < 2; ++i) {
            for (int j = 0; j < 2; ++j) {
                for (int m = 0; m < 2; ++m) {
                    for (int n = 0; n < 2; ++n) {
                        s(2 * i + j, 2 * m + n) += k(i, m) * std::conj(k(j, n));
                    }
                }
            }
        }
    }
    return s;
}

OperatorMatrix apply_local_superop(const OperatorMatrix& m, const LocalSuperop& map, int qubit) {
    const int n = qubit_count(m);
    check_qubit(n, qubit, "apply_local_superop");
    const std::size_t b = bit_of(n, qubit);
    const auto dim = static_cast<std::size_t>(m.rows());
    OperatorMatrix out(m.rows(), m.cols());
    Eigen::Vector4cd block;
    for (std::size_t i = 0; i < dim; ++i) {
        if (i & b) {
            continue;
        }
        const auto i0 = static_cast<Eigen::Index>(i);
        const auto i1 = static_cast<Eigen::Index>(i | b);
        for (std::size_t j = 0; j < dim; ++j) {
            if (j & b) {
                continue;
            }
            const auto j0 = static_cast<Eigen::Index>(j);
            const auto j1 = static_cast<Eigen::Index>(j | b);
            block << m(i0, j0), m(i0, j1), m(i1, j0), m(i1, j1);
            const Eigen::Vector4cd res = map * block;
            out(i0, j0) = res(0);
            out(i0, j1) = res(1);
            out(i1, j0) = res(2);
            out(i1, j1) = res(3);
        }
    }
    return out;
}

DensityMatrix apply_local_kraus(const DensityMatrix& rho, std::span<const OperatorMatrix> kraus,
                                int qubit) {
    for (const auto& k : kraus) {
        if (k.rows() != 2 || k.cols() != 2) {
            throw ContractViolation("apply_local_kraus: Kraus operators must be 2x2");
        }
    }
    const double residual = trace_completeness_residual(kraus);
    if (residual > 1e-10) {
        throw ContractViolation("apply_local_kraus: Kraus set not trace preserving (residual " +
                                std::to_string(residual) + ")");
    }
    return DensityMatrix::trusted(apply_local_superop(rho.matrix(), superop_from_kraus(kraus), qubit));
}

}  // namespace qthermo
