#ifndef CFENT_SVD_HPP
#define CFENT_SVD_HPP

#include <Eigen/Dense>

namespace cfent {

// Singular values (descending) with unitary factors: A = left * diag(values) * right^dag.
// For rectangular A the diagonal is rectangular; left and right are square.
struct SvdResult {
    Eigen::VectorXd values;
    Eigen::MatrixXcd left;
    Eigen::MatrixXcd right;

    Eigen::MatrixXcd reconstruct() const;
};

// Cyclic Jacobi eigen-decomposition of A^dag A with left vectors recovered
// from A; null directions are completed to an orthonormal basis.
// Convergence threshold 1e-14 on off-diagonal mass, at most 100 sweeps.
SvdResult jacobi_svd(const Eigen::MatrixXcd& a);

// Hermitian eigen-decomposition by cyclic complex Jacobi rotations,
// eigenvalues descending. Returns (eigenvalues, eigenvectors as columns).
void jacobi_hermitian(const Eigen::MatrixXcd& h, Eigen::VectorXd& evals, Eigen::MatrixXcd& evecs);

}  // namespace cfent

#endif
