#ifndef CFENT_UNITARY_HPP
#define CFENT_UNITARY_HPP

#include <random>

#include <Eigen/Dense>

namespace cfent {

// Haar-distributed unitary (QR of a complex Gaussian matrix with the
// R-diagonal phases normalized)
Eigen::MatrixXcd random_unitary(int n, std::mt19937_64& rng);

// Haar unitary rescaled to determinant one
Eigen::MatrixXcd random_special_unitary(int n, std::mt19937_64& rng);

// [[u, v], [-conj(v), conj(u)]] with |u|^2 + |v|^2 = 1
Eigen::Matrix2cd su2_matrix(std::complex<double> u, std::complex<double> v);

// traceless SU(2) element: u purely imaginary
Eigen::Matrix2cd su2_traceless(double psi, double xi);

double uniform_angle(std::mt19937_64& rng);  // [0, 2*pi)

}  // namespace cfent

#endif
