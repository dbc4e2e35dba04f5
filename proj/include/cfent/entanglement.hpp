#ifndef CFENT_ENTANGLEMENT_HPP
#define CFENT_ENTANGLEMENT_HPP

#include <random>

#include <Eigen/Dense>

#include "cfent/svd.hpp"

namespace cfent {

// Schmidt data of a structural matrix: singular values descending,
// sum of squares 1 for a normalized matrix.
using SchmidtDecomposition = SvdResult;

SchmidtDecomposition schmidt(const Eigen::MatrixXcd& phi);

// von Neumann entropy (nats) of the squared Schmidt coefficients; entries
// below 1e-14 are treated as exact zeros
double entropy(const SchmidtDecomposition& s);
double purity(const SchmidtDecomposition& s);

// entropy of an unnormalized weight vector (normalized internally);
// the brute-force route every closed form is checked against
double entropy_of_weights(const Eigen::VectorXd& weights);
double purity_of_weights(const Eigen::VectorXd& weights);

// -sin^2 t ln sin^2 t - cos^2 t ln cos^2 t
double s2(double theta);
// (3 + cos 4t) / 4
double purity_theta(double theta);

// Two orthonormal diagonals for the three-mode case: a non-negative vector
// from the (theta1, theta2) sphere angles and a complex vector built from a
// row of a parameterized SU(3) element.
struct Su3Pair {
    Eigen::Vector3d lambda;
    Eigen::Vector3cd phi;
};
Su3Pair su3_orthonormal_pair(double theta1, double theta2, double theta3, double gamma);

// Entropies of both composite modes for the three-mode diagonal family.
// Input angles fix mode 1 and the magnitudes of mode 2 via the closure
// relation; gamma_prime is the relative phase of the first two diagonal
// entries. Returns the derived theta1 of mode 2 as well.
struct Pair3Mode {
    double s1 = 0.0;
    double s2 = 0.0;
    double theta1_2 = 0.0;
    double omega = 0.0;
};
Pair3Mode entropy_pair_3mode(double theta1_1, double theta2_1, double theta2_2, double gamma_prime);

// spectrum (c^2/2, c^2/2, s^2): entropy cos^2 t ln 2 + s2(t)
double entropy_two_equal_s1(double theta1);
// second mode of the two-equal family with a unitary 2x2 block of trace tr_u
double entropy_two_equal_s2(double theta1, double tr_u);
// second mode of the two-equal family with distinct block singular values,
// in the three-angle form
double entropy_s2_threeangle(double theta1, double theta3, double gamma);
// second mode of the all-equal family, diagonal branch; K must satisfy |K| <= 1/2
double entropy_K(double theta1_2, double gamma_prime);
// spectrum (1, 1, w^2)/(2 + w^2) for w = |tr W'| in [0, 2]
double entropy_trW(double tr_w);

// quadratic quasiboson structure function (1 + kappa f/2) n - kappa (f/2) n^2
double quasiboson_phi(int n, double f, int kappa_sign);

struct QuasibosonWitnesses {
    double entropy = 0.0;
    double purity = 0.0;
};
// (ln m, 1/m)
QuasibosonWitnesses quasiboson_entropy_purity(int m);

// block-embedded sqrt(1/m) unitary between sectors of sizes da x db (>= m);
// its Schmidt spectrum is m equal coefficients
Eigen::MatrixXcd quasiboson_structural_matrix(int m, int da, int db, std::mt19937_64& rng);

}  // namespace cfent

#endif
