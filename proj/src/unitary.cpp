#include "cfent/unitary.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace cfent {

using Complex = std::complex<double>;

Eigen::MatrixXcd random_unitary(int n, std::mt19937_64& rng) {
    if (n < 1) throw std::invalid_argument("unitary size must be >= 1");
    std::normal_distribution<double> gauss(0.0, 1.0);
    Eigen::MatrixXcd g(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) g(i, j) = Complex(gauss(rng), gauss(rng));
    Eigen::HouseholderQR<Eigen::MatrixXcd> qr(g);
    Eigen::MatrixXcd q = qr.householderQ();
    Eigen::MatrixXcd r = qr.matrixQR().triangularView<Eigen::Upper>();
    for (int j = 0; j < n; ++j) {
        const Complex d = r(j, j);
        const double m = std::abs(d);
        q.col(j) *= (m > 0.0 ? d / m : Complex(1.0, 0.0));
    }
    return q;
}

Eigen::MatrixXcd random_special_unitary(int n, std::mt19937_64& rng) {
    Eigen::MatrixXcd q = random_unitary(n, rng);
    const Complex det = q.determinant();
    // spread the determinant phase over all columns
    const Complex fix = std::polar(1.0, -std::arg(det) / n);
    return q * fix;
}

Eigen::Matrix2cd su2_matrix(Complex u, Complex v) {
    const double norm = std::sqrt(std::norm(u) + std::norm(v));
    if (norm < 1e-14) throw std::invalid_argument("su2_matrix needs a nonzero (u, v)");
    u /= norm;
    v /= norm;
    Eigen::Matrix2cd m;
    m << u, v, -std::conj(v), std::conj(u);
    return m;
}

Eigen::Matrix2cd su2_traceless(double psi, double xi) {
    const Complex u(0.0, std::cos(psi));
    const Complex v = std::polar(std::sin(psi), xi);
    return su2_matrix(u, v);
}

double uniform_angle(std::mt19937_64& rng) {
    std::uniform_real_distribution<double> dist(0.0, 2.0 * std::numbers::pi);
    return dist(rng);
}

}  // namespace cfent
