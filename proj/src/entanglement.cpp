#include "cfent/entanglement.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

#include "cfent/unitary.hpp"

namespace cfent {

namespace {

constexpr double kZeroWeight = 1e-14;

double xlnx(double x) {
    return x > kZeroWeight ? x * std::log(x) : 0.0;
}

}  // namespace

SchmidtDecomposition schmidt(const Eigen::MatrixXcd& phi) {
    if (phi.norm() < 1e-14) throw std::invalid_argument("schmidt needs a nonzero matrix");
    return jacobi_svd(phi);
}

double entropy(const SchmidtDecomposition& s) {
    double e = 0.0;
    for (int i = 0; i < s.values.size(); ++i) e -= xlnx(s.values(i) * s.values(i));
    return e + 0.0;
}

double purity(const SchmidtDecomposition& s) {
    double p = 0.0;
    for (int i = 0; i < s.values.size(); ++i) p += std::pow(s.values(i), 4);
    return p;
}

double entropy_of_weights(const Eigen::VectorXd& weights) {
    double total = 0.0;
    for (int i = 0; i < weights.size(); ++i) {
        if (weights(i) < -1e-12) throw std::invalid_argument("negative weight");
        total += std::max(weights(i), 0.0);
    }
    if (total <= 0.0) throw std::invalid_argument("zero weight vector");
    double e = 0.0;
    for (int i = 0; i < weights.size(); ++i) e -= xlnx(std::max(weights(i), 0.0) / total);
    return e + 0.0;
}

double purity_of_weights(const Eigen::VectorXd& weights) {
    double total = 0.0, p = 0.0;
    for (int i = 0; i < weights.size(); ++i) total += std::max(weights(i), 0.0);
    if (total <= 0.0) throw std::invalid_argument("zero weight vector");
    for (int i = 0; i < weights.size(); ++i) {
        const double w = std::max(weights(i), 0.0) / total;
        p += w * w;
    }
    return p;
}

double s2(double theta) {
    const double s = std::sin(theta), c = std::cos(theta);
    return -xlnx(s * s) - xlnx(c * c) + 0.0;  // +0.0 normalizes the signed zero
}

double purity_theta(double theta) {
    return (3.0 + std::cos(4.0 * theta)) / 4.0;
}

Su3Pair su3_orthonormal_pair(double theta1, double theta2, double theta3, double gamma) {
    for (double t : {theta1, theta2, theta3})
        if (t < -1e-12 || t > std::numbers::pi / 2 + 1e-12)
            throw std::domain_error("angles must lie in [0, pi/2]");
    const double c1 = std::cos(theta1), s1 = std::sin(theta1);
    const double c2 = std::cos(theta2), s2v = std::sin(theta2);
    const double c3 = std::cos(theta3), s3 = std::sin(theta3);
    const std::complex<double> eg = std::polar(1.0, gamma);
    Su3Pair out;
    out.lambda << c1 * c2, c1 * s2v, s1;
    out.phi(0) = -s1 * c2 * c3 - s2v * s3 * eg;
    out.phi(1) = c2 * s3 * eg - s1 * s2v * c3;
    out.phi(2) = c1 * c3;
    return out;
}

Pair3Mode entropy_pair_3mode(double theta1_1, double theta2_1, double theta2_2, double gamma_prime) {
    const double c1 = std::cos(theta1_1), s1 = std::sin(theta1_1);
    if (std::abs(s1) < 1e-14)
        throw std::domain_error("theta1 of mode 1 must lie strictly inside (0, pi/2]");

    const double cos2om = std::cos(2 * theta2_1) * std::cos(2 * theta2_2) +
                          std::sin(2 * theta2_1) * std::sin(2 * theta2_2) * std::cos(gamma_prime);
    const double omega = 0.5 * std::acos(std::clamp(cos2om, -1.0, 1.0));

    const double denom = 1.0 - std::pow(std::sin(omega) * c1, 2);
    if (denom <= 0.0) throw std::domain_error("degenerate angle combination");
    const double cos_sq_t12 = s1 * s1 / denom;
    if (cos_sq_t12 > 1.0 + 1e-12) throw std::domain_error("angle relation has no solution");

    Pair3Mode out;
    out.omega = omega;
    out.theta1_2 = std::acos(std::sqrt(std::clamp(cos_sq_t12, 0.0, 1.0)));
    out.s1 = s2(theta1_1) + c1 * c1 * s2(theta2_1);

    const double t = std::pow(c1 / s1 * std::cos(omega), 2);  // ctg^2 * cos^2
    out.s2 = (s2(theta2_2) - xlnx(t)) / (1.0 + t) + std::log(1.0 + t);
    return out;
}

double entropy_two_equal_s1(double theta1) {
    const double c = std::cos(theta1);
    return c * c * std::numbers::ln2 + s2(theta1);
}

double entropy_two_equal_s2(double theta1, double tr_u) {
    if (tr_u < 0.0 || tr_u > 2.0) throw std::domain_error("|Tr U'| must lie in [0, 2]");
    const double t = std::pow(std::tan(theta1), 2);
    const double q = tr_u * tr_u / 4.0;
    if (t + q <= 0.0) throw std::domain_error("degenerate spectrum");
    const double num = (t > kZeroWeight ? t * std::log(t / 2.0) : 0.0) + xlnx(q);
    return std::log(t + q) - num / (t + q);
}

double entropy_s2_threeangle(double theta1, double theta3, double gamma) {
    const double a = std::sin(theta1) * std::cos(theta3);
    const std::complex<double> b = std::polar(std::sin(theta3), gamma);
    const double zp = std::abs(a + b), zm = std::abs(a - b);
    const double c = std::cos(theta1) * std::cos(theta3);
    double e = std::numbers::ln2;
    if (zp > kZeroWeight) e -= zp * zp * std::log(zp);
    if (zm > kZeroWeight) e -= zm * zm * std::log(zm);
    if (c * c > kZeroWeight) e -= c * c * std::log(2.0 * c * c);
    return e;
}

double entropy_K(double theta1_2, double gamma_prime) {
    const double c = std::cos(theta1_2), s = std::sin(theta1_2);
    const double cg = std::cos(gamma_prime);
    if (std::abs(cg) < 1e-14) throw std::domain_error("cos(gamma') must be nonzero");
    if (c * c < 1e-14) throw std::domain_error("theta1 too close to pi/2");
    const double k = (s * s - 0.5) / (c * c * cg);
    if (std::abs(k) > 0.5 + 1e-12) throw std::domain_error("|K| exceeds 1/2: no closed triangle");

    double bracket;
    if (std::abs(k) < 1e-8) {
        // removable singularity: the bracket vanishes linearly in K^2
        bracket = 0.0;
    } else {
        const double kk = std::min(std::abs(k), 0.5);
        const double q = std::sqrt(std::max(1.0 - 4.0 * kk * kk, 0.0));
        bracket = q * std::log(2.0 * kk / (1.0 + q)) - std::log(kk);
    }
    return s2(theta1_2) + c * c * bracket;
}

double entropy_trW(double tr_w) {
    if (tr_w < 0.0 || tr_w > 2.0) throw std::domain_error("|Tr W'| must lie in [0, 2]");
    const double w2 = tr_w * tr_w;
    double e = std::log(2.0 + w2);
    if (w2 > kZeroWeight) e -= w2 / (2.0 + w2) * std::log(w2);
    return e;
}

double quasiboson_phi(int n, double f, int kappa_sign) {
    if (n < 0) throw std::invalid_argument("occupation must be non-negative");
    if (kappa_sign != 1 && kappa_sign != -1) throw std::invalid_argument("kappa_sign must be +1 or -1");
    if (f <= 0.0) throw std::invalid_argument("f must be positive");
    const double half = f / 2.0;
    return (1.0 + kappa_sign * half) * n - kappa_sign * half * double(n) * n;
}

QuasibosonWitnesses quasiboson_entropy_purity(int m) {
    if (m < 1) throw std::invalid_argument("m must be >= 1");
    return {std::log(double(m)), 1.0 / m};
}

Eigen::MatrixXcd quasiboson_structural_matrix(int m, int da, int db, std::mt19937_64& rng) {
    if (m < 1 || da < m || db < m) throw std::invalid_argument("sector sizes must be >= m");
    Eigen::MatrixXcd core = Eigen::MatrixXcd::Zero(da, db);
    core.topLeftCorner(m, m) = std::sqrt(1.0 / m) * random_unitary(m, rng);
    return random_unitary(da, rng) * core * random_unitary(db, rng).adjoint();
}

}  // namespace cfent
