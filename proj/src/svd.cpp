#include "cfent/svd.hpp"

#include <cmath>
#include <complex>
#include <numeric>
#include <stdexcept>
#include <vector>

namespace cfent {

using Complex = std::complex<double>;

Eigen::MatrixXcd SvdResult::reconstruct() const {
    Eigen::MatrixXcd d = Eigen::MatrixXcd::Zero(left.cols(), right.cols());
    for (int i = 0; i < values.size(); ++i) d(i, i) = values(i);
    return left * d * right.adjoint();
}

namespace {

double offdiag_norm(const Eigen::MatrixXcd& h) {
    double s = 0.0;
    for (int i = 0; i < h.rows(); ++i)
        for (int j = 0; j < h.cols(); ++j)
            if (i != j) s += std::norm(h(i, j));
    return std::sqrt(s);
}

}  // namespace

void jacobi_hermitian(const Eigen::MatrixXcd& h_in, Eigen::VectorXd& evals, Eigen::MatrixXcd& evecs) {
    const int n = static_cast<int>(h_in.rows());
    if (h_in.cols() != n) throw std::invalid_argument("jacobi_hermitian needs a square matrix");

    Eigen::MatrixXcd h = (h_in + h_in.adjoint()) / 2.0;  // symmetrize roundoff
    Eigen::MatrixXcd v = Eigen::MatrixXcd::Identity(n, n);

    const double scale = std::max(1.0, h.norm());
    constexpr double kTol = 1e-14;
    constexpr int kMaxSweeps = 100;

    for (int sweep = 0; sweep < kMaxSweeps; ++sweep) {
        if (offdiag_norm(h) <= kTol * scale) break;
        for (int p = 0; p < n - 1; ++p) {
            for (int q = p + 1; q < n; ++q) {
                const Complex hpq = h(p, q);
                if (std::abs(hpq) <= kTol * scale * 1e-2) continue;
                // phase out h(p,q), then a real rotation on the 2x2 block
                const double phi = std::arg(hpq);
                const Complex ph = std::polar(1.0, phi);
                const double app = h(p, p).real();
                const double aqq = h(q, q).real();
                const double apq = std::abs(hpq);
                const double tau = (aqq - app) / (2.0 * apq);
                const double t = (tau >= 0.0 ? 1.0 : -1.0) / (std::abs(tau) + std::sqrt(1.0 + tau * tau));
                const double c = 1.0 / std::sqrt(1.0 + t * t);
                const double s = t * c;
                // columns: [p q] <- [p q] * [[c, s],[-s*conj(ph)... ]] built from
                // the combined rotation G = diag(ph,1) * R(c,s)
                const Complex gpp = ph * c, gpq = ph * s;
                const Complex gqp = -s, gqq = c;
                for (int i = 0; i < n; ++i) {
                    const Complex hip = h(i, p), hiq = h(i, q);
                    h(i, p) = hip * gpp + hiq * gqp;
                    h(i, q) = hip * gpq + hiq * gqq;
                }
                for (int j = 0; j < n; ++j) {
                    const Complex hpj = h(p, j), hqj = h(q, j);
                    h(p, j) = std::conj(gpp) * hpj + std::conj(gqp) * hqj;
                    h(q, j) = std::conj(gpq) * hpj + std::conj(gqq) * hqj;
                }
                h(p, q) = Complex(0.0, 0.0);
                h(q, p) = Complex(0.0, 0.0);
                for (int i = 0; i < n; ++i) {
                    const Complex vip = v(i, p), viq = v(i, q);
                    v(i, p) = vip * gpp + viq * gqp;
                    v(i, q) = vip * gpq + viq * gqq;
                }
            }
        }
    }

    std::vector<int> order(n);
    std::iota(order.begin(), order.end(), 0);
    Eigen::VectorXd d(n);
    for (int i = 0; i < n; ++i) d(i) = h(i, i).real();
    std::sort(order.begin(), order.end(), [&](int a, int b) { return d(a) > d(b); });

    evals.resize(n);
    evecs.resize(n, n);
    for (int i = 0; i < n; ++i) {
        evals(i) = d(order[i]);
        evecs.col(i) = v.col(order[i]);
    }
}

SvdResult jacobi_svd(const Eigen::MatrixXcd& a) {
    const int rows = static_cast<int>(a.rows());
    const int cols = static_cast<int>(a.cols());
    if (rows == 0 || cols == 0) throw std::invalid_argument("jacobi_svd needs a non-empty matrix");

    Eigen::VectorXd evals;
    Eigen::MatrixXcd v;
    jacobi_hermitian(a.adjoint() * a, evals, v);

    const int k = std::min(rows, cols);
    SvdResult out;
    out.values.resize(k);
    out.right = v;
    out.left.resize(rows, rows);

    const double scale = std::sqrt(std::max(evals.size() > 0 ? evals(0) : 0.0, 0.0));
    const double rank_tol = std::max(scale, 1.0) * 1e-13;

    int filled = 0;
    for (int i = 0; i < k; ++i) {
        // ||A v|| instead of sqrt(eigenvalue): machine-accurate for the
        // near-null directions as well
        const Eigen::VectorXcd av = a * v.col(i);
        const double sv = av.norm();
        out.values(i) = sv;
        if (sv > rank_tol) {
            out.left.col(filled++) = av / sv;
        }
    }
    // complete null directions by Gram-Schmidt over the canonical basis
    for (int e = 0; e < rows && filled < rows; ++e) {
        Eigen::VectorXcd cand = Eigen::VectorXcd::Zero(rows);
        cand(e) = 1.0;
        for (int j = 0; j < filled; ++j) cand -= out.left.col(j).dot(cand) * out.left.col(j);
        const double nrm = cand.norm();
        if (nrm > 1e-8) out.left.col(filled++) = cand / nrm;
    }
    if (filled != rows) throw std::runtime_error("failed to complete the left unitary factor");
    return out;
}

}  // namespace cfent
