#include "cfent/realization.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include "cfent/entanglement.hpp"
#include "cfent/svd.hpp"
#include "cfent/unitary.hpp"

namespace cfent {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;
constexpr double kDegeneracyTol = 1e-10;

Eigen::VectorXd sorted_desc(Eigen::VectorXd v) {
    std::sort(v.data(), v.data() + v.size(), std::greater<double>());
    return v;
}

Eigen::MatrixXcd diag_of(const Eigen::MatrixXcd& m) {
    return m.diagonal().asDiagonal();
}

void require_normalized(const Eigen::VectorXd& d1) {
    if (std::abs(d1.squaredNorm() - 1.0) > 1e-10)
        throw std::invalid_argument("singular values must have unit square sum");
    for (int i = 0; i < d1.size(); ++i)
        if (d1(i) < -1e-14) throw std::invalid_argument("singular values must be non-negative");
}

void require_su2(const Eigen::Matrix2cd& u1) {
    const Complex u = u1(0, 0), v = u1(0, 1);
    Eigen::Matrix2cd expect;
    expect << u, v, -std::conj(v), std::conj(u);
    if ((u1 - expect).norm() > 1e-10 || std::abs(std::norm(u) + std::norm(v) - 1.0) > 1e-10)
        throw std::invalid_argument("left frame must be a special unitary 2x2 matrix");
}

}  // namespace

double RealizationReport::max_residual() const {
    double m = 0.0;
    for (const auto& r : residuals) m = std::max(m, r.value);
    return m;
}

double RealizationReport::rss() const {
    double s = 0.0;
    for (const auto& r : residuals) s += r.value * r.value;
    return std::sqrt(s);
}

RealizationReport check_realization(const std::vector<StructuralMatrix>& phis,
                                    const DeformationSpec& spec, double tol) {
    if (phis.empty()) throw std::invalid_argument("no structural matrices given");
    const int n = static_cast<int>(phis.size());
    for (const auto& p : phis)
        if (p.rows() != phis[0].rows() || p.cols() != phis[0].cols())
            throw std::invalid_argument("structural matrices must share one shape");

    RealizationReport report;
    report.tolerance = tol;
    const double d2 = spec.delta_chi2();

    for (int a = 0; a < n; ++a) {
        for (int b = a; b < n; ++b) {
            const Complex t = (phis[b].mat() * phis[a].mat().adjoint()).trace();
            const double res = (a == b) ? std::abs(t - 1.0) : std::abs(t);
            report.residuals.push_back(
                {"trace(" + std::to_string(a + 1) + "," + std::to_string(b + 1) + ")", res});
        }
    }
    for (int a = 0; a < n; ++a) {
        for (int b = 0; b < n; ++b) {
            for (int g = b + 1; g < n; ++g) {
                const Eigen::MatrixXcd bb = phis[b].mat() * phis[a].mat().adjoint();
                const Eigen::MatrixXcd gg = phis[g].mat() * phis[a].mat().adjoint();
                Eigen::MatrixXcd m = bb * phis[g].mat() - gg * phis[b].mat();
                if (std::abs(d2) > 0.0)
                    m += d2 * (diag_of(bb) * phis[g].mat() - diag_of(gg) * phis[b].mat());
                report.residuals.push_back({"cubic(" + std::to_string(a + 1) + ";" +
                                                std::to_string(b + 1) + "," + std::to_string(g + 1) +
                                                ")",
                                            m.norm()});
            }
        }
    }
    report.pass = report.max_residual() < tol;
    return report;
}

RealizationReport check_nondeformed(const std::vector<StructuralMatrix>& phis, double tol) {
    return check_realization(phis, DeformationSpec::nondeformed(), tol);
}

RealizationReport check_deformed_two_mode(const StructuralMatrix& phi1, const StructuralMatrix& phi2,
                                          const DeformationSpec& spec, double tol) {
    return check_realization({phi1, phi2}, spec, tol);
}

double residual(const std::vector<StructuralMatrix>& phis, const DeformationSpec& spec) {
    return check_realization(phis, spec).rss();
}

CanonicalPair canonicalize(const StructuralMatrix& phi1, const StructuralMatrix& phi2) {
    if (phi1.rows() != phi2.rows() || phi1.cols() != phi2.cols())
        throw std::invalid_argument("matrices must share one shape");
    SvdResult svd = jacobi_svd(phi1.mat());
    // fix the left determinant to one; the phase goes into the last left
    // column and, when that column carries a singular value, into the
    // matching right column
    const Complex det = svd.left.determinant();
    if (std::abs(det) > 0.5) {
        const Complex fix = std::conj(det) / std::abs(det);
        const Eigen::Index j = svd.left.cols() - 1;
        svd.left.col(j) *= fix;
        if (j < svd.right.cols()) svd.right.col(j) *= fix;
    }
    CanonicalPair out;
    out.d1 = svd.values;
    out.u1 = svd.left;
    out.v1 = svd.right;
    out.phi2tilde = svd.left.adjoint() * phi2.mat() * svd.right;
    return out;
}

DeformedLinearSystem deformed_linear_system(const Eigen::Vector2d& d1, Complex u, Complex v,
                                            double chi2) {
    require_normalized(d1);
    if (std::abs(std::norm(u) + std::norm(v) - 1.0) > 1e-10)
        throw std::invalid_argument("(u, v) must lie on the unit sphere");
    const double au = std::abs(u), av = std::abs(v);
    const double l1 = d1(0), l2 = d1(1);
    const double dchi = chi2 - 2.0;
    const double gap = l1 * l1 - l2 * l2;
    const double bal = au * au - av * av;

    Eigen::Matrix3d m;
    m(0, 0) = 2.0 * dchi * au * au * av * av;
    m(0, 1) = -dchi * au * av * bal;
    m(0, 2) = 0.0;
    m(1, 0) = m(0, 1);
    m(1, 1) = 0.5 * (chi2 * gap * gap + dchi * bal * bal);
    m(1, 2) = chi2 * l1 * l2 * (l2 * l2 - l1 * l1);
    m(2, 0) = 0.0;
    m(2, 1) = m(1, 2);
    m(2, 2) = -0.5 * (chi2 * gap * gap - dchi);

    DeformedLinearSystem out;
    out.coefficients = m;
    out.determinant = m.determinant();
    out.predicted_determinant = -chi2 * (chi2 - 2.0) * au * au * av * av * gap * gap;
    return out;
}

FamilyTag family_tag(int index) {
    if (index < 0 || index >= kFamilyCount) throw std::out_of_range("family index");
    return static_cast<FamilyTag>(index);
}

std::string family_name(FamilyTag tag) {
    switch (tag) {
        case FamilyTag::TwoModeDistinct: return "two-mode-distinct";
        case FamilyTag::TwoModeEqual: return "two-mode-equal";
        case FamilyTag::DeformedB: return "deformed-b";
        case FamilyTag::DeformedCDiagonal: return "deformed-c-diagonal";
        case FamilyTag::DeformedCNilpotent: return "deformed-c-nilpotent";
        case FamilyTag::ThreeModeDistinct: return "3mode-distinct";
        case FamilyTag::ThreeModeTwoEqual: return "3mode-two-equal";
        case FamilyTag::ThreeModeAllEqual: return "3mode-all-equal";
    }
    throw std::logic_error("unreachable");
}

std::optional<FamilyTag> family_from_name(const std::string& name) {
    for (int i = 0; i < kFamilyCount; ++i)
        if (family_name(family_tag(i)) == name) return family_tag(i);
    return std::nullopt;
}

SolutionFamily::SolutionFamily(FamilyTag tag, DeformationSpec spec, std::vector<ParamSpec> params,
                               Generator gen, bool left_frame_free)
    : tag_(tag), spec_(spec), params_(std::move(params)), gen_(std::move(gen)),
      left_frame_free_(left_frame_free) {}

FamilySample SolutionFamily::generate(const std::vector<double>& values) const {
    if (values.size() != params_.size())
        throw std::invalid_argument("expected " + std::to_string(params_.size()) +
                                    " parameters for family " + family_name(tag_));
    return gen_(values);
}

FamilySample SolutionFamily::sample(std::mt19937_64& rng) const {
    std::vector<double> values;
    values.reserve(params_.size());
    for (const auto& p : params_) {
        std::uniform_real_distribution<double> dist(p.lo, p.hi);
        values.push_back(dist(rng));
    }
    FamilySample s = generate(values);
    const int rows = s.phi1.rows(), cols = s.phi1.cols();
    const Eigen::MatrixXcd vr = random_unitary(cols, rng);
    Eigen::MatrixXcd ul = Eigen::MatrixXcd::Identity(rows, rows);
    if (left_frame_free_) ul = random_unitary(rows, rng);
    s.phi1 = StructuralMatrix(ul * s.phi1.mat() * vr.adjoint());
    s.phi2 = StructuralMatrix(ul * s.phi2.mat() * vr.adjoint());
    return s;
}

SolutionFamily solve_two_mode_nondeformed(const Eigen::Vector2d& d1) {
    require_normalized(d1);
    const double l1 = d1(0), l2 = d1(1);
    if (l1 + kDegeneracyTol < l2) throw std::invalid_argument("singular values must be descending");

    if (std::abs(l1 - l2) < kDegeneracyTol) {
        // degenerate branch: phi2tilde proportional to a traceless normal matrix
        auto gen = [](const std::vector<double>& v) {
            const double eta = v[0], psi = v[1], xi = v[2];
            const double l = 1.0 / std::numbers::sqrt2;
            FamilySample s{
                StructuralMatrix(Eigen::Matrix2cd(Eigen::Vector2cd(l, l).asDiagonal())),
                StructuralMatrix(std::polar(l, eta) * su2_traceless(psi, xi)),
                Eigen::Vector2d(l, l), Eigen::Vector2d(l, l), 2.0};
            return s;
        };
        return SolutionFamily(FamilyTag::TwoModeEqual, DeformationSpec::nondeformed(),
                              {{"eta", 0.0, kTwoPi}, {"psi", 0.0, kTwoPi}, {"xi", 0.0, kTwoPi}},
                              gen, true);
    }

    auto gen = [l1, l2](const std::vector<double>& v) {
        const double eta = v[0];
        Eigen::Matrix2cd phi2 = Eigen::Matrix2cd::Zero();
        phi2(0, 0) = std::polar(l2, eta);
        phi2(1, 1) = -std::polar(l1, eta);
        FamilySample s{StructuralMatrix(Eigen::Matrix2cd(Eigen::Vector2cd(l1, l2).asDiagonal())),
                       StructuralMatrix(phi2), Eigen::Vector2d(l1, l2), Eigen::Vector2d(l1, l2),
                       2.0};
        return s;
    };
    return SolutionFamily(FamilyTag::TwoModeDistinct, DeformationSpec::nondeformed(),
                          {{"eta_prime", 0.0, kTwoPi}}, gen, true);
}

namespace {

Eigen::Matrix2cd r_matrix_of(const Eigen::Matrix2cd& u1) {
    const Complex u = u1(0, 0), v = u1(0, 1);
    Eigen::Matrix2cd r;
    r << std::norm(u) - std::norm(v), 2.0 * std::conj(u) * v, 2.0 * u * std::conj(v),
        std::norm(v) - std::norm(u);
    return r;
}

SolutionFamily make_deformed_b(const Eigen::Vector2d& d1, const Eigen::Matrix2cd& u1, double chi2) {
    auto gen = [d1, u1, chi2](const std::vector<double>& v) {
        const Complex kappa = std::polar(1.0, v[0]);
        const Eigen::Matrix2cd r = r_matrix_of(u1);
        Eigen::Matrix2cd phi2t = kappa * r * Eigen::Vector2cd(d1(1), d1(0)).asDiagonal().toDenseMatrix();
        FamilySample s{StructuralMatrix(u1 * Eigen::Vector2cd(d1(0), d1(1)).asDiagonal().toDenseMatrix()),
                       StructuralMatrix(u1 * phi2t), sorted_desc(d1), sorted_desc(d1), chi2};
        return s;
    };
    return SolutionFamily(FamilyTag::DeformedB, DeformationSpec::deformed(chi2),
                          {{"kappa_arg", 0.0, kTwoPi}}, gen, false);
}

SolutionFamily make_deformed_c_diagonal(const Eigen::Vector2d& d1, const Eigen::Matrix2cd& u1,
                                        double chi2) {
    auto gen = [d1, u1, chi2](const std::vector<double>& v) {
        const Complex kappa = std::polar(1.0, v[0]);
        Eigen::Matrix2cd phi2t = Eigen::Matrix2cd::Zero();
        phi2t(0, 0) = kappa * d1(1);
        phi2t(1, 1) = -kappa * d1(0);
        FamilySample s{StructuralMatrix(u1 * Eigen::Vector2cd(d1(0), d1(1)).asDiagonal().toDenseMatrix()),
                       StructuralMatrix(u1 * phi2t), sorted_desc(d1), sorted_desc(d1), chi2};
        return s;
    };
    return SolutionFamily(FamilyTag::DeformedCDiagonal, DeformationSpec::deformed(chi2),
                          {{"kappa_arg", 0.0, kTwoPi}}, gen, false);
}

SolutionFamily make_deformed_c_nilpotent(const Eigen::Matrix2cd& u1, double chi2) {
    auto gen = [u1, chi2](const std::vector<double>& v) {
        Eigen::Matrix2cd phi1 = Eigen::Matrix2cd::Zero();
        phi1(0, 0) = 1.0;
        Eigen::Matrix2cd phi2t = Eigen::Matrix2cd::Zero();
        phi2t(0, 1) = std::polar(1.0, v[0]);
        FamilySample s{StructuralMatrix(u1 * phi1), StructuralMatrix(u1 * phi2t),
                       Eigen::Vector2d(1.0, 0.0), Eigen::Vector2d(1.0, 0.0), chi2};
        return s;
    };
    return SolutionFamily(FamilyTag::DeformedCNilpotent, DeformationSpec::deformed(chi2),
                          {{"phi12_arg", 0.0, kTwoPi}}, gen, false);
}

}  // namespace

std::vector<SolutionFamily> solve_two_mode_deformed(const Eigen::Vector2d& d1,
                                                    const Eigen::Matrix2cd& u1,
                                                    const DeformationSpec& spec) {
    require_normalized(d1);
    require_su2(u1);
    if (spec.chi2 < 0.0) throw std::invalid_argument("chi(2) must be non-negative");

    if (spec.is_nondeformed(kDegeneracyTol)) return {solve_two_mode_nondeformed(d1)};

    std::vector<SolutionFamily> out;
    const double l1 = d1(0), l2 = d1(1);
    const bool equal = std::abs(l1 - l2) < kDegeneracyTol;
    const bool uv_zero = std::abs(u1(0, 0)) * std::abs(u1(0, 1)) < kDegeneracyTol;

    if (spec.chi2 < kDegeneracyTol || equal) out.push_back(make_deformed_b(d1, u1, spec.chi2));
    if (uv_zero && !equal) {
        out.push_back(make_deformed_c_diagonal(d1, u1, spec.chi2));
        if (std::abs(spec.chi2 - 1.0) < kDegeneracyTol && l2 < kDegeneracyTol)
            out.push_back(make_deformed_c_nilpotent(u1, spec.chi2));
    }
    return out;
}

SolutionFamily solve_three_mode(const Eigen::Vector3d& d1, ThreeModePattern pattern, int branch) {
    require_normalized(d1);
    const double l1 = d1(0), l2 = d1(1), l3 = d1(2);

    switch (pattern) {
        case ThreeModePattern::Distinct: {
            if (std::abs(l1 - l2) < kDegeneracyTol || std::abs(l1 - l3) < kDegeneracyTol ||
                std::abs(l2 - l3) < kDegeneracyTol)
                throw std::invalid_argument("pattern requires pairwise distinct singular values");
            // recover the sphere angles of the declared diagonal
            const double theta1 = std::asin(std::clamp(l3, 0.0, 1.0));
            const double theta2 = std::atan2(l2, l1);
            auto gen = [d1, theta1, theta2](const std::vector<double>& v) {
                const double theta3 = v[0], gamma = v[1], eta = v[2];
                const Su3Pair pair = su3_orthonormal_pair(theta1, theta2, theta3, gamma);
                Eigen::Matrix3cd phi2 =
                    (std::polar(1.0, eta) * pair.phi).asDiagonal().toDenseMatrix();
                Eigen::Vector3d mags = pair.phi.cwiseAbs();
                FamilySample s{StructuralMatrix(d1.cast<Complex>().asDiagonal().toDenseMatrix()),
                               StructuralMatrix(phi2), sorted_desc(d1), sorted_desc(mags), 2.0};
                return s;
            };
            return SolutionFamily(FamilyTag::ThreeModeDistinct, DeformationSpec::nondeformed(),
                                  {{"theta3", 0.0, std::numbers::pi / 2},
                                   {"gamma", 0.0, kTwoPi},
                                   {"eta", 0.0, kTwoPi}},
                                  gen, true);
        }

        case ThreeModePattern::TwoEqual: {
            if (std::abs(l1 - l2) > 1e-12 || std::abs(l1 - l3) < kDegeneracyTol)
                throw std::invalid_argument("pattern requires exactly two equal singular values");
            if (l3 < kDegeneracyTol || l1 < kDegeneracyTol)
                throw std::invalid_argument("degenerate frame: both values must be positive");
            if (branch == 0) {
                // unitary 2x2 block; the block trace fixes the third entry
                auto gen = [l1, l3](const std::vector<double>& v) {
                    const double xi = v[0], eta = v[1];
                    const double x = l3 / std::sqrt(4.0 * l1 * l1 * std::pow(std::cos(xi), 2) +
                                                    2.0 * l3 * l3);
                    const Complex ph = std::polar(1.0, eta);
                    Eigen::Matrix3cd phi2 = Eigen::Matrix3cd::Zero();
                    phi2(0, 0) = x * ph * std::polar(1.0, xi);
                    phi2(1, 1) = x * ph * std::polar(1.0, -xi);
                    const double f33 = -2.0 * l1 * x * std::cos(xi) / l3;
                    phi2(2, 2) = f33 * ph;
                    Eigen::Vector3d lam1(l1, l1, l3), lam2(x, x, std::abs(f33));
                    FamilySample s{
                        StructuralMatrix(Eigen::Vector3cd(l1, l1, l3).asDiagonal().toDenseMatrix()),
                        StructuralMatrix(phi2), sorted_desc(lam1), sorted_desc(lam2), 2.0};
                    return s;
                };
                return SolutionFamily(FamilyTag::ThreeModeTwoEqual, DeformationSpec::nondeformed(),
                                      {{"xi", 0.0, kTwoPi}, {"eta", 0.0, kTwoPi}}, gen, true);
            }
            // distinct block singular values; closure fixes their scale
            auto gen = [l1, l3](const std::vector<double>& v) {
                const double psi = v[0], delta = v[1], eta = v[2];
                const Complex zp = std::polar(std::cos(psi), delta);
                const Complex zm = std::polar(std::sin(psi), -delta);
                const double g = std::abs(zp + zm);
                const double rho = l3 / std::sqrt(l1 * l1 * g * g + l3 * l3);
                const Complex ph = std::polar(1.0, eta);
                Eigen::Matrix3cd phi2 = Eigen::Matrix3cd::Zero();
                phi2(0, 0) = rho * zp * ph;
                phi2(1, 1) = rho * zm * ph;
                const Complex f33 = -l1 * rho * (zp + zm) / l3;
                phi2(2, 2) = f33 * ph;
                Eigen::Vector3d lam1(l1, l1, l3);
                Eigen::Vector3d lam2(rho * std::cos(psi), rho * std::sin(psi), std::abs(f33));
                FamilySample s{
                    StructuralMatrix(Eigen::Vector3cd(l1, l1, l3).asDiagonal().toDenseMatrix()),
                    StructuralMatrix(phi2), sorted_desc(lam1), sorted_desc(lam2), 2.0};
                return s;
            };
            return SolutionFamily(FamilyTag::ThreeModeTwoEqual, DeformationSpec::nondeformed(),
                                  {{"psi", 0.0, std::numbers::pi / 4},
                                   {"delta", 0.0, kTwoPi},
                                   {"eta", 0.0, kTwoPi}},
                                  gen, true);
        }

        case ThreeModePattern::AllEqual: {
            const double l = 1.0 / std::numbers::sqrt3;
            if (std::abs(l1 - l) > 1e-10 || std::abs(l2 - l) > 1e-10 || std::abs(l3 - l) > 1e-10)
                throw std::invalid_argument("pattern requires three equal singular values");
            const Eigen::Matrix3cd phi1 =
                Eigen::Vector3cd(l, l, l).asDiagonal().toDenseMatrix();
            const Eigen::Vector3d lam1(l, l, l);

            if (branch == 0) {
                // diagonal traceless unit vector
                auto gen = [phi1, lam1](const std::vector<double>& v) {
                    const double m1 = v[0], m2 = v[1], a = v[2], b = v[3], eta = v[4];
                    const Complex z1 = std::polar(m1, a);
                    const Complex z2 = std::polar(m2, b);
                    const Complex z3 = -(z1 + z2);
                    Eigen::Vector3cd diag(z1, z2, z3);
                    diag *= std::polar(1.0, eta) / diag.norm();
                    FamilySample s{StructuralMatrix(phi1),
                                   StructuralMatrix(diag.asDiagonal().toDenseMatrix()), lam1,
                                   sorted_desc(diag.cwiseAbs()), 2.0};
                    return s;
                };
                return SolutionFamily(FamilyTag::ThreeModeAllEqual, DeformationSpec::nondeformed(),
                                      {{"m1", 0.1, 1.0},
                                       {"m2", 0.1, 1.0},
                                       {"arg1", 0.0, kTwoPi},
                                       {"arg2", 0.0, kTwoPi},
                                       {"eta", 0.0, kTwoPi}},
                                      gen, true);
            }
            if (branch == 1) {
                // 2x2 special-unitary block against a matched third entry
                auto gen = [phi1, lam1](const std::vector<double>& v) {
                    const double bw = v[0], pu = v[1], pv = v[2], eta = v[3];
                    const Eigen::Matrix2cd wp =
                        su2_matrix(std::polar(std::cos(bw), pu), std::polar(std::sin(bw), pv));
                    const double tr = 2.0 * std::cos(bw) * std::cos(pu);  // real for SU(2)
                    const double atr = std::abs(tr);
                    const double m1 = 1.0 / std::sqrt(2.0 + tr * tr);
                    const double m3 = atr * m1;
                    const Complex w33 =
                        (atr < 1e-14) ? Complex(1.0, 0.0)
                                      : std::polar(1.0, tr > 0.0 ? 2.0 * std::numbers::pi / 3 : 0.0);
                    const Complex w33_mhalf = std::polar(1.0, -std::arg(w33) / 2.0);
                    Eigen::Matrix3cd phi2 = Eigen::Matrix3cd::Zero();
                    phi2.topLeftCorner<2, 2>() = m1 * w33_mhalf * wp;
                    phi2(2, 2) = m3 * w33;
                    phi2 *= std::polar(1.0, eta);
                    Eigen::Vector3d lam2(m1, m1, m3);
                    FamilySample s{StructuralMatrix(phi1), StructuralMatrix(phi2), lam1,
                                   sorted_desc(lam2), 2.0};
                    return s;
                };
                return SolutionFamily(FamilyTag::ThreeModeAllEqual, DeformationSpec::nondeformed(),
                                      {{"block_angle", 0.0, std::numbers::pi / 2},
                                       {"block_arg_u", 0.0, kTwoPi},
                                       {"block_arg_v", 0.0, kTwoPi},
                                       {"eta", 0.0, kTwoPi}},
                                      gen, true);
            }
            // traceless unitary: the cube roots of unity on the diagonal
            auto gen = [phi1, lam1, l](const std::vector<double>& v) {
                const double eta = v[0];
                Eigen::Vector3cd diag(Complex(1.0, 0.0), std::polar(1.0, kTwoPi / 3),
                                      std::polar(1.0, -kTwoPi / 3));
                diag *= std::polar(l, eta);
                FamilySample s{StructuralMatrix(phi1),
                               StructuralMatrix(diag.asDiagonal().toDenseMatrix()), lam1, lam1,
                               2.0};
                return s;
            };
            return SolutionFamily(FamilyTag::ThreeModeAllEqual, DeformationSpec::nondeformed(),
                                  {{"eta", 0.0, kTwoPi}}, gen, true);
        }
    }
    throw std::logic_error("unreachable");
}

FamilySample sample_family(FamilyTag tag, std::mt19937_64& rng) {
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    const auto angle = [&rng](double lo, double hi) {
        std::uniform_real_distribution<double> d(lo, hi);
        return d(rng);
    };
    const auto random_su2 = [&](std::mt19937_64& r) {
        const double b = angle(0.0, std::numbers::pi / 2);
        return su2_matrix(std::polar(std::cos(b), uniform_angle(r)),
                          std::polar(std::sin(b), uniform_angle(r)));
    };

    switch (tag) {
        case FamilyTag::TwoModeDistinct: {
            const double theta = angle(0.05, std::numbers::pi / 4 - 0.05);
            return solve_two_mode_nondeformed({std::cos(theta), std::sin(theta)}).sample(rng);
        }
        case FamilyTag::TwoModeEqual: {
            const double l = 1.0 / std::numbers::sqrt2;
            return solve_two_mode_nondeformed({l, l}).sample(rng);
        }
        case FamilyTag::DeformedB: {
            double chi2, theta;
            if (unit(rng) < 0.5) {
                chi2 = 0.0;
                theta = angle(0.05, std::numbers::pi / 4);
            } else {
                chi2 = angle(0.0, 4.0);
                theta = std::numbers::pi / 4;
            }
            const Eigen::Vector2d d1(std::cos(theta), std::sin(theta));
            return make_deformed_b(d1, random_su2(rng), chi2).sample(rng);
        }
        case FamilyTag::DeformedCDiagonal: {
            const double theta = angle(0.05, std::numbers::pi / 4 - 0.05);
            const double chi2 = angle(0.0, 4.0);
            const Eigen::Vector2d d1(std::cos(theta), std::sin(theta));
            Eigen::Matrix2cd u1 = Eigen::Matrix2cd::Zero();
            if (unit(rng) < 0.5) {
                const Complex ph = std::polar(1.0, uniform_angle(rng));
                u1(0, 0) = ph;
                u1(1, 1) = std::conj(ph);
            } else {
                const Complex ph = std::polar(1.0, uniform_angle(rng));
                u1(0, 1) = ph;
                u1(1, 0) = -std::conj(ph);
            }
            return make_deformed_c_diagonal(d1, u1, chi2).sample(rng);
        }
        case FamilyTag::DeformedCNilpotent: {
            Eigen::Matrix2cd u1 = Eigen::Matrix2cd::Zero();
            const Complex ph = std::polar(1.0, uniform_angle(rng));
            if (unit(rng) < 0.5) {
                u1(0, 0) = ph;
                u1(1, 1) = std::conj(ph);
            } else {
                u1(0, 1) = ph;
                u1(1, 0) = -std::conj(ph);
            }
            return make_deformed_c_nilpotent(u1, 1.0).sample(rng);
        }
        case FamilyTag::ThreeModeDistinct: {
            for (int attempt = 0; attempt < 256; ++attempt) {
                const double t1 = angle(0.1, std::numbers::pi / 2 - 0.1);
                const double t2 = angle(0.05, std::numbers::pi / 2 - 0.05);
                const Eigen::Vector3d d1(std::cos(t1) * std::cos(t2), std::cos(t1) * std::sin(t2),
                                         std::sin(t1));
                const double gap = std::min({std::abs(d1(0) - d1(1)), std::abs(d1(0) - d1(2)),
                                             std::abs(d1(1) - d1(2))});
                if (gap > 0.02)
                    return solve_three_mode(d1, ThreeModePattern::Distinct).sample(rng);
            }
            throw std::runtime_error("failed to draw distinct singular values");
        }
        case FamilyTag::ThreeModeTwoEqual: {
            for (int attempt = 0; attempt < 256; ++attempt) {
                const double t1 = angle(0.1, std::numbers::pi / 2 - 0.1);
                const double l1 = std::cos(t1) / std::numbers::sqrt2;
                const double l3 = std::sin(t1);
                if (std::abs(l1 - l3) < 0.02) continue;
                const int branch = unit(rng) < 0.5 ? 0 : 1;
                return solve_three_mode({l1, l1, l3}, ThreeModePattern::TwoEqual, branch)
                    .sample(rng);
            }
            throw std::runtime_error("failed to draw a two-equal frame");
        }
        case FamilyTag::ThreeModeAllEqual: {
            const double l = 1.0 / std::numbers::sqrt3;
            const int branch = static_cast<int>(unit(rng) * 3.0) % 3;
            return solve_three_mode({l, l, l}, ThreeModePattern::AllEqual, branch).sample(rng);
        }
    }
    throw std::logic_error("unreachable");
}

ModeBoundReport mode_count_bound_check(const std::vector<StructuralMatrix>& phis,
                                       const FockBasis& basis, const StructureFunction& chi) {
    if (phis.empty()) throw std::invalid_argument("no structural matrices given");
    std::vector<SparseOp> creators;
    creators.reserve(phis.size());
    for (const auto& phi : phis) creators.push_back(composite_creator(phi, basis, chi));

    StateVec tail = vacuum_state(basis);
    for (int i = static_cast<int>(phis.size()) - 1; i >= 1; --i) tail = creators[i] * tail;
    const StateVec full = creators[0] * tail;
    const StateVec product = adjoint_op(creators[0]) * full;

    ModeBoundReport out;
    out.remainder_norm = tail.norm();
    out.product_norm = product.norm();
    out.product_vanishes = out.product_norm < 1e-13;
    out.more_composites_than_fermion_modes =
        static_cast<int>(phis.size()) > basis.fermion_modes();
    return out;
}

namespace {

Eigen::VectorXd residual_vector(const std::vector<Eigen::MatrixXcd>& phis, double delta_chi2) {
    const int n = static_cast<int>(phis.size());
    std::vector<double> r;
    for (int a = 0; a < n; ++a) {
        for (int b = a; b < n; ++b) {
            const Complex t = (phis[b] * phis[a].adjoint()).trace();
            r.push_back(t.real() - (a == b ? 1.0 : 0.0));
            if (a != b) r.push_back(t.imag());
        }
    }
    for (int a = 0; a < n; ++a) {
        for (int b = 0; b < n; ++b) {
            for (int g = b + 1; g < n; ++g) {
                const Eigen::MatrixXcd bb = phis[b] * phis[a].adjoint();
                const Eigen::MatrixXcd gg = phis[g] * phis[a].adjoint();
                Eigen::MatrixXcd m = bb * phis[g] - gg * phis[b];
                if (std::abs(delta_chi2) > 0.0)
                    m += delta_chi2 *
                         (Eigen::MatrixXcd(bb.diagonal().asDiagonal()) * phis[g] -
                          Eigen::MatrixXcd(gg.diagonal().asDiagonal()) * phis[b]);
                for (int i = 0; i < m.rows(); ++i)
                    for (int j = 0; j < m.cols(); ++j) {
                        r.push_back(m(i, j).real());
                        r.push_back(m(i, j).imag());
                    }
            }
        }
    }
    return Eigen::Map<Eigen::VectorXd>(r.data(), static_cast<Eigen::Index>(r.size()));
}

}  // namespace

std::vector<StructuralMatrix> refine_solution(const std::vector<StructuralMatrix>& phis,
                                              const DeformationSpec& spec, int max_iterations,
                                              double step_tol) {
    const int n = static_cast<int>(phis.size());
    const int rows = phis[0].rows(), cols = phis[0].cols();
    const int nvar = n * rows * cols * 2;

    Eigen::VectorXd x(nvar);
    int k = 0;
    for (const auto& p : phis)
        for (int i = 0; i < rows; ++i)
            for (int j = 0; j < cols; ++j) {
                x(k++) = p.mat()(i, j).real();
                x(k++) = p.mat()(i, j).imag();
            }

    const auto unpack = [&](const Eigen::VectorXd& v) {
        std::vector<Eigen::MatrixXcd> out(n, Eigen::MatrixXcd(rows, cols));
        int p = 0;
        for (int a = 0; a < n; ++a)
            for (int i = 0; i < rows; ++i)
                for (int j = 0; j < cols; ++j) {
                    out[a](i, j) = Complex(v(p), v(p + 1));
                    p += 2;
                }
        return out;
    };

    const double d2 = spec.delta_chi2();
    Eigen::VectorXd r = residual_vector(unpack(x), d2);
    for (int iter = 0; iter < max_iterations; ++iter) {
        if (r.norm() < 1e-15) break;
        const double h = 1e-7;
        Eigen::MatrixXd jac(r.size(), nvar);
        for (int v = 0; v < nvar; ++v) {
            Eigen::VectorXd xp = x;
            xp(v) += h;
            jac.col(v) = (residual_vector(unpack(xp), d2) - r) / h;
        }
        const Eigen::MatrixXd jtj =
            jac.transpose() * jac + 1e-12 * Eigen::MatrixXd::Identity(nvar, nvar);
        const Eigen::VectorXd step = jtj.ldlt().solve(-jac.transpose() * r);
        x += step;
        r = residual_vector(unpack(x), d2);
        if (step.lpNorm<Eigen::Infinity>() < step_tol) break;
    }

    std::vector<StructuralMatrix> out;
    out.reserve(n);
    for (const auto& m : unpack(x)) out.emplace_back(m, true);
    return out;
}

}  // namespace cfent
