#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "cfent/entanglement.hpp"
#include "cfent/realization.hpp"
#include "cfent/unitary.hpp"

using namespace cfent;

namespace {
constexpr double kPi = std::numbers::pi;
constexpr double kLn2 = 0.6931471805599453;
constexpr double kLn3 = 1.0986122886681098;

StructuralMatrix diag_phi2(double a, double b) {
    return StructuralMatrix(Eigen::Vector2cd(a, b).asDiagonal().toDenseMatrix());
}
}  // namespace

TEST_CASE("plain-boson condition checks") {
    std::mt19937_64 rng(41);
    CHECK(check_nondeformed({StructuralMatrix::random(2, 2, rng)}).pass);

    const double th = kPi / 6;
    const auto phi1 = diag_phi2(std::cos(th), std::sin(th));
    const auto phi2 = diag_phi2(std::sin(th), -std::cos(th));
    const auto good = check_nondeformed({phi1, phi2});
    CHECK(good.pass);
    CHECK(good.max_residual() < 1e-14);

    // an off-diagonal perturbation breaks the cubic condition
    Eigen::Matrix2cd bad = Eigen::Vector2cd(0.0, 1.0).asDiagonal();
    bad(0, 1) = 0.1;
    const auto report =
        check_nondeformed({diag_phi2(1.0, 0.0), StructuralMatrix(bad, true)});
    CHECK_FALSE(report.pass);
    double cubic = 0.0;
    for (const auto& r : report.residuals)
        if (r.name.rfind("cubic", 0) == 0) cubic = std::max(cubic, r.value);
    CHECK(cubic > 1e-3);
}

TEST_CASE("deformed condition checks against known cases") {
    std::mt19937_64 rng(42);
    // chi(2) = 2 reduces to the plain case
    const auto nd = solve_two_mode_nondeformed({std::cos(0.4), std::sin(0.4)}).sample(rng);
    CHECK(check_deformed_two_mode(nd.phi1, nd.phi2, DeformationSpec::nondeformed()).pass);

    // uniform solution of the degenerate/vanishing-chi2 case
    const auto b = sample_family(FamilyTag::DeformedB, rng);
    CHECK(check_deformed_two_mode(b.phi1, b.phi2, DeformationSpec::deformed(b.chi2)).pass);

    // strictly upper-triangular solution at chi(2) = 1
    const auto nil = sample_family(FamilyTag::DeformedCNilpotent, rng);
    CHECK(nil.chi2 == doctest::Approx(1.0));
    CHECK(check_deformed_two_mode(nil.phi1, nil.phi2, DeformationSpec::deformed(1.0)).pass);
    const auto s = schmidt(nil.phi2.mat());
    CHECK(s.values(0) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(std::abs(s.values(1)) < 1e-12);
    CHECK(entropy(s) == doctest::Approx(0.0));
}

TEST_CASE("canonical joint frame") {
    std::mt19937_64 rng(43);
    // already-diagonal input keeps its partner fixed up to phases
    const auto p1 = diag_phi2(0.8, 0.6);
    const auto p2 = diag_phi2(0.6, -0.8);
    const auto canon = canonicalize(p1, p2);
    CHECK(canon.d1(0) == doctest::Approx(0.8).epsilon(1e-13));
    CHECK(canon.d1(1) == doctest::Approx(0.6).epsilon(1e-13));
    for (int i = 0; i < 2; ++i)
        CHECK(std::abs(std::abs(canon.phi2tilde(i, i)) - std::abs(p2.mat()(i, i))) < 1e-12);

    for (int trial = 0; trial < 30; ++trial) {
        const Eigen::MatrixXcd u = random_unitary(2, rng), v = random_unitary(2, rng);
        const StructuralMatrix phi1(
            u * Eigen::Vector2cd(0.8, 0.6).asDiagonal().toDenseMatrix() * v.adjoint());
        const StructuralMatrix phi2 = StructuralMatrix::random(2, 2, rng);
        const auto c = canonicalize(phi1, phi2);
        CHECK(c.d1(0) == doctest::Approx(0.8).epsilon(1e-12));
        CHECK(c.d1(1) == doctest::Approx(0.6).epsilon(1e-12));
        CHECK(std::abs(c.u1.determinant() - Complex(1, 0)) < 1e-12);
        // both inputs are reproduced by the joint frame
        const Eigen::MatrixXcd d = c.d1.cast<Complex>().asDiagonal();
        CHECK((c.u1 * d * c.v1.adjoint() - phi1.mat()).norm() < 1e-12);
        CHECK((c.u1 * c.phi2tilde * c.v1.adjoint() - phi2.mat()).norm() < 1e-12);
    }

    // equal singular values
    const double r = 1.0 / std::sqrt(2.0);
    const Eigen::MatrixXcd u = random_unitary(2, rng);
    const StructuralMatrix eq(u * (r * Eigen::Matrix2cd::Identity()));
    const auto c = canonicalize(eq, diag_phi2(r, -r));
    CHECK(c.d1(0) == doctest::Approx(r).epsilon(1e-13));
    CHECK(c.d1(1) == doctest::Approx(r).epsilon(1e-13));

    // rectangular inputs keep the joint-frame reconstruction
    for (auto [rows, cols] : {std::pair{2, 3}, std::pair{3, 2}}) {
        const StructuralMatrix p1r = StructuralMatrix::random(rows, cols, rng);
        const StructuralMatrix p2r = StructuralMatrix::random(rows, cols, rng);
        const auto cr = canonicalize(p1r, p2r);
        Eigen::MatrixXcd d = Eigen::MatrixXcd::Zero(rows, cols);
        for (int i = 0; i < cr.d1.size(); ++i) d(i, i) = cr.d1(i);
        CHECK((cr.u1 * d * cr.v1.adjoint() - p1r.mat()).norm() < 1e-12);
        CHECK((cr.u1 * cr.phi2tilde * cr.v1.adjoint() - p2r.mat()).norm() < 1e-12);
    }
}

TEST_CASE("two-mode families in the canonical frame") {
    const double th = kPi / 6;
    const auto family = solve_two_mode_nondeformed({std::cos(th), std::sin(th)});
    CHECK(family.tag() == FamilyTag::TwoModeDistinct);
    const auto sol = family.generate({0.0});
    CHECK(sol.phi2.mat()(0, 0).real() == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(sol.phi2.mat()(1, 1).real() == doctest::Approx(-0.8660254037844387).epsilon(1e-12));

    const double r = 1.0 / std::sqrt(2.0);
    const auto equal = solve_two_mode_nondeformed({r, r});
    CHECK(equal.tag() == FamilyTag::TwoModeEqual);
    std::mt19937_64 rng(44);
    for (int trial = 0; trial < 25; ++trial) {
        const auto s = equal.sample(rng);
        const auto sv = schmidt(s.phi2.mat());
        CHECK(sv.values(0) == doctest::Approx(r).epsilon(1e-10));
        CHECK(sv.values(1) == doctest::Approx(r).epsilon(1e-10));
        CHECK(residual({s.phi1, s.phi2}, DeformationSpec::nondeformed()) < 1e-12);
    }
}

TEST_CASE("deformed linear system and its determinant") {
    // the closed form vanishes in the solvable cases
    CHECK(std::abs(deformed_linear_system({0.8, 0.6}, Complex(0.6, 0), Complex(0, 0.8), 2.0)
                       .determinant) < 1e-14);
    const double r = 1.0 / std::sqrt(2.0);
    CHECK(std::abs(
              deformed_linear_system({r, r}, Complex(0.6, 0), Complex(0, 0.8), 0.7).determinant) <
          1e-14);

    // worked value: chi2 = 1, |u|^2 = |v|^2 = 1/2, lambda^2 = (0.8, 0.2)
    const auto sys = deformed_linear_system({std::sqrt(0.8), std::sqrt(0.2)}, Complex(r, 0),
                                            Complex(0, r), 1.0);
    CHECK(sys.determinant == doctest::Approx(0.09).epsilon(1e-12));
    CHECK(sys.predicted_determinant == doctest::Approx(0.09).epsilon(1e-12));

    std::mt19937_64 rng(45);
    std::uniform_real_distribution<double> chi2(0.0, 4.0), ang(0.0, kPi / 2),
        ph(0.0, 2 * kPi);
    for (int trial = 0; trial < 1000; ++trial) {
        const double t = ang(rng), b = ang(rng);
        const Complex u = std::polar(std::cos(b), ph(rng)), v = std::polar(std::sin(b), ph(rng));
        const auto s = deformed_linear_system({std::cos(t), std::sin(t)}, u, v, chi2(rng));
        CHECK(std::abs(s.determinant - s.predicted_determinant) < 1e-12);
    }
}

TEST_CASE("deformed two-mode case selection") {
    const Eigen::Matrix2cd id = Eigen::Matrix2cd::Identity();
    Eigen::Matrix2cd generic;
    generic << Complex(0.6, 0), Complex(0, 0.8), Complex(0, 0.8), Complex(0.6, 0);
    // case a
    CHECK(solve_two_mode_deformed({0.9, std::sqrt(1 - 0.81)}, id,
                                  DeformationSpec::nondeformed())
              .size() == 1);
    // case b only (generic frame, chi2 = 0)
    auto fams = solve_two_mode_deformed({0.8, 0.6}, generic, DeformationSpec::deformed(0.0));
    CHECK(fams.size() == 1);
    CHECK(fams[0].tag() == FamilyTag::DeformedB);
    // case c diagonal + nilpotent at chi2 = 1 with a rank-one frame
    fams = solve_two_mode_deformed({1.0, 0.0}, id, DeformationSpec::deformed(1.0));
    CHECK(fams.size() == 2);
    CHECK(fams[0].tag() == FamilyTag::DeformedCDiagonal);
    CHECK(fams[1].tag() == FamilyTag::DeformedCNilpotent);
    // no case applies: uv != 0, distinct values, chi2 not in {0, 2}
    CHECK(solve_two_mode_deformed({0.8, 0.6}, generic, DeformationSpec::deformed(1.0)).empty());

    // the degenerate-frame family keeps entropy at ln 2
    std::mt19937_64 rng(46);
    const double r = 1.0 / std::sqrt(2.0);
    auto equal_fams = solve_two_mode_deformed({r, r}, generic, DeformationSpec::deformed(0.7));
    REQUIRE(equal_fams.size() == 1);
    const auto s = equal_fams[0].sample(rng);
    CHECK(entropy(schmidt(s.phi2.mat())) == doctest::Approx(kLn2).epsilon(1e-12));
    CHECK(entropy(schmidt(s.phi1.mat())) == doctest::Approx(kLn2).epsilon(1e-12));
}

TEST_CASE("three-mode families") {
    std::mt19937_64 rng(47);

    // all-equal frame: first-mode entropy is pinned at ln 3
    const auto eq = sample_family(FamilyTag::ThreeModeAllEqual, rng);
    CHECK(entropy(schmidt(eq.phi1.mat())) == doctest::Approx(kLn3).epsilon(1e-12));
    CHECK(residual({eq.phi1, eq.phi2}, DeformationSpec::nondeformed()) < 1e-10);

    // unit block trace forces the equal triple in the second mode
    const double l = 1.0 / std::numbers::sqrt3;
    const auto blockfam = solve_three_mode({l, l, l}, ThreeModePattern::AllEqual, 1);
    const auto bs = blockfam.generate({0.0, kPi / 3, 0.9, 0.3});  // trace 2*cos(0)*cos(pi/3) = 1
    CHECK(entropy(schmidt(bs.phi2.mat())) == doctest::Approx(kLn3).epsilon(1e-11));

    // distinct diagonal family passes the residual oracle
    for (int trial = 0; trial < 25; ++trial) {
        const auto s = sample_family(FamilyTag::ThreeModeDistinct, rng);
        CHECK(residual({s.phi1, s.phi2}, DeformationSpec::nondeformed()) < 1e-10);
        CHECK(std::abs(entropy(schmidt(s.phi1.mat())) - entropy(schmidt(s.phi2.mat()))) <=
              kLn2 + 1e-12);
    }
}

TEST_CASE("declared Schmidt coefficients round-trip through the factorization") {
    std::mt19937_64 rng(48);
    for (int f = 0; f < kFamilyCount; ++f) {
        for (int trial = 0; trial < 12; ++trial) {
            const auto s = sample_family(family_tag(f), rng);
            const auto c = canonicalize(s.phi1, s.phi2);
            const auto sv2 = schmidt(s.phi2.mat());
            REQUIRE(sv2.values.size() == s.schmidt2.size());
            for (int i = 0; i < s.schmidt2.size(); ++i) {
                CHECK(std::abs(sv2.values(i) - s.schmidt2(i)) < 1e-12);
                CHECK(std::abs(c.d1(i) - s.schmidt1(i)) < 1e-12);
            }
        }
    }
}

TEST_CASE("family sampling is deterministic for a fixed seed") {
    for (int f = 0; f < kFamilyCount; ++f) {
        std::mt19937_64 a(777), b(777);
        const auto sa = sample_family(family_tag(f), a);
        const auto sb = sample_family(family_tag(f), b);
        CHECK(sa.phi1.mat() == sb.phi1.mat());
        CHECK(sa.phi2.mat() == sb.phi2.mat());
        CHECK(sa.chi2 == sb.chi2);
    }
}

TEST_CASE("solver soundness over sampled families") {
    std::mt19937_64 rng(49);
    for (int f = 0; f < kFamilyCount; ++f) {
        for (int trial = 0; trial < 40; ++trial) {
            const auto s = sample_family(family_tag(f), rng);
            CHECK(residual({s.phi1, s.phi2}, DeformationSpec::deformed(s.chi2)) < 1e-10);
        }
    }
}

TEST_CASE("residual oracle behavior") {
    std::mt19937_64 rng(50);
    // random pairs are generically far from the solution set
    double worst = 1.0;
    for (int trial = 0; trial < 20; ++trial) {
        const auto a = StructuralMatrix::random(2, 2, rng);
        const auto b = StructuralMatrix::random(2, 2, rng);
        worst = std::min(worst, residual({a, b}, DeformationSpec::nondeformed()));
    }
    CHECK(worst > 1e-6);

    // a small perturbation lands in the continuity band
    const auto sol = solve_two_mode_nondeformed({std::cos(0.5), std::sin(0.5)}).generate({1.1});
    Eigen::Matrix2cd bumped = sol.phi2.mat();
    bumped.array() += Complex(1e-3, 0);
    const double r =
        residual({sol.phi1, StructuralMatrix(bumped, true)}, DeformationSpec::nondeformed());
    CHECK(r > 1e-4);
    CHECK(r < 1e-1);
}

TEST_CASE("refinement polishes a perturbed solution") {
    std::mt19937_64 rng(51);
    std::normal_distribution<double> g(0.0, 1e-3);
    const auto sol = sample_family(FamilyTag::TwoModeDistinct, rng);
    Eigen::Matrix2cd p1 = sol.phi1.mat(), p2 = sol.phi2.mat();
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j) {
            p1(i, j) += Complex(g(rng), g(rng));
            p2(i, j) += Complex(g(rng), g(rng));
        }
    const std::vector<StructuralMatrix> noisy{StructuralMatrix(p1, true),
                                              StructuralMatrix(p2, true)};
    CHECK(residual(noisy, DeformationSpec::nondeformed()) > 1e-4);
    const auto polished = refine_solution(noisy, DeformationSpec::nondeformed());
    CHECK(residual(polished, DeformationSpec::nondeformed()) < 1e-10);
}

TEST_CASE("composite-mode count bound") {
    std::mt19937_64 rng(52);
    const FockBasis basis = enumerate_basis({2, 2, 3});
    const auto chi = StructureFunction::nondeformed(4);
    const auto sol = solve_two_mode_nondeformed({std::cos(0.5), std::sin(0.5)}).sample(rng);
    const auto extra = StructuralMatrix::random(2, 2, rng);

    // three composite modes over two fermion modes: the product state dies
    const auto over = mode_count_bound_check({extra, sol.phi1, sol.phi2}, basis, chi);
    CHECK(over.more_composites_than_fermion_modes);
    CHECK(over.product_vanishes);
    CHECK(over.product_norm < 1e-13);
    CHECK(over.remainder_norm > 0.1);

    // two modes survive
    const auto ok = mode_count_bound_check({sol.phi1, sol.phi2}, basis, chi);
    CHECK_FALSE(ok.more_composites_than_fermion_modes);
    CHECK_FALSE(ok.product_vanishes);
    CHECK(ok.product_norm > 0.1);

    // three modes over three fermion modes survive as well
    const FockBasis basis3 = enumerate_basis({3, 3, 3});
    const auto chi3 = StructureFunction::nondeformed(4);
    const auto tri = sample_family(FamilyTag::ThreeModeDistinct, rng);
    const auto third = StructuralMatrix::random(3, 3, rng);
    const auto fine = mode_count_bound_check({third, tri.phi1, tri.phi2}, basis3, chi3);
    CHECK_FALSE(fine.more_composites_than_fermion_modes);
    CHECK(fine.product_norm > 1e-3);

    // every two-fermion-mode family dies when extended by a third composite
    for (const auto tag : {FamilyTag::TwoModeDistinct, FamilyTag::TwoModeEqual,
                           FamilyTag::DeformedB, FamilyTag::DeformedCDiagonal,
                           FamilyTag::DeformedCNilpotent}) {
        const auto fam = sample_family(tag, rng);
        const auto chi_fam = StructureFunction::with_chi2(fam.chi2, 4);
        const auto stretched = mode_count_bound_check(
            {StructuralMatrix::random(2, 2, rng), fam.phi1, fam.phi2}, basis, chi_fam);
        CHECK(stretched.more_composites_than_fermion_modes);
        CHECK(stretched.product_vanishes);
    }
}

TEST_CASE("diagonal-projection identity behind the deformed reduction") {
    std::mt19937_64 rng(53);
    std::normal_distribution<double> g(0.0, 1.0);
    for (int trial = 0; trial < 50; ++trial) {
        const double b = std::abs(g(rng));
        const Complex u = std::polar(std::cos(b), uniform_angle(rng));
        const Complex v = std::polar(std::sin(b), uniform_angle(rng));
        Eigen::Matrix2cd u1;
        u1 << u, v, -std::conj(v), std::conj(u);
        Eigen::Matrix2cd r;
        r << std::norm(u) - std::norm(v), 2.0 * std::conj(u) * v, 2.0 * u * std::conj(v),
            std::norm(v) - std::norm(u);
        Eigen::Matrix2cd x;
        for (int i = 0; i < 2; ++i)
            for (int j = 0; j < 2; ++j) x(i, j) = Complex(g(rng), g(rng));
        const Eigen::Matrix2cd lhs =
            u1.adjoint() * Eigen::Matrix2cd((u1 * x * u1.adjoint()).diagonal().asDiagonal()) * u1;
        const Eigen::Matrix2cd rhs = 0.5 * x + 0.5 * r * x * r;
        CHECK((lhs - rhs).norm() < 1e-12);
    }
}
