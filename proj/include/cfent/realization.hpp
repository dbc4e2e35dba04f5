#ifndef CFENT_REALIZATION_HPP
#define CFENT_REALIZATION_HPP

#include <functional>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "cfent/composite.hpp"
#include "cfent/fock.hpp"

namespace cfent {

// The only deformation datum entering the one-composite-level conditions
// is chi(2); delta_chi2 = chi(2) - 2 vanishes for a plain boson.
struct DeformationSpec {
    double chi2 = 2.0;

    static DeformationSpec nondeformed() { return {2.0}; }
    static DeformationSpec deformed(double chi2) { return {chi2}; }
    double delta_chi2() const { return chi2 - 2.0; }
    bool is_nondeformed(double tol = 1e-12) const { return std::abs(delta_chi2()) < tol; }
};

struct ConditionResidual {
    std::string name;
    double value = 0.0;
};

struct RealizationReport {
    std::vector<ConditionResidual> residuals;
    double tolerance = 1e-10;
    bool pass = false;

    double max_residual() const;
    double rss() const;
};

// Trace orthonormality plus the antisymmetrized cubic conditions, with the
// diagonal-projection terms weighted by delta_chi2 when deformed.
RealizationReport check_realization(const std::vector<StructuralMatrix>& phis,
                                    const DeformationSpec& spec, double tol = 1e-10);
RealizationReport check_nondeformed(const std::vector<StructuralMatrix>& phis, double tol = 1e-10);
RealizationReport check_deformed_two_mode(const StructuralMatrix& phi1, const StructuralMatrix& phi2,
                                          const DeformationSpec& spec, double tol = 1e-10);

// Root-sum-square of all applicable condition residuals; the oracle every
// solver output is measured against.
double residual(const std::vector<StructuralMatrix>& phis, const DeformationSpec& spec);

// Joint frame: phi1 = U1 D1 V1^dag with descending non-negative D1 and
// det(U1) = 1, phi2tilde = U1^dag phi2 V1.
struct CanonicalPair {
    Eigen::VectorXd d1;
    Eigen::MatrixXcd phi2tilde;
    Eigen::MatrixXcd u1;
    Eigen::MatrixXcd v1;
};
CanonicalPair canonicalize(const StructuralMatrix& phi1, const StructuralMatrix& phi2);

// Coefficient matrix of the linear system obeyed by the expansion of
// phi2tilde in the deformed two-mode case, and its determinant together
// with the closed-form prediction -chi2 (chi2 - 2) |u|^2 |v|^2 (l1^2 - l2^2)^2.
struct DeformedLinearSystem {
    Eigen::Matrix3d coefficients;
    double determinant = 0.0;
    double predicted_determinant = 0.0;
};
DeformedLinearSystem deformed_linear_system(const Eigen::Vector2d& d1, Complex u, Complex v,
                                            double chi2);

enum class FamilyTag {
    TwoModeDistinct,
    TwoModeEqual,
    DeformedB,
    DeformedCDiagonal,
    DeformedCNilpotent,
    ThreeModeDistinct,
    ThreeModeTwoEqual,
    ThreeModeAllEqual,
};
inline constexpr int kFamilyCount = 8;
FamilyTag family_tag(int index);
std::string family_name(FamilyTag tag);
std::optional<FamilyTag> family_from_name(const std::string& name);

struct ParamSpec {
    std::string name;
    double lo = 0.0;
    double hi = 0.0;
};

struct FamilySample {
    StructuralMatrix phi1;
    StructuralMatrix phi2;
    Eigen::VectorXd schmidt1;  // declared Schmidt coefficients, descending
    Eigen::VectorXd schmidt2;
    double chi2 = 2.0;
};

// A generative description of one analytic solution family: fixed data
// (singular values, deformation, left frame where it matters) plus named
// free parameters. generate() works in the canonical frame; sample() draws
// parameters uniformly and dresses with random frames that leave the
// conditions invariant.
class SolutionFamily {
  public:
    using Generator = std::function<FamilySample(const std::vector<double>&)>;

    SolutionFamily(FamilyTag tag, DeformationSpec spec, std::vector<ParamSpec> params,
                   Generator gen, bool left_frame_free);

    FamilyTag tag() const { return tag_; }
    const DeformationSpec& deformation() const { return spec_; }
    const std::vector<ParamSpec>& params() const { return params_; }

    FamilySample generate(const std::vector<double>& values) const;
    FamilySample sample(std::mt19937_64& rng) const;

  private:
    FamilyTag tag_;
    DeformationSpec spec_;
    std::vector<ParamSpec> params_;
    Generator gen_;
    bool left_frame_free_;
};

// Two-mode families for a plain constituent boson; picks the distinct or
// the degenerate branch from d1.
SolutionFamily solve_two_mode_nondeformed(const Eigen::Vector2d& d1);

// Families compatible with the given singular values, left SU(2) frame and
// deformation; empty when no case applies.
std::vector<SolutionFamily> solve_two_mode_deformed(const Eigen::Vector2d& d1,
                                                    const Eigen::Matrix2cd& u1,
                                                    const DeformationSpec& spec);

enum class ThreeModePattern { Distinct, TwoEqual, AllEqual };

// branch selects the sub-family where the pattern splits further:
// TwoEqual: 0 = unitary 2x2 block, 1 = distinct block singular values;
// AllEqual: 0 = diagonal, 1 = 2x2 block, 2 = traceless unitary.
SolutionFamily solve_three_mode(const Eigen::Vector3d& d1, ThreeModePattern pattern, int branch = 0);

// Draws everything (singular values, deformation, frames, parameters) for
// the given family tag.
FamilySample sample_family(FamilyTag tag, std::mt19937_64& rng);

struct ModeBoundReport {
    double product_norm = 0.0;    // || A_1 A^dag_1 A^dag_2 ... A^dag_k |0> ||
    double remainder_norm = 0.0;  // || A^dag_2 ... A^dag_k |0> ||
    bool product_vanishes = false;
    bool more_composites_than_fermion_modes = false;
};
ModeBoundReport mode_count_bound_check(const std::vector<StructuralMatrix>& phis,
                                       const FockBasis& basis, const StructureFunction& chi);

// Gauss-Newton polish of a near-solution against residual(); step
// tolerance 1e-12, at most 50 iterations.
std::vector<StructuralMatrix> refine_solution(const std::vector<StructuralMatrix>& phis,
                                              const DeformationSpec& spec, int max_iterations = 50,
                                              double step_tol = 1e-12);

}  // namespace cfent

#endif
