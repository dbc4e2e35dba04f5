#ifndef CFENT_COMPOSITE_HPP
#define CFENT_COMPOSITE_HPP

#include <random>
#include <vector>

#include "cfent/fock.hpp"

namespace cfent {

// Complex coefficient matrix of the bilinear composite ansatz
// A^dag = sum_{mu,nu} Phi^{mu nu} a^dag_mu b^dag_nu, row = boson mode,
// column = fermion mode. Normalized so Tr(Phi Phi^dag) = 1.
class StructuralMatrix {
  public:
    explicit StructuralMatrix(Eigen::MatrixXcd data, bool renormalize = false);
    static StructuralMatrix random(int rows, int cols, std::mt19937_64& rng);

    const Eigen::MatrixXcd& mat() const { return data_; }
    int rows() const { return static_cast<int>(data_.rows()); }
    int cols() const { return static_cast<int>(data_.cols()); }

  private:
    Eigen::MatrixXcd data_;
};

// k-th forward difference sum_{l=0..k} (-1)^(k-l) C(k,l) chi(n+l)
double delta_chi(const StructureFunction& chi, int k, int n);

double binomial(int n, int k);

SparseOp composite_creator(const StructuralMatrix& phi, const FockBasis& basis,
                           const StructureFunction& chi);
SparseOp composite_annihilator(const StructuralMatrix& phi, const FockBasis& basis,
                               const StructureFunction& chi);

StateVec vacuum_state(const FockBasis& basis);
StateVec one_cf_state(const StructuralMatrix& phi, const FockBasis& basis);

struct WeakEqualReport {
    bool equal = false;
    double max_residual = 0.0;
};

// Equality of G and H on all states generated from the vacuum by ordered
// products of up to `depth` creation operators from `generators`
// (depth < 0 means one factor per generator). The residual for each
// generated state is ||(G - H) psi|| / ||psi||; null products are skipped.
WeakEqualReport weak_equal(const SparseOp& g, const SparseOp& h,
                           const std::vector<SparseOp>& generators,
                           const FockBasis& basis, double tol, int depth = -1);

// Closed forms of the constituent-level expansions. Diagonal chi-difference
// factors are only defined where the table reaches; comparisons must be
// restricted to columns with enough boson headroom.
SparseOp closed_form_anticommutator(const StructuralMatrix& phi_a, const StructuralMatrix& phi_b,
                                    const StructureFunction& chi, const FockBasis& basis);
SparseOp closed_form_nested_commutator(const StructuralMatrix& phi_a, const StructuralMatrix& phi_b,
                                       const StructuralMatrix& phi_g, const StructureFunction& chi,
                                       const FockBasis& basis);
SparseOp closed_form_double_anticommutator(const StructuralMatrix& phi_a, const StructuralMatrix& phi_b,
                                           const StructuralMatrix& phi_g1, const StructuralMatrix& phi_g2,
                                           const StructureFunction& chi, const FockBasis& basis);

// Direct {A_a, A^dag_b} against the three-term expansion (and, for the
// non-deformed chi, its reduced form); max entrywise difference on safe columns.
double verify_anticommutator_expansion(const StructuralMatrix& phi_a, const StructuralMatrix& phi_b,
                                       const StructureFunction& chi, const FockBasis& basis);

// [{A_a, A^dag_b}, A^dag_g] and {[{A_a, A^dag_b}, A^dag_g1], A^dag_g2}
// against their closed forms over all index choices from `phis`; for the
// non-deformed chi also the cubic-matrix reduction. Max residual on safe columns.
double verify_nested_identities(const std::vector<StructuralMatrix>& phis,
                                const StructureFunction& chi, const FockBasis& basis);

}  // namespace cfent

#endif
