#ifndef CFENT_FOCK_HPP
#define CFENT_FOCK_HPP

#include <complex>
#include <cstdint>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/SparseCore>

namespace cfent {

using Complex = std::complex<double>;
using SparseOp = Eigen::SparseMatrix<Complex>;
using StateVec = Eigen::VectorXcd;

// Entries smaller than this are dropped from sparse operators.
inline constexpr double kSparseDropTol = 1e-15;

struct ModeConfig {
    int boson_modes = 1;
    int fermion_modes = 1;
    int boson_cutoff = 2;  // max occupation per boson mode, inclusive

    void validate() const;
};

// Deformation structure function chi(n), tabulated on 0..n_upper.
// chi(0) = 0 and chi(1) = 1 are required; values must be non-negative
// because sqrt(chi) enters matrix elements.
class StructureFunction {
  public:
    static StructureFunction from_values(std::vector<double> values);
    // chi(n) = n
    static StructureFunction nondeformed(int n_upper);
    // chi = 0, 1, chi2, 3, 4, ... (only chi(2) deviates from the linear case)
    static StructureFunction with_chi2(double chi2, int n_upper);
    // chi(n) = (1 - q^n) / (1 - q)
    static StructureFunction q_deformed(double q, int n_upper);
    // quadratic quasiboson function (1 + kappa/m) n - (kappa/m) n^2,
    // valid while non-negative on 0..n_upper
    static StructureFunction quasiboson(int m, int kappa_sign, int n_upper);

    double operator()(int n) const;
    int max_arg() const { return static_cast<int>(values_.size()) - 1; }
    double chi2() const { return (*this)(2); }
    bool is_nondeformed(double tol = 1e-12) const;

  private:
    explicit StructureFunction(std::vector<double> values);
    std::vector<double> values_;
};

struct BasisState {
    std::vector<int> boson_occ;
    std::uint32_t fermion_bits = 0;  // bit v set <=> fermion mode v occupied

    bool fermion_occupied(int mode) const { return (fermion_bits >> mode) & 1u; }
    int fermion_count_below(int mode) const;
};

// All occupation states (n_1..n_Db; eps_1..eps_Df) with n <= cutoff,
// ordered lexicographically: boson occupations are the slow indices,
// fermion bits the fast ones, mode 0 slowest within each sector.
class FockBasis {
  public:
    static constexpr std::int64_t kDefaultStateLimit = 10'000'000;

    explicit FockBasis(ModeConfig config, std::int64_t state_limit = kDefaultStateLimit);

    const ModeConfig& config() const { return config_; }
    int size() const { return static_cast<int>(states_.size()); }
    const BasisState& state(int index) const { return states_[index]; }
    int index_of(const BasisState& s) const;

    int boson_modes() const { return config_.boson_modes; }
    int fermion_modes() const { return config_.fermion_modes; }
    int cutoff() const { return config_.boson_cutoff; }

    // true iff every boson occupation of state i leaves room for
    // `headroom` more quanta below the cutoff
    bool has_headroom(int index, int headroom) const;

  private:
    ModeConfig config_;
    std::vector<BasisState> states_;
};

FockBasis enumerate_basis(const ModeConfig& config,
                          std::int64_t state_limit = FockBasis::kDefaultStateLimit);

enum class Sector { Boson, Fermion };

// a^dag_mu with matrix element sqrt(chi(n+1)); states at the cutoff are
// annihilated rather than wrapped
SparseOp boson_create(const FockBasis& basis, const StructureFunction& chi, int mode);
SparseOp boson_annihilate(const FockBasis& basis, const StructureFunction& chi, int mode);

// b^dag_nu with Jordan-Wigner sign (-1)^(#occupied fermion modes below nu);
// boson and fermion sectors commute
SparseOp fermion_create(const FockBasis& basis, int mode);
SparseOp fermion_annihilate(const FockBasis& basis, int mode);

SparseOp number_operator(const FockBasis& basis, Sector sector, int mode);

SparseOp identity_op(int dim);
SparseOp adjoint_op(const SparseOp& op);
SparseOp anticommutator(const SparseOp& a, const SparseOp& b);
SparseOp commutator(const SparseOp& a, const SparseOp& b);
double max_abs(const SparseOp& op);
// largest |entry| over columns restricted to basis states with the given headroom
double max_abs_on_safe_columns(const SparseOp& op, const FockBasis& basis, int headroom);
SparseOp pruned(SparseOp op, double tol = kSparseDropTol);

}  // namespace cfent

#endif
