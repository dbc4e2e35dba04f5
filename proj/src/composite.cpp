#include "cfent/composite.hpp"

#include <cmath>
#include <stdexcept>

namespace cfent {

namespace {

// A monomial is a product of elementary factors, stored left-to-right as
// written and applied right-to-left. Every factor maps a basis state to at
// most one basis state, so operators assemble in one pass per column.
struct Factor {
    enum Kind { ACreate, AAnnih, BCreate, BAnnih, DeltaDiag } kind;
    int mode = 0;
    int order = 0;  // DeltaDiag only
};

struct Monomial {
    Complex coeff;
    std::vector<Factor> factors;
};

bool apply_factor(const FockBasis& basis, const StructureFunction& chi, const Factor& f,
                  BasisState& s, Complex& coeff) {
    switch (f.kind) {
        case Factor::ACreate: {
            int& n = s.boson_occ[f.mode];
            if (n >= basis.cutoff()) return false;  // truncation: annihilate at the top
            coeff *= std::sqrt(chi(n + 1));
            ++n;
            return true;
        }
        case Factor::AAnnih: {
            int& n = s.boson_occ[f.mode];
            if (n == 0) return false;
            coeff *= std::sqrt(chi(n));
            --n;
            return true;
        }
        case Factor::BCreate: {
            if (s.fermion_occupied(f.mode)) return false;
            if (s.fermion_count_below(f.mode) % 2 == 1) coeff = -coeff;
            s.fermion_bits |= (1u << f.mode);
            return true;
        }
        case Factor::BAnnih: {
            if (!s.fermion_occupied(f.mode)) return false;
            if (s.fermion_count_below(f.mode) % 2 == 1) coeff = -coeff;
            s.fermion_bits &= ~(1u << f.mode);
            return true;
        }
        case Factor::DeltaDiag: {
            const int n = s.boson_occ[f.mode];
            if (n + f.order > chi.max_arg()) return false;  // outside the table
            coeff *= delta_chi(chi, f.order, n);
            return true;
        }
    }
    return false;
}

SparseOp build_from_monomials(const FockBasis& basis, const StructureFunction& chi,
                              const std::vector<Monomial>& monomials) {
    std::vector<Eigen::Triplet<Complex>> trip;
    for (const Monomial& m : monomials) {
        if (std::abs(m.coeff) <= kSparseDropTol) continue;
        for (int col = 0; col < basis.size(); ++col) {
            BasisState s = basis.state(col);
            Complex c = m.coeff;
            bool alive = true;
            for (auto it = m.factors.rbegin(); it != m.factors.rend() && alive; ++it)
                alive = apply_factor(basis, chi, *it, s, c);
            if (alive && std::abs(c) > kSparseDropTol)
                trip.emplace_back(basis.index_of(s), col, c);
        }
    }
    SparseOp op(basis.size(), basis.size());
    op.setFromTriplets(trip.begin(), trip.end());
    return pruned(std::move(op));
}

void check_shapes(const StructuralMatrix& phi, const FockBasis& basis) {
    if (phi.rows() != basis.boson_modes() || phi.cols() != basis.fermion_modes())
        throw std::invalid_argument("structural matrix does not match the basis mode counts");
}

}  // namespace

StructuralMatrix::StructuralMatrix(Eigen::MatrixXcd data, bool renormalize) : data_(std::move(data)) {
    if (data_.rows() < 1 || data_.cols() < 1)
        throw std::invalid_argument("structural matrix must be non-empty");
    const double norm = data_.norm();
    if (renormalize) {
        if (norm < 1e-14) throw std::invalid_argument("cannot normalize a zero matrix");
        data_ /= norm;
    } else if (std::abs(norm - 1.0) > 1e-12) {
        throw std::invalid_argument("structural matrix must have unit Frobenius norm");
    }
}

StructuralMatrix StructuralMatrix::random(int rows, int cols, std::mt19937_64& rng) {
    std::normal_distribution<double> gauss(0.0, 1.0);
    Eigen::MatrixXcd m(rows, cols);
    for (int i = 0; i < rows; ++i)
        for (int j = 0; j < cols; ++j) m(i, j) = Complex(gauss(rng), gauss(rng));
    return StructuralMatrix(std::move(m), true);
}

double binomial(int n, int k) {
    if (k < 0 || k > n) return 0.0;
    double r = 1.0;
    for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
    return r;
}

double delta_chi(const StructureFunction& chi, int k, int n) {
    if (k < 0) throw std::invalid_argument("difference order must be >= 0");
    if (n < 0 || n + k > chi.max_arg())
        throw std::out_of_range("delta_chi argument outside the tabulated range");
    double sum = 0.0;
    for (int l = 0; l <= k; ++l) {
        const double sign = ((k - l) % 2 == 0) ? 1.0 : -1.0;
        sum += sign * binomial(k, l) * chi(n + l);
    }
    return sum;
}

SparseOp composite_creator(const StructuralMatrix& phi, const FockBasis& basis,
                           const StructureFunction& chi) {
    check_shapes(phi, basis);
    std::vector<Monomial> mono;
    for (int mu = 0; mu < phi.rows(); ++mu)
        for (int nu = 0; nu < phi.cols(); ++nu)
            mono.push_back({phi.mat()(mu, nu),
                            {{Factor::ACreate, mu, 0}, {Factor::BCreate, nu, 0}}});
    return build_from_monomials(basis, chi, mono);
}

SparseOp composite_annihilator(const StructuralMatrix& phi, const FockBasis& basis,
                               const StructureFunction& chi) {
    return adjoint_op(composite_creator(phi, basis, chi));
}

StateVec vacuum_state(const FockBasis& basis) {
    StateVec v = StateVec::Zero(basis.size());
    BasisState vac;
    vac.boson_occ.assign(basis.boson_modes(), 0);
    v(basis.index_of(vac)) = 1.0;
    return v;
}

StateVec one_cf_state(const StructuralMatrix& phi, const FockBasis& basis) {
    check_shapes(phi, basis);
    StateVec v = StateVec::Zero(basis.size());
    for (int mu = 0; mu < phi.rows(); ++mu) {
        for (int nu = 0; nu < phi.cols(); ++nu) {
            BasisState s;
            s.boson_occ.assign(basis.boson_modes(), 0);
            s.boson_occ[mu] = 1;
            s.fermion_bits = 1u << nu;
            v(basis.index_of(s)) += phi.mat()(mu, nu);
        }
    }
    return v;
}

WeakEqualReport weak_equal(const SparseOp& g, const SparseOp& h,
                           const std::vector<SparseOp>& generators,
                           const FockBasis& basis, double tol, int depth) {
    if (g.rows() != basis.size() || h.rows() != basis.size())
        throw std::invalid_argument("operator dimension does not match the basis");
    if (depth < 0) depth = static_cast<int>(generators.size());
    double state_count = 0.0;
    for (int m = 0; m <= depth; ++m) state_count += std::pow(double(generators.size()), m);
    if (state_count * basis.size() > 5e7)
        throw std::invalid_argument("generator depth too large for this basis");

    const SparseOp diff = SparseOp(g - h);
    double max_res = 0.0;
    std::vector<StateVec> level{vacuum_state(basis)};
    for (int m = 0; m <= depth; ++m) {
        for (const StateVec& psi : level) {
            const double nrm = psi.norm();
            if (nrm < 1e-14) continue;
            max_res = std::max(max_res, (diff * psi).norm() / nrm);
        }
        if (m == depth) break;
        std::vector<StateVec> next;
        next.reserve(level.size() * generators.size());
        for (const SparseOp& gen : generators)
            for (const StateVec& psi : level) next.push_back(gen * psi);
        level = std::move(next);
    }
    return {max_res < tol, max_res};
}

SparseOp closed_form_anticommutator(const StructuralMatrix& phi_a, const StructuralMatrix& phi_b,
                                    const StructureFunction& chi, const FockBasis& basis) {
    check_shapes(phi_a, basis);
    check_shapes(phi_b, basis);
    const Eigen::MatrixXcd c = phi_b.mat() * phi_a.mat().adjoint();  // boson-side overlap
    std::vector<Monomial> mono;
    for (int mu = 0; mu < basis.boson_modes(); ++mu)
        mono.push_back({c(mu, mu), {{Factor::DeltaDiag, mu, 1}}});
    for (int mup = 0; mup < basis.boson_modes(); ++mup)
        for (int mu = 0; mu < basis.boson_modes(); ++mu)
            mono.push_back({c(mup, mu), {{Factor::ACreate, mup, 0}, {Factor::AAnnih, mu, 0}}});
    for (int mu = 0; mu < basis.boson_modes(); ++mu)
        for (int nu = 0; nu < basis.fermion_modes(); ++nu)
            for (int nup = 0; nup < basis.fermion_modes(); ++nup)
                mono.push_back({-std::conj(phi_a.mat()(mu, nu)) * phi_b.mat()(mu, nup),
                                {{Factor::BCreate, nup, 0},
                                 {Factor::BAnnih, nu, 0},
                                 {Factor::DeltaDiag, mu, 1}}});
    return build_from_monomials(basis, chi, mono);
}

SparseOp closed_form_nested_commutator(const StructuralMatrix& phi_a, const StructuralMatrix& phi_b,
                                       const StructuralMatrix& phi_g, const StructureFunction& chi,
                                       const FockBasis& basis) {
    check_shapes(phi_a, basis);
    const Eigen::MatrixXcd b = phi_b.mat() * phi_a.mat().adjoint();
    const Eigen::MatrixXcd g = phi_g.mat() * phi_a.mat().adjoint();
    std::vector<Monomial> mono;
    for (int mu = 0; mu < basis.boson_modes(); ++mu) {
        for (int mu1 = 0; mu1 < basis.boson_modes(); ++mu1) {
            for (int nu1 = 0; nu1 < basis.fermion_modes(); ++nu1) {
                const Complex k = b(mu1, mu) * phi_g.mat()(mu, nu1) - g(mu1, mu) * phi_b.mat()(mu, nu1);
                mono.push_back({k,
                                {{Factor::ACreate, mu1, 0},
                                 {Factor::BCreate, nu1, 0},
                                 {Factor::DeltaDiag, mu, 1}}});
                if (mu == mu1)
                    mono.push_back({k,
                                    {{Factor::ACreate, mu1, 0},
                                     {Factor::BCreate, nu1, 0},
                                     {Factor::DeltaDiag, mu, 2}}});
            }
        }
        for (int nu = 0; nu < basis.fermion_modes(); ++nu)
            for (int nup = 0; nup < basis.fermion_modes(); ++nup)
                for (int nu1 = 0; nu1 < basis.fermion_modes(); ++nu1)
                    mono.push_back({std::conj(phi_a.mat()(mu, nu)) * phi_b.mat()(mu, nup) *
                                        phi_g.mat()(mu, nu1),
                                    {{Factor::ACreate, mu, 0},
                                     {Factor::BCreate, nup, 0},
                                     {Factor::BCreate, nu1, 0},
                                     {Factor::BAnnih, nu, 0},
                                     {Factor::DeltaDiag, mu, 2}}});
    }
    return build_from_monomials(basis, chi, mono);
}

SparseOp closed_form_double_anticommutator(const StructuralMatrix& phi_a, const StructuralMatrix& phi_b,
                                           const StructuralMatrix& phi_g1, const StructuralMatrix& phi_g2,
                                           const StructureFunction& chi, const FockBasis& basis) {
    check_shapes(phi_a, basis);
    const Eigen::MatrixXcd b = phi_b.mat() * phi_a.mat().adjoint();
    const Eigen::MatrixXcd g1 = phi_g1.mat() * phi_a.mat().adjoint();
    const Eigen::MatrixXcd g2 = phi_g2.mat() * phi_a.mat().adjoint();
    std::vector<Monomial> mono;
    for (int mu = 0; mu < basis.boson_modes(); ++mu) {
        for (int mu1 = 0; mu1 < basis.boson_modes(); ++mu1) {
            for (int nu1 = 0; nu1 < basis.fermion_modes(); ++nu1) {
                for (int nu2 = 0; nu2 < basis.fermion_modes(); ++nu2) {
                    const Complex k = b(mu1, mu) * phi_g1.mat()(mu, nu1) * phi_g2.mat()(mu, nu2) -
                                      g1(mu1, mu) * phi_b.mat()(mu, nu1) * phi_g2.mat()(mu, nu2) +
                                      g2(mu1, mu) * phi_b.mat()(mu, nu1) * phi_g1.mat()(mu, nu2);
                    mono.push_back({k,
                                    {{Factor::ACreate, mu, 0},
                                     {Factor::ACreate, mu1, 0},
                                     {Factor::BCreate, nu1, 0},
                                     {Factor::BCreate, nu2, 0},
                                     {Factor::DeltaDiag, mu, 2}}});
                    if (mu == mu1)
                        mono.push_back({k,
                                        {{Factor::ACreate, mu, 0},
                                         {Factor::ACreate, mu1, 0},
                                         {Factor::BCreate, nu1, 0},
                                         {Factor::BCreate, nu2, 0},
                                         {Factor::DeltaDiag, mu, 3}}});
                }
            }
        }
        for (int nu = 0; nu < basis.fermion_modes(); ++nu)
            for (int nup = 0; nup < basis.fermion_modes(); ++nup)
                for (int nu1 = 0; nu1 < basis.fermion_modes(); ++nu1)
                    for (int nu2 = 0; nu2 < basis.fermion_modes(); ++nu2)
                        mono.push_back({-std::conj(phi_a.mat()(mu, nu)) * phi_b.mat()(mu, nup) *
                                            phi_g1.mat()(mu, nu1) * phi_g2.mat()(mu, nu2),
                                        {{Factor::ACreate, mu, 0},
                                         {Factor::ACreate, mu, 0},
                                         {Factor::BCreate, nup, 0},
                                         {Factor::BCreate, nu1, 0},
                                         {Factor::BCreate, nu2, 0},
                                         {Factor::BAnnih, nu, 0},
                                         {Factor::DeltaDiag, mu, 3}}});
    }
    return build_from_monomials(basis, chi, mono);
}

double verify_anticommutator_expansion(const StructuralMatrix& phi_a, const StructuralMatrix& phi_b,
                                       const StructureFunction& chi, const FockBasis& basis) {
    const SparseOp creator_b = composite_creator(phi_b, basis, chi);
    const SparseOp annih_a = composite_annihilator(phi_a, basis, chi);
    const SparseOp direct = anticommutator(annih_a, creator_b);
    const SparseOp closed = closed_form_anticommutator(phi_a, phi_b, chi, basis);
    double res = max_abs_on_safe_columns(SparseOp(direct - closed), basis, 1);

    if (chi.is_nondeformed()) {
        // reduced form: the chi-difference factors collapse to constants
        const Eigen::MatrixXcd c = phi_b.mat() * phi_a.mat().adjoint();
        const Eigen::MatrixXcd f = phi_a.mat().adjoint() * phi_b.mat();
        SparseOp reduced = SparseOp(c.trace() * identity_op(basis.size()));
        for (int mup = 0; mup < basis.boson_modes(); ++mup)
            for (int mu = 0; mu < basis.boson_modes(); ++mu)
                if (std::abs(c(mup, mu)) > kSparseDropTol)
                    reduced += c(mup, mu) * SparseOp(boson_create(basis, chi, mup) *
                                                     boson_annihilate(basis, chi, mu));
        for (int nu = 0; nu < basis.fermion_modes(); ++nu)
            for (int nup = 0; nup < basis.fermion_modes(); ++nup)
                if (std::abs(f(nu, nup)) > kSparseDropTol)
                    reduced -= f(nu, nup) * SparseOp(fermion_create(basis, nup) *
                                                     fermion_annihilate(basis, nu));
        res = std::max(res, max_abs_on_safe_columns(SparseOp(direct - reduced), basis, 1));
    }
    return res;
}

double verify_nested_identities(const std::vector<StructuralMatrix>& phis,
                                const StructureFunction& chi, const FockBasis& basis) {
    const int n = static_cast<int>(phis.size());
    std::vector<SparseOp> creators, annihilators;
    for (const auto& phi : phis) {
        creators.push_back(composite_creator(phi, basis, chi));
        annihilators.push_back(adjoint_op(creators.back()));
    }
    double res = 0.0;
    for (int a = 0; a < n; ++a) {
        for (int b = 0; b < n; ++b) {
            const SparseOp anti = anticommutator(annihilators[a], creators[b]);
            for (int g = 0; g < n; ++g) {
                const SparseOp direct = commutator(anti, creators[g]);
                const SparseOp closed = closed_form_nested_commutator(phis[a], phis[b], phis[g], chi, basis);
                res = std::max(res, max_abs_on_safe_columns(SparseOp(direct - closed), basis, 2));
                if (chi.is_nondeformed()) {
                    const Eigen::MatrixXcd m = phis[b].mat() * phis[a].mat().adjoint() * phis[g].mat() -
                                               phis[g].mat() * phis[a].mat().adjoint() * phis[b].mat();
                    std::vector<Monomial> mono;
                    for (int mu = 0; mu < basis.boson_modes(); ++mu)
                        for (int nu = 0; nu < basis.fermion_modes(); ++nu)
                            mono.push_back({m(mu, nu), {{Factor::ACreate, mu, 0}, {Factor::BCreate, nu, 0}}});
                    const SparseOp reduced = build_from_monomials(basis, chi, mono);
                    res = std::max(res, max_abs_on_safe_columns(SparseOp(direct - reduced), basis, 2));
                }
                for (int g2 = 0; g2 < n; ++g2) {
                    const SparseOp direct2 = anticommutator(commutator(anti, creators[g]), creators[g2]);
                    const SparseOp closed2 =
                        closed_form_double_anticommutator(phis[a], phis[b], phis[g], phis[g2], chi, basis);
                    res = std::max(res, max_abs_on_safe_columns(SparseOp(direct2 - closed2), basis, 3));
                }
            }
        }
    }
    return res;
}

}  // namespace cfent
