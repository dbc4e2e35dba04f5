#include "cfent/fock.hpp"

#include <bit>
#include <cmath>
#include <stdexcept>
#include <string>

namespace cfent {

void ModeConfig::validate() const {
    if (boson_modes < 1) throw std::invalid_argument("boson_modes must be >= 1");
    if (fermion_modes < 1) throw std::invalid_argument("fermion_modes must be >= 1");
    if (fermion_modes > 31) throw std::invalid_argument("fermion_modes must be <= 31");
    if (boson_cutoff < 2) throw std::invalid_argument("boson_cutoff must be >= 2");
}

StructureFunction::StructureFunction(std::vector<double> values) : values_(std::move(values)) {
    if (values_.size() < 3) throw std::invalid_argument("structure function needs values at n = 0, 1, 2 at least");
    if (std::abs(values_[0]) > 1e-12) throw std::invalid_argument("chi(0) must be 0");
    if (std::abs(values_[1] - 1.0) > 1e-12) throw std::invalid_argument("chi(1) must be 1");
    for (std::size_t n = 0; n < values_.size(); ++n) {
        if (values_[n] < -1e-15)
            throw std::invalid_argument("chi(" + std::to_string(n) + ") is negative");
        if (values_[n] < 0.0) values_[n] = 0.0;
    }
}

StructureFunction StructureFunction::from_values(std::vector<double> values) {
    return StructureFunction(std::move(values));
}

StructureFunction StructureFunction::nondeformed(int n_upper) {
    std::vector<double> v(n_upper + 1);
    for (int n = 0; n <= n_upper; ++n) v[n] = n;
    return StructureFunction(std::move(v));
}

StructureFunction StructureFunction::with_chi2(double chi2, int n_upper) {
    if (chi2 < 0.0) throw std::invalid_argument("chi(2) must be non-negative");
    std::vector<double> v(std::max(n_upper, 2) + 1);
    for (int n = 0; n < static_cast<int>(v.size()); ++n) v[n] = n;
    v[2] = chi2;
    return StructureFunction(std::move(v));
}

StructureFunction StructureFunction::q_deformed(double q, int n_upper) {
    if (q <= -1.0) throw std::invalid_argument("q must be > -1");
    std::vector<double> v(n_upper + 1);
    for (int n = 0; n <= n_upper; ++n)
        v[n] = std::abs(q - 1.0) < 1e-14 ? n : (1.0 - std::pow(q, n)) / (1.0 - q);
    return StructureFunction(std::move(v));
}

StructureFunction StructureFunction::quasiboson(int m, int kappa_sign, int n_upper) {
    if (m < 1) throw std::invalid_argument("m must be >= 1");
    if (kappa_sign != 1 && kappa_sign != -1) throw std::invalid_argument("kappa_sign must be +1 or -1");
    const double half_f = 1.0 / m;  // f = 2/m
    std::vector<double> v(n_upper + 1);
    for (int n = 0; n <= n_upper; ++n)
        v[n] = (1.0 + kappa_sign * half_f) * n - kappa_sign * half_f * double(n) * n;
    return StructureFunction(std::move(v));
}

double StructureFunction::operator()(int n) const {
    if (n < 0 || n >= static_cast<int>(values_.size()))
        throw std::out_of_range("structure function evaluated outside tabulated range");
    return values_[n];
}

bool StructureFunction::is_nondeformed(double tol) const {
    for (int n = 0; n <= max_arg(); ++n)
        if (std::abs(values_[n] - n) > tol) return false;
    return true;
}

int BasisState::fermion_count_below(int mode) const {
    const std::uint32_t mask = (mode == 0) ? 0u : ((1u << mode) - 1u);
    return std::popcount(fermion_bits & mask);
}

FockBasis::FockBasis(ModeConfig config, std::int64_t state_limit) : config_(config) {
    config_.validate();
    const int radix = config_.boson_cutoff + 1;
    std::int64_t dim = 1;
    for (int mu = 0; mu < config_.boson_modes; ++mu) {
        dim *= radix;
        if (dim > state_limit) throw std::length_error("Fock basis exceeds the state limit");
    }
    dim <<= config_.fermion_modes;
    if (dim > state_limit) throw std::length_error("Fock basis exceeds the state limit");

    states_.reserve(dim);
    const std::int64_t nboson = dim >> config_.fermion_modes;
    const std::uint32_t nferm = 1u << config_.fermion_modes;
    std::vector<int> occ(config_.boson_modes, 0);
    for (std::int64_t b = 0; b < nboson; ++b) {
        for (std::uint32_t raw = 0; raw < nferm; ++raw) {
            BasisState s;
            s.boson_occ = occ;
            // raw counts with mode 0 as the most significant digit
            std::uint32_t bits = 0;
            for (int nu = 0; nu < config_.fermion_modes; ++nu)
                if ((raw >> (config_.fermion_modes - 1 - nu)) & 1u) bits |= (1u << nu);
            s.fermion_bits = bits;
            states_.push_back(std::move(s));
        }
        // odometer increment, mode 0 slowest
        for (int mu = config_.boson_modes - 1; mu >= 0; --mu) {
            if (++occ[mu] <= config_.boson_cutoff) break;
            occ[mu] = 0;
        }
    }
}

int FockBasis::index_of(const BasisState& s) const {
    if (static_cast<int>(s.boson_occ.size()) != config_.boson_modes)
        throw std::invalid_argument("basis state has wrong number of boson modes");
    if (s.fermion_bits >> config_.fermion_modes)
        throw std::out_of_range("fermion occupation outside the mode range");
    std::int64_t idx = 0;
    for (int mu = 0; mu < config_.boson_modes; ++mu) {
        const int n = s.boson_occ[mu];
        if (n < 0 || n > config_.boson_cutoff)
            throw std::out_of_range("boson occupation outside the cutoff");
        idx = idx * (config_.boson_cutoff + 1) + n;
    }
    std::uint32_t raw = 0;
    for (int nu = 0; nu < config_.fermion_modes; ++nu)
        if (s.fermion_occupied(nu)) raw |= (1u << (config_.fermion_modes - 1 - nu));
    idx = (idx << config_.fermion_modes) | raw;
    return static_cast<int>(idx);
}

bool FockBasis::has_headroom(int index, int headroom) const {
    const BasisState& s = states_[index];
    for (int n : s.boson_occ)
        if (n + headroom > config_.boson_cutoff) return false;
    return true;
}

FockBasis enumerate_basis(const ModeConfig& config, std::int64_t state_limit) {
    return FockBasis(config, state_limit);
}

SparseOp boson_create(const FockBasis& basis, const StructureFunction& chi, int mode) {
    if (mode < 0 || mode >= basis.boson_modes()) throw std::invalid_argument("boson mode out of range");
    if (chi.max_arg() < basis.cutoff() + 1)
        throw std::invalid_argument("structure function not tabulated up to cutoff+1");
    std::vector<Eigen::Triplet<Complex>> trip;
    trip.reserve(basis.size());
    for (int col = 0; col < basis.size(); ++col) {
        BasisState s = basis.state(col);
        const int n = s.boson_occ[mode];
        if (n >= basis.cutoff()) continue;  // annihilated at the cutoff
        s.boson_occ[mode] = n + 1;
        const double amp = std::sqrt(chi(n + 1));
        if (std::abs(amp) <= kSparseDropTol) continue;
        trip.emplace_back(basis.index_of(s), col, Complex(amp, 0.0));
    }
    SparseOp op(basis.size(), basis.size());
    op.setFromTriplets(trip.begin(), trip.end());
    return op;
}

SparseOp boson_annihilate(const FockBasis& basis, const StructureFunction& chi, int mode) {
    return adjoint_op(boson_create(basis, chi, mode));
}

SparseOp fermion_create(const FockBasis& basis, int mode) {
    if (mode < 0 || mode >= basis.fermion_modes()) throw std::invalid_argument("fermion mode out of range");
    std::vector<Eigen::Triplet<Complex>> trip;
    trip.reserve(basis.size() / 2);
    for (int col = 0; col < basis.size(); ++col) {
        BasisState s = basis.state(col);
        if (s.fermion_occupied(mode)) continue;
        const double sign = (s.fermion_count_below(mode) % 2 == 0) ? 1.0 : -1.0;
        s.fermion_bits |= (1u << mode);
        trip.emplace_back(basis.index_of(s), col, Complex(sign, 0.0));
    }
    SparseOp op(basis.size(), basis.size());
    op.setFromTriplets(trip.begin(), trip.end());
    return op;
}

SparseOp fermion_annihilate(const FockBasis& basis, int mode) {
    return adjoint_op(fermion_create(basis, mode));
}

SparseOp number_operator(const FockBasis& basis, Sector sector, int mode) {
    const int limit = sector == Sector::Boson ? basis.boson_modes() : basis.fermion_modes();
    if (mode < 0 || mode >= limit) throw std::invalid_argument("mode out of range");
    std::vector<Eigen::Triplet<Complex>> trip;
    for (int i = 0; i < basis.size(); ++i) {
        const BasisState& s = basis.state(i);
        const int n = sector == Sector::Boson ? s.boson_occ[mode] : (s.fermion_occupied(mode) ? 1 : 0);
        if (n != 0) trip.emplace_back(i, i, Complex(n, 0.0));
    }
    SparseOp op(basis.size(), basis.size());
    op.setFromTriplets(trip.begin(), trip.end());
    return op;
}

SparseOp identity_op(int dim) {
    SparseOp op(dim, dim);
    op.setIdentity();
    return op;
}

SparseOp adjoint_op(const SparseOp& op) {
    return SparseOp(op.adjoint());
}

SparseOp anticommutator(const SparseOp& a, const SparseOp& b) {
    return pruned(SparseOp(a * b + b * a));
}

SparseOp commutator(const SparseOp& a, const SparseOp& b) {
    return pruned(SparseOp(a * b - b * a));
}

double max_abs(const SparseOp& op) {
    double m = 0.0;
    for (int k = 0; k < op.outerSize(); ++k)
        for (SparseOp::InnerIterator it(op, k); it; ++it)
            m = std::max(m, std::abs(it.value()));
    return m;
}

double max_abs_on_safe_columns(const SparseOp& op, const FockBasis& basis, int headroom) {
    double m = 0.0;
    for (int col = 0; col < op.outerSize(); ++col) {
        if (!basis.has_headroom(col, headroom)) continue;
        for (SparseOp::InnerIterator it(op, col); it; ++it)
            m = std::max(m, std::abs(it.value()));
    }
    return m;
}

SparseOp pruned(SparseOp op, double tol) {
    op.prune([tol](int, int, const Complex& v) { return std::abs(v) > tol; });
    return op;
}

}  // namespace cfent
