// Python bindings for the main operations: Schmidt data and entanglement
// witnesses, the closed-form entropy expressions, realization-condition
// checks, the analytic solution families, and the Fock-space identity
// verifiers.

#include <random>

#include <pybind11/complex.h>
#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "cfent/composite.hpp"
#include "cfent/entanglement.hpp"
#include "cfent/realization.hpp"

namespace py = pybind11;
using namespace cfent;

namespace {

StructuralMatrix as_structural(const Eigen::MatrixXcd& m, bool normalize) {
    return StructuralMatrix(m, normalize);
}

std::vector<StructuralMatrix> as_structural_list(const std::vector<Eigen::MatrixXcd>& ms,
                                                 bool normalize) {
    std::vector<StructuralMatrix> out;
    out.reserve(ms.size());
    for (const auto& m : ms) out.emplace_back(m, normalize);
    return out;
}

py::dict report_to_dict(const RealizationReport& r) {
    py::dict residuals;
    for (const auto& c : r.residuals) residuals[py::str(c.name)] = c.value;
    py::dict out;
    out["residuals"] = residuals;
    out["max_residual"] = r.max_residual();
    out["rss"] = r.rss();
    out["tolerance"] = r.tolerance;
    out["pass"] = r.pass;
    return out;
}

py::dict sample_to_dict(const FamilySample& s) {
    py::dict out;
    out["phi1"] = s.phi1.mat();
    out["phi2"] = s.phi2.mat();
    out["schmidt1"] = s.schmidt1;
    out["schmidt2"] = s.schmidt2;
    out["chi2"] = s.chi2;
    return out;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "composite fermion entanglement toolkit";

    // Schmidt data and witnesses
    m.def(
        "schmidt",
        [](const Eigen::MatrixXcd& phi) {
            const auto s = schmidt(phi);
            return py::make_tuple(s.values, s.left, s.right);
        },
        py::arg("phi"),
        "Singular values (descending) and unitary factors (lambdas, left, right)");
    m.def(
        "entropy", [](const Eigen::MatrixXcd& phi) { return entropy(schmidt(phi)); },
        py::arg("phi"), "Entanglement entropy (nats) of a structural matrix");
    m.def(
        "purity", [](const Eigen::MatrixXcd& phi) { return purity(schmidt(phi)); },
        py::arg("phi"));
    m.def("entropy_of_weights", &entropy_of_weights, py::arg("weights"),
          "Entropy of an unnormalized weight vector");
    m.def("purity_of_weights", &purity_of_weights, py::arg("weights"));

    // closed-form curves
    m.def("s2", &s2, py::arg("theta"));
    m.def("purity_theta", &purity_theta, py::arg("theta"));
    m.def("entropy_two_equal_s1", &entropy_two_equal_s1, py::arg("theta1"));
    m.def("entropy_two_equal_s2", &entropy_two_equal_s2, py::arg("theta1"), py::arg("tr_u"));
    m.def("entropy_s2_threeangle", &entropy_s2_threeangle, py::arg("theta1"), py::arg("theta3"),
          py::arg("gamma"));
    m.def("entropy_K", &entropy_K, py::arg("theta1_2"), py::arg("gamma_prime"));
    m.def("entropy_trW", &entropy_trW, py::arg("tr_w"));
    m.def(
        "entropy_pair_3mode",
        [](double t11, double t21, double t22, double gp) {
            const auto p = entropy_pair_3mode(t11, t21, t22, gp);
            return py::make_tuple(p.s1, p.s2, p.theta1_2);
        },
        py::arg("theta1_1"), py::arg("theta2_1"), py::arg("theta2_2"), py::arg("gamma_prime"),
        "Returns (s1, s2, theta1 of the second mode)");
    m.def(
        "su3_orthonormal_pair",
        [](double t1, double t2, double t3, double g) {
            const auto p = su3_orthonormal_pair(t1, t2, t3, g);
            return py::make_tuple(p.lambda, p.phi);
        },
        py::arg("theta1"), py::arg("theta2"), py::arg("theta3"), py::arg("gamma"));

    // quasiboson comparison case
    m.def("quasiboson_phi", &quasiboson_phi, py::arg("n"), py::arg("f"), py::arg("kappa_sign"));
    m.def(
        "quasiboson_entropy_purity",
        [](int mm) {
            const auto w = quasiboson_entropy_purity(mm);
            return py::make_tuple(w.entropy, w.purity);
        },
        py::arg("m"));
    m.def(
        "quasiboson_structural_matrix",
        [](int mm, int da, int db, unsigned seed) {
            std::mt19937_64 rng(seed);
            return quasiboson_structural_matrix(mm, da, db, rng);
        },
        py::arg("m"), py::arg("da"), py::arg("db"), py::arg("seed") = 42);

    // realization conditions
    m.def(
        "check_realization",
        [](const std::vector<Eigen::MatrixXcd>& phis, double chi2, double tol, bool normalize) {
            return report_to_dict(
                check_realization(as_structural_list(phis, normalize),
                                  DeformationSpec::deformed(chi2), tol));
        },
        py::arg("phis"), py::arg("chi2") = 2.0, py::arg("tol") = 1e-10,
        py::arg("normalize") = false);
    m.def(
        "residual",
        [](const std::vector<Eigen::MatrixXcd>& phis, double chi2, bool normalize) {
            return residual(as_structural_list(phis, normalize), DeformationSpec::deformed(chi2));
        },
        py::arg("phis"), py::arg("chi2") = 2.0, py::arg("normalize") = false);
    m.def(
        "canonicalize",
        [](const Eigen::MatrixXcd& p1, const Eigen::MatrixXcd& p2, bool normalize) {
            const auto c = canonicalize(as_structural(p1, normalize), as_structural(p2, normalize));
            return py::make_tuple(c.d1, c.phi2tilde, c.u1, c.v1);
        },
        py::arg("phi1"), py::arg("phi2"), py::arg("normalize") = false,
        "Joint frame (d1, phi2tilde, u1, v1) with phi1 = u1 diag(d1) v1^H");
    m.def(
        "deformed_linear_system",
        [](const Eigen::Vector2d& d1, Complex u, Complex v, double chi2) {
            const auto s = deformed_linear_system(d1, u, v, chi2);
            return py::make_tuple(s.coefficients, s.determinant, s.predicted_determinant);
        },
        py::arg("d1"), py::arg("u"), py::arg("v"), py::arg("chi2"));
    m.def(
        "refine_solution",
        [](const std::vector<Eigen::MatrixXcd>& phis, double chi2) {
            std::vector<Eigen::MatrixXcd> out;
            for (const auto& p :
                 refine_solution(as_structural_list(phis, true), DeformationSpec::deformed(chi2)))
                out.push_back(p.mat());
            return out;
        },
        py::arg("phis"), py::arg("chi2") = 2.0);

    // solution families
    m.def("family_names", []() {
        std::vector<std::string> names;
        for (int i = 0; i < kFamilyCount; ++i) names.push_back(family_name(family_tag(i)));
        return names;
    });
    m.def(
        "sample_family",
        [](const std::string& name, unsigned seed) {
            const auto tag = family_from_name(name);
            if (!tag) throw std::invalid_argument("unknown family '" + name + "'");
            std::mt19937_64 rng(seed);
            return sample_to_dict(sample_family(*tag, rng));
        },
        py::arg("family"), py::arg("seed") = 42);

    // Fock-space verifiers
    m.def(
        "verify_on_fock",
        [](const Eigen::MatrixXcd& p1, const Eigen::MatrixXcd& p2, double chi2, int cutoff) {
            const StructuralMatrix a(p1), b(p2);
            const FockBasis basis = enumerate_basis({a.rows(), a.cols(), cutoff});
            const auto chi = StructureFunction::with_chi2(chi2, cutoff + 1);
            const SparseOp ca = composite_creator(a, basis, chi);
            const SparseOp cb = composite_creator(b, basis, chi);
            py::dict out;
            out["nilpotency"] = max_abs(anticommutator(ca, cb));
            const auto diag = weak_equal(anticommutator(adjoint_op(ca), ca),
                                         identity_op(basis.size()), {ca, cb}, basis, 1e-10);
            const auto cross =
                weak_equal(anticommutator(adjoint_op(ca), cb),
                           SparseOp(basis.size(), basis.size()), {ca, cb}, basis, 1e-10);
            out["diagonal_residual"] = diag.max_residual;
            out["cross_residual"] = cross.max_residual;
            out["expansion_residual"] = verify_anticommutator_expansion(a, b, chi, basis);
            out["nested_residual"] = verify_nested_identities({a, b}, chi, basis);
            return out;
        },
        py::arg("phi1"), py::arg("phi2"), py::arg("chi2") = 2.0, py::arg("cutoff") = 3,
        "Weak-equality and closed-form residuals on a truncated Fock space");
}
