// Command-line surface: verification of structural-matrix pairs, generation
// of the analytic solution families, entropy/purity reports, curve data for
// the entropy and purity plots, and Fock-space identity checks.

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <numbers>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "cfent/composite.hpp"
#include "cfent/entanglement.hpp"
#include "cfent/matrix_io.hpp"
#include "cfent/realization.hpp"

namespace {

using namespace cfent;

constexpr int kExitPass = 0;
constexpr int kExitFail = 1;
constexpr int kExitError = 2;
constexpr double kPi = std::numbers::pi;

std::string fmt(double v, int digits = 7) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.*f", digits, v);
    return buf;
}

std::string fmt_sci(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.3e", v);
    return buf;
}

std::string fmt_g(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.12g", v);
    return buf;
}

void print_report(const RealizationReport& report) {
    for (const auto& r : report.residuals)
        std::cout << "  " << r.name << ": " << fmt_sci(r.value) << "\n";
    std::cout << (report.pass ? "PASS" : "FAIL") << " (tolerance " << fmt_sci(report.tolerance)
              << ")\n";
}

void print_witnesses(const std::string& label, const Eigen::MatrixXcd& m) {
    const auto s = schmidt(m);
    std::cout << label << " schmidt:";
    for (int i = 0; i < s.values.size(); ++i) std::cout << " " << fmt(s.values(i));
    std::cout << "  entropy: " << fmt(entropy(s)) << "  purity: " << fmt(purity(s)) << "\n";
}

// Fock-space weak-equality checks for a matrix set: nilpotency, pairwise
// creator anticommutation, and {A_a, A^dag_b} = delta_ab on generated states.
int fock_weak_checks(const std::vector<StructuralMatrix>& phis, double chi2, int cutoff,
                     int depth, double tol) {
    const int db = phis[0].rows(), df = phis[0].cols();
    const FockBasis basis = enumerate_basis({db, df, cutoff});
    const auto chi = StructureFunction::with_chi2(chi2, cutoff + 1);

    std::vector<SparseOp> creators;
    for (const auto& p : phis) creators.push_back(composite_creator(p, basis, chi));

    int failures = 0;
    double nilpotency = 0.0;
    for (std::size_t a = 0; a < phis.size(); ++a)
        for (std::size_t b = a; b < phis.size(); ++b)
            nilpotency = std::max(nilpotency, max_abs(anticommutator(creators[a], creators[b])));
    std::cout << "  creator anticommutators: " << fmt_sci(nilpotency) << "\n";
    if (nilpotency >= tol) ++failures;

    const SparseOp id = identity_op(basis.size());
    const SparseOp zero(basis.size(), basis.size());
    for (std::size_t a = 0; a < phis.size(); ++a) {
        for (std::size_t b = 0; b < phis.size(); ++b) {
            const SparseOp anti = anticommutator(adjoint_op(creators[a]), creators[b]);
            const auto rep = weak_equal(anti, a == b ? id : zero, creators, basis, tol, depth);
            std::cout << "  {A_" << a + 1 << ", A^dag_" << b + 1 << "} on states: "
                      << fmt_sci(rep.max_residual) << "\n";
            if (!rep.equal) ++failures;
        }
    }
    return failures;
}

int cmd_verify(const std::vector<std::string>& files, double chi2, double tol, bool fock,
               int cutoff, int depth) {
    std::vector<StructuralMatrix> phis;
    for (const auto& f : files) {
        const MatrixFile mf = read_matrix_file(f);
        phis.emplace_back(mf.data);  // enforces unit norm
    }
    const auto spec = DeformationSpec::deformed(chi2);
    const auto report = check_realization(phis, spec, tol);
    std::cout << "conditions (chi2 = " << fmt_g(chi2) << "):\n";
    print_report(report);

    int failures = report.pass ? 0 : 1;
    if (fock) {
        std::cout << "fock-space weak equalities (cutoff " << cutoff << "):\n";
        failures += fock_weak_checks(phis, chi2, cutoff, depth, tol);
    }
    return failures == 0 ? kExitPass : kExitFail;
}

int cmd_solve(const std::string& family, double theta, bool theta_given, double chi2,
              bool chi2_given, int branch, unsigned seed, const std::string& out_prefix) {
    const auto tag = family_from_name(family);
    if (!tag) throw CLI::ValidationError("unknown family '" + family + "'");

    std::mt19937_64 rng(seed);
    FamilySample sample = [&]() -> FamilySample {
        if (*tag == FamilyTag::DeformedCNilpotent && chi2_given && std::abs(chi2 - 1.0) > 1e-12)
            throw CLI::ValidationError("family " + family + " requires chi2 = 1");
        if (*tag == FamilyTag::DeformedB && chi2_given && chi2 != 0.0 && !theta_given)
            theta = kPi / 4;  // nonzero chi2 needs the degenerate frame

        if (!theta_given && !chi2_given) return sample_family(*tag, rng);

        // explicit angles: stay in the canonical frame so the printed
        // matrices match the closed forms up to phases
        const auto draw_params = [&rng](const SolutionFamily& f) {
            std::vector<double> v;
            for (const auto& p : f.params()) {
                std::uniform_real_distribution<double> dist(p.lo, p.hi);
                v.push_back(dist(rng));
            }
            return f.generate(v);
        };
        switch (*tag) {
            case FamilyTag::TwoModeDistinct:
                return draw_params(solve_two_mode_nondeformed({std::cos(theta), std::sin(theta)}));
            case FamilyTag::TwoModeEqual: {
                const double r = 1.0 / std::numbers::sqrt2;
                return draw_params(solve_two_mode_nondeformed({r, r}));
            }
            case FamilyTag::DeformedB:
            case FamilyTag::DeformedCDiagonal:
            case FamilyTag::DeformedCNilpotent: {
                Eigen::Matrix2cd u1 = Eigen::Matrix2cd::Identity();
                const Eigen::Vector2d d1(std::cos(theta), std::sin(theta));
                const auto fams = solve_two_mode_deformed(
                    *tag == FamilyTag::DeformedCNilpotent ? Eigen::Vector2d(1.0, 0.0) : d1, u1,
                    DeformationSpec::deformed(chi2_given ? chi2 : (*tag == FamilyTag::DeformedB
                                                                       ? 0.0
                                                                       : 1.0)));
                for (const auto& f : fams)
                    if (f.tag() == *tag) return draw_params(f);
                throw CLI::ValidationError("no " + family + " solution for these parameters");
            }
            case FamilyTag::ThreeModeDistinct: {
                // theta fixes the third value; the first two split the rest
                const double l3 = std::sin(theta);
                const double c = std::cos(theta);
                return draw_params(solve_three_mode({c * std::cos(0.6), c * std::sin(0.6), l3},
                                                    ThreeModePattern::Distinct, branch));
            }
            case FamilyTag::ThreeModeTwoEqual: {
                const double l1 = std::cos(theta) / std::numbers::sqrt2;
                return draw_params(
                    solve_three_mode({l1, l1, std::sin(theta)}, ThreeModePattern::TwoEqual, branch));
            }
            case FamilyTag::ThreeModeAllEqual: {
                const double l = 1.0 / std::numbers::sqrt3;
                return draw_params(solve_three_mode({l, l, l}, ThreeModePattern::AllEqual, branch));
            }
        }
        throw std::logic_error("unreachable");
    }();

    const auto report =
        check_realization({sample.phi1, sample.phi2}, DeformationSpec::deformed(sample.chi2));
    write_matrix_file(out_prefix + "_phi1.json", sample.phi1.mat(), family + " mode 1");
    write_matrix_file(out_prefix + "_phi2.json", sample.phi2.mat(), family + " mode 2");

    std::cout << "family: " << family << "  chi2: " << fmt_g(sample.chi2) << "\n";
    print_witnesses("mode 1", sample.phi1.mat());
    print_witnesses("mode 2", sample.phi2.mat());
    std::cout << "wrote " << out_prefix << "_phi1.json, " << out_prefix << "_phi2.json\n";
    std::cout << "self-check residual: " << fmt_sci(report.rss()) << " -> "
              << (report.pass ? "PASS" : "FAIL") << "\n";
    return report.pass ? kExitPass : kExitFail;
}

int cmd_entropy(const std::string& file, const std::string& format) {
    const MatrixFile mf = read_matrix_file(file);
    const auto s = schmidt(mf.data);
    if (format == "json") {
        nlohmann::json j;
        j["schmidt"] = std::vector<double>(s.values.data(), s.values.data() + s.values.size());
        j["entropy"] = entropy(s);
        j["purity"] = purity(s);
        std::cout << j.dump(2) << "\n";
    } else if (format == "csv") {
        for (int i = 0; i < s.values.size(); ++i) std::cout << "lambda" << i + 1 << ",";
        std::cout << "entropy,purity\n";
        for (int i = 0; i < s.values.size(); ++i) std::cout << fmt_g(s.values(i)) << ",";
        std::cout << fmt_g(entropy(s)) << "," << fmt_g(purity(s)) << "\n";
    } else {
        std::cout << "schmidt:";
        for (int i = 0; i < s.values.size(); ++i) std::cout << " " << fmt(s.values(i));
        std::cout << "\nentropy: " << fmt(entropy(s)) << " nats\npurity: " << fmt(purity(s))
                  << "\n";
    }
    return kExitPass;
}

struct CurveFlags {
    std::string curve;
    std::string out;
    std::string format = "csv";
    double min = 0.0, max = kPi / 2;
    int steps = 181;
    double min2 = 0.0, max2 = kPi / 2;
    int steps2 = 61;
    double theta2_1 = kPi / 4, theta2_2 = kPi / 4, gamma = 0.0;
    unsigned seed = 42;
};

int cmd_curves(const CurveFlags& flags, const std::string& invocation) {
    if (flags.steps < 2 || flags.steps2 < 2)
        throw CLI::ValidationError("step counts must be at least 2");

    std::vector<std::string> columns;
    std::vector<std::vector<double>> rows;
    const auto grid = [](double lo, double hi, int n, int i) {
        return lo + (hi - lo) * i / (n - 1);
    };

    if (flags.curve == "s2" || flags.curve == "purity") {
        columns = {"theta", flags.curve == "s2" ? "entropy" : "purity"};
        for (int i = 0; i < flags.steps; ++i) {
            const double th = grid(flags.min, flags.max, flags.steps, i);
            rows.push_back({th, flags.curve == "s2" ? s2(th) : purity_theta(th)});
        }
    } else if (flags.curve == "entropy-trW") {
        const double hi = std::min(flags.max, 2.0);
        columns = {"trW", "entropy"};
        for (int i = 0; i < flags.steps; ++i) {
            const double w = grid(std::max(flags.min, 0.0), hi, flags.steps, i);
            rows.push_back({w, entropy_trW(w)});
        }
    } else if (flags.curve == "equi-entropy-contour") {
        columns = {"theta1", "theta2", "entropy"};
        for (int i = 0; i < flags.steps; ++i) {
            const double t1 = grid(flags.min, flags.max, flags.steps, i);
            for (int j = 0; j < flags.steps2; ++j) {
                const double t2 = grid(flags.min2, flags.max2, flags.steps2, j);
                rows.push_back({t1, t2, s2(t1) + std::pow(std::cos(t1), 2) * s2(t2)});
            }
        }
    } else if (flags.curve == "entropy-K") {
        columns = {"theta1", "gamma", "entropy"};
        for (int i = 0; i < flags.steps; ++i) {
            const double t1 = grid(flags.min, flags.max, flags.steps, i);
            for (int j = 0; j < flags.steps2; ++j) {
                const double g = grid(flags.min2, flags.max2, flags.steps2, j);
                try {
                    rows.push_back({t1, g, entropy_K(t1, g)});
                } catch (const std::domain_error&) {
                    // outside the closed-triangle domain; skip
                }
            }
        }
    } else if (flags.curve == "pair-3mode") {
        columns = {"theta1_1", "entropy1", "entropy2", "theta1_2"};
        for (int i = 0; i < flags.steps; ++i) {
            const double t1 = grid(flags.min, flags.max, flags.steps, i);
            try {
                const auto p = entropy_pair_3mode(t1, flags.theta2_1, flags.theta2_2, flags.gamma);
                rows.push_back({t1, p.s1, p.s2, p.theta1_2});
            } catch (const std::domain_error&) {
            }
        }
    } else {
        throw CLI::ValidationError("unknown curve '" + flags.curve + "'");
    }

    std::ofstream out(flags.out);
    if (!out) throw std::runtime_error("cannot write " + flags.out);
    if (flags.format == "json") {
        nlohmann::json j;
        j["flags"] = invocation;
        j["columns"] = columns;
        j["rows"] = rows;
        out << j.dump(2) << "\n";
    } else {
        out << "# " << invocation << "\n";
        for (std::size_t c = 0; c < columns.size(); ++c)
            out << columns[c] << (c + 1 < columns.size() ? "," : "\n");
        for (const auto& row : rows)
            for (std::size_t c = 0; c < row.size(); ++c)
                out << fmt_g(row[c]) << (c + 1 < row.size() ? "," : "\n");
    }
    std::cout << "wrote " << flags.out << "\n";
    return kExitPass;
}

int cmd_fock_check(double chi2, int cutoff, int modes, int trials, unsigned seed, double tol) {
    std::mt19937_64 rng(seed);
    const FockBasis basis = enumerate_basis({modes, modes, cutoff});
    const auto chi = StructureFunction::with_chi2(chi2, cutoff + 1);

    double worst_anti = 0.0, worst_nested = 0.0, worst_nil = 0.0;
    for (int t = 0; t < trials; ++t) {
        const auto pa = StructuralMatrix::random(modes, modes, rng);
        const auto pb = StructuralMatrix::random(modes, modes, rng);
        worst_anti = std::max(worst_anti, verify_anticommutator_expansion(pa, pb, chi, basis));
        worst_nested = std::max(worst_nested, verify_nested_identities({pa, pb}, chi, basis));
        const SparseOp ca = composite_creator(pa, basis, chi);
        worst_nil = std::max(worst_nil, max_abs(SparseOp(ca * ca)));
    }
    std::cout << "basis: " << basis.size() << " states, cutoff " << cutoff << ", chi2 "
              << fmt_g(chi2) << ", " << trials << " random draws\n";
    std::cout << "  creator nilpotency:            " << fmt_sci(worst_nil) << "\n";
    std::cout << "  anticommutator expansion:      " << fmt_sci(worst_anti) << "\n";
    std::cout << "  nested (anti)commutator forms: " << fmt_sci(worst_nested) << "\n";
    const bool pass = worst_anti < tol && worst_nested < tol && worst_nil < tol;
    std::cout << (pass ? "PASS" : "FAIL") << " (tolerance " << fmt_sci(tol) << ")\n";
    return pass ? kExitPass : kExitFail;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"composite fermion entanglement toolkit"};
    app.require_subcommand(1);

    // verify
    auto* verify = app.add_subcommand("verify", "check realization conditions on matrix files");
    std::vector<std::string> verify_files;
    double verify_chi2 = 2.0, verify_tol = 1e-10;
    bool verify_fock = false;
    int verify_cutoff = 3, verify_depth = -1;
    verify->add_option("files", verify_files, "matrix JSON files")->required()->expected(1, -1);
    verify->add_option("--chi2", verify_chi2, "chi(2) of the constituent boson (2 = plain)");
    verify->add_option("--tol", verify_tol, "pass tolerance");
    verify->add_flag("--fock", verify_fock, "also run weak equalities on a truncated Fock space");
    verify->add_option("--cutoff", verify_cutoff, "boson occupation cutoff for --fock");
    verify->add_option("--depth", verify_depth, "generator depth for --fock (default: mode count)");

    // solve
    auto* solve = app.add_subcommand("solve", "generate a solution family sample");
    std::string solve_family, solve_out = "solution";
    double solve_theta = 0.5, solve_chi2 = 2.0;
    int solve_branch = 0;
    unsigned solve_seed = 42;
    auto* fam_opt = solve->add_option("--family", solve_family, "family tag")->required();
    auto* theta_opt = solve->add_option("--theta", solve_theta, "frame angle (radians)");
    auto* chi2_opt = solve->add_option("--chi2", solve_chi2, "chi(2) for deformed families");
    solve->add_option("--branch", solve_branch, "sub-branch for three-mode patterns");
    solve->add_option("--seed", solve_seed, "random seed");
    solve->add_option("--out", solve_out, "output file prefix");
    static_cast<void>(fam_opt);

    // entropy
    auto* entropy_cmd = app.add_subcommand("entropy", "Schmidt data of one matrix file");
    std::string entropy_file, entropy_format = "text";
    entropy_cmd->add_option("file", entropy_file, "matrix JSON file")->required();
    entropy_cmd->add_option("--format", entropy_format, "text | json | csv")
        ->check(CLI::IsMember({"text", "json", "csv"}));

    // curves
    auto* curves = app.add_subcommand("curves", "write curve/grid data as CSV");
    CurveFlags cf;
    curves->add_option("--curve", cf.curve,
                       "s2 | purity | equi-entropy-contour | entropy-K | entropy-trW | pair-3mode")
        ->required();
    curves->add_option("--out", cf.out, "output CSV path")->required();
    curves->add_option("--min", cf.min, "first parameter range start");
    curves->add_option("--max", cf.max, "first parameter range end");
    curves->add_option("--steps", cf.steps, "first parameter step count");
    curves->add_option("--min2", cf.min2, "second parameter range start");
    curves->add_option("--max2", cf.max2, "second parameter range end");
    curves->add_option("--steps2", cf.steps2, "second parameter step count");
    curves->add_option("--theta2-1", cf.theta2_1, "fixed theta2 of mode 1 (pair-3mode)");
    curves->add_option("--theta2-2", cf.theta2_2, "fixed theta2 of mode 2 (pair-3mode)");
    curves->add_option("--gamma", cf.gamma, "fixed relative phase (pair-3mode)");
    curves->add_option("--seed", cf.seed, "random seed (recorded in the header)");
    curves->add_option("--format", cf.format, "csv | json")
        ->check(CLI::IsMember({"csv", "json"}));

    // fock-check
    auto* fock = app.add_subcommand("fock-check", "run the operator identity suite");
    double fc_chi2 = 2.0, fc_tol = 1e-10;
    int fc_cutoff = 3, fc_modes = 2, fc_trials = 5;
    unsigned fc_seed = 42;
    fock->add_option("--chi2", fc_chi2, "chi(2) of the constituent boson");
    fock->add_option("--cutoff", fc_cutoff, "boson occupation cutoff");
    fock->add_option("--modes", fc_modes, "boson and fermion mode count");
    fock->add_option("--trials", fc_trials, "random matrix draws");
    fock->add_option("--seed", fc_seed, "random seed");
    fock->add_option("--tol", fc_tol, "pass tolerance");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitError;
    }

    try {
        if (verify->parsed())
            return cmd_verify(verify_files, verify_chi2, verify_tol, verify_fock, verify_cutoff,
                              verify_depth);
        if (solve->parsed())
            return cmd_solve(solve_family, solve_theta, theta_opt->count() > 0, solve_chi2,
                             chi2_opt->count() > 0, solve_branch, solve_seed, solve_out);
        if (entropy_cmd->parsed()) return cmd_entropy(entropy_file, entropy_format);
        if (curves->parsed()) {
            std::ostringstream invocation;
            invocation << "cfent curves --curve " << cf.curve << " --min " << fmt_g(cf.min)
                       << " --max " << fmt_g(cf.max) << " --steps " << cf.steps << " --min2 "
                       << fmt_g(cf.min2) << " --max2 " << fmt_g(cf.max2) << " --steps2 "
                       << cf.steps2 << " --theta2-1 " << fmt_g(cf.theta2_1) << " --theta2-2 "
                       << fmt_g(cf.theta2_2) << " --gamma " << fmt_g(cf.gamma) << " --seed "
                       << cf.seed;
            return cmd_curves(cf, invocation.str());
        }
        if (fock->parsed())
            return cmd_fock_check(fc_chi2, fc_cutoff, fc_modes, fc_trials, fc_seed, fc_tol);
    } catch (const CLI::ValidationError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitError;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitError;
    }
    return kExitError;
}
