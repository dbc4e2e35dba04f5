// End-to-end acceptance suite. Each criterion prints one [PASS]/[FAIL]
// line; the process exits nonzero if any criterion fails. The optional
// argv[1] is the path of the command-line tool used by the round-trip
// criterion (skipped with a [FAIL] if absent).

#include <cctype>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <numbers>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "cfent/composite.hpp"
#include "cfent/entanglement.hpp"
#include "cfent/matrix_io.hpp"
#include "cfent/realization.hpp"

using namespace cfent;

namespace {

constexpr double kLn2 = 0.6931471805599453;
constexpr double kLn3 = 1.0986122886681098;
constexpr double kPi = std::numbers::pi;

int g_failures = 0;

void report(int criterion, const std::string& what, bool ok, const std::string& detail = "") {
    std::cout << (ok ? "[PASS]" : "[FAIL]") << " criterion " << criterion << ": " << what;
    if (!ok && !detail.empty()) std::cout << " -- " << detail;
    std::cout << "\n";
    if (!ok) ++g_failures;
}

std::string dbl(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.6e", v);
    return buf;
}

// 1. entropy curve values and the location of its maximum
void criterion_entropy_curve() {
    bool ok = std::abs(s2(kPi / 4) - kLn2) < 1e-9 && std::abs(s2(0.0)) < 1e-15;
    const int n = 10000;
    int argmax = 0;
    double best = -1.0;
    for (int i = 0; i < n; ++i) {
        const double th = kPi / 2 * i / (n - 1);
        if (s2(th) > best) {
            best = s2(th);
            argmax = i;
        }
    }
    const double step = kPi / 2 / (n - 1);
    const double loc = kPi / 2 * argmax / (n - 1);
    ok = ok && std::abs(loc - kPi / 4) <= step;
    report(1, "two-mode entropy curve: ln 2 at pi/4, zero at 0, maximum at pi/4", ok,
           "max " + dbl(best) + " at " + dbl(loc));
}

// 2. purity curve endpoints and minimum
void criterion_purity_curve() {
    const bool ok = std::abs(purity_theta(kPi / 4) - 0.5) < 1e-12 &&
                    std::abs(purity_theta(0.0) - 1.0) < 1e-12 &&
                    std::abs(purity_theta(kPi / 2) - 1.0) < 1e-12;
    report(2, "purity curve: 1/2 at pi/4, one at the endpoints", ok);
}

// 3. block-embedded unitary construction reproduces ln m and 1/m
void criterion_quasiboson_table() {
    std::mt19937_64 rng(101);
    bool ok = true;
    std::string detail;
    for (int m = 1; m <= 6; ++m) {
        const auto expect = quasiboson_entropy_purity(m);
        for (int pad = 0; pad <= 2 && ok; ++pad) {
            const auto phi = quasiboson_structural_matrix(m, m + pad, m + (pad + 1) % 3, rng);
            const auto s = schmidt(phi);
            if (std::abs(entropy(s) - expect.entropy) > 1e-12 ||
                std::abs(purity(s) - expect.purity) > 1e-12) {
                ok = false;
                detail = "m=" + std::to_string(m) + " entropy " + dbl(entropy(s)) + " purity " +
                         dbl(purity(s));
            }
        }
    }
    report(3, "quasiboson table m=1..6: entropy ln m and purity 1/m within 1e-12", ok, detail);
}

// 4. every family generator satisfies its own conditions
void criterion_family_soundness() {
    std::mt19937_64 rng(102);
    bool ok = true;
    std::string detail;
    for (int f = 0; f < kFamilyCount && ok; ++f) {
        for (int trial = 0; trial < 200; ++trial) {
            const auto s = sample_family(family_tag(f), rng);
            const double r = residual({s.phi1, s.phi2}, DeformationSpec::deformed(s.chi2));
            if (r >= 1e-10) {
                ok = false;
                detail = family_name(family_tag(f)) + " trial " + std::to_string(trial) +
                         " residual " + dbl(r);
                break;
            }
        }
    }
    report(4, "realization soundness: 200 samples per family with residual < 1e-10", ok, detail);
}

// 5. determinant of the deformed linear system matches its closed form
void criterion_determinant_identity() {
    std::mt19937_64 rng(103);
    std::uniform_real_distribution<double> chi2(0.0, 4.0), ang(0.0, kPi / 2), ph(0.0, 2 * kPi);
    bool ok = true;
    std::string detail;
    for (int trial = 0; trial < 1000; ++trial) {
        const double t = ang(rng), b = ang(rng);
        const Complex u = std::polar(std::cos(b), ph(rng));
        const Complex v = std::polar(std::sin(b), ph(rng));
        const auto sys = deformed_linear_system({std::cos(t), std::sin(t)}, u, v, chi2(rng));
        if (std::abs(sys.determinant - sys.predicted_determinant) >= 1e-12) {
            ok = false;
            detail = "mismatch " + dbl(std::abs(sys.determinant - sys.predicted_determinant));
            break;
        }
    }
    report(5, "determinant identity over 1000 random draws within 1e-12", ok, detail);
}

// 6. weak equalities and closed-form expansions on a cutoff-3 space
void criterion_fock_weak_equalities() {
    std::mt19937_64 rng(104);
    bool ok = true;
    std::string detail;
    const std::vector<FamilyTag> tags = {FamilyTag::TwoModeDistinct, FamilyTag::TwoModeEqual,
                                         FamilyTag::DeformedB, FamilyTag::DeformedCDiagonal,
                                         FamilyTag::DeformedCNilpotent};
    const FockBasis basis = enumerate_basis({2, 2, 3});
    const SparseOp id = identity_op(basis.size());
    const SparseOp zero(basis.size(), basis.size());
    for (const auto tag : tags) {
        const auto s = sample_family(tag, rng);
        const auto chi = StructureFunction::with_chi2(s.chi2, 4);
        const std::vector<StructuralMatrix> phis{s.phi1, s.phi2};
        std::vector<SparseOp> cr;
        for (const auto& p : phis) cr.push_back(composite_creator(p, basis, chi));

        for (int a = 0; a < 2 && ok; ++a) {
            // strict nilpotency
            const double nil = max_abs(SparseOp(cr[a] * cr[a]));
            if (nil > 1e-15) {
                ok = false;
                detail = family_name(tag) + " creator square " + dbl(nil);
            }
            for (int b = 0; b < 2 && ok; ++b) {
                const SparseOp anti = anticommutator(adjoint_op(cr[a]), cr[b]);
                const auto rep = weak_equal(anti, a == b ? id : zero, cr, basis, 1e-10, 1);
                if (!rep.equal) {
                    ok = false;
                    detail = family_name(tag) + " anticommutator residual " +
                             dbl(rep.max_residual);
                }
            }
        }
        if (!ok) break;
        const double expansion = verify_anticommutator_expansion(s.phi1, s.phi2, chi, basis);
        const double nested = verify_nested_identities(phis, chi, basis);
        if (expansion >= 1e-12 || nested >= 1e-12) {
            ok = false;
            detail = family_name(tag) + " expansion " + dbl(expansion) + " nested " + dbl(nested);
            break;
        }
    }
    report(6, "fock-space weak equalities and closed-form expansions on cutoff 3", ok, detail);
}

// 7. more composite modes than fermion modes kill the product state
void criterion_mode_bound() {
    std::mt19937_64 rng(105);
    const FockBasis basis = enumerate_basis({2, 2, 3});
    const auto chi = StructureFunction::nondeformed(4);
    const auto sol = sample_family(FamilyTag::TwoModeDistinct, rng);
    const auto extra = StructuralMatrix::random(2, 2, rng);
    const auto rep = mode_count_bound_check({extra, sol.phi1, sol.phi2}, basis, chi);
    const bool ok = rep.more_composites_than_fermion_modes && rep.product_norm < 1e-13 &&
                    rep.remainder_norm > 0.1;
    report(7, "mode bound: three composites over two fermion modes vanish", ok,
           "product " + dbl(rep.product_norm) + " remainder " + dbl(rep.remainder_norm));
}

// 8. closed-form three-mode entropies match the factorization route
void criterion_three_mode_duality() {
    std::mt19937_64 rng(106);
    std::uniform_real_distribution<double> mid(0.2, kPi / 2 - 0.2), wide(0.1, kPi / 2 - 0.1),
        full(0.0, 2 * kPi), unit(0.0, 1.0);
    bool ok = true;
    std::string detail;
    const auto fail = [&](const std::string& d) {
        ok = false;
        detail = d;
    };

    // paired diagonal family
    for (int trial = 0; trial < 100 && ok; ++trial) {
        const double a1 = mid(rng), a2 = wide(rng), b2 = wide(rng), g = full(rng);
        const auto p = entropy_pair_3mode(a1, a2, b2, g);
        const Eigen::Vector3d lam(std::cos(a1) * std::cos(a2), std::cos(a1) * std::sin(a2),
                                  std::sin(a1));
        const double c12 = std::cos(p.theta1_2);
        const Eigen::Vector3d mag(c12 * std::cos(b2), c12 * std::sin(b2), std::sin(p.theta1_2));
        const Complex z1 = lam(0) * mag(0), z2 = lam(1) * mag(1) * std::polar(1.0, g);
        Eigen::Vector3cd phi2(mag(0), mag(1) * std::polar(1.0, g), -(z1 + z2) / lam(2));
        const StructuralMatrix m1(lam.cast<Complex>().asDiagonal().toDenseMatrix());
        const StructuralMatrix m2(phi2.asDiagonal().toDenseMatrix());
        if (residual({m1, m2}, DeformationSpec::nondeformed()) > 1e-10)
            fail("pair-3mode construction fails the conditions");
        if (std::abs(p.s1 - entropy(schmidt(m1.mat()))) > 1e-10 ||
            std::abs(p.s2 - entropy(schmidt(m2.mat()))) > 1e-10)
            fail("pair-3mode closed form vs factorization");
        if (std::abs(p.s1 - p.s2) > kLn2 + 1e-12) fail("pair-3mode entropy difference bound");
    }

    // two-equal family, unitary block
    for (int trial = 0; trial < 100 && ok; ++trial) {
        const double t1 = wide(rng);
        const double l1 = std::cos(t1) / std::numbers::sqrt2, l3 = std::sin(t1);
        if (std::abs(l1 - l3) < 0.02) continue;
        const double xi = full(rng);
        const auto sol =
            solve_three_mode({l1, l1, l3}, ThreeModePattern::TwoEqual, 0).generate({xi, full(rng)});
        const double s1 = entropy_two_equal_s1(t1);
        const double s2c = entropy_two_equal_s2(t1, 2.0 * std::abs(std::cos(xi)));
        if (std::abs(s1 - entropy(schmidt(sol.phi1.mat()))) > 1e-10 ||
            std::abs(s2c - entropy(schmidt(sol.phi2.mat()))) > 1e-10)
            fail("two-equal closed forms vs factorization");
        if (std::abs(s1 - s2c) > kLn2 + 1e-12) fail("two-equal entropy difference bound");
    }

    // two-equal family, distinct block values, three-angle form
    for (int trial = 0; trial < 100 && ok; ++trial) {
        const double t1 = wide(rng), t3 = wide(rng), g = full(rng);
        const double l1 = std::cos(t1) / std::numbers::sqrt2, l3 = std::sin(t1);
        if (l3 < 0.05) continue;
        const auto su3 = su3_orthonormal_pair(t1, kPi / 4, t3, g);
        const StructuralMatrix m1(
            Eigen::Vector3cd(l1, l1, l3).asDiagonal().toDenseMatrix());
        const StructuralMatrix m2(su3.phi.asDiagonal().toDenseMatrix());
        if (residual({m1, m2}, DeformationSpec::nondeformed()) > 1e-10)
            fail("three-angle construction fails the conditions");
        if (std::abs(entropy_s2_threeangle(t1, t3, g) - entropy(schmidt(m2.mat()))) > 1e-10)
            fail("three-angle closed form vs factorization");
        if (std::abs(entropy_two_equal_s1(t1) - entropy_s2_threeangle(t1, t3, g)) > kLn2 + 1e-12)
            fail("three-angle entropy difference bound");
    }

    // all-equal family, diagonal branch
    int done = 0;
    while (done < 100 && ok) {
        const double t1 = mid(rng), g = full(rng);
        const double cg = std::cos(g);
        if (std::abs(cg) < 0.1) continue;
        const double k = (std::pow(std::sin(t1), 2) - 0.5) / (std::pow(std::cos(t1), 2) * cg);
        if (std::abs(k) > 0.5) continue;
        ++done;
        const double t2 = 0.5 * std::asin(std::clamp(2.0 * std::abs(k), 0.0, 1.0));
        const Eigen::Vector3d lam(std::cos(t1) * std::cos(t2), std::cos(t1) * std::sin(t2),
                                  std::sin(t1));
        const double cosgt =
            std::clamp((lam(2) * lam(2) - lam(0) * lam(0) - lam(1) * lam(1)) /
                           (2.0 * lam(0) * lam(1)),
                       -1.0, 1.0);
        const Complex w2 = std::polar(1.0, std::acos(cosgt));
        const Complex w3 = -(lam(0) + lam(1) * w2) / lam(2);
        Eigen::Vector3cd phi2(lam(0), lam(1) * w2, lam(2) * w3);
        const double l = 1.0 / std::numbers::sqrt3;
        const StructuralMatrix m1(Eigen::Vector3cd(l, l, l).asDiagonal().toDenseMatrix());
        const StructuralMatrix m2(phi2.asDiagonal().toDenseMatrix());
        const double closed = entropy_K(t1, g);
        if (residual({m1, m2}, DeformationSpec::nondeformed()) > 1e-10)
            fail("all-equal diagonal construction fails the conditions");
        if (std::abs(closed - entropy(schmidt(m2.mat()))) > 1e-10)
            fail("all-equal diagonal closed form vs factorization");
        if (closed < kLn2 - 1e-12 || closed > kLn3 + 1e-12)
            fail("all-equal diagonal entropy outside [ln 2, ln 3]");
        if (std::abs(kLn3 - closed) > kLn2 + 1e-12) fail("all-equal entropy difference bound");
    }

    // all-equal family, block branch
    for (int trial = 0; trial < 100 && ok; ++trial) {
        const double bw = wide(rng), pu = full(rng), pv = full(rng), eta = full(rng);
        const double l = 1.0 / std::numbers::sqrt3;
        const auto sol = solve_three_mode({l, l, l}, ThreeModePattern::AllEqual, 1)
                             .generate({bw, pu, pv, eta});
        const double tr = 2.0 * std::abs(std::cos(bw) * std::cos(pu));
        const double closed = entropy_trW(tr);
        if (std::abs(closed - entropy(schmidt(sol.phi2.mat()))) > 1e-10)
            fail("block-trace closed form vs factorization");
        if (closed < kLn2 - 1e-12 || closed > kLn3 + 1e-12)
            fail("block-trace entropy outside [ln 2, ln 3]");
        if (std::abs(kLn3 - closed) > kLn2 + 1e-12) fail("block-trace entropy difference bound");
    }

    report(8, "three-mode closed forms match factorization over 100 draws each", ok, detail);
}

// 9. special values of the closed forms
void criterion_special_values() {
    bool ok = std::abs(entropy_trW(1.0) - kLn3) < 1e-12;
    const double brute = entropy_of_weights(Eigen::Vector3d(1.0 / 6, 1.0 / 6, 2.0 / 3));
    ok = ok && std::abs(entropy_trW(2.0) - brute) < 1e-12;
    ok = ok && std::abs(entropy_trW(2.0) - (std::log(6.0) - 2.0 / 3.0 * std::log(4.0))) < 1e-12;
    ok = ok && std::abs(entropy_K(kPi / 4, 0.7) - kLn2) < 1e-9;  // K -> 0 there
    report(9, "special values of the block-trace and diagonal-branch entropies", ok);
}

// 10. command-line round trip and byte-stable CSV output
void criterion_cli_roundtrip(const char* cli) {
    if (cli == nullptr) {
        report(10, "command-line round trip", false, "no CLI path given");
        return;
    }
    namespace fs = std::filesystem;
    const fs::path dir =
        fs::temp_directory_path() / ("cfent_acceptance_" + std::to_string(::getpid()));
    fs::create_directories(dir);
    const std::string quiet = " > /dev/null 2>&1";
    const auto run = [](const std::string& cmd) {
        const int status = std::system(cmd.c_str());
        return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    };
    bool ok = true;
    std::string detail;

    struct Job {
        const char* family;
        const char* extra;
        const char* chi2;
    };
    const std::vector<Job> jobs = {
        {"two-mode-distinct", "", "2"},
        {"two-mode-equal", "", "2"},
        {"deformed-b", " --chi2 0 --theta 0.6", "0"},
        {"deformed-b", " --chi2 3.1", "3.1"},
        {"deformed-c-diagonal", " --chi2 1.7 --theta 0.6", "1.7"},
        {"deformed-c-nilpotent", " --chi2 1", "1"},
        {"3mode-distinct", "", "2"},
        {"3mode-two-equal", "", "2"},
        {"3mode-two-equal", " --theta 0.7 --branch 1", "2"},
        {"3mode-all-equal", "", "2"},
        {"3mode-all-equal", " --theta 0 --branch 1", "2"},
    };
    int idx = 0;
    for (const auto& job : jobs) {
        const std::string prefix = (dir / ("sol" + std::to_string(idx++))).string();
        const std::string solve = std::string(cli) + " solve --family " + job.family +
                                  job.extra + " --seed 42 --out " + prefix + quiet;
        if (run(solve) != 0) {
            ok = false;
            detail = std::string("solve failed for ") + job.family + job.extra;
            break;
        }
        const std::string verify = std::string(cli) + " verify " + prefix + "_phi1.json " +
                                   prefix + "_phi2.json --chi2 " + job.chi2 + " --fock" + quiet;
        if (run(verify) != 0) {
            ok = false;
            detail = std::string("verify failed for ") + job.family + job.extra;
            break;
        }
    }

    // exit codes: a perturbed pair fails with 1, unreadable input with 2
    if (ok) {
        std::mt19937_64 rng(107);
        const auto sol = sample_family(FamilyTag::TwoModeDistinct, rng);
        Eigen::MatrixXcd bumped = sol.phi2.mat();
        bumped(0, 1) += 0.01;
        bumped /= bumped.norm();
        const std::string p1 = (dir / "bump1.json").string();
        const std::string p2 = (dir / "bump2.json").string();
        write_matrix_file(p1, sol.phi1.mat());
        write_matrix_file(p2, bumped);
        if (run(std::string(cli) + " verify " + p1 + " " + p2 + quiet) != 1) {
            ok = false;
            detail = "perturbed pair did not exit with code 1";
        }
        std::ofstream(dir / "broken.json") << "{ \"rows\": 2, ";
        if (ok && run(std::string(cli) + " verify " + (dir / "broken.json").string() + quiet) != 2) {
            ok = false;
            detail = "malformed input did not exit with code 2";
        }
    }

    if (ok) {
        const auto slurp = [](const fs::path& p) {
            std::ifstream in(p, std::ios::binary);
            std::ostringstream ss;
            ss << in.rdbuf();
            return ss.str();
        };
        const auto parse_rows = [](const fs::path& p) {
            std::vector<std::vector<double>> rows;
            std::ifstream in(p);
            std::string line;
            while (std::getline(in, line)) {
                if (line.empty() || line[0] == '#' || std::isalpha(line[0])) continue;
                std::vector<double> row;
                std::istringstream ls(line);
                std::string cell;
                while (std::getline(ls, cell, ',')) row.push_back(std::stod(cell));
                rows.push_back(std::move(row));
            }
            return rows;
        };
        for (const char* curve : {"s2", "purity", "entropy-K", "entropy-trW"}) {
            const fs::path a = dir / "a.csv", b = dir / "b.csv";
            const std::string base = std::string(cli) + " curves --curve " + curve +
                                     " --steps 101 --steps2 41 --seed 42 --out ";
            if (run(base + a.string() + quiet) != 0 || run(base + b.string() + quiet) != 0) {
                ok = false;
                detail = std::string("curves failed for ") + curve;
                break;
            }
            if (slurp(a) != slurp(b)) {
                ok = false;
                detail = std::string("CSV output not byte-identical for ") + curve;
                break;
            }
            // shape checks on the emitted data
            const auto rows = parse_rows(a);
            if (rows.empty()) {
                ok = false;
                detail = std::string("no data rows for ") + curve;
                break;
            }
            if (std::string(curve) == "s2") {
                std::size_t argmax = 0;
                for (std::size_t i = 0; i < rows.size(); ++i)
                    if (rows[i][1] > rows[argmax][1]) argmax = i;
                if (std::abs(rows[argmax][0] - kPi / 4) > kPi / 2 / 100.0) {
                    ok = false;
                    detail = "entropy curve maximum is away from pi/4";
                }
            } else if (std::string(curve) == "purity") {
                std::size_t argmin = 0;
                for (std::size_t i = 0; i < rows.size(); ++i)
                    if (rows[i][1] < rows[argmin][1]) argmin = i;
                if (std::abs(rows[argmin][1] - 0.5) > 1e-9 ||
                    std::abs(rows.front()[1] - 1.0) > 1e-12 ||
                    std::abs(rows.back()[1] - 1.0) > 1e-12 ||
                    std::abs(rows[argmin][0] - kPi / 4) > kPi / 2 / 100.0) {
                    ok = false;
                    detail = "purity curve shape is off";
                }
            } else if (std::string(curve) == "entropy-K") {
                for (const auto& row : rows)
                    if (row[2] < kLn2 - 1e-9 || row[2] > kLn3 + 1e-9) {
                        ok = false;
                        detail = "grid value outside [ln 2, ln 3]";
                        break;
                    }
            }
        }
    }
    fs::remove_all(dir);
    report(10, "command-line round trip: solve outputs verify, CSV is byte-stable", ok, detail);
}

}  // namespace

int main(int argc, char** argv) {
    criterion_entropy_curve();
    criterion_purity_curve();
    criterion_quasiboson_table();
    criterion_family_soundness();
    criterion_determinant_identity();
    criterion_fock_weak_equalities();
    criterion_mode_bound();
    criterion_three_mode_duality();
    criterion_special_values();
    criterion_cli_roundtrip(argc > 1 ? argv[1] : nullptr);

    if (g_failures == 0) {
        std::cout << "all acceptance criteria passed\n";
        return 0;
    }
    std::cout << g_failures << " criterion(s) failed\n";
    return 1;
}
