#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "weylcap/bounds.hpp"
#include "weylcap/oracle.hpp"
#include "weylcap/rng.hpp"

namespace {

using namespace weylcap;

class WriteError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

std::string fmt17(double x) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

void write_text(const std::string& text, const std::string& out_path) {
    if (out_path.empty()) {
        std::cout << text;
        return;
    }
    std::ofstream f(out_path, std::ios::binary);
    if (!f) throw WriteError("cannot open output path: " + out_path);
    f << text;
    f.flush();
    if (!f.good()) throw WriteError("write failed: " + out_path);
}

unsigned worker_count(int jobs) {
    unsigned n = std::thread::hardware_concurrency();
    if (n == 0) n = 1;
    if (const char* env = std::getenv("WEYLCAP_THREADS")) {
        char* end = nullptr;
        const unsigned long cap = std::strtoul(env, &end, 10);
        if (end != env && *end == '\0' && cap >= 1) n = std::min<unsigned long>(n, cap);
    }
    return std::min<unsigned>(n, static_cast<unsigned>(std::max(jobs, 1)));
}

int run_bounds(const std::string& spec_arg, bool oracle, std::uint64_t seed,
               const std::string& out) {
    std::string text = spec_arg;
    if (text.empty()) {
        std::ostringstream ss;
        ss << std::cin.rdbuf();
        text = ss.str();
    }
    const ChannelDistribution p = channel_from_json(text);
    const BoundReport report = coincidence_test(p);
    std::optional<double> chi_opt;
    if (oracle) {
        OptimizerConfig cfg;
        cfg.seed = seed;
        chi_opt = min_output_entropy(p, cfg).chi_opt;
    }
    write_text(bound_report_to_json(report, chi_opt) + "\n", out);
    return 0;
}

struct SweepRow {
    std::uint64_t seed = 0;
    double chi_lb = 0.0;
    double chi_ub = 0.0;
    std::optional<double> chi_opt;
    bool coincide = false;
    bool dset_achievable = false;
    WeylIndex argmin;
    double lb_seconds = 0.0;
};

int run_sweep(int d, int count, std::uint64_t seed, bool oracle, bool normalize, bool no_timing,
              const std::string& out) {
    if (count < 1) throw std::invalid_argument("count must be at least 1");
    std::vector<SweepRow> rows(count);
    std::atomic<int> next{0};
    const auto worker = [&] {
        for (int i; (i = next.fetch_add(1)) < count;) {
            const std::uint64_t row_seed = seed + static_cast<std::uint64_t>(i);
            const ChannelDistribution p = sample_random_channel(d, row_seed);
            const auto t0 = std::chrono::steady_clock::now();
            const LowerBound lb = lower_bound(p);
            const double secs =
                std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
            const BoundReport rep = coincidence_test(p);
            SweepRow& row = rows[i];
            row.seed = row_seed;
            row.chi_lb = lb.chi_lb;
            row.chi_ub = rep.chi_ub;
            row.coincide = rep.coincide;
            row.dset_achievable = rep.dset.achievable;
            row.argmin = rep.argmin;
            row.lb_seconds = no_timing ? 0.0 : secs;
            if (oracle) {
                OptimizerConfig cfg;
                cfg.restarts = 4;
                cfg.max_iters = 600;
                cfg.tol = 1e-8;
                cfg.seed = row_seed;
                row.chi_opt = min_output_entropy(p, cfg).chi_opt;
            }
        }
    };
    const unsigned nthreads = worker_count(count);
    std::vector<std::thread> pool;
    for (unsigned t = 1; t < nthreads; ++t) pool.emplace_back(worker);
    worker();
    for (auto& t : pool) t.join();

    std::sort(rows.begin(), rows.end(), [](const SweepRow& a, const SweepRow& b) {
        return a.chi_ub != b.chi_ub ? a.chi_ub > b.chi_ub : a.seed < b.seed;
    });

    const double scale = normalize ? std::log2(static_cast<double>(d)) : 1.0;
    std::string csv =
        "seed,d,chi_lb,chi_ub,chi_opt,coincide,dset_achievable,argmin_n,argmin_m,"
        "lb_runtime_seconds\r\n";
    for (const SweepRow& row : rows) {
        csv += std::to_string(row.seed);
        csv += ',';
        csv += std::to_string(d);
        csv += ',';
        csv += fmt17(row.chi_lb / scale);
        csv += ',';
        csv += fmt17(row.chi_ub / scale);
        csv += ',';
        if (row.chi_opt) csv += fmt17(*row.chi_opt / scale);
        csv += ',';
        csv += row.coincide ? "true" : "false";
        csv += ',';
        csv += row.dset_achievable ? "true" : "false";
        csv += ',';
        csv += std::to_string(row.argmin.n);
        csv += ',';
        csv += std::to_string(row.argmin.m);
        csv += ',';
        csv += fmt17(row.lb_seconds);
        csv += "\r\n";
    }
    write_text(csv, out);
    return 0;
}

int run_special(const std::string& kind, int d, double mu, double xi, double eta, double kappa,
                int n, int m, int na, int ma, int nb, int mb, const std::string& out) {
    std::optional<ChannelDistribution> p;
    double analytic = 0.0;
    if (kind == "depolarizing") {
        p = depolarizing_channel(d, mu);
        analytic = depolarizing_holevo_capacity(d, mu);
    } else if (kind == "depol-like-1") {
        p = depolarizing_like_one(d, xi, {n, m});
        analytic = uniform_tail_capacity(d, 1.0 - xi + xi / d);
    } else {
        p = depolarizing_like_two(d, eta, kappa, {na, ma}, {nb, mb});
        analytic = uniform_tail_capacity(d, 2.0 - (eta + kappa) + (eta + kappa - 1.0) / d);
    }
    const BoundReport rep = coincidence_test(*p);
    nlohmann::json j;
    j["kind"] = kind;
    j["d"] = d;
    j["analytic_capacity"] = analytic;
    j["chi_lb"] = rep.chi_lb;
    j["chi_ub"] = rep.chi_ub;
    j["abs_diff_lb"] = std::abs(rep.chi_lb - analytic);
    j["abs_diff_ub"] = std::abs(rep.chi_ub - analytic);
    j["coincide"] = rep.coincide;
    write_text(j.dump() + "\n", out);
    return 0;
}

int run_eig(int n, int m, int d, bool as_json, const std::string& out) {
    const WeylSpectrum spec = weyl_eigenbasis({n, m}, d);
    const ComplexMatrix w = weyl_operator({n, m}, d);
    double residual = 0.0;
    for (int col = 0; col < d; ++col) {
        CVector v(d);
        for (int i = 0; i < d; ++i) v[i] = spec.eigenvectors(i, col);
        const CVector wv = w.apply(v);
        for (int i = 0; i < d; ++i)
            residual = std::max(residual, std::abs(wv[i] - spec.eigenvalues[col] * v[i]));
    }

    std::string text;
    if (as_json) {
        nlohmann::json j;
        j["n"] = n;
        j["m"] = m;
        j["d"] = d;
        j["order"] = spec.order;
        j["phase_re"] = spec.phase.real();
        j["phase_im"] = spec.phase.imag();
        j["degenerate"] = spec.degenerate;
        j["max_residual"] = residual;
        auto& evs = j["eigenvalues"] = nlohmann::json::array();
        auto& vecs = j["eigenvectors"] = nlohmann::json::array();
        for (int col = 0; col < d; ++col) {
            evs.push_back({{"re", spec.eigenvalues[col].real()},
                           {"im", spec.eigenvalues[col].imag()}});
            nlohmann::json vec = nlohmann::json::array();
            for (int i = 0; i < d; ++i)
                vec.push_back({{"re", spec.eigenvectors(i, col).real()},
                               {"im", spec.eigenvectors(i, col).imag()}});
            vecs.push_back(std::move(vec));
        }
        text = j.dump() + "\n";
    } else {
        std::ostringstream ss;
        ss << "W(n=" << n << ", m=" << m << ", d=" << d << ")  order " << spec.order << "  phase ("
           << fmt17(spec.phase.real()) << ", " << fmt17(spec.phase.imag()) << ")"
           << (spec.degenerate ? "  [degenerate spectrum]" : "") << "\n";
        for (int col = 0; col < d; ++col) {
            ss << "  lambda[" << col << "] = (" << fmt17(spec.eigenvalues[col].real()) << ", "
               << fmt17(spec.eigenvalues[col].imag()) << ")  v = [";
            for (int i = 0; i < d; ++i) {
                if (i) ss << ", ";
                ss << "(" << fmt17(spec.eigenvectors(i, col).real()) << ", "
                   << fmt17(spec.eigenvectors(i, col).imag()) << ")";
            }
            ss << "]\n";
        }
        ss << "  max |W v - lambda v| = " << fmt17(residual) << "\n";
        text = ss.str();
    }
    write_text(text, out);
    return 0;
}

// Property checks over random inputs, one summary line each.
int run_verify(std::uint64_t seed, int count) {
    int failures = 0;
    const auto check = [&](const char* name, bool ok) {
        std::cout << (ok ? "ok   " : "FAIL ") << name << "\n";
        if (!ok) ++failures;
    };
    std::mt19937_64 g(seed);
    const auto random_channel = [&](int d) {
        return sample_random_channel(d, g());
    };
    const auto random_pure = [&](int d) {
        CVector v(d);
        for (int i = 0; i < d; ++i) {
            const double re = 2.0 * uniform_unit(g) - 1.0;
            const double im = 2.0 * uniform_unit(g) - 1.0;
            v[i] = {re, im};
        }
        normalize(v);
        return v;
    };

    {
        bool ok = true;
        for (int d = 2; d <= 12 && ok; ++d)
            for (int n = 0; n < d && ok; ++n)
                for (int m = 0; m < d && ok; ++m)
                    ok = weyl_operator({n, m}, d).is_unitary(1e-12);
        check("weyl operators unitary, d <= 12", ok);
    }
    {
        bool ok = true;
        for (int d = 2; d <= 8 && ok; ++d)
            for (int n = 0; n < d && ok; ++n)
                for (int m = 0; m < d && ok; ++m) {
                    std::vector<Complex> analytic = weyl_eigenvalues({n, m}, d);
                    std::vector<Complex> numeric = unitary_eigenvalues(weyl_operator({n, m}, d));
                    std::vector<char> used(numeric.size(), 0);
                    for (const Complex lam : analytic) {
                        bool matched = false;
                        for (size_t k = 0; k < numeric.size(); ++k)
                            if (!used[k] && std::abs(numeric[k] - lam) <= 1e-10) {
                                used[k] = 1;
                                matched = true;
                                break;
                            }
                        if (!matched) ok = false;
                    }
                }
        check("analytic eigenvalue multisets match numerics, d <= 8", ok);
    }
    {
        bool ok = true;
        for (int d = 2; d <= 8 && ok; ++d)
            for (int n = 0; n < d && ok; ++n)
                for (int m = 0; m < d && ok; ++m) {
                    const WeylOrder ord = weyl_order({n, m}, d);
                    if (d % ord.order != 0) ok = false;
                    const ComplexMatrix w = weyl_operator({n, m}, d);
                    ComplexMatrix pw = ComplexMatrix::identity(d);
                    for (int q = 1; q <= ord.order && ok; ++q) {
                        pw = pw * w;
                        ComplexMatrix scaled = ComplexMatrix::identity(d);
                        scaled *= pw(0, 0);
                        const bool proportional = pw.max_abs_diff(scaled) <= 1e-10;
                        if (q < ord.order ? proportional : !proportional) ok = false;
                    }
                    if (ok) {
                        ComplexMatrix expect = ComplexMatrix::identity(d);
                        expect *= ord.phase;
                        ok = pw.max_abs_diff(expect) <= 1e-10;
                    }
                }
        check("operator order minimal and phase exact, d <= 8", ok);
    }
    {
        bool ok = true;
        for (int d = 2; d <= 6 && ok; ++d)
            for (int rep = 0; rep < count && ok; ++rep) {
                const ChannelDistribution p = random_channel(d);
                const DensityMatrix out = apply_channel(p, DensityMatrix::pure(random_pure(d)));
                const std::vector<double> ev = hermitian_eigenvalues(out.mat());
                ok = ev.front() >= -1e-10;
                const DensityMatrix mixed =
                    apply_channel(sample_random_channel(d, g()), DensityMatrix::maximally_mixed(d));
                ok = ok && mixed.mat().max_abs_diff(DensityMatrix::maximally_mixed(d).mat()) <= 1e-12;
            }
        check("channel outputs are valid states; maximally mixed is fixed", ok);
    }
    {
        bool ok = true;
        for (const int d : {2, 3, 5, 7})
            for (int rep = 0; rep < std::max(count / 10, 2) && ok; ++rep) {
                const ChannelDistribution p = random_channel(d);
                for (int n = 0; n < d && ok; ++n)
                    for (int m = 0; m < d && ok; ++m) {
                        if (n == 0 && m == 0) continue;
                        const WeylSpectrum spec = weyl_eigenbasis({n, m}, d);
                        const TransitionMatrix t = transition_matrix(p, {n, m});
                        std::vector<double> pattern = t.first_row_pattern();
                        std::sort(pattern.begin(), pattern.end());
                        for (int col = 0; col < d && ok; ++col) {
                            CVector v(d);
                            for (int i = 0; i < d; ++i) v[i] = spec.eigenvectors(i, col);
                            const ComplexMatrix out =
                                apply_channel(p, DensityMatrix::pure(v)).mat();
                            const ComplexMatrix in_basis = out.conjugate_by(spec.eigenvectors);
                            if (in_basis.off_diagonal_norm() >= 1e-10) ok = false;
                            std::vector<double> diag(d);
                            for (int i = 0; i < d; ++i) diag[i] = in_basis(i, i).real();
                            std::sort(diag.begin(), diag.end());
                            for (int i = 0; i < d; ++i)
                                if (std::abs(diag[i] - pattern[i]) > 1e-10) ok = false;
                        }
                    }
            }
        check("eigenstate outputs diagonal; diagonals match transition rows (prime d)", ok);
    }
    {
        bool ok = true;
        for (int d = 2; d <= 6 && ok; ++d)
            for (int rep = 0; rep < count && ok; ++rep) {
                const ChannelDistribution p = random_channel(d);
                const ZetaVector z = zeta(p);
                std::vector<double> ev =
                    hermitian_eigenvalues(apply_channel(p, DensityMatrix::pure(random_pure(d))).mat());
                std::sort(ev.begin(), ev.end(), std::greater<>());
                double zsum = 0.0, esum = 0.0;
                for (int i = 0; i < d; ++i) {
                    zsum += z.values[i];
                    esum += ev[i];
                    if (zsum < esum - 1e-10) ok = false;
                }
                if (std::abs(zsum - esum) > 1e-12) ok = false;
            }
        check("zeta majorizes every pure-state output spectrum", ok);
    }
    {
        bool ok = true;
        for (const int d : {2, 3, 5, 7})
            for (int rep = 0; rep < std::max(count / 4, 2) && ok; ++rep) {
                const ChannelDistribution p = random_channel(d);
                const LowerBound a = lower_bound_via_rows(p);
                const LowerBound b = lower_bound_via_states(p);
                ok = std::abs(a.chi_lb - b.chi_lb) <= 1e-9;
            }
        check("row and eigenstate lower-bound paths agree (prime d)", ok);
    }
    {
        bool ok = true;
        OptimizerConfig cfg;
        cfg.restarts = 2;
        cfg.max_iters = 200;
        cfg.tol = 1e-8;
        for (int rep = 0; rep < std::min(count, 20) && ok; ++rep) {
            const ChannelDistribution p = random_channel(3);
            cfg.seed = g();
            const BoundReport r = coincidence_test(p);
            const double chi_opt = min_output_entropy(p, cfg).chi_opt;
            ok = r.chi_lb - 1e-6 <= chi_opt && chi_opt <= r.chi_ub + 1e-6;
        }
        check("optimizer lands between the bounds (d = 3)", ok);
    }
    {
        bool ok = true;
        for (int rep = 0; rep < count && ok; ++rep) {
            const ChannelDistribution p = random_channel(2);
            const BoundReport r = coincidence_test(p);
            const double s_opt = bloch_refined_entropy_min(p, 200);
            ok = r.coincide && std::abs(r.chi_lb - (1.0 - s_opt)) <= 1e-5 &&
                 std::abs(r.chi_ub - r.chi_lb) <= 1e-9;
        }
        check("qubit bounds coincide and match the Bloch search", ok);
    }
    std::cout << (failures == 0 ? "all checks passed" : "some checks FAILED") << "\n";
    return failures == 0 ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Holevo-capacity bounds for discrete Weyl channels"};
    app.require_subcommand(1);

    std::string spec_arg, out_path, kind;
    int d = 0, count = 100, n = 0, m = 0, na = 0, ma = 1, nb = 1, mb = 0;
    std::uint64_t seed = 0;
    bool oracle = false, normalize = false, no_timing = false, as_json = false;
    double mu = 0.0, xi = 0.0, eta = 1.0, kappa = 1.0;

    CLI::App* cmd_bounds = app.add_subcommand(
        "bounds", "Capacity bounds and coincidence report for a channel (JSON on stdout)");
    cmd_bounds->add_option("spec", spec_arg,
                           "Channel JSON; read from stdin when omitted");
    cmd_bounds->add_flag("--oracle", oracle, "Also run the entropy optimizer and report chi_opt");
    cmd_bounds->add_option("--seed", seed, "Optimizer seed");
    cmd_bounds->add_option("--out", out_path, "Write to this path instead of stdout");

    CLI::App* cmd_sweep =
        app.add_subcommand("sweep", "Random-channel sweep, CSV sorted by chi_ub descending");
    cmd_sweep->add_option("--d", d, "Channel dimension")->required();
    cmd_sweep->add_option("--count", count, "Number of channels");
    cmd_sweep->add_option("--seed", seed, "Base seed; row i uses seed + i");
    cmd_sweep->add_flag("--oracle", oracle, "Fill the chi_opt column (slower)");
    cmd_sweep->add_flag("--normalize", normalize, "Divide capacity columns by log2(d)");
    cmd_sweep->add_flag("--no-timing", no_timing,
                        "Write 0 for lb_runtime_seconds, making output byte-reproducible");
    cmd_sweep->add_option("--out", out_path, "Write CSV to this path instead of stdout");

    CLI::App* cmd_special =
        app.add_subcommand("special", "Analytic capacity vs computed bounds for named channels");
    cmd_special->add_option("--kind", kind, "depolarizing, depol-like-1 or depol-like-2")
        ->required()
        ->check(CLI::IsMember({"depolarizing", "depol-like-1", "depol-like-2"}));
    cmd_special->add_option("--d", d, "Channel dimension")->required();
    cmd_special->add_option("--mu", mu, "Depolarizing weight");
    cmd_special->add_option("--xi", xi, "depol-like-1 weight");
    cmd_special->add_option("--eta", eta, "depol-like-2 first weight");
    cmd_special->add_option("--kappa", kappa, "depol-like-2 second weight");
    cmd_special->add_option("--n", n, "depol-like-1 index n");
    cmd_special->add_option("--m", m, "depol-like-1 index m");
    cmd_special->add_option("--na", na, "depol-like-2 first index n");
    cmd_special->add_option("--ma", ma, "depol-like-2 first index m");
    cmd_special->add_option("--nb", nb, "depol-like-2 second index n");
    cmd_special->add_option("--mb", mb, "depol-like-2 second index m");
    cmd_special->add_option("--out", out_path, "Write to this path instead of stdout");

    CLI::App* cmd_eig = app.add_subcommand("eig", "Spectrum of one Weyl operator");
    cmd_eig->add_option("--n", n, "Phase index")->required();
    cmd_eig->add_option("--m", m, "Shift index")->required();
    cmd_eig->add_option("--d", d, "Dimension")->required();
    cmd_eig->add_flag("--json", as_json, "Emit JSON instead of the text table");
    cmd_eig->add_option("--out", out_path, "Write to this path instead of stdout");

    CLI::App* cmd_verify = app.add_subcommand("verify", "Run property checks on random inputs");
    cmd_verify->add_option("--seed", seed, "Seed for the random inputs");
    cmd_verify->add_option("--count", count, "Samples per check")->default_val(20);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        if (cmd_bounds->parsed()) return run_bounds(spec_arg, oracle, seed, out_path);
        if (cmd_sweep->parsed())
            return run_sweep(d, count, seed, oracle, normalize, no_timing, out_path);
        if (cmd_special->parsed())
            return run_special(kind, d, mu, xi, eta, kappa, n, m, na, ma, nb, mb, out_path);
        if (cmd_eig->parsed()) return run_eig(n, m, d, as_json, out_path);
        if (cmd_verify->parsed()) return run_verify(seed, count);
    } catch (const WriteError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 4;
    } catch (const ParseError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::logic_error& e) {
        // Bad values inside a well-formed request: invalid distributions,
        // out-of-range parameters, composite-d restrictions. For eig these
        // are argument errors.
        std::cerr << "error: " << e.what() << "\n";
        return cmd_eig->parsed() ? 2 : 3;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
