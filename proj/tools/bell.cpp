#include "bell/bundle.hpp"
#include "bell/families.hpp"
#include "bell/local.hpp"
#include "bell/quantum.hpp"
#include "bell/repro.hpp"

#include <CLI11.hpp>

#include <cstdlib>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>

#ifdef _OPENMP
#include <omp.h>
#endif

using namespace bell;

namespace {


std::string slurp(const std::string& path) {
    if (path == "-") {
        std::ostringstream os;
        os << std::cin.rdbuf();
        return os.str();
    }
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("cannot open " + path);
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
}

Functional load(const std::string& path) {
    try {
        return parse_functional(slurp(path));
    } catch (const ParseError& e) {
        throw ParseError(e.line, (path == "-" ? std::string("<stdin>") : path) + ": " + e.what());
    }
}

void emit(const std::string& path, const std::string& text) {
    if (path.empty() || path == "-") {
        std::cout << text;
        return;
    }
    std::ofstream out(path);
    out << text;
    if (!out) throw std::runtime_error("cannot write " + path);
}

std::string fmt_complex(const cplx& z) {
    std::ostringstream os;
    os << std::setprecision(10) << z.real();
    if (std::abs(z.imag()) > 1e-14) os << (z.imag() < 0 ? "-" : "+") << std::abs(z.imag()) << "i";
    return os.str();
}

std::string model_dump(const QuantumModel& q) {
    std::ostringstream os;
    os << "# model d=" << q.d << "\n";
    for (std::size_t p = 0; p < q.obs.size(); ++p)
        for (std::size_t j = 0; j < q.obs[p].size(); ++j) {
            os << "# " << party_name(static_cast<int>(p)) << j + 1 << " =";
            const Mat& m = q.obs[p][j];
            for (int r = 0; r < m.rows(); ++r) {
                os << (r ? " ;" : "");
                for (int c = 0; c < m.cols(); ++c) os << " " << fmt_complex(m(r, c));
            }
            os << "\n";
        }
    os << "# state =";
    for (long i = 0; i < q.state.size(); ++i)
        if (std::abs(q.state[i]) > 1e-12) os << " [" << i << "] " << fmt_complex(q.state[i]);
    os << "\n";
    return os.str();
}

std::string default_out_dir() {
    const char* e = std::getenv("BELL_OUT_DIR");
    return e && *e ? e : "bell_out";
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"construct and check multipartite Bell inequalities"};
    app.require_subcommand(1);
    app.fallthrough();
    int threads = 0;
    std::string out = "-";
    app.add_option("--threads", threads, "worker threads (0: all cores)")->check(CLI::NonNegativeNumber);
    app.add_option("-o,--output", out, "output file ('-' for stdout)");

    std::string file, file2, expr;

    auto* bound = app.add_subcommand("bound", "LHV bound and saturating vertex count");
    bound->add_option("file", file, "functional file or '-'")->required();
    bool list = false;
    bound->add_flag("--list", list, "print the saturating strategies");

    auto* tight = app.add_subcommand("tight", "facet test on the local polytope");
    tight->add_option("file", file, "functional file or '-'")->required();

    auto* dec = app.add_subcommand("decompose", "pieces per sign vector of the last party");
    dec->add_option("file", file, "functional file or '-'")->required();

    auto* itr = app.add_subcommand("iterate", "build a functional from a spec or bundle");
    itr->add_option("spec", file, "spec file or '-'")->required();

    auto* fam = app.add_subcommand("family", "named families and catalog entries");
    std::vector<std::string> fargs;
    fam->add_option("args", fargs, "mabk n | caf n | emabk n | i3322 n | sliwa k | sliwa4 k row | sliwa5 row | chsh | wbz | counterexample")
        ->required();

    auto* qm = app.add_subcommand("qmax", "see-saw lower bound on the quantum value");
    qm->add_option("file", file, "functional file or '-'")->required();
    SeesawOptions sso;
    int dim = 2;
    double target = std::nan(""), tol = 1e-4;
    qm->add_option("--dim", dim, "local dimension")->check(CLI::Range(2, 4));
    qm->add_option("--restarts", sso.restarts, "random restarts")->check(CLI::Range(1, 100000));
    qm->add_option("--seed", sso.seed, "seed");
    qm->add_option("--rounds", sso.max_rounds, "maximal see-saw rounds")->check(CLI::Range(1, 1000000));
    qm->add_option("--target", target, "expected value; exit 1 when missed by more than --tol");
    qm->add_option("--tol", tol, "tolerance for --target")->check(CLI::NonNegativeNumber);
    bool no_model = false;
    qm->add_flag("--no-model", no_model, "omit the model dump");

    auto* sw = app.add_subcommand("sweep", "GGHZ-state curve: best value per state angle");
    sw->add_option("file", file, "functional file or '-'")->required();
    int grid = 199;
    SweepOptions swo;
    sw->add_option("--grid", grid, "interior grid points")->check(CLI::Range(1, 100000));
    sw->add_option("--seed", swo.seed, "seed");
    sw->add_option("--restarts", swo.restarts, "restarts per grid point")->check(CLI::Range(1, 100000));

    auto* tr = app.add_subcommand("transform", "apply a symmetry (swap A B, perm A 1 2, flip C1, neg; comma separated)");
    tr->add_option("file", file, "functional file or '-'")->required();
    tr->add_option("expr", expr, "transform expression")->required();

    auto* can = app.add_subcommand("canonical", "orbit representative");
    can->add_option("file", file, "functional file or '-'")->required();

    auto* eq = app.add_subcommand("equal", "exit 0 iff two functionals are equal");
    eq->add_option("a", file, "first file or '-'")->required();
    eq->add_option("b", file2, "second file")->required();

    auto* rep = app.add_subcommand("reproduce", "run a reproduction scenario (or 'all')");
    std::string scen, outdir = default_out_dir();
    rep->add_option("scenario", scen, "scenario name")->required();
    rep->add_option("--out", outdir, "report directory (default $BELL_OUT_DIR or ./bell_out)");
    ReproOptions ro;
    rep->add_option("--seed", ro.seed, "seed");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

#ifdef _OPENMP
    if (threads > 0) omp_set_num_threads(threads);
#endif
    LhvOptions lo;
    lo.threads = threads;
    sso.threads = swo.threads = ro.threads = threads;

    try {
        std::ostringstream os;
        int code = 0;
        if (*bound) {
            Functional f = load(file);
            auto r = lhv_bound(f, lo);
            os << "bound " << r.lhv_bound.get_str() << "\n";
            os << "saturating " << r.saturating_count << "\n";
            if (list) {
                if (r.truncated) os << "# list truncated\n";
                for (std::size_t i = 0; i < r.maximizers.size(); ++i) {
                    auto s = r.maximizer(f.scenario(), i);
                    os << "#";
                    for (std::size_t p = 0; p < s.size(); ++p) {
                        os << " " << party_name(static_cast<int>(p)) << "=";
                        for (int v : s[p]) os << (v > 0 ? '+' : '-');
                    }
                    os << "\n";
                }
            }
        } else if (*tight) {
            Functional f = load(file);
            auto r = is_tight(f, lo);
            os << "bound " << r.lhv_bound.get_str() << "\n";
            os << "saturating " << r.saturating_count << "\n";
            os << "dimension " << r.dimension << "\n";
            os << "rank " << r.affine_rank << "\n";
            os << "facet " << (r.is_facet ? "true" : "false") << "\n";
            code = r.is_facet ? 0 : 1;
        } else if (*dec) {
            os << write_bundle(decompose(load(file)));
        } else if (*itr) {
            std::string text = slurp(file);
            std::istringstream in(text);
            std::filesystem::path base = file == "-" ? std::filesystem::path(".") : std::filesystem::path(file).parent_path();
            IterationSpec spec;
            try {
                spec = read_spec(in, base.empty() ? "." : base);
            } catch (const ParseError& e) {
                throw ParseError(e.line, (file == "-" ? std::string("<stdin>") : file) + ": " + e.what());
            }
            os << render(build(spec));
        } else if (*fam) {
            auto num = [&](std::size_t i) {
                if (i >= fargs.size()) throw CLI::ValidationError("family " + fargs[0] + " needs more arguments");
                try {
                    std::size_t used = 0;
                    int v = std::stoi(fargs[i], &used);
                    if (used != fargs[i].size()) throw std::invalid_argument("");
                    return v;
                } catch (const std::logic_error&) {
                    throw CLI::ValidationError("not an integer: " + fargs[i]);
                }
            };
            auto arity = [&](std::size_t n) {
                if (fargs.size() != n + 1) throw CLI::ValidationError("family " + fargs[0] + " takes " + std::to_string(n) + " argument(s)");
            };
            const std::string& name = fargs[0];
            Functional f;
            if (name == "mabk") arity(1), f = mabk(num(1));
            else if (name == "caf") arity(1), f = caf(num(1));
            else if (name == "emabk") arity(1), f = emabk(num(1));
            else if (name == "i3322") arity(1), f = i3322(num(1));
            else if (name == "sliwa") arity(1), f = sliwa(num(1));
            else if (name == "sliwa4") arity(2), f = sliwa4(num(1), num(2));
            else if (name == "sliwa5") arity(1), f = sliwa5(num(1));
            else if (name == "chsh") arity(0), f = chsh();
            else if (name == "wbz") arity(0), f = wbz();
            else if (name == "counterexample") arity(0), f = counterexample();
            else throw CLI::ValidationError("unknown family '" + name + "'");
            os << render(f);
        } else if (*qm) {
            Functional f = load(file);
            auto r = seesaw(f, dim, sso);
            os << std::setprecision(12) << "value " << r.value << "\n";
            os << "# restart " << r.best_restart << ", rounds " << r.rounds << ", monotone " << (r.monotone ? "yes" : "no") << "\n";
            if (!no_model) os << model_dump(r.model);
            if (!std::isnan(target) && std::abs(r.value - target) > tol) code = 1;
        } else if (*sw) {
            Functional f = load(file);
            auto pts = ghz_sweep(f, interior_grid(grid), swo);
            os << std::setprecision(12) << "theta\tvalue\n";
            for (auto& p : pts) os << p.theta << "\t" << p.value << "\n";
            auto s = summarize(pts);
            os << "# max " << s.max_value << " at theta " << s.argmax << "\n";
            for (auto& [a, b] : s.violated) os << "# violated " << a << " " << b << "\n";
        } else if (*tr) {
            Functional f = load(file);
            os << render(apply_transform(f, parse_transform(expr, f.scenario())));
        } else if (*can) {
            os << render(canonical_form(load(file)));
        } else if (*eq) {
            bool same = load(file) == load(file2);
            os << (same ? "equal" : "different") << "\n";
            code = same ? 0 : 1;
        } else if (*rep) {
            std::vector<std::string> which;
            if (scen == "all") which = scenario_names();
            else which.push_back(scen);
            bool ok = true;
            for (auto& s : which) ok = run_scenario(s, outdir, std::cerr, ro) && ok;
            os << (ok ? "pass" : "fail") << "\n";
            code = ok ? 0 : 1;
        }
        emit(out, os.str());
        return code;
    } catch (const CLI::ValidationError& e) {
        std::cerr << "bell: " << e.what() << "\n";
        return 2;
    } catch (const ParseError& e) {
        std::cerr << "bell: " << e.what() << "\n";
        return 2;
    } catch (const UnknownScenario& e) {
        std::cerr << "bell: " << e.what() << "\n";
        return 2;
    } catch (const std::invalid_argument& e) {
        std::cerr << "bell: " << e.what() << "\n";
        return 2;
    } catch (const std::out_of_range& e) {
        std::cerr << "bell: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "bell: " << e.what() << "\n";
        return 1;
    }
}
