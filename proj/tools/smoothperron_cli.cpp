// smoothperron: command-line front end for the kernel, series, Perron and experiment tools.
//
// exit codes: 0 ok, 1 usage / IO error, 2 a mathematical check failed

#include "smoothperron.hpp"

#include <CLI11.hpp>
#include <fmt/format.h>

#include <chrono>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>
#include <string>

using namespace smoothperron;
using io::Json;

namespace {

struct Globals {
    bool json = false;
    unsigned threads = 1;
    std::string manifest_path;
};

struct Outcome {
    Outcome() = default;
    Outcome(Json b, bool bare_scalar = false, bool passed = true) : body(std::move(b)), bare(bare_scalar), ok(passed) {}
    Json body;
    bool bare = false;  // print body as a single scalar
    bool ok = true;
    std::vector<std::string> outputs;
};

void print_text(const Json& j, const std::string& prefix, std::ostream& os) {
    if (j.is_object()) {
        for (auto it = j.begin(); it != j.end(); ++it)
            print_text(it.value(), prefix.empty() ? it.key() : prefix + "." + it.key(), os);
    } else if (j.is_array() && !j.empty() && (j.front().is_object() || j.front().is_array())) {
        for (std::size_t i = 0; i < j.size(); ++i) print_text(j[i], prefix + "[" + std::to_string(i) + "]", os);
    } else {
        os << prefix << " = " << io::dump17(j, 0) << "\n";
    }
}

PiecewiseKernel kernel_from(int m, const std::string& delta) { return build_pm(m, parse_rational(delta)); }

std::complex<double> parse_complex(const std::string& text) {
    auto comma = text.find(',');
    try {
        if (comma == std::string::npos) return {std::stod(text), 0.0};
        return {std::stod(text.substr(0, comma)), std::stod(text.substr(comma + 1))};
    } catch (const std::exception&) {
        throw std::invalid_argument("expected RE or RE,IM, got '" + text + "'");
    }
}

Json perron_json(const PerronReport& r) {
    Json j;
    j["series"] = r.series;
    j["form"] = to_string(r.form);
    j["x"] = r.x;
    j["kappa"] = r.kappa;
    j["T"] = r.T;
    j["direct"] = io::complex_json(r.direct);
    j["main_integral"] = io::complex_json(r.main_integral);
    j["correction"] = io::complex_json(r.correction);
    if (r.form == PerronForm::refined) j["refined_term"] = io::complex_json(r.refined_term);
    j["residual"] = r.residual;
    j["error_budget"] = r.error_budget;
    j["C_phi"] = r.C;
    j["B_kappa"] = r.B;
    j["B_certified"] = r.B_certified;
    j["quad_error_estimate"] = r.quad_error_estimate;
    j["series_error_bound"] = r.series_error_bound;
    if (r.form == PerronForm::theorem) j["tail_bound"] = r.tail_bound;
    j["tolerance"] = r.tolerance;
    j["panels"] = r.panels;
    j["quad_converged"] = r.quad_converged;
    j["passed"] = r.passed;
    return j;
}

Json shift_json(const ShiftReport& r) {
    Json j;
    j["series"] = r.series;
    j["x"] = r.x;
    j["kappa"] = r.kappa;
    j["kappa_prime"] = r.kappa_prime;
    j["T"] = r.T;
    j["V"] = r.V;
    j["lhs_integral"] = io::complex_json(r.lhs_integral);
    j["rhs_integral"] = io::complex_json(r.rhs_integral);
    j["residues"] = Json::array();
    for (const auto& t : r.residues)
        j["residues"].push_back(Json{{"pole", io::complex_json(t.pole)}, {"contribution", io::complex_json(t.contribution)}});
    j["residue_sum"] = io::complex_json(r.residue_sum);
    j["M"] = r.M;
    j["eta"] = r.eta;
    j["side_integral_sum"] = r.side_integral_sum;
    j["horizontal_error_bound"] = r.horizontal_error_bound;
    j["per_side_bound_sum"] = r.per_side_bound_sum;
    j["defect"] = r.defect;
    j["quad_error_estimate"] = r.quad_error_estimate;
    j["tolerance"] = r.tolerance;
    j["passed"] = r.passed;
    return j;
}

std::string rational_text(const Rational& r) {
    std::ostringstream os;
    os << r;
    return os.str();
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Smoothed Perron formula toolkit"};
    app.require_subcommand(1);
    app.fallthrough();
    Globals g;
    app.add_flag("--json", g.json, "machine-readable JSON output");
    app.add_option("--threads", g.threads, "parallelism cap")->check(CLI::PositiveNumber);
    app.add_option("--manifest", g.manifest_path, "write the run manifest here (default: stderr)");
    app.set_version_flag("--version", kVersion);

    std::map<std::string, std::string> params;
    auto record = [&](CLI::App* sub) {
        for (const CLI::Option* o : sub->get_options())
            if (o->count() > 0 && !o->get_lnames().empty()) params[o->get_lnames().front()] = o->as<std::string>();
    };
    std::function<Outcome()> action;
    std::string subcommand;

    // kernel ----------------------------------------------------------------------------
    auto* kernel = app.add_subcommand("kernel", "test kernels p_m(t; delta)");
    kernel->require_subcommand(1);
    int km = 3;
    std::string kdelta = "1";
    double kat = 0.0;
    int kmax = -1;
    auto add_kernel_opts = [&](CLI::App* s) {
        s->add_option("--m", km, "smoothing order m >= 1")->capture_default_str();
        s->add_option("--delta", kdelta, "flank width (rational, e.g. 1, 0.5, 1/3)")->capture_default_str();
    };
    auto* keval = kernel->add_subcommand("eval", "phi(t)");
    add_kernel_opts(keval);
    keval->add_option("--at", kat, "t")->required();
    keval->callback([&] {
        subcommand = "kernel eval";
        record(keval);
        action = [&] { return Outcome{eval(kernel_from(km, kdelta), kat), true}; };
    });
    auto* kfour = kernel->add_subcommand("fourier", "phi_hat(u)");
    add_kernel_opts(kfour);
    kfour->add_option("--at", kat, "u")->required();
    kfour->callback([&] {
        subcommand = "kernel fourier";
        record(kfour);
        action = [&] { return Outcome{fourier(kernel_from(km, kdelta), kat), true}; };
    });
    auto* kconst = kernel->add_subcommand("constants", "C_k = sup |u^k phi_hat(u)|");
    add_kernel_opts(kconst);
    kconst->add_option("--kmax", kmax, "largest k (default m+1)");
    kconst->callback([&] {
        subcommand = "kernel constants";
        record(kconst);
        action = [&] {
            auto k = kernel_from(km, kdelta);
            auto c = constants(k, kmax < 0 ? k.m() + 1 : kmax);
            Json j;
            j["m"] = k.m();
            j["delta"] = rational_text(k.delta());
            j["c_k"] = c.c_k;
            j["c_max"] = c.c_max;
            return Outcome{j};
        };
    });
    auto* kpieces = kernel->add_subcommand("pieces", "exact pieces in the global variable t");
    add_kernel_opts(kpieces);
    kpieces->callback([&] {
        subcommand = "kernel pieces";
        record(kpieces);
        action = [&] {
            auto k = kernel_from(km, kdelta);
            Json j;
            j["support_halfwidth"] = k.support_halfwidth();
            j["pieces"] = Json::array();
            for (std::size_t i = 0; i < k.piece_count(); ++i) {
                Json p;
                p["from"] = rational_text(k.breakpoints()[i]);
                p["to"] = rational_text(k.breakpoints()[i + 1]);
                p["coeffs"] = Json::array();
                const RationalPoly poly = k.global_piece(i);
                for (const auto& c : poly.coeffs()) p["coeffs"].push_back(rational_text(c));
                j["pieces"].push_back(p);
            }
            return Outcome{j};
        };
    });

    // arith -----------------------------------------------------------------------------
    auto* arith_cmd = app.add_subcommand("arith", "primitive roots and characters");
    arith_cmd->require_subcommand(1);
    std::uint64_t aq = 7;
    auto* aprim = arith_cmd->add_subcommand("primroots", "primitive roots modulo a prime q");
    aprim->add_option("--q", aq, "prime modulus")->required();
    aprim->callback([&] {
        subcommand = "arith primroots";
        record(aprim);
        action = [&] {
            if (aq < 2 || !arith::is_prime(aq)) throw std::invalid_argument("--q must be prime");
            PrimitiveRootTester test(aq);
            Json list = Json::array();
            for (std::uint64_t a = 1; a < aq; ++a)
                if (test(a)) list.push_back(a);
            return Outcome{list};
        };
    });
    auto* acoef = arith_cmd->add_subcommand("coeffs", "c_q(chi_j), j = 0..q-2");
    acoef->add_option("--q", aq, "prime modulus")->required();
    acoef->callback([&] {
        subcommand = "arith coeffs";
        record(acoef);
        action = [&] {
            auto t = build_characters(aq);
            auto c = indicator_coeffs(t);
            Json list = Json::array();
            for (auto z : c.c) list.push_back(io::complex_json(z));
            return Outcome{Json{{"q", aq}, {"generator", t.generator}, {"pr_count", c.pr_count}, {"c", list}}};
        };
    });

    // series ----------------------------------------------------------------------------
    auto* ser = app.add_subcommand("series", "Dirichlet series");
    ser->require_subcommand(1);
    std::string sname = "ones", s_at = "2";
    double stol = 1e-10, ssigma = 1.5;
    std::uint64_t snmax = 1'000'000;
    auto* seval = ser->add_subcommand("eval", "F(s)");
    seval->add_option("--name", sname, "ones|eta|mobius|mangoldt|zero|twisted:<base>:<q>:<j>")->required();
    seval->add_option("--s", s_at, "RE or RE,IM")->required();
    seval->add_option("--tol", stol)->capture_default_str();
    seval->callback([&] {
        subcommand = "series eval";
        record(seval);
        action = [&] {
            auto d = catalog(sname);
            auto v = eval_F(d, parse_complex(s_at), stol);
            return Outcome{io::complex_json(v)};
        };
    });
    auto* scah = ser->add_subcommand("cahen", "B(sigma) = sup_N |sum_{n<=N} a_n n^-sigma|");
    scah->add_option("--name", sname)->required();
    scah->add_option("--sigma", ssigma)->required();
    scah->add_option("--nmax", snmax)->capture_default_str();
    scah->callback([&] {
        subcommand = "series cahen";
        record(scah);
        action = [&] {
            auto b = cahen_bound(catalog(sname), ssigma, snmax);
            Json j;
            j["sigma"] = b.sigma;
            j["value"] = b.value;
            j["n_max_searched"] = b.n_max_searched;
            j["certified"] = b.certified;
            j["running_max"] = b.running_max;
            j["certified_upper"] = b.certified_upper ? Json(*b.certified_upper) : Json(nullptr);
            j["method"] = b.method;
            return Outcome{j};
        };
    });

    // perron ----------------------------------------------------------------------------
    auto* per = app.add_subcommand("perron", "smoothed Perron formula");
    per->require_subcommand(1);
    std::string pseries = "ones", pform = "corollary";
    double px = 10.5, pkappa = 1.5, pT = 20, pqt = 1e-9, pst = 1e-10;
    std::uint64_t pjump = 2'000'000, pnmax = 1'000'000;
    auto* pver = per->add_subcommand("verify", "direct sum vs main + correction integrals");
    pver->add_option("--series", pseries)->required();
    pver->add_option("--x", px)->required();
    pver->add_option("--kappa", pkappa)->required();
    pver->add_option("--T", pT)->required();
    add_kernel_opts(pver);
    pver->add_option("--form", pform, "corollary|refined|theorem")->capture_default_str();
    pver->add_option("--quad-tol", pqt)->capture_default_str();
    pver->add_option("--series-tol", pst)->capture_default_str();
    pver->add_option("--jump-cap", pjump, "theorem form: exact jumps up to this n")->capture_default_str();
    pver->add_option("--cahen-nmax", pnmax)->capture_default_str();
    pver->callback([&] {
        subcommand = "perron verify";
        record(pver);
        action = [&] {
            PerronConfig c{.kernel = kernel_from(km, kdelta), .kappa = pkappa, .T = pT, .x = px};
            c.quad_tol = pqt;
            c.series_tol = pst;
            c.form = parse_perron_form(pform);
            c.jump_cap = pjump;
            c.cahen_nmax = pnmax;
            auto r = verify(catalog(pseries), c);
            return Outcome{perron_json(r), false, r.passed};
        };
    });

    // lineshift -------------------------------------------------------------------------
    auto* ls = app.add_subcommand("lineshift", "moving the line of integration");
    ls->require_subcommand(1);
    double lkp = 0.6;
    double lx = 10, lkappa = 1.5, lT = 5;
    auto* lver = ls->add_subcommand("verify", "lhs vs rhs + residues");
    lver->add_option("--series", pseries)->required();
    lver->add_option("--x", lx)->required();
    lver->add_option("--kappa", lkappa)->required();
    lver->add_option("--kappa-prime", lkp)->required();
    lver->add_option("--T", lT)->required();
    add_kernel_opts(lver);
    lver->add_option("--quad-tol", pqt)->capture_default_str();
    lver->callback([&] {
        subcommand = "lineshift verify";
        record(lver);
        action = [&] {
            ShiftConfig c{.kernel = kernel_from(km, kdelta), .series = catalog(pseries), .kappa = lkappa,
                          .kappa_prime = lkp, .T = lT};
            c.quad_tol = pqt;
            auto r = shift_verify(c, lx);
            return Outcome{shift_json(r), false, r.passed};
        };
    });

    // experiment ------------------------------------------------------------------------
    auto* ex = app.add_subcommand("experiment", "prime primitive roots in short intervals");
    ex->require_subcommand(1);
    std::uint64_t eQ = 100;
    std::string edelta = "1/3", etheta = "1/4", eweight = "logp", eout;
    double ex_x = -1.0, ethr = 0.1;
    auto* erun = ex->add_subcommand("run", "observed vs predicted counts for primes q in [Q, 2Q]");
    erun->add_option("--Q", eQ)->required();
    erun->add_option("--delta", edelta, "interval exponent y = x^(1/2+delta)")->capture_default_str();
    erun->add_option("--theta", etheta, "x = Q^(3/2+theta) by default")->capture_default_str();
    erun->add_option("--x", ex_x, "interval start (default Q^(3/2+theta))");
    erun->add_option("--weight", eweight, "logp|mobius|unweighted|mobius_integers")->capture_default_str();
    erun->add_option("--threshold", ethr, "rel_dev cut for the exceptional count")->capture_default_str();
    erun->add_option("--out", eout, "CSV file with q,observed,predicted,rel_dev");
    erun->callback([&] {
        subcommand = "experiment run";
        record(erun);
        action = [&] {
            ExperimentConfig c;
            c.Q = eQ;
            c.delta = to_double(parse_rational(edelta));
            c.theta = to_double(parse_rational(etheta));
            c.x = ex_x;
            c.weight = parse_weight(eweight);
            c.threshold = ethr;
            c.threads = g.threads;
            auto res = run(c);
            Outcome o;
            if (!eout.empty()) {
                std::ofstream f(eout, std::ios::binary);
                if (!f) throw std::runtime_error("cannot open " + eout + " for writing");
                write_csv(f, res.rows);
                if (!f) throw std::runtime_error("write failed for " + eout);
                o.outputs.push_back(eout);
            }
            const auto& s = res.summary;
            Json j;
            j["Q"] = eQ;
            j["weight"] = to_string(c.weight);
            j["x"] = s.x;
            j["y"] = s.y;
            j["interval"] = Json{{"lo", s.lo}, {"hi", s.hi}};
            j["support_size"] = s.support_size;
            j["moduli"] = s.moduli;
            j["mean_rel_dev"] = s.mean_rel_dev;
            j["median_rel_dev"] = s.median_rel_dev;
            j["max_rel_dev"] = s.max_rel_dev;
            j["threshold"] = s.threshold;
            j["above_threshold"] = s.above_threshold;
            j["exceptional_fraction"] = s.exceptional_fraction;
            o.body = j;
            return o;
        };
    });

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : 1;
    }

    const auto t0 = std::chrono::steady_clock::now();
    Outcome out;
    try {
        out = action();
    } catch (const AllocationError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    const double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();

    if (out.bare) std::cout << io::dump17(out.body, 0) << "\n";
    else if (g.json) std::cout << io::dump17(out.body) << "\n";
    else print_text(out.body, "", std::cout);

    io::RunManifest man{subcommand, params, kVersion, out.outputs, wall};
    const std::string mtext = io::dump17(man.to_json());
    if (!g.manifest_path.empty()) {
        std::ofstream f(g.manifest_path, std::ios::binary);
        if (!f) {
            std::cerr << "error: cannot write manifest " << g.manifest_path << "\n";
            return 1;
        }
        f << mtext << "\n";
    } else {
        std::cerr << mtext << "\n";
    }
    return out.ok ? 0 : 2;
}
