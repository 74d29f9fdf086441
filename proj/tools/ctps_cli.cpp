// Command-line driver: model generation, validation, Q-system solving and
// verification, alpha-induction, CTPS construction, and normality checks.

#include <CLI11.hpp>

#include "ctps/model_gen.hpp"
#include "ctps/model_io.hpp"
#include "ctps/qsystem.hpp"
#include "ctps/report.hpp"

using namespace ctps;

namespace {

constexpr int kExitPass = 0;
constexpr int kExitCheckFailed = 1;
constexpr int kExitParseError = 2;
constexpr int kExitCertification = 3;

struct GlobalOpts {
    Thresholds thr;
    uint64_t seed = 1;
    std::string format = "human";
};

void emit(const RunReport& rep, const GlobalOpts& g, const std::string& report_path) {
    if (!report_path.empty()) save_json(report_to_json(rep), report_path);
    if (g.format == "json")
        std::cout << report_to_json(rep).dump(2) << "\n";
    else
        print_human(std::cout, rep);
}

int parse_signs(const std::string& s, int& s1, int& s2) {
    if (s.size() != 2 || (s[0] != '+' && s[0] != '-') || (s[1] != '+' && s[1] != '-')) return -1;
    s1 = s[0] == '+' ? +1 : -1;
    s2 = s[1] == '+' ? +1 : -1;
    return 0;
}

std::vector<LabelId> parse_theta(const std::string& s) {
    std::vector<LabelId> out;
    std::stringstream ss(s);
    std::string tok;
    while (std::getline(ss, tok, ',')) {
        if (tok.empty()) continue;
        out.push_back(std::stoi(tok));
    }
    return out;
}

SkeletalData require_skeletal(const Model& m) {
    if (!m.skel) throw ParseError("model file carries no F/R sections");
    return *m.skel;
}

int run_gen(const std::string& kind, int level, int order, int qform, const std::string& name,
            const std::string& out) {
    SkeletalData data = [&] {
        if (kind == "su2k") return gen_su2k(level);
        if (kind == "pointed") return gen_pointed(order, qform);
        return gen_builtin(name);
    }();
    save_json(model_to_json(data.ring(), &data), out);
    std::cout << "wrote " << out << " (" << data.ring().size() << " labels)\n";
    return kExitPass;
}

int run_validate(const std::string& model_path, const GlobalOpts& g,
                 const std::string& report_path) {
    Model m = load_model(model_path);
    RunReport rep;
    rep.command = "validate " + model_path;
    ValidationReport ring_rep = validate_ring(m.ring, g.thr.derived);
    for (const auto& c : ring_rep.checks) {
        if (c.skipped) {
            rep.note("ring/" + c.name, "skipped");
            continue;
        }
        double tol = 0.5;  // integer identities
        if (c.name.rfind("Verlinde", 0) == 0) tol = 1e-6;
        if (c.name.rfind("dimension", 0) == 0 || c.name.rfind("dimensions", 0) == 0 ||
            c.name.rfind("d(dual)", 0) == 0 || c.name.rfind("S ", 0) == 0 ||
            c.name.rfind("T ", 0) == 0)
            tol = g.thr.derived;
        rep.add("ring/" + c.name, c.worst, tol);
    }
    if (m.skel) {
        rep.add("pentagon", check_pentagon(*m.skel).residual, g.thr.structural);
        rep.add("F unitarity / R modulus", check_unitarity(*m.skel).residual, g.thr.structural);
        if (m.skel->has_braiding()) {
            rep.add("hexagon (+)", check_hexagon(*m.skel, +1).residual, g.thr.structural);
            rep.add("hexagon (-)", check_hexagon(*m.skel, -1).residual, g.thr.structural);
        }
        auto pairs = standard_solutions(*m.skel);
        double worst = 0;
        for (LabelId l = 0; l < m.ring.size(); ++l) {
            LabelId lb = m.ring.dual(l);
            Complex z1 = pairs[l].rbar * std::conj(pairs[l].r) * m.skel->F(l, lb, l, l, 0, 0);
            worst = std::max(worst, std::abs(z1 - Complex(1.0 / m.ring.dim(l), 0)));
        }
        rep.add("conjugate equations", worst, g.thr.structural);
    } else {
        rep.note("skeletal", "absent (ring-only file)");
    }
    emit(rep, g, report_path);
    return rep.pass() ? kExitPass : kExitCheckFailed;
}

int run_qsystem_solve(const std::string& model_path, const std::string& theta,
                      const std::string& out, int restarts, const GlobalOpts& g) {
    SkeletalData data = require_skeletal(load_model(model_path));
    SolveOptions opts;
    opts.restarts = restarts;
    opts.seed = g.seed;
    opts.tol = g.thr.derived;
    SolveResult sr = solve_qsystem(data, parse_theta(theta), opts);
    if (!sr.q) {
        std::cout << "no Q-system found (numerical): residual floor " << sr.best_residual
                  << " across " << sr.restarts_used << " restarts\n";
        return kExitCheckFailed;
    }
    save_json(qsystem_to_json(*sr.q), out);
    QReport qr = verify_qsystem(*sr.q, data, g.thr.derived);
    std::cout << "wrote " << out << " (d(theta) = " << sr.q->dtheta << ", residual " << qr.worst()
              << ")\n";
    return kExitPass;
}

int run_qsystem_verify(const std::string& model_path, const std::string& q_path,
                       const GlobalOpts& g, const std::string& report_path, bool dense) {
    SkeletalData data = require_skeletal(load_model(model_path));
    QSystem q = qsystem_from_json(load_json(q_path), data.ring());
    RunReport rep;
    rep.command = "qsystem verify " + q_path;
    rep.note("d(theta)", (std::ostringstream{} << q.dtheta).str());
    QReport qr = verify_qsystem(q, data, g.thr.derived);
    rep.add("Q1", qr.q1, g.thr.derived);
    rep.add("Q2", qr.q2, g.thr.derived);
    rep.add("Q3", qr.q3, g.thr.derived);
    rep.add("isometry", qr.isometry, g.thr.derived);
    if (dense) {
        TreeContext ctx(data);
        QReport dn = verify_qsystem_dense(q, ctx, g.thr.derived);
        rep.add("Q1 (dense witness)", dn.q1, g.thr.derived);
        rep.add("Q2 (dense witness)", dn.q2, g.thr.derived);
        rep.add("Q3 (dense witness)", dn.q3, g.thr.derived);
        rep.add("isometry (dense witness)", dn.isometry, g.thr.derived);
    }
    emit(rep, g, report_path);
    return rep.pass() ? kExitPass : kExitCheckFailed;
}

int run_induct(const std::string& model_path, const std::string& q_path, const std::string& signs,
               const GlobalOpts& g, const std::string& report_path) {
    SkeletalData data = require_skeletal(load_model(model_path));
    QSystem q = qsystem_from_json(load_json(q_path), data.ring());
    int s1, s2;
    if (parse_signs(signs, s1, s2) != 0) throw ParseError("signs must be one of ++, +-, -+, --");

    QReport qr = verify_qsystem(q, data, g.thr.derived);
    if (!qr.pass) throw CertificationError("Q-system fails verification; refusing to induct");

    TreeContext ctx(data);
    DsContext ds(ctx);
    InductionReport ir = coupling_matrix(q, ds, s1, s2, g.thr);
    ExtensionReport er = check_extension_axioms(q, ds, s1, s2, g.seed);

    RunReport rep;
    rep.command = "induct signs " + signs;
    rep.Z = ir.Z.Z;
    rep.row_labels = rep.col_labels = data.ring().names();
    rep.note("certification margin", (std::ostringstream{} << ir.cert_margin).str());
    rep.add("bimodule axioms", ir.axiom_residual, g.thr.derived);
    rep.add("gram orthonormality", ir.gram_residual, g.thr.structural);
    if (ir.has_modular) {
        rep.add("|ZS - SZ|", ir.zs_residual, g.thr.derived);
        rep.add("|ZT - TZ|", ir.zt_residual, g.thr.derived);
    }
    rep.add("(E1)", er.e1, g.thr.derived);
    rep.add("(E2)", er.e2, g.thr.derived);
    rep.add("(E3)", er.e3, g.thr.derived);
    rep.add("dimension preservation", check_dimension_preservation(q, ds), g.thr.derived);
    emit(rep, g, report_path);
    return rep.pass() ? kExitPass : kExitCheckFailed;
}

int run_build_ctps(const std::string& model_path, const std::string& q_path,
                   const std::string& signs, const std::string& out_zeta,
                   const std::string& out_model, const std::string& out_q, const GlobalOpts& g,
                   const std::string& report_path) {
    SkeletalData data = require_skeletal(load_model(model_path));
    QSystem q = qsystem_from_json(load_json(q_path), data.ring());
    int s1, s2;
    if (parse_signs(signs, s1, s2) != 0) throw ParseError("signs must be one of ++, +-, -+, --");

    QReport qr = verify_qsystem(q, data, g.thr.derived);
    if (!qr.pass) throw CertificationError("Q-system fails verification; refusing to build");

    TreeContext ctx(data);
    DsContext ds(ctx);
    ZetaSystem zs = build_zeta(q, ds, s1, s2, g.thr);
    CTPSReport cr = verify_ctps(zs, data, g.thr.end_to_end);
    CtpsExport ex = export_ctps(zs, data);

    if (!out_zeta.empty()) save_json(zeta_to_json(zs), out_zeta);
    if (!out_model.empty()) save_json(model_to_json(ex.model.ring(), &ex.model), out_model);
    if (!out_q.empty()) save_json(qsystem_to_json(ex.qsys), out_q);

    RunReport rep;
    rep.command = "build-ctps signs " + signs;
    rep.Z = zs.Z;
    rep.ZC = ex.ZC;
    rep.row_labels = rep.col_labels = data.ring().names();
    rep.note("d(theta)", (std::ostringstream{} << std::setprecision(17) << zs.dtheta).str());
    rep.add("Q1", cr.q1, g.thr.end_to_end);
    rep.add("Q2", cr.q2, g.thr.end_to_end);
    rep.add("Q3", cr.q3, g.thr.end_to_end);
    rep.add("isometry", cr.isometry, g.thr.end_to_end);
    rep.add("d(theta) identity", cr.dtheta_identity, g.thr.end_to_end);
    rep.add("braiding invariance", cr.braiding, g.thr.end_to_end);
    emit(rep, g, report_path);
    return rep.pass() ? kExitPass : kExitCheckFailed;
}

int run_normality(const std::string& z_path, const std::string& m1_path,
                  const std::string& m2_path, const GlobalOpts& g,
                  const std::string& report_path) {
    Model m1 = load_model(m1_path);
    Model m2 = load_model(m2_path);
    CouplingMatrix z;
    z.Z = coupling_from_json(load_json(z_path));
    NormalityVerdict v = classify(z, m1.ring, m2.ring);
    RunReport rep;
    rep.command = "check-normality";
    rep.Z = z.Z;
    rep.row_labels = m1.ring.names();
    rep.col_labels = m2.ring.names();
    rep.note("verdict", v.normal ? "normal (in the sense of (N2)/(N3))" : "not_normal");
    if (!v.normal && v.offender)
        rep.note("offending entry", "Z(" + std::to_string(v.offender->first) + "," +
                                        std::to_string(v.offender->second) + ")");
    if (v.n3_witness) {
        std::ostringstream os;
        for (size_t i = 0; i < v.n3_witness->size(); ++i)
            os << (i ? " " : "") << m1.ring.name(static_cast<LabelId>(i)) << "->"
               << m2.ring.name((*v.n3_witness)[i]);
        rep.note("bijection", os.str());
    }
    emit(rep, g, report_path);
    return kExitPass;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"canonical tensor product subfactor toolkit"};
    app.require_subcommand(1);
    GlobalOpts g;
    app.add_option("--threshold-structural", g.thr.structural, "structural residual threshold")
        ->check(CLI::PositiveNumber);
    app.add_option("--threshold-derived", g.thr.derived, "derived-quantity residual threshold")
        ->check(CLI::PositiveNumber);
    app.add_option("--threshold-end-to-end", g.thr.end_to_end, "end-to-end residual threshold")
        ->check(CLI::PositiveNumber);
    app.add_option("--cert-gap", g.thr.cert_gap, "singular-value certification ratio")
        ->check(CLI::PositiveNumber);
    app.add_option("--seed", g.seed, "seed for solver restarts and randomized checks");
    app.add_option("--format", g.format, "stdout format: human | json")
        ->check(CLI::IsMember({"human", "json"}));

    auto* gen = app.add_subcommand("gen", "generate a built-in model file");
    gen->require_subcommand(1);
    int level = 4, order = 2, qform = 1;
    std::string name = "ising", out = "model.json";
    auto* gsu = gen->add_subcommand("su2k", "SU(2) level-k model");
    gsu->add_option("--level", level, "level k in [1,12]")->required();
    gsu->add_option("--out", out, "output path")->required();
    auto* gpt = gen->add_subcommand("pointed", "pointed Z_n model");
    gpt->add_option("--n", order, "group order")->required();
    gpt->add_option("--q", qform, "quadratic form parameter p: q(a)=exp(2 pi i p a^2/n^2)")
        ->required();
    gpt->add_option("--out", out, "output path")->required();
    auto* gbi = gen->add_subcommand("builtin", "named built-in model");
    gbi->add_option("--name", name, "ising | fibonacci | fib")->required();
    gbi->add_option("--out", out, "output path")->required();

    std::string model_path, report_path;
    auto* val = app.add_subcommand("validate", "validate a model file");
    val->add_option("--model", model_path, "model file")->required();
    val->add_option("--report", report_path, "machine-readable report path");

    auto* qs = app.add_subcommand("qsystem", "solve or verify Q-systems");
    qs->require_subcommand(1);
    std::string theta = "0", q_path = "qsystem.json", q_out = "qsystem.json";
    int restarts = 200;
    bool dense = false;
    auto* qsolve = qs->add_subcommand("solve", "solve for a Q-system on a given theta");
    qsolve->add_option("--model", model_path)->required();
    qsolve->add_option("--theta", theta, "comma-separated summand labels, e.g. 0,4")->required();
    qsolve->add_option("--out", q_out)->required();
    qsolve->add_option("--restarts", restarts, "solver restarts");
    auto* qver = qs->add_subcommand("verify", "verify Longo relations");
    qver->add_option("--model", model_path)->required();
    qver->add_option("--qsystem", q_path)->required();
    qver->add_option("--report", report_path);
    qver->add_flag("--dense", dense, "also run the dense assembly second witness");

    std::string signs = "+-";
    auto* ind = app.add_subcommand("induct", "alpha-induction coupling matrix and E-axioms");
    ind->add_option("--model", model_path)->required();
    ind->add_option("--qsystem", q_path)->required();
    ind->add_option("--signs", signs, "braiding signs: ++ +- -+ --");
    ind->add_option("--out", report_path, "report path");

    std::string zeta_out, model_out, qsys_out;
    auto* bc = app.add_subcommand("build-ctps", "construct and verify the product Q-system");
    bc->add_option("--model", model_path)->required();
    bc->add_option("--qsystem", q_path)->required();
    bc->add_option("--signs", signs, "braiding signs: ++ +- -+ --");
    bc->add_option("--out", zeta_out, "zeta coefficient file");
    bc->add_option("--export-model", model_out, "product model file");
    bc->add_option("--export-qsystem", qsys_out, "product Q-system file");
    bc->add_option("--report", report_path, "report path");

    std::string z_path, m1_path, m2_path;
    auto* cn = app.add_subcommand("check-normality", "(N2)/(N3) classification of a coupling matrix");
    cn->add_option("--z", z_path, "file containing the coupling matrix (report or zeta file)")
        ->required();
    cn->add_option("--model1", m1_path)->required();
    cn->add_option("--model2", m2_path)->required();
    cn->add_option("--report", report_path);

    CLI11_PARSE(app, argc, argv);

    try {
        if (gsu->parsed()) return run_gen("su2k", level, order, qform, name, out);
        if (gpt->parsed()) return run_gen("pointed", level, order, qform, name, out);
        if (gbi->parsed()) return run_gen("builtin", level, order, qform, name, out);
        if (val->parsed()) return run_validate(model_path, g, report_path);
        if (qsolve->parsed()) return run_qsystem_solve(model_path, theta, q_out, restarts, g);
        if (qver->parsed()) return run_qsystem_verify(model_path, q_path, g, report_path, dense);
        if (ind->parsed()) return run_induct(model_path, q_path, signs, g, report_path);
        if (bc->parsed())
            return run_build_ctps(model_path, q_path, signs, zeta_out, model_out, qsys_out, g,
                                  report_path);
        if (cn->parsed()) return run_normality(z_path, m1_path, m2_path, g, report_path);
    } catch (const ParseError& e) {
        std::cerr << "parse error: " << e.what() << "\n";
        return kExitParseError;
    } catch (const CertificationError& e) {
        std::cerr << "certification failure: " << e.what() << "\n";
        return kExitCertification;
    } catch (const StructuralError& e) {
        std::cerr << "structural error: " << e.what() << "\n";
        return kExitCheckFailed;
    }
    return kExitParseError;
}
