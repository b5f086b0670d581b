// Command-line front end: state analysis, theorem verification suites,
// the higher-dimensional binegative-state search, and section export.
//
// Exit codes: 0 success / all pass, 1 property violation found,
// 2 input or flag error, 3 numerical failure.

#include "bineg/binegativity.hpp"
#include "bineg/certificates.hpp"
#include "bineg/errors.hpp"
#include "bineg/explorer.hpp"
#include "bineg/normal_form.hpp"
#include "bineg/states.hpp"
#include "bineg/version.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <fstream>
#include <iostream>

namespace {

using bineg::cplx;
using ojson = nlohmann::ordered_json;

ojson matrix_json(const bineg::ComplexMatrix& m) {
    ojson re = ojson::array(), im = ojson::array();
    for (std::size_t i = 0; i < m.rows(); ++i) {
        ojson rr = ojson::array(), ri = ojson::array();
        for (std::size_t j = 0; j < m.cols(); ++j) {
            rr.push_back(m(i, j).real());
            ri.push_back(m(i, j).imag());
        }
        re.push_back(std::move(rr));
        im.push_back(std::move(ri));
    }
    return ojson{{"re", std::move(re)}, {"im", std::move(im)}};
}

ojson vector_json(const bineg::CVec& v) {
    ojson re = ojson::array(), im = ojson::array();
    for (const cplx& z : v) {
        re.push_back(z.real());
        im.push_back(z.imag());
    }
    return ojson{{"re", std::move(re)}, {"im", std::move(im)}};
}

ojson tolerances_json(const bineg::Tolerances& t) {
    return ojson{{"hermiticity", t.hermiticity},
                 {"psdSlack", t.psd_slack},
                 {"eigReconstruct", t.eig_reconstruct},
                 {"zeroBand", t.zero_band},
                 {"rankThreshold", t.rank_threshold},
                 {"filterConvergence", t.filter_convergence},
                 {"filterStall", t.filter_stall},
                 {"maxFilterIterations", t.max_filter_iterations},
                 {"nfResidual", t.nf_residual},
                 {"detOne", t.det_one},
                 {"p3Zero", t.p3_zero},
                 {"certRecombination", t.cert_recombination},
                 {"binegativeThreshold", t.binegative_threshold},
                 {"jacobiOffdiagRel", t.jacobi_offdiag_rel}};
}

const char* kind_name(bineg::EnsembleKind k) {
    switch (k) {
        case bineg::EnsembleKind::HilbertSchmidt: return "hilbert-schmidt";
        case bineg::EnsembleKind::HaarPure: return "haar-pure";
        default: return "rank-k";
    }
}

ojson spec_json(const bineg::EnsembleSpec& s) {
    return ojson{{"dims", {s.dim_a, s.dim_b}},
                 {"kind", kind_name(s.kind)},
                 {"rankK", s.rank_k},
                 {"seed", s.seed},
                 {"count", s.count}};
}

ojson margin_json(const bineg::WorstMargin& m) {
    if (m.index < 0) return ojson{{"observed", false}};
    return ojson{{"observed", true}, {"value", m.value}, {"index", m.index}};
}

void write_output(const std::string& path, const std::string& text) {
    if (path.empty() || path == "-") {
        std::cout << text << "\n";
        return;
    }
    std::ofstream f(path);
    if (!f) throw bineg::Error("cannot open output file " + path);
    f << text << "\n";
}

int fail(int code, const std::string& reason) {
    std::cerr << "error: code=" << code << " reason=" << reason << "\n";
    return code;
}

bool parse_dims(const std::string& s, int& da, int& db) {
    const auto x = s.find('x');
    if (x == std::string::npos) return false;
    try {
        da = std::stoi(s.substr(0, x));
        db = std::stoi(s.substr(x + 1));
    } catch (...) {
        return false;
    }
    return da >= 2 && db >= 2 && da <= 4 && db <= 4;
}

int cmd_analyze(const std::string& state_path, const std::string& out_path) {
    const bineg::Tolerances tol;
    bineg::DensityMatrix dm;
    ojson report;
    try {
        const bineg::BipartiteOperator op = bineg::read_state_file(state_path, tol);
        const double tr = op.mat.trace().real();
        dm = bineg::validate(op, tol);
        report["schema"] = bineg::kReportSchemaVersion;
        report["toolVersion"] = bineg::kToolVersion;
        report["input"] = ojson{{"dims", {op.dim_a, op.dim_b}},
                                {"trace", tr},
                                {"rescaled", dm.rescaled}};
    } catch (const bineg::Error& e) {
        return fail(2, e.what());
    }

    try {
        const bineg::EntanglementSummary s = bineg::summary(dm, tol);
        report["input"]["minEig"] =
            bineg::hermitian_eig(dm.op.mat, tol).min_value();
        report["summary"] = ojson{{"negativity", s.negativity},
                                  {"logNegativity", s.log_negativity},
                                  {"isPPT", s.is_ppt},
                                  {"lambda", s.lambda},
                                  {"binegMinEig", s.bineg_min_eig}};

        const bineg::NegativeDecomposition dec = bineg::negative_decomposition(dm, tol);
        const bineg::EigenSystem pes = bineg::hermitian_eig(dec.positive_part.mat, tol);
        report["decomposition"] = ojson{{"ptSpectrum", dec.pt_spectrum},
                                        {"pSpectrum", pes.values},
                                        {"pRank", bineg::numerical_rank(pes, tol.rank_threshold)}};

        if (dm.op.dim_a == 2 && dm.op.dim_b == 2) {
            bineg::BipartiteOperator p = dec.positive_part;
            bool regularized = false;
            if (!s.is_ppt && bineg::numerical_rank(pes, tol.rank_threshold) < 3) {
                p = bineg::rank3_regularize(p, dec.negatives.front().psi, tol);
                regularized = true;
            }
            const bineg::NormalForm nf = bineg::filter_normal_form(p, tol);
            ojson nfj{{"class", nf.cls == bineg::NormalFormClass::BellDiagonal
                                    ? "bell-diagonal"
                                    : "sigma-c"},
                      {"A", matrix_json(nf.a_filter)},
                      {"B", matrix_json(nf.b_filter)},
                      {"p", nf.p},
                      {"N", nf.normalization},
                      {"residual", nf.residual},
                      {"sourceRegularized", regularized}};
            if (nf.cls == bineg::NormalFormClass::SigmaC)
                nfj["sigmaC"] = nf.sigma_c_params;
            report["normalForm"] = std::move(nfj);

            if (!s.is_ppt) {
                const bineg::BinegativityCertificate cert = bineg::certify(dm, tol);
                report["certificate"] =
                    ojson{{"applicable", true},
                          {"lambda", cert.lambda},
                          {"lambda0", cert.lambda0},
                          {"trCCstar", cert.tr_cc_star},
                          {"weights", {cert.weight_p, cert.weight_x}},
                          {"margins", ojson{{"ptb", cert.margin_pt}, {"x", cert.margin_x}}},
                          {"recombinationError", cert.recombination_error},
                          {"hyperplaneOverlap", cert.hyperplane},
                          {"L", cert.l},
                          {"M", cert.m},
                          {"N", cert.n},
                          {"regularized", cert.regularized},
                          {"phi", vector_json(cert.phi)}};
            } else {
                report["certificate"] = ojson{{"applicable", false}};
            }
        }
        report["tolerances"] = tolerances_json(tol);
        write_output(out_path, report.dump(2));
        return 0;
    } catch (const bineg::NonConvergent& e) {
        return fail(3, e.what());
    } catch (const bineg::CertificateFailure& e) {
        return fail(3, e.what());
    } catch (const bineg::Error& e) {
        return fail(2, e.what());
    }
}

int cmd_verify(const bineg::EnsembleSpec& spec, const bineg::Tolerances& tol,
               const std::string& out_path, int threads, bool include_walltime) {
    try {
        const bineg::VerificationReport r = bineg::verify_ensemble(spec, tol, threads);
        ojson j{{"schema", bineg::kReportSchemaVersion},
                {"toolVersion", bineg::kToolVersion},
                {"spec", spec_json(r.spec)},
                {"counts", ojson{{"total", r.total},
                                 {"entangled", r.entangled},
                                 {"t1Pass", r.t1_pass},
                                 {"c1Pass", r.c1_pass},
                                 {"t2Pass", r.t2_pass},
                                 {"certificatePass", r.certificate_pass},
                                 {"violations", r.violations}}},
                {"worstMargins", ojson{{"t1", margin_json(r.worst_t1)},
                                       {"t2", margin_json(r.worst_t2)},
                                       {"x", margin_json(r.worst_x)},
                                       {"lambdaGap", margin_json(r.worst_lambda_gap)},
                                       {"trCCstarMinus2", margin_json(r.worst_trcc)},
                                       {"hyperplaneOverlap", margin_json(r.worst_overlap)},
                                       {"negRecombination", margin_json(r.worst_recomb)}}},
                {"tolerances", tolerances_json(r.tolerances)}};
        ojson viols = ojson::array();
        for (const std::string& v : r.violation_payloads) viols.push_back(ojson::parse(v));
        j["violationExemplars"] = std::move(viols);
        if (include_walltime) j["wallSeconds"] = r.wall_seconds;
        write_output(out_path, j.dump(2));
        return r.violations == 0 ? 0 : 1;
    } catch (const bineg::NonConvergent& e) {
        return fail(3, e.what());
    } catch (const bineg::Error& e) {
        return fail(2, e.what());
    }
}

int cmd_search(const bineg::EnsembleSpec& spec, const bineg::Tolerances& tol,
               const std::string& out_path, int threads, bool include_walltime) {
    try {
        const bineg::SearchRecord r = bineg::search_binegative(spec, tol, threads);
        ojson ex = ojson::array();
        for (const bineg::SearchExemplar& e : r.exemplars)
            ex.push_back(ojson{{"index", e.index},
                               {"binegMinEig", e.bineg_min_eig},
                               {"midpointMinEig", e.midpoint_min_eig},
                               {"state", ojson::parse(e.state_json)}});
        ojson j{{"schema", bineg::kReportSchemaVersion},
                {"toolVersion", bineg::kToolVersion},
                {"spec", spec_json(r.spec)},
                {"samples", r.samples},
                {"binegativeCount", r.binegative_count},
                {"midpointNonpositiveCount", r.midpoint_nonpositive_count},
                {"exemplars", std::move(ex)},
                {"tolerances", tolerances_json(r.tolerances)}};
        if (include_walltime) j["wallSeconds"] = r.wall_seconds;
        write_output(out_path, j.dump(2));
        return 0;
    } catch (const bineg::NonConvergent& e) {
        return fail(3, e.what());
    } catch (const bineg::Error& e) {
        return fail(2, e.what());
    }
}

int cmd_section(const std::string& state_path, int grid, double radius,
                const std::string& out_path, const std::string& svg_path, int threads) {
    const bineg::Tolerances tol;
    try {
        const bineg::BipartiteOperator op = bineg::read_state_file(state_path, tol);
        const bineg::DensityMatrix dm = bineg::validate(op, tol);
        const bineg::EntanglementSummary s = bineg::summary(dm, tol);

        bineg::BipartiteOperator center = dm.op, dir1(dm.op.dim_a, dm.op.dim_b),
                                 dir2(dm.op.dim_a, dm.op.dim_b);
        if (!s.is_ppt && dm.op.dim_a == 2 && dm.op.dim_b == 2) {
            // Default plane: center P^{T_B}, dir1 through sigma, X and the
            // binegativity (all on one line with P^{T_B}), dir2 a fixed
            // traceless coherence direction to open the second axis.
            const bineg::NegativeDecomposition dec = bineg::negative_decomposition(dm, tol);
            center = bineg::partial_transpose(dec.positive_part, bineg::Side::B);
            dir1 = dm.op - center;
            dir2.mat(0, 3) = 1.0;
            dir2.mat(3, 0) = 1.0;
        } else {
            // PPT (or higher-dim) input: fixed traceless plane through sigma.
            const int n = dm.op.dim();
            dir1.mat(0, 0) = 1.0;
            dir1.mat(n - 1, n - 1) = -1.0;
            dir2.mat(0, n - 1) = 1.0;
            dir2.mat(n - 1, 0) = 1.0;
        }
        const bineg::SectionGrid g =
            bineg::cross_section(center, dir1, dir2, radius, grid, tol, threads);
        write_output(out_path, bineg::section_csv(g));
        if (!svg_path.empty()) write_output(svg_path, bineg::section_svg(g));
        return 0;
    } catch (const bineg::NonConvergent& e) {
        return fail(3, e.what());
    } catch (const bineg::DegeneratePlane& e) {
        return fail(2, e.what());
    } catch (const bineg::Error& e) {
        return fail(2, e.what());
    }
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"binegativity toolkit for two-qubit entanglement certificates"};
    app.require_subcommand(1);

    // analyze
    auto* analyze = app.add_subcommand("analyze", "analyze one state file");
    std::string an_state, an_out = "-";
    analyze->add_option("state", an_state, "input state JSON file")->required();
    analyze->add_option("-o,--out", an_out, "output report path (default stdout)");

    // shared ensemble flags
    std::string dims_str = "2x2", ensemble = "hs", out_path = "-";
    long count = 10000;
    std::uint64_t seed = 42;
    int rank_k = 1, threads = 0;
    double tol_override = 0.0;

    auto* verify = app.add_subcommand("verify", "two-qubit theorem verification suite");
    verify->add_option("--dims", dims_str, "dims as AxB (verify requires 2x2)");
    verify->add_option("--ensemble", ensemble, "hs | pure | rankk");
    verify->add_option("--rank-k", rank_k, "rank for the rankk ensemble");
    verify->add_option("--n", count, "sample count");
    verify->add_option("--seed", seed, "ensemble seed");
    verify->add_option("--tol", tol_override, "override PSD slack (must be > 0)");
    verify->add_option("--threads", threads, "worker cap (0 = BINEG_THREADS or hardware)");
    verify->add_option("-o,--out", out_path, "output report path (default stdout)");
    bool no_walltime = false;
    verify->add_flag("--no-walltime", no_walltime, "omit the wall-time field");

    std::string se_dims = "3x3", se_out = "-";
    long se_count = 100000;
    std::uint64_t se_seed = 7;
    int se_threads = 0;
    bool se_no_walltime = false;
    auto* search = app.add_subcommand("search", "random search for binegative states");
    search->add_option("--dims", se_dims, "dims as AxB");
    search->add_option("--n", se_count, "sample count");
    search->add_option("--seed", se_seed, "ensemble seed");
    search->add_option("--threads", se_threads, "worker cap");
    search->add_option("-o,--out", se_out, "output record path (default stdout)");
    search->add_flag("--no-walltime", se_no_walltime, "omit the wall-time field");

    std::string sec_state, sec_out = "-", sec_svg;
    int sec_grid = 101, sec_threads = 0;
    double sec_radius = 1.0;
    auto* section = app.add_subcommand("section", "export a 2D cross-section grid");
    section->add_option("--state", sec_state, "input state JSON file")->required();
    section->add_option("--grid", sec_grid, "grid resolution per axis");
    section->add_option("--radius", sec_radius, "half-width in Hilbert-Schmidt units");
    section->add_option("--out", sec_out, "output CSV path (default stdout)");
    section->add_option("--svg", sec_svg, "optional SVG heat-map path");
    section->add_option("--threads", sec_threads, "worker cap");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) return app.exit(e);  // --help
        std::cerr << "error: code=2 reason=" << e.what() << "\n";
        return 2;
    }

    if (analyze->parsed()) return cmd_analyze(an_state, an_out);

    if (verify->parsed()) {
        bineg::EnsembleSpec spec;
        if (!parse_dims(dims_str, spec.dim_a, spec.dim_b))
            return fail(2, "bad --dims (expected AxB with 2 <= A,B <= 4)");
        if (spec.dim_a != 2 || spec.dim_b != 2) return fail(2, "verify requires --dims 2x2");
        if (count < 0) return fail(2, "--n must be >= 0");
        if (ensemble == "hs") spec.kind = bineg::EnsembleKind::HilbertSchmidt;
        else if (ensemble == "pure") spec.kind = bineg::EnsembleKind::HaarPure;
        else if (ensemble == "rankk") spec.kind = bineg::EnsembleKind::RankK;
        else return fail(2, "bad --ensemble (hs | pure | rankk)");
        spec.rank_k = rank_k;
        spec.seed = seed;
        spec.count = count;
        bineg::Tolerances tol;
        if (verify->count("--tol")) {
            if (!(tol_override > 0.0)) return fail(2, "--tol must be > 0");
            tol.psd_slack = tol_override;
            tol.binegative_threshold = tol_override;
        }
        return cmd_verify(spec, tol, out_path, threads, !no_walltime);
    }

    if (search->parsed()) {
        bineg::EnsembleSpec spec;
        if (!parse_dims(se_dims, spec.dim_a, spec.dim_b))
            return fail(2, "bad --dims (expected AxB with 2 <= A,B <= 4)");
        if (se_count < 0) return fail(2, "--n must be >= 0");
        spec.kind = bineg::EnsembleKind::HilbertSchmidt;
        spec.seed = se_seed;
        spec.count = se_count;
        return cmd_search(spec, bineg::Tolerances{}, se_out, se_threads, !se_no_walltime);
    }

    if (section->parsed()) {
        if (sec_grid < 1) return fail(2, "--grid must be >= 1");
        if (!(sec_radius > 0.0)) return fail(2, "--radius must be > 0");
        return cmd_section(sec_state, sec_grid, sec_radius, sec_out, sec_svg, sec_threads);
    }
    return 2;
}
