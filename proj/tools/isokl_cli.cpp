// Command-line front end: wires the library modules to .cmat.json files and
// emits one machine-readable JSON report per invocation on stdout, with a
// short human summary on stderr.
//
// Exit codes: 0 = verdict true / construction succeeded, 1 = a check failed,
// 2 = usage or input error.

#include <CLI11.hpp>
#include <chrono>
#include <cmath>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <json.hpp>
#include <numbers>
#include <string>
#include <vector>

#include "isokl/construct.hpp"
#include "isokl/io.hpp"
#include "isokl/isoclinic.hpp"
#include "isokl/kl.hpp"
#include "isokl/mum.hpp"
#include "isokl/pauli.hpp"

namespace fs = std::filesystem;
using json = nlohmann::json;
using namespace isokl;

namespace {

struct Options {
    Tolerance tol;
    std::string out_dir;
    bool reproducible = false;
};

struct Report {
    std::string command;
    bool verdict = false;
    double max_residual = 0.0;
    json payload = json::object();
    std::vector<std::string> artifacts;
};

std::string iso_timestamp() {
    auto now = std::chrono::system_clock::now();
    std::time_t t = std::chrono::system_clock::to_time_t(now);
    char buf[32];
    std::strftime(buf, sizeof(buf), "%FT%TZ", std::gmtime(&t));
    return buf;
}

int emit(const Report& rep, const Options& opt) {
    json out;
    out["command"] = rep.command;
    out["verdict"] = rep.verdict;
    out["max_residual"] = rep.max_residual;
    out["tolerance_used"] = {{"abs", opt.tol.abs_tol}, {"rel", opt.tol.rel_tol}};
    out["payload"] = rep.payload;
    out["artifacts_written"] = rep.artifacts;
    if (!opt.reproducible) out["timestamp"] = iso_timestamp();
    std::cout << out.dump(2) << "\n";
    std::cerr << rep.command << ": " << (rep.verdict ? "ok" : "FAIL")
              << " (max residual " << rep.max_residual << ")\n";
    return rep.verdict ? 0 : 1;
}

json real_matrix_json(const Eigen::MatrixXd& m) {
    json rows = json::array();
    for (Eigen::Index r = 0; r < m.rows(); ++r) {
        json row = json::array();
        for (Eigen::Index c = 0; c < m.cols(); ++c) row.push_back(m(r, c));
        rows.push_back(row);
    }
    return rows;
}

json complex_matrix_json(const Mat& m) {
    json rows = json::array();
    for (Eigen::Index r = 0; r < m.rows(); ++r) {
        json row = json::array();
        for (Eigen::Index c = 0; c < m.cols(); ++c)
            row.push_back({m(r, c).real(), m(r, c).imag()});
        rows.push_back(row);
    }
    return rows;
}

// Both basis matrices and projectors describe a subspace by their column
// space, so the same loader serves either interpretation.
Subspace load_subspace(const std::string& path, const Tolerance& tol) {
    return orthonormal_basis(read_cmat(path), tol);
}

fs::path ensure_out_dir(const Options& opt) {
    if (opt.out_dir.empty()) throw Error("UsageError", "--out DIR is required here");
    fs::path dir(opt.out_dir);
    fs::create_directories(dir);
    return dir;
}

std::string write_artifact(const fs::path& dir, const std::string& name, const Mat& m,
                           Report& rep) {
    fs::path p = dir / name;
    write_cmat(p, m);
    rep.artifacts.push_back(p.string());
    return p.string();
}

// ---------------------------------------------------------------- angles --

int cmd_angles(const Options& opt, const std::string& a, const std::string& b) {
    Report rep;
    rep.command = "angles";
    Subspace v = load_subspace(a, opt.tol);
    Subspace w = load_subspace(b, opt.tol);
    auto spec = canonical_angles(v, w, opt.tol);
    rep.verdict = true;
    rep.payload["angles"] = spec.angles;
    rep.payload["dim"] = v.dim();
    return emit(rep, opt);
}

// ------------------------------------------------------- isoclinic check --

int cmd_isoclinic_check(const Options& opt, const std::vector<std::string>& files) {
    Report rep;
    rep.command = "isoclinic check";
    std::vector<Mat> ps;
    for (const auto& f : files) ps.push_back(projection_from_subspace(load_subspace(f, opt.tol)));
    auto res = isoclinic_family_check(ps, opt.tol);
    rep.verdict = res.verdict;
    rep.max_residual = res.worst_residual;
    rep.payload["lambda_matrix"] = real_matrix_json(res.lambda_matrix);
    json fails = json::array();
    for (auto [i, j] : res.failing_pairs) fails.push_back({i, j});
    rep.payload["failing_pairs"] = fails;
    return emit(rep, opt);
}

// -------------------------------------------------------------- kl check --

int cmd_kl_check(const Options& opt, const std::string& code,
                 const std::vector<std::string>& op_files, bool classic) {
    Report rep;
    rep.command = classic ? "kl check --classic" : "kl check";
    Mat p_c = projection_from_subspace(load_subspace(code, opt.tol));
    std::vector<Mat> ops;
    for (const auto& f : op_files) ops.push_back(read_cmat(f));

    ConditionFailure fail;
    if (classic) {
        auto res = kl_classic_check(ops, p_c, opt.tol, &fail);
        if (res) {
            rep.verdict = true;
            rep.max_residual = res->residual;
            rep.payload["lambda_matrix"] = complex_matrix_json(res->lambda_matrix);
            rep.payload["is_positive"] = res->is_positive;
        } else {
            rep.payload["failure"] = {{"i", fail.i}, {"j", fail.j}, {"residual", fail.residual}};
            rep.max_residual = fail.residual;
        }
    } else {
        auto res = kl_general_check(ops, p_c, opt.tol, &fail);
        if (res) {
            rep.verdict = true;
            rep.max_residual = res->max_residual();
            rep.payload["lambdas"] = complex_matrix_json(res->lambdas);
            rep.payload["residuals"] = real_matrix_json(res->residuals);
            if (!opt.out_dir.empty()) {
                fs::path dir = ensure_out_dir(opt);
                for (int i = 0; i < res->n; ++i)
                    for (int j = 0; j < res->n; ++j)
                        write_artifact(dir,
                                       "u_" + std::to_string(i) + "_" + std::to_string(j) +
                                           ".cmat.json",
                                       res->unitaries[i][j], rep);
            }
        } else {
            rep.payload["failure"] = {{"i", fail.i}, {"j", fail.j}, {"residual", fail.residual}};
            rep.max_residual = fail.residual;
        }
    }
    return emit(rep, opt);
}

// ------------------------------------------------------------ stabilizer --

int cmd_stabilizer_project(const Options& opt, const std::string& generators) {
    Report rep;
    rep.command = "stabilizer project";
    StabilizerGroup s = parse_stabilizer_group(generators);
    Mat p = stabilizer_projection(s);
    rep.verdict = true;
    rep.payload["n"] = s.n;
    rep.payload["num_generators"] = s.generators.size();
    rep.payload["rank"] = static_cast<long>(std::lround(p.trace().real()));
    if (!opt.out_dir.empty()) write_artifact(ensure_out_dir(opt), "projection.cmat.json", p, rep);
    return emit(rep, opt);
}

std::vector<PauliOperator> parse_error_list(const std::string& csv, int n) {
    std::vector<PauliOperator> out;
    size_t start = 0;
    while (start <= csv.size()) {
        size_t comma = csv.find(',', start);
        std::string tok = csv.substr(start, comma == std::string::npos ? comma : comma - start);
        if (!tok.empty()) {
            PauliOperator p = pauli_parse(tok);
            if (p.n != n)
                throw Error("ParseError", "error '" + tok + "' acts on " + std::to_string(p.n) +
                                              " qubits, expected " + std::to_string(n));
            out.push_back(std::move(p));
        }
        if (comma == std::string::npos) break;
        start = comma + 1;
    }
    if (out.empty()) throw Error("ParseError", "empty error list");
    return out;
}

int cmd_stabilizer_classify(const Options& opt, const std::string& generators,
                            const std::string& errors) {
    Report rep;
    rep.command = "stabilizer classify";
    StabilizerGroup s = parse_stabilizer_group(generators);
    json classes = json::array();
    for (const PauliOperator& e : parse_error_list(errors, s.n))
        classes.push_back({{"error", pauli_format(e)}, {"class", to_string(classify_error(s, e))}});
    rep.verdict = true;
    rep.payload["classes"] = classes;
    return emit(rep, opt);
}

int cmd_stabilizer_verify(const Options& opt, const std::string& generators,
                          const std::string& errors) {
    Report rep;
    rep.command = "stabilizer verify";
    StabilizerGroup s = parse_stabilizer_group(generators);
    auto errs = parse_error_list(errors, s.n);
    ErrorSetReport res = verify_error_set(s, errs, opt.tol);
    rep.verdict = res.isoclinic && res.consistent;
    rep.payload["isoclinic"] = res.isoclinic;
    rep.payload["consistent"] = res.consistent;
    json classes = json::array();
    for (const auto& row : res.pair_classes) {
        json jrow = json::array();
        for (ErrorClass c : row) jrow.push_back(to_string(c));
        classes.push_back(jrow);
    }
    rep.payload["pair_classes"] = classes;
    json nontrivial = json::array();
    for (auto [i, j] : res.kl_nontrivial_pairs) nontrivial.push_back({i, j});
    rep.payload["kl_nontrivial_pairs"] = nontrivial;
    return emit(rep, opt);
}

// ------------------------------------------------------------- construct --

void write_family_manifest(const fs::path& dir, const std::string& kind, int d,
                           Eigen::Index dim, size_t count, Complex omega, Report& rep) {
    json manifest;
    manifest["kind"] = kind;
    manifest["d"] = d;
    manifest["dim"] = dim;
    manifest["count"] = count;
    manifest["omega"] = {omega.real(), omega.imag()};
    fs::path p = dir / "manifest.json";
    std::ofstream f(p);
    f << manifest.dump(2) << "\n";
    rep.artifacts.push_back(p.string());
}

int cmd_construct_anticommuting(const Options& opt, int m) {
    Report rep;
    rep.command = "construct anticommuting";
    auto fam = kestelman_family(m);
    rep.verdict = true;
    rep.payload["m"] = m;
    rep.payload["count"] = fam.members.size();
    if (!opt.out_dir.empty()) {
        fs::path dir = ensure_out_dir(opt);
        for (size_t i = 0; i < fam.members.size(); ++i)
            write_artifact(dir, "member_" + std::to_string(i) + ".cmat.json", fam.members[i], rep);
        write_family_manifest(dir, "anticommuting", 2, fam.m, fam.members.size(), {-1.0, 0.0},
                              rep);
    }
    return emit(rep, opt);
}

int cmd_construct_graphs(const Options& opt, const std::string& a_file, int d) {
    Report rep;
    rep.command = "construct graphs";
    Mat a = read_cmat(a_file);
    auto projs = omega_rotated_family(a, d, opt.tol);
    Mat v = graph_partial_isometry(a, d, opt.tol);
    Mat pinf = p_infinity(a.rows(), d);
    rep.verdict = true;
    rep.payload["d"] = d;
    rep.payload["dim"] = projs[0].rows();
    rep.payload["count"] = projs.size();
    if (!opt.out_dir.empty()) {
        fs::path dir = ensure_out_dir(opt);
        for (size_t r = 0; r < projs.size(); ++r)
            write_artifact(dir, "projection_" + std::to_string(r) + ".cmat.json", projs[r], rep);
        write_artifact(dir, "partial_isometry.cmat.json", v, rep);
        write_artifact(dir, "p_infinity.cmat.json", pinf, rep);
        Complex omega = std::polar(1.0, 2.0 * std::numbers::pi / d);
        write_family_manifest(dir, "graphs", d, projs[0].rows(), projs.size(), omega, rep);
    }
    return emit(rep, opt);
}

int cmd_construct_omega(const Options& opt, int d, int n) {
    Report rep;
    rep.command = "construct omega";
    auto fam = omega_commuting_generators(d, n);
    rep.verdict = true;
    rep.payload["d"] = d;
    rep.payload["n"] = n;
    rep.payload["dim"] = fam.dim;
    if (!opt.out_dir.empty()) {
        fs::path dir = ensure_out_dir(opt);
        for (size_t i = 0; i < fam.members.size(); ++i)
            write_artifact(dir, "generator_" + std::to_string(i) + ".cmat.json", fam.members[i],
                           rep);
        write_family_manifest(dir, "omega", d, fam.dim, fam.members.size(), fam.omega, rep);
    }
    return emit(rep, opt);
}

int cmd_construct_mum(const Options& opt, int d, int n) {
    Report rep;
    rep.command = "construct mum";
    MUMFamily fam = mum_from_construction(d, n);
    rep.verdict = true;
    rep.max_residual = fam.max_residual;
    rep.payload["d"] = d;
    rep.payload["n"] = n;
    rep.payload["dim"] = fam.measurements[0].dim;
    rep.payload["common_rank"] = fam.common_rank;
    if (!opt.out_dir.empty()) {
        fs::path dir = ensure_out_dir(opt);
        for (size_t mi = 0; mi < fam.measurements.size(); ++mi)
            for (int a = 0; a < d; ++a)
                write_artifact(dir,
                               "m" + std::to_string(mi) + "_e" + std::to_string(a) + ".cmat.json",
                               fam.measurements[mi].effects[a], rep);
        json manifest;
        manifest["d"] = d;
        manifest["k"] = fam.common_rank;
        manifest["dim"] = fam.measurements[0].dim;
        manifest["n_measurements"] = fam.measurements.size();
        fs::path p = dir / "manifest.json";
        std::ofstream f(p);
        f << manifest.dump(2) << "\n";
        rep.artifacts.push_back(p.string());
    }
    return emit(rep, opt);
}

// ------------------------------------------------------------------- mum --

std::vector<Measurement> read_mum_bundle(const std::string& dir_str) {
    fs::path dir(dir_str);
    fs::path mf = dir / "manifest.json";
    if (!fs::exists(mf)) throw Error("IoError", "no manifest.json in " + dir_str);
    std::ifstream f(mf);
    json manifest = json::parse(f, nullptr, /*allow_exceptions=*/false);
    if (manifest.is_discarded()) throw Error("ParseError", "invalid manifest in " + dir_str);
    int d = manifest.at("d").get<int>();
    int nm = manifest.at("n_measurements").get<int>();
    std::vector<Measurement> out;
    for (int mi = 0; mi < nm; ++mi) {
        Measurement m;
        m.d = d;
        for (int a = 0; a < d; ++a) {
            fs::path p = dir / ("m" + std::to_string(mi) + "_e" + std::to_string(a) + ".cmat.json");
            m.effects.push_back(read_cmat(p));
        }
        m.dim = m.effects[0].rows();
        out.push_back(std::move(m));
    }
    return out;
}

int cmd_mum_check(const Options& opt, const std::string& bundle) {
    Report rep;
    rep.command = "mum check";
    auto measurements = read_mum_bundle(bundle);
    std::vector<Measurement> validated;
    MeasurementFailure fail;
    for (size_t i = 0; i < measurements.size(); ++i) {
        auto m = measurement_check(measurements[i].effects, opt.tol, &fail);
        if (!m) {
            rep.payload["failure"] = {{"measurement", i},
                                      {"reason", fail.reason},
                                      {"index_a", fail.index_a},
                                      {"index_b", fail.index_b},
                                      {"residual", fail.residual}};
            rep.max_residual = fail.residual;
            return emit(rep, opt);
        }
        validated.push_back(std::move(*m));
    }
    auto fam = mum_check(validated, opt.tol, &fail);
    if (!fam) {
        rep.payload["failure"] = {{"reason", fail.reason},
                                  {"index_a", fail.index_a},
                                  {"index_b", fail.index_b},
                                  {"residual", fail.residual}};
        rep.max_residual = fail.residual;
        return emit(rep, opt);
    }
    rep.verdict = true;
    rep.max_residual = fam->max_residual;
    rep.payload["common_rank"] = fam->common_rank;
    rep.payload["n_measurements"] = fam->measurements.size();
    return emit(rep, opt);
}

int cmd_mum_canonical(const Options& opt, const std::string& bundle) {
    Report rep;
    rep.command = "mum canonical";
    auto measurements = read_mum_bundle(bundle);
    MeasurementFailure fail;
    auto fam = mum_check(measurements, opt.tol, &fail);
    if (!fam) {
        rep.payload["failure"] = {{"reason", fail.reason}, {"residual", fail.residual}};
        rep.max_residual = fail.residual;
        return emit(rep, opt);
    }
    CanonicalForm cf = canonical_form_extract(*fam, opt.tol);
    RelationsReport rel = canonical_relations_check(cf, opt.tol);
    rep.verdict = rel.verdict;
    rep.max_residual = std::max({rel.diagonal_residual, rel.adjoint_residual, rel.chain_residual,
                                 rel.sum_residual});
    rep.payload["k"] = cf.k;
    rep.payload["d"] = cf.d;
    rep.payload["relation_residuals"] = {{"diagonal", rel.diagonal_residual},
                                         {"adjoint", rel.adjoint_residual},
                                         {"chain", rel.chain_residual},
                                         {"sum", rel.sum_residual}};
    if (!opt.out_dir.empty()) {
        fs::path dir = ensure_out_dir(opt);
        write_artifact(dir, "basis_change.cmat.json", cf.basis_change, rep);
        fs::create_directories(dir / "blocks");
        for (int b = 0; b < cf.d; ++b)
            for (int i = 0; i < cf.d; ++i)
                for (int j = 0; j < cf.d; ++j) {
                    fs::path p = dir / "blocks" /
                                 ("b" + std::to_string(b) + "_i" + std::to_string(i) + "_j" +
                                  std::to_string(j) + ".cmat.json");
                    write_cmat(p, cf.blocks[b][i][j]);
                    rep.artifacts.push_back(p.string());
                }
    }
    return emit(rep, opt);
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Isoclinic subspace families: construction and verification"};
    app.require_subcommand(1);
    app.fallthrough();

    Options opt;
    app.add_option("--abs-tol", opt.tol.abs_tol, "absolute tolerance")->capture_default_str();
    app.add_option("--rel-tol", opt.tol.rel_tol, "relative tolerance")->capture_default_str();
    app.add_option("--out", opt.out_dir, "directory for matrix artifacts");
    app.add_flag("--reproducible", opt.reproducible, "omit the timestamp from the report");

    // angles
    std::string a_file, b_file;
    auto* angles = app.add_subcommand("angles", "canonical angles between two subspaces");
    angles->add_option("--a", a_file, "first subspace (basis or projector)")->required();
    angles->add_option("--b", b_file, "second subspace (basis or projector)")->required();

    // isoclinic check
    auto* iso = app.add_subcommand("isoclinic", "isoclinic family checks");
    iso->require_subcommand(1);
    iso->fallthrough();
    std::vector<std::string> iso_files;
    auto* iso_check = iso->add_subcommand("check", "pairwise isoclinic test of a family");
    iso_check->add_option("files", iso_files, "subspace files")->required()->expected(2, -1);

    // kl check
    auto* kl = app.add_subcommand("kl", "Knill-Laflamme condition checks");
    kl->require_subcommand(1);
    kl->fallthrough();
    std::string kl_code;
    std::vector<std::string> kl_ops;
    bool kl_classic = false;
    auto* kl_check = kl->add_subcommand("check", "verify the KL conditions for a code");
    kl_check->add_option("--code", kl_code, "code subspace (basis or projector)")->required();
    kl_check->add_option("--ops", kl_ops, "operator files")->required()->expected(1, -1);
    kl_check->add_flag("--classic", kl_classic, "scalar (classic) conditions instead of the "
                                                "generalized ones");

    // stabilizer
    auto* stab = app.add_subcommand("stabilizer", "stabilizer group utilities");
    stab->require_subcommand(1);
    stab->fallthrough();
    std::string gens, errs;
    auto* stab_project = stab->add_subcommand("project", "code space projection from generators");
    stab_project->add_option("--generators", gens, "comma-separated Pauli strings")->required();
    auto* stab_classify = stab->add_subcommand("classify", "classify error operators");
    stab_classify->add_option("--generators", gens, "comma-separated Pauli strings")->required();
    stab_classify->add_option("--errors", errs, "comma-separated Pauli strings")->required();
    auto* stab_verify =
        stab->add_subcommand("verify", "isoclinic + KL consistency of an error set");
    stab_verify->add_option("--generators", gens, "comma-separated Pauli strings")->required();
    stab_verify->add_option("--errors", errs, "comma-separated Pauli strings")->required();

    // construct
    auto* con = app.add_subcommand("construct", "family constructions");
    con->require_subcommand(1);
    con->fallthrough();
    int con_m = 2, con_d = 2, con_n = 2;
    std::string con_a;
    auto* con_anti = con->add_subcommand("anticommuting", "anti-commuting Hermitian unitaries");
    con_anti->add_option("--m", con_m, "dimension (even)")->required();
    auto* con_graphs = con->add_subcommand("graphs", "rotated graph projections of a unitary");
    con_graphs->add_option("--a", con_a, "unitary of order d")->required();
    con_graphs->add_option("--d", con_d, "number of blocks")->required();
    auto* con_omega = con->add_subcommand("omega", "omega-commuting unitary generators");
    con_omega->add_option("--d", con_d, "order / root of unity")->required();
    con_omega->add_option("--n", con_n, "number of generators")->required();
    auto* con_mum = con->add_subcommand("mum", "mutually unbiased measurement family");
    con_mum->add_option("--d", con_d, "number of outcomes")->required();
    con_mum->add_option("--n", con_n, "number of measurements")->required();

    // mum
    auto* mum = app.add_subcommand("mum", "measurement family checks");
    mum->require_subcommand(1);
    mum->fallthrough();
    std::string bundle;
    auto* mum_check_cmd = mum->add_subcommand("check", "validate a measurement bundle");
    mum_check_cmd->add_option("bundle", bundle, "bundle directory")->required();
    auto* mum_canonical = mum->add_subcommand("canonical", "extract the canonical form");
    mum_canonical->add_option("bundle", bundle, "bundle directory")->required();

    // Let global flags appear anywhere on the command line.
    for (auto* sub : app.get_subcommands({})) {
        sub->fallthrough();
        for (auto* leaf : sub->get_subcommands({})) leaf->fallthrough();
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) return app.exit(e);  // --help
        std::cerr << "usage error: " << e.what() << "\n";
        return 2;
    }

    try {
        if (*angles) return cmd_angles(opt, a_file, b_file);
        if (*iso_check) return cmd_isoclinic_check(opt, iso_files);
        if (*kl_check) return cmd_kl_check(opt, kl_code, kl_ops, kl_classic);
        if (*stab_project) return cmd_stabilizer_project(opt, gens);
        if (*stab_classify) return cmd_stabilizer_classify(opt, gens, errs);
        if (*stab_verify) return cmd_stabilizer_verify(opt, gens, errs);
        if (*con_anti) return cmd_construct_anticommuting(opt, con_m);
        if (*con_graphs) return cmd_construct_graphs(opt, con_a, con_d);
        if (*con_omega) return cmd_construct_omega(opt, con_d, con_n);
        if (*con_mum) return cmd_construct_mum(opt, con_d, con_n);
        if (*mum_check_cmd) return cmd_mum_check(opt, bundle);
        if (*mum_canonical) return cmd_mum_canonical(opt, bundle);
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    std::cerr << "usage error: no subcommand\n";
    return 2;
}
