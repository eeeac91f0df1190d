// Command-line front end: build one cylinder, verify the full certificate
// chain, run the epsilon sweep, or fuzz the supporting lemmas.
//
// Exit codes: 0 pass, 1 certificate failure, 2 invalid configuration.

#include <cstdio>
#include <exception>
#include <fstream>
#include <iostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "twistcyl/io.hpp"
#include "twistcyl/limits.hpp"
#include "twistcyl/verify.hpp"

namespace {

using namespace twistcyl;

constexpr int kExitPass = 0;
constexpr int kExitCertificate = 1;
constexpr int kExitConfig = 2;

struct RunConfig {
    std::string pattern;  // empty: P1 for build/verify, all four for sweep
    double epsilon = 0.1;
    std::vector<double> epsilons;  // empty: the headline 0.5 0.2 0.1 0.05
    int grid = 32;
    double layer_gap = -1.0;  // < 0: default rule; 0: flat-folded fixture
    long long seed = -1;      // < 0: 2026 (42 for lemmas)
    int trials = 1000;
    std::string out;     // mesh (build) or CSV (sweep)
    std::string report;  // JSON report
    double tol_gram = 1e-8;
    double tol_chain = 0.02;
    double tol_linking = 0.05;
    double tol_balance = 1e-4;
    double tol_bend_chord = 1e-8;
    double tol_bend_length = 1e-9;
    double tol_arcs = 1e-9;
    double tol_hull = 1e-12;
    double min_separation_factor = 0.5;
};

std::string trim(const std::string& s) {
    const auto a = s.find_first_not_of(" \t\r\n");
    if (a == std::string::npos) return "";
    const auto b = s.find_last_not_of(" \t\r\n");
    return s.substr(a, b - a + 1);
}

std::vector<double> parse_epsilon_list(const std::string& text) {
    std::vector<double> out;
    std::string item;
    std::istringstream in(text);
    while (std::getline(in, item, ',')) {
        item = trim(item);
        if (item.empty()) continue;
        size_t used = 0;
        const double v = std::stod(item, &used);
        if (used != item.size()) throw std::invalid_argument("bad epsilon '" + item + "'");
        out.push_back(v);
    }
    return out;
}

// Flat key-value config file mirroring the flags; '#' starts a comment.
void load_config_file(const std::string& path, RunConfig& rc) {
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("cannot read config file " + path);
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        line = trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw std::invalid_argument(path + ":" + std::to_string(line_no) +
                                        ": expected key = value");
        std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        for (char& c : key)
            if (c == '-') c = '_';
        try {
            if (key == "pattern") rc.pattern = value;
            else if (key == "epsilon") rc.epsilon = std::stod(value);
            else if (key == "epsilons") rc.epsilons = parse_epsilon_list(value);
            else if (key == "grid") rc.grid = std::stoi(value);
            else if (key == "layer_gap") rc.layer_gap = std::stod(value);
            else if (key == "seed") rc.seed = std::stoll(value);
            else if (key == "trials") rc.trials = std::stoi(value);
            else if (key == "out") rc.out = value;
            else if (key == "report") rc.report = value;
            else if (key == "tol_gram") rc.tol_gram = std::stod(value);
            else if (key == "tol_chain") rc.tol_chain = std::stod(value);
            else if (key == "tol_linking") rc.tol_linking = std::stod(value);
            else if (key == "tol_balance") rc.tol_balance = std::stod(value);
            else if (key == "tol_bend_chord") rc.tol_bend_chord = std::stod(value);
            else if (key == "tol_bend_length") rc.tol_bend_length = std::stod(value);
            else if (key == "tol_arcs") rc.tol_arcs = std::stod(value);
            else if (key == "tol_hull") rc.tol_hull = std::stod(value);
            else if (key == "min_separation_factor") rc.min_separation_factor = std::stod(value);
            else
                throw std::invalid_argument("unknown config key '" + key + "'");
        } catch (const std::invalid_argument&) {
            throw;
        } catch (const std::exception&) {
            throw std::invalid_argument(path + ":" + std::to_string(line_no) +
                                        ": bad value for " + key);
        }
    }
}

unsigned effective_seed(const RunConfig& rc, unsigned fallback) {
    return rc.seed < 0 ? fallback : static_cast<unsigned>(rc.seed);
}

VerifyConfig verify_config(const RunConfig& rc) {
    VerifyConfig cfg;
    cfg.grid_resolution = rc.grid;
    cfg.layer_gap = rc.layer_gap;
    cfg.seed = effective_seed(rc, 2026);
    cfg.gram_tol = rc.tol_gram;
    cfg.chain_slack = rc.tol_chain;
    cfg.linking_tol = rc.tol_linking;
    cfg.arc_tol = rc.tol_balance;
    cfg.bend_chord_tol = rc.tol_bend_chord;
    cfg.bend_length_tol = rc.tol_bend_length;
    cfg.min_separation_factor = rc.min_separation_factor;
    return cfg;
}

void emit(const std::string& path, const std::string& text) {
    if (path.empty())
        std::cout << text;
    else
        write_text_atomic(path, text);
}

int cmd_build(const RunConfig& rc) {
    const std::string pattern = rc.pattern.empty() ? "P1" : rc.pattern;
    CylinderEmbedding e;
    try {
        if (rc.epsilon == 0.0 || rc.layer_gap == 0.0) {
            e = make_limit_embedding(pattern_catalog(pattern));
        } else {
            const double gap =
                rc.layer_gap < 0.0 ? default_layer_gap(rc.epsilon) : rc.layer_gap;
            e = assemble(thicken(pattern_catalog(pattern), rc.epsilon), gap);
        }
    } catch (const std::runtime_error& ex) {
        // the requested gap does not fit the band budget: a config problem
        throw std::invalid_argument(ex.what());
    }
    const SurfaceMesh mesh = triangulate(e, rc.grid);
    const IsometryReport iso = isometry_report(e, rc.grid, effective_seed(rc, 2026));

    int linking_sign = 0;
    try {
        const auto [loop_f, loop_g] = boundary_loops(e, 1024);
        const LinkingResult lk = linking_numbers(loop_f.points, loop_g.points);
        if (lk.agreed) linking_sign = lk.crossing_value;
    } catch (const std::exception&) {
        linking_sign = 0;  // degenerate fixture: loops touch
    }

    if (!rc.out.empty()) write_text_atomic(rc.out, mesh_to_obj(mesh, e));
    emit(rc.report, build_report_json(e, mesh, iso, linking_sign));

    const bool ok = iso.max_gram_defect <= rc.tol_gram && mesh.manifold() &&
                    mesh.euler_characteristic() == 0 && mesh.boundary_cycle_count() == 2;
    if (!ok) std::cerr << "build invariants violated\n";
    return ok ? kExitPass : kExitCertificate;
}

int cmd_verify(const RunConfig& rc) {
    const std::string pattern = rc.pattern.empty() ? "P1" : rc.pattern;
    CertificateBundle bundle;
    try {
        bundle = verify_cylinder(pattern, rc.epsilon, verify_config(rc));
    } catch (const std::runtime_error& ex) {
        throw std::invalid_argument(ex.what());  // construction-phase failure
    }
    emit(rc.report, bundle_to_json(bundle));
    std::cerr << "verify " << bundle.pattern_id << " epsilon " << bundle.epsilon << ": "
              << (bundle.pass ? "PASS" : "FAIL") << "\n";
    for (const auto& f : bundle.failures) std::cerr << "  " << f << "\n";
    return bundle.pass ? kExitPass : kExitCertificate;
}

int cmd_sweep(const RunConfig& rc) {
    std::vector<std::string> patterns;
    if (rc.pattern.empty())
        patterns = {"P1", "P2", "P1m", "P2m"};
    else
        patterns = {rc.pattern};
    const std::vector<double> epsilons =
        rc.epsilons.empty() ? std::vector<double>{0.5, 0.2, 0.1, 0.05} : rc.epsilons;

    SweepConfig cfg;
    cfg.grid_resolution = rc.grid;
    cfg.layer_gap = rc.layer_gap > 0.0 ? rc.layer_gap : 0.0;
    cfg.seed = effective_seed(rc, 2026);
    cfg.gram_tol = rc.tol_gram;
    cfg.min_separation_factor = rc.min_separation_factor;

    std::vector<std::vector<ConvergenceRecord>> sweeps;
    std::vector<ConvergenceRecord> rows;
    for (const auto& pattern : patterns) {
        sweeps.push_back(sweep(pattern, epsilons, cfg));
        rows.insert(rows.end(), sweeps.back().begin(), sweeps.back().end());
    }

    emit(rc.out, records_to_csv(rows));
    const std::string summary = sweep_summary_json(sweeps);
    if (!rc.report.empty()) write_text_atomic(rc.report, summary);

    const bool ok = nlohmann::json::parse(summary)["pass"].get<bool>();
    std::cerr << "sweep over " << patterns.size() << " pattern(s), " << epsilons.size()
              << " epsilon(s): " << (ok ? "PASS" : "FAIL") << "\n";
    return ok ? kExitPass : kExitCertificate;
}

int cmd_lemmas(const RunConfig& rc) {
    if (rc.trials < 0) throw std::invalid_argument("trials must be nonnegative");
    const unsigned seed = effective_seed(rc, 42);
    const std::vector<FuzzReport> suites = {
        fuzz_crossing_arcs(rc.trials, seed, rc.tol_arcs),
        fuzz_hull_diameter(rc.trials, seed, rc.tol_hull),
        fuzz_linking_agreement(rc.trials, seed),
    };
    emit(rc.report, fuzz_to_json(suites));
    int violations = 0;
    for (const FuzzReport& rep : suites) {
        violations += rep.violations;
        std::cerr << rep.suite << ": " << rep.trials << " trials, " << rep.violations
                  << " violation(s)\n";
    }
    return violations == 0 ? kExitPass : kExitCertificate;
}

}  // namespace

int main(int argc, char** argv) {
    RunConfig rc;

    // Config file first, flags second, so flags override the file.
    for (int i = 1; i + 1 < argc; ++i) {
        if (std::string(argv[i]) == "--config") {
            try {
                load_config_file(argv[i + 1], rc);
            } catch (const std::exception& ex) {
                std::cerr << "error: " << ex.what() << "\n";
                return kExitConfig;
            }
        }
    }

    CLI::App app{"twisted paper cylinder: build, verify, sweep, and lemma fuzzing"};
    app.require_subcommand(1);

    std::string config_path;
    std::string epsilons_text;
    auto add_common = [&](CLI::App* sub) {
        sub->add_option("--config", config_path, "flat key = value config file");
        sub->add_option("--pattern", rc.pattern, "crease pattern: P1, P2, P1m, P2m");
        sub->add_option("--grid", rc.grid, "probe and triangulation resolution");
        sub->add_option("--layer-gap", rc.layer_gap,
                        "stacking gap; 0 selects the flat-folded fixture");
        sub->add_option("--seed", rc.seed, "seed for randomized probes and suites");
        sub->add_option("--out", rc.out, "mesh or CSV output path");
        sub->add_option("--report", rc.report, "JSON report path (default stdout)");
        sub->add_option("--tol-gram", rc.tol_gram, "isometry gram-defect tolerance");
        sub->add_option("--tol-chain", rc.tol_chain, "projection chain slack below 2");
        sub->add_option("--tol-linking", rc.tol_linking, "gauss/crossing gap tolerance");
        sub->add_option("--tol-balance", rc.tol_balance, "arc imbalance, fraction of lambda");
        sub->add_option("--tol-bend-chord", rc.tol_bend_chord, "bend straightness tolerance");
        sub->add_option("--tol-bend-length", rc.tol_bend_length, "bend shortfall below 1");
    };

    CLI::App* cb = app.add_subcommand("build", "assemble one cylinder, export mesh and report");
    cb->add_option("--epsilon", rc.epsilon, "aspect excess over 2, in (0, 0.5]");
    add_common(cb);

    CLI::App* cv = app.add_subcommand("verify", "run the full certificate chain");
    cv->add_option("--epsilon", rc.epsilon, "aspect excess over 2; 0 = flat-folded fixture");
    add_common(cv);

    CLI::App* cs = app.add_subcommand("sweep", "measure convergence along an epsilon sweep");
    cs->add_option("--epsilons", epsilons_text, "comma-separated decreasing list");
    add_common(cs);

    CLI::App* cl = app.add_subcommand("lemmas", "randomized suites for the supporting lemmas");
    cl->add_option("--trials", rc.trials, "instances per suite (0 = empty report)");
    cl->add_option("--tol-arcs", rc.tol_arcs, "crossing-arc inequality tolerance");
    cl->add_option("--tol-hull", rc.tol_hull, "hull diameter equality tolerance");
    add_common(cl);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kExitPass : kExitConfig;
    }

    try {
        if (!epsilons_text.empty()) rc.epsilons = parse_epsilon_list(epsilons_text);
        if (cb->parsed()) return cmd_build(rc);
        if (cv->parsed()) return cmd_verify(rc);
        if (cs->parsed()) return cmd_sweep(rc);
        return cmd_lemmas(rc);
    } catch (const std::invalid_argument& ex) {
        std::cerr << "error: " << ex.what() << "\n";
        return kExitConfig;
    } catch (const std::exception& ex) {
        // verification gates throw std::runtime_error naming the offender
        std::cerr << "error: " << ex.what() << "\n";
        return kExitCertificate;
    }
}
