#pragma once

// Certificate-bundle orchestration: build one cylinder, run every
// verification chain on it, and collect the results with pass/fail flags.
// Also hosts the randomized lemma fuzz suites shared by the command-line
// front end and the acceptance gate.

#include <string>
#include <vector>

#include "twistcyl/embedding.hpp"
#include "twistcyl/limits.hpp"
#include "twistcyl/rulings.hpp"
#include "twistcyl/topology.hpp"

namespace twistcyl {

struct VerifyConfig {
    int grid_resolution = 32;       // isometry probe + triangulation density
    int loop_samples = 1024;        // boundary-loop sampling
    int scan_samples = 512;         // balanced-pair scan density
    int projection_samples = 2048;  // projected-arc sampling
    int bend_probes = 256;          // foliation straightness / length spot checks
    double layer_gap = -1.0;        // < 0: default rule; 0: flat-folded fixture
    unsigned seed = 2026;           // isometry probe seed
    double gram_tol = 1e-8;
    double min_separation_factor = 0.5;  // required fraction of the layer gap
    double linking_tol = 0.05;           // |gauss - crossings| allowance
    double chain_slack = 0.02;           // len(C1)+len(C2) >= 2 - slack
    double arc_tol = 1e-4;               // |arc - lambda/2| <= arc_tol * lambda
    double antisymmetry_tol = 1e-10;     // |f(t) + f(t + lambda/2)|
    double bend_chord_tol = 1e-8;        // bend straightness
    double bend_length_tol = 1e-9;       // bends no shorter than 1 - tol
};

// Straightness and length of the bends, probed on a parameter grid plus
// every knot of the prebend family.
struct BendStructureReport {
    int probes = 0;
    double max_chord_deviation = 0.0;
    double worst_chord_t = 0.0;
    double min_length = 0.0;
    double shortest_t = 0.0;
    bool pass = false;
};

BendStructureReport bend_structure_report(const BendFoliation& foliation, int probes,
                                          double chord_tol = 1e-8, double length_tol = 1e-9);

// Everything the verification pipeline measures about one build.
struct CertificateBundle {
    std::string pattern_id;
    double epsilon = 0.0;
    double lambda = 0.0;
    double layer_gap = 0.0;
    bool fixture = false;  // flat-folded degenerate surface (layer gap 0)
    std::string smoothness_class;

    IsometryReport isometry;
    double seam = 0.0;
    double junction = 0.0;
    SelfIntersectionResult embedded;
    bool embedded_pass = false;
    bool linking_checked = false;  // false when the loops touch (fixture)
    LinkingResult linking;
    std::string linking_note;
    BalancedPairFrame frame;
    double arc_imbalance = 0.0;  // max |arc - lambda/2|
    double antisymmetry = 0.0;   // max |f(t) + f(t + lambda/2)| over probes
    ProjectionCertificate projection;
    double chain_floor = 2.0;  // required lower bound on len(C1) + len(C2)
    HullBoundCertificate hull;
    EndgameCertificate endgame;
    BigonCertificate bigon;
    BendStructureReport bends;

    bool pass = false;
    std::vector<std::string> failures;  // one line per failed check
};

// Builds the cylinder (or the flat-folded fixture when the configured layer
// gap is exactly 0) and runs the full certificate chain.  Invalid epsilon
// propagates std::invalid_argument from the domain layer ("bands collide");
// certificate failures do not throw, they land in `failures`.
CertificateBundle verify_cylinder(const std::string& pattern_id, double epsilon,
                                  const VerifyConfig& config = {});

// One randomized suite outcome.  worst_margin is the smallest slack observed
// (negative means a violation); `note` describes the first violation.
struct FuzzReport {
    std::string suite;
    int trials = 0;
    int violations = 0;
    double worst_margin = 0.0;
    unsigned seed = 0;
    double tol = 0.0;
    std::string note;
};

// Random crossing-arc instances of the planar two-segment inequality:
// len(C1) + len(C2) >= 2 whenever the arcs cross.  Margin is the observed
// excess over 2.
FuzzReport fuzz_crossing_arcs(int trials, unsigned seed, double tol = 1e-9);

// Random point sets (general, coplanar, collinear, and near-degenerate):
// the hull must preserve the diameter exactly.  Margin is tol - |difference|.
FuzzReport fuzz_hull_diameter(int trials, unsigned seed, double tol = 1e-12);

// Randomly moved, scaled, jittered and mirrored Hopf pairs: the Gauss
// integral and the signed crossing count must agree on +-1, with the
// expected mirror sign.  Margin is 0.05 - |gauss - crossings|.
FuzzReport fuzz_linking_agreement(int trials, unsigned seed);

}  // namespace twistcyl
