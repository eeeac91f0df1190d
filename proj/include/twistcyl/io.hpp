#pragma once

// Serialization for the command-line front end: OBJ meshes, JSON reports
// (schema-versioned), CSV sweep tables, and atomic file writes.

#include <string>
#include <vector>

#include "twistcyl/embedding.hpp"
#include "twistcyl/limits.hpp"
#include "twistcyl/verify.hpp"

namespace twistcyl {

inline constexpr int kSchemaVersion = 1;

// Writes through a temp file in the same directory followed by a rename, so
// a report path never holds a partially written file.
void write_text_atomic(const std::string& path, const std::string& text);

// Wavefront OBJ: the triangulated surface as faces, then each boundary loop
// as its own group of polyline elements.
std::string mesh_to_obj(const SurfaceMesh& mesh, const CylinderEmbedding& embedding,
                        int loop_samples = 512);

// Report for `build`: assembly facts, isometry probe, mesh shape, linking.
std::string build_report_json(const CylinderEmbedding& embedding, const SurfaceMesh& mesh,
                              const IsometryReport& isometry, int linking_sign);

// Full certificate bundle for `verify`.
std::string bundle_to_json(const CertificateBundle& bundle);

// One CSV row per record, fixed column order, shortest round-trip doubles;
// identical records serialize to identical bytes.
std::string records_to_csv(const std::vector<ConvergenceRecord>& records);

// Summary for `sweep`: per pattern, per metric, the value sequence plus the
// nonincreasing / halved flags (10% per-step slack, 1e-12 additive floor)
// and the fitted decay exponent (informational).
std::string sweep_summary_json(const std::vector<std::vector<ConvergenceRecord>>& sweeps);

// Report for `lemmas`.
std::string fuzz_to_json(const std::vector<FuzzReport>& suites);

}  // namespace twistcyl
