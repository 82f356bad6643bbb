// On-disk formats: skeleton CSV (columns T, x1..xd, v1..vd) with a JSON meta
// sidecar, diagnostics reports as JSON, and a small content hash for the
// experiment manifest.  All doubles are written with %.17g so identical runs
// produce identical bytes.

#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>

#include <nlohmann/json.hpp>

#include "pdmp/analysis.hpp"
#include "pdmp/core.hpp"

namespace pdmp {

void write_skeleton_csv(const Skeleton& skel, std::ostream& os);

// Reads a skeleton CSV; t_final and meta come from the sidecar JSON when
// given, otherwise t_final falls back to the last event time.
Skeleton read_skeleton_csv(std::istream& is);

nlohmann::ordered_json skeleton_meta_json(const Skeleton& skel);
void apply_skeleton_meta(Skeleton& skel, const nlohmann::json& j);

nlohmann::ordered_json diagnostics_json(const DiagnosticsReport& rep);

// FNV-1a over the raw bytes; stable across platforms.
std::uint64_t fnv1a64(const std::string& bytes);

}  // namespace pdmp
