#pragma once

#include <filesystem>
#include <string>

#include <json.hpp>

#include "qcompat/measure.hpp"
#include "qcompat/norms.hpp"
#include "qcompat/regions.hpp"
#include "qcompat/witness.hpp"

namespace qcompat::io {

using nlohmann::json;

/// Relative Hermiticity tolerance on ingest; inputs within it are symmetrized.
inline constexpr double kIngestHermiticityTol = 1e-8;

// Every reader throws InvalidInput naming the offending field (e.g. "components[1].re[0][2]").

json to_json(const HermitianMatrix& m);
HermitianMatrix matrix_from_json(const json& j, const std::string& where = "matrix");

json to_json(const ObservableTuple& t);
ObservableTuple tuple_from_json(const json& j);

json to_json(const EffectTuple& e);
EffectTuple effects_from_json(const json& j);

json to_json(const GeneralPovmFamily& f);
/// Accepts either the "povms" schema or the "effects" schema (dichotomic).
GeneralPovmFamily povm_family_from_json(const json& j);

json to_json(const JointPovm& joint);
JointPovm joint_from_json(const json& j);

json to_json(const WitnessCertificate& w);
WitnessCertificate witness_from_json(const json& j);

json to_json(const CompatDecomposition& dec);
CompatDecomposition decomposition_from_json(const json& j);

json to_json(const L1MinDecomposition& dec);
L1MinDecomposition l1_decomposition_from_json(const json& j);

DensityMatrix state_from_json(const json& j);

json to_json(const PhaseCell& c);

/// Throws InvalidInput on unreadable or malformed files.
json read_file(const std::filesystem::path& path);
void write_file(const std::filesystem::path& path, const json& j);

/// FNV-1a 64-bit digest of a file's bytes, as 16 lowercase hex digits.
std::string fnv1a64_file(const std::filesystem::path& path);

} // namespace qcompat::io
