#pragma once

#include <filesystem>
#include <optional>
#include <string>

#include <json.hpp>

#include "dwkit/anomaly.hpp"
#include "dwkit/cohomology.hpp"
#include "dwkit/dw.hpp"

namespace dwkit {

using Json = nlohmann::ordered_json;

/// Parses JSON text; syntax errors become ParseError with line and column.
Json parse_json(const std::string& text, const std::string& source = "<input>");
Json read_json_file(const std::filesystem::path& path);

// Group files:
//   {"kind":"table","order":N,"table":[[...]]}
//   {"kind":"builtin","name":"cyclic","params":{"n":4}}
//   {"kind":"builtin","name":"dihedral","params":{"n":8}}     (order 8)
//   {"kind":"builtin","name":"pauli","params":{}}
//   {"kind":"builtin","name":"product","params":{"factors":[<group>,...]}}
// Unknown keys are rejected.
Json group_to_json(const GroupPtr& g);
GroupPtr group_from_json(const Json& j);

/// A group file path, or a shorthand: "cyclic 4", "z4", "d8", "dihedral 8",
/// "s3", "pauli", "p1", "trivial", "product z2 z2" (factors are single words).
GroupPtr parse_group_spec(const std::string& spec);

// Cochain files:
//   {"group":<group or canonical hash>,"degree":n,"modulus":M,
//    "values":{"1,0|0,1":"1/2",...}}
// Keys are pipe-separated element names (or indices); omitted keys are 0.
Json cochain_to_json(const Cochain& c);
/// `expected` resolves a hash reference and must match an inline group table.
Cochain cochain_from_json(const Json& j, const GroupPtr& expected = nullptr);

/// Same values on another group with an identical table.
Cochain rebase(const Cochain& c, const GroupPtr& g);

/// A cochain file path, or a catalog shorthand resolved on `g`:
///   "zero <n>", "omega<k>" (Z_N x Z_N), "d8", "zn3 <k>" (Z_N),
///   "generator <n> <i>" (i-th generator of H^n(g)).
Cochain parse_cochain_spec(const std::string& spec, const GroupPtr& g);

// Extension files:
//   {"D":<group>,"Ghat":<group>,"G":<group>,"iota":[...],"lambda":[...],"section":[...]}
// with "section" optional.
Json extension_to_json(const Extension& e);
Extension extension_from_json(const Json& j);
/// An extension file path, or "pauli", "cyclic N M", "cyclic-square N M",
/// "shear N M".
Extension parse_extension_spec(const std::string& spec);

Json loop_cochain_to_json(const LoopCochain& c);
Json cohomology_to_json(const CohomologyGroup& h);
CohomologyGroup cohomology_from_json(const Json& j, const GroupPtr& g);
/// Verdict, moduli and witnesses; timing only when `with_timing`.
Json report_to_json(const ObstructionReport& r, bool with_timing = false);

/// Persistent cohomology cache: one JSON file per (group hash, degree,
/// budget), written by atomic rename and re-verified on load.
class CohomologyCache {
 public:
  static constexpr const char* kVersion = "dwkit-cohomology-1";

  explicit CohomologyCache(std::filesystem::path dir);
  /// --cache flag, else DWKIT_CACHE, else disabled.
  static std::optional<CohomologyCache> from_flag_or_env(const std::string& flag);

  const std::filesystem::path& dir() const { return dir_; }
  std::filesystem::path entry_path(const GroupPtr& g, int degree, int64_t budget) const;
  /// nullopt when absent, from another version, or failing re-verification.
  std::optional<CohomologyGroup> load(const GroupPtr& g, int degree, int64_t budget) const;
  void store(const CohomologyGroup& h, int64_t budget) const;

 private:
  std::filesystem::path dir_;
};

/// Generators are cocycles and generator i has class order exactly factors[i].
bool verify_cohomology(const CohomologyGroup& h);

}  // namespace dwkit
