#pragma once

// Declarative algebra-spec documents (JSON, "version": 1) and their runner.

#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include <json.hpp>

#include "nlie/structure.hpp"

namespace nlie::spec {

using json = nlohmann::json;

/// Bad document: unknown names, unresolved references, malformed fields.
class SpecError : public Error {
public:
  SpecError(std::string path, const std::string &msg)
      : Error(path.empty() ? msg : path + ": " + msg), path_(std::move(path)) {}
  const std::string &path() const noexcept { return path_; }

private:
  std::string path_;
};

struct Named {
  std::string name;
  std::string kind;
  json params = json::object();
  bool operator==(const Named &) const = default;
};

struct Mutation {
  std::string kind; // "constant" (skew-completed) or "entry" (single ordered slot)
  std::vector<int> indices;
  std::vector<std::pair<int, std::string>> value;
  bool operator==(const Mutation &) const = default;
};

struct Campaign {
  std::string name;
  std::string check;
  std::string mode;
  std::string expect = "pass";
  json params = json::object();
  bool operator==(const Campaign &) const = default;
};

struct Document {
  int version = 1;
  std::string name;
  std::string claim;
  std::string field;
  Named carrier;
  std::vector<Named> maps;
  json bracket = json::object();
  json basis = json::object();
  std::vector<Mutation> mutations;
  std::vector<Campaign> campaigns;
  bool operator==(const Document &) const = default;
};

Document parse(const std::string &text);
Document parse_json(const json &j);
json to_json(const Document &doc);
std::string render(const Document &doc);
Document load(const std::filesystem::path &path);

/// Objects a document describes. Building validates every reference and
/// every hypothesis the constructors enforce.
struct Built {
  FieldDescriptor field;
  CarrierPtr carrier;
  std::map<std::string, Endomorphism> endos;
  std::map<std::string, Functional> functionals;
  std::map<std::string, GroupHom> homs;
  std::optional<LieAlgebra> lie;
  BracketPtr bracket;
  std::optional<std::vector<BasisIndex>> basis;
  /// Present for structure-backed forms and for closed forms on a closed basis.
  std::shared_ptr<const FiniteNLieAlgebra> algebra;
  std::optional<ClosureFailure> closure_failure;
};

Built build(const Document &doc, bool tabulate_now = true);
/// A bracket description against an already-built set of maps.
BracketPtr build_bracket(const json &j, const Built &b, const std::string &path);

struct RunOptions {
  std::uint64_t seed = kDefaultSeed;
  std::optional<std::uint64_t> budget;
  bool parallel = false;
};

struct CampaignResult {
  std::string name;
  std::string check;
  std::string mode;
  std::string verdict; // pass | fail | refused, or a simplicity verdict
  std::string expected;
  bool as_expected = false;
  bool failed = false;  // a law failed or a classification was not the one claimed
  bool refused = false;
  json counts = json::object();
  json witnesses = json::array();
  json details = json::object();
  std::uint64_t seed = 0;
  double duration_s = 0;
};

std::vector<CampaignResult> run(const Document &doc, const RunOptions &opt = {});
json report_json(const Document &doc, const std::vector<CampaignResult> &results, const RunOptions &opt);
/// 0 all-pass, 1 any failure, 2 refused (budget) and nothing failed.
int exit_status(const std::vector<CampaignResult> &results);

/// i<j<k entries in lexicographic order, plus field and labels.
json export_constants(const Document &doc);
std::string describe(const Document &doc);

std::filesystem::path bundled_dir();
std::vector<std::string> bundled_names();
/// A path if it exists, else a bundled name.
Document resolve(const std::string &name_or_path);

} // namespace nlie::spec
