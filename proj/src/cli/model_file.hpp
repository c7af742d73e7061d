#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "json.hpp"
#include "zmeq/core/errors.hpp"
#include "zmeq/core/matrix.hpp"
#include "zmeq/hedonic/hedonic.hpp"
#include "zmeq/matching/aggregate.hpp"
#include "zmeq/matching/individual.hpp"
#include "zmeq/transfer/market.hpp"

namespace zmeq::cli {

using Json = nlohmann::ordered_json;

/// Malformed model or outcome file. The message carries the file name and
/// either a line:column position or the JSON path of the offending value.
class InputError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct HedonicModel {
  HedonicMarket market;
};

struct FullAssignment {
  std::string y0;
  double pi = 0.0;
};

enum class StartKind { supersolution, subsolution, zero, explicit_values };

struct TwoSidedModel {
  std::string kind;  // "transfer", "housing" or "ot"
  AggregateMarket market;
  std::optional<FullAssignment> full_assignment;
  StartKind start = StartKind::supersolution;
  Json start_values;
};

struct LinearModel {
  Matrix a;
  std::vector<std::string> labels;
  std::optional<std::vector<double>> delta;
  std::vector<double> p0;
};

struct NtModel {
  IndividualMarket market;
};

struct NtAggregateModel {
  AggregateNTMarket market;
};

using Model = std::variant<HedonicModel, TwoSidedModel, LinearModel, NtModel, NtAggregateModel>;

/// Parses a JSON document, reporting syntax errors with line and column.
Json read_json_file(const std::string& path);

/// Builds a model from a parsed file. `seed` overrides the file's "seed"
/// for generated utilities.
Model load_model(const Json& doc, const std::string& path, std::optional<std::uint64_t> seed);

std::string model_name(const Model& model);

}  // namespace zmeq::cli
