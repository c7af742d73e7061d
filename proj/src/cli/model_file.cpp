#include "model_file.hpp"

#include <fstream>
#include <random>
#include <sstream>

namespace zmeq::cli {

namespace {

class Reader {
 public:
  Reader(const Json& node, std::string file, std::string path)
      : node_(node), file_(std::move(file)), path_(std::move(path)) {}

  [[noreturn]] void fail(const std::string& what) const {
    throw InputError(file_ + ": at " + (path_.empty() ? "/" : path_) + ": " + what);
  }

  const Json& node() const noexcept { return node_; }
  const std::string& path() const noexcept { return path_; }

  bool has(const std::string& key) const { return node_.is_object() && node_.contains(key); }

  Reader at(const std::string& key) const {
    if (!node_.is_object()) fail("expected an object");
    if (!node_.contains(key)) fail("missing field \"" + key + "\"");
    return Reader(node_.at(key), file_, path_ + "/" + key);
  }

  Reader at(std::size_t k) const { return Reader(node_.at(k), file_, path_ + "/" + std::to_string(k)); }

  double number() const {
    if (!node_.is_number()) fail("expected a number");
    return node_.get<double>();
  }

  std::string string() const {
    if (!node_.is_string()) fail("expected a string");
    return node_.get<std::string>();
  }

  bool boolean() const {
    if (!node_.is_boolean()) fail("expected true or false");
    return node_.get<bool>();
  }

  std::size_t array_size() const {
    if (!node_.is_array()) fail("expected an array");
    return node_.size();
  }

  std::vector<double> numbers() const {
    std::vector<double> out(array_size());
    for (std::size_t k = 0; k < out.size(); ++k) out[k] = at(k).number();
    return out;
  }

  std::vector<std::string> strings() const {
    std::vector<std::string> out(array_size());
    for (std::size_t k = 0; k < out.size(); ++k) out[k] = at(k).string();
    return out;
  }

  Matrix matrix() const {
    const std::size_t rows = array_size();
    if (rows == 0) fail("expected a non-empty matrix");
    const std::size_t cols = at(0).array_size();
    Matrix m(rows, cols);
    for (std::size_t i = 0; i < rows; ++i) {
      const Reader row = at(i);
      if (row.array_size() != cols) row.fail("row has " + std::to_string(row.array_size()) + " entries, expected " +
                                              std::to_string(cols));
      for (std::size_t j = 0; j < cols; ++j) m(i, j) = row.at(j).number();
    }
    return m;
  }

  /// {"label": mass, ...} or [mass, ...] with labels prefix1, prefix2, ...
  std::pair<std::vector<std::string>, std::vector<double>> masses(const std::string& prefix) const {
    std::vector<std::string> labels;
    std::vector<double> values;
    if (node_.is_object()) {
      for (auto it = node_.begin(); it != node_.end(); ++it) {
        labels.push_back(it.key());
        values.push_back(at(it.key()).number());
      }
    } else {
      values = numbers();
      for (std::size_t k = 1; k <= values.size(); ++k) labels.push_back(prefix + std::to_string(k));
    }
    if (values.empty()) fail("expected at least one type");
    return {labels, values};
  }

 private:
  const Json& node_;
  std::string file_;
  std::string path_;
};

/// Runs a library constructor, turning its InvalidInput into a located error.
template <class F>
auto validated(const Reader& r, F&& build) {
  try {
    return build();
  } catch (const InvalidInput& e) {
    r.fail(e.what());
  } catch (const UnsupportedFrontier& e) {
    r.fail(e.what());
  }
}

Matrix utility_matrix(const Reader& frontier, const std::string& key, std::size_t rows, std::size_t cols,
                      std::mt19937_64& rng) {
  if (frontier.has(key)) {
    Matrix m = frontier.at(key).matrix();
    if (m.rows() != rows || m.cols() != cols) {
      frontier.at(key).fail("expected a " + std::to_string(rows) + " x " + std::to_string(cols) + " matrix");
    }
    return m;
  }
  if (!frontier.has("generate")) frontier.fail("needs \"" + key + "\" or a \"generate\" block");
  const Reader gen = frontier.at("generate");
  const double lo = gen.has("low") ? gen.at("low").number() : -1.0;
  const double hi = gen.has("high") ? gen.at("high").number() : 1.0;
  if (!(lo < hi)) gen.fail("low must be below high");
  std::uniform_real_distribution<double> u(lo, hi);
  Matrix m(rows, cols);
  for (std::size_t i = 0; i < rows; ++i) {
    for (std::size_t j = 0; j < cols; ++j) m(i, j) = u(rng);
  }
  return m;
}

TwoSidedModel load_two_sided(const Reader& root, const std::string& kind, std::uint64_t seed) {
  auto [x_labels, n] = root.at("n").masses("x");
  auto [y_labels, m] = root.at("m").masses("y");
  const double sigma = root.has("sigma") ? root.at("sigma").number() : 1.0;
  const bool singles = root.has("singles") ? root.at("singles").boolean() : kind != "ot";
  const Reader f = root.at("frontier");
  const std::string fk = f.at("kind").string();
  std::mt19937_64 rng(seed);
  const std::size_t nx = n.size(), ny = m.size();
  std::vector<Frontier> frontiers;
  if (fk == "tu") {
    const Matrix phi = utility_matrix(f, "phi", nx, ny, rng);
    for (std::size_t x = 0; x < nx; ++x) {
      for (std::size_t y = 0; y < ny; ++y) frontiers.emplace_back(TuFrontier{phi(x, y)});
    }
  } else if (fk == "taxes" || fk == "ntu") {
    const Matrix alpha = utility_matrix(f, "alpha", nx, ny, rng);
    const Matrix gamma = utility_matrix(f, "gamma", nx, ny, rng);
    TaxSchedule schedule;
    if (fk == "taxes") {
      const Reader b = f.at("brackets");
      std::vector<TaxBracket> brackets;
      for (std::size_t k = 0; k < b.array_size(); ++k) {
        const auto pair = b.at(k).numbers();
        if (pair.size() != 2) b.at(k).fail("a bracket is [rate, threshold]");
        brackets.push_back({pair[0], pair[1]});
      }
      schedule = validated(b, [&] { return TaxSchedule(brackets); });
    }
    for (std::size_t x = 0; x < nx; ++x) {
      for (std::size_t y = 0; y < ny; ++y) {
        if (fk == "taxes") {
          frontiers.emplace_back(TaxFrontier{alpha(x, y), gamma(x, y), schedule});
        } else {
          frontiers.emplace_back(NtuFrontier{alpha(x, y), gamma(x, y)});
        }
      }
    }
  } else {
    f.at("kind").fail("unknown frontier kind \"" + fk + "\" (expected tu, taxes or ntu)");
  }

  TwoSidedModel model{kind,
                      validated(root, [&] {
                        return AggregateMarket(x_labels, y_labels, n, m, std::move(frontiers), sigma, singles);
                      }),
                      std::nullopt, kind == "ot" ? StartKind::zero : StartKind::supersolution, Json()};
  if (root.has("full_assignment")) {
    const Reader fa = root.at("full_assignment");
    model.full_assignment = FullAssignment{fa.at("y0").string(), fa.has("pi") ? fa.at("pi").number() : 0.0};
  }
  if (root.has("start")) {
    const Reader s = root.at("start");
    if (s.node().is_object()) {
      model.start = StartKind::explicit_values;
      model.start_values = s.node();
    } else {
      const std::string name = s.string();
      if (name == "supersolution") {
        model.start = StartKind::supersolution;
      } else if (name == "subsolution") {
        model.start = StartKind::subsolution;
      } else if (name == "zero") {
        model.start = StartKind::zero;
      } else {
        s.fail("start must be supersolution, subsolution, zero or an object of prices");
      }
    }
  }
  return model;
}

HedonicModel load_hedonic(const Reader& root) {
  auto [x_labels, n] = root.at("n").masses("x");
  auto [y_labels, m] = root.at("m").masses("y");
  Matrix c = root.at("c").matrix();
  Matrix a = root.at("a").matrix();
  std::vector<std::string> z;
  if (root.has("z")) {
    z = root.at("z").strings();
  } else {
    for (std::size_t k = 1; k <= c.cols(); ++k) z.push_back("z" + std::to_string(k));
  }
  return {validated(root, [&] { return HedonicMarket(z, n, m, c, a); })};
}

LinearModel load_linear(const Reader& root) {
  LinearModel model;
  model.a = root.at("A").matrix();
  if (model.a.rows() != model.a.cols()) root.at("A").fail("expected a square matrix");
  const std::size_t k = model.a.rows();
  if (root.has("labels")) {
    model.labels = root.at("labels").strings();
    if (model.labels.size() != k) root.at("labels").fail("expected " + std::to_string(k) + " labels");
  } else {
    for (std::size_t z = 1; z <= k; ++z) model.labels.push_back(std::to_string(z));
  }
  if (root.has("delta")) {
    model.delta = root.at("delta").numbers();
    if (model.delta->size() != k) root.at("delta").fail("expected " + std::to_string(k) + " entries");
  }
  model.p0 = root.has("p0") ? root.at("p0").numbers() : std::vector<double>(k, 0.0);
  if (model.p0.size() != k) root.at("p0").fail("expected " + std::to_string(k) + " entries");
  return model;
}

Model load_nt(const Reader& root) {
  Matrix alpha = root.at("alpha").matrix();
  Matrix gamma = root.at("gamma").matrix();
  if (root.has("n") || root.has("m")) {
    auto [x_labels, n] = root.at("n").masses("x");
    auto [y_labels, m] = root.at("m").masses("y");
    return NtAggregateModel{validated(root, [&] { return AggregateNTMarket(x_labels, y_labels, n, m, alpha, gamma); })};
  }
  std::vector<std::string> workers, firms;
  if (root.has("workers")) workers = root.at("workers").strings();
  if (root.has("firms")) firms = root.at("firms").strings();
  return NtModel{validated(root, [&] { return IndividualMarket(workers, firms, alpha, gamma); })};
}

std::string line_of(const std::string& text, std::size_t byte, std::size_t& line, std::size_t& column) {
  line = 1;
  std::size_t start = 0;
  const std::size_t stop = std::min(byte == 0 ? 0 : byte - 1, text.size());
  for (std::size_t k = 0; k < stop; ++k) {
    if (text[k] == '\n') {
      ++line;
      start = k + 1;
    }
  }
  column = stop - start + 1;
  const std::size_t end = text.find('\n', start);
  return text.substr(start, end == std::string::npos ? std::string::npos : end - start);
}

}  // namespace

Json read_json_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError(path + ": cannot open file");
  std::ostringstream buffer;
  buffer << in.rdbuf();
  const std::string text = buffer.str();
  try {
    return Json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    std::size_t line = 0, column = 0;
    const std::string context = line_of(text, e.byte, line, column);
    std::string what = e.what();
    const auto tag = what.find("] ");
    if (tag != std::string::npos) what.erase(0, tag + 2);
    if (what.rfind("parse error at line", 0) == 0) {
      const auto colon = what.find(": ");
      if (colon != std::string::npos) what.erase(0, colon + 2);
    }
    throw InputError(path + ":" + std::to_string(line) + ":" + std::to_string(column) + ": " + what + "\n  " +
                     context + "\n  " + std::string(column > 0 ? column - 1 : 0, ' ') + "^");
  }
}

Model load_model(const Json& doc, const std::string& path, std::optional<std::uint64_t> seed) {
  const Reader root(doc, path, "");
  if (!doc.is_object()) root.fail("expected an object");
  const std::string kind = root.at("model").string();
  const std::uint64_t s =
      seed ? *seed : (root.has("seed") ? static_cast<std::uint64_t>(root.at("seed").number()) : 0u);
  if (kind == "hedonic") return load_hedonic(root);
  if (kind == "transfer" || kind == "housing" || kind == "ot") return load_two_sided(root, kind, s);
  if (kind == "linear") return load_linear(root);
  if (kind == "nt") return load_nt(root);
  root.at("model").fail("unknown model \"" + kind + "\" (expected hedonic, transfer, housing, ot, linear or nt)");
}

std::string model_name(const Model& model) {
  struct Visitor {
    std::string operator()(const HedonicModel&) const { return "hedonic"; }
    std::string operator()(const TwoSidedModel& m) const { return m.kind; }
    std::string operator()(const LinearModel&) const { return "linear"; }
    std::string operator()(const NtModel&) const { return "nt"; }
    std::string operator()(const NtAggregateModel&) const { return "nt-aggregate"; }
  };
  return std::visit(Visitor{}, model);
}

}  // namespace zmeq::cli
