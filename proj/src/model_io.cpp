#include "urnlab/model_io.hpp"

#include <charconv>
#include <fstream>

#include "urnlab/error.hpp"

namespace urnlab {

namespace {

double parse_decimal(std::string_view text) {
  double value = 0.0;
  const auto [end, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc() || end != text.data() + text.size()) {
    throw UrnError(ErrorKind::InvalidSpec, "cannot parse number '" + std::string(text) + "'");
  }
  return value;
}

std::int64_t parse_int(std::string_view text) {
  std::int64_t value = 0;
  const auto [end, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc() || end != text.data() + text.size()) {
    throw UrnError(ErrorKind::InvalidSpec, "cannot parse integer '" + std::string(text) + "'");
  }
  return value;
}

ColorPoint parse_coeffs(const nlohmann::json& value, int dim) {
  if (!value.is_array() || static_cast<int>(value.size()) != dim) {
    throw UrnError(ErrorKind::InvalidSpec, "coeffs must be an array of length " + std::to_string(dim));
  }
  std::vector<std::int64_t> c;
  for (const auto& v : value) {
    if (!v.is_number_integer()) throw UrnError(ErrorKind::InvalidSpec, "coeffs must be integers");
    c.push_back(v.get<std::int64_t>());
  }
  return ColorPoint(std::move(c));
}

int read_dim(const nlohmann::json& doc) {
  if (!doc.is_object() || !doc.contains("dim") || !doc["dim"].is_number_integer()) {
    throw UrnError(ErrorKind::InvalidSpec, "model must be an object with integer 'dim'");
  }
  const int dim = doc["dim"].get<int>();
  if (dim < 1) throw UrnError(ErrorKind::InvalidSpec, "dim must be positive");
  return dim;
}

}  // namespace

double parse_probability(const nlohmann::json& value) {
  if (value.is_number()) return value.get<double>();
  if (!value.is_string()) throw UrnError(ErrorKind::InvalidSpec, "probability must be a number or string");
  const std::string text = value.get<std::string>();
  const auto slash = text.find('/');
  if (slash == std::string::npos) return parse_decimal(text);
  const double num = static_cast<double>(parse_int(std::string_view(text).substr(0, slash)));
  const double den = static_cast<double>(parse_int(std::string_view(text).substr(slash + 1)));
  if (den <= 0.0) throw UrnError(ErrorKind::InvalidSpec, "probability denominator must be positive");
  return num / den;
}

IncrementModel model_from_json(const nlohmann::json& doc, std::string name) {
  const int dim = read_dim(doc);
  Eigen::MatrixXd basis = Eigen::MatrixXd::Identity(dim, dim);
  if (doc.contains("embedding")) {
    const auto& rows = doc["embedding"];
    if (!rows.is_array() || static_cast<int>(rows.size()) != dim) {
      throw UrnError(ErrorKind::InvalidSpec, "embedding must have dim rows");
    }
    for (int i = 0; i < dim; ++i) {
      if (!rows[i].is_array() || static_cast<int>(rows[i].size()) != dim) {
        throw UrnError(ErrorKind::InvalidSpec, "embedding rows must have dim entries");
      }
      for (int j = 0; j < dim; ++j) basis(i, j) = rows[i][j].get<double>();
    }
  }
  if (!doc.contains("atoms") || !doc["atoms"].is_array()) {
    throw UrnError(ErrorKind::InvalidSpec, "model needs an 'atoms' array");
  }
  std::vector<Atom> atoms;
  for (const auto& a : doc["atoms"]) {
    if (!a.contains("coeffs") || !a.contains("prob")) {
      throw UrnError(ErrorKind::InvalidSpec, "every atom needs 'coeffs' and 'prob'");
    }
    atoms.push_back({parse_coeffs(a["coeffs"], dim), parse_probability(a["prob"])});
  }
  return IncrementModel(std::move(name), std::move(atoms), Embedding(std::move(basis)));
}

nlohmann::json model_to_json(const IncrementModel& model) {
  nlohmann::json doc;
  doc["dim"] = model.dim();
  const Eigen::MatrixXd& basis = model.embedding().basis();
  doc["embedding"] = nlohmann::json::array();
  for (Eigen::Index i = 0; i < basis.rows(); ++i) {
    nlohmann::json row = nlohmann::json::array();
    for (Eigen::Index j = 0; j < basis.cols(); ++j) row.push_back(basis(i, j));
    doc["embedding"].push_back(row);
  }
  doc["atoms"] = nlohmann::json::array();
  for (const Atom& a : model.atoms()) doc["atoms"].push_back({{"coeffs", a.point.coeffs}, {"prob", a.prob}});
  return doc;
}

nlohmann::json read_json_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw UrnError(ErrorKind::InvalidSpec, "cannot open " + path.string());
  try {
    return nlohmann::json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    throw UrnError(ErrorKind::InvalidSpec, path.string() + ": " + e.what());
  }
}

IncrementModel resolve_model(std::string_view ref) {
  if (ref == "right-shift") return right_shift();
  if (ref == "triangular") return triangular();
  if (ref.starts_with("ssrw")) {
    const std::int64_t dim = parse_int(ref.substr(4));
    if (dim < 1 || dim > 8) throw UrnError(ErrorKind::InvalidSpec, "ssrw dimension must be in 1..8");
    return ssrw(static_cast<int>(dim));
  }
  if (ref.starts_with("file:")) {
    const std::filesystem::path path(ref.substr(5));
    return model_from_json(read_json_file(path), path.stem().string());
  }
  throw UrnError(ErrorKind::InvalidSpec, "unknown model '" + std::string(ref) + "'");
}

SparseLaw resolve_initial(std::string_view ref, int dim) {
  if (ref.starts_with("delta:")) {
    std::string_view rest = ref.substr(6);
    std::vector<std::int64_t> c;
    while (true) {
      const auto comma = rest.find(',');
      c.push_back(parse_int(rest.substr(0, comma)));
      if (comma == std::string_view::npos) break;
      rest = rest.substr(comma + 1);
    }
    if (c.size() == 1 && c[0] == 0) c.assign(static_cast<std::size_t>(dim), 0);
    if (static_cast<int>(c.size()) != dim) {
      throw UrnError(ErrorKind::InvalidSpec, "u0 point has wrong dimension");
    }
    return delta_law(ColorPoint(std::move(c)));
  }
  if (ref.starts_with("file:")) {
    const nlohmann::json doc = read_json_file(std::filesystem::path(ref.substr(5)));
    if (!doc.contains("atoms") || !doc["atoms"].is_array()) {
      throw UrnError(ErrorKind::InvalidSpec, "u0 file needs an 'atoms' array");
    }
    SparseLaw u0;
    u0.dim = dim;
    for (const auto& a : doc["atoms"]) {
      const auto& mass = a.contains("mass") ? a["mass"] : a.at("prob");
      u0.entries[parse_coeffs(a.at("coeffs"), dim)] += parse_probability(mass);
    }
    validate_initial(u0, dim);
    return u0;
  }
  throw UrnError(ErrorKind::InvalidSpec, "unknown u0 '" + std::string(ref) + "'");
}

}  // namespace urnlab
