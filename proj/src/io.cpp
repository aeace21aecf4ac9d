#include "ratelab/io.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

#include <json.hpp>

namespace ratelab {

namespace {

using nlohmann::json;

// Best-effort line/column from a byte offset, for parse diagnostics.
std::string locate(const std::string& text, size_t byte) {
  size_t line = 1, col = 1;
  for (size_t i = 0; i < byte && i < text.size(); ++i) {
    if (text[i] == '\n') {
      ++line;
      col = 1;
    } else {
      ++col;
    }
  }
  std::ostringstream os;
  os << "line " << line << ", column " << col;
  return os.str();
}

json parse_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open " + path.string());
  std::stringstream buffer;
  buffer << in.rdbuf();
  const std::string text = buffer.str();
  try {
    return json::parse(text);
  } catch (const json::parse_error& err) {
    throw ParseError(path.string() + " (" + locate(text, err.byte) + "): " + err.what());
  }
}

template <typename T>
T field(const json& j, const char* name, const std::filesystem::path& path) {
  if (!j.contains(name)) throw ParseError(path.string() + ": missing field \"" + name + "\"");
  try {
    return j.at(name).get<T>();
  } catch (const json::exception& err) {
    throw ParseError(path.string() + ": field \"" + name + "\": " + err.what());
  }
}

}  // namespace

HermitianOperator load_hermitian(const std::filesystem::path& path) {
  const json j = parse_file(path);
  const int dim = field<int>(j, "dim", path);
  const auto re = field<std::vector<std::vector<double>>>(j, "re", path);
  const auto im = field<std::vector<std::vector<double>>>(j, "im", path);
  if (dim <= 0 || re.size() != static_cast<size_t>(dim) || im.size() != static_cast<size_t>(dim)) {
    throw ParseError(path.string() + ": re/im row count does not match dim");
  }
  ComplexMatrix m(dim, dim);
  for (int i = 0; i < dim; ++i) {
    if (re[i].size() != static_cast<size_t>(dim) || im[i].size() != static_cast<size_t>(dim)) {
      throw ParseError(path.string() + ": re/im column count does not match dim");
    }
    for (int k = 0; k < dim; ++k) m(i, k) = Complex(re[i][k], im[i][k]);
  }
  try {
    return HermitianOperator(m);
  } catch (const Error& err) {
    throw ParseError(path.string() + ": " + err.what());
  }
}

void save_hermitian(const HermitianOperator& m, const std::filesystem::path& path) {
  const int dim = m.dim();
  json re = json::array(), im = json::array();
  for (int i = 0; i < dim; ++i) {
    json re_row = json::array(), im_row = json::array();
    for (int k = 0; k < dim; ++k) {
      re_row.push_back(m.matrix()(i, k).real());
      im_row.push_back(m.matrix()(i, k).imag());
    }
    re.push_back(std::move(re_row));
    im.push_back(std::move(im_row));
  }
  json j{{"dim", dim}, {"re", std::move(re)}, {"im", std::move(im)}};
  std::ofstream out(path);
  if (!out) throw ParseError("cannot write " + path.string());
  out << j.dump(2) << "\n";
}

DensityMatrix load_density(const std::filesystem::path& path) {
  try {
    return DensityMatrix(load_hermitian(path));
  } catch (const ParseError&) {
    throw;
  } catch (const Error& err) {
    throw ParseError(path.string() + ": " + err.what());
  }
}

BipartitePureState load_state(const std::filesystem::path& path) {
  const json j = parse_file(path);
  const auto dims = field<std::vector<int>>(j, "dims", path);
  const auto re = field<std::vector<double>>(j, "re", path);
  const auto im = field<std::vector<double>>(j, "im", path);
  if (dims.size() != 2) throw ParseError(path.string() + ": dims must have exactly two entries");
  const size_t total = static_cast<size_t>(dims[0]) * static_cast<size_t>(dims[1]);
  if (re.size() != total || im.size() != total) {
    throw ParseError(path.string() + ": amplitude length does not match dims");
  }
  ComplexVector v(static_cast<Eigen::Index>(total));
  for (size_t i = 0; i < total; ++i) v(static_cast<Eigen::Index>(i)) = Complex(re[i], im[i]);
  try {
    return BipartitePureState(dims[0], dims[1], std::move(v));
  } catch (const Error& err) {
    throw ParseError(path.string() + ": " + err.what());
  }
}

void save_state(const BipartitePureState& psi, const std::filesystem::path& path) {
  json re = json::array(), im = json::array();
  for (Eigen::Index i = 0; i < psi.amplitudes().size(); ++i) {
    re.push_back(psi.amplitudes()(i).real());
    im.push_back(psi.amplitudes()(i).imag());
  }
  json j{{"dims", {psi.dim_a(), psi.dim_b()}}, {"re", std::move(re)}, {"im", std::move(im)}};
  std::ofstream out(path);
  if (!out) throw ParseError("cannot write " + path.string());
  out << j.dump(2) << "\n";
}

std::string format_number(double value) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.12g", value);
  return buf;
}

}  // namespace ratelab
