#include <fstream>
#include <stdexcept>

#include "nlgqkd/games.hpp"
#include "json.hpp"

namespace nlgqkd::games {

using nlohmann::json;
using qmath::CMatrix;
using qmath::cplx;

namespace {

json load_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot open " + path);
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    throw std::invalid_argument(path + ": " + e.what());
  }
  return j;
}

CMatrix matrix_from_json(const json& j) {
  // matrix as rows of [re, im] pairs
  const int rows = static_cast<int>(j.size());
  if (rows == 0) throw std::invalid_argument("empty matrix in JSON");
  const int cols = static_cast<int>(j[0].size());
  CMatrix m(rows, cols);
  for (int i = 0; i < rows; ++i) {
    if (static_cast<int>(j[i].size()) != cols)
      throw std::invalid_argument("ragged matrix in JSON");
    for (int k = 0; k < cols; ++k) {
      const auto& e = j[i][k];
      if (!e.is_array() || e.size() != 2)
        throw std::invalid_argument("matrix entries must be [re, im] pairs");
      m.at(i, k) = cplx(e[0].get<double>(), e[1].get<double>());
    }
  }
  return m;
}

}  // namespace

GameSpec GameSpec::from_json_text(const std::string& text) {
  json j = json::parse(text);
  GameSpec g;
  g.name = j.value("name", "custom");
  g.x_alphabet = j.at("x_alphabet").get<std::vector<std::string>>();
  g.y_alphabet = j.at("y_alphabet").get<std::vector<std::string>>();
  g.a_alphabet = j.at("a_alphabet").get<std::vector<std::string>>();
  g.b_alphabet = j.at("b_alphabet").get<std::vector<std::string>>();
  g.px = j.at("px").get<std::vector<double>>();
  g.py = j.at("py").get<std::vector<double>>();
  g.sk_a = j.at("sk_a").get<std::vector<std::vector<std::vector<int>>>>();
  g.sk_b = j.at("sk_b").get<std::vector<std::vector<std::vector<int>>>>();
  g.validate();
  return g;
}

GameSpec GameSpec::from_json_file(const std::string& path) {
  return from_json_text(load_file(path).dump());
}

QuantumStrategy QuantumStrategy::from_json_file(const std::string& path) {
  json j = load_file(path);
  QuantumStrategy s;
  s.dim_a = j.at("dim_a").get<int>();
  s.dim_b = j.at("dim_b").get<int>();
  s.state = qmath::QState(s.dim_a * s.dim_b, matrix_from_json(j.at("state")));
  for (const auto& per_x : j.at("povms_a")) {
    std::vector<CMatrix> povm;
    for (const auto& el : per_x) povm.push_back(matrix_from_json(el));
    s.povms_a.push_back(std::move(povm));
  }
  for (const auto& per_y : j.at("povms_b")) {
    std::vector<CMatrix> povm;
    for (const auto& el : per_y) povm.push_back(matrix_from_json(el));
    s.povms_b.push_back(std::move(povm));
  }
  s.two_pair_structure = j.value("two_pair_structure", false);
  s.validate();
  return s;
}

}  // namespace nlgqkd::games
