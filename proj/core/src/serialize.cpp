#include "sklab/serialize.hpp"

#include <fstream>
#include <stdexcept>

#include <json.hpp>

namespace sklab {

namespace {

using nlohmann::json;

json index_sample_to_json(const IndexSample& s) {
  return json{{"indices", s.indices}, {"n", s.n}, {"with_replacement", s.with_replacement}};
}

IndexSample index_sample_from_json(const json& j) {
  IndexSample s;
  s.indices = j.at("indices").get<std::vector<Index>>();
  s.n = j.at("n").get<Index>();
  s.with_replacement = j.at("with_replacement").get<bool>();
  return s;
}

}  // namespace

std::string to_json_string(const SkeletonDecomposition& s) {
  json z = json::array();
  for (Index i = 0; i < s.core.rows(); ++i)
    for (Index j = 0; j < s.core.cols(); ++j)
      z.push_back(json::array({s.core(i, j).real(), s.core(i, j).imag()}));

  json doc{{"format", "sklab.skeleton"},
           {"version", 1},
           {"m", s.source_rows},
           {"n", s.source_cols},
           {"rows", index_sample_to_json(s.row_indices)},
           {"cols", index_sample_to_json(s.col_indices)},
           {"core_rows", s.core.rows()},
           {"core_cols", s.core.cols()},
           {"core", std::move(z)},
           {"delta_used", s.delta_used},
           {"algorithm_tag", to_string(s.algorithm_tag)},
           {"seed", s.seed}};
  return doc.dump();
}

SkeletonDecomposition skeleton_from_json_string(const std::string& text) {
  const json doc = json::parse(text);
  if (doc.at("format").get<std::string>() != "sklab.skeleton")
    throw std::invalid_argument("skeleton_from_json_string: not a skeleton container");

  SkeletonDecomposition s;
  s.source_rows = doc.at("m").get<Index>();
  s.source_cols = doc.at("n").get<Index>();
  s.row_indices = index_sample_from_json(doc.at("rows"));
  s.col_indices = index_sample_from_json(doc.at("cols"));
  s.delta_used = doc.at("delta_used").get<double>();
  s.algorithm_tag = algorithm_tag_from_string(doc.at("algorithm_tag").get<std::string>());
  s.seed = doc.at("seed").get<std::uint64_t>();

  const Index rows = doc.at("core_rows").get<Index>();
  const Index cols = doc.at("core_cols").get<Index>();
  const json& z = doc.at("core");
  if (static_cast<Index>(z.size()) != rows * cols)
    throw std::invalid_argument("skeleton_from_json_string: core size mismatch");
  s.core.resize(rows, cols);
  Index t = 0;
  for (Index i = 0; i < rows; ++i)
    for (Index j = 0; j < cols; ++j, ++t)
      s.core(i, j) = Complex(z[static_cast<std::size_t>(t)][0].get<double>(),
                             z[static_cast<std::size_t>(t)][1].get<double>());
  return s;
}

void save_skeleton(const std::string& path, const SkeletonDecomposition& s) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("save_skeleton: cannot open " + path);
  out << to_json_string(s);
  if (!out) throw std::runtime_error("save_skeleton: write failed for " + path);
}

SkeletonDecomposition load_skeleton(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("load_skeleton: cannot open " + path);
  std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  return skeleton_from_json_string(text);
}

}  // namespace sklab
