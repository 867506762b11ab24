#include "qcompat/io.hpp"

#include <cstdio>
#include <fstream>
#include <iterator>
#include <sstream>

namespace qcompat::io {

namespace {

const json& field(const json& j, const char* key, const std::string& where) {
  if (!j.is_object()) throw InvalidInput(where + ": expected a JSON object");
  const auto it = j.find(key);
  if (it == j.end()) throw InvalidInput(where + "." + key + ": missing field");
  return *it;
}

int positive_int(const json& j, const std::string& where) {
  if (!j.is_number_integer() || j.get<long long>() < 1 || j.get<long long>() > 1 << 20)
    throw InvalidInput(where + ": expected a positive integer");
  return j.get<int>();
}

double number(const json& j, const std::string& where) {
  if (!j.is_number()) throw InvalidInput(where + ": expected a number");
  return j.get<double>();
}

const json& array(const json& j, const std::string& where, std::size_t size) {
  if (!j.is_array()) throw InvalidInput(where + ": expected an array");
  if (j.size() != size)
    throw InvalidInput(where + ": expected " + std::to_string(size) + " entries, found " + std::to_string(j.size()));
  return j;
}

Eigen::MatrixXd real_grid(const json& j, int d, const std::string& where) {
  array(j, where, static_cast<std::size_t>(d));
  Eigen::MatrixXd m(d, d);
  for (int r = 0; r < d; ++r) {
    const std::string row = where + "[" + std::to_string(r) + "]";
    array(j[static_cast<std::size_t>(r)], row, static_cast<std::size_t>(d));
    for (int c = 0; c < d; ++c)
      m(r, c) = number(j[static_cast<std::size_t>(r)][static_cast<std::size_t>(c)], row + "[" + std::to_string(c) + "]");
  }
  return m;
}

json grid(const Eigen::MatrixXd& m) {
  json rows = json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    json row = json::array();
    for (Eigen::Index c = 0; c < m.cols(); ++c) row.push_back(m(r, c));
    rows.push_back(std::move(row));
  }
  return rows;
}

std::vector<HermitianMatrix> matrix_list(const json& j, const std::string& where, std::size_t size) {
  array(j, where, size);
  std::vector<HermitianMatrix> out;
  for (std::size_t i = 0; i < size; ++i) out.push_back(matrix_from_json(j[i], where + "[" + std::to_string(i) + "]"));
  return out;
}

void check_dims(const std::vector<HermitianMatrix>& ms, int d, const std::string& where) {
  for (std::size_t i = 0; i < ms.size(); ++i)
    if (ms[i].dim() != d) throw InvalidInput(where + "[" + std::to_string(i) + "].d: differs from top-level d");
}

json matrix_array(const std::vector<HermitianMatrix>& ms) {
  json a = json::array();
  for (const auto& m : ms) a.push_back(to_json(m));
  return a;
}

} // namespace

json to_json(const HermitianMatrix& m) {
  json j;
  j["d"] = m.dim();
  j["re"] = grid(m.matrix().real());
  const Eigen::MatrixXd im = m.matrix().imag();
  if (!im.isZero(0.0)) j["im"] = grid(im);
  return j;
}

HermitianMatrix matrix_from_json(const json& j, const std::string& where) {
  const int d = positive_int(field(j, "d", where), where + ".d");
  ComplexMatrix m(d, d);
  m.real() = real_grid(field(j, "re", where), d, where + ".re");
  if (j.contains("im"))
    m.imag() = real_grid(j["im"], d, where + ".im");
  else
    m.imag().setZero();
  try {
    return HermitianMatrix(m, kIngestHermiticityTol);
  } catch (const InvalidInput& e) {
    throw InvalidInput(where + ": " + e.what());
  }
}

json to_json(const ObservableTuple& t) {
  return {{"g", t.g()}, {"d", t.d()}, {"components", matrix_array(t.components())}};
}

ObservableTuple tuple_from_json(const json& j) {
  const int g = positive_int(field(j, "g", "tuple"), "g");
  const int d = positive_int(field(j, "d", "tuple"), "d");
  auto comps = matrix_list(field(j, "components", "tuple"), "components", static_cast<std::size_t>(g));
  check_dims(comps, d, "components");
  return ObservableTuple(std::move(comps));
}

json to_json(const EffectTuple& e) {
  return {{"g", e.g()}, {"d", e.d()}, {"effects", matrix_array(e.effects())}};
}

EffectTuple effects_from_json(const json& j) {
  const int g = positive_int(field(j, "g", "effect tuple"), "g");
  const int d = positive_int(field(j, "d", "effect tuple"), "d");
  auto effects = matrix_list(field(j, "effects", "effect tuple"), "effects", static_cast<std::size_t>(g));
  check_dims(effects, d, "effects");
  return EffectTuple(std::move(effects));
}

json to_json(const GeneralPovmFamily& f) {
  json povms = json::array();
  for (const auto& p : f.povms()) povms.push_back(matrix_array(p));
  return {{"g", f.g()}, {"d", f.d()}, {"povms", std::move(povms)}};
}

GeneralPovmFamily povm_family_from_json(const json& j) {
  if (j.is_object() && j.contains("effects") && !j.contains("povms"))
    return GeneralPovmFamily::from_effects(effects_from_json(j));
  const int g = positive_int(field(j, "g", "POVM family"), "g");
  const int d = positive_int(field(j, "d", "POVM family"), "d");
  const json& povms = array(field(j, "povms", "POVM family"), "povms", static_cast<std::size_t>(g));
  std::vector<std::vector<HermitianMatrix>> out;
  for (std::size_t i = 0; i < povms.size(); ++i) {
    const std::string where = "povms[" + std::to_string(i) + "]";
    if (!povms[i].is_array() || povms[i].empty()) throw InvalidInput(where + ": expected a nonempty array");
    auto p = matrix_list(povms[i], where, povms[i].size());
    check_dims(p, d, where);
    out.push_back(std::move(p));
  }
  return GeneralPovmFamily(std::move(out));
}

json to_json(const JointPovm& joint) {
  json outcomes = json::array();
  for (std::size_t l = 0; l < joint.operators.size(); ++l)
    outcomes.push_back({{"label", joint.labels[l]}, {"operator", to_json(joint.operators[l])}});
  const int g = joint.labels.empty() ? 0 : static_cast<int>(joint.labels.front().size());
  return {{"g", g}, {"d", joint.d()}, {"kind", to_string(joint.kind)}, {"outcomes", std::move(outcomes)}};
}

JointPovm joint_from_json(const json& j) {
  const int g = positive_int(field(j, "g", "joint POVM"), "g");
  const int d = positive_int(field(j, "d", "joint POVM"), "d");
  const json& kind = field(j, "kind", "joint POVM");
  JointPovm joint;
  if (kind == "signs")
    joint.kind = JointLabelKind::Signs;
  else if (kind == "outcomes")
    joint.kind = JointLabelKind::Outcomes;
  else
    throw InvalidInput("kind: expected \"signs\" or \"outcomes\"");
  const json& outcomes = field(j, "outcomes", "joint POVM");
  if (!outcomes.is_array() || outcomes.empty()) throw InvalidInput("outcomes: expected a nonempty array");
  for (std::size_t l = 0; l < outcomes.size(); ++l) {
    const std::string where = "outcomes[" + std::to_string(l) + "]";
    const json& label = array(field(outcomes[l], "label", where), where + ".label", static_cast<std::size_t>(g));
    std::vector<int> lab;
    for (std::size_t i = 0; i < label.size(); ++i) {
      if (!label[i].is_number_integer()) throw InvalidInput(where + ".label[" + std::to_string(i) + "]: expected an integer");
      lab.push_back(label[i].get<int>());
    }
    HermitianMatrix op = matrix_from_json(field(outcomes[l], "operator", where), where + ".operator");
    if (op.dim() != d) throw InvalidInput(where + ".operator.d: differs from top-level d");
    joint.labels.push_back(std::move(lab));
    joint.operators.push_back(std::move(op));
  }
  return joint;
}

json to_json(const WitnessCertificate& w) {
  return {{"g", w.components.g()},
          {"d", w.components.d()},
          {"state", to_json(w.state.matrix())},
          {"components", matrix_array(w.components.components())},
          {"value", w.value}};
}

WitnessCertificate witness_from_json(const json& j) {
  const int g = positive_int(field(j, "g", "witness"), "g");
  const int d = positive_int(field(j, "d", "witness"), "d");
  WitnessCertificate w;
  const HermitianMatrix rho = matrix_from_json(field(j, "state", "witness"), "state");
  if (rho.dim() != d) throw InvalidInput("state.d: differs from top-level d");
  try {
    w.state = DensityMatrix(rho);
  } catch (const InvalidInput& e) {
    throw InvalidInput(std::string("state: ") + e.what());
  }
  auto comps = matrix_list(field(j, "components", "witness"), "components", static_cast<std::size_t>(g));
  check_dims(comps, d, "components");
  w.components = ObservableTuple(std::move(comps));
  w.value = number(field(j, "value", "witness"), "value");
  return w;
}

json to_json(const CompatDecomposition& dec) {
  const int g = dec.signs.empty() ? 0 : static_cast<int>(dec.signs.front().size());
  const int d = dec.blocks.empty() ? 0 : dec.blocks.front().dim();
  return {{"g", g}, {"d", d}, {"signs", dec.signs}, {"blocks", matrix_array(dec.blocks)}, {"value", dec.value}};
}

CompatDecomposition decomposition_from_json(const json& j) {
  const int g = positive_int(field(j, "g", "decomposition"), "g");
  const int d = positive_int(field(j, "d", "decomposition"), "d");
  const json& signs = field(j, "signs", "decomposition");
  if (!signs.is_array() || signs.empty()) throw InvalidInput("signs: expected a nonempty array");
  CompatDecomposition dec;
  for (std::size_t l = 0; l < signs.size(); ++l) {
    const std::string where = "signs[" + std::to_string(l) + "]";
    array(signs[l], where, static_cast<std::size_t>(g));
    std::vector<int> eps;
    for (const auto& v : signs[l]) {
      if (v != 1 && v != -1) throw InvalidInput(where + ": entries must be +1 or -1");
      eps.push_back(v.get<int>());
    }
    dec.signs.push_back(std::move(eps));
  }
  dec.blocks = matrix_list(field(j, "blocks", "decomposition"), "blocks", signs.size());
  check_dims(dec.blocks, d, "blocks");
  dec.value = number(field(j, "value", "decomposition"), "value");
  return dec;
}

json to_json(const L1MinDecomposition& dec) {
  const int d = dec.positives.empty() ? 0 : dec.positives.front().dim();
  return {{"g", dec.positives.size()},
          {"d", d},
          {"positives", matrix_array(dec.positives)},
          {"negatives", matrix_array(dec.negatives)},
          {"value", dec.value}};
}

L1MinDecomposition l1_decomposition_from_json(const json& j) {
  const int g = positive_int(field(j, "g", "decomposition"), "g");
  const int d = positive_int(field(j, "d", "decomposition"), "d");
  L1MinDecomposition dec;
  dec.positives = matrix_list(field(j, "positives", "decomposition"), "positives", static_cast<std::size_t>(g));
  dec.negatives = matrix_list(field(j, "negatives", "decomposition"), "negatives", static_cast<std::size_t>(g));
  check_dims(dec.positives, d, "positives");
  check_dims(dec.negatives, d, "negatives");
  dec.value = number(field(j, "value", "decomposition"), "value");
  return dec;
}

DensityMatrix state_from_json(const json& j) {
  const HermitianMatrix rho = matrix_from_json(j, "state");
  try {
    return DensityMatrix(rho);
  } catch (const InvalidInput& e) {
    throw InvalidInput(std::string("state: ") + e.what());
  }
}

json to_json(const PhaseCell& c) {
  return {{"g", c.g},
          {"d", c.d},
          {"classification", to_string(c.classification)},
          {"tau_star", c.tau_star},
          {"g_tau_sq", c.g_tau_sq}};
}

json read_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw InvalidInput(path.string() + ": cannot open file");
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw InvalidInput(path.string() + ": " + e.what());
  }
}

void write_file(const std::filesystem::path& path, const json& j) {
  std::ofstream out(path);
  if (!out) throw InvalidInput(path.string() + ": cannot write file");
  out << j.dump(2) << '\n';
  if (!out) throw InvalidInput(path.string() + ": write failed");
}

std::string fnv1a64_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InvalidInput(path.string() + ": cannot open file");
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (std::istreambuf_iterator<char> it(in), end; it != end; ++it) {
    h ^= static_cast<unsigned char>(*it);
    h *= 0x100000001b3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

} // namespace qcompat::io
