#include "lattice_calderon/io.hpp"

#include <fstream>
#include <iostream>
#include <map>
#include "json.hpp"
#include <sstream>

namespace lc {

using nlohmann::json;

namespace {

json complex_json(cdouble z) { return json{{"re", z.real()}, {"im", z.imag()}}; }

cdouble complex_from(const json& j, const std::string& where) {
  if (!j.is_object() || !j.contains("re") || !j.contains("im") || !j["re"].is_number() || !j["im"].is_number())
    throw ValidationError("expected {re, im} at " + where);
  return {j["re"].get<double>(), j["im"].get<double>()};
}

Paving paving_from(const json& j) {
  if (!j.is_array() || j.size() != 3) throw ValidationError("R must be an array of three sizes");
  for (const auto& r : j)
    if (!r.is_number_integer()) throw ValidationError("R entries must be integers");
  return Paving(j[0].get<int>(), j[1].get<int>(), j[2].get<int>());
}

json parse(const std::string& text) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    throw ValidationError(std::string("malformed JSON: ") + e.what());
  }
}

std::array<double, 3> real_triple(const json& j, const std::string& where) {
  if (!j.is_array() || j.size() != 3) throw ValidationError("expected three numbers at " + where);
  std::array<double, 3> out{};
  for (int c = 0; c < 3; ++c) {
    if (!j[c].is_number()) throw ValidationError("expected a number at " + where);
    out[c] = j[c].get<double>();
  }
  return out;
}

}  // namespace

std::string material_to_json(const MaterialTensor& m, cdouble lambda) {
  json j;
  j["R"] = {m.paving.R1, m.paving.R2, m.paving.R3};
  j["lambda"] = complex_json(lambda);
  j["background"] = {{"eps", m.eps0}, {"mu", m.mu0}};
  json sites = json::array();
  for (std::size_t i = 0; i < m.paving.volume(); ++i) {
    const Point3 n = m.paving.site(i);
    json e = json::array(), u = json::array();
    for (int c = 0; c < 3; ++c) {
      e.push_back(complex_json(m.eps[i][c]));
      u.push_back(complex_json(m.mu[i][c]));
    }
    sites.push_back({{"n", {n.n1, n.n2, n.n3}}, {"eps", e}, {"mu", u}});
  }
  j["sites"] = sites;
  return j.dump(1);
}

MaterialFile material_from_json(const std::string& text) {
  const json j = parse(text);
  if (!j.is_object() || !j.contains("R") || !j.contains("sites")) throw ValidationError("material file needs R and sites");
  MaterialFile out{MaterialTensor(paving_from(j["R"])), {1.0, 0.0}};
  MaterialTensor& m = out.material;
  if (j.contains("lambda")) out.lambda = complex_from(j["lambda"], "lambda");
  if (j.contains("background")) {
    const json& b = j["background"];
    if (!b.contains("eps") || !b.contains("mu")) throw ValidationError("background needs eps and mu");
    m.eps0 = real_triple(b["eps"], "background.eps");
    m.mu0 = real_triple(b["mu"], "background.mu");
  } else {
    std::cerr << "warning: material file has no background; using identity\n";
  }
  if (!j["sites"].is_array()) throw ValidationError("sites must be an array");
  std::vector<char> seen(m.paving.volume(), 0);
  for (const auto& s : j["sites"]) {
    if (!s.contains("n") || !s.contains("eps") || !s.contains("mu")) throw ValidationError("site needs n, eps and mu");
    const auto nn = s["n"];
    if (!nn.is_array() || nn.size() != 3) throw ValidationError("site coordinate must have three entries");
    const Point3 n{nn[0].get<int>(), nn[1].get<int>(), nn[2].get<int>()};
    const std::string where = "site " + point_string(n);
    if (!m.paving.contains(n)) throw ValidationError(where + " lies outside the paving");
    const std::size_t i = m.paving.linear_index(n);
    if (seen[i]) throw ValidationError(where + " listed twice");
    seen[i] = 1;
    if (!s["eps"].is_array() || s["eps"].size() != 3 || !s["mu"].is_array() || s["mu"].size() != 3)
      throw ValidationError(where + " needs three eps and three mu entries");
    for (int c = 0; c < 3; ++c) {
      m.eps[i][c] = complex_from(s["eps"][c], where);
      m.mu[i][c] = complex_from(s["mu"][c], where);
      if (m.eps[i][c] == cdouble(0) || m.mu[i][c] == cdouble(0)) throw ValidationError(where + " has a zero entry");
    }
  }
  for (std::size_t i = 0; i < seen.size(); ++i)
    if (!seen[i]) throw ValidationError("missing site " + point_string(m.paving.site(i)));
  return out;
}

void save_material(const std::string& path, const MaterialTensor& m, cdouble lambda) {
  write_text_file(path, material_to_json(m, lambda));
}

MaterialFile load_material(const std::string& path) { return material_from_json(read_text_file(path)); }

std::string dtn_to_json(const DtNMatrix& dtn) {
  json j;
  j["format"] = "lattice-calderon-dtn";
  j["basis"] = kBasisTag;
  j["R"] = {dtn.paving.R1, dtn.paving.R2, dtn.paving.R3};
  j["lambda"] = complex_json(dtn.lambda);
  j["n_adm"] = dtn.L.rows();
  json entries = json::array();
  for (Eigen::Index r = 0; r < dtn.L.rows(); ++r)
    for (Eigen::Index c = 0; c < dtn.L.cols(); ++c) entries.push_back({dtn.L(r, c).real(), dtn.L(r, c).imag()});
  j["entries"] = entries;
  return j.dump();
}

DtNMatrix dtn_from_json(const std::string& text) {
  const json j = parse(text);
  for (const char* key : {"basis", "R", "lambda", "n_adm", "entries"})
    if (!j.contains(key)) throw ValidationError(std::string("DtN file lacks ") + key);
  if (!j["basis"].is_string() || j["basis"].get<std::string>() != kBasisTag)
    throw ValidationError("DtN basis tag mismatch: expected " + std::string(kBasisTag));
  DtNMatrix dtn{paving_from(j["R"]), complex_from(j["lambda"], "lambda"), {}};
  const auto N = Eigen::Index(dtn.paving.admissible_dim());
  if (!j["n_adm"].is_number_integer() || j["n_adm"].get<long>() != long(N))
    throw ValidationError("DtN n_adm does not match the paving (expected " + std::to_string(N) + ")");
  const json& e = j["entries"];
  if (!e.is_array() || e.size() != std::size_t(N * N))
    throw ValidationError("DtN entry count does not match n_adm^2");
  dtn.L.resize(N, N);
  for (Eigen::Index r = 0; r < N; ++r)
    for (Eigen::Index c = 0; c < N; ++c) {
      const json& z = e[std::size_t(r * N + c)];
      if (!z.is_array() || z.size() != 2 || !z[0].is_number() || !z[1].is_number())
        throw ValidationError("DtN entry (" + std::to_string(r) + "," + std::to_string(c) + ") must be [re, im]");
      dtn.L(r, c) = {z[0].get<double>(), z[1].get<double>()};
    }
  return dtn;
}

void save_dtn(const std::string& path, const DtNMatrix& dtn) { write_text_file(path, dtn_to_json(dtn)); }

DtNMatrix load_dtn(const std::string& path) { return dtn_from_json(read_text_file(path)); }

std::string read_text_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot open " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_text_file(const std::string& path, const std::string& text) {
  std::ofstream out(path);
  if (!out) throw ValidationError("cannot write " + path);
  out << text << '\n';
  if (!out) throw ValidationError("write failed for " + path);
}

}  // namespace lc
