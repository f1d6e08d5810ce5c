// Copyright 2026 The vgrass Authors
// SPDX-License-Identifier: Apache-2.0

#include "vgrass/io.hpp"

#include <fstream>

namespace vgrass {

namespace {

std::string rat_string(const mpq_class& q) {
  if (q.get_den() == 1) return q.get_num().get_str();
  return q.get_num().get_str() + "/" + q.get_den().get_str();
}

mpq_class rat_parse(const Json& j) {
  if (j.is_number_integer()) return mpq_class(mpz_class(std::to_string(j.get<long long>())));
  if (!j.is_string()) throw IoError("expected a rational string, got " + j.dump());
  mpq_class q;
  if (q.set_str(j.get<std::string>(), 10) != 0 || q.get_den() == 0) throw IoError("bad rational " + j.dump());
  q.canonicalize();
  return q;
}

Json poly_json(const std::vector<mpq_class>& c) {
  Json out = Json::array();
  for (size_t i = 0; i < c.size(); ++i)
    if (c[i] != 0) out.push_back(Json::array({static_cast<long long>(i), rat_string(c[i])}));
  return out;
}

std::vector<mpq_class> poly_parse(const Json& j) {
  std::vector<mpq_class> c;
  if (j.is_null()) return c;
  for (const Json& term : j) {
    if (!term.is_array() || term.size() != 2) throw IoError("bad trig term " + term.dump());
    long long i = term[0].get<long long>();
    if (i < 0) throw IoError("negative power in trig term");
    if (static_cast<size_t>(i) >= c.size()) c.resize(i + 1);
    c[i] += rat_parse(term[1]);
  }
  return c;
}

const Json& field(const Json& j, const char* key) {
  if (!j.is_object() || !j.contains(key)) throw IoError(std::string("missing field \"") + key + "\"");
  return j.at(key);
}

Json pad_json(const Pad& p) {
  return {{"kind", p.kind == PadKind::Zero ? "zero" : "one"}, {"set", shape_to_json(p.set)}};
}

Pad pad_parse(const Json& j) {
  std::string k = field(j, "kind").get<std::string>();
  if (k != "zero" && k != "one") throw IoError("pad kind must be zero or one");
  return {k == "zero" ? PadKind::Zero : PadKind::One, shape_from_json(field(j, "set"))};
}

}  // namespace

Json scalar_to_json(const Scalar& x) {
  return std::visit(
      [](const auto& v) -> Json {
        using T = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<T, mpz_class>) return v.get_str();
        else if constexpr (std::is_same_v<T, mpq_class>) return rat_string(v);
        else if constexpr (std::is_same_v<T, TrigPoly>) return {{"c", poly_json(v.c)}, {"ct", poly_json(v.ct)}};
        else if constexpr (std::is_same_v<T, double>) return v;
        else {
          Json e = Json::array();
          for (const Scalar& s : v.e) e.push_back(scalar_to_json(s));
          return {{"n", v.n}, {"e", e}};
        }
      },
      x.payload());
}

Scalar scalar_from_json(const Json& j, const Ring& ring) {
  Scalar out;
  switch (ring.kind()) {
    case RingKind::Integers: {
      mpq_class q = rat_parse(j);
      if (q.get_den() != 1) throw IoError("non-integer value " + j.dump() + " for ring Z");
      out = Scalar(mpz_class(q.get_num()));
      break;
    }
    case RingKind::Rationals: out = Scalar(rat_parse(j)); break;
    case RingKind::TrigQuot: {
      TrigPoly t;
      if (j.is_object()) {
        t.c = poly_parse(j.value("c", Json()));
        t.ct = poly_parse(j.value("ct", Json()));
      } else {
        t.c = {rat_parse(j)};
      }
      out = Scalar(normalize(t));
      break;
    }
    case RingKind::FloatTol:
      if (!j.is_number()) throw IoError("expected a number, got " + j.dump());
      out = Scalar(j.get<double>());
      break;
    case RingKind::MatrixRing: {
      MatPayload m;
      m.n = field(j, "n").get<int>();
      const Json& e = field(j, "e");
      if (m.n != ring.size() || e.size() != static_cast<size_t>(m.n * m.n)) throw IoError("matrix scalar has the wrong size");
      Ring base = ring.base();
      for (const Json& x : e) m.e.push_back(scalar_from_json(x, base));
      out = Scalar(std::move(m));
      break;
    }
  }
  if (!ring.contains(out)) throw IoError("value " + j.dump() + " is not in " + ring.name());
  return out;
}

Json ring_to_json(const Ring& r) {
  switch (r.kind()) {
    case RingKind::Integers: return "Z";
    case RingKind::Rationals: return "Q";
    case RingKind::TrigQuot: return "trig";
    case RingKind::FloatTol: return {{"float", r.tolerance()}};
    case RingKind::MatrixRing: return {{"matrix", r.size()}, {"base", ring_to_json(r.base())}};
  }
  throw IoError("unknown ring");
}

Ring ring_from_json(const Json& j) {
  if (j.is_string()) return ring_from_name(j.get<std::string>());
  if (j.is_object() && j.contains("float")) return Ring::floats(j.at("float").get<double>());
  if (j.is_object() && j.contains("matrix")) return Ring::matrix(ring_from_json(field(j, "base")), j.at("matrix").get<int>());
  throw IoError("bad ring " + j.dump());
}

Ring ring_from_name(const std::string& name) {
  if (name == "Z") return Ring::integers();
  if (name == "Q") return Ring::rationals();
  if (name == "trig") return Ring::trig();
  if (name == "float") return Ring::floats();
  if (name.rfind("float:", 0) == 0) {
    try {
      return Ring::floats(std::stod(name.substr(6)));
    } catch (const std::exception&) {
    }
  }
  throw IoError("unknown ring \"" + name + "\" (expected Z, Q, trig, float[:tol])");
}

Json shape_to_json(const IndexSet& s) {
  using N = IndexSet::Node;
  switch (s.node()) {
    case N::Finite: {
      Json labels = Json::array();
      for (const Atom& a : s.labels()) {
        if (auto* n = std::get_if<long long>(&a)) labels.push_back(*n);
        else labels.push_back(std::get<std::string>(a));
      }
      return {{"finite", labels}};
    }
    case N::TailN: return {{"tailN", s.tag()}};
    case N::TailZ: return {{"tailZ", s.tag()}};
    case N::Union: return {{"union", Json::array({shape_to_json(s.left()), shape_to_json(s.right())})}};
    case N::Product: return {{"product", Json::array({shape_to_json(s.left()), shape_to_json(s.right())})}};
  }
  throw IoError("bad index set");
}

IndexSet shape_from_json(const Json& j) {
  if (!j.is_object() || j.size() != 1) throw IoError("bad shape " + j.dump());
  const auto& [key, v] = *j.items().begin();
  if (key == "finite") {
    std::vector<Atom> labels;
    for (const Json& x : v) {
      if (x.is_number_integer()) labels.emplace_back(x.get<long long>());
      else if (x.is_string()) labels.emplace_back(x.get<std::string>());
      else throw IoError("finite labels are integers or strings");
    }
    return IndexSet::finite(std::move(labels));
  }
  if (key == "tailN") return IndexSet::tail_n(v.get<std::string>());
  if (key == "tailZ") return IndexSet::tail_z(v.get<std::string>());
  if ((key == "union" || key == "product") && v.is_array() && v.size() == 2) {
    IndexSet l = shape_from_json(v[0]), r = shape_from_json(v[1]);
    return key == "union" ? unite(l, r) : product(l, r);
  }
  throw IoError("bad shape " + j.dump());
}

Json index_to_json(const Index& i) {
  switch (i.kind) {
    case Index::Kind::At: return i.pos;
    case Index::Kind::Left: return Json::array({"L", index_to_json(i.sub[0])});
    case Index::Kind::Right: return Json::array({"R", index_to_json(i.sub[0])});
    case Index::Kind::Pair: return Json::array({index_to_json(i.sub[0]), index_to_json(i.sub[1])});
  }
  throw IoError("bad index");
}

Index index_from_json(const Json& j) {
  if (j.is_number_integer()) return Index::at(j.get<long long>());
  if (j.is_array() && j.size() == 2) {
    if (j[0] == "L") return Index::left(index_from_json(j[1]));
    if (j[0] == "R") return Index::right(index_from_json(j[1]));
    return Index::pair(index_from_json(j[0]), index_from_json(j[1]));
  }
  throw IoError("bad index path " + j.dump());
}

Json matrix_to_json(const Matrix& m) {
  Json symbols = Json::array();
  for (const auto& [key, lau] : m.symbols()) {
    Json diag = Json::array();
    for (const auto& [d, v] : lau) diag.push_back(Json::array({d, scalar_to_json(v)}));
    symbols.push_back({{"rt", key.first}, {"ct", key.second}, {"diag", diag}});
  }
  Json entries = Json::array();
  for (const auto& [key, v] : m.fin())
    entries.push_back(Json::array({index_to_json(index_at(m.rows(), key.row())),
                                   index_to_json(index_at(m.cols(), key.col())), scalar_to_json(v)}));
  return {{"rows", shape_to_json(m.rows())},
          {"cols", shape_to_json(m.cols())},
          {"ring", ring_to_json(m.ring())},
          {"symbols", symbols},
          {"entries", entries}};
}

Matrix matrix_from_json(const Json& j) {
  IndexSet rows = shape_from_json(field(j, "rows")), cols = shape_from_json(field(j, "cols"));
  Ring ring = ring_from_json(field(j, "ring"));
  Matrix m(rows, cols, ring);
  try {
    if (j.contains("scalar")) {
      Scalar lambda = scalar_from_json(j.at("scalar"), ring);
      if (!lambda.is_zero()) m += Matrix::scalar(rows, lambda, ring).with_shape(rows, cols);
    }
    for (const Json& s : j.value("symbols", Json::array())) {
      int rs = field(s, "rt").get<int>(), cs = field(s, "ct").get<int>();
      for (const Json& d : field(s, "diag")) m.add_symbol(rs, cs, d.at(0).get<long long>(), scalar_from_json(d.at(1), ring));
    }
    for (const Json& e : j.value("entries", Json::array())) {
      if (!e.is_array() || e.size() != 3) throw IoError("entries are [row, col, value]");
      m.add_entry(locate(rows, index_from_json(e[0])), locate(cols, index_from_json(e[1])), scalar_from_json(e[2], ring));
    }
  } catch (const nlohmann::json::exception& ex) {
    throw IoError(std::string("malformed matrix: ") + ex.what());
  }
  return m;
}

Json pair_to_json(const IdempotentPair& p) {
  return {{"space", shape_to_json(p.space)}, {"b", matrix_to_json(p.b)}, {"a", matrix_to_json(p.a)}};
}

IdempotentPair pair_from_json(const Json& j) {
  IndexSet space = shape_from_json(field(j, "space"));
  Matrix b = matrix_from_json(field(j, "b")), a = matrix_from_json(field(j, "a"));
  return IdempotentPair(b.with_shape(space, space), a.with_shape(space, space));
}

Json morphism_to_json(const Morphism& m) {
  return {{"psi", matrix_to_json(m.psi)},
          {"phi", matrix_to_json(m.phi)},
          {"psiInv", matrix_to_json(m.psi_inv)},
          {"phiInv", matrix_to_json(m.phi_inv)}};
}

Morphism morphism_from_json(const Json& j) {
  return Morphism::make(matrix_from_json(field(j, "psi")), matrix_from_json(field(j, "phi")),
                        matrix_from_json(field(j, "psiInv")), matrix_from_json(field(j, "phiInv")));
}

Json witness_to_json(const HomotopyWitness& w) {
  Json pl = Json::array(), pr = Json::array();
  for (const Pad& p : w.pads_lhs) pl.push_back(pad_json(p));
  for (const Pad& p : w.pads_rhs) pr.push_back(pad_json(p));
  return {{"name", w.name},         {"lhs", pair_to_json(w.lhs)}, {"rhs", pair_to_json(w.rhs)},
          {"padsL", pl},            {"padsR", pr},                {"conj", morphism_to_json(w.conj)}};
}

HomotopyWitness witness_from_json(const Json& j) {
  HomotopyWitness w;
  w.name = j.value("name", "");
  w.lhs = pair_from_json(field(j, "lhs"));
  w.rhs = pair_from_json(field(j, "rhs"));
  for (const Json& p : j.value("padsL", Json::array())) w.pads_lhs.push_back(pad_parse(p));
  for (const Json& p : j.value("padsR", Json::array())) w.pads_rhs.push_back(pad_parse(p));
  w.conj = morphism_from_json(field(j, "conj"));
  return w;
}

Json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path);
  try {
    return Json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    throw IoError(path + ": " + e.what());
  }
}

}  // namespace vgrass
