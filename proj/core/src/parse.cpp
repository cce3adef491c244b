#include "qtilt/parse.hpp"

#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>

#include "json.hpp"

namespace qtilt {

namespace {

using json = nlohmann::ordered_json;

json parse_json(const std::string& text) {
  try {
    return json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw ParseError("syntax error at byte " + std::to_string(e.byte) + ": " +
                     e.what());
  }
}

void require_keys(const json& obj, const std::string& where,
                  const std::vector<std::string>& required,
                  const std::vector<std::string>& optional = {}) {
  if (!obj.is_object()) throw ParseError(where + ": expected an object");
  for (const auto& [key, value] : obj.items()) {
    bool known = false;
    for (const std::string& k : required)
      if (k == key) { known = true; break; }
    for (const std::string& k : optional)
      if (k == key) { known = true; break; }
    if (!known) throw ParseError(where + ": unknown key \"" + key + "\"");
  }
  for (const std::string& k : required)
    if (!obj.contains(k)) throw ParseError(where + ": missing key \"" + k + "\"");
}

std::string get_string(const json& j, const std::string& where) {
  if (!j.is_string()) throw ParseError(where + ": expected a string");
  return j.get<std::string>();
}

long long get_integer(const json& j, const std::string& where) {
  if (!j.is_number_integer())
    throw ParseError(where + ": expected an integer");
  return j.get<long long>();
}

Field parse_field(const json& j) {
  if (j.is_string()) {
    if (j.get<std::string>() == "Q") return make_field(0);
    throw ParseError("field: expected \"Q\" or {\"GF\": p}");
  }
  if (j.is_object()) {
    require_keys(j, "field", {"GF"});
    return make_field(get_integer(j.at("GF"), "field.GF"));
  }
  throw ParseError("field: expected \"Q\" or {\"GF\": p}");
}

}  // namespace

Presentation parse_presentation(const std::string& text) {
  json j = parse_json(text);
  require_keys(j, "presentation",
               {"field", "vertices", "arrows", "relations", "nilpotency_bound"},
               {"compose"});

  Presentation pres;
  pres.field = parse_field(j.at("field"));

  bool reversed = false;
  if (j.contains("compose")) {
    std::string c = get_string(j.at("compose"), "compose");
    if (c == "right-to-left")
      reversed = true;
    else if (c != "left-to-right")
      throw ParseError("compose: expected \"left-to-right\" or \"right-to-left\"");
  }

  if (!j.at("vertices").is_array())
    throw ParseError("vertices: expected a list of names");
  std::map<std::string, int> vertex_index;
  for (const json& v : j.at("vertices")) {
    std::string name = get_string(v, "vertices");
    if (vertex_index.count(name))
      throw ParseError("vertices: duplicate name \"" + name + "\"");
    vertex_index[name] = static_cast<int>(pres.quiver.vertices.size());
    pres.quiver.vertices.push_back(std::move(name));
  }

  if (!j.at("arrows").is_array())
    throw ParseError("arrows: expected a list");
  std::map<std::string, int> arrow_index;
  for (const json& a : j.at("arrows")) {
    std::string where = "arrows[" + std::to_string(pres.quiver.arrows.size()) + "]";
    require_keys(a, where, {"name", "from", "to"});
    Arrow arrow;
    arrow.name = get_string(a.at("name"), where + ".name");
    std::string from = get_string(a.at("from"), where + ".from");
    std::string to = get_string(a.at("to"), where + ".to");
    auto fi = vertex_index.find(from);
    if (fi == vertex_index.end())
      throw ParseError(where + ".from: unknown vertex \"" + from + "\"");
    auto ti = vertex_index.find(to);
    if (ti == vertex_index.end())
      throw ParseError(where + ".to: unknown vertex \"" + to + "\"");
    arrow.from = fi->second;
    arrow.to = ti->second;
    if (arrow_index.count(arrow.name))
      throw ParseError(where + ".name: duplicate arrow \"" + arrow.name + "\"");
    arrow_index[arrow.name] = static_cast<int>(pres.quiver.arrows.size());
    pres.quiver.arrows.push_back(std::move(arrow));
  }

  if (!j.at("relations").is_array())
    throw ParseError("relations: expected a list of relation term lists");
  int ri = 0;
  for (const json& rel : j.at("relations")) {
    std::string rwhere = "relations[" + std::to_string(ri++) + "]";
    if (!rel.is_array())
      throw ParseError(rwhere + ": expected a list of terms");
    Relation relation;
    int ti = 0;
    for (const json& term : rel) {
      std::string twhere = rwhere + "[" + std::to_string(ti++) + "]";
      require_keys(term, twhere, {"coeff", "path"});
      RelTerm t;
      try {
        t.coeff = pres.field.parse(get_string(term.at("coeff"), twhere + ".coeff"));
      } catch (const FieldError& e) {
        throw ParseError(twhere + ".coeff: " + e.what());
      }
      const json& path = term.at("path");
      if (path.is_object()) {
        require_keys(path, twhere + ".path", {"vertex"});
        throw AlgebraError(twhere +
                           ".path: trivial paths are not admissible in relations");
      }
      if (!path.is_array())
        throw ParseError(twhere + ".path: expected a list of arrow names");
      for (const json& step : path) {
        std::string name = get_string(step, twhere + ".path");
        auto it = arrow_index.find(name);
        if (it == arrow_index.end())
          throw ParseError(twhere + ".path: unknown arrow \"" + name + "\"");
        t.word.push_back(it->second);
      }
      if (reversed) std::reverse(t.word.begin(), t.word.end());
      relation.terms.push_back(std::move(t));
    }
    pres.relations.push_back(std::move(relation));
  }

  long long bound = get_integer(j.at("nilpotency_bound"), "nilpotency_bound");
  if (bound < 1 || bound > 1000000)
    throw ParseError("nilpotency_bound: expected an integer between 1 and 1000000");
  pres.nilpotency_bound = static_cast<int>(bound);
  return pres;
}

namespace {

json field_to_json(const Field& F) {
  if (F.rational()) return json("Q");
  json out = json::object();
  out["GF"] = F.p;
  return out;
}

}  // namespace

std::string emit_presentation(const Presentation& pres) {
  json j;
  j["field"] = field_to_json(pres.field);
  j["compose"] = "left-to-right";
  j["vertices"] = pres.quiver.vertices;
  json arrows = json::array();
  for (const Arrow& a : pres.quiver.arrows) {
    json arrow;
    arrow["name"] = a.name;
    arrow["from"] = pres.quiver.vertices[a.from];
    arrow["to"] = pres.quiver.vertices[a.to];
    arrows.push_back(std::move(arrow));
  }
  j["arrows"] = std::move(arrows);
  json relations = json::array();
  for (const Relation& rel : pres.relations) {
    json terms = json::array();
    for (const RelTerm& t : rel.terms) {
      json term;
      term["coeff"] = pres.field.to_string(t.coeff);
      json path = json::array();
      for (int a : t.word) path.push_back(pres.quiver.arrows[a].name);
      term["path"] = std::move(path);
      terms.push_back(std::move(term));
    }
    relations.push_back(std::move(terms));
  }
  j["relations"] = std::move(relations);
  j["nilpotency_bound"] = pres.nilpotency_bound;
  return j.dump(2) + "\n";
}

Representation parse_module(const std::string& text, AlgebraPtr A) {
  json j = parse_json(text);
  require_keys(j, "module", {"algebra", "dims", "maps"});
  get_string(j.at("algebra"), "algebra");

  const Quiver& Q = A->quiver();
  Field F = A->field();
  const json& jd = j.at("dims");
  if (!jd.is_object()) throw ParseError("dims: expected a map vertex -> integer");
  std::vector<int> dims(Q.vertices.size(), -1);
  for (const auto& [name, value] : jd.items()) {
    int v = Q.vertex_index(name);
    if (v < 0) throw ParseError("dims: unknown vertex \"" + name + "\"");
    long long d = get_integer(value, "dims." + name);
    if (d < 0 || d > 100000)
      throw ParseError("dims." + name + ": expected a nonnegative integer");
    dims[v] = static_cast<int>(d);
  }
  for (std::size_t v = 0; v < dims.size(); ++v)
    if (dims[v] < 0)
      throw ParseError("dims: missing vertex \"" + Q.vertices[v] + "\"");

  const json& jm = j.at("maps");
  if (!jm.is_object()) throw ParseError("maps: expected a map arrow -> matrix");
  std::vector<Matrix> maps(Q.arrows.size());
  std::vector<char> seen(Q.arrows.size(), 0);
  for (const auto& [name, value] : jm.items()) {
    int a = Q.arrow_index(name);
    if (a < 0) throw ParseError("maps: unknown arrow \"" + name + "\"");
    seen[a] = 1;
    int rows = dims[Q.arrows[a].to];
    int cols = dims[Q.arrows[a].from];
    std::string where = "maps." + name;
    if (!value.is_array() || static_cast<int>(value.size()) != rows)
      throw ParseError(where + ": expected " + std::to_string(rows) + " rows");
    Matrix m(F, rows, cols);
    for (int r = 0; r < rows; ++r) {
      const json& row = value.at(r);
      if (!row.is_array() || static_cast<int>(row.size()) != cols)
        throw ParseError(where + " row " + std::to_string(r) + ": expected " +
                         std::to_string(cols) + " entries");
      for (int c = 0; c < cols; ++c) {
        try {
          m.at(r, c) = F.parse(get_string(row.at(c), where));
        } catch (const FieldError& e) {
          throw ParseError(where + "[" + std::to_string(r) + "][" +
                           std::to_string(c) + "]: " + e.what());
        }
      }
    }
    maps[a] = std::move(m);
  }
  for (std::size_t a = 0; a < seen.size(); ++a)
    if (!seen[a])
      throw ParseError("maps: missing arrow \"" + Q.arrows[a].name + "\"");

  // user data must define a module: every relation has to act as zero
  for (const Relation& rel : A->presentation().relations) {
    int src = Q.arrows[rel.terms[0].word.front()].from;
    int tgt = Q.arrows[rel.terms[0].word.back()].to;
    Matrix acc(F, dims[tgt], dims[src]);
    for (const RelTerm& t : rel.terms) {
      Matrix w = Matrix::identity(F, dims[src]);
      for (int a : t.word) w = mul(maps[a], w);
      acc = add(acc, scale(t.coeff, w));
    }
    if (!acc.is_zero())
      throw AlgebraError("maps: a defining relation does not act as zero");
  }
  return make_representation(std::move(A), std::move(dims), std::move(maps));
}

std::string emit_module(const Representation& M, const std::string& algebra_path) {
  const Quiver& Q = M.A->quiver();
  Field F = M.A->field();
  json j;
  j["algebra"] = algebra_path;
  json dims = json::object();
  for (std::size_t v = 0; v < Q.vertices.size(); ++v)
    dims[Q.vertices[v]] = M.dims[v];
  j["dims"] = std::move(dims);
  json maps = json::object();
  for (std::size_t a = 0; a < Q.arrows.size(); ++a) {
    json rows = json::array();
    for (int r = 0; r < M.maps[a].rows(); ++r) {
      json row = json::array();
      for (int c = 0; c < M.maps[a].cols(); ++c)
        row.push_back(F.to_string(M.maps[a].at(r, c)));
      rows.push_back(std::move(row));
    }
    maps[Q.arrows[a].name] = std::move(rows);
  }
  j["maps"] = std::move(maps);
  return j.dump(2) + "\n";
}

std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot open file: " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_text_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw InputError("cannot write file: " + path);
  out << text;
}

Presentation load_presentation_file(const std::string& path) {
  return parse_presentation(read_text_file(path));
}

Representation load_module_file(const std::string& path) {
  std::string text = read_text_file(path);
  json j = parse_json(text);
  require_keys(j, "module", {"algebra", "dims", "maps"});
  std::string ref = get_string(j.at("algebra"), "algebra");
  std::filesystem::path resolved(ref);
  if (resolved.is_relative())
    resolved = std::filesystem::path(path).parent_path() / resolved;
  AlgebraPtr A = complete_algebra(load_presentation_file(resolved.string()));
  return parse_module(text, std::move(A));
}

}  // namespace qtilt
