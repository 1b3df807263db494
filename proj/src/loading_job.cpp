#include "fraudcc/loading_job.hpp"

#include <cctype>
#include <fstream>
#include <map>
#include <optional>
#include <regex>
#include <variant>

#include "fraudcc/csv.hpp"

namespace fraudcc {

LoadReport& LoadReport::operator+=(const LoadReport& other) {
  records_read += other.records_read;
  vertices_upserted += other.vertices_upserted;
  edges_inserted += other.edges_inserted;
  rejected.insert(rejected.end(), other.rejected.begin(), other.rejected.end());
  return *this;
}

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

bool all_digits(std::string_view s) {
  if (s.empty()) return false;
  for (char c : s) {
    if (c < '0' || c > '9') return false;
  }
  return true;
}

std::string unquote(std::string_view s, char q) {
  if (s.size() >= 2 && s.front() == q && s.back() == q) return std::string(s.substr(1, s.size() - 2));
  return std::string(s);
}

}  // namespace

FieldRef FieldRef::parse(std::string_view spelling) {
  std::string_view s = trim(spelling);
  FieldRef ref;
  if (s.empty()) throw std::invalid_argument("empty field reference");
  if (s == "_") return ref;
  if (s.front() == '$') {
    s.remove_prefix(1);
    if (all_digits(s)) {
      ref.kind = Kind::Position;
      ref.position = std::stoull(std::string(s));
      return ref;
    }
    ref.kind = Kind::Name;
    ref.text = unquote(s, '"');
    if (ref.text.empty()) throw std::invalid_argument("empty field name in reference");
    return ref;
  }
  if (s.front() == '\'') {
    ref.kind = Kind::Literal;
    ref.text = unquote(s, '\'');
    return ref;
  }
  ref.kind = Kind::Name;
  ref.text = unquote(s, '"');
  return ref;
}

std::string FieldRef::spelling() const {
  switch (kind) {
    case Kind::Position: return "$" + std::to_string(position);
    case Kind::Name: return "$\"" + text + "\"";
    case Kind::Literal: return "'" + text + "'";
    case Kind::Skip: return "_";
  }
  return "_";
}

MapStatement parse_map_statement(std::string_view text) {
  static const std::regex re(R"(^\s*TO\s+(VERTEX|EDGE)\s+([A-Za-z_][A-Za-z0-9_]*)\s+VALUES\s*\((.*)\)\s*,?\s*$)",
                             std::regex::icase);
  std::string s(text);
  std::smatch m;
  if (!std::regex_match(s, m, re)) throw std::invalid_argument("bad map statement: " + s);
  MapStatement st;
  std::string kind = m[1].str();
  for (auto& c : kind) c = static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
  st.target_kind = kind == "VERTEX" ? TargetKind::Vertex : TargetKind::Edge;
  st.target = m[2].str();
  // Split on commas outside quotes.
  const std::string args = m[3].str();
  std::string cur;
  char quote = 0;
  for (char c : args) {
    if (quote) {
      if (c == quote) quote = 0;
      cur.push_back(c);
    } else if (c == '"' || c == '\'') {
      quote = c;
      cur.push_back(c);
    } else if (c == ',') {
      st.bindings.push_back(FieldRef::parse(cur));
      cur.clear();
    } else {
      cur.push_back(c);
    }
  }
  if (!trim(cur).empty() || !st.bindings.empty()) st.bindings.push_back(FieldRef::parse(cur));
  return st;
}

LoadingJob loading_job_from_json(const nlohmann::json& j) {
  LoadingJob job;
  job.name = j.value("name", std::string("job"));
  const std::string format = j.value("format", std::string("csv"));
  if (format == "csv") {
    job.format = SourceFormat::Csv;
  } else if (format == "jsonl" || format == "json") {
    job.format = SourceFormat::Jsonl;
  } else {
    throw std::invalid_argument("unknown source format: " + format);
  }
  job.header = j.value("header", false);
  const std::string sep = j.value("separator", std::string(","));
  if (sep.size() != 1) throw std::invalid_argument("separator must be one character");
  job.separator = sep[0];
  job.file = j.value("file", std::string());
  for (const auto& s : j.at("statements")) {
    if (s.is_string()) {
      job.statements.push_back(parse_map_statement(s.get<std::string>()));
      continue;
    }
    MapStatement st;
    if (s.contains("to_vertex")) {
      st.target_kind = TargetKind::Vertex;
      st.target = s.at("to_vertex").get<std::string>();
    } else if (s.contains("to_edge")) {
      st.target_kind = TargetKind::Edge;
      st.target = s.at("to_edge").get<std::string>();
    } else {
      throw std::invalid_argument("statement needs to_vertex or to_edge");
    }
    for (const auto& v : s.at("values")) st.bindings.push_back(FieldRef::parse(v.get<std::string>()));
    job.statements.push_back(std::move(st));
  }
  return job;
}

nlohmann::json to_json(const LoadingJob& job) {
  nlohmann::json j;
  j["name"] = job.name;
  j["format"] = job.format == SourceFormat::Csv ? "csv" : "jsonl";
  j["header"] = job.header;
  j["separator"] = std::string(1, job.separator);
  if (!job.file.empty()) j["file"] = job.file;
  auto& statements = j["statements"] = nlohmann::json::array();
  for (const auto& st : job.statements) {
    nlohmann::json s;
    s[st.target_kind == TargetKind::Vertex ? "to_vertex" : "to_edge"] = st.target;
    auto& values = s["values"] = nlohmann::json::array();
    for (const auto& b : st.bindings) values.push_back(b.spelling());
    statements.push_back(std::move(s));
  }
  return j;
}

void check_job(const PropertyGraph& g, const LoadingJob& job) {
  for (const auto& st : job.statements) {
    std::size_t expected = 0;
    if (st.target_kind == TargetKind::Vertex) {
      auto t = g.vertex_type_id(st.target);
      if (!t) throw SchemaError("job " + job.name + ": unknown vertex type " + st.target);
      expected = 1 + g.vertex_type(*t).attributes.size();
    } else {
      auto t = g.edge_type_id(st.target);
      if (!t) throw SchemaError("job " + job.name + ": unknown edge type " + st.target);
      expected = 2 + g.edge_type(*t).attributes.size();
    }
    if (st.bindings.size() != expected) {
      throw SchemaError("job " + job.name + ": " + st.target + " takes " + std::to_string(expected) +
                        " values, got " + std::to_string(st.bindings.size()));
    }
    const std::size_t key_fields = st.target_kind == TargetKind::Vertex ? 1 : 2;
    for (std::size_t i = 0; i < st.bindings.size(); ++i) {
      const auto& b = st.bindings[i];
      if (i < key_fields && b.kind == FieldRef::Kind::Skip) {
        throw SchemaError("job " + job.name + ": key of " + st.target + " cannot be skipped");
      }
      if (b.kind == FieldRef::Kind::Position && job.format == SourceFormat::Jsonl) {
        throw SchemaError("job " + job.name + ": positional reference in a JSONL job");
      }
      if (b.kind == FieldRef::Kind::Name && job.format == SourceFormat::Csv && !job.header) {
        throw SchemaError("job " + job.name + ": by-name reference needs a CSV header");
      }
    }
  }
}

namespace {

/// One source record viewed as text fields.
class RecordView {
 public:
  RecordView(const std::vector<std::string>* fields, const std::map<std::string, std::size_t>* header)
      : fields_(fields), header_(header) {}
  explicit RecordView(const nlohmann::json* object) : object_(object) {}

  /// nullopt when the field is absent.
  std::optional<std::string> get(const FieldRef& ref) const {
    switch (ref.kind) {
      case FieldRef::Kind::Literal: return ref.text;
      case FieldRef::Kind::Skip: return std::nullopt;
      case FieldRef::Kind::Position:
        if (!fields_ || ref.position >= fields_->size()) return std::nullopt;
        return (*fields_)[ref.position];
      case FieldRef::Kind::Name:
        if (object_) return from_json(ref.text);
        if (header_) {
          auto it = header_->find(ref.text);
          if (it == header_->end() || it->second >= fields_->size()) return std::nullopt;
          return (*fields_)[it->second];
        }
        return std::nullopt;
    }
    return std::nullopt;
  }

 private:
  std::optional<std::string> from_json(const std::string& name) const {
    auto it = object_->find(name);
    if (it == object_->end() || it->is_null()) return std::nullopt;
    if (it->is_string()) return it->get<std::string>();
    if (it->is_number_integer()) return std::to_string(it->get<std::int64_t>());
    if (it->is_boolean()) return it->get<bool>() ? "true" : "false";
    return it->dump();
  }

  const std::vector<std::string>* fields_ = nullptr;
  const std::map<std::string, std::size_t>* header_ = nullptr;
  const nlohmann::json* object_ = nullptr;
};

struct ResolvedStatement {
  std::variant<VertexRecord, EdgeRecord> element;
};

std::optional<std::string> bind_attributes(const std::vector<AttributeDecl>& decls,
                                           const std::vector<FieldRef>& bindings,
                                           std::size_t first, const RecordView& rec,
                                           std::map<std::string, Scalar>& out) {
  for (std::size_t i = 0; i < decls.size(); ++i) {
    const auto& ref = bindings[first + i];
    if (ref.kind == FieldRef::Kind::Skip) continue;
    auto text = rec.get(ref);
    if (!text) return "missing field " + ref.spelling();
    if (text->empty() && decls[i].kind != ScalarKind::String) continue;
    auto value = scalar_from_text(*text, decls[i].kind);
    if (!value) {
      return "field " + ref.spelling() + " is not a valid " + std::string(kind_name(decls[i].kind)) +
             ": '" + *text + "'";
    }
    out.emplace(decls[i].name, std::move(*value));
  }
  return std::nullopt;
}

std::optional<std::string> resolve_key(const FieldRef& ref, const RecordView& rec, std::string& key) {
  auto text = rec.get(ref);
  if (!text) return "missing key field " + ref.spelling();
  if (text->empty()) return "empty key field " + ref.spelling();
  key = std::move(*text);
  return std::nullopt;
}

/// Resolves all statements of one record; returns an error string on the
/// first failure.
std::optional<std::string> resolve(const PropertyGraph& g, const LoadingJob& job,
                                   const RecordView& rec, std::vector<ResolvedStatement>& out) {
  out.clear();
  for (const auto& st : job.statements) {
    if (st.target_kind == TargetKind::Vertex) {
      const TypeId t = *g.vertex_type_id(st.target);
      const auto& decl = g.vertex_type(t);
      VertexRecord v;
      v.ref.type_name = decl.name;
      if (auto err = resolve_key(st.bindings[0], rec, v.ref.key)) return err;
      if (auto err = bind_attributes(decl.attributes, st.bindings, 1, rec, v.attributes)) return err;
      out.push_back({std::move(v)});
    } else {
      const TypeId t = *g.edge_type_id(st.target);
      const auto& decl = g.edge_type(t);
      EdgeRecord e;
      e.edge_type = decl.name;
      e.from.type_name = g.vertex_type(g.require_vertex_type(decl.from_type)).name;
      e.to.type_name = g.vertex_type(g.require_vertex_type(decl.to_type)).name;
      if (auto err = resolve_key(st.bindings[0], rec, e.from.key)) return err;
      if (auto err = resolve_key(st.bindings[1], rec, e.to.key)) return err;
      if (auto err = bind_attributes(decl.attributes, st.bindings, 2, rec, e.attributes)) return err;
      out.push_back({std::move(e)});
    }
  }
  return std::nullopt;
}

void apply(PropertyGraph& g, std::vector<ResolvedStatement>& resolved, LoadReport& report) {
  for (auto& r : resolved) {
    if (auto* v = std::get_if<VertexRecord>(&r.element)) {
      g.upsert_vertex(*v);
      ++report.vertices_upserted;
    } else {
      g.insert_edge(std::get<EdgeRecord>(r.element));
      ++report.edges_inserted;
    }
  }
}

}  // namespace

LoadReport run_loading_job(PropertyGraph& g, const LoadingJob& job, std::istream& source) {
  check_job(g, job);
  if (!source) throw IoError("unreadable source for job " + job.name);

  LoadReport report;
  std::vector<ResolvedStatement> resolved;

  if (job.format == SourceFormat::Jsonl) {
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(source, line)) {
      ++line_no;
      if (!line.empty() && line.back() == '\r') line.pop_back();
      if (line.find_first_not_of(" \t") == std::string::npos) continue;
      ++report.records_read;
      nlohmann::json obj = nlohmann::json::parse(line, nullptr, false);
      if (obj.is_discarded() || !obj.is_object()) {
        report.rejected.push_back({line_no, "not a JSON object"});
        continue;
      }
      RecordView view(&obj);
      if (auto err = resolve(g, job, view, resolved)) {
        report.rejected.push_back({line_no, *err});
        continue;
      }
      apply(g, resolved, report);
    }
    if (source.bad()) throw IoError("read error in job " + job.name);
    return report;
  }

  CsvReader reader(source, job.separator);
  CsvRecord rec;
  std::map<std::string, std::size_t> header;
  bool header_pending = job.header;
  while (reader.next(rec)) {
    if (header_pending) {
      header_pending = false;
      for (std::size_t i = 0; i < rec.fields.size(); ++i) header.emplace(rec.fields[i], i);
      continue;
    }
    ++report.records_read;
    if (!rec.error.empty()) {
      report.rejected.push_back({rec.line, rec.error});
      continue;
    }
    RecordView view(&rec.fields, job.header ? &header : nullptr);
    if (auto err = resolve(g, job, view, resolved)) {
      report.rejected.push_back({rec.line, *err});
      continue;
    }
    apply(g, resolved, report);
  }
  if (source.bad()) throw IoError("read error in job " + job.name);
  return report;
}

LoadReport run_loading_job(PropertyGraph& g, const LoadingJob& job,
                           const std::filesystem::path& path) {
  check_job(g, job);
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string() + " for job " + job.name);
  return run_loading_job(g, job, in);
}

}  // namespace fraudcc
