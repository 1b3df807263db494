#pragma once

#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "fraudcc/graph.hpp"

namespace fraudcc {

enum class SourceFormat { Csv, Jsonl };

/// One VALUES(...) entry. Spellings accepted in job files:
///   $0, $1 ...       zero-based column position
///   $"name", $name   field by name (JSONL key or CSV header)
///   name             field by name, as written in GSQL loading jobs
///   'text'           literal constant
///   _                skip (leave the attribute unset)
struct FieldRef {
  enum class Kind { Position, Name, Literal, Skip };
  Kind kind = Kind::Skip;
  std::size_t position = 0;
  std::string text;

  static FieldRef parse(std::string_view spelling);
  std::string spelling() const;
};

enum class TargetKind { Vertex, Edge };

/// Vertex targets bind (key, attributes...) and edge targets bind
/// (from-key, to-key, attributes...), both in declaration order.
struct MapStatement {
  TargetKind target_kind = TargetKind::Vertex;
  std::string target;
  std::vector<FieldRef> bindings;
};

struct LoadingJob {
  std::string name;
  SourceFormat format = SourceFormat::Csv;
  bool header = false;
  char separator = ',';
  std::string file;  // default file binding, relative to the data directory
  std::vector<MapStatement> statements;
};

struct RejectedRecord {
  std::size_t line = 0;
  std::string reason;
};

struct LoadReport {
  std::size_t records_read = 0;
  std::size_t vertices_upserted = 0;
  std::size_t edges_inserted = 0;
  std::vector<RejectedRecord> rejected;

  std::size_t applied() const { return records_read - rejected.size(); }
  LoadReport& operator+=(const LoadReport& other);
};

class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Parses "TO VERTEX Order VALUES($"order_id", "order_date")" and the
/// EDGE form. Throws std::invalid_argument on bad syntax.
MapStatement parse_map_statement(std::string_view text);

/// Statements may be given as GSQL-style strings or as
/// {"to_vertex"|"to_edge": name, "values": [...]} objects.
LoadingJob loading_job_from_json(const nlohmann::json& j);
nlohmann::json to_json(const LoadingJob& job);

/// Throws SchemaError when a statement names an unregistered type, has the
/// wrong arity, or uses a reference the source format cannot resolve.
void check_job(const PropertyGraph& g, const LoadingJob& job);

/// Applies every well-formed record; malformed ones are reported, never fatal.
/// A record is applied atomically: all of its statements or none.
LoadReport run_loading_job(PropertyGraph& g, const LoadingJob& job, std::istream& source);

/// Opens the file and runs the job. Throws IoError when unreadable.
LoadReport run_loading_job(PropertyGraph& g, const LoadingJob& job,
                           const std::filesystem::path& path);

}  // namespace fraudcc
