#include "fraudcc/risk_event.hpp"

#include <chrono>
#include <istream>
#include <optional>
#include <ostream>
#include <thread>

#include <json.hpp>

#include "fraudcc/csv.hpp"

namespace fraudcc {

void ReorderBuffer::pop_one(const std::function<void(RiskEvent&&)>& sink) {
  // priority_queue::top is const; the element is discarded right after.
  RiskEvent e = std::move(const_cast<Pending&>(heap_.top()).event);
  heap_.pop();
  last_emitted_ = e.ts;
  emitted_any_ = true;
  sink(std::move(e));
}

void ReorderBuffer::push(RiskEvent event, const std::function<void(RiskEvent&&)>& sink) {
  if (emitted_any_ && event.ts < last_emitted_) {
    ++dropped_late_;
    return;
  }
  heap_.push(Pending{std::move(event), seq_++});
  while (heap_.size() > capacity_) pop_one(sink);
}

void ReorderBuffer::flush(const std::function<void(RiskEvent&&)>& sink) {
  while (!heap_.empty()) pop_one(sink);
}

namespace {

bool is_core_field(const std::string& name) {
  return name == "ts" || name == "event_type" || name == "account" || name == "ip";
}

std::optional<RiskEvent> event_from_json(const std::string& line) {
  auto obj = nlohmann::json::parse(line, nullptr, false);
  if (obj.is_discarded() || !obj.is_object()) return std::nullopt;
  RiskEvent e;
  auto ts = obj.find("ts");
  if (ts == obj.end()) return std::nullopt;
  if (ts->is_number_integer()) {
    e.ts = Timestamp{ts->get<std::int64_t>()};
  } else if (ts->is_string()) {
    auto parsed = parse_timestamp(ts->get<std::string>());
    if (!parsed) return std::nullopt;
    e.ts = *parsed;
  } else {
    return std::nullopt;
  }
  auto text = [&](const char* name) -> std::optional<std::string> {
    auto it = obj.find(name);
    if (it == obj.end() || !it->is_string()) return std::nullopt;
    return it->get<std::string>();
  };
  auto account = text("account");
  auto ip = text("ip");
  if (!account || account->empty() || !ip || ip->empty()) return std::nullopt;
  e.account = std::move(*account);
  e.ip = std::move(*ip);
  e.event_type = text("event_type").value_or("");
  for (auto it = obj.begin(); it != obj.end(); ++it) {
    if (is_core_field(it.key())) continue;
    e.extra.emplace(it.key(), it->is_string() ? it->get<std::string>() : it->dump());
  }
  return e;
}

std::optional<RiskEvent> event_from_csv(const CsvRecord& rec, const std::vector<std::string>& header) {
  if (!rec.error.empty()) return std::nullopt;
  RiskEvent e;
  bool have_ts = false;
  for (std::size_t i = 0; i < header.size() && i < rec.fields.size(); ++i) {
    const auto& name = header[i];
    const auto& value = rec.fields[i];
    if (name == "ts") {
      auto parsed = parse_timestamp(value);
      if (!parsed) return std::nullopt;
      e.ts = *parsed;
      have_ts = true;
    } else if (name == "event_type") {
      e.event_type = value;
    } else if (name == "account") {
      e.account = value;
    } else if (name == "ip") {
      e.ip = value;
    } else {
      e.extra.emplace(name, value);
    }
  }
  if (!have_ts || e.account.empty() || e.ip.empty()) return std::nullopt;
  return e;
}

}  // namespace

EventParseResult parse_risk_events(std::istream& source, const EventParseOptions& options) {
  EventParseResult result;
  ReorderBuffer buffer(options.reorder_buffer);
  auto sink = [&](RiskEvent&& e) { result.events.push_back(std::move(e)); };

  if (options.format == SourceFormat::Jsonl) {
    std::string line;
    while (std::getline(source, line)) {
      if (!line.empty() && line.back() == '\r') line.pop_back();
      if (line.find_first_not_of(" \t") == std::string::npos) continue;
      ++result.records_read;
      auto e = event_from_json(line);
      if (!e) {
        ++result.skipped;
        continue;
      }
      buffer.push(std::move(*e), sink);
    }
  } else {
    CsvReader reader(source);
    CsvRecord rec;
    std::vector<std::string> header;
    bool first = true;
    while (reader.next(rec)) {
      if (first) {
        header = rec.fields;
        first = false;
        continue;
      }
      ++result.records_read;
      auto e = event_from_csv(rec, header);
      if (!e) {
        ++result.skipped;
        continue;
      }
      buffer.push(std::move(*e), sink);
    }
  }
  buffer.flush(sink);
  result.dropped_late = buffer.dropped_late();
  return result;
}

void write_event_jsonl(std::ostream& out, const RiskEvent& e) {
  nlohmann::ordered_json j;
  j["ts"] = e.ts.seconds;
  j["event_type"] = e.event_type;
  j["account"] = e.account;
  j["ip"] = e.ip;
  for (const auto& [k, v] : e.extra) j[k] = v;
  out << j.dump() << '\n';
}

std::size_t replay_events(std::span<const RiskEvent> events, double events_per_second,
                          const std::function<void(const RiskEvent&)>& sink,
                          std::stop_token stop) {
  using clock = std::chrono::steady_clock;
  const auto start = clock::now();
  std::size_t delivered = 0;
  for (const auto& e : events) {
    if (stop.stop_requested()) break;
    if (events_per_second > 0) {
      const auto due = start + std::chrono::duration_cast<clock::duration>(
                                   std::chrono::duration<double>(delivered / events_per_second));
      std::this_thread::sleep_until(due);
    }
    sink(e);
    ++delivered;
  }
  return delivered;
}

}  // namespace fraudcc
