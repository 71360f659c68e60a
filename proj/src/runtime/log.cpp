#include "rotor/runtime/log.hpp"

#include <charconv>
#include <cstdio>
#include <sstream>

namespace rotor::rt {

namespace fs = std::filesystem;

std::string format_value(double v) {
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

bool parse_value(std::string_view text, double& out) {
  if (text.empty()) return false;
  const char* begin = text.data();
  const char* end = begin + text.size();
  if (*begin == '+') ++begin;
  const auto res = std::from_chars(begin, end, out);
  return res.ec == std::errc() && res.ptr == end;
}

std::string fnv1a_hex(std::string_view bytes) {
  std::uint64_t h = 1469598103934665603ull;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 1099511628211ull;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

const TopicManifest* LogManifest::find(const std::string& name) const {
  for (const auto& t : topics)
    if (t.name == name) return &t;
  return nullptr;
}

void write_manifest(const fs::path& dir, const LogManifest& m) {
  nlohmann::json j;
  j["schema_version"] = m.schema_version;
  j["seed"] = m.seed;
  j["config_hash"] = m.config_hash;
  j["base_rate"] = m.base_rate;
  j["time_column"] = {{"name", "t"}, {"unit", "s"}};
  j["topics"] = nlohmann::json::array();
  for (const auto& t : m.topics) {
    nlohmann::json cols = nlohmann::json::array();
    for (const auto& c : t.columns) cols.push_back({{"name", c.name}, {"unit", c.unit}});
    j["topics"].push_back({{"name", t.name}, {"file", t.file}, {"schema", t.schema}, {"columns", cols}, {"rows", t.rows}});
  }
  j["extra"] = m.extra;
  std::ofstream out(dir / "manifest.json");
  if (!out) throw LogError("cannot write " + (dir / "manifest.json").string());
  out << j.dump(2) << '\n';
}

LogManifest read_manifest(const fs::path& dir) {
  const fs::path path = dir / "manifest.json";
  std::ifstream in(path);
  if (!in) throw LogError("cannot open " + path.string());
  LogManifest m;
  try {
    const nlohmann::json j = nlohmann::json::parse(in);
    m.schema_version = j.at("schema_version").get<int>();
    if (m.schema_version != kLogSchemaVersion) {
      throw LogError("log schema version " + std::to_string(m.schema_version) + " is not supported (expected " +
                     std::to_string(kLogSchemaVersion) + ")");
    }
    m.seed = j.at("seed").get<std::uint64_t>();
    m.config_hash = j.at("config_hash").get<std::string>();
    m.base_rate = j.at("base_rate").get<double>();
    for (const auto& t : j.at("topics")) {
      TopicManifest tm;
      tm.name = t.at("name").get<std::string>();
      tm.file = t.at("file").get<std::string>();
      tm.schema = t.at("schema").get<std::string>();
      tm.rows = t.at("rows").get<std::int64_t>();
      for (const auto& c : t.at("columns")) tm.columns.push_back({c.at("name"), c.at("unit")});
      m.topics.push_back(std::move(tm));
    }
    if (j.contains("extra")) m.extra = j.at("extra");
  } catch (const nlohmann::json::exception& e) {
    throw LogError(path.string() + ": " + e.what());
  }
  return m;
}

CsvTopicWriter::CsvTopicWriter(const fs::path& path, const std::vector<Column>& columns) : out_(path) {
  if (!out_) throw LogError("cannot write " + path.string());
  out_ << 't';
  for (const auto& c : columns) out_ << ',' << c.name;
  out_ << '\n';
}

void CsvTopicWriter::write(const std::vector<double>& row) {
  line_.clear();
  for (std::size_t i = 0; i < row.size(); ++i) {
    if (i) line_ += ',';
    line_ += format_value(row[i]);
  }
  line_ += '\n';
  out_ << line_;
  ++rows_;
}

void LoggerNode::start(Bus& bus) {
  fs::create_directories(opt_.dir);
  for (TopicBase* t : bus.topics()) {
    if (!t->logged()) continue;
    Channel c;
    c.info = {t->name(), t->name() + ".csv", t->schema(), t->columns(), 0};
    c.sink = t->attach_sink();
    c.writer = std::make_unique<CsvTopicWriter>(opt_.dir / c.info.file, c.info.columns);
    channels_.push_back(std::move(c));
  }
  LogManifest m{kLogSchemaVersion, opt_.seed, opt_.config_hash, opt_.base_rate, {}, opt_.extra};
  for (const auto& c : channels_) m.topics.push_back(c.info);
  write_manifest(opt_.dir, m);
}

void LoggerNode::drain() {
  for (auto& c : channels_) {
    while (!c.sink->rows.empty()) {
      c.writer->write(c.sink->rows.front());
      c.sink->rows.pop_front();
    }
  }
}

void LoggerNode::tick(const TickContext&) { drain(); }

void LoggerNode::finish() {
  if (finished_) return;
  finished_ = true;
  drain();
  LogManifest m{kLogSchemaVersion, opt_.seed, opt_.config_hash, opt_.base_rate, {}, opt_.extra};
  for (auto& c : channels_) {
    c.writer->flush();
    c.info.rows = c.writer->rows();
    m.topics.push_back(c.info);
  }
  write_manifest(opt_.dir, m);
}

std::shared_ptr<RowSink> TopicBase::attach_sink() {
  auto s = std::make_shared<RowSink>();
  sinks_.push_back(s);
  return s;
}

RawTopic read_topic_rows(const fs::path& dir, const TopicManifest& topic) {
  const fs::path path = dir / topic.file;
  std::ifstream in(path, std::ios::binary);
  if (!in) throw LogError("cannot open " + path.string());
  std::stringstream ss;
  ss << in.rdbuf();
  const std::string text = ss.str();

  std::string expected = "t";
  for (const auto& c : topic.columns) expected += "," + c.name;
  const std::size_t fields = topic.columns.size() + 1;

  RawTopic out;
  std::size_t pos = 0;
  std::int64_t line_no = 0;
  const auto where = [&] { return topic.file + " line " + std::to_string(line_no); };
  while (pos < text.size()) {
    const std::size_t nl = text.find('\n', pos);
    ++line_no;
    if (nl == std::string::npos) {
      // A final line without its newline is a write cut short.
      if (line_no == 1) throw LogError(where() + ": incomplete header");
      out.truncated = true;
      break;
    }
    std::string_view line(text.data() + pos, nl - pos);
    pos = nl + 1;
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (line_no == 1) {
      if (line != expected) throw LogError(where() + ": header does not match the manifest columns");
      continue;
    }
    std::vector<double> row;
    row.reserve(fields);
    std::size_t start = 0;
    for (;;) {
      const std::size_t comma = line.find(',', start);
      const std::string_view cell = line.substr(start, comma == std::string_view::npos ? line.npos : comma - start);
      double v = 0.0;
      if (!parse_value(cell, v)) {
        throw LogError(where() + ": cannot parse field " + std::to_string(row.size() + 1) + " ('" +
                       std::string(cell) + "')");
      }
      row.push_back(v);
      if (comma == std::string_view::npos) break;
      start = comma + 1;
    }
    if (row.size() != fields) {
      throw LogError(where() + ": expected " + std::to_string(fields) + " fields, found " + std::to_string(row.size()));
    }
    if (!out.rows.empty() && row[0] < out.rows.back()[0]) throw LogError(where() + ": time goes backwards");
    out.rows.push_back(std::move(row));
  }
  if (line_no == 0) throw LogError(topic.file + ": empty file");
  return out;
}

}  // namespace rotor::rt
