#pragma once

#include "rotor/runtime/node.hpp"

#include <json.hpp>

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <memory>
#include <stdexcept>
#include <string>
#include <vector>

namespace rotor::rt {

inline constexpr int kLogSchemaVersion = 1;

class LogError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Shortest decimal text that parses back to the same double.
std::string format_value(double v);
/// Parses the whole of `text` as a double; false on any leftover characters.
bool parse_value(std::string_view text, double& out);

struct TopicManifest {
  std::string name;
  std::string file;
  std::string schema;
  std::vector<Column> columns;  // without the time column
  std::int64_t rows = 0;
};

struct LogManifest {
  int schema_version = kLogSchemaVersion;
  std::uint64_t seed = 0;
  std::string config_hash;
  double base_rate = 0.0;
  std::vector<TopicManifest> topics;
  nlohmann::json extra = nlohmann::json::object();

  const TopicManifest* find(const std::string& name) const;
};

void write_manifest(const std::filesystem::path& dir, const LogManifest& m);
/// Throws LogError when the file is missing, malformed or of another schema version.
LogManifest read_manifest(const std::filesystem::path& dir);

/// Writes one CSV file per topic: header "t,<columns>", one row per message.
class CsvTopicWriter {
 public:
  CsvTopicWriter(const std::filesystem::path& path, const std::vector<Column>& columns);
  void write(const std::vector<double>& row);
  void flush() { out_.flush(); }
  std::int64_t rows() const { return rows_; }

 private:
  std::ofstream out_;
  std::string line_;
  std::int64_t rows_ = 0;
};

struct LoggerOptions {
  std::filesystem::path dir;
  std::uint64_t seed = 0;
  std::string config_hash;
  double base_rate = 0.0;
  nlohmann::json extra = nlohmann::json::object();
};

/// Subscribes to every logged topic at start and writes them out.
class LoggerNode : public Node {
 public:
  explicit LoggerNode(LoggerOptions opt) : opt_(std::move(opt)) {}

  void start(Bus& bus) override;
  void tick(const TickContext& ctx) override;
  void finish() override;

 private:
  void drain();

  struct Channel {
    TopicManifest info;
    std::shared_ptr<RowSink> sink;
    std::unique_ptr<CsvTopicWriter> writer;
  };
  LoggerOptions opt_;
  std::vector<Channel> channels_;
  bool finished_ = false;
};

struct RawTopic {
  std::vector<std::vector<double>> rows;  // including the time column
  bool truncated = false;                 // last line ended without a newline
};

/// Reads and validates one topic file against its manifest entry.
/// Throws LogError on header mismatch, malformed rows (with the line number)
/// or decreasing time.
RawTopic read_topic_rows(const std::filesystem::path& dir, const TopicManifest& topic);

template <Loggable T>
struct TopicLog {
  std::vector<T> messages;
  bool truncated = false;
};

template <Loggable T>
TopicLog<T> read_topic(const std::filesystem::path& dir, const LogManifest& manifest, const std::string& name) {
  const TopicManifest* info = manifest.find(name);
  if (!info) throw LogError("log has no topic '" + name + "'");
  if (info->schema != MessageTraits<T>::schema) {
    throw LogError("topic '" + name + "' has schema '" + info->schema + "', expected '" +
                   MessageTraits<T>::schema + "'");
  }
  const auto& cols = MessageTraits<T>::columns();
  if (info->columns.size() != cols.size()) throw LogError("topic '" + name + "' column count mismatch");
  for (std::size_t i = 0; i < cols.size(); ++i) {
    if (info->columns[i].name != cols[i].name) {
      throw LogError("topic '" + name + "' column " + std::to_string(i + 1) + " is '" + info->columns[i].name +
                     "', expected '" + cols[i].name + "'");
    }
  }
  RawTopic raw = read_topic_rows(dir, *info);
  TopicLog<T> out;
  out.truncated = raw.truncated;
  out.messages.reserve(raw.rows.size());
  for (const auto& r : raw.rows) out.messages.push_back(MessageTraits<T>::unflatten(r.data()));
  return out;
}

/// FNV-1a 64-bit of a byte string, as 16 hex digits.
std::string fnv1a_hex(std::string_view bytes);

}  // namespace rotor::rt
