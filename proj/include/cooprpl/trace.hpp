#pragma once

#include <mutex>
#include <ostream>
#include <string>
#include <string_view>
#include <vector>

namespace cooprpl {

// Receives one JSON object per line: control messages, relay decisions and
// per-packet records.
class TraceSink {
 public:
  virtual ~TraceSink() = default;
  virtual void write(std::string_view json_line) = 0;
};

class StreamTrace final : public TraceSink {
 public:
  explicit StreamTrace(std::ostream& out) : out_(out) {}
  void write(std::string_view json_line) override {
    std::lock_guard lock(mu_);
    out_ << json_line << '\n';
  }

 private:
  std::ostream& out_;
  std::mutex mu_;
};

class MemoryTrace final : public TraceSink {
 public:
  void write(std::string_view json_line) override { lines.emplace_back(json_line); }
  std::vector<std::string> lines;
};

}  // namespace cooprpl
