#pragma once

#include <cstdint>
#include <string>
#include <unordered_set>
#include <utility>
#include <vector>

#include <json.hpp>

namespace cvqc {

enum class Sender { Client, Server };
const char* to_string(Sender s);

struct Message {
  std::uint64_t seq = 0;
  Sender sender = Sender::Client;
  std::string step;
  nlohmann::json payload;
};

/// Append-only message log. Every step label is written at most once. A
/// disabled transcript records nothing, which keeps large benchmark sessions
/// free of serialization cost.
class Transcript {
 public:
  explicit Transcript(bool enabled = true) : enabled_(enabled) {}

  bool enabled() const { return enabled_; }

  /// Throws ContractError if `step` was already written.
  void append(Sender sender, std::string step, nlohmann::json payload);

  /// Builds the payload only when recording is on.
  template <class MakePayload>
  void record(Sender sender, std::string step, MakePayload&& make) {
    if (enabled_) append(sender, std::move(step), make());
  }

  const std::vector<Message>& messages() const { return messages_; }
  std::size_t size() const { return messages_.size(); }

  /// One JSON object per line with keys in sorted order.
  std::string to_jsonl() const;

 private:
  bool enabled_;
  std::vector<Message> messages_;
  std::unordered_set<std::string> steps_;
};

nlohmann::json to_json(const Message& m);

}  // namespace cvqc
