#include "cvqc/transcript.hpp"

#include "cvqc/errors.hpp"

namespace cvqc {

const char* to_string(Sender s) { return s == Sender::Client ? "client" : "server"; }

void Transcript::append(Sender sender, std::string step, nlohmann::json payload) {
  if (!enabled_) return;
  require(steps_.insert(step).second, "transcript: step '" + step + "' already written");
  messages_.push_back({messages_.size(), sender, std::move(step), std::move(payload)});
}

nlohmann::json to_json(const Message& m) {
  // nlohmann::json objects are std::map backed, so keys serialize sorted.
  return {{"seq", m.seq}, {"sender", to_string(m.sender)}, {"step", m.step}, {"payload", m.payload}};
}

std::string Transcript::to_jsonl() const {
  std::string out;
  for (const auto& m : messages_) {
    out += to_json(m).dump();
    out += '\n';
  }
  return out;
}

}  // namespace cvqc
