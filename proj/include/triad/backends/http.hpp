#pragma once

#include <httplib.h>
#include <json.hpp>

#include <chrono>
#include <condition_variable>
#include <cstdlib>
#include <mutex>
#include <optional>
#include <string>

#include "triad/backends/prompts.hpp"
#include "triad/backends/task.hpp"
#include "triad/util/strings.hpp"

namespace triad::backends {

// Chat-completions-style HTTP backend. One POST per generation with a JSON
// body {model, messages:[...]}; the reply text is extracted via a
// configurable dotted path so any compatible service works.
struct HttpBackendConfig {
  std::string endpoint;  // e.g. http://host:port/v1/chat/completions
  std::string model;
  std::map<TaskKind, std::string> prompts = default_prompts();
  std::optional<double> temperature;  // unset: service default, still recorded
  std::chrono::milliseconds timeout{30000};
  std::string token_env_var = "TRIAD_API_TOKEN";  // value itself is never logged
  std::string response_path = "choices.0.message.content";
  int max_in_flight = 4;
};

namespace detail {

struct ParsedEndpoint {
  std::string host_port;  // scheme://host[:port]
  std::string path;
};

inline ParsedEndpoint split_endpoint(const std::string& url) {
  auto scheme = url.find("://");
  if (scheme == std::string::npos) throw StructuralError("http backend: bad endpoint " + url);
  auto slash = url.find('/', scheme + 3);
  if (slash == std::string::npos) return {url, "/"};
  return {url.substr(0, slash), url.substr(slash)};
}

inline const nlohmann::json* walk_path(const nlohmann::json& j, const std::string& path) {
  const nlohmann::json* cur = &j;
  std::size_t pos = 0;
  while (pos <= path.size()) {
    std::size_t dot = path.find('.', pos);
    std::string part = path.substr(pos, dot == std::string::npos ? dot : dot - pos);
    if (!part.empty() && part.find_first_not_of("0123456789") == std::string::npos) {
      std::size_t idx = std::stoul(part);
      if (!cur->is_array() || idx >= cur->size()) return nullptr;
      cur = &(*cur)[idx];
    } else {
      if (!cur->is_object() || !cur->contains(part)) return nullptr;
      cur = &(*cur)[part];
    }
    if (dot == std::string::npos) break;
    pos = dot + 1;
  }
  return cur;
}

}  // namespace detail

class HttpBackend : public Backend {
 public:
  explicit HttpBackend(HttpBackendConfig cfg) : cfg_(std::move(cfg)) {
    if (cfg_.endpoint.empty()) throw StructuralError("http backend: endpoint is required");
    if (cfg_.model.empty()) throw StructuralError("http backend: model name is required");
  }

  std::string name() const override { return "http"; }

  std::string generate(const GenerationTask& task, std::uint64_t) override {
    nlohmann::json body;
    body["model"] = cfg_.model;
    if (cfg_.temperature) body["temperature"] = *cfg_.temperature;
    nlohmann::json messages = nlohmann::json::array();
    auto prompt = cfg_.prompts.find(task.kind);
    if (prompt != cfg_.prompts.end())
      messages.push_back({{"role", "system"}, {"content", prompt->second}});
    messages.push_back({{"role", "user"}, {"content", task.context}});
    for (const auto& [output, diagnostics] : task.feedback_history) {
      messages.push_back({{"role", "assistant"}, {"content", output}});
      messages.push_back({{"role", "user"},
                          {"content", "The previous attempt failed to compile:\n" + diagnostics +
                                          "\nPlease fix it and return the corrected version."}});
    }
    body["messages"] = messages;

    auto ep = detail::split_endpoint(cfg_.endpoint);
    httplib::Client client(ep.host_port);
    client.set_connection_timeout(std::chrono::duration_cast<std::chrono::seconds>(cfg_.timeout));
    client.set_read_timeout(std::chrono::duration_cast<std::chrono::seconds>(cfg_.timeout));
    httplib::Headers headers;
    if (const char* token = std::getenv(cfg_.token_env_var.c_str()))
      headers.emplace("Authorization", std::string("Bearer ") + token);

    std::unique_lock<std::mutex> gate(mutex_);
    cv_.wait(gate, [&] { return in_flight_ < cfg_.max_in_flight; });
    ++in_flight_;
    gate.unlock();
    auto res = client.Post(ep.path, headers, body.dump(), "application/json");
    gate.lock();
    --in_flight_;
    cv_.notify_one();
    gate.unlock();

    if (!res)
      throw BackendFailure("http backend: request failed (" +
                               httplib::to_string(res.error()) + ")",
                           /*retryable=*/true);
    if (res->status < 200 || res->status >= 300)
      throw BackendFailure("http backend: status " + std::to_string(res->status),
                           /*retryable=*/res->status >= 500 || res->status == 429);
    nlohmann::json reply;
    try {
      reply = nlohmann::json::parse(res->body);
    } catch (const std::exception& e) {
      throw BackendFailure(std::string("http backend: bad JSON reply: ") + e.what());
    }
    const nlohmann::json* text = detail::walk_path(reply, cfg_.response_path);
    if (!text || !text->is_string())
      throw BackendFailure("http backend: response path " + cfg_.response_path + " missing");
    return text->get<std::string>();
  }

  const HttpBackendConfig& config() const { return cfg_; }

 private:
  HttpBackendConfig cfg_;
  std::mutex mutex_;
  std::condition_variable cv_;
  int in_flight_ = 0;
};

}  // namespace triad::backends
