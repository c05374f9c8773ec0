#include "tslm/remote.hpp"

#include <algorithm>
#include <chrono>
#include <cstdlib>
#include <semaphore>
#include <thread>

#include <httplib.h>
#include <json.hpp>

#include "tslm/tokens.hpp"

namespace tslm {

RemoteConfig remote_config_from_env(RemoteConfig base) {
  if (base.endpoint.empty())
    if (const char* e = std::getenv("TSLM_ENDPOINT")) base.endpoint = e;
  if (base.api_key.empty())
    if (const char* k = std::getenv("TSLM_API_KEY")) base.api_key = k;
  return base;
}

struct RemoteModel::Impl {
  httplib::Client client;
  std::counting_semaphore<64> in_flight;

  Impl(const std::string& endpoint, int timeout_sec, int max_in_flight)
      : client(endpoint), in_flight(std::max(1, max_in_flight)) {
    client.set_connection_timeout(timeout_sec, 0);
    client.set_read_timeout(timeout_sec, 0);
    client.set_write_timeout(timeout_sec, 0);
  }
};

RemoteModel::RemoteModel(RemoteConfig cfg)
    : impl_(std::make_unique<Impl>(cfg.endpoint, cfg.timeout_sec, cfg.max_in_flight)),
      cfg_(std::move(cfg)) {
  if (cfg_.endpoint.empty())
    throw std::invalid_argument("remote endpoint not configured (TSLM_ENDPOINT)");
}

RemoteModel::~RemoteModel() = default;

Generation RemoteModel::generate(const GenerateRequest& req) {
  nlohmann::json body;
  body["model"] = cfg_.model_name;
  body["prompt"] = req.context;
  body["max_tokens"] = req.max_tokens > 0 ? req.max_tokens : 512;
  body["temperature"] = req.temperature;
  body["stop"] = req.stop;
  const std::string payload = body.dump();

  httplib::Headers headers;
  if (!cfg_.api_key.empty())
    headers.emplace("Authorization", "Bearer " + cfg_.api_key);

  int delay_ms = cfg_.backoff_ms;
  bool timed_out = false;
  int last_status = 0;
  std::string last_body;
  for (int attempt = 0; attempt < std::max(1, cfg_.attempts); ++attempt) {
    if (attempt > 0) {
      std::this_thread::sleep_for(std::chrono::milliseconds(delay_ms));
      delay_ms *= 2;
    }
    impl_->in_flight.acquire();
    auto result = impl_->client.Post("/v1/completions", headers, payload,
                                     "application/json");
    impl_->in_flight.release();

    if (!result) {
      timed_out = result.error() == httplib::Error::ConnectionTimeout ||
                  result.error() == httplib::Error::Read ||
                  result.error() == httplib::Error::Write;
      continue;  // transport error: retry
    }
    if (result->status >= 500) {
      last_status = result->status;
      last_body = result->body;
      timed_out = false;
      continue;  // transient server error: retry
    }
    if (result->status != 200) throw HttpError(result->status, result->body);

    nlohmann::json resp;
    try {
      resp = nlohmann::json::parse(result->body);
    } catch (const nlohmann::json::exception& e) {
      throw MalformedResponse(e.what());
    }
    if (!resp.contains("choices") || !resp["choices"].is_array() ||
        resp["choices"].empty() || !resp["choices"][0].contains("text"))
      throw MalformedResponse("missing choices[0].text");

    Generation gen;
    gen.text = resp["choices"][0]["text"].get<std::string>();
    if (resp.contains("usage") && resp["usage"].contains("completion_tokens"))
      gen.tokens_generated = resp["usage"]["completion_tokens"].get<std::uint64_t>();
    else
      gen.tokens_generated = count_tokens(gen.text);

    // Defensive: some servers echo content past the stop sequence.
    for (const std::string& s : req.stop) {
      if (s.empty()) continue;
      auto pos = gen.text.find(s);
      if (pos != std::string::npos) gen.text.erase(pos + s.size());
    }
    return gen;
  }
  if (timed_out) throw Timeout();
  if (last_status != 0) throw HttpError(last_status, last_body);
  throw Timeout();
}

std::unique_ptr<ModelProvider> RemoteModel::clone_with_seed(std::uint64_t) const {
  return std::make_unique<RemoteModel>(cfg_);
}

std::string RemoteModel::describe() const { return "remote(" + cfg_.endpoint + ")"; }

}  // namespace tslm
