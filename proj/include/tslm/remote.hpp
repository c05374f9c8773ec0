#pragma once

#include <string>

#include "tslm/model.hpp"

namespace tslm {

struct HttpError : ModelError {
  HttpError(int status, const std::string& body)
      : ModelError("http status " + std::to_string(status) + ": " + body),
        status(status) {}
  int status;
};
struct Timeout : ModelError {
  Timeout() : ModelError("remote request timed out") {}
};
struct MalformedResponse : ModelError {
  explicit MalformedResponse(const std::string& why)
      : ModelError("malformed response: " + why) {}
};

struct RemoteConfig {
  std::string endpoint;      // e.g. http://127.0.0.1:8089
  std::string api_key;       // Bearer auth when nonempty
  std::string model_name = "tslm";
  int attempts = 3;          // total tries on transient failures
  int backoff_ms = 250;      // doubles per retry
  int timeout_sec = 30;
  int max_in_flight = 4;
};

// Reads endpoint/key from TSLM_ENDPOINT / TSLM_API_KEY when unset.
RemoteConfig remote_config_from_env(RemoteConfig base = {});

// OpenAI-style completions client. Operates on strings; token usage comes
// from the response's usage field.
class RemoteModel final : public ModelProvider {
 public:
  explicit RemoteModel(RemoteConfig cfg);
  ~RemoteModel() override;

  Generation generate(const GenerateRequest& req) override;
  std::unique_ptr<ModelProvider> clone_with_seed(std::uint64_t seed) const override;
  std::string describe() const override;

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
  RemoteConfig cfg_;
};

}  // namespace tslm
