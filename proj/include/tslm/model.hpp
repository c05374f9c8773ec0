#pragma once

#include <cstdint>
#include <memory>
#include <stdexcept>
#include <string>
#include <vector>

namespace tslm {

struct GenerateRequest {
  std::string context;
  std::vector<std::string> stop;
  int max_tokens = 0;  // 0 = provider default / unlimited
  double temperature = 0.0;
};

struct Generation {
  std::string text;
  std::uint64_t tokens_generated = 0;
};

struct ModelError : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct UnparseableContext : ModelError {
  explicit UnparseableContext(const std::string& why)
      : ModelError("unparseable context: " + why) {}
};
struct IllegalPathInContext : ModelError {
  explicit IllegalPathInContext(const std::string& why)
      : ModelError("illegal path in context: " + why) {}
};

// Anything that maps a token context to a generated continuation. The stop
// list selects the generation unit: "[EOS]" yields one expansion block, "\n"
// one action line, an empty stop list a full search trace.
class ModelProvider {
 public:
  virtual ~ModelProvider() = default;
  virtual Generation generate(const GenerateRequest& req) = 0;
  virtual std::unique_ptr<ModelProvider> clone_with_seed(std::uint64_t seed) const = 0;
  virtual std::string describe() const = 0;
};

}  // namespace tslm
