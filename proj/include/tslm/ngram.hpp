#pragma once

#include <map>
#include <memory>
#include <string>
#include <vector>

#include "tslm/codec.hpp"
#include "tslm/model.hpp"

namespace tslm {

struct EmptyCorpus : std::runtime_error {
  EmptyCorpus() : std::runtime_error("cannot fit an n-gram model on an empty corpus") {}
};

// Backoff n-gram over the serialization vocabulary with add-alpha smoothing:
// the maximum-likelihood learner standing in for gradient descent. Counting
// (context ++ target) streams is the cross-entropy minimizer for this model
// class.
class NGramModel final : public ModelProvider {
 public:
  // Unfitted model: uniform over `vocab` at every context.
  NGramModel(int order, std::vector<std::string> vocab, double alpha = 0.5,
             std::uint64_t seed = 1);

  static NGramModel fit(const std::vector<TrainingExample>& examples, int order,
                        double alpha = 0.5, std::uint64_t seed = 1);

  Generation generate(const GenerateRequest& req) override;
  std::unique_ptr<ModelProvider> clone_with_seed(std::uint64_t seed) const override;
  std::string describe() const override;

  // Smoothed conditional distribution after backoff; sums to 1.
  std::vector<std::pair<std::string, double>> distribution(
      const TokenSeq& history) const;

  int order() const { return order_; }
  const std::vector<std::string>& vocab() const { return *vocab_; }
  const std::string& corpus_fingerprint() const { return fingerprint_; }

  void save(const std::string& path) const;
  static NGramModel load(const std::string& path);

 private:
  struct Tables {
    // tables[o-1]: joined history of o-1 tokens -> token -> count.
    std::vector<std::map<std::string, std::map<std::string, std::uint64_t>>> by_order;
  };

  NGramModel(int order, double alpha, std::shared_ptr<const Tables> tables,
             std::shared_ptr<const std::vector<std::string>> vocab,
             std::string fingerprint, std::uint64_t seed);

  int order_;
  double alpha_;
  std::shared_ptr<const Tables> tables_;
  std::shared_ptr<const std::vector<std::string>> vocab_;
  std::string fingerprint_;
  std::uint64_t rng_state_;
};

}  // namespace tslm
