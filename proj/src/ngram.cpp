#include "tslm/ngram.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <set>

#include <json.hpp>

#include "tslm/rng.hpp"

namespace tslm {

namespace {

constexpr char kHistSep = '\x1f';
constexpr int kDefaultMaxTokens = 256;

std::string join_history(const TokenSeq& tokens, std::size_t begin) {
  std::string out;
  for (std::size_t i = begin; i < tokens.size(); ++i) {
    if (i > begin) out += kHistSep;
    out += tokens[i];
  }
  return out;
}

// FNV-1a, enough to tell corpora apart.
std::string fingerprint_of(const std::vector<TrainingExample>& examples) {
  std::uint64_t h = 1469598103934665603ull;
  auto eat = [&](std::string_view s) {
    for (unsigned char c : s) {
      h ^= c;
      h *= 1099511628211ull;
    }
    h ^= 0xff;
    h *= 1099511628211ull;
  };
  for (const auto& ex : examples) {
    eat(ex.context);
    eat(ex.target);
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

}  // namespace

NGramModel::NGramModel(int order, std::vector<std::string> vocab, double alpha,
                       std::uint64_t seed)
    : NGramModel(order, alpha, std::make_shared<Tables>(),
                 std::make_shared<std::vector<std::string>>(std::move(vocab)),
                 "unfitted", seed) {
  auto tables = std::make_shared<Tables>();
  tables->by_order.resize(static_cast<std::size_t>(order_));
  tables_ = tables;
}

NGramModel::NGramModel(int order, double alpha, std::shared_ptr<const Tables> tables,
                       std::shared_ptr<const std::vector<std::string>> vocab,
                       std::string fingerprint, std::uint64_t seed)
    : order_(order),
      alpha_(alpha),
      tables_(std::move(tables)),
      vocab_(std::move(vocab)),
      fingerprint_(std::move(fingerprint)),
      rng_state_(mix_seed(0x9747ull, seed)) {
  if (order_ < 1) throw std::invalid_argument("order must be >= 1");
}

NGramModel NGramModel::fit(const std::vector<TrainingExample>& examples, int order,
                           double alpha, std::uint64_t seed) {
  if (order < 1) throw std::invalid_argument("order must be >= 1");
  if (examples.empty()) throw EmptyCorpus();

  auto tables = std::make_shared<Tables>();
  tables->by_order.resize(static_cast<std::size_t>(order));
  std::set<std::string> vocab_set;

  for (const TrainingExample& ex : examples) {
    TokenSeq stream = tokenize(ex.context);
    TokenSeq target = tokenize(ex.target);
    stream.insert(stream.end(), target.begin(), target.end());
    for (const std::string& t : stream) vocab_set.insert(t);
    for (std::size_t t = 0; t < stream.size(); ++t) {
      for (int o = 1; o <= order; ++o) {
        std::size_t hist = static_cast<std::size_t>(o - 1);
        if (hist > t) break;
        TokenSeq h(stream.begin() + static_cast<long>(t - hist),
                   stream.begin() + static_cast<long>(t));
        tables->by_order[hist][join_history(h, 0)][stream[t]] += 1;
      }
    }
  }

  auto vocab = std::make_shared<std::vector<std::string>>(vocab_set.begin(),
                                                          vocab_set.end());
  return NGramModel(order, alpha, tables, vocab, fingerprint_of(examples), seed);
}

std::vector<std::pair<std::string, double>> NGramModel::distribution(
    const TokenSeq& history) const {
  const auto& vocab = *vocab_;
  if (vocab.empty()) return {};
  double v = static_cast<double>(vocab.size());
  // Back off to the longest history with observations; the unigram table's
  // empty history is the floor (uniform when unfitted).
  for (int o = order_; o >= 1; --o) {
    std::size_t hist = static_cast<std::size_t>(o - 1);
    if (hist > history.size()) continue;
    std::string key = join_history(history, history.size() - hist);
    const auto& table = tables_->by_order[hist];
    auto it = table.find(key);
    if (it == table.end() && o > 1) continue;
    double total = 0.0;
    if (it != table.end())
      for (const auto& [tok, c] : it->second) total += static_cast<double>(c);
    std::vector<std::pair<std::string, double>> dist;
    dist.reserve(vocab.size());
    double denom = total + alpha_ * v;
    for (const std::string& tok : vocab) {
      double c = 0.0;
      if (it != table.end()) {
        auto jt = it->second.find(tok);
        if (jt != it->second.end()) c = static_cast<double>(jt->second);
      }
      dist.emplace_back(tok, (c + alpha_) / denom);
    }
    return dist;
  }
  return {};
}

Generation NGramModel::generate(const GenerateRequest& req) {
  Rng rng(rng_state_);
  rng_state_ = rng.next();

  TokenSeq window = tokenize(req.context);
  TokenSeq emitted;
  int cap = req.max_tokens > 0 ? req.max_tokens : kDefaultMaxTokens;

  auto hits_stop = [&](const std::string& tok) {
    for (const std::string& s : req.stop)
      if (!s.empty() && (tok == s || (s == "\n" && tok == kNewlineToken))) return true;
    return false;
  };

  while (static_cast<int>(emitted.size()) < cap) {
    std::size_t hist = std::min(window.size(), static_cast<std::size_t>(order_ - 1));
    TokenSeq history(window.end() - static_cast<long>(hist), window.end());
    auto dist = distribution(history);
    if (dist.empty()) break;

    std::string tok;
    if (req.temperature <= 0.0) {
      double best = -1.0;
      for (const auto& [t, p] : dist)
        if (p > best) {
          best = p;
          tok = t;  // ties resolve to the lexicographically first token
        }
    } else {
      double z = 0.0;
      std::vector<double> w(dist.size());
      for (std::size_t i = 0; i < dist.size(); ++i) {
        w[i] = std::pow(dist[i].second, 1.0 / req.temperature);
        z += w[i];
      }
      double u = rng.real() * z;
      tok = dist.back().first;
      for (std::size_t i = 0; i < dist.size(); ++i) {
        u -= w[i];
        if (u <= 0.0) {
          tok = dist[i].first;
          break;
        }
      }
    }

    emitted.push_back(tok);
    window.push_back(tok);
    if (hits_stop(tok)) break;
  }
  std::string text = detokenize(emitted);
  return Generation{text, emitted.size()};
}

std::unique_ptr<ModelProvider> NGramModel::clone_with_seed(std::uint64_t seed) const {
  return std::unique_ptr<ModelProvider>(
      new NGramModel(order_, alpha_, tables_, vocab_, fingerprint_, seed));
}

std::string NGramModel::describe() const {
  return "ngram(order=" + std::to_string(order_) + ",corpus=" + fingerprint_ + ")";
}

void NGramModel::save(const std::string& path) const {
  nlohmann::json j;
  j["order"] = order_;
  j["alpha"] = alpha_;
  j["vocab"] = *vocab_;
  j["fingerprint"] = fingerprint_;
  nlohmann::json counts = nlohmann::json::array();
  for (const auto& table : tables_->by_order) {
    nlohmann::json t = nlohmann::json::object();
    for (const auto& [hist, row] : table) {
      nlohmann::json r = nlohmann::json::object();
      for (const auto& [tok, c] : row) r[tok] = c;
      t[hist] = std::move(r);
    }
    counts.push_back(std::move(t));
  }
  j["counts"] = std::move(counts);
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << j.dump() << "\n";
}

NGramModel NGramModel::load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot read " + path);
  nlohmann::json j;
  in >> j;
  auto tables = std::make_shared<Tables>();
  for (const auto& t : j.at("counts")) {
    std::map<std::string, std::map<std::string, std::uint64_t>> table;
    for (auto it = t.begin(); it != t.end(); ++it) {
      std::map<std::string, std::uint64_t> row;
      for (auto jt = it.value().begin(); jt != it.value().end(); ++jt)
        row[jt.key()] = jt.value().get<std::uint64_t>();
      table[it.key()] = std::move(row);
    }
    tables->by_order.push_back(std::move(table));
  }
  auto vocab = std::make_shared<std::vector<std::string>>(
      j.at("vocab").get<std::vector<std::string>>());
  return NGramModel(j.at("order").get<int>(), j.at("alpha").get<double>(), tables,
                    vocab, j.at("fingerprint").get<std::string>(), 1);
}

}  // namespace tslm
