#include "deltamsg/qa/embedding.hpp"

#include <cmath>
#include <numbers>
#include <random>

#include "deltamsg/hash.hpp"

namespace deltamsg::qa {

namespace {

constexpr std::size_t kCacheLimit = 4096;

double unit_open(std::mt19937_64& gen) {
  return (static_cast<double>(gen() >> 11) + 0.5) * 0x1.0p-53;
}

}  // namespace

Vector HashedTokenEmbedder::token_vector(const std::string& token) const {
  {
    std::lock_guard lock(mu_);
    if (auto it = cache_.find(token); it != cache_.end()) return it->second;
  }
  std::mt19937_64 gen(seeded_hash(seed_, token));
  Vector v(kEmbedDim);
  for (Eigen::Index i = 0; i < kEmbedDim; i += 2) {
    const double r = std::sqrt(-2.0 * std::log(unit_open(gen)));
    const double theta = 2.0 * std::numbers::pi * unit_open(gen);
    v(i) = r * std::cos(theta);
    if (i + 1 < kEmbedDim) v(i + 1) = r * std::sin(theta);
  }
  v /= v.norm();
  std::lock_guard lock(mu_);
  if (cache_.size() >= kCacheLimit) cache_.clear();
  cache_.emplace(token, v);
  return v;
}

Vector HashedTokenEmbedder::embed(std::span<const std::string> tokens) const {
  Vector sum = Vector::Zero(kEmbedDim);
  if (tokens.empty()) return sum;
  for (const auto& t : tokens) sum += token_vector(t);
  sum /= static_cast<double>(tokens.size());
  const double n = sum.norm();
  if (n > 0.0) sum /= n;
  return sum;
}

}  // namespace deltamsg::qa
