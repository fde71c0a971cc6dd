#pragma once

#include <cstdint>
#include <mutex>
#include <span>
#include <string>
#include <unordered_map>

#include "deltamsg/qa/tensor.hpp"

namespace deltamsg::qa {

inline constexpr Eigen::Index kEmbedDim = 768;

class TokenEmbedder {
 public:
  virtual ~TokenEmbedder() = default;
  // kEmbedDim values; the zero vector for an empty list.
  virtual Vector embed(std::span<const std::string> tokens) const = 0;
};

// Each token maps to a unit Gaussian direction drawn from a generator seeded
// by hash(seed, token); a sequence is the L2-normalized mean of its tokens.
class HashedTokenEmbedder final : public TokenEmbedder {
 public:
  explicit HashedTokenEmbedder(std::uint64_t seed = 0) : seed_(seed) {}
  Vector embed(std::span<const std::string> tokens) const override;
  Vector token_vector(const std::string& token) const;
  std::uint64_t seed() const noexcept { return seed_; }

 private:
  std::uint64_t seed_;
  mutable std::mutex mu_;
  mutable std::unordered_map<std::string, Vector> cache_;
};

}  // namespace deltamsg::qa
