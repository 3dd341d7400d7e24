/*
 * Copyright (c) 2026, The sbamc Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#ifndef SBAMC_TYPES_HPP_
#define SBAMC_TYPES_HPP_

#include <bit>
#include <compare>
#include <cstdint>
#include <stdexcept>
#include <string>

namespace sbamc {

/// Agents are indexed 0..n-1 internally. Every user-facing surface (formula
/// syntax, JSON, DOT, text dumps) prints them 1-based.
using Agent = int;

/// Index into the ordered value set of a context. The order of indices is the
/// order used wherever a "least value" is selected.
using Value = int;

/// Interned local state handle; only meaningful relative to the exchange
/// that produced it. Equal ids means structurally equal states.
using StateId = std::uint32_t;

inline constexpr int kMaxAgents = 8;
inline constexpr int kMaxValues = 8;

/// Set of agents as a bitmask.
class AgentSet {
 public:
  constexpr AgentSet() = default;
  constexpr explicit AgentSet(std::uint32_t bits) : bits_(bits) {}

  static constexpr AgentSet all(int n) {
    return AgentSet(n >= 32 ? ~0u : ((1u << n) - 1u));
  }
  static constexpr AgentSet single(Agent i) { return AgentSet(1u << i); }

  constexpr bool contains(Agent i) const { return (bits_ >> i) & 1u; }
  constexpr void insert(Agent i) { bits_ |= (1u << i); }
  constexpr void erase(Agent i) { bits_ &= ~(1u << i); }
  constexpr bool empty() const { return bits_ == 0; }
  constexpr int size() const { return std::popcount(bits_); }
  constexpr std::uint32_t bits() const { return bits_; }
  constexpr bool subset_of(AgentSet other) const {
    return (bits_ & ~other.bits_) == 0;
  }

  constexpr AgentSet operator|(AgentSet o) const { return AgentSet(bits_ | o.bits_); }
  constexpr AgentSet operator&(AgentSet o) const { return AgentSet(bits_ & o.bits_); }
  constexpr AgentSet operator-(AgentSet o) const { return AgentSet(bits_ & ~o.bits_); }
  constexpr AgentSet& operator|=(AgentSet o) {
    bits_ |= o.bits_;
    return *this;
  }
  constexpr auto operator<=>(const AgentSet&) const = default;

  template <class F>
  constexpr void for_each(F&& f) const {
    for (std::uint32_t b = bits_; b != 0; b &= b - 1) f(std::countr_zero(b));
  }

  /// "{1,3}" with 1-based agent numbers.
  std::string to_string() const;

 private:
  std::uint32_t bits_ = 0;
};

/// noop, or decide(v).
struct Action {
  static constexpr int kNoop = -1;
  int value = kNoop;

  static constexpr Action noop() { return Action{}; }
  static constexpr Action decide(Value v) { return Action{v}; }
  constexpr bool is_decide() const { return value != kNoop; }
  constexpr auto operator<=>(const Action&) const = default;
};

/// A message payload as interpreted by the producing exchange, or bottom
/// (no message).
struct Message {
  static constexpr std::uint64_t kBottom = ~std::uint64_t{0};
  std::uint64_t payload = kBottom;

  static constexpr Message bottom() { return Message{}; }
  constexpr bool is_bottom() const { return payload == kBottom; }
  constexpr auto operator<=>(const Message&) const = default;
};

/// Raised when a user-supplied description (scenario, formula, protocol
/// name) is malformed.
class SchemaError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Raised when a built system violates a structural invariant, e.g. a
/// semantic fault outside the adversary's commitment.
class IntegrityError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Raised when a protocol table has no entry for a reachable state, or a
/// knowledge-based construction hits a locality violation.
class ConstructionError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

inline std::uint64_t hash_mix(std::uint64_t h, std::uint64_t v) {
  v *= 0x9E3779B97F4A7C15ull;
  v ^= v >> 32;
  h ^= v + 0x9E3779B97F4A7C15ull + (h << 6) + (h >> 2);
  return h;
}

}  // namespace sbamc

#endif  // SBAMC_TYPES_HPP_
