#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "bits.hpp"
#include "errors.hpp"

namespace cuckoo_prf {

enum class OracleKind { lazy_random, ggm, pp, adw, levin, involution, composite };

inline std::string_view to_string(OracleKind k) {
  switch (k) {
  case OracleKind::lazy_random: return "lazy-random";
  case OracleKind::ggm: return "ggm";
  case OracleKind::pp: return "pp";
  case OracleKind::adw: return "adw";
  case OracleKind::levin: return "levin";
  case OracleKind::involution: return "involution";
  case OracleKind::composite: return "composite";
  }
  return "unknown";
}

// A keyed function {0,1}^domain_bits -> {0,1}^range_bits. Answers are a
// deterministic function of the key and the query, independent of query
// order. Evaluation is non-const because some kinds materialize lazily; a
// handle must not be queried from two threads at once.
class Oracle {
public:
  Oracle(unsigned domain_bits, unsigned range_bits) : domain_bits_(domain_bits), range_bits_(range_bits) {
    if (domain_bits > kMaxBits || range_bits > kMaxBits)
      throw ConfigError("oracle: domain and range are limited to 64 bits");
  }
  virtual ~Oracle() = default;

  Oracle(const Oracle &) = delete;
  Oracle &operator=(const Oracle &) = delete;

  virtual OracleKind kind() const = 0;

  unsigned domain_bits() const { return domain_bits_; }
  unsigned range_bits() const { return range_bits_; }

  BitString operator()(const BitString &x) {
    if (x.size() != domain_bits_)
      throw UsageError("oracle (" + std::string(to_string(kind())) + "): query has " + std::to_string(x.size()) +
                       " bits, expected " + std::to_string(domain_bits_));
    return evaluate(x);
  }

protected:
  virtual BitString evaluate(const BitString &x) = 0;

private:
  unsigned domain_bits_;
  unsigned range_bits_;
};

using OracleHandle = std::shared_ptr<Oracle>;

struct CallCounter {
  std::uint64_t calls = 0;
};

// Function given by a callable. Used for explicit test functions and for
// wiring ad-hoc compositions.
class FunctionOracle final : public Oracle {
public:
  using Fn = std::function<BitString(const BitString &)>;

  FunctionOracle(unsigned domain_bits, unsigned range_bits, Fn fn, OracleKind kind = OracleKind::composite)
      : Oracle(domain_bits, range_bits), fn_(std::move(fn)), kind_(kind) {}

  OracleKind kind() const override { return kind_; }

protected:
  BitString evaluate(const BitString &x) override {
    BitString y = fn_(x);
    if (y.size() != range_bits())
      throw UsageError("function oracle: answer has wrong length");
    return y;
  }

private:
  Fn fn_;
  OracleKind kind_;
};

// Explicit answer table over the first `answers.size()` points of the
// domain. Querying past the table is a usage error, which makes a table
// oracle a tripwire for query-locality checks.
class TableOracle final : public Oracle {
public:
  TableOracle(unsigned domain_bits, unsigned range_bits, std::vector<BitString> answers)
      : Oracle(domain_bits, range_bits), answers_(std::move(answers)) {
    for (const auto &a : answers_)
      if (a.size() != range_bits)
        throw UsageError("table oracle: answer has wrong length");
  }

  OracleKind kind() const override { return OracleKind::composite; }
  std::size_t size() const { return answers_.size(); }

protected:
  BitString evaluate(const BitString &x) override {
    if (x.value() >= answers_.size())
      throw UsageError("table oracle: query " + x.to_string() + " outside the materialized prefix of size " +
                       std::to_string(answers_.size()));
    return answers_[x.value()];
  }

private:
  std::vector<BitString> answers_;
};

// Forwards to an inner handle, counting calls and optionally observing each
// query. Counters are shared so several wrapped handles can feed one total.
class CountingOracle final : public Oracle {
public:
  using Observer = std::function<void(const BitString &)>;

  CountingOracle(OracleHandle inner, std::shared_ptr<CallCounter> counter, Observer observer = {})
      : Oracle(inner->domain_bits(), inner->range_bits()), inner_(std::move(inner)), counter_(std::move(counter)),
        observer_(std::move(observer)) {}

  OracleKind kind() const override { return inner_->kind(); }
  const OracleHandle &inner() const { return inner_; }

protected:
  BitString evaluate(const BitString &x) override {
    ++counter_->calls;
    if (observer_)
      observer_(x);
    return (*inner_)(x);
  }

private:
  OracleHandle inner_;
  std::shared_ptr<CallCounter> counter_;
  Observer observer_;
};

// Views an oracle with domain s and range r as one with domain
// `domain_bits` ≤ s and range `range_bits`: inputs get leading zeroes,
// outputs are truncated (or zero-extended) to the target width.
class EmbeddedOracle final : public Oracle {
public:
  EmbeddedOracle(OracleHandle inner, unsigned domain_bits, unsigned range_bits)
      : Oracle(domain_bits, range_bits), inner_(std::move(inner)) {
    if (domain_bits > inner_->domain_bits())
      throw ConfigError("embedded oracle: outer domain wider than the inner domain");
  }

  OracleKind kind() const override { return OracleKind::composite; }
  const OracleHandle &inner() const { return inner_; }

protected:
  BitString evaluate(const BitString &x) override {
    return (*inner_)(x.zero_extend(inner_->domain_bits())).resize(range_bits());
  }

private:
  OracleHandle inner_;
};

} // namespace cuckoo_prf
