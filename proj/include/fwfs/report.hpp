#pragma once

// Verdicts, witnesses and enumeration budgets shared by every checker.

#include <chrono>
#include <cstdint>
#include <deque>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <json.hpp>

namespace fwfs {

using Json = nlohmann::ordered_json;

/// Raised for malformed input and violated preconditions. Checkers never
/// throw for a failed equation; they record it in a Report instead.
class Error : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

enum class Status { ok, violation, inconclusive };

inline std::string_view to_string(Status s)
{
  switch (s) {
  case Status::ok: return "ok";
  case Status::violation: return "violation";
  case Status::inconclusive: return "inconclusive";
  }
  return "?";
}

inline constexpr std::size_t kMaxWitnesses = 16;

struct Check {
  std::string name;
  Status status = Status::ok;
  std::uint64_t cases_examined = 0;
  std::uint64_t violations = 0;
  std::vector<Json> witnesses;
  std::string note;

  void fail(Json witness)
  {
    status = Status::violation;
    ++violations;
    if (witnesses.size() < kMaxWitnesses)
      witnesses.push_back(std::move(witness));
  }

  // A violation already found stays a violation.
  void give_up(std::string why)
  {
    if (status == Status::ok)
      status = Status::inconclusive;
    if (note.empty())
      note = std::move(why);
  }

  bool ok() const { return status == Status::ok; }
};

struct Report {
  std::deque<Check> checks;
  std::uint64_t budget_used = 0;

  Check& add(std::string name)
  {
    Check c;
    c.name = std::move(name);
    checks.push_back(std::move(c));
    return checks.back();
  }

  Status status() const
  {
    bool inconclusive = false;
    for (const auto& c : checks) {
      if (c.status == Status::violation)
        return Status::violation;
      if (c.status == Status::inconclusive)
        inconclusive = true;
    }
    return inconclusive ? Status::inconclusive : Status::ok;
  }

  bool ok() const { return status() == Status::ok; }

  void absorb(Report other, std::string_view prefix = {})
  {
    for (auto& c : other.checks) {
      if (!prefix.empty())
        c.name = std::string(prefix) + "/" + c.name;
      checks.push_back(std::move(c));
    }
    budget_used += other.budget_used;
  }

  const Check* find(std::string_view name) const
  {
    for (const auto& c : checks)
      if (c.name == name)
        return &c;
    return nullptr;
  }

  std::uint64_t total_violations() const
  {
    std::uint64_t n = 0;
    for (const auto& c : checks)
      n += c.violations;
    return n;
  }

  Json to_json() const
  {
    Json out;
    out["status"] = std::string(to_string(status()));
    Json arr = Json::array();
    for (const auto& c : checks) {
      Json j;
      j["name"] = c.name;
      j["status"] = std::string(to_string(c.status));
      j["cases_examined"] = c.cases_examined;
      j["violations"] = c.violations;
      j["witnesses"] = Json(c.witnesses);
      if (!c.note.empty())
        j["note"] = c.note;
      arr.push_back(std::move(j));
    }
    out["checks"] = std::move(arr);
    out["budget_used"] = budget_used;
    return out;
  }
};

inline int exit_code(Status s)
{
  switch (s) {
  case Status::ok: return 0;
  case Status::violation: return 1;
  case Status::inconclusive: return 2;
  }
  return 2;
}

struct Budget {
  std::uint64_t max_candidates = 1'000'000;
  double max_seconds = 60.0;
};

/// Counts enumerated candidates against a Budget and watches the clock.
/// Exhaustion is sticky: once either limit trips, every later call fails.
class BudgetTracker {
public:
  explicit BudgetTracker(Budget budget = {})
      : budget_(budget), start_(std::chrono::steady_clock::now())
  {
    if (budget_.max_candidates == 0 || !(budget_.max_seconds > 0))
      throw Error("budget limits must be positive");
  }

  bool consume(std::uint64_t n = 1)
  {
    if (exhausted_)
      return false;
    used_ += n;
    if (used_ > budget_.max_candidates) {
      exhausted_ = true;
      reason_ = "candidate budget exhausted";
      return false;
    }
    return tick();
  }

  // Time-only guard for exhaustive loops; reads the clock every 4096 calls.
  bool tick()
  {
    if (exhausted_)
      return false;
    if ((++ticks_ & 0xfffu) == 0) {
      const std::chrono::duration<double> elapsed = std::chrono::steady_clock::now() - start_;
      if (elapsed.count() > budget_.max_seconds) {
        exhausted_ = true;
        reason_ = "time budget exhausted";
        return false;
      }
    }
    return true;
  }

  bool exhausted() const { return exhausted_; }
  const std::string& reason() const { return reason_; }
  std::uint64_t used() const { return used_; }
  const Budget& budget() const { return budget_; }

private:
  Budget budget_;
  std::chrono::steady_clock::time_point start_;
  std::uint64_t used_ = 0;
  std::uint64_t ticks_ = 0;
  bool exhausted_ = false;
  std::string reason_;
};

} // namespace fwfs
