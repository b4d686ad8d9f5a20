#pragma once

#include <string>
#include <vector>

#include <json.hpp>

#include "pispace/seq.hpp"

namespace pispace {

/// Outcome of one finitely-decided check.
///
/// Verified: the property holds exactly at this node.
/// Violated: a hard failure.
/// Unresolved: no failure, but the window budget could not settle it.
/// Breach: the check's precondition does not hold, so nothing was decided.
enum class Status { Verified, Violated, Unresolved, Breach };

const char* to_string(Status s);

struct Finding {
  std::string check;
  FinSeq node;
  Status status = Status::Verified;
  std::string detail;
};

struct Report {
  std::string name;
  std::vector<Finding> findings;

  void add(std::string check, FinSeq node, Status status, std::string detail = {});
  void merge(const Report& other);

  std::size_t count(Status s) const;
  std::size_t hard_violations() const { return count(Status::Violated); }
  /// No violation and no precondition breach.
  bool passed() const { return count(Status::Violated) == 0 && count(Status::Breach) == 0; }

  nlohmann::json to_json() const;
};

}  // namespace pispace
