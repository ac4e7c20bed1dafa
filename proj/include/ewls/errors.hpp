#pragma once

#include <stdexcept>
#include <string>

namespace ewls {

class DomainError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

class ScheduleInfeasible : public std::runtime_error {
 public:
  ScheduleInfeasible(int commodity, std::string time, const std::string& what)
      : std::runtime_error("commodity " + std::to_string(commodity) + " at t=" + time + ": " + what),
        commodity_(commodity),
        time_(std::move(time)) {}
  int commodity() const { return commodity_; }
  const std::string& time() const { return time_; }

 private:
  int commodity_;
  std::string time_;
};

class MatchingInfeasible : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class ParameterError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

}  // namespace ewls
