// Copyright 2026 The fdos-pon Authors
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace fdos {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A caller violated an operation's precondition.
class PreconditionError : public Error {
 public:
  using Error::Error;
};

// Malformed or inconsistent problem data (empty arc list, bad dimensions).
class InputError : public Error {
 public:
  explicit InputError(const std::string& what, std::vector<int> onus = {})
      : Error(what), onus_(std::move(onus)) {}
  const std::vector<int>& onus() const { return onus_; }

 private:
  std::vector<int> onus_;
};

// Empty feasible slot window: the ONU has to be woken immediately.
class InfeasibleWindow : public Error {
 public:
  InfeasibleWindow(int onu, long long lb, long long ub)
      : Error("infeasible window for ONU " + std::to_string(onu) + ": lb=" + std::to_string(lb) +
              " ub=" + std::to_string(ub)),
        onu_(onu), lb_(lb), ub_(ub) {}
  int onu() const { return onu_; }
  long long lb() const { return lb_; }
  long long ub() const { return ub_; }

 private:
  int onu_;
  long long lb_;
  long long ub_;
};

// A quantity is undefined for the given input (all-zero Jain counts, zero optimum).
class UndefinedInput : public Error {
 public:
  using Error::Error;
};

class BudgetExceeded : public Error {
 public:
  BudgetExceeded(double needed, double budget)
      : Error("enumeration budget exceeded: " + std::to_string(needed) + " > " +
              std::to_string(budget)),
        needed_(needed) {}
  double needed() const { return needed_; }

 private:
  double needed_;
};

class ValidationError : public Error {
 public:
  using Error::Error;
};

class ParseError : public Error {
 public:
  ParseError(const std::string& what, std::string field = {}, int line = 0)
      : Error(what), field_(std::move(field)), line_(line) {}
  const std::string& field() const { return field_; }
  int line() const { return line_; }

 private:
  std::string field_;
  int line_;
};

}  // namespace fdos
