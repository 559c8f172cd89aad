// Copyright (c) ptai contributors.
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace ptai {

class Error : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

// Structurally invalid input (dangling ids, missing parameters, ...).
class ModelError : public Error {
  public:
    using Error::Error;
};

// Well-formed model outside the class an algorithm accepts.
class RejectedModel : public Error {
  public:
    RejectedModel(const std::string& what, std::vector<std::string> reasons = {})
        : Error(what), reasons_(std::move(reasons)) {}

    [[nodiscard]] const std::vector<std::string>& reasons() const { return reasons_; }

  private:
    std::vector<std::string> reasons_;
};

class ValuationError : public Error {
  public:
    using Error::Error;
};

} // namespace ptai
