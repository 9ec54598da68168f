#pragma once

#include <stdexcept>
#include <utility>
#include <variant>

namespace ringtoss {

/// Value-or-error result for operations whose failure is an ordinary branch
/// of the algorithm (no IK solution, infeasible throw, planner budget spent).
template <typename T, typename E>
class Outcome {
 public:
  Outcome(T value) : data_(std::in_place_index<0>, std::move(value)) {}  // NOLINT
  Outcome(E error) : data_(std::in_place_index<1>, std::move(error)) {}  // NOLINT

  bool has_value() const noexcept { return data_.index() == 0; }
  explicit operator bool() const noexcept { return has_value(); }

  const T& value() const& {
    check();
    return std::get<0>(data_);
  }
  T& value() & {
    check();
    return std::get<0>(data_);
  }
  T&& value() && {
    check();
    return std::get<0>(std::move(data_));
  }
  const T* operator->() const { return &value(); }
  const T& operator*() const& { return value(); }

  const E& error() const {
    if (has_value()) throw std::logic_error("Outcome holds a value, not an error");
    return std::get<1>(data_);
  }

 private:
  void check() const {
    if (!has_value()) throw std::logic_error("Outcome holds an error, not a value");
  }
  std::variant<T, E> data_;
};

}  // namespace ringtoss
