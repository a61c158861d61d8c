#pragma once

#include "wavecho/error.hpp"

#include <optional>

template <typename F>
std::optional<wavecho::ErrorKind> error_kind(F&& f) {
  try {
    f();
  } catch (const wavecho::Error& e) {
    return e.kind();
  }
  return std::nullopt;
}
