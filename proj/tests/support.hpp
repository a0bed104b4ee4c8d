#pragma once

#include <optional>

#include "gphi/error.hpp"

/// Code of the gphi::Error thrown by f, or nullopt if nothing was thrown.
template <class F>
std::optional<gphi::ErrorCode> error_code(F&& f) {
  try {
    f();
  } catch (const gphi::Error& e) {
    return e.code();
  }
  return std::nullopt;
}
