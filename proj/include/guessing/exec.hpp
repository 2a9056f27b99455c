#pragma once

namespace guessing {

/// Execution policy for the enumeration kernels. Both paths return identical
/// values and witnesses; `serial` is the reference used in tests.
enum class Exec { serial, parallel };

}  // namespace guessing
