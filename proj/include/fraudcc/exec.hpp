#pragma once

namespace fraudcc {

/// Kernels come in pairs: a serial reference and an OpenMP version that must
/// produce bit-identical results.
enum class Exec { Serial, Parallel };

}  // namespace fraudcc
