#pragma once

namespace syncorr {

/// Execution policy for the data-parallel kernels (sampling, grid
/// verification, dominance scans). The serial path is the reference
/// implementation; the parallel path must produce bit-identical results.
enum class Exec { serial, parallel };

}  // namespace syncorr
