#ifndef METAVIEW_CHECKPOINT_HPP_
#define METAVIEW_CHECKPOINT_HPP_

#include <filesystem>

#include "metaview/optim.hpp"

namespace metaview {

/// Versioned binary parameter container, little-endian:
///   magic "MVCK0001"
///   u64 parameter count
///   per parameter: u32 name length, name bytes, u64 rows, u64 cols,
///                  rows*cols doubles in row-major order
///   u8 optimizer-state flag
///   if set, per parameter: u64 step count, moments m then v as doubles in
///   row-major order (shapes equal the parameter's)
void save_checkpoint(const std::filesystem::path& path, const ParamStore& params,
                     const Adam* optimizer = nullptr);

/// Loads into an existing store; names, order and shapes must match exactly.
void load_checkpoint(const std::filesystem::path& path, ParamStore& params,
                     Adam* optimizer = nullptr);

} // namespace metaview

#endif // METAVIEW_CHECKPOINT_HPP_
