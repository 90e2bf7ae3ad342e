#pragma once

// Image linking: segment concatenation with fixed-offset operand relocation
// and exact-match extern merging.

#include "mlp/bytecode.hpp"

#include <span>
#include <string>
#include <vector>

namespace mlp::linker {

class LinkError : public std::runtime_error {
public:
  explicit LinkError(std::vector<std::string> messages);
  const std::vector<std::string> &messages() const { return messages_; }

private:
  std::vector<std::string> messages_;
};

/// Every problem link() would reject, one message per problem. `names`
/// labels the images in messages; missing names default to "image #k".
std::vector<std::string> link_check(std::span<const bytecode::BytecodeImage> images,
                                    std::span<const std::string> names = {});

/// Concatenates the images in order. Throws LinkError.
bytecode::BytecodeImage link(std::span<const bytecode::BytecodeImage> images,
                             std::span<const std::string> names = {});

/// Appends `in` to `out`, shifting const, template and code references by
/// the current sizes of `out`'s segments. Extern operands are rewritten
/// through `extern_map` (index in `in` -> index in `out`). `in`'s extern
/// table and predicate table are not copied; returns the code offset at
/// which `in`'s code starts.
std::uint32_t append_relocated(bytecode::BytecodeImage &out, const bytecode::BytecodeImage &in,
                               std::span<const std::uint32_t> extern_map);

} // namespace mlp::linker
