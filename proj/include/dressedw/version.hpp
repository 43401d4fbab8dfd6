#ifndef DRESSEDW_VERSION_HPP
#define DRESSEDW_VERSION_HPP

namespace dressedw {

inline constexpr const char *kVersion = "0.3.0";

/// Bumped whenever a CSV column or metadata key changes meaning.
inline constexpr int kSchemaVersion = 1;

} // namespace dressedw

#endif // DRESSEDW_VERSION_HPP
