#ifndef CAVCHAR_VERSION_HPP
#define CAVCHAR_VERSION_HPP

namespace cavchar {

inline constexpr const char* kToolName = "cavchar";
inline constexpr const char* kToolVersion = "1.0.0";

} // namespace cavchar

#endif
